#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "pomset/errors.hpp"
#include "pomset/partial_string.hpp"
#include "pomset/refine.hpp"

namespace pomset {

namespace detail {

// Isomorphism-invariant fingerprint: sorted (label, down-set size, up-set
// size, height) profile of the events. Equal keys are necessary, not
// sufficient, for isomorphism.
inline std::string iso_key(const PartialString& p) {
  const std::size_t n = p.size();
  std::vector<std::size_t> height(n, 0);
  for (Event e : p.topological_order())
    for (Event f = 0; f < n; ++f)
      if (p.less(e, f)) height[f] = std::max(height[f], height[e] + 1);
  std::vector<std::tuple<Label, std::size_t, std::size_t, std::size_t>> profile;
  profile.reserve(n);
  for (Event e = 0; e < n; ++e) profile.emplace_back(p.label(e), p.down_size(e), p.up_size(e), height[e]);
  std::sort(profile.begin(), profile.end());
  std::string key = std::to_string(n) + '/' + std::to_string(p.strict_pair_count());
  for (const auto& [l, d, u, h] : profile) {
    key += '|';
    key += std::to_string(l.value().index());
    key += l.to_string();
    key += ':' + std::to_string(d) + ',' + std::to_string(u) + ',' + std::to_string(h);
  }
  return key;
}

}  // namespace detail

// A set of partial strings kept up to isomorphism.
class IsoSet {
 public:
  // Adds p unless an isomorphic string is present; returns whether it was added.
  bool insert(const PartialString& p) {
    auto& bucket = buckets_[detail::iso_key(p)];
    for (std::size_t idx : bucket)
      if (is_isomorphic(items_[idx], p)) return false;
    bucket.push_back(items_.size());
    items_.push_back(p);
    return true;
  }

  bool contains(const PartialString& p) const {
    auto it = buckets_.find(detail::iso_key(p));
    if (it == buckets_.end()) return false;
    return std::any_of(it->second.begin(), it->second.end(),
                       [&](std::size_t idx) { return is_isomorphic(items_[idx], p); });
  }

  std::size_t size() const noexcept { return items_.size(); }
  const std::vector<PartialString>& items() const noexcept { return items_; }

 private:
  std::map<std::string, std::vector<std::size_t>> buckets_;
  std::vector<PartialString> items_;
};

// A downward-closed set of finite partial strings, represented by its
// maximal generators (pairwise non-isomorphic, none refining another).
// 0 has no generators; 1 is generated by the empty string.
class Program {
 public:
  Program() = default;

  explicit Program(std::vector<PartialString> generators) : generators_(normalize(std::move(generators))) {}

  static Program zero() { return Program(); }
  static Program one() { return Program({PartialString()}); }

  const std::vector<PartialString>& generators() const noexcept { return generators_; }
  bool is_zero() const noexcept { return generators_.empty(); }

  bool contains_empty_string() const {
    return std::any_of(generators_.begin(), generators_.end(), [](const auto& g) { return g.empty(); });
  }

  // s ∈ ↓generators
  bool contains(const PartialString& s) const {
    return std::any_of(generators_.begin(), generators_.end(), [&](const auto& g) { return refines(s, g); });
  }

  std::size_t max_generator_size() const {
    std::size_t m = 0;
    for (const auto& g : generators_) m = std::max(m, g.size());
    return m;
  }

  std::size_t min_generator_size() const {
    if (generators_.empty()) return 0;
    std::size_t m = generators_.front().size();
    for (const auto& g : generators_) m = std::min(m, g.size());
    return m;
  }

 private:
  static std::vector<PartialString> normalize(std::vector<PartialString> in) {
    IsoSet unique;
    for (const auto& g : in) unique.insert(g);
    const auto& items = unique.items();
    std::vector<PartialString> out;
    for (std::size_t i = 0; i < items.size(); ++i) {
      bool subsumed = false;
      for (std::size_t j = 0; j < items.size() && !subsumed; ++j)
        if (i != j && items[i].size() == items[j].size() &&
            items[i].strict_pair_count() > items[j].strict_pair_count() && refines(items[i], items[j]))
          subsumed = true;
      if (!subsumed) out.push_back(items[i]);
    }
    return out;
  }

  std::vector<PartialString> generators_;
};

// ↓{x ⋈ y | x ∈ X, y ∈ Y}, computed on generators only (⋈ is monotone in ⊑).
inline Program prog_compose(const Program& x, const Program& y, Join join) {
  std::vector<PartialString> gens;
  gens.reserve(x.generators().size() * y.generators().size());
  for (const auto& a : x.generators())
    for (const auto& b : y.generators()) gens.push_back(compose(a, b, join));
  return Program(std::move(gens));
}

inline Program prog_union(const Program& x, const Program& y) {
  std::vector<PartialString> gens = x.generators();
  gens.insert(gens.end(), y.generators().begin(), y.generators().end());
  return Program(std::move(gens));
}

// ↓X ⊆ ↓Y
inline bool prog_refines(const Program& x, const Program& y) {
  return std::all_of(x.generators().begin(), x.generators().end(), [&](const auto& g) { return y.contains(g); });
}

inline bool prog_equal(const Program& x, const Program& y) { return prog_refines(x, y) && prog_refines(y, x); }

// Every string of ↓X up to isomorphism, obtained by adding one ordering
// constraint at a time to each generator.
inline std::vector<PartialString> enumerate_closure(const Program& x, std::size_t max_events) {
  for (const auto& g : x.generators())
    if (g.size() > max_events)
      throw BoundExceeded("generator with " + std::to_string(g.size()) + " events exceeds bound " +
                          std::to_string(max_events));
  IsoSet seen;
  std::deque<PartialString> work;
  for (const auto& g : x.generators())
    if (seen.insert(g)) work.push_back(g);
  while (!work.empty()) {
    PartialString p = std::move(work.front());
    work.pop_front();
    for (Event a = 0; a < p.size(); ++a)
      for (Event b = 0; b < p.size(); ++b) {
        if (a == b || p.comparable(a, b)) continue;
        PartialString q = p.with_edge(a, b);
        if (seen.insert(q)) work.push_back(std::move(q));
      }
  }
  return seen.items();
}

}  // namespace pomset
