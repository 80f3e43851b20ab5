#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "pomset/errors.hpp"
#include "pomset/label.hpp"

namespace pomset {

// Events are indices local to one partial string.
using Event = std::size_t;
using Edge = std::pair<Event, Event>;

// Square bit matrix, one row of 64-bit words per event.
class BitMatrix {
 public:
  BitMatrix() = default;
  explicit BitMatrix(std::size_t n) : n_(n), words_((n + 63) / 64), bits_(n * words_, 0) {}

  std::size_t size() const noexcept { return n_; }

  bool test(std::size_t i, std::size_t j) const noexcept {
    return (bits_[i * words_ + j / 64] >> (j % 64)) & 1u;
  }
  void set(std::size_t i, std::size_t j) noexcept { bits_[i * words_ + j / 64] |= std::uint64_t{1} << (j % 64); }

  // row(i) |= row(j)
  void merge_row(std::size_t i, std::size_t j) noexcept {
    for (std::size_t w = 0; w < words_; ++w) bits_[i * words_ + w] |= bits_[j * words_ + w];
  }

  std::size_t row_count(std::size_t i) const noexcept {
    std::size_t c = 0;
    for (std::size_t w = 0; w < words_; ++w) c += static_cast<std::size_t>(std::popcount(bits_[i * words_ + w]));
    return c;
  }

  friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
};

// A finite labelled partial order <E, alpha, ⪯>. The order is given by an
// acyclic edge set; its reflexive-transitive closure is computed on
// construction and is what `leq` answers. Immutable.
class PartialString {
 public:
  // The empty partial string.
  PartialString() = default;

  PartialString(std::vector<Label> labels, std::vector<Edge> edges, std::vector<std::string> names = {})
      : labels_(std::move(labels)), names_(std::move(names)) {
    const std::size_t n = labels_.size();
    if (names_.empty()) {
      names_.reserve(n);
      for (std::size_t i = 0; i < n; ++i) names_.push_back("e" + std::to_string(i));
    } else if (names_.size() != n) {
      throw InvalidArgument("name count does not match event count");
    }
    std::set<Edge> unique;
    for (const auto& [a, b] : edges) {
      if (a >= n || b >= n) throw InvalidArgument("edge endpoint outside event set");
      if (a == b) continue;  // reflexive pairs are implicit
      unique.insert({a, b});
    }
    edges_.assign(unique.begin(), unique.end());
    build_closure();
  }

  static PartialString singleton(Label l) { return PartialString({std::move(l)}, {}); }

  static PartialString chain(std::vector<Label> labels) {
    std::vector<Edge> edges;
    for (std::size_t i = 1; i < labels.size(); ++i) edges.emplace_back(i - 1, i);
    return PartialString(std::move(labels), std::move(edges));
  }

  static PartialString antichain(std::vector<Label> labels) { return PartialString(std::move(labels), {}); }

  std::size_t size() const noexcept { return labels_.size(); }
  bool empty() const noexcept { return labels_.empty(); }

  const Label& label(Event e) const { return labels_.at(e); }
  const std::vector<Label>& labels() const noexcept { return labels_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::string& name(Event e) const { return names_.at(e); }
  const std::vector<std::string>& names() const noexcept { return names_; }

  std::optional<Event> find(const std::string& name) const {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) return std::nullopt;
    return static_cast<Event>(it - names_.begin());
  }

  // a ⪯ b
  bool leq(Event a, Event b) const noexcept { return closure_.test(a, b); }
  // a ≺ b
  bool less(Event a, Event b) const noexcept { return a != b && closure_.test(a, b); }
  bool comparable(Event a, Event b) const noexcept { return leq(a, b) || leq(b, a); }

  // |{b | e ⪯ b}| and |{a | a ⪯ e}|, both counting e itself.
  std::size_t up_size(Event e) const noexcept { return up_[e]; }
  std::size_t down_size(Event e) const noexcept { return down_[e]; }

  // Number of pairs (a, b) with a ≺ b.
  std::size_t strict_pair_count() const noexcept { return strict_pairs_; }

  bool is_total() const noexcept {
    const std::size_t n = size();
    return strict_pairs_ == n * (n == 0 ? 0 : n - 1) / 2;
  }

  const std::vector<Event>& topological_order() const noexcept { return topo_; }

  // Transitive reduction of ⪯ (the Hasse diagram).
  std::vector<Edge> covering_edges() const {
    std::vector<Edge> out;
    const std::size_t n = size();
    for (Event a = 0; a < n; ++a)
      for (Event b = 0; b < n; ++b) {
        if (!less(a, b)) continue;
        bool covered = true;
        for (Event c = 0; c < n && covered; ++c)
          if (less(a, c) && less(c, b)) covered = false;
        if (covered) out.emplace_back(a, b);
      }
    return out;
  }

  // Same events and labels with one additional ordering constraint a ⪯ b.
  PartialString with_edge(Event a, Event b) const {
    auto edges = edges_;
    edges.emplace_back(a, b);
    return PartialString(labels_, std::move(edges), names_);
  }

  // Renames events only; order and labels are untouched.
  PartialString with_names(std::vector<std::string> names) const {
    return PartialString(labels_, edges_, std::move(names));
  }

  // Component-wise equality (not isomorphism).
  friend bool operator==(const PartialString& a, const PartialString& b) {
    return a.labels_ == b.labels_ && a.closure_ == b.closure_;
  }

 private:
  void build_closure() {
    const std::size_t n = size();
    std::vector<std::vector<Event>> succ(n);
    std::vector<std::size_t> indegree(n, 0);
    for (const auto& [a, b] : edges_) {
      succ[a].push_back(b);
      ++indegree[b];
    }
    topo_.clear();
    topo_.reserve(n);
    std::vector<Event> ready;
    for (Event e = n; e-- > 0;)
      if (indegree[e] == 0) ready.push_back(e);
    while (!ready.empty()) {
      Event e = ready.back();
      ready.pop_back();
      topo_.push_back(e);
      for (Event s : succ[e])
        if (--indegree[s] == 0) ready.push_back(s);
    }
    if (topo_.size() != n) throw InvalidArgument("order edges contain a cycle");

    closure_ = BitMatrix(n);
    for (auto it = topo_.rbegin(); it != topo_.rend(); ++it) {
      closure_.set(*it, *it);
      for (Event s : succ[*it]) closure_.merge_row(*it, s);
    }
    up_.assign(n, 0);
    down_.assign(n, 0);
    strict_pairs_ = 0;
    for (Event a = 0; a < n; ++a) {
      up_[a] = closure_.row_count(a);
      strict_pairs_ += up_[a] - 1;
      for (Event b = 0; b < n; ++b)
        if (closure_.test(a, b)) ++down_[b];
    }
  }

  std::vector<Label> labels_;
  std::vector<std::string> names_;
  std::vector<Edge> edges_;
  BitMatrix closure_;
  std::vector<Event> topo_;
  std::vector<std::size_t> up_;
  std::vector<std::size_t> down_;
  std::size_t strict_pairs_ = 0;
};

enum class Join { seq, par };

inline const char* to_string(Join j) { return j == Join::seq ? "seq" : "par"; }

namespace detail {

// Names of x followed by names of y; clashing names on the right get primed.
inline std::vector<std::string> merged_names(const PartialString& x, const PartialString& y) {
  std::vector<std::string> out = x.names();
  std::unordered_set<std::string> taken(out.begin(), out.end());
  for (const auto& n : y.names()) {
    std::string candidate = n;
    while (taken.contains(candidate)) candidate += "'";
    taken.insert(candidate);
    out.push_back(std::move(candidate));
  }
  return out;
}

}  // namespace detail

// Events of y are renumbered after those of x. With `seq`, every event of x
// precedes every event of y.
inline PartialString compose(const PartialString& x, const PartialString& y, Join join) {
  const std::size_t offset = x.size();
  std::vector<Label> labels = x.labels();
  labels.insert(labels.end(), y.labels().begin(), y.labels().end());
  std::vector<Edge> edges = x.edges();
  for (const auto& [a, b] : y.edges()) edges.emplace_back(a + offset, b + offset);
  if (join == Join::seq) {
    // Linking maximal events of x to minimal events of y generates the same closure.
    for (Event a = 0; a < x.size(); ++a) {
      if (x.up_size(a) != 1) continue;
      for (Event b = 0; b < y.size(); ++b)
        if (y.down_size(b) == 1) edges.emplace_back(a, b + offset);
    }
  }
  return PartialString(std::move(labels), std::move(edges), detail::merged_names(x, y));
}

inline PartialString seq_compose(const PartialString& x, const PartialString& y) { return compose(x, y, Join::seq); }
inline PartialString par_compose(const PartialString& x, const PartialString& y) { return compose(x, y, Join::par); }

// x^{0} = ⊥, x^{n+1} = x ⋈ x^{n}
inline PartialString power(const PartialString& x, std::size_t n, Join join) {
  PartialString acc;
  for (std::size_t i = 0; i < n; ++i) acc = compose(x, acc, join);
  return acc;
}

inline std::size_t size(const PartialString& x) noexcept { return x.size(); }

}  // namespace pomset
