#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pomset/partial_string.hpp"
#include "pomset/sat.hpp"

namespace pomset {

// Witness for x ⊑ y: a label-preserving monotone bijection f from the events
// of y onto the events of x. `image[e]` is f(e) for e in E_y.
struct Morphism {
  std::vector<Event> image;

  Event operator()(Event e) const { return image.at(e); }
  std::size_t size() const noexcept { return image.size(); }
  friend bool operator==(const Morphism&, const Morphism&) = default;
};

enum class RefineMethod { backtrack, sat };

// Checks the three defining conditions of a witness f: y -> x.
inline bool is_witness(const PartialString& x, const PartialString& y, const Morphism& f) {
  if (f.size() != y.size() || x.size() != y.size()) return false;
  std::vector<bool> hit(x.size(), false);
  for (Event e = 0; e < y.size(); ++e) {
    Event a = f(e);
    if (a >= x.size() || hit[a]) return false;
    hit[a] = true;
    if (!(y.label(e) == x.label(a))) return false;
  }
  for (Event e = 0; e < y.size(); ++e)
    for (Event e2 = 0; e2 < y.size(); ++e2)
      if (y.leq(e, e2) && !x.leq(f(e), f(e2))) return false;
  return true;
}

namespace detail {

// Labels of both strings interned to small integers.
struct LabelIndex {
  std::vector<int> x, y;
  int count = 0;

  LabelIndex(const PartialString& px, const PartialString& py) {
    std::map<Label, int> ids;
    auto intern = [&](const Label& l) {
      auto [it, fresh] = ids.try_emplace(l, count);
      if (fresh) ++count;
      return it->second;
    };
    for (const auto& l : px.labels()) x.push_back(intern(l));
    for (const auto& l : py.labels()) y.push_back(intern(l));
  }

  bool same_multiset() const {
    if (x.size() != y.size()) return false;
    std::vector<int> hx(count, 0);
    for (int l : x) ++hx[l];
    for (int l : y)
      if (--hx[l] < 0) return false;
    return true;
  }
};

// f maps the down-set of e injectively into the down-set of f(e), and likewise for up-sets.
inline bool degree_compatible(const PartialString& x, Event a, const PartialString& y, Event e) {
  return y.down_size(e) <= x.down_size(a) && y.up_size(e) <= x.up_size(a);
}

// A refined string can only have more ordered pairs than the one it refines.
inline bool quick_reject(const PartialString& x, const PartialString& y, const LabelIndex& labels) {
  return x.size() != y.size() || !labels.same_multiset() || x.strict_pair_count() < y.strict_pair_count();
}

class Backtracker {
 public:
  Backtracker(const PartialString& x, const PartialString& y, const LabelIndex& labels)
      : x_(x), y_(y), labels_(labels), image_(y.size(), 0), used_(x.size(), false) {
    order_ = y.topological_order();
    candidates_.resize(y.size());
    for (Event e = 0; e < y.size(); ++e)
      for (Event a = 0; a < x.size(); ++a)
        if (labels_.y[e] == labels_.x[a] && degree_compatible(x, a, y, e)) candidates_[e].push_back(a);
  }

  std::optional<Morphism> run() {
    for (const auto& c : candidates_)
      if (c.empty()) return std::nullopt;
    if (!extend(0)) return std::nullopt;
    return Morphism{image_};
  }

 private:
  bool extend(std::size_t depth) {
    if (depth == order_.size()) return true;
    const Event e = order_[depth];
    for (Event a : candidates_[e]) {
      if (used_[a]) continue;
      bool ok = true;
      // Earlier events in topological order are never above e.
      for (std::size_t k = 0; k < depth && ok; ++k) {
        const Event p = order_[k];
        if (y_.leq(p, e) && !x_.leq(image_[p], a)) ok = false;
      }
      if (!ok) continue;
      image_[e] = a;
      used_[a] = true;
      if (extend(depth + 1)) return true;
      used_[a] = false;
    }
    return false;
  }

  const PartialString& x_;
  const PartialString& y_;
  const LabelIndex& labels_;
  std::vector<Event> order_;
  std::vector<std::vector<Event>> candidates_;
  std::vector<Event> image_;
  std::vector<bool> used_;
};

}  // namespace detail

// Propositional encoding of x ⊑ y. Variable m(e, a) states f(e) = a for
// e in E_y and a in E_x with equal labels.
struct CnfInstance {
  sat::Cnf cnf;
  // vars[v - 1] = (e, a) for DIMACS variable v.
  std::vector<std::pair<Event, Event>> vars;

  std::size_t num_vars() const noexcept { return vars.size(); }
  std::size_t num_clauses() const noexcept { return cnf.clauses.size(); }

  std::string dimacs() const { return sat::to_dimacs(cnf); }

  // One line per variable: `<index> <y-event> <x-event>`, using event names.
  std::string variable_map(const PartialString& x, const PartialString& y) const {
    std::ostringstream os;
    os << "c var y-event x-event\n";
    for (std::size_t v = 0; v < vars.size(); ++v)
      os << (v + 1) << ' ' << y.name(vars[v].first) << ' ' << x.name(vars[v].second) << '\n';
    return os.str();
  }

  Morphism decode(const std::vector<bool>& model, std::size_t n) const {
    Morphism f{std::vector<Event>(n, 0)};
    for (std::size_t v = 0; v < vars.size(); ++v)
      if (model[v + 1]) f.image[vars[v].first] = vars[v].second;
    return f;
  }
};

inline CnfInstance emit_cnf(const PartialString& x, const PartialString& y) {
  CnfInstance out;
  const detail::LabelIndex labels(x, y);
  const std::size_t ny = y.size(), nx = x.size();
  std::vector<std::vector<int>> var(ny, std::vector<int>(nx, 0));
  for (Event e = 0; e < ny; ++e)
    for (Event a = 0; a < nx; ++a)
      if (labels.y[e] == labels.x[a]) {
        out.vars.emplace_back(e, a);
        var[e][a] = static_cast<int>(out.vars.size());
      }
  out.cnf.num_vars = static_cast<int>(out.vars.size());
  auto& clauses = out.cnf.clauses;

  auto exactly_one = [&](const std::vector<int>& group) {
    clauses.push_back(group);  // empty group yields the empty clause
    for (std::size_t i = 0; i < group.size(); ++i)
      for (std::size_t j = i + 1; j < group.size(); ++j) clauses.push_back({-group[i], -group[j]});
  };

  if (nx != ny) {
    clauses.push_back({});
    return out;
  }
  for (Event e = 0; e < ny; ++e) {
    std::vector<int> group;
    for (Event a = 0; a < nx; ++a)
      if (var[e][a]) group.push_back(var[e][a]);
    exactly_one(group);
  }
  for (Event a = 0; a < nx; ++a) {
    std::vector<int> group;
    for (Event e = 0; e < ny; ++e)
      if (var[e][a]) group.push_back(var[e][a]);
    exactly_one(group);
  }
  for (Event e = 0; e < ny; ++e)
    for (Event e2 = 0; e2 < ny; ++e2) {
      if (e == e2 || !y.leq(e, e2)) continue;
      for (Event a = 0; a < nx; ++a) {
        if (!var[e][a]) continue;
        for (Event b = 0; b < nx; ++b)
          if (var[e2][b] && !x.leq(a, b)) clauses.push_back({-var[e][a], -var[e2][b]});
      }
    }
  return out;
}

// Returns f: y -> x witnessing x ⊑ y, or nullopt if x does not refine y.
inline std::optional<Morphism> find_morphism(const PartialString& x, const PartialString& y,
                                             RefineMethod method = RefineMethod::backtrack) {
  const detail::LabelIndex labels(x, y);
  if (detail::quick_reject(x, y, labels)) return std::nullopt;
  if (method == RefineMethod::backtrack) return detail::Backtracker(x, y, labels).run();
  const CnfInstance inst = emit_cnf(x, y);
  auto model = sat::solve(inst.cnf);
  if (!model) return std::nullopt;
  return inst.decode(*model, y.size());
}

// x ⊑ y
inline bool refines(const PartialString& x, const PartialString& y, RefineMethod method = RefineMethod::backtrack) {
  return find_morphism(x, y, method).has_value();
}

// Mutual refinement. For finite strings a refinement between strings with the
// same number of ordered pairs is already an isomorphism, so one search suffices.
inline bool is_isomorphic(const PartialString& x, const PartialString& y) {
  if (x.size() != y.size() || x.strict_pair_count() != y.strict_pair_count()) return false;
  return refines(x, y);
}

}  // namespace pomset
