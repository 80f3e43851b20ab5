#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "pomset/errors.hpp"
#include "pomset/memory.hpp"
#include "pomset/partial_string.hpp"

namespace pomset {

// ---------------------------------------------------------------------------
// Input: an unrolled program-order skeleton over memory accesses.

struct AddressIndex {
  std::string addr;
  std::vector<Event> acquires;
  std::vector<Event> releases;
};

struct EncodingInput {
  PartialString skeleton;  // program order, initializers included when enabled
  std::size_t original_events = 0;
  bool initializers = true;
  std::vector<AddressIndex> addresses;  // sorted by address name

  static EncodingInput make(const PartialString& po, bool with_init = true) {
    for (Event e = 0; e < po.size(); ++e)
      if (!po.label(e).is_memory_access())
        throw InvalidArgument("event " + po.name(e) + " has an opaque label; encodings need memory accesses");
    EncodingInput in;
    in.original_events = po.size();
    in.initializers = with_init;
    in.skeleton = with_init ? with_initializers(po).string : po;
    std::map<std::string, AddressIndex> by_addr;
    for (Event e = 0; e < in.skeleton.size(); ++e) {
      const auto& l = in.skeleton.label(e);
      auto& idx = by_addr[*l.address()];
      idx.addr = *l.address();
      if (l.is_acquire()) idx.acquires.push_back(e);
      if (l.is_release()) idx.releases.push_back(e);
    }
    for (auto& [_, idx] : by_addr) in.addresses.push_back(std::move(idx));
    return in;
  }

  std::size_t total_events() const noexcept { return skeleton.size(); }
};

// N releases and N acquires on one address, pairwise unordered.
inline PartialString star_skeleton(std::size_t n, const std::string& addr = "x") {
  std::vector<Label> labels;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) {
    labels.push_back(Label::release(addr, 1));
    names.push_back("s" + std::to_string(i));
  }
  for (std::size_t i = 0; i < n; ++i) {
    labels.push_back(Label::acquire("r" + std::to_string(i), addr));
    names.push_back("l" + std::to_string(i));
  }
  return PartialString(std::move(labels), {}, std::move(names));
}

// ---------------------------------------------------------------------------
// Formula: a conjunction of clauses over Boolean variables and difference
// atoms between integer variables.

enum class Tag : std::uint8_t { po, rf, sw, wc, fr, wrc, sel };
inline constexpr std::array<Tag, 7> kAllTags{Tag::po, Tag::rf, Tag::sw, Tag::wc, Tag::fr, Tag::wrc, Tag::sel};

inline const char* to_string(Tag t) {
  switch (t) {
    case Tag::po: return "po";
    case Tag::rf: return "rf";
    case Tag::sw: return "sw";
    case Tag::wc: return "wc";
    case Tag::fr: return "fr";
    case Tag::wrc: return "wrc";
    case Tag::sel: return "sel";
  }
  return "?";
}

struct Atom {
  enum class Kind : std::uint8_t { boolean, less, less_eq, equal };
  Kind kind = Kind::boolean;
  std::size_t a = 0;  // Boolean variable, or left integer variable
  std::size_t b = 0;  // right integer variable
  friend bool operator==(const Atom&, const Atom&) = default;
};

struct Literal {
  Atom atom;
  bool positive = true;

  Literal operator!() const { return {atom, !positive}; }
  friend bool operator==(const Literal&, const Literal&) = default;
};

inline Literal var(std::size_t b) { return {{Atom::Kind::boolean, b, 0}, true}; }
inline Literal lt(std::size_t a, std::size_t b) { return {{Atom::Kind::less, a, b}, true}; }
inline Literal le(std::size_t a, std::size_t b) { return {{Atom::Kind::less_eq, a, b}, true}; }
inline Literal eq(std::size_t a, std::size_t b) { return {{Atom::Kind::equal, a, b}, true}; }

struct Constraint {
  Tag tag;
  std::vector<Literal> clause;  // disjunction; empty means false
};

enum class EncodingKind { cubic, quadratic };

inline const char* to_string(EncodingKind k) { return k == EncodingKind::cubic ? "cubic" : "quadratic"; }

struct IntVar {
  enum class Kind { clock, selector };
  Kind kind;
  Event event;  // the clocked event, or the acquire owning the selector
  std::string name;
};

struct BoolVar {
  Event load;
  Event store;
  std::string name;
};

struct AddressStats {
  std::string addr;
  std::size_t acquires = 0;
  std::size_t releases = 0;
};

struct Formula {
  EncodingKind kind = EncodingKind::cubic;
  std::vector<IntVar> int_vars;
  std::vector<BoolVar> bool_vars;
  std::vector<Constraint> constraints;
  std::vector<AddressStats> addresses;
  std::size_t initializer_count = 0;

  void add(Tag tag, std::vector<Literal> clause) { constraints.push_back({tag, std::move(clause)}); }
};

namespace detail {

inline std::string smt_symbol(const std::string& raw) {
  std::string out;
  for (char c : raw) {
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_')
      out += c;
    else if (c == '\'')
      out += "_p";
    else
      out += '_';
  }
  return out;
}

// Clock variables for every skeleton event plus program-order constraints.
inline Formula skeleton_formula(const EncodingInput& in, EncodingKind kind) {
  Formula f;
  f.kind = kind;
  f.initializer_count = in.total_events() - in.original_events;
  std::set<std::string> used;
  for (Event e = 0; e < in.total_events(); ++e) {
    std::string name = "clk_" + smt_symbol(in.skeleton.name(e));
    if (used.contains(name)) name += "_" + std::to_string(e);
    used.insert(name);
    f.int_vars.push_back({IntVar::Kind::clock, e, name});
  }
  for (const auto& [a, b] : in.skeleton.covering_edges()) f.add(Tag::po, {lt(a, b)});
  for (const auto& idx : in.addresses) f.addresses.push_back({idx.addr, idx.acquires.size(), idx.releases.size()});
  return f;
}

inline void write_coherence(Formula& f, const AddressIndex& idx) {
  for (std::size_t i = 0; i < idx.releases.size(); ++i)
    for (std::size_t j = i + 1; j < idx.releases.size(); ++j) {
      const Event s = idx.releases[i], s2 = idx.releases[j];
      f.add(Tag::wc, {lt(s, s2), lt(s2, s)});
    }
}

}  // namespace detail

// Read-from as Boolean choices rf(l,s) with from-read instantiated over every
// (acquire, release, release) triple.
inline Formula encode_cubic(const EncodingInput& in) {
  Formula f = detail::skeleton_formula(in, EncodingKind::cubic);
  for (const auto& idx : in.addresses) {
    std::map<std::pair<Event, Event>, std::size_t> rf;
    for (Event l : idx.acquires)
      for (Event s : idx.releases) {
        rf[{l, s}] = f.bool_vars.size();
        f.bool_vars.push_back({l, s, "rf_" + f.int_vars[l].name.substr(4) + "_" + f.int_vars[s].name.substr(4)});
      }
    for (Event l : idx.acquires) {
      std::vector<Literal> some;
      for (Event s : idx.releases) some.push_back(var(rf[{l, s}]));
      f.add(Tag::rf, some);
      for (std::size_t i = 0; i < some.size(); ++i)
        for (std::size_t j = i + 1; j < some.size(); ++j) f.add(Tag::rf, {!some[i], !some[j]});
    }
    for (Event l : idx.acquires)
      for (Event s : idx.releases) f.add(Tag::sw, {!var(rf[{l, s}]), lt(s, l)});
    detail::write_coherence(f, idx);
    for (Event l : idx.acquires)
      for (Event s : idx.releases)
        for (Event s2 : idx.releases)
          if (s != s2) f.add(Tag::fr, {!var(rf[{l, s}]), !lt(s, s2), lt(l, s2)});
  }
  return f;
}

// One selector w_l per acquire equal to the clock of the release it reads,
// constrained to be the latest release before l: for every release s',
// l ≺ s' or s' ⪯ w_l.
inline Formula encode_quadratic(const EncodingInput& in) {
  Formula f = detail::skeleton_formula(in, EncodingKind::quadratic);
  for (const auto& idx : in.addresses) {
    std::map<Event, std::size_t> sel;
    for (Event l : idx.acquires) {
      sel[l] = f.int_vars.size();
      f.int_vars.push_back({IntVar::Kind::selector, l, "w_" + f.int_vars[l].name.substr(4)});
    }
    for (Event l : idx.acquires) {
      std::vector<Literal> some;
      for (Event s : idx.releases) some.push_back(eq(sel[l], s));
      f.add(Tag::sel, some);
    }
    for (Event l : idx.acquires) f.add(Tag::sw, {lt(sel[l], l)});
    detail::write_coherence(f, idx);
    for (Event l : idx.acquires)
      for (Event s2 : idx.releases) f.add(Tag::wrc, {lt(l, s2), le(s2, sel[l])});
  }
  return f;
}

inline Formula encode(const EncodingInput& in, EncodingKind kind) {
  return kind == EncodingKind::cubic ? encode_cubic(in) : encode_quadratic(in);
}

// ---------------------------------------------------------------------------
// Census

struct Census {
  std::map<Tag, std::size_t> counts;
  std::size_t total = 0;
  std::size_t int_vars = 0;
  std::size_t bool_vars = 0;
  // Closed forms summed over addresses (initializers count as releases).
  std::size_t predicted_fr = 0;   // |acq|·|rel|·(|rel|-1)
  std::size_t predicted_wrc = 0;  // |acq|·|rel|
  std::size_t predicted_wc = 0;   // C(|rel|, 2)

  std::size_t count(Tag t) const {
    auto it = counts.find(t);
    return it == counts.end() ? 0 : it->second;
  }

  bool matches_prediction(EncodingKind kind) const {
    if (count(Tag::wc) != predicted_wc) return false;
    if (kind == EncodingKind::cubic) return count(Tag::fr) == predicted_fr && count(Tag::wrc) == 0;
    return count(Tag::wrc) == predicted_wrc && count(Tag::fr) == 0;
  }
};

inline Census count_constraints(const Formula& f) {
  Census c;
  for (Tag t : kAllTags) c.counts[t] = 0;
  for (const auto& k : f.constraints) ++c.counts[k.tag];
  c.total = f.constraints.size();
  c.int_vars = f.int_vars.size();
  c.bool_vars = f.bool_vars.size();
  for (const auto& a : f.addresses) {
    c.predicted_fr += a.acquires * a.releases * (a.releases == 0 ? 0 : a.releases - 1);
    c.predicted_wrc += a.acquires * a.releases;
    c.predicted_wc += a.releases * (a.releases == 0 ? 0 : a.releases - 1) / 2;
  }
  return c;
}

// ---------------------------------------------------------------------------
// Evaluation and a small difference-logic search procedure.

struct Model {
  std::vector<long long> ints;
  std::vector<bool> bools;
};

inline bool holds(const Literal& lit, const Model& m) {
  bool v = false;
  switch (lit.atom.kind) {
    case Atom::Kind::boolean: v = m.bools.at(lit.atom.a); break;
    case Atom::Kind::less: v = m.ints.at(lit.atom.a) < m.ints.at(lit.atom.b); break;
    case Atom::Kind::less_eq: v = m.ints.at(lit.atom.a) <= m.ints.at(lit.atom.b); break;
    case Atom::Kind::equal: v = m.ints.at(lit.atom.a) == m.ints.at(lit.atom.b); break;
  }
  return v == lit.positive;
}

inline bool evaluate(const Formula& f, const Model& m) {
  return std::all_of(f.constraints.begin(), f.constraints.end(), [&](const Constraint& c) {
    return std::any_of(c.clause.begin(), c.clause.end(), [&](const Literal& l) { return holds(l, m); });
  });
}

namespace detail {

// Backtracking over clause disjuncts. Integer literals are kept as a
// difference-constraint graph (edge u->v with weight w means v - u >= w)
// whose all-pairs longest paths decide feasibility and entailment.
class DifferenceSolver {
 public:
  explicit DifferenceSolver(const Formula& f)
      : f_(f), n_(f.int_vars.size()), bools_(f.bool_vars.size(), kUnset), dist_(n_ * n_, kNegInf) {
    for (std::size_t i = 0; i < n_; ++i) at(i, i) = 0;
    for (const auto& c : f.constraints)
      for (const auto& l : c.clause)
        if (l.atom.kind == Atom::Kind::equal && !l.positive)
          throw InvalidArgument("negated equality is outside the supported fragment");
  }

  std::optional<Model> solve() {
    if (!search()) return std::nullopt;
    Model m;
    m.ints.assign(n_, 0);
    for (std::size_t v = 0; v < n_; ++v)
      for (std::size_t u = 0; u < n_; ++u) m.ints[v] = std::max(m.ints[v], at(u, v) + 1);
    m.bools.resize(bools_.size());
    for (std::size_t b = 0; b < bools_.size(); ++b) m.bools[b] = bools_[b] == kTrue;
    return m;
  }

  std::size_t nodes() const noexcept { return nodes_; }

 private:
  static constexpr long long kNegInf = std::numeric_limits<long long>::min() / 4;
  static constexpr signed char kUnset = -1, kFalse = 0, kTrue = 1;

  long long& at(std::size_t u, std::size_t v) { return dist_[u * n_ + v]; }
  long long at(std::size_t u, std::size_t v) const { return dist_[u * n_ + v]; }

  // Difference edges (u, v, w) meaning v - u >= w equivalent to a literal.
  static std::vector<std::array<long long, 3>> edges_of(const Literal& l) {
    const auto a = static_cast<long long>(l.atom.a), b = static_cast<long long>(l.atom.b);
    switch (l.atom.kind) {
      case Atom::Kind::less: return l.positive ? std::vector<std::array<long long, 3>>{{a, b, 1}}
                                               : std::vector<std::array<long long, 3>>{{b, a, 0}};
      case Atom::Kind::less_eq: return l.positive ? std::vector<std::array<long long, 3>>{{a, b, 0}}
                                                  : std::vector<std::array<long long, 3>>{{b, a, 1}};
      case Atom::Kind::equal: return {{a, b, 0}, {b, a, 0}};
      case Atom::Kind::boolean: break;
    }
    return {};
  }

  enum class Status { entailed, refuted, open };

  Status status(const Literal& l) const {
    if (l.atom.kind == Atom::Kind::boolean) {
      auto v = bools_[l.atom.a];
      if (v == kUnset) return Status::open;
      return (v == kTrue) == l.positive ? Status::entailed : Status::refuted;
    }
    const auto mine = edges_of(l);
    bool all = true;
    for (const auto& [u, v, w] : mine)
      if (at(u, v) < w) all = false;
    if (all) return Status::entailed;
    if (l.atom.kind == Atom::Kind::equal) {
      const auto a = l.atom.a, b = l.atom.b;
      return at(a, b) >= 1 || at(b, a) >= 1 ? Status::refuted : Status::open;
    }
    // Refuted when the negation is entailed.
    for (const auto& [u, v, w] : edges_of(!l))
      if (at(u, v) < w) return Status::open;
    return Status::refuted;
  }

  // Adds a literal; false if the constraint graph gains a positive cycle.
  bool assert_literal(const Literal& l) {
    if (l.atom.kind == Atom::Kind::boolean) {
      bools_[l.atom.a] = l.positive ? kTrue : kFalse;
      return true;
    }
    for (const auto& [u, v, w] : edges_of(l)) {
      if (at(v, u) > kNegInf && at(v, u) + w > 0) return false;
      // Incremental longest-path update through the new edge.
      for (std::size_t i = 0; i < n_; ++i) {
        if (at(i, u) == kNegInf) continue;
        for (std::size_t j = 0; j < n_; ++j) {
          if (at(v, j) == kNegInf) continue;
          at(i, j) = std::max(at(i, j), at(i, u) + w + at(v, j));
        }
      }
    }
    return true;
  }

  bool search() {
    ++nodes_;
    const Constraint* pick = nullptr;
    std::vector<Literal> pick_open;
    for (const auto& c : f_.constraints) {
      std::vector<Literal> open;
      bool sat = false;
      for (const auto& l : c.clause) {
        auto s = status(l);
        if (s == Status::entailed) {
          sat = true;
          break;
        }
        if (s == Status::open) open.push_back(l);
      }
      if (sat) continue;
      if (open.empty()) return false;
      if (!pick || open.size() < pick_open.size()) {
        pick = &c;
        pick_open = std::move(open);
        if (pick_open.size() == 1) break;
      }
    }
    if (!pick) return true;
    for (const auto& l : pick_open) {
      auto saved_dist = dist_;
      auto saved_bools = bools_;
      if (assert_literal(l) && search()) return true;
      dist_ = std::move(saved_dist);
      bools_ = std::move(saved_bools);
    }
    return false;
  }

  const Formula& f_;
  std::size_t n_;
  std::vector<signed char> bools_;
  std::vector<long long> dist_;
  std::size_t nodes_ = 0;
};

}  // namespace detail

inline std::optional<Model> solve(const Formula& f) { return detail::DifferenceSolver(f).solve(); }

struct EquisatResult {
  bool cubic_sat = false;
  bool quadratic_sat = false;
  bool agree() const noexcept { return cubic_sat == quadratic_sat; }
};

inline constexpr std::size_t kEquisatMaxEvents = 9;

inline EquisatResult equisat_detail(const EncodingInput& in) {
  if (in.total_events() > kEquisatMaxEvents)
    throw BoundExceeded("equisat check supports at most " + std::to_string(kEquisatMaxEvents) + " events, got " +
                        std::to_string(in.total_events()));
  EquisatResult r;
  r.cubic_sat = solve(encode_cubic(in)).has_value();
  r.quadratic_sat = solve(encode_quadratic(in)).has_value();
  return r;
}

inline bool equisat_check(const EncodingInput& in) { return equisat_detail(in).agree(); }

// ---------------------------------------------------------------------------
// Emission

enum class EmitFormat { smt2, text };

namespace detail {

inline std::string smt_literal(const Formula& f, const Literal& l) {
  std::string atom;
  const auto& iv = f.int_vars;
  switch (l.atom.kind) {
    case Atom::Kind::boolean: atom = f.bool_vars[l.atom.a].name; break;
    case Atom::Kind::less: atom = "(< " + iv[l.atom.a].name + " " + iv[l.atom.b].name + ")"; break;
    case Atom::Kind::less_eq: atom = "(<= " + iv[l.atom.a].name + " " + iv[l.atom.b].name + ")"; break;
    case Atom::Kind::equal: atom = "(= " + iv[l.atom.a].name + " " + iv[l.atom.b].name + ")"; break;
  }
  return l.positive ? atom : "(not " + atom + ")";
}

inline std::string text_literal(const Formula& f, const Literal& l) {
  const auto& iv = f.int_vars;
  const char* op = "";
  switch (l.atom.kind) {
    case Atom::Kind::boolean: return (l.positive ? "" : "!") + f.bool_vars[l.atom.a].name;
    case Atom::Kind::less: op = l.positive ? " < " : " >= "; break;
    case Atom::Kind::less_eq: op = l.positive ? " <= " : " > "; break;
    case Atom::Kind::equal: op = l.positive ? " = " : " != "; break;
  }
  return iv[l.atom.a].name + op + iv[l.atom.b].name;
}

}  // namespace detail

// Deterministic: output depends only on the formula.
inline std::string emit(const Formula& f, EmitFormat format) {
  std::ostringstream os;
  const std::size_t clocks =
      std::count_if(f.int_vars.begin(), f.int_vars.end(), [](const IntVar& v) { return v.kind == IntVar::Kind::clock; });
  if (format == EmitFormat::smt2) {
    os << "; " << to_string(f.kind) << " partial-order encoding\n";
    os << "; clocks=" << clocks << " initializers=" << f.initializer_count
       << " selectors=" << (f.int_vars.size() - clocks) << " rf=" << f.bool_vars.size()
       << " assertions=" << f.constraints.size() << "\n";
    os << "(set-logic QF_LIA)\n";
    for (const auto& v : f.int_vars) os << "(declare-const " << v.name << " Int)\n";
    for (const auto& v : f.bool_vars) os << "(declare-const " << v.name << " Bool)\n";
    for (const auto& c : f.constraints) {
      os << "; tag=" << to_string(c.tag) << "\n(assert ";
      if (c.clause.empty()) {
        os << "false";
      } else if (c.clause.size() == 1) {
        os << detail::smt_literal(f, c.clause.front());
      } else {
        os << "(or";
        for (const auto& l : c.clause) os << ' ' << detail::smt_literal(f, l);
        os << ')';
      }
      os << ")\n";
    }
    os << "(check-sat)\n(exit)\n";
  } else {
    os << "encoding " << to_string(f.kind) << ": " << f.int_vars.size() << " integer, " << f.bool_vars.size()
       << " boolean variables, " << f.constraints.size() << " constraints\n";
    for (const auto& c : f.constraints) {
      os << '[' << to_string(c.tag) << "] ";
      if (c.clause.empty()) os << "false";
      for (std::size_t i = 0; i < c.clause.size(); ++i)
        os << (i ? " | " : "") << detail::text_literal(f, c.clause[i]);
      os << '\n';
    }
  }
  return os.str();
}

}  // namespace pomset
