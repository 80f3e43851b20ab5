#pragma once

#include <cstdlib>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace pomset::sat {

// DIMACS conventions: variables are 1..num_vars, a literal is +v or -v.
using Literal = int;
using Clause = std::vector<Literal>;

struct Cnf {
  int num_vars = 0;
  std::vector<Clause> clauses;
};

inline std::string to_dimacs(const Cnf& cnf) {
  std::ostringstream os;
  os << "p cnf " << cnf.num_vars << ' ' << cnf.clauses.size() << '\n';
  for (const auto& c : cnf.clauses) {
    for (Literal l : c) os << l << ' ';
    os << "0\n";
  }
  return os.str();
}

// Plain DPLL with unit propagation over occurrence lists. Intended for the
// desk-scale instances produced by the refinement encoder.
class Dpll {
 public:
  explicit Dpll(const Cnf& cnf) : cnf_(cnf), value_(cnf.num_vars + 1, kUnset), occurs_(2 * (cnf.num_vars + 1)) {
    for (std::size_t i = 0; i < cnf_.clauses.size(); ++i)
      for (Literal l : cnf_.clauses[i]) occurs_[index(l)].push_back(i);
  }

  // Model indexed by variable (entry 0 unused), or nullopt when unsatisfiable.
  std::optional<std::vector<bool>> solve() {
    for (const auto& c : cnf_.clauses)
      if (c.empty()) return std::nullopt;
    // Seed propagation with unit clauses.
    for (const auto& c : cnf_.clauses)
      if (c.size() == 1) {
        if (is_false(c[0])) return std::nullopt;
        if (!is_true(c[0]) && !assign(c[0])) return std::nullopt;
      }
    if (!search()) return std::nullopt;
    std::vector<bool> model(cnf_.num_vars + 1, false);
    for (int v = 1; v <= cnf_.num_vars; ++v) model[v] = value_[v] == kTrue;
    return model;
  }

 private:
  static constexpr signed char kUnset = -1, kFalse = 0, kTrue = 1;

  static std::size_t index(Literal l) { return 2 * static_cast<std::size_t>(std::abs(l)) + (l < 0 ? 1 : 0); }

  bool is_true(Literal l) const {
    auto v = value_[std::abs(l)];
    return v != kUnset && (v == kTrue) == (l > 0);
  }
  bool is_false(Literal l) const {
    auto v = value_[std::abs(l)];
    return v != kUnset && (v == kTrue) != (l > 0);
  }

  // Sets l true and propagates; false on conflict. Assignments stay on the trail.
  bool assign(Literal l) {
    std::vector<Literal> queue{l};
    value_[std::abs(l)] = l > 0 ? kTrue : kFalse;
    trail_.push_back(std::abs(l));
    while (!queue.empty()) {
      Literal t = queue.back();
      queue.pop_back();
      for (std::size_t ci : occurs_[index(-t)]) {
        Literal unit = 0;
        int open = 0;
        bool sat = false;
        for (Literal m : cnf_.clauses[ci]) {
          if (is_true(m)) {
            sat = true;
            break;
          }
          if (!is_false(m)) {
            ++open;
            unit = m;
          }
        }
        if (sat) continue;
        if (open == 0) return false;
        if (open == 1) {
          value_[std::abs(unit)] = unit > 0 ? kTrue : kFalse;
          trail_.push_back(std::abs(unit));
          queue.push_back(unit);
        }
      }
    }
    return true;
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      value_[trail_.back()] = kUnset;
      trail_.pop_back();
    }
  }

  // Branch on a literal of the shortest open clause.
  Literal pick() const {
    Literal best = 0;
    std::size_t best_open = static_cast<std::size_t>(-1);
    for (const auto& c : cnf_.clauses) {
      std::size_t open = 0;
      Literal cand = 0;
      bool sat = false;
      for (Literal m : c) {
        if (is_true(m)) {
          sat = true;
          break;
        }
        if (!is_false(m)) {
          ++open;
          if (!cand) cand = m;
        }
      }
      if (!sat && open < best_open) {
        best_open = open;
        best = cand;
      }
    }
    return best;
  }

  bool search() {
    Literal l = pick();
    if (l == 0) return true;  // every clause satisfied
    for (Literal choice : {l, -l}) {
      std::size_t mark = trail_.size();
      if (assign(choice) && search()) return true;
      undo(mark);
    }
    return false;
  }

  const Cnf& cnf_;
  std::vector<signed char> value_;
  std::vector<std::vector<std::size_t>> occurs_;
  std::vector<int> trail_;
};

inline std::optional<std::vector<bool>> solve(const Cnf& cnf) { return Dpll(cnf).solve(); }

}  // namespace pomset::sat
