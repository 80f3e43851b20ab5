#pragma once

#include <cstddef>

#include "pomset/errors.hpp"
#include "pomset/program.hpp"

namespace pomset {

// P^{0} = 1, P^{n+1} = P ⋈ P^{n}
inline Program n_iterated(const Program& p, std::size_t n, Join join) {
  Program acc = Program::one();
  for (std::size_t i = 0; i < n; ++i) acc = prog_compose(p, acc, join);
  return acc;
}

// P^{0} ∪ P^{1} ∪ ... ∪ P^{n}
inline Program lfp_approx(const Program& p, std::size_t n, Join join) {
  Program acc = Program::one();
  Program power = Program::one();
  for (std::size_t i = 0; i < n; ++i) {
    power = prog_compose(p, power, join);
    acc = prog_union(acc, power);
  }
  return acc;
}

// Outcome of deciding X^⋈ ⊆ Y^⋈ by the bounded unfolding of Y.
struct LfpQuery {
  std::size_t largest_x = 0;   // size of the largest generator of X
  std::size_t smallest_y = 0;  // size of the smallest generator of Y
  std::size_t bound = 0;       // floor(largest_x / smallest_y)
  bool x_is_zero = false;
  bool holds = false;
};

// Decides X^⋈ ⊆ Y^⋈ (equivalently X ⊆ Y^⋈) for elementary X, Y with 1 ∉ Y.
// Throws PreconditionViolated when Y is 0 or has the empty string in it.
inline LfpQuery lfp_query(const Program& x, const Program& y, Join join) {
  LfpQuery q;
  if (x.is_zero()) {
    q.x_is_zero = true;
    q.holds = true;
    return q;
  }
  if (y.is_zero()) throw PreconditionViolated("Y must be nonempty");
  if (y.contains_empty_string())
    throw PreconditionViolated("Y contains the identity program 1 (an empty generator)");
  q.largest_x = x.max_generator_size();
  q.smallest_y = y.min_generator_size();
  q.bound = q.largest_x / q.smallest_y;
  q.holds = prog_refines(x, lfp_approx(y, q.bound, join));
  return q;
}

inline bool lfp_refines(const Program& x, const Program& y, Join join) { return lfp_query(x, y, join).holds; }

// When all generators of X and Y have the same size, X^⋈ ⊆ Y^⋈ iff X ⊆ Y.
inline bool equal_size_shortcut(const Program& x, const Program& y, Join join) {
  (void)join;  // the answer does not depend on the join
  const std::size_t common =
      !x.generators().empty() ? x.generators().front().size()
                              : (!y.generators().empty() ? y.generators().front().size() : 0);
  for (const auto* prog : {&x, &y})
    for (const auto& g : prog->generators())
      if (g.size() != common) throw PreconditionViolated("generators of X and Y differ in size");
  return prog_refines(x, y);
}

}  // namespace pomset
