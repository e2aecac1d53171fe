#pragma once

#include "boxcells/numeric.hpp"

namespace boxcells {

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  Rational value;
  VecQ x;
};

/// maximize c.x subject to A x <= b, x >= 0, in exact arithmetic.
/// Two-phase dictionary simplex with Bland's rule, so it cannot cycle.
LpResult maximize(const MatQ& A, const VecQ& b, const VecQ& c);

/// maximize c.x subject to A x <= b with x free.
LpResult maximize_free(const MatQ& A, const VecQ& b, const VecQ& c);

/// Whether {x : lower <= x <= upper, A x <= b} is nonempty.
bool box_meets_polyhedron(const MatQ& A, const VecQ& b, const VecQ& lower, const VecQ& upper);

}  // namespace boxcells
