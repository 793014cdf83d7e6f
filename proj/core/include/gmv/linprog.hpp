// Dense two-phase primal simplex for the small linear programs the library
// needs: polytope membership and gauges, best-scaling containment, and
// dominated-extension feasibility.  Variables are nonnegative; callers split
// free variables themselves.  Bland's rule throughout, so the solver cannot
// cycle; sizes here are tens-by-hundreds, where dense tableaus win.

#pragma once

#include "gmv/seminorms.hpp"

#include <cstdint>

namespace gmv {

// minimize c^T x   subject to   a_eq x = b_eq,  a_ub x <= b_ub,  x >= 0.
// Empty matrices (0 rows) mean "no constraints of that kind".
struct LinearProgram {
  Vec c;
  Mat a_eq;
  Vec b_eq;
  Mat a_ub;
  Vec b_ub;
};

struct LpResult {
  enum class Status : std::uint8_t { optimal, infeasible, unbounded, stalled };
  Status status = Status::infeasible;
  Vec x;
  double objective = 0.0;
  int iterations = 0;
  bool ok() const { return status == Status::optimal; }
};

LpResult solve_lp(const LinearProgram& lp, double tol = 1e-9);

// Convenience wrappers -------------------------------------------------------

// Is x in conv(columns of V)?  Feasibility of sum l_i v_i = x, sum l_i = 1,
// l >= 0.
bool in_convex_hull(const Mat& vertices, const Vec& x, double tol = 1e-9);

// Gauge of conv(columns of V) at x: min t with x in t * conv(V), t >= 0.
// Requires 0 in conv(V) for the gauge to be finite for all x; returns +inf
// when the program is infeasible (x not absorbed by any scaling).
double polytope_gauge(const Mat& vertices, const Vec& x, double tol = 1e-9);

}  // namespace gmv
