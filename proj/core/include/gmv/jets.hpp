#pragma once

// Smooth functions on [0,1] with prescribed derivative values at prescribed
// points, assembled from localized polynomial-times-plateau bumps.
//
// Each condition f^(n)(p_n) = a_n is carried by one bump
//
//   v_n(x) = a_n * h^n * g_n((x - p_n)/h),   g_n(u) = u^n/n! * P(u),
//
// where P is a piecewise-polynomial plateau equal to 1 on [-1/2, 1/2] and
// falling to 0 at |u| = 1 through a C^Q polynomial smoothstep.  Near its own
// point the bump is exactly u^n/n!, so the n-th derivative condition holds
// exactly; the supports are kept pairwise disjoint so the other bumps
// contribute nothing.  Everything has closed-form derivatives of every order
// used — no flat-exponential profiles, no underflow at high orders.

#include "gmv/model.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace gmv {

// Polynomial smoothstep ladder: S(0)=0, S(1)=1, derivatives 1..Q vanish at
// both ends.  Closed-form derivatives of all orders.
class Smoothstep {
 public:
  explicit Smoothstep(int smoothness);
  double eval(double u, int deriv = 0) const;  // 0 outside [0,1] clamps flat
  int smoothness() const { return q_; }

 private:
  int q_;
  std::vector<double> coeffs_;  // monomial coefficients of S on [0,1]
  double inv_beta_ = 0.0;       // 1 / int_0^1 t^Q (1-t)^Q dt
};

struct JetBump {
  double point = 0.0;
  double width = 0.0;
  double amplitude = 0.0;  // the prescribed derivative value
  int order = 0;           // which derivative the bump pins

  double eval(double x, int deriv, const Smoothstep& step) const;
  double support_lo() const { return point - width; }
  double support_hi() const { return point + width; }
};

struct JetCondition {
  double point = 0.0;
  int order = 0;
  double target = 0.0;
  double achieved = 0.0;
  double rel_err = 0.0;
};

struct JetSmallness {
  int order = 0;      // bump index n
  int k = 0;          // derivative order k < n
  double norm = 0.0;  // sup |v_n^(k)|
  double bound = 0.0; // 2^{-n}
  bool ok = false;
};

struct JetReport {
  std::vector<JetCondition> conditions;
  std::vector<JetSmallness> smallness;
  double fd_max_rel_err = 0.0;  // finite differences against closed forms
  bool supports_disjoint = false;
  std::string note;
};

class JetFunction {
 public:
  JetFunction(std::vector<JetBump> bumps, int smoothness);

  double eval(double x, int deriv = 0) const;
  const std::vector<JetBump>& bumps() const { return bumps_; }

  // Samples onto a model's grid (trig kind), giving a vector of grid values.
  Vec grid_values(const ModelSpace& model) const;

  // Sup of |f^(k)| over a uniform grid of the given resolution.
  double sup_derivative(int k, std::size_t grid = 4096) const;

 private:
  std::vector<JetBump> bumps_;
  Smoothstep step_;
};

struct JetParams {
  bool enforce_smallness = false;  // push sup|v_n^(k)| < 2^{-n} for k < n
  int smoothness = 10;             // plateau smoothness class
  std::size_t fd_points = 3;       // finite-difference spot checks per order
  std::vector<double> widths;      // explicit support half-widths; empty = auto
};

struct JetResult {
  JetFunction f;
  JetReport report;
};

// Conditions f^(n)(points[n]) = values[n] for n = 0..order.  Throws
// std::invalid_argument when the requested supports overlap (the message
// names the offending pair) or the inputs are inconsistent.
JetResult prescribed_jet(const std::vector<double>& points,
                         const std::vector<double>& values, int order,
                         const JetParams& params = {});

}  // namespace gmv
