// Grading configuration: level weights and the bounded shape function that
// turns a seminorm tower into a translation-invariant metric
//
//     d(u, v) = sum_n  w_n * phi(||u - v||_n).
//
// phi must satisfy phi(0) = 0, strict monotonicity, subadditivity and
// boundedness; validate() checks all four on a sample grid and reports which
// fail, so misconfigured gradings are caught before they poison a metric.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace gmv {

// Shape function phi applied to each seminorm level.
struct ShapeFn {
  enum class Kind : std::uint8_t {
    rational,        // t / (1 + t); sup 1, phi(1) = 1/2
    one_minus_exp,   // 1 - exp(-t); sup 1
    clip,            // min(t, 1); bounded and subadditive but NOT strictly
                     // increasing -- validate() rejects it (kept as a foil)
  };

  Kind kind = Kind::rational;

  double operator()(double t) const;
  // Inverse on [0, sup); returns +infinity at or above sup.
  double inverse(double y) const;
  double sup() const { return 1.0; }
  // Right derivative at 0; used for closed-form strictness caps.
  double slope_at_zero() const { return 1.0; }

  std::string name() const;
  static ShapeFn from_name(const std::string& name);
};

// Per-property outcome of checking the shape-function contract on a grid.
struct ShapeFnReport {
  bool zero_at_zero = false;
  bool strictly_increasing = false;
  bool subadditive = false;
  bool bounded_by_sup = false;
  bool ok() const {
    return zero_at_zero && strictly_increasing && subadditive && bounded_by_sup;
  }
};

// Weights and shape for one graded metric.  Weights default to 2^-n, which
// every dyadic identity in the library (gauge doubling, operator-norm
// doubling) is calibrated against.
struct GradingConfig {
  std::size_t levels = 0;            // number of seminorm levels N+1 (n = 0..N)
  std::vector<double> weights;       // w_n > 0, one per level
  ShapeFn phi;

  static GradingConfig dyadic(std::size_t levels, ShapeFn phi = {});

  double weight(std::size_t n) const {
    if (n >= weights.size()) throw std::out_of_range("grading level out of range");
    return weights[n];
  }

  ShapeFnReport validate(std::size_t grid_points = 257) const;
};

}  // namespace gmv
