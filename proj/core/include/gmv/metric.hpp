// Translation-invariant metrics built from graded seminorm towers.
//
// The sum form  d(u,v) = sum_n w_n * phi(||u-v||_n)  is the workhorse: it is a
// complete metric at finite truncation, with circled balls (d(tv,0) <= d(v,0)
// for |t| <= 1) and the integer scaling bound d(sv,0) <= ceil(s) d(v,0).
// The sqrt_scalar mode, d(x,y) = sqrt(|x-y|) on R, is the standard example of
// a metric whose balls are wildly non-absorbing along rays: d(rv,0)/r blows up
// as r -> 0.  strictness() measures exactly that ray behaviour.

#pragma once

#include "gmv/grading.hpp"
#include "gmv/seminorms.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace gmv {

class FrechetMetric {
 public:
  enum class Mode : std::uint8_t { sum_form, sqrt_scalar };

  FrechetMetric() = default;
  FrechetMetric(std::shared_ptr<const SeminormFamily> tower, GradingConfig config,
                Mode mode = Mode::sum_form);

  Mode mode() const { return mode_; }
  const GradingConfig& config() const { return config_; }
  const SeminormFamily& tower() const { return *tower_; }
  std::size_t dim() const;

  double distance(const Vec& u, const Vec& v) const;
  double to_zero(const Vec& v) const { return from_profile(tower_->profile(v), v); }

  // Metric value of s*v from a precomputed seminorm profile of v; the ray
  // d(s v, 0) is closed-form in s once the profile is known, which keeps the
  // ray bisections in the gauge engine cheap.
  double along_ray(const Vec& profile_v, double s, const Vec& v_for_sqrt = {}) const;

  // Least-upper-bound of d(s v, 0) over all s (sum of active weights times
  // sup phi); +infinity never occurs since phi is bounded.
  double ray_sup(const Vec& profile_v) const;

  // d(s v, 0) <= ceil(s) * d(v, 0): returns the signed margin
  // ceil(s)*d(v,0) - d(sv,0), which is >= -tol exactly when the bound holds.
  struct ScalarBoundResult {
    bool ok = false;
    double margin = 0.0;
    double lhs = 0.0;  // d(s v, 0)
    double rhs = 0.0;  // ceil(s) * d(v, 0)
  };
  ScalarBoundResult scalar_bound_check(const Vec& v, double s, double tol = 1e-12) const;

  // Ray growth table: rows (s, d(sv,0), finite-difference slope).  Purely
  // diagnostic; the dual "gauge of v at shrinking radii" view is available
  // through the gauge engine.
  struct RayProfileRow {
    double s = 0.0;
    double value = 0.0;
    double slope = 0.0;
  };
  std::vector<RayProfileRow> ray_profile(const Vec& v, const std::vector<double>& s_grid) const;

  // Strictness estimate  sup_r d(r v, 0)/r  over a log-spaced grid of r,
  // together with the small-r tail of the quotient so divergence is visible.
  struct StrictnessResult {
    double value = 0.0;                                   // max over the grid
    std::vector<std::pair<double, double>> small_r_tail;  // (r, d(rv,0)/r), r ascending
  };
  StrictnessResult strictness(const Vec& v, double r_min = 1e-8, double r_max = 1.0,
                              int grid = 64) const;

  // Closed-form upper bound sup_r d(rv,0)/r <= phi'(0) * sum_n w_n ||v||_n
  // (valid for concave phi, which all shipped shapes are).
  double strictness_upper_bound(const Vec& v) const;

 private:
  double from_profile(const Vec& profile, const Vec& diff) const;

  std::shared_ptr<const SeminormFamily> tower_;
  GradingConfig config_;
  Mode mode_ = Mode::sum_form;
};

}  // namespace gmv
