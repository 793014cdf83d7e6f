// Gauge functionals of the dyadic metric balls and their convex hulls.
//
// For the ball  B(n) = { v : d(v, 0) <= 2^{-n} }  and its hull c(n) = conv B(n),
// the Minkowski gauge  mu_n(v) = inf { lambda > 0 : v in lambda * c(n) }  is
// not available in closed form once several seminorm levels are active, so the
// engine computes a certified two-sided bracket instead:
//
//  * box_lower  --  the gauge of the coordinate box { ||v||_k <= R_{n,k} },
//    R_{n,k} = phi^{-1}(2^{-n} / w_k), which encloses B(n) and hence c(n).
//    It is a max of rescaled seminorms, so it is itself a seminorm
//    (subadditive, exactly homogeneous) and a certified minorant of mu_n.
//    Constraints with 2^{-n}/w_k >= sup phi are vacuous; with dyadic weights
//    every k < n bites and level n = 0 has no active constraint at all
//    (box_lower == 0 there, deliberately).
//  * star_upper --  the exact gauge of the *ball* (not its hull) along the
//    ray of v: |v| / t*, t* = sup { t : d(t v / |v|, 0) <= 2^{-n} }, found by
//    bisecting the closed-form ray distance.  B(n) c= c(n) makes it a
//    majorant of mu_n.  It is positively homogeneous but NOT subadditive:
//    never feed it to triangle- or convexity-sensitive decisions; report it
//    as the optimistic end of the bracket only.
//
// Both ends scale exactly by powers of two in floating point (doubling v
// doubles them bit-exactly; power-of-two initial brackets keep every
// bisection iterate binary-scaled), which is what makes the dyadic doubling
// laws of gauges and operator norms hold exactly on computed values, not just
// up to rounding.
//
// Exact special cases recognized by point_gauge():
//  * single-level towers:   mu_n(v) = ||v||_0 * (2^n - 1)  (rational phi),
//    where the ball is already convex;
//  * sqrt-scalar metrics:   mu_n(v) = |v| * 4^n;
//  * rays that never leave the ball (ray_sup <= radius): gauge exactly 0.

#pragma once

#include "gmv/model.hpp"

#include <limits>
#include <memory>

namespace gmv {

enum class BoundKind : std::uint8_t { exact, lower_only, upper_only, bracket };

// Two-sided value with provenance.  lower <= truth <= upper, with the
// convention that a lower_only value has upper = +inf and an upper_only value
// has lower = 0 (gauges and operator norms are nonnegative).
struct GaugeValue {
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();
  BoundKind kind = BoundKind::bracket;

  static GaugeValue exact(double v) { return {v, v, BoundKind::exact}; }
  static GaugeValue bracket(double lo, double hi) {
    return {lo, hi, BoundKind::bracket};
  }
  static GaugeValue lower_only(double lo) {
    return {lo, std::numeric_limits<double>::infinity(), BoundKind::lower_only};
  }
  static GaugeValue upper_only(double hi) { return {0.0, hi, BoundKind::upper_only}; }

  double width() const { return upper - lower; }
  bool finite_upper() const { return upper < std::numeric_limits<double>::infinity(); }
};

class DyadicGauge {
 public:
  DyadicGauge(std::shared_ptr<const SeminormFamily> tower, GradingConfig config,
              FrechetMetric::Mode mode = FrechetMetric::Mode::sum_form);
  explicit DyadicGauge(const ModelSpace& model);

  const FrechetMetric& metric() const { return metric_; }
  const SeminormFamily& tower() const { return *tower_; }

  // R_{n,k}; +inf when the level-k constraint is vacuous at radius 2^{-n}.
  double box_radius(std::size_t n, std::size_t k) const;

  double box_lower(std::size_t n, const Vec& v) const;
  double box_lower_profile(std::size_t n, const Vec& profile) const;

  double star_upper(std::size_t n, const Vec& v) const;
  double star_upper_profile(std::size_t n, const Vec& profile) const;

  // Largest t (within bisection tolerance, from inside) such that the point
  // with seminorm profile t * profile stays in the radius-r ball; +inf when
  // the whole ray does.  The certified direction is d(t v, 0) <= r for the
  // returned t.
  double ray_entry_profile(const Vec& profile, double radius) const;

  // Bracket (or exact value, where the ball is convex) of the hull gauge.
  GaugeValue point_gauge(std::size_t n, const Vec& v) const;
  GaugeValue point_gauge_profile(std::size_t n, const Vec& profile) const;

  // Single seminorm level or sqrt scalar: point_gauge returns exact values.
  bool exact_mode() const { return exact_; }

 private:
  std::shared_ptr<const SeminormFamily> tower_;
  FrechetMetric metric_;
  bool exact_ = false;
  bool sqrt_ = false;

  mutable std::vector<Vec> box_inv_radii_;  // 1 / R_{n,k} (0 when vacuous)
  void ensure_level(std::size_t n) const;
};

// Deterministic nested sample sets for the dyadic hulls.  samples(m) holds
// points of c(m) as columns and contains 2 * samples(m+1) column-for-column,
// exactly in floating point; suprema of homogeneous functionals over them
// therefore inherit the two-sided dyadic scaling laws of the true hull gauges
// as exact inequalities on computed values.  Fresh boundary directions are
// drawn per level (deterministically from the seed) so accumulation adds
// genuinely new rays.
class BallSampler {
 public:
  // dirs_per_level = 0 picks the default budget of 2 * D * (lev + 4) random
  // directions at level lev, plus the +-e_k axes; a nonzero value fixes the
  // fresh-direction count at every level (used by the cheap norm tables).
  BallSampler(const ModelSpace& model, std::uint64_t seed, std::size_t max_level,
              std::size_t dirs_per_level = 0);

  const Mat& samples(std::size_t level) const { return sets_.at(level); }
  std::size_t max_level() const { return sets_.size() - 1; }
  std::uint64_t seed() const { return seed_; }
  std::size_t dirs_per_level() const { return dirs_per_level_; }

 private:
  std::uint64_t seed_ = 0;
  std::size_t dirs_per_level_ = 0;
  std::vector<Mat> sets_;  // sets_[m] = points of c(m), one per column
};

}  // namespace gmv
