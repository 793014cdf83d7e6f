#include "gmv/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gmv {

FrechetMetric::FrechetMetric(std::shared_ptr<const SeminormFamily> tower,
                             GradingConfig config, Mode mode)
    : tower_(std::move(tower)), config_(std::move(config)), mode_(mode) {
  if (!tower_) throw std::invalid_argument("metric requires a seminorm tower");
  if (mode_ == Mode::sum_form && config_.levels != tower_->levels()) {
    throw std::invalid_argument("grading level count does not match tower");
  }
  if (mode_ == Mode::sqrt_scalar && tower_->dim() != 1) {
    throw std::invalid_argument("sqrt_scalar metric is only defined on R");
  }
}

std::size_t FrechetMetric::dim() const { return tower_->dim(); }

double FrechetMetric::from_profile(const Vec& profile, const Vec& diff) const {
  if (mode_ == Mode::sqrt_scalar) return std::sqrt(std::abs(diff[0]));
  double d = 0.0;
  for (std::size_t n = 0; n < config_.levels; ++n) {
    d += config_.weights[n] * config_.phi(profile[static_cast<Eigen::Index>(n)]);
  }
  return d;
}

double FrechetMetric::distance(const Vec& u, const Vec& v) const {
  Vec diff = u - v;
  return from_profile(tower_->profile(diff), diff);
}

double FrechetMetric::along_ray(const Vec& profile_v, double s, const Vec& v_for_sqrt) const {
  if (mode_ == Mode::sqrt_scalar) {
    return std::sqrt(std::abs(s) * std::abs(v_for_sqrt.size() ? v_for_sqrt[0] : 0.0));
  }
  double d = 0.0;
  double a = std::abs(s);
  for (std::size_t n = 0; n < config_.levels; ++n) {
    d += config_.weights[n] * config_.phi(a * profile_v[static_cast<Eigen::Index>(n)]);
  }
  return d;
}

double FrechetMetric::ray_sup(const Vec& profile_v) const {
  if (mode_ == Mode::sqrt_scalar) {
    return profile_v.size() && profile_v[0] > 0.0
               ? std::numeric_limits<double>::infinity()
               : 0.0;
  }
  double d = 0.0;
  for (std::size_t n = 0; n < config_.levels; ++n) {
    if (profile_v[static_cast<Eigen::Index>(n)] > 0.0) {
      d += config_.weights[n] * config_.phi.sup();
    }
  }
  return d;
}

FrechetMetric::ScalarBoundResult FrechetMetric::scalar_bound_check(const Vec& v, double s,
                                                                   double tol) const {
  if (s < 0.0) throw std::invalid_argument("scalar bound is stated for s >= 0");
  ScalarBoundResult r;
  Vec p = tower_->profile(v);
  r.lhs = along_ray(p, s, v);
  r.rhs = std::ceil(s) * from_profile(p, v);
  r.margin = r.rhs - r.lhs;
  r.ok = r.margin >= -tol;
  return r;
}

std::vector<FrechetMetric::RayProfileRow> FrechetMetric::ray_profile(
    const Vec& v, const std::vector<double>& s_grid) const {
  Vec p = tower_->profile(v);
  std::vector<RayProfileRow> rows;
  rows.reserve(s_grid.size());
  for (double s : s_grid) {
    RayProfileRow row;
    row.s = s;
    row.value = along_ray(p, s, v);
    double h = std::max(1e-7, 1e-7 * std::abs(s));
    row.slope = (along_ray(p, s + h, v) - along_ray(p, std::max(0.0, s - h), v)) /
                (s + h - std::max(0.0, s - h));
    rows.push_back(row);
  }
  return rows;
}

FrechetMetric::StrictnessResult FrechetMetric::strictness(const Vec& v, double r_min,
                                                          double r_max, int grid) const {
  if (!(r_min > 0.0) || !(r_max > r_min) || grid < 2) {
    throw std::invalid_argument("strictness grid must satisfy 0 < r_min < r_max, grid >= 2");
  }
  Vec p = tower_->profile(v);
  StrictnessResult res;
  std::vector<std::pair<double, double>> all;
  all.reserve(static_cast<std::size_t>(grid));
  double lmin = std::log(r_min), lmax = std::log(r_max);
  for (int i = 0; i < grid; ++i) {
    double r = std::exp(lmin + (lmax - lmin) * static_cast<double>(i) /
                                   static_cast<double>(grid - 1));
    double q = along_ray(p, r, v) / r;
    all.emplace_back(r, q);
    res.value = std::max(res.value, q);
  }
  std::size_t tail = std::min<std::size_t>(8, all.size());
  res.small_r_tail.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(tail));
  return res;
}

double FrechetMetric::strictness_upper_bound(const Vec& v) const {
  if (mode_ == Mode::sqrt_scalar) return std::numeric_limits<double>::infinity();
  Vec p = tower_->profile(v);
  double s = 0.0;
  for (std::size_t n = 0; n < config_.levels; ++n) {
    s += config_.weights[n] * p[static_cast<Eigen::Index>(n)];
  }
  return config_.phi.slope_at_zero() * s;
}

}  // namespace gmv
