#include "gmv/gauge.hpp"

#include "gmv/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace gmv {

namespace {

constexpr int kBisectIters = 60;
constexpr double kBisectAbsTol = 1e-10;
// Exponent guards for the power-of-two bracket scan; beyond these the gauge
// is indistinguishable from 0 / +inf at double precision and the reached
// bracket end is still a valid certified bound.
constexpr int kMaxExp = 1020;
constexpr int kMinExp = -1060;

}  // namespace

DyadicGauge::DyadicGauge(std::shared_ptr<const SeminormFamily> tower, GradingConfig config,
                         FrechetMetric::Mode mode)
    : tower_(std::move(tower)), metric_(tower_, std::move(config), mode) {
  sqrt_ = mode == FrechetMetric::Mode::sqrt_scalar;
  exact_ = sqrt_ || tower_->levels() == 1;
}

DyadicGauge::DyadicGauge(const ModelSpace& model)
    : DyadicGauge(model.family_ptr(), model.metric().config(), model.metric().mode()) {}

void DyadicGauge::ensure_level(std::size_t n) const {
  const auto& cfg = metric_.config();
  while (box_inv_radii_.size() <= n) {
    std::size_t m = box_inv_radii_.size();
    double radius = std::ldexp(1.0, -static_cast<int>(m));
    Vec inv = Vec::Zero(static_cast<Eigen::Index>(cfg.levels));
    for (std::size_t k = 0; k < cfg.levels; ++k) {
      double cap = radius / cfg.weights[k];
      if (cap < cfg.phi.sup()) {
        inv[static_cast<Eigen::Index>(k)] = 1.0 / cfg.phi.inverse(cap);
      }
      // else: a ball of this radius puts no cap on level k; constraint vacuous.
    }
    box_inv_radii_.push_back(std::move(inv));
  }
}

double DyadicGauge::box_radius(std::size_t n, std::size_t k) const {
  if (k >= metric_.config().levels) throw std::out_of_range("seminorm level out of range");
  ensure_level(n);
  double inv = box_inv_radii_[n][static_cast<Eigen::Index>(k)];
  return inv > 0.0 ? 1.0 / inv : std::numeric_limits<double>::infinity();
}

double DyadicGauge::box_lower_profile(std::size_t n, const Vec& profile) const {
  if (sqrt_) {
    // The radius-2^{-n} sqrt ball is the interval |x| <= 4^{-n}: exact gauge.
    return std::abs(profile[0]) * std::ldexp(1.0, 2 * static_cast<int>(n));
  }
  ensure_level(n);
  const Vec& inv = box_inv_radii_[n];
  double best = 0.0;
  for (Eigen::Index k = 0; k < inv.size(); ++k) {
    double cand = profile[k] * inv[k];
    if (cand > best) best = cand;
  }
  return best;
}

double DyadicGauge::box_lower(std::size_t n, const Vec& v) const {
  return box_lower_profile(n, tower_->profile(v));
}

double DyadicGauge::ray_entry_profile(const Vec& profile, double radius) const {
  if (sqrt_) throw std::logic_error("ray bisection is a sum-form facility");
  if (profile.size() == 0 || profile.maxCoeff() <= 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  if (metric_.ray_sup(profile) <= radius) {
    return std::numeric_limits<double>::infinity();
  }
  auto g = [&](double t) { return metric_.along_ray(profile, t); };

  // Power-of-two bracket: find j with g(2^{j-1}) <= radius < g(2^j).  Using
  // binary endpoints keeps every bisection iterate exactly binary-scaled, so
  // doubling the profile exactly halves the returned entry point.
  int j = 0;
  if (g(1.0) > radius) {
    while (j > kMinExp && g(std::ldexp(1.0, j - 1)) > radius) --j;
    if (j == kMinExp) return std::ldexp(1.0, kMinExp);  // certified: inside at this t
  } else {
    while (j < kMaxExp && g(std::ldexp(1.0, j)) <= radius) ++j;
    if (j == kMaxExp) return std::ldexp(1.0, kMaxExp - 1);
  }
  double lo = std::ldexp(1.0, j - 1);  // g(lo) <= radius
  double hi = std::ldexp(1.0, j);      // g(hi) >  radius
  for (int it = 0; it < kBisectIters && hi - lo > kBisectAbsTol * lo; ++it) {
    double mid = (lo + hi) / 2.0;
    if (g(mid) <= radius) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

double DyadicGauge::star_upper_profile(std::size_t n, const Vec& profile) const {
  if (sqrt_) return box_lower_profile(n, profile);  // exact there
  double t = ray_entry_profile(profile, std::ldexp(1.0, -static_cast<int>(n)));
  if (t == std::numeric_limits<double>::infinity()) return 0.0;
  return 1.0 / t;
}

double DyadicGauge::star_upper(std::size_t n, const Vec& v) const {
  return star_upper_profile(n, tower_->profile(v));
}

GaugeValue DyadicGauge::point_gauge_profile(std::size_t n, const Vec& profile) const {
  if (sqrt_) return GaugeValue::exact(box_lower_profile(n, profile));
  if (metric_.ray_sup(profile) <= std::ldexp(1.0, -static_cast<int>(n))) {
    // The whole ray stays inside the ball: gauge exactly zero.
    return GaugeValue::exact(0.0);
  }
  if (tower_->levels() == 1) {
    // One seminorm level: the ball is already convex and the box is the ball.
    return GaugeValue::exact(box_lower_profile(n, profile));
  }
  return GaugeValue::bracket(box_lower_profile(n, profile), star_upper_profile(n, profile));
}

GaugeValue DyadicGauge::point_gauge(std::size_t n, const Vec& v) const {
  return point_gauge_profile(n, tower_->profile(v));
}

BallSampler::BallSampler(const ModelSpace& model, std::uint64_t seed, std::size_t max_level,
                         std::size_t dirs_per_level)
    : seed_(seed) {
  const auto D = static_cast<Eigen::Index>(model.dim());
  dirs_per_level_ = dirs_per_level;

  DyadicGauge gauge(model);
  const SeminormFamily& fam = model.family();

  sets_.resize(max_level + 1);
  CounterRng rng(seed, "ball-sampler/" + model.id);

  Mat prev(D, 0);
  for (std::size_t lev = max_level + 1; lev-- > 0;) {
    double radius = std::ldexp(1.0, -static_cast<int>(lev));
    std::size_t dirs = dirs_per_level_ ? dirs_per_level_ : 2 * model.dim() * (lev + 4);
    auto fresh_count = static_cast<Eigen::Index>(2 * model.dim() + dirs);
    Mat block(D, fresh_count + prev.cols());
    CounterRng lev_rng = rng.substream("level-" + std::to_string(lev));
    for (Eigen::Index c = 0; c < fresh_count; ++c) {
      Vec u(D);
      if (c < 2 * D) {
        u.setZero();
        u[c / 2] = (c % 2 == 0) ? 1.0 : -1.0;
      } else {
        for (Eigen::Index i = 0; i < D; ++i) u[i] = lev_rng.next_gaussian();
        double nrm = u.norm();
        if (nrm == 0.0) u[0] = 1.0; else u /= nrm;
      }
      double t = gauge.ray_entry_profile(fam.profile(u), radius);
      // A ray that never leaves the ball makes the hull unbounded in that
      // direction; clamp so the sample stays a finite inner approximation.
      if (!(t < std::ldexp(1.0, 60))) t = std::ldexp(1.0, 60);
      block.col(c) = t * u;
    }
    if (prev.cols() > 0) {
      block.rightCols(prev.cols()) = 2.0 * prev;  // exact in floating point
    }
    sets_[lev] = std::move(block);
    prev = sets_[lev];
  }
}

}  // namespace gmv
