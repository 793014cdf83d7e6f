#include "gmv/seminorms.hpp"

#include "gmv/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gmv {

SeminormLevel SeminormLevel::max(Mat S) {
  SeminormLevel l;
  l.kind = Kind::max_form;
  l.rows = std::move(S);
  return l;
}

SeminormLevel SeminormLevel::weighted_max(Vec w) {
  SeminormLevel l;
  l.kind = Kind::max_form;
  l.diagonal = true;
  l.dweights = std::move(w);
  l.rows = Mat(l.dweights.asDiagonal());
  return l;
}

SeminormLevel SeminormLevel::euclid(Mat W) {
  SeminormLevel l;
  l.kind = Kind::euclid_form;
  l.rows = std::move(W);
  return l;
}

double SeminormLevel::eval(const Vec& v) const {
  if (kind == Kind::euclid_form) return (rows * v).norm();
  if (diagonal) return dweights.cwiseProduct(v).cwiseAbs().maxCoeff();
  if (rows.rows() == 0) return 0.0;
  return (rows * v).cwiseAbs().maxCoeff();
}

SeminormFamily::SeminormFamily(std::vector<SeminormLevel> raw, bool monotonized)
    : raw_(std::move(raw)), monotonized_(monotonized) {
  for (std::size_t k = 1; k < raw_.size(); ++k) {
    if (raw_[k].dim() != raw_[0].dim()) {
      throw std::invalid_argument("seminorm levels disagree on dimension");
    }
  }
}

double SeminormFamily::eval(std::size_t n, const Vec& v) const {
  if (n >= raw_.size()) throw std::out_of_range("seminorm level out of range");
  if (!monotonized_) return raw_[n].eval(v);
  double m = 0.0;
  for (std::size_t k = 0; k <= n; ++k) m = std::max(m, raw_[k].eval(v));
  return m;
}

Vec SeminormFamily::profile(const Vec& v) const {
  Vec p(raw_.size());
  double m = 0.0;
  for (std::size_t k = 0; k < raw_.size(); ++k) {
    double r = raw_[k].eval(v);
    m = monotonized_ ? std::max(m, r) : r;
    p[static_cast<Eigen::Index>(k)] = m;
  }
  return p;
}

double SeminormFamily::cross_level_bound(std::size_t m, std::size_t n) const {
  if (n >= raw_.size() || m > n)
    throw std::out_of_range("seminorm level out of range");
  if (m == n) return 1.0;

  // The bound needs the effective weight vectors of both tower levels: with
  // cumulative-max composition the level-k weight at coordinate i is the max
  // of the raw diagonal weights through k.  Any non-diagonal raw level in the
  // prefix leaves the ratio unknown.
  const auto D = static_cast<Eigen::Index>(dim());
  Vec wm = Vec::Zero(D), wn = Vec::Zero(D);
  for (std::size_t k = 0; k <= n; ++k) {
    const SeminormLevel& l = raw_[k];
    if (l.kind != SeminormLevel::Kind::max_form || !l.diagonal)
      return std::numeric_limits<double>::infinity();
    if (!monotonized_) {
      if (k == m) wm = l.dweights;
      if (k == n) wn = l.dweights;
      continue;
    }
    if (k <= m) wm = wm.cwiseMax(l.dweights);
    wn = wn.cwiseMax(l.dweights);
  }

  double c = 0.0;
  for (Eigen::Index i = 0; i < D; ++i) {
    if (wn[i] == 0.0) continue;  // coordinate invisible at level n
    if (wm[i] == 0.0) return std::numeric_limits<double>::infinity();
    c = std::max(c, wn[i] / wm[i]);
  }
  return c;
}

SeminormFamily::SampleReport SeminormFamily::validate_samples(std::uint64_t seed,
                                                              int n_samples,
                                                              double tol) const {
  SampleReport rep;
  CounterRng rng(seed, "seminorm-validate");
  const auto D = static_cast<Eigen::Index>(dim());
  for (int s = 0; s < n_samples; ++s) {
    Vec u(D), v(D);
    for (Eigen::Index i = 0; i < D; ++i) u[i] = rng.uniform(-1.0, 1.0);
    for (Eigen::Index i = 0; i < D; ++i) v[i] = rng.uniform(-1.0, 1.0);
    double lam = rng.uniform(-3.0, 3.0);
    Vec pu = profile(u), pv = profile(v), ps = profile(u + v), pl = profile(lam * u);
    for (std::size_t n = 0; n < levels(); ++n) {
      auto i = static_cast<Eigen::Index>(n);
      double scale = std::max(1.0, std::abs(lam) * pu[i]);
      double homo = std::abs(pl[i] - std::abs(lam) * pu[i]) / scale;
      rep.worst_homogeneity = std::max(rep.worst_homogeneity, homo);
      if (homo > tol) rep.homogeneous = false;
      double tri = ps[i] - (pu[i] + pv[i]);
      rep.worst_triangle = std::max(rep.worst_triangle, tri);
      if (tri > tol * std::max(1.0, pu[i] + pv[i])) rep.triangle = false;
    }
  }
  return rep;
}

}  // namespace gmv
