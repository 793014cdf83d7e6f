#include "gmv/model.hpp"

#include "gmv/rng.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

namespace gmv {

namespace {

std::uint64_t hash_bytes(const void* data, std::size_t n, std::uint64_t h) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t hash_matrix(const Mat& m, std::uint64_t h) {
  h = hash_bytes(&m(0, 0), sizeof(double) * static_cast<std::size_t>(m.size()), h);
  return h;
}

}  // namespace

GradedVector ModelSpace::vector(Vec coords) const {
  if (static_cast<std::size_t>(coords.size()) != dim()) {
    throw std::invalid_argument("coordinate count does not match model dimension");
  }
  return GradedVector{id, std::move(coords)};
}

GradedVector ModelSpace::basis_vector(std::size_t k) const {
  Vec e = Vec::Zero(static_cast<Eigen::Index>(dim()));
  e[static_cast<Eigen::Index>(k)] = 1.0;
  return GradedVector{id, std::move(e)};
}

const Vec& ModelSpace::check(const GradedVector& v) const {
  if (v.model_id != id) {
    throw std::invalid_argument("vector belongs to model '" + v.model_id +
                                "', expected '" + id + "'");
  }
  return v.coords;
}

std::size_t ModelSpace::trig_modes() const {
  if (kind != Kind::trig) throw std::logic_error("not a trig model");
  return modes_;
}

std::size_t ModelSpace::grid_points() const {
  if (kind != Kind::trig) throw std::logic_error("not a trig model");
  return grid_.size();
}

const Mat& ModelSpace::diff_matrix() const {
  if (kind != Kind::trig) throw std::logic_error("not a trig model");
  return diff_;
}

const Mat& ModelSpace::derivative_rows(std::size_t j) const {
  if (kind != Kind::trig) throw std::logic_error("not a trig model");
  return deriv_rows_.at(j);
}

const std::vector<double>& ModelSpace::grid() const {
  if (kind != Kind::trig) throw std::logic_error("not a trig model");
  return grid_;
}

Vec ModelSpace::mode_coefficients(std::size_t m, bool sine) const {
  if (kind != Kind::trig) throw std::logic_error("not a trig model");
  if (m > modes_) throw std::out_of_range("mode exceeds model bandwidth");
  Vec c = Vec::Zero(static_cast<Eigen::Index>(dim()));
  if (m == 0) {
    if (sine) throw std::invalid_argument("sin(0 t) is not a basis function");
    c[0] = 1.0;
  } else {
    c[static_cast<Eigen::Index>(2 * m - 1 + (sine ? 1 : 0))] = 1.0;
  }
  return c;
}

Vec ModelSpace::eval_row(double x, std::size_t deriv_order) const {
  if (kind != Kind::trig) throw std::logic_error("not a trig model");
  Vec row(static_cast<Eigen::Index>(dim()));
  row[0] = deriv_order == 0 ? 1.0 : 0.0;
  for (std::size_t m = 1; m <= modes_; ++m) {
    // j-th derivative of cos(mt), sin(mt): m^j times the rotated pair.
    double amp = std::pow(static_cast<double>(m), static_cast<double>(deriv_order));
    double c, s;
    switch (deriv_order % 4) {
      case 0: c = std::cos(m * x); s = std::sin(m * x); break;
      case 1: c = -std::sin(m * x); s = std::cos(m * x); break;
      case 2: c = -std::cos(m * x); s = -std::sin(m * x); break;
      default: c = std::sin(m * x); s = -std::cos(m * x); break;
    }
    row[static_cast<Eigen::Index>(2 * m - 1)] = amp * c;
    row[static_cast<Eigen::Index>(2 * m)] = amp * s;
  }
  return row;
}

double ModelSpace::level_weight(std::size_t n, std::size_t k) const {
  if (kind != Kind::sequence) throw std::logic_error("not a sequence model");
  return level_weights_.at(n)[static_cast<Eigen::Index>(k)];
}

std::uint64_t ModelSpace::checksum() const {
  std::uint64_t h = fnv1a(id);
  h = hash_bytes(&kind, sizeof kind, h);
  for (std::size_t k = 0; k < family_->levels(); ++k) {
    h = hash_matrix(family_->raw_level(k).rows, h);
  }
  if (kind == Kind::trig) {
    h = hash_matrix(diff_, h);
    h = hash_bytes(grid_.data(), grid_.size() * sizeof(double), h);
  }
  return h;
}

ModelSpace ModelSpace::trig(std::string id, std::size_t modes, std::size_t top_level,
                            std::size_t grid_points, ShapeFn phi) {
  if (modes == 0) throw std::invalid_argument("trig model needs at least one mode");
  if (grid_points < 4 * modes) {
    throw std::invalid_argument("trig model requires a grid with >= 4*M points");
  }
  ModelSpace ms;
  ms.id = std::move(id);
  ms.kind = Kind::trig;
  ms.modes_ = modes;

  const auto D = static_cast<Eigen::Index>(2 * modes + 1);
  const auto G = static_cast<Eigen::Index>(grid_points);

  // Exact differentiation: constants die, each (cos, sin) pair rotates
  // scaled by its frequency.
  ms.diff_ = Mat::Zero(D, D);
  for (std::size_t m = 1; m <= modes; ++m) {
    auto c = static_cast<Eigen::Index>(2 * m - 1);
    auto s = static_cast<Eigen::Index>(2 * m);
    ms.diff_(s, c) = -static_cast<double>(m);  // (cos)' = -m sin
    ms.diff_(c, s) = static_cast<double>(m);   // (sin)' =  m cos
  }

  ms.grid_.resize(grid_points);
  for (std::size_t g = 0; g < grid_points; ++g) {
    ms.grid_[g] = static_cast<double>(g) / static_cast<double>(grid_points - 1);
  }

  Mat E(G, D);
  for (Eigen::Index g = 0; g < G; ++g) {
    double t = ms.grid_[static_cast<std::size_t>(g)];
    E(g, 0) = 1.0;
    for (std::size_t m = 1; m <= modes; ++m) {
      E(g, static_cast<Eigen::Index>(2 * m - 1)) = std::cos(m * t);
      E(g, static_cast<Eigen::Index>(2 * m)) = std::sin(m * t);
    }
  }

  ms.deriv_rows_.reserve(top_level + 1);
  Mat cur = E;
  ms.deriv_rows_.push_back(cur);
  for (std::size_t j = 1; j <= top_level; ++j) {
    cur = cur * ms.diff_;
    ms.deriv_rows_.push_back(cur);
  }

  std::vector<SeminormLevel> levels;
  levels.reserve(top_level + 1);
  for (std::size_t j = 0; j <= top_level; ++j) {
    levels.push_back(SeminormLevel::max(ms.deriv_rows_[j]));
  }
  ms.family_ = std::make_shared<SeminormFamily>(std::move(levels), true);
  ms.metric_ = FrechetMetric(ms.family_, GradingConfig::dyadic(top_level + 1, phi));
  return ms;
}

ModelSpace ModelSpace::sequence(std::string id, std::size_t dim, std::size_t top_level,
                                std::vector<Vec> level_weights, ShapeFn phi) {
  if (level_weights.empty()) {
    return sequence_power(std::move(id), dim, top_level, phi);
  }
  if (level_weights.size() != top_level + 1) {
    throw std::invalid_argument("need one weight vector per level");
  }
  for (std::size_t n = 0; n < level_weights.size(); ++n) {
    if (static_cast<std::size_t>(level_weights[n].size()) != dim) {
      throw std::invalid_argument("weight vector length must equal dimension");
    }
    if (level_weights[n].minCoeff() < 0.0) {
      throw std::invalid_argument("level weights must be nonnegative");
    }
    if (n > 0 && ((level_weights[n] - level_weights[n - 1]).minCoeff() < 0.0)) {
      throw std::invalid_argument("level weights must be entrywise nondecreasing in n");
    }
  }
  ModelSpace ms;
  ms.id = std::move(id);
  ms.kind = Kind::sequence;
  ms.level_weights_ = level_weights;
  std::vector<SeminormLevel> levels;
  levels.reserve(level_weights.size());
  for (auto& w : level_weights) levels.push_back(SeminormLevel::weighted_max(w));
  ms.family_ = std::make_shared<SeminormFamily>(std::move(levels), true);
  ms.metric_ = FrechetMetric(ms.family_, GradingConfig::dyadic(top_level + 1, phi));
  return ms;
}

ModelSpace ModelSpace::sequence_power(std::string id, std::size_t dim,
                                      std::size_t top_level, ShapeFn phi) {
  std::vector<Vec> weights(top_level + 1, Vec(static_cast<Eigen::Index>(dim)));
  for (std::size_t n = 0; n <= top_level; ++n) {
    for (std::size_t k = 0; k < dim; ++k) {
      weights[n][static_cast<Eigen::Index>(k)] =
          std::pow(static_cast<double>(k + 1), static_cast<double>(n));
    }
  }
  return sequence(std::move(id), dim, top_level, std::move(weights), phi);
}

ModelSpace ModelSpace::scalar(std::string id, std::size_t top_level, ShapeFn phi) {
  std::vector<Vec> weights(top_level + 1, Vec::Ones(1));
  return sequence(std::move(id), 1, top_level, std::move(weights), phi);
}

ModelSpace ModelSpace::scalar_sqrt(std::string id) {
  ModelSpace ms;
  ms.id = std::move(id);
  ms.kind = Kind::scalar;
  std::vector<SeminormLevel> levels;
  levels.push_back(SeminormLevel::weighted_max(Vec::Ones(1)));
  ms.family_ = std::make_shared<SeminormFamily>(std::move(levels), true);
  GradingConfig cfg = GradingConfig::dyadic(1);
  ms.metric_ = FrechetMetric(ms.family_, cfg, FrechetMetric::Mode::sqrt_scalar);
  return ms;
}

SinRatioResult sin_mode_ratio(const ModelSpace& model, std::size_t N) {
  if (2 * N > model.trig_modes())
    throw std::invalid_argument(
        "mode ratio needs N at most half the bandwidth so the grid sup is "
        "trustworthy");
  SinRatioResult r;
  Vec v = model.mode_coefficients(N, /*sine=*/true);
  const Mat& E0 = model.derivative_rows(0);
  const Mat& E1 = model.derivative_rows(1);
  r.denominator = (E0 * v).cwiseAbs().maxCoeff();
  r.numerator = (E1 * v).cwiseAbs().maxCoeff();
  r.ratio = r.numerator / r.denominator;
  return r;
}

StepWitness step_full_witness(const ModelSpace& model, double s) {
  if (model.kind != ModelSpace::Kind::trig) {
    throw std::invalid_argument("step witnesses live in trig models");
  }
  double mode_real = 2.0 * s;
  auto mode = static_cast<std::size_t>(std::llround(mode_real));
  if (std::abs(mode_real - static_cast<double>(mode)) > 1e-12 || mode == 0) {
    throw std::invalid_argument("2s must be a positive integer mode at finite bandwidth");
  }
  if (2 * mode > model.trig_modes()) {
    throw std::invalid_argument(
        "step witness frequency must stay within half the bandwidth so the "
        "grid resolves the oscillation");
  }
  StepWitness w;
  w.v = GradedVector{model.id, model.mode_coefficients(mode, /*sine=*/true)};
  w.seminorms = model.family().profile(w.v.coords);
  return w;
}

}  // namespace gmv
