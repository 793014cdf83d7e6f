#include "gmv/grading.hpp"

#include <cmath>
#include <limits>

namespace gmv {

double ShapeFn::operator()(double t) const {
  switch (kind) {
    case Kind::rational:      return t / (1.0 + t);
    case Kind::one_minus_exp: return -std::expm1(-t);
    case Kind::clip:          return t < 1.0 ? t : 1.0;
  }
  return 0.0;
}

double ShapeFn::inverse(double y) const {
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (y < 0.0) throw std::invalid_argument("ShapeFn::inverse: negative argument");
  if (y >= 1.0) return inf;
  switch (kind) {
    case Kind::rational:      return y / (1.0 - y);
    case Kind::one_minus_exp: return -std::log1p(-y);
    case Kind::clip:          return y;
  }
  return inf;
}

std::string ShapeFn::name() const {
  switch (kind) {
    case Kind::rational:      return "rational";
    case Kind::one_minus_exp: return "one_minus_exp";
    case Kind::clip:          return "clip";
  }
  return "?";
}

ShapeFn ShapeFn::from_name(const std::string& name) {
  if (name == "rational") return {Kind::rational};
  if (name == "one_minus_exp") return {Kind::one_minus_exp};
  if (name == "clip") return {Kind::clip};
  throw std::invalid_argument("unknown shape function: " + name);
}

GradingConfig GradingConfig::dyadic(std::size_t levels, ShapeFn phi) {
  GradingConfig cfg;
  cfg.levels = levels;
  cfg.weights.resize(levels);
  double w = 1.0;
  for (std::size_t n = 0; n < levels; ++n, w *= 0.5) cfg.weights[n] = w;
  cfg.phi = phi;
  return cfg;
}

ShapeFnReport GradingConfig::validate(std::size_t grid_points) const {
  ShapeFnReport rep;
  const ShapeFn& f = phi;
  rep.zero_at_zero = f(0.0) == 0.0;

  // Log-spaced grid hitting both the small-t and saturation regimes.
  std::vector<double> grid;
  grid.reserve(grid_points);
  for (std::size_t i = 0; i < grid_points; ++i) {
    double e = -6.0 + 9.0 * static_cast<double>(i) / static_cast<double>(grid_points - 1);
    grid.push_back(std::pow(10.0, e));
  }

  rep.strictly_increasing = true;
  rep.bounded_by_sup = true;
  double prev_t = 0.0, prev_v = f(0.0);
  for (double t : grid) {
    double v = f(t);
    if (t > prev_t && !(v > prev_v)) rep.strictly_increasing = false;
    if (v > f.sup() + 1e-15) rep.bounded_by_sup = false;
    prev_t = t;
    prev_v = v;
  }

  rep.subadditive = true;
  for (std::size_t i = 0; i < grid.size(); i += 4) {
    for (std::size_t j = i; j < grid.size(); j += 4) {
      if (f(grid[i] + grid[j]) > f(grid[i]) + f(grid[j]) + 1e-12) {
        rep.subadditive = false;
      }
    }
  }
  return rep;
}

}  // namespace gmv
