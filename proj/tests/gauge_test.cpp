#include "gmv/gauge.hpp"
#include "gmv/model.hpp"
#include "gmv/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace gmv;

namespace {
Vec random_vec(CounterRng& rng, int dim) {
  Vec v(dim);
  for (int i = 0; i < dim; ++i) v[i] = rng.next_gaussian();
  return v;
}
}  // namespace

TEST_CASE("box lower end is homogeneous, subadditive, and below the star upper end") {
  ModelSpace m = ModelSpace::sequence_power("seq", 6, 3);
  DyadicGauge g(m);
  CounterRng rng(21, "gauge");
  for (std::size_t n = 0; n < m.levels(); ++n) {
    for (int t = 0; t < 120; ++t) {
      Vec u = random_vec(rng, 6), v = random_vec(rng, 6);
      double gu = g.box_lower(n, u), gv = g.box_lower(n, v);
      CHECK(g.box_lower(n, u + v) <= gu + gv + 1e-10 * (1.0 + gu + gv));
      double s = rng.uniform(0.25, 4.0);
      CHECK(g.box_lower(n, s * u) == doctest::Approx(s * gu).epsilon(1e-10));
      CHECK(gu <= g.star_upper(n, u) * (1.0 + 1e-9) + 1e-12);
    }
  }
}

TEST_CASE("both gauge ends certify membership through the metric") {
  // Scaling v to gauge value 1 from either end must land on the correct side
  // of the metric ball boundary d(., 0) <= 2^{-n}.
  ModelSpace m = ModelSpace::sequence_power("seq", 5, 2);
  DyadicGauge g(m);
  const FrechetMetric& d = m.metric();
  CounterRng rng(22, "membership");
  for (std::size_t n = 0; n < m.levels(); ++n) {
    const double radius = std::exp2(-static_cast<double>(n));
    for (int t = 0; t < 80; ++t) {
      Vec v = random_vec(rng, 5);
      double lo = g.box_lower(n, v);
      double hi = g.star_upper(n, v);
      REQUIRE(std::isfinite(hi));
      // The star end comes from a ray bisection that stops inside the ball.
      CHECK(d.to_zero(v / hi) <= radius * (1.0 + 1e-12));
      if (n == 0) {
        // Every radius-1 level constraint admits the whole space (the shape
        // function never reaches 1), so the level-0 box end vanishes
        // identically and certifies nothing.
        CHECK(lo == 0.0);
      } else {
        REQUIRE(lo > 0.0);
        // Beyond the box end some level constraint alone overruns the budget.
        CHECK(d.to_zero(v / (lo * (1.0 - 1e-6))) >= radius * (1.0 - 1e-9));
      }
    }
  }
}

TEST_CASE("dyadic gauge doubling: level n+1 gauges dominate twice level n") {
  ModelSpace m = ModelSpace::sequence_power("seq", 5, 3);
  DyadicGauge g(m);
  CounterRng rng(23, "doubling");
  for (std::size_t n = 0; n + 1 < m.levels(); ++n) {
    for (int t = 0; t < 60; ++t) {
      Vec v = random_vec(rng, 5);
      CHECK(g.box_lower(n + 1, v) >= 2.0 * g.box_lower(n, v) * (1.0 - 1e-12));
      CHECK(g.star_upper(n + 1, v) >= 2.0 * g.box_lower(n, v) * (1.0 - 1e-12));
    }
  }
}

TEST_CASE("point gauge brackets the two ends and is exact in exact mode") {
  ModelSpace single = ModelSpace::sequence_power("one", 4, 0);
  DyadicGauge g1(single);
  CHECK(g1.exact_mode());
  CounterRng rng(24, "point");
  for (int t = 0; t < 50; ++t) {
    Vec v = random_vec(rng, 4);
    GaugeValue pg = g1.point_gauge(0, v);
    CHECK(pg.lower == doctest::Approx(pg.upper).epsilon(1e-12));
  }
  ModelSpace multi = ModelSpace::sequence_power("more", 4, 3);
  DyadicGauge gm(multi);
  for (int t = 0; t < 50; ++t) {
    Vec v = random_vec(rng, 4);
    GaugeValue pg = gm.point_gauge(2, v);
    CHECK(pg.lower <= pg.upper * (1.0 + 1e-12));
    CHECK(pg.lower >= gm.box_lower(2, v) * (1.0 - 1e-12));
    CHECK(pg.upper <= gm.star_upper(2, v) * (1.0 + 1e-12));
  }
}

TEST_CASE("ball sampler: every sample of level n lies in the radius-2^{-n} ball") {
  ModelSpace m = ModelSpace::sequence_power("seq", 4, 2);
  BallSampler sampler(m, 99, 2, 16);
  const FrechetMetric& d = m.metric();
  for (std::size_t n = 0; n <= sampler.max_level(); ++n) {
    const Mat& pts = sampler.samples(n);
    REQUIRE(pts.cols() > 0);
    const double radius = std::exp2(-static_cast<double>(n));
    for (Eigen::Index c = 0; c < pts.cols(); ++c)
      CHECK(d.to_zero(pts.col(c)) <= radius * (1.0 + 1e-9));
  }
}
