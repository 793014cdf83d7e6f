#include "gmv/jets.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace gmv;

TEST_CASE("smoothstep: endpoint values, symmetry, and flat ends") {
  Smoothstep s(8);
  CHECK(s.eval(0.0) == 0.0);
  CHECK(s.eval(1.0) == 1.0);
  CHECK(s.eval(0.5) == doctest::Approx(0.5).epsilon(1e-12));
  double prev = 0.0;
  for (double u = 0.0; u <= 1.0; u += 1.0 / 64.0) {
    double v = s.eval(u);
    CHECK(v >= prev - 1e-15);
    prev = v;
  }
  // All derivatives vanish identically at and beyond the ends; low orders
  // also decay fast approaching them (order q behaves like u^{Q+1-q}).
  for (int q = 1; q <= 8; ++q) {
    CHECK(s.eval(0.0, q) == 0.0);
    CHECK(s.eval(-0.5, q) == 0.0);
    CHECK(s.eval(1.0, q) == 0.0);
    CHECK(s.eval(1.5, q) == 0.0);
  }
  CHECK(s.eval(1.5) == 1.0);
  for (int q = 1; q <= 3; ++q) {
    CHECK(std::abs(s.eval(1e-3, q)) <= 1e-9);
    CHECK(std::abs(s.eval(1.0 - 1e-3, q)) <= 1e-9);
  }
}

TEST_CASE("prescribed derivative conditions are met exactly") {
  std::vector<double> points{0.0, 0.3, 0.8};
  std::vector<double> values{1.0, -2.0, 0.5};
  JetResult jr = prescribed_jet(points, values, 2);
  REQUIRE(jr.report.conditions.size() == 3);
  for (std::size_t n = 0; n < 3; ++n) {
    const JetCondition& c = jr.report.conditions[n];
    CHECK(c.rel_err == 0.0);  // plateau construction, not approximation
    CHECK(c.achieved == doctest::Approx(values[n]).epsilon(1e-15));
    CHECK(jr.f.eval(points[n], static_cast<int>(n)) ==
          doctest::Approx(values[n]).epsilon(1e-15));
  }
  CHECK(jr.report.supports_disjoint);
  CHECK(jr.report.fd_max_rel_err <= 1e-6);
}

TEST_CASE("smallness enforcement pushes every lower derivative under 2^{-n}") {
  std::vector<double> points{0.0, 0.25, 0.5, 0.75, 1.0};
  std::vector<double> values{1.0, 1.0, 1.0, 1.0, 1.0};
  JetParams params;
  params.enforce_smallness = true;
  JetResult jr = prescribed_jet(points, values, 4, params);
  REQUIRE(!jr.report.smallness.empty());
  for (const auto& s : jr.report.smallness) {
    CHECK(s.ok);
    CHECK(s.norm < s.bound);
    CHECK(s.bound == doctest::Approx(std::exp2(-static_cast<double>(s.order))));
  }
  for (const auto& c : jr.report.conditions) CHECK(c.rel_err == 0.0);
}

TEST_CASE("explicit widths can force a support overlap, which is an error") {
  std::vector<double> points{0.25, 0.250001};
  std::vector<double> values{1.0, 1.0};
  JetParams params;
  params.widths = {0.25, 0.25};
  CHECK_THROWS_AS(prescribed_jet(points, values, 1, params), std::invalid_argument);
  // Automatic widths shrink to keep the same point pair disjoint.
  JetResult jr = prescribed_jet(points, values, 1);
  CHECK(jr.report.supports_disjoint);
}

TEST_CASE("coincident condition points are rejected") {
  CHECK_THROWS_AS(prescribed_jet({0.5, 0.5}, {1.0, 2.0}, 1), std::invalid_argument);
}

TEST_CASE("off-support evaluations vanish identically") {
  JetResult jr = prescribed_jet({0.0, 0.5}, {1.0, 1.0}, 1);
  const JetBump& b0 = jr.f.bumps()[0];
  double far = b0.support_hi() + 1.0;
  for (int k = 0; k <= 3; ++k) CHECK(jr.f.eval(far, k) == 0.0);
}
