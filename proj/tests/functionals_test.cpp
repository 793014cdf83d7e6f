#include "gmv/functionals.hpp"
#include "gmv/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace gmv;

TEST_CASE("dominated extension: minimal mass matches the closed form |c| / mu_L(w)") {
  ModelSpace m = ModelSpace::sequence_power("seq", 4, 2);
  SUBCASE("unit coordinate, unit level weight") {
    Vec w = Vec::Zero(4);
    w[0] = 1.0;
    ExtensionReport er = dominated_extension(m, w, 0.5, {2, 1.0});
    CHECK(er.feasible);
    CHECK(er.needed == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(er.value_at_w == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(er.max_violation <= 1e-9);
  }
  SUBCASE("heavier coordinate divides the needed mass") {
    Vec w = Vec::Zero(4);
    w[3] = 1.0;  // mu_2(e_3) = 16
    ExtensionReport er = dominated_extension(m, w, 2.0, {2, 1.0});
    CHECK(er.feasible);
    CHECK(er.needed == doctest::Approx(2.0 / 16.0).epsilon(1e-9));
    CHECK(er.max_violation <= 1e-9);
  }
  SUBCASE("pin value beyond the domination scale is infeasible") {
    Vec w = Vec::Zero(4);
    w[0] = 1.0;  // mu_2(e_0) = 1, so |c| <= scale is the exact threshold
    ExtensionReport er = dominated_extension(m, w, 3.0, {2, 1.0});
    CHECK(!er.feasible);
  }
  SUBCASE("zero pin produces the zero functional") {
    Vec w = Vec::Ones(4);
    ExtensionReport er = dominated_extension(m, w, 0.0, {2, 1.0});
    CHECK(er.feasible);
    CHECK(er.functional.cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("dominated extension verifies domination on random probes") {
  ModelSpace m = ModelSpace::sequence_power("seq", 6, 3);
  CounterRng rng(51, "ext");
  for (int t = 0; t < 10; ++t) {
    Vec w(6);
    for (int i = 0; i < 6; ++i) w[i] = rng.next_gaussian();
    if (w.cwiseAbs().maxCoeff() < 1e-6) continue;
    double scale = rng.uniform(0.5, 2.0);
    double mu = m.family().eval(3, w);
    double c = 0.5 * scale * mu;  // strictly inside the feasible range
    ExtensionReport er = dominated_extension(m, w, c, {3, scale}, 99, 4096);
    REQUIRE(er.feasible);
    CHECK(er.max_violation <= 1e-9);
    // Independent spot check of f <= scale * mu_3 on fresh directions.
    CounterRng probe(777, "ext-probe");
    for (int s = 0; s < 200; ++s) {
      Vec x(6);
      for (int i = 0; i < 6; ++i) x[i] = probe.next_gaussian();
      CHECK(er.functional.dot(x) <= scale * m.family().eval(3, x) + 1e-9);
    }
  }
}

TEST_CASE("level beyond the truncation is rejected") {
  ModelSpace m = ModelSpace::sequence_power("seq", 4, 2);
  CHECK_THROWS_AS(dominated_extension(m, Vec::Ones(4), 1.0, {7, 1.0}),
                  std::invalid_argument);
}

TEST_CASE("unbounded functional: geometric values on metrically small witnesses") {
  ModelSpace m = ModelSpace::sequence_power("seq", 8, 3);
  UnboundedLadder ul = unbounded_functional(m, 0.25, 3);
  REQUIRE(ul.values.size() == 3);
  for (Eigen::Index n = 0; n < 3; ++n) {
    CHECK(ul.values[n] == doctest::Approx(std::exp2(static_cast<double>(n))));
    CHECK(ul.witness_dists[n] < 0.25);
    CHECK(std::isfinite(ul.stage_norms[n]));
  }
  // The scores on the eps-ball witnesses grow without bound while each
  // partial-sum stage keeps a finite continuity constant.
  CHECK(ul.values[2] > ul.values[0]);
}

TEST_CASE("unbounded functional needs one coordinate per term") {
  ModelSpace m = ModelSpace::sequence_power("seq", 4, 2);
  CHECK_THROWS_AS(unbounded_functional(m, 0.5, 9), std::invalid_argument);
}

TEST_CASE("discontinuity gadget: null sequence with diverging scores") {
  ModelSpace m = ModelSpace::sequence_power("seq", 8, 3);
  EvalGadget gadget(m, 5);
  const GadgetReport& rep = gadget.report();
  REQUIRE(rep.rungs.size() == 5);
  CHECK(rep.supports_disjoint);
  CHECK(rep.min_gap > 0.0);
  CHECK(rep.far_value == 0.0);
  for (const auto& rung : rep.rungs) {
    CHECK(rung.value == doctest::Approx(static_cast<double>(rung.index) + 1.0));
    CHECK(rung.value > static_cast<double>(rung.index));
    CHECK(rung.dist <= std::exp2(-static_cast<double>(rung.index)));
    CHECK(rung.psi_at_w == 1.0);
    // E evaluated through the public entry point agrees with the report.
    CHECK(gadget.eval(rung.w) == doctest::Approx(rung.value).epsilon(1e-12));
  }
}
