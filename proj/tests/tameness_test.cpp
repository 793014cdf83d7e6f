#include "gmv/tameness.hpp"
#include "gmv/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace gmv;

TEST_CASE("differentiation certifies at order one with unit bounds") {
  ModelSpace m = ModelSpace::trig("t", 16, 4, 65);
  GradedOperator D = make_derivative(m);
  TamenessCertificate cert = certify_tame(m, m, D, 1, 0);
  CHECK(cert.valid);
  CHECK(cert.order == 1);
  CHECK(cert.base == 0);
  CHECK(cert.backend == "exact_euclidean");
  REQUIRE(cert.bounds.size() > 0);
  for (Eigen::Index i = 0; i < cert.bounds.size(); ++i) {
    CHECK(cert.bounds[i] <= 1.0 + 1e-9);
    CHECK(cert.bounds[i] >= cert.lower_hints[i] * (1.0 - 1e-12));
  }
  CHECK(cert.bound_at(cert.base) == doctest::Approx(cert.bounds[0]));
}

TEST_CASE("recheck accepts a fresh seed and rejects a different model") {
  ModelSpace m = ModelSpace::trig("t", 8, 3, 33);
  GradedOperator D = make_derivative(m);
  TamenessCertificate cert = certify_tame(m, m, D, 1, 0);
  RecheckReport ok = recheck_certificate(m, m, D, cert, cert.seed + 77);
  CHECK(ok.checksums_match);
  CHECK(ok.bounds_respected);
  CHECK(ok.ok());
  ModelSpace other = ModelSpace::trig("t", 8, 3, 37);  // different grid
  GradedOperator D2 = make_derivative(other);
  RecheckReport bad = recheck_certificate(other, other, D2, cert, cert.seed + 78);
  CHECK(!bad.checksums_match);
  CHECK(!bad.ok());
}

TEST_CASE("composition: certified bounds multiply with the level shift") {
  ModelSpace m = ModelSpace::trig("t", 10, 4, 41);
  GradedOperator D = make_derivative(m);
  TamenessCertificate c1 = certify_tame(m, m, D, 1, 0);
  TamenessCertificate c2 = c1;
  TamenessCertificate comp = compose_certified(c1, c2);
  CHECK(comp.valid);
  CHECK(comp.order == 2);
  GradedOperator DD = compose_operators(D, D);
  TamenessCertificate direct = certify_tame(m, m, DD, 2, 0);
  REQUIRE(direct.bounds.size() <= comp.bounds.size());
  for (Eigen::Index i = 0; i < direct.bounds.size(); ++i)
    CHECK(comp.bounds[i] >= direct.bounds[i] * (1.0 - 1e-9));
}

TEST_CASE("graded operator distance: scaling gaps shrink to zero") {
  // A_k = (1 - 2^{-k}) D converges to D; the certified distance to D must
  // decrease monotonically (up to sampling noise) and hit zero at A = D.
  ModelSpace m = ModelSpace::trig("t", 8, 3, 33);
  GradedOperator D = make_derivative(m);
  TamenessCertificate cd = certify_tame(m, m, D, 1, 0);
  DyadicNormEngine engine(m, m, 3);
  CHECK(trb_metric(engine, D, cd, D, cd, 1, 0) == doctest::Approx(0.0));
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= 4; ++k) {
    GradedOperator A = scale_operator(D, 1.0 - std::exp2(-k));
    TamenessCertificate ca = certify_tame(m, m, A, 1, 0);
    double dist = trb_metric(engine, A, ca, D, cd, 1, 0);
    CHECK(dist >= 0.0);
    CHECK(dist <= prev * (1.0 + 1e-9));
    prev = dist;
  }
  GradedOperator half = scale_operator(D, 0.5);
  TamenessCertificate ch = certify_tame(m, m, half, 1, 0);
  CHECK(prev <= trb_metric(engine, half, ch, D, cd, 1, 0));
}

TEST_CASE("evaluation modulus: certified operator balls keep images small") {
  ModelSpace m = ModelSpace::trig("t", 8, 3, 33);
  ModulusReport rep = eval_modulus(m, 2, 1, 400, 1234);
  CHECK(rep.trials == 400);
  CHECK(rep.violations == 0);
  CHECK(rep.ok());
  CHECK(rep.delta == doctest::Approx(std::exp2(-2.0) * 0.5 / 2.0));
  CHECK(rep.worst_ratio <= 1.0 + 1e-9);
}

TEST_CASE("divergence scan flags the unshifted derivative family") {
  auto builder = [](std::size_t n) {
    ModelSpace model = ModelSpace::trig("scan-" + std::to_string(n), n, 2, 4 * n + 1);
    GradedOperator op = make_derivative(model);
    return std::make_pair(std::move(model), std::move(op));
  };
  DivergenceEvidence ev = nontameness_scan(builder, {4, 8, 16}, 0);
  CHECK(ev.verdict == "diverging_fit");
  CHECK(ev.strictly_increasing);
  CHECK(ev.slope > 0.5);
  REQUIRE(ev.lower_bounds.size() == 3);
  for (Eigen::Index i = 0; i < 3; ++i) CHECK(ev.lower_bounds[i] > 0.0);
}

TEST_CASE("scaled derivative family with the level shift stays bounded") {
  auto builder = [](std::size_t n) {
    ModelSpace model = ModelSpace::trig("flat-" + std::to_string(n), n, 2, 4 * n + 1);
    // Normalizing by the bandwidth caps the unshifted norm at one.
    GradedOperator op = scale_operator(make_derivative(model), 1.0 / static_cast<double>(n));
    op.id = "d/dt-normalized";
    return std::make_pair(std::move(model), std::move(op));
  };
  DivergenceEvidence ev = nontameness_scan(builder, {4, 8, 16}, 0);
  CHECK(ev.verdict == "bounded_fit");
}
