#include "gmv/op_norm.hpp"
#include "gmv/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace gmv;

namespace {
Mat random_matrix(CounterRng& rng, int rows, int cols) {
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = rng.next_gaussian();
  return m;
}
}  // namespace

TEST_CASE("single-level plain tower: bracket closes on the max row sum") {
  ModelSpace m = ModelSpace::sequence_power("flat", 7, 0);
  CounterRng rng(31, "rowsum");
  for (int t = 0; t < 40; ++t) {
    GradedOperator A = make_matrix(m, m, random_matrix(rng, 7, 7), "A");
    double classical = A.matrix.cwiseAbs().rowwise().sum().maxCoeff();
    OpNormResult res = op_norm(m, m, A, 0, 0, OpNormVariant::hamilton);
    CHECK(res.value.lower == doctest::Approx(classical).epsilon(1e-12));
    CHECK(res.value.upper == doctest::Approx(classical).epsilon(1e-12));
  }
}

TEST_CASE("diagonal maps close exactly at matching levels") {
  ModelSpace m = ModelSpace::sequence_power("seq", 6, 3);
  CounterRng rng(32, "diag");
  for (int t = 0; t < 25; ++t) {
    Vec d(6);
    for (int i = 0; i < 6; ++i) d[i] = rng.next_gaussian();
    GradedOperator A = make_diagonal(m, d, "D");
    for (std::size_t n = 0; n < m.levels(); ++n) {
      OpNormResult res = op_norm(m, m, A, n, n, OpNormVariant::hamilton);
      // Same-level weighted max norm of a diagonal map: weights cancel.
      CHECK(res.value.upper == doctest::Approx(d.cwiseAbs().maxCoeff()).epsilon(1e-12));
      CHECK(res.value.lower == doctest::Approx(res.value.upper).epsilon(1e-12));
    }
  }
}

TEST_CASE("differentiation on a trig model: one derivative level absorbs it") {
  ModelSpace m = ModelSpace::trig("t", 12, 4, 49);
  GradedOperator D = make_derivative(m);
  // ||D f||_n <= ||f||_{n+1} with constant exactly 1.
  for (std::size_t n = 0; n + 1 < m.levels(); ++n) {
    OpNormResult res = op_norm(m, m, D, n + 1, n, OpNormVariant::hamilton);
    CHECK(res.value.upper <= 1.0 + 1e-9);
    CHECK(res.value.lower >= 0.99);  // grid sups keep the ratio barely below 1
  }
  // Without the level shift the norm grows with the bandwidth.
  OpNormResult flat = op_norm(m, m, D, 0, 0, OpNormVariant::hamilton);
  CHECK(flat.value.lower >= 12.0 * (1.0 - 1e-9));
}

TEST_CASE("dyadic variant brackets the hamilton value") {
  ModelSpace m = ModelSpace::sequence_power("seq", 5, 2);
  CounterRng rng(33, "bracket");
  OpNormParams params;
  params.lower_samples = 128;
  for (int t = 0; t < 15; ++t) {
    GradedOperator A = make_matrix(m, m, random_matrix(rng, 5, 5), "A");
    for (std::size_t n = 0; n < m.levels(); ++n) {
      OpNormResult exact = op_norm(m, m, A, n, n, OpNormVariant::hamilton, params);
      OpNormResult sampled = op_norm(m, m, A, n, n, OpNormVariant::dyadic, params);
      CHECK(sampled.value.lower <= sampled.value.upper * (1.0 + 1e-12));
      // A sampled lower bound can never exceed a certified upper bound and
      // vice versa; the two brackets must overlap.
      CHECK(sampled.value.lower <= exact.value.upper * (1.0 + 1e-9));
      CHECK(exact.value.lower <= sampled.value.upper * (1.0 + 1e-9));
    }
  }
}

TEST_CASE("norm table enforces both dyadic laws on every adjacent pair") {
  ModelSpace m = ModelSpace::sequence_power("seq", 5, 3);
  CounterRng rng(34, "laws");
  DyadicNormEngine engine(m, m, 3);
  for (int t = 0; t < 10; ++t) {
    GradedOperator A = make_matrix(m, m, random_matrix(rng, 5, 5), "A");
    auto tbl = engine.norm_table(A, 3, 3);
    for (Eigen::Index mm = 0; mm + 1 <= 3; ++mm)
      for (Eigen::Index nn = 0; nn <= 3; ++nn) {
        CHECK(tbl.lower(mm, nn) >= 2.0 * tbl.lower(mm + 1, nn) * (1.0 - 1e-12));
        CHECK(tbl.upper(mm, nn) >= 2.0 * tbl.upper(mm + 1, nn) * (1.0 - 1e-12));
      }
    for (Eigen::Index mm = 0; mm <= 3; ++mm)
      for (Eigen::Index nn = 0; nn + 1 <= 3; ++nn) {
        CHECK(tbl.lower(mm, nn + 1) >= 2.0 * tbl.lower(mm, nn) * (1.0 - 1e-12));
        CHECK(tbl.upper(mm, nn + 1) >= 2.0 * tbl.upper(mm, nn) * (1.0 - 1e-12));
      }
  }
}

TEST_CASE("scaled and zero operators") {
  ModelSpace m = ModelSpace::sequence_power("seq", 4, 2);
  CounterRng rng(35, "scale");
  GradedOperator A = make_matrix(m, m, random_matrix(rng, 4, 4), "A");
  OpNormResult base = op_norm(m, m, A, 1, 1, OpNormVariant::hamilton);
  OpNormResult twice = op_norm(m, m, scale_operator(A, 2.0), 1, 1, OpNormVariant::hamilton);
  CHECK(twice.value.upper == doctest::Approx(2.0 * base.value.upper).epsilon(1e-10));
  GradedOperator Z = make_zero(m, m);
  OpNormResult zero = op_norm(m, m, Z, 1, 0, OpNormVariant::hamilton);
  CHECK(zero.value.upper == 0.0);
  CHECK(zero.value.lower == 0.0);
}
