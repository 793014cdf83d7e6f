#include "gmv/gauge.hpp"
#include "gmv/metric.hpp"
#include "gmv/model.hpp"
#include "gmv/op_norm.hpp"
#include "gmv/operator.hpp"
#include "gmv/rng.hpp"
#include "gmv/tameness.hpp"

#include <benchmark/benchmark.h>

#include <utility>

using namespace gmv;

namespace {

Vec random_vec(CounterRng& rng, Eigen::Index n) {
  Vec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.next_gaussian();
  return v;
}

void BM_metric_distance(benchmark::State& state) {
  ModelSpace m = ModelSpace::sequence_power("bench-seq", 32, 6);
  CounterRng rng(1, "metric");
  Vec u = random_vec(rng, 32), v = random_vec(rng, 32);
  for (auto _ : state) benchmark::DoNotOptimize(m.metric().distance(u, v));
}
BENCHMARK(BM_metric_distance);

void BM_gauge_bracket(benchmark::State& state) {
  ModelSpace m = ModelSpace::sequence_power("bench-gauge", 32, 6);
  DyadicGauge gauge(m);
  CounterRng rng(2, "gauge");
  Vec v = random_vec(rng, 32);
  const std::size_t level = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(gauge.box_lower(level, v));
    benchmark::DoNotOptimize(gauge.star_upper(level, v));
  }
}
BENCHMARK(BM_gauge_bracket)->Arg(1)->Arg(3)->Arg(6);

void BM_op_norm_diagonal_exact(benchmark::State& state) {
  const Eigen::Index dim = state.range(0);
  ModelSpace m =
      ModelSpace::sequence_power("bench-diag", static_cast<std::size_t>(dim), 4);
  CounterRng rng(3, "diag");
  Vec d(dim);
  for (Eigen::Index i = 0; i < dim; ++i) d[i] = 0.2 + rng.next_double();
  GradedOperator op = make_diagonal(m, d, "bench");
  for (auto _ : state)
    benchmark::DoNotOptimize(op_norm(m, m, op, 2, 1, OpNormVariant::hamilton));
}
BENCHMARK(BM_op_norm_diagonal_exact)->Arg(16)->Arg(64)->Arg(256);

void BM_op_norm_dense_sampled(benchmark::State& state) {
  const Eigen::Index dim = state.range(0);
  ModelSpace m = ModelSpace::trig("bench-trig", static_cast<std::size_t>(dim), 3,
                                  4 * static_cast<std::size_t>(dim) + 1);
  CounterRng rng(4, "dense");
  const auto D = static_cast<Eigen::Index>(m.dim());
  Mat A(D, D);
  for (Eigen::Index i = 0; i < D; ++i)
    for (Eigen::Index j = 0; j < D; ++j) A(i, j) = rng.next_gaussian();
  GradedOperator op = make_matrix(m, m, A, "bench");
  for (auto _ : state)
    benchmark::DoNotOptimize(op_norm(m, m, op, 1, 1, OpNormVariant::hamilton));
}
BENCHMARK(BM_op_norm_dense_sampled)->Arg(4)->Arg(8);

void BM_certify_derivative(benchmark::State& state) {
  const std::size_t modes = static_cast<std::size_t>(state.range(0));
  ModelSpace m = ModelSpace::trig("bench-cert", modes, 4, 4 * modes + 1);
  GradedOperator d = make_derivative(m);
  for (auto _ : state) benchmark::DoNotOptimize(certify_tame(m, m, d, 1, 0));
}
BENCHMARK(BM_certify_derivative)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
