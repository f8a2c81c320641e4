#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "histeps/histogram.hpp"
#include "histeps/mlp.hpp"
#include "histeps/optimizer.hpp"
#include "histeps/random.hpp"

using namespace histeps;

namespace {

Tensor random_tensor(Shape shape, std::uint64_t seed) {
  Tensor t(std::move(shape));
  Rng rng(seed);
  for (auto& x : t.values()) x = rng.uniform(-1.0, 1.0);
  return t;
}

std::vector<double> log_uniform(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = std::pow(10.0, rng.uniform(-12.0, 0.0));
  return v;
}

void BM_MlpForwardBackward(benchmark::State& state) {
  const auto batch = static_cast<std::size_t>(state.range(0));
  Mlp model(MlpSpec{{784, 128, 10}, 0});
  const Tensor x = random_tensor({batch, 784}, 1);
  std::vector<int> y(batch);
  for (std::size_t i = 0; i < batch; ++i) y[i] = static_cast<int>(i % 10);
  for (auto _ : state) benchmark::DoNotOptimize(model.loss_and_gradients(x, y));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(batch));
}
BENCHMARK(BM_MlpForwardBackward)->Arg(32)->Arg(128);

void BM_OptimizerStep(benchmark::State& state) {
  const Rule rule = kAllRules[state.range(0)];
  state.SetLabel(std::string(to_string(rule)));
  std::vector<Tensor> params{random_tensor({784, 128}, 2), random_tensor({128}, 3)};
  const std::vector<Tensor> grads{random_tensor({784, 128}, 4), random_tensor({128}, 5)};
  HyperParams hp = HyperParams::defaults(rule);
  hp.lr = 1e-8;
  auto opt = init_state(rule, params, hp);
  for (auto _ : state) step(opt, params, grads);
  state.SetItemsProcessed(state.iterations() * (784 * 128 + 128));
}
BENCHMARK(BM_OptimizerStep)->DenseRange(0, static_cast<int>(std::size(kAllRules)) - 1);

void BM_Percentile(benchmark::State& state) {
  const auto v = log_uniform(static_cast<std::size_t>(state.range(0)), 6);
  for (auto _ : state) {
    const PositiveOrderStatistics stats(v);
    benchmark::DoNotOptimize(stats.percentile(2));
    benchmark::DoNotOptimize(stats.percentile(98));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Percentile)->Arg(1 << 10)->Arg(1 << 17);

void BM_Histogram(benchmark::State& state) {
  const auto v = log_uniform(static_cast<std::size_t>(state.range(0)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(build_histogram(v, HistogramRange{}));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Histogram)->Arg(1 << 10)->Arg(1 << 17);

}  // namespace

BENCHMARK_MAIN();
