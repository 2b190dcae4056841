#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "flip/flip_sim.hpp"
#include "flip/random.hpp"
#include "flip/step_graphon.hpp"
#include "flip/trajectory.hpp"
#include "flip/velocity.hpp"

using namespace flip;

namespace {

StepGraphon random_graphon(int m, std::uint64_t seed) {
  RandomStream rng(seed, StreamTag::kTestFixture);
  std::vector<double> w(m), v(static_cast<std::size_t>(m) * m);
  double sum = 0;
  for (double& x : w) sum += (x = 0.2 + rng.uniform());
  for (double& x : w) x /= sum;
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) v[i * m + j] = v[j * m + i] = rng.uniform();
  return {std::move(w), std::move(v)};
}

const char* kRules[] = {"er", "triangle-removal", "complementing:4", "extremist:5"};

void BM_Velocity(benchmark::State& state) {
  const Rule rule = builtin_rule(kRules[state.range(0)]);
  const VelocityOperator op(rule);
  const auto W = random_graphon(static_cast<int>(state.range(1)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(op(W));
  state.SetLabel(kRules[state.range(0)]);
}
BENCHMARK(BM_Velocity)->ArgsProduct({{0, 1, 2, 3}, {1, 4, 8}});

void BM_FlowAt(benchmark::State& state) {
  const Rule rule = builtin_rule("triangle-removal");
  const auto W = random_graphon(static_cast<int>(state.range(0)), 11);
  for (auto _ : state) benchmark::DoNotOptimize(flow_at(rule, W, 1.0));
}
BENCHMARK(BM_FlowAt)->Arg(2)->Arg(6);

void BM_FlipSteps(benchmark::State& state) {
  const Rule rule = builtin_rule(kRules[state.range(0)]);
  const int n = static_cast<int>(state.range(1));
  RandomStream init(3, StreamTag::kGraphSample);
  const auto G0 = sample_graph_stratified(n, random_graphon(4, 5), init);
  RandomStream rng(3, StreamTag::kProcess);
  FlipProcess proc(rule, G0, rng);
  const std::int64_t batch = 10000;
  for (auto _ : state) proc.advance(batch);
  state.SetItemsProcessed(state.iterations() * batch);
  state.SetLabel(kRules[state.range(0)]);
}
BENCHMARK(BM_FlipSteps)->ArgsProduct({{0, 1, 3}, {200, 2000}});

void BM_CutNormExact(benchmark::State& state) {
  RandomStream rng(9, StreamTag::kTestFixture);
  const int m = static_cast<int>(state.range(0));
  std::vector<double> w(m, 1.0 / m), v(static_cast<std::size_t>(m) * m);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) v[i * m + j] = v[j * m + i] = 2 * rng.uniform() - 1;
  const StepKernel K(std::move(w), std::move(v));
  for (auto _ : state) benchmark::DoNotOptimize(cut_norm_exact(K));
}
BENCHMARK(BM_CutNormExact)->DenseRange(4, 12, 4);

}  // namespace
BENCHMARK_MAIN();
