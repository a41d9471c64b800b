#include "anytime/bench/dataset_io.hpp"
#include "anytime/conversion.hpp"
#include "anytime/geometry.hpp"
#include "anytime/learners.hpp"
#include "anytime/objectives.hpp"
#include "anytime/oracles.hpp"
#include "anytime/robust_feedback.hpp"

#include <benchmark/benchmark.h>

#include <memory>
#include <random>

using namespace anytime;

namespace {

Eigen::VectorXd gaussian(Index d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::VectorXd x(d);
  for (Index i = 0; i < d; ++i) x[i] = n(rng);
  return x;
}

void BM_ProjectBall(benchmark::State& state) {
  const Index d = state.range(0);
  const auto ball = FeasibleSet::l2_ball(Vector::zeros(d), 1.0);
  const Vector h(3.0 * gaussian(d, 1));
  for (auto _ : state) benchmark::DoNotOptimize(ball.project(h));
}
BENCHMARK(BM_ProjectBall)->Arg(10)->Arg(100)->Arg(1000);

void BM_ProjectSimplexEntropy(benchmark::State& state) {
  const Index d = state.range(0);
  const auto simplex = FeasibleSet::simplex(d);
  const auto map = MirrorMap::negative_entropy();
  const Vector h(gaussian(d, 2).array().exp().matrix());
  for (auto _ : state) benchmark::DoNotOptimize(project(simplex, map, h));
}
BENCHMARK(BM_ProjectSimplexEntropy)->Arg(10)->Arg(100)->Arg(1000);

void BM_Process(benchmark::State& state) {
  const Index d = state.range(0);
  Anchor anchor;
  anchor.g_tilde = DualVector(gaussian(d, 3));
  const DualVector g(gaussian(d, 4));
  for (auto _ : state) benchmark::DoNotOptimize(process(g, anchor, 1.0));
}
BENCHMARK(BM_Process)->Arg(10)->Arg(100)->Arg(1000);

void BM_RobustStep(benchmark::State& state) {
  const auto batch = static_cast<std::size_t>(state.range(0));
  const auto data =
      bench::load_dataset("synthetic:n=2000,k=3,d=10,contam=0.05,seed=1");
  const auto ball = FeasibleSet::l2_ball(Vector::zeros(data->model_dim()), 1e3);
  const LogisticObjective obj(data, ball);
  const Vector h1 = Vector::zeros(data->model_dim());
  RobustFeedback robust{Anchor{h1, obj.gradient(h1)}, ThresholdSchedule::heuristic(50.0), Norm::L2};
  const std::size_t steps = 1 << 16;
  const std::vector<double> weights = constant_weights(steps + 1);
  std::size_t taken = steps;
  std::unique_ptr<MiniBatchOracle> oracle;
  std::unique_ptr<MirrorDescentLearner> learner;
  std::unique_ptr<AnytimeConversion> loop;
  for (auto _ : state) {
    if (taken == steps) {
      state.PauseTiming();
      oracle = std::make_unique<MiniBatchOracle>(obj, batch, true, 7);
      learner = std::make_unique<MirrorDescentLearner>(ball, MirrorMap::euclidean(), StepSchedule::constant(0.05), h1);
      loop = std::make_unique<AnytimeConversion>(*learner, *oracle, weights, robust);
      taken = 0;
      state.ResumeTiming();
    }
    benchmark::DoNotOptimize(loop->step());
    ++taken;
  }
}
BENCHMARK(BM_RobustStep)->Arg(1)->Arg(8)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
