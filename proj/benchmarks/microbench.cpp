#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include <seqpareto/acquisition.hpp>
#include <seqpareto/doe.hpp>
#include <seqpareto/gp.hpp>
#include <seqpareto/hypervolume.hpp>
#include <seqpareto/nsga2.hpp>
#include <seqpareto/pareto.hpp>
#include <seqpareto/pool.hpp>

using namespace seqpareto;

namespace {

const ObjectiveSpec kMaxMax{{Direction::Maximize, Direction::Maximize}, {0.0, 0.0}};

std::vector<DesignPoint> points(std::size_t n, std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<DesignPoint> x(n, DesignPoint(d));
  for (auto& p : x) {
    for (double& v : p) v = u(rng);
  }
  return x;
}

std::vector<double> response(const std::vector<DesignPoint>& x, double phase) {
  std::vector<double> y;
  for (const auto& p : x) {
    double s = 0.0;
    for (double v : p) s += std::sin(3.0 * v + phase);
    y.push_back(s);
  }
  return y;
}

// Mutually non-dominated points on the positive unit sphere.
std::vector<ObjectiveVector> arc(std::size_t n, std::size_t m) {
  std::mt19937_64 rng(n);
  std::normal_distribution<double> z;
  std::vector<ObjectiveVector> f;
  for (std::size_t i = 0; i < n; ++i) {
    ObjectiveVector y(m);
    double norm = 0.0;
    for (double& v : y) {
      v = std::abs(z(rng)) + 1e-3;
      norm += v * v;
    }
    for (double& v : y) v /= std::sqrt(norm);
    f.push_back(y);
  }
  return f;
}

void BM_Hypervolume2(benchmark::State& state) {
  const auto f = arc(static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(hypervolume(f, kMaxMax));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Hypervolume2)->RangeMultiplier(4)->Range(16, 4096)->Complexity();

void BM_Hypervolume3(benchmark::State& state) {
  const ObjectiveSpec spec{{Direction::Maximize, Direction::Maximize, Direction::Maximize}, {0, 0, 0}};
  const auto f = arc(static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(hypervolume(f, spec));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Hypervolume3)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

void BM_QhviJoint(benchmark::State& state) {
  const auto f = arc(40, 2);
  std::vector<ObjectiveVector> batch;
  for (const auto& y : arc(static_cast<std::size_t>(state.range(0)), 2)) batch.push_back({1.1 * y[0], 1.1 * y[1]});
  for (auto _ : state) benchmark::DoNotOptimize(qhvi_joint(f, batch, kMaxMax));
}
BENCHMARK(BM_QhviJoint)->DenseRange(1, 5);

void BM_ParetoFront(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = points(n, 2, 3);
  std::vector<ObjectiveVector> ys(x.begin(), x.end());
  for (auto _ : state) benchmark::DoNotOptimize(extract_pareto_front(ys, kMaxMax));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ParetoFront)->RangeMultiplier(4)->Range(64, 16384)->Complexity();

void BM_NondominationRank(benchmark::State& state) {
  const auto x = points(static_cast<std::size_t>(state.range(0)), 2, 4);
  std::vector<ObjectiveVector> ys(x.begin(), x.end());
  for (auto _ : state) benchmark::DoNotOptimize(nondomination_rank(ys, kMaxMax));
}
BENCHMARK(BM_NondominationRank)->RangeMultiplier(4)->Range(64, 1024);

void BM_GpFit(benchmark::State& state) {
  const auto x = points(static_cast<std::size_t>(state.range(0)), 7, 5);
  const auto y = response(x, 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(GpModel::fit(x, y));
}
BENCHMARK(BM_GpFit)->Arg(10)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_GpPredict(benchmark::State& state) {
  const auto x = points(static_cast<std::size_t>(state.range(0)), 7, 6);
  const GpModel g = GpModel::condition(x, response(x, 0.0), {0.5, 1.0, 1e-4});
  const auto at = points(64, 7, 7);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(g.predict(at[i++ % at.size()]));
}
BENCHMARK(BM_GpPredict)->Arg(10)->Arg(50)->Arg(100);

void BM_Qehvi(benchmark::State& state) {
  const auto x = points(40, 7, 8);
  const std::vector<GpModel> models{GpModel::condition(x, response(x, 0.0), {0.5, 1.0, 1e-4}),
                                    GpModel::condition(x, response(x, 1.0), {0.5, 1.0, 1e-4})};
  std::vector<ObjectiveVector> front;
  for (const auto& y : arc(10, 2)) front.push_back({3.0 * y[0], 3.0 * y[1]});
  const ObjectiveSpec spec{kMaxMax.directions, {-7.0, -7.0}};
  AcquisitionConfig cfg;
  cfg.q = static_cast<std::size_t>(state.range(0));
  cfg.mc_samples = static_cast<std::size_t>(state.range(1));
  const auto batch = points(cfg.q, 7, 9);
  for (auto _ : state) benchmark::DoNotOptimize(qehvi(models, front, spec, batch, cfg, 1));
}
BENCHMARK(BM_Qehvi)->Args({1, 32})->Args({1, 512})->Args({2, 32})->Args({3, 32});

void BM_MaximizeQehvi(benchmark::State& state) {
  const auto x = points(40, 7, 10);
  const std::vector<GpModel> models{GpModel::condition(x, response(x, 0.0), {0.5, 1.0, 1e-4}),
                                    GpModel::condition(x, response(x, 1.0), {0.5, 1.0, 1e-4})};
  const ObjectiveSpec spec{kMaxMax.directions, {-7.0, -7.0}};
  for (auto _ : state) benchmark::DoNotOptimize(maximize_qehvi(models, {}, spec, AcquisitionConfig{}, 2));
}
BENCHMARK(BM_MaximizeQehvi)->Unit(benchmark::kMillisecond);

void BM_Nsga2(benchmark::State& state) {
  const auto pool = generate_synthetic_pool(SyntheticSpec{});
  const auto spec = pool.default_spec();
  for (auto _ : state) benchmark::DoNotOptimize(nsga2_run(pool, NsgaConfig::for_scenario(Scenario::MaxMax, 0), spec));
}
BENCHMARK(BM_Nsga2)->Unit(benchmark::kMillisecond);

void BM_SpherePacking(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(sphere_packing(static_cast<std::size_t>(state.range(0)), 7, 1));
}
BENCHMARK(BM_SpherePacking)->Arg(10)->Arg(30)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
