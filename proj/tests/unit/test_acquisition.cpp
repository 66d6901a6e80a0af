#include <doctest.h>

#include <cmath>
#include <random>

#include <seqpareto/acquisition.hpp>
#include <seqpareto/error.hpp>
#include <seqpareto/hypervolume.hpp>

#include "oracles.hpp"

using namespace seqpareto;

namespace {

const ObjectiveSpec kMaxMax{{Direction::Maximize, Direction::Maximize}, {0.0, 0.0}};

std::vector<DesignPoint> grid2(int k) {
  std::vector<DesignPoint> x;
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) x.push_back({i / double(k - 1), j / double(k - 1)});
  }
  return x;
}

// Two models on a 2-D grid: f1 rises with x0, f2 rises with x1.
std::vector<GpModel> tradeoff_models(double noise) {
  const auto x = grid2(4);
  std::vector<double> y1, y2;
  for (const auto& p : x) {
    y1.push_back(1.0 + p[0] - 0.3 * p[1]);
    y2.push_back(1.0 + p[1] - 0.3 * p[0]);
  }
  return {GpModel::condition(x, y1, {0.6, 1.0, noise}), GpModel::condition(x, y2, {0.6, 1.0, noise})};
}

std::vector<ObjectiveVector> random_front(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.1, 1.0);
  std::vector<ObjectiveVector> f;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = u(rng);
    f.push_back({a, std::sqrt(std::max(0.0, 1.0 - a * a)) * u(rng)});
  }
  return f;
}

}  // namespace

TEST_CASE("hvi hand values") {
  CHECK(hvi({}, {2, 3}, kMaxMax) == 6.0);
  CHECK(hvi({{3, 1}, {1, 3}}, {2, 2}, kMaxMax) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(hvi({{3, 3}}, {2, 2}, kMaxMax) == 0.0);
}

TEST_CASE("box decomposition covers exactly the non-dominated region") {
  const CanonicalPoints front{{3, 1}, {1, 3}, {2, 2}};
  const BoxDecomposition b(front, std::vector<double>{0, 0});
  const std::vector<double> corner{4, 4};
  CHECK(b.clipped_measure(corner) == doctest::Approx(16.0 - 6.0).epsilon(1e-12));
  for (const auto& box : b.boxes()) {
    for (std::size_t k = 0; k < 2; ++k) CHECK(box.lower[k] <= box.upper[k]);
  }
}

TEST_CASE("qhvi_joint degenerate cases and monotonicity") {
  const std::vector<ObjectiveVector> front{{3, 1}, {1, 3}};
  CHECK(qhvi_joint(front, {{2, 2}}, kMaxMax) == hvi(front, {2, 2}, kMaxMax));
  CHECK(qhvi_joint(front, {{2, 2}, {2, 2}}, kMaxMax) == doctest::Approx(hvi(front, {2, 2}, kMaxMax)));
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.3);
  for (int t = 0; t < 100; ++t) {
    const auto f = random_front(rng, 1 + rng() % 6);
    std::vector<ObjectiveVector> batch;
    double last = 0.0;
    for (int r = 0; r < 4; ++r) {
      batch.push_back({u(rng), u(rng)});
      const double v = qhvi_joint(f, batch, kMaxMax);
      CHECK(v >= last - 1e-12);
      last = v;
    }
  }
  std::vector<ObjectiveVector> too_many(ImprovementCalculator::kMaxBatch + 1, ObjectiveVector{1, 1});
  CHECK_THROWS_AS(qhvi_joint(front, too_many, kMaxMax), CombinatorialLimitError);
}

TEST_CASE("qhvi_joint matches grid integration") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.2);
  for (int t = 0; t < 15; ++t) {
    const auto f = random_front(rng, 1 + rng() % 5);
    std::vector<ObjectiveVector> batch;
    for (std::size_t r = 0; r < 1 + rng() % 3; ++r) batch.push_back({u(rng), u(rng)});
    const double v = qhvi_joint(f, batch, kMaxMax);
    oracle::Vec top{0.0, 0.0};
    for (const auto& y : batch) top = {std::max(top[0], y[0]), std::max(top[1], y[1])};
    if (v < 1e-3) continue;
    const double g = oracle::grid_qhvi(f, batch, {0, 0}, top, 400);
    CHECK(std::abs(v - g) <= 0.02 * v);
  }
}

TEST_CASE("tri-objective improvement equals hypervolume difference") {
  const ObjectiveSpec s3{{Direction::Maximize, Direction::Maximize, Direction::Maximize}, {0, 0, 0}};
  const std::vector<ObjectiveVector> f{{1, 0.5, 0.5}, {0.5, 1, 0.5}};
  const ObjectiveVector y{0.6, 0.6, 1.0};
  auto with = f;
  with.push_back(y);
  CHECK(hvi(f, y, s3) == doctest::Approx(hypervolume_canonical(with, std::vector<double>{0, 0, 0}) -
                                         hypervolume_canonical(f, std::vector<double>{0, 0, 0})));
}

TEST_CASE("qehvi at zero variance equals the improvement of the means") {
  const auto models = tradeoff_models(1e-12);
  const std::vector<ObjectiveVector> front{{1.5, 0.9}, {0.9, 1.5}};
  const ObjectiveSpec spec{kMaxMax.directions, {0.5, 0.5}};
  AcquisitionConfig cfg;
  const DesignPoint x{1.0 / 3.0, 1.0 / 3.0};
  const ObjectiveVector mean{models[0].predict(x).mean, models[1].predict(x).mean};
  CHECK(qehvi(models, front, spec, {x}, cfg, 1) == doctest::Approx(hvi(front, mean, spec)).epsilon(1e-6));
  const DesignPoint low{0.0, 0.0};
  const std::vector<ObjectiveVector> strong{{5, 5}};
  CHECK(qehvi(models, strong, spec, {low}, cfg, 1) == 0.0);
}

TEST_CASE("qehvi is permutation invariant and sign consistent") {
  const auto models = tradeoff_models(1e-2);
  const std::vector<ObjectiveVector> front{{1.4, 0.8}};
  const ObjectiveSpec spec{kMaxMax.directions, {0.0, 0.0}};
  AcquisitionConfig cfg;
  cfg.q = 2;
  cfg.mc_samples = 4096;
  const DesignPoint a{0.2, 0.9}, b{0.8, 0.3};
  // Draws attach to batch positions, so the two orders agree up to Monte-Carlo error.
  CHECK(qehvi(models, front, spec, {a, b}, cfg, 5) ==
        doctest::Approx(qehvi(models, front, spec, {b, a}, cfg, 5)).epsilon(0.005));

  // Same problem with the second objective negated and minimized.
  const auto x = grid2(4);
  std::vector<double> y1, y2;
  for (const auto& p : x) {
    y1.push_back(1.0 + p[0] - 0.3 * p[1]);
    y2.push_back(-(1.0 + p[1] - 0.3 * p[0]));
  }
  const std::vector<GpModel> neg{GpModel::condition(x, y1, {0.6, 1.0, 1e-2}),
                                 GpModel::condition(x, y2, {0.6, 1.0, 1e-2})};
  const ObjectiveSpec maxmin{{Direction::Maximize, Direction::Minimize}, {0.0, -0.0}};
  const double v1 = qehvi(models, front, spec, {a}, AcquisitionConfig{}, 9);
  const double v2 = qehvi(neg, {{1.4, -0.8}}, maxmin, {a}, AcquisitionConfig{}, 9);
  CHECK(std::abs(v1 - v2) <= 1e-12);
}

TEST_CASE("q=1 qehvi matches quadrature of the expected improvement") {
  std::mt19937_64 rng(77);
  const auto x = grid2(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 3; ++t) {
    std::vector<double> y1, y2;
    for (std::size_t i = 0; i < x.size(); ++i) {
      y1.push_back(u(rng));
      y2.push_back(u(rng));
    }
    const std::vector<GpModel> models{GpModel::condition(x, y1, {0.3, 1.0, 1e-3}),
                                      GpModel::condition(x, y2, {0.3, 1.0, 1e-3})};
    const DesignPoint at{u(rng), u(rng)};
    const auto p0 = models[0].predict(at), p1 = models[1].predict(at);
    const std::vector<ObjectiveVector> front{{p0.mean + 0.2, p1.mean - 0.3}, {p0.mean - 0.3, p1.mean + 0.1}};
    const ObjectiveSpec spec{kMaxMax.directions, {p0.mean - 1.5, p1.mean - 1.5}};
    AcquisitionConfig cfg;
    cfg.mc_samples = 8192;
    const double mc = qehvi(models, front, spec, {at}, cfg, static_cast<std::uint64_t>(t));
    oracle::Mat cf;
    for (const auto& y : front) cf.push_back(y);
    const double quad = oracle::ehvi_quadrature(cf, spec.reference_point, {p0.mean, p1.mean},
                                                {std::sqrt(p0.variance), std::sqrt(p1.variance)}, 200);
    CHECK(std::abs(mc - quad) <= 0.05 * quad);
  }
}

TEST_CASE("maximize_qehvi finds the planted corner and dominates its screening") {
  const auto x = grid2(5);
  std::vector<double> y1, y2;
  for (const auto& p : x) {
    y1.push_back(p[0] + p[1]);
    y2.push_back(0.5 * p[0] + p[1]);
  }
  const std::vector<GpModel> models{GpModel::condition(x, y1, {1.0, 1.0, 1e-6}),
                                    GpModel::condition(x, y2, {1.0, 1.0, 1e-6})};
  const ObjectiveSpec spec{kMaxMax.directions, {-0.5, -0.5}};
  AcquisitionConfig cfg;
  cfg.raw_samples = 64;
  const auto r = maximize_qehvi(models, {}, spec, cfg, 3);
  REQUIRE(r.batch.size() == 1);
  CHECK(r.batch[0][0] > 0.95);
  CHECK(r.batch[0][1] > 0.95);
  for (double v : r.raw_values) CHECK(r.value >= v);

  cfg.q = 2;
  const std::vector<ObjectiveVector> front{{1.0, 0.8}};
  const auto single = maximize_qehvi(models, front, spec, AcquisitionConfig{}, 4);
  const auto pair = maximize_qehvi(models, front, spec, cfg, 4);
  CHECK(pair.batch.size() == 2);
  CHECK(qehvi(models, front, spec, pair.batch, cfg, 4) >= single.value * (1.0 - 1e-9));
}

TEST_CASE("acquisition config validation") {
  AcquisitionConfig cfg;
  cfg.mc_samples = 8;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = AcquisitionConfig{};
  cfg.raw_samples = 2;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = AcquisitionConfig{};
  cfg.q = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}
