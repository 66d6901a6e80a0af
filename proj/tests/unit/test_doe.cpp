#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include <seqpareto/doe.hpp>
#include <seqpareto/error.hpp>
#include <seqpareto/pool.hpp>

using namespace seqpareto;

namespace {

bool stratified(const std::vector<DesignPoint>& pts) {
  const std::size_t n = pts.size();
  for (std::size_t k = 0; k < pts.front().size(); ++k) {
    std::vector<int> count(n, 0);
    for (const auto& p : pts) {
      if (p[k] < 0.0 || p[k] >= 1.0) return false;
      ++count[static_cast<std::size_t>(std::floor(p[k] * static_cast<double>(n)))];
    }
    if (std::any_of(count.begin(), count.end(), [](int c) { return c != 1; })) return false;
  }
  return true;
}

// Largest |empirical fraction - volume| over random anchored boxes.
double box_discrepancy(const std::vector<DesignPoint>& pts, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int b = 0; b < 200; ++b) {
    const double a0 = u(rng), a1 = u(rng);
    std::size_t inside = 0;
    for (const auto& p : pts) inside += (p[0] < a0 && p[1] < a1) ? 1 : 0;
    worst = std::max(worst, std::abs(static_cast<double>(inside) / static_cast<double>(pts.size()) - a0 * a1));
  }
  return worst;
}

double min_pairwise(const std::vector<DesignPoint>& pts) {
  double best = INFINITY;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < pts[i].size(); ++k) s += (pts[i][k] - pts[j][k]) * (pts[i][k] - pts[j][k]);
      best = std::min(best, std::sqrt(s));
    }
  }
  return best;
}

CandidatePool small_pool(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::vector<double>> x(n, std::vector<double>(2));
  std::vector<ObjectiveVector> y(n, ObjectiveVector(2));
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = {u(rng), u(rng)};
    y[i] = {u(rng), u(rng)};
  }
  x[0] = {0.0, 0.0};
  x[1] = {1.0, 1.0};
  return CandidatePool(x, y, {"a", "b"}, {"f1", "f2"}, {Direction::Maximize, Direction::Maximize});
}

}  // namespace

TEST_CASE("lhs stratification is exact") {
  for (auto [n, d] : {std::pair<std::size_t, std::size_t>{4, 1}, {4, 2}, {16, 7}, {30, 7}}) {
    for (std::uint64_t s = 0; s < 25; ++s) CHECK(stratified(lhs(n, d, s)));
  }
}

TEST_CASE("lhs seeds give different designs") {
  std::set<std::vector<DesignPoint>> seen;
  for (std::uint64_t s = 0; s < 25; ++s) seen.insert(lhs(8, 3, s));
  CHECK(seen.size() == 25);
  CHECK(lhs(8, 3, 1) == lhs(8, 3, 1));
}

TEST_CASE("uds beats random sampling on box discrepancy") {
  const auto single = uds(1, 3, 0);
  CHECK(single.size() == 1);
  for (double v : single[0]) CHECK((v >= 0.0 && v < 1.0));
  CHECK(uds(64, 2, 5) == uds(64, 2, 5));
  std::vector<double> random;
  for (std::uint64_t s = 0; s < 25; ++s) random.push_back(box_discrepancy(uds(64, 2, s, true), 99));
  std::sort(random.begin(), random.end());
  CHECK(box_discrepancy(uds(64, 2, 0), 99) < random[12]);
}

TEST_CASE("sphere packing") {
  const auto two = sphere_packing(2, 1, 3);
  CHECK(two.radius == doctest::Approx(0.5).epsilon(0.1));
  CHECK(two.radius >= 0.45);
  const auto four = sphere_packing(4, 2, 3);
  CHECK(min_pairwise(four.points) >= 0.9);
  CHECK(2.0 * four.radius == doctest::Approx(min_pairwise(four.points)));
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto r = sphere_packing(20, 3, s);
    for (std::size_t i = 1; i < r.min_distance_trace.size(); ++i) {
      CHECK(r.min_distance_trace[i] >= r.min_distance_trace[i - 1]);
    }
    for (const auto& p : r.points) {
      for (double v : p) CHECK((v >= 0.0 && v < 1.0));
    }
  }
}

TEST_CASE("generate_design dispatch and validation") {
  DoeRequest req;
  req.method = DoeMethod::Uds;
  req.n = 5;
  req.d = 2;
  CHECK(generate_design(req) == uds(5, 2, 0));
  CHECK(parse_doe_method("sphere-packing") == DoeMethod::SpherePacking);
  CHECK_THROWS_AS(parse_doe_method("factorial"), ConfigError);
  CHECK_THROWS(lhs(0, 2, 0));
}

TEST_CASE("project_to_pool") {
  auto pool = small_pool(30, 1);
  SUBCASE("exact hit and collision") {
    const auto idx = project_to_pool({{0.0, 0.0}, {0.0, 0.0}}, pool);
    CHECK(idx[0] == 0);
    CHECK(idx[1] != 0);
    auto fresh = small_pool(30, 1);
    fresh.consume(0);
    CHECK(idx[1] == fresh.nearest_unconsumed(std::vector<double>{0.0, 0.0}));
  }
  SUBCASE("matches exhaustive search") {
    const auto design = lhs(20, 2, 4);
    const auto idx = project_to_pool(design, pool);
    std::vector<bool> used(30, false);
    for (std::size_t t = 0; t < design.size(); ++t) {
      std::size_t best = 30;
      double best_d = INFINITY;
      for (std::size_t i = 0; i < 30; ++i) {
        if (used[i]) continue;
        const auto& x = pool.inputs()[i];
        const double dd = std::hypot(x[0] - design[t][0], x[1] - design[t][1]);
        if (dd < best_d) {
          best_d = dd;
          best = i;
        }
      }
      CHECK(idx[t] == best);
      used[best] = true;
    }
    CHECK(std::set<std::size_t>(idx.begin(), idx.end()).size() == idx.size());
  }
  SUBCASE("capacity") {
    CHECK_THROWS_AS(project_to_pool(lhs(31, 2, 0), pool), CapacityError);
  }
}
