#include <doctest.h>

#include <algorithm>
#include <random>

#include <seqpareto/error.hpp>
#include <seqpareto/normalize.hpp>
#include <seqpareto/pareto.hpp>

#include "oracles.hpp"

using namespace seqpareto;

namespace {

const ObjectiveSpec kMaxMax{{Direction::Maximize, Direction::Maximize}, {0.0, 0.0}};
const ObjectiveSpec kMaxMin{{Direction::Maximize, Direction::Minimize}, {0.0, 0.0}};

std::vector<ObjectiveVector> random_set(std::mt19937_64& rng, std::size_t n, std::size_t m, bool ties) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> grid(0, 6);
  std::vector<ObjectiveVector> ys(n, ObjectiveVector(m));
  for (auto& y : ys) {
    for (double& v : y) v = ties ? grid(rng) : u(rng);
  }
  return ys;
}

ObjectiveSpec spec_of(std::size_t m, bool flip_last) {
  ObjectiveSpec s;
  s.directions.assign(m, Direction::Maximize);
  if (flip_last) s.directions.back() = Direction::Minimize;
  s.reference_point.assign(m, 0.0);
  return s;
}

std::vector<double> signs_of(const ObjectiveSpec& s) {
  std::vector<double> out;
  for (auto d : s.directions) out.push_back(sign_of(d));
  return out;
}

}  // namespace

TEST_CASE("dominance hand cases") {
  CHECK(dominates(std::vector{3.0, 3.0}, std::vector{2.0, 2.0}, kMaxMax));
  CHECK_FALSE(dominates(std::vector{3.0, 3.0}, std::vector{3.0, 3.0}, kMaxMax));
  CHECK(dominates(std::vector{300.0, 100.0}, std::vector{250.0, 150.0}, kMaxMin));
  CHECK_FALSE(dominates(std::vector{250.0, 150.0}, std::vector{300.0, 100.0}, kMaxMin));
  CHECK_THROWS_AS(dominates(std::vector{1.0}, std::vector{1.0, 2.0}, kMaxMax), DimensionError);
}

TEST_CASE("dominance is irreflexive, asymmetric and transitive") {
  std::mt19937_64 rng(7);
  const auto ys = random_set(rng, 40, 2, true);
  for (const auto& a : ys) {
    CHECK_FALSE(dominates(a, a, kMaxMax));
    for (const auto& b : ys) {
      CHECK_FALSE((dominates(a, b, kMaxMax) && dominates(b, a, kMaxMax)));
      for (const auto& c : ys) {
        if (dominates(a, b, kMaxMax) && dominates(b, c, kMaxMax)) CHECK(dominates(a, c, kMaxMax));
      }
    }
  }
}

TEST_CASE("negating an objective and flipping its direction keeps dominance") {
  std::mt19937_64 rng(11);
  auto ys = random_set(rng, 30, 2, true);
  auto flipped = ys;
  for (auto& y : flipped) y[1] = -y[1];
  for (std::size_t i = 0; i < ys.size(); ++i) {
    for (std::size_t j = 0; j < ys.size(); ++j) {
      CHECK(dominates(ys[i], ys[j], kMaxMax) == dominates(flipped[i], flipped[j], kMaxMin));
    }
  }
}

TEST_CASE("extract_pareto_front hand cases") {
  CHECK(extract_pareto_front({{1.0, 1.0}}, kMaxMax).indices == std::vector<std::size_t>{0});
  const auto f = extract_pareto_front({{3, 1}, {1, 3}, {2, 2}, {1, 1}}, kMaxMax);
  CHECK(f.indices == std::vector<std::size_t>{0, 1, 2});
  CHECK(f.objectives == std::vector<ObjectiveVector>{{3, 1}, {1, 3}, {2, 2}});
  CHECK(extract_pareto_front({{0, 0}, {0, 0}}, kMaxMax).indices == std::vector<std::size_t>{0});
  CHECK_THROWS_AS(extract_pareto_front(std::vector<ObjectiveVector>{}, kMaxMax), EmptySetError);
}

TEST_CASE("extract_pareto_front carries design points") {
  const std::vector<DesignPoint> x{{0.1}, {0.2}, {0.3}};
  const auto f = extract_pareto_front(x, {{1, 0}, {0, 0}, {0, 1}}, kMaxMax);
  CHECK(f.points == std::vector<DesignPoint>{{0.1}, {0.3}});
}

TEST_CASE("front and rank agree with brute force on random sets") {
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 60; ++t) {
    const std::size_t m = 2 + static_cast<std::size_t>(t % 2);
    const auto spec = spec_of(m, t % 3 == 0);
    const auto ys = random_set(rng, 1 + static_cast<std::size_t>(rng() % 80), m, t % 4 == 1);
    CHECK(extract_pareto_front(ys, spec).indices == oracle::brute_front(ys, signs_of(spec)));
    CHECK(nondomination_rank(ys, spec) == oracle::peel_ranks(ys, signs_of(spec)));
  }
}

TEST_CASE("front is permutation invariant as a set") {
  std::mt19937_64 rng(5);
  const auto ys = random_set(rng, 50, 2, false);
  auto shuffled = ys;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  auto a = extract_pareto_front(ys, kMaxMax).objectives;
  auto b = extract_pareto_front(shuffled, kMaxMax).objectives;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  CHECK(a == b);
}

TEST_CASE("nondomination_rank hand cases") {
  CHECK(nondomination_rank({{3, 3}, {2, 2}, {1, 1}}, kMaxMax) == std::vector<int>{0, 1, 2});
  const auto r = nondomination_rank({{3, 1}, {1, 3}, {2, 2}, {0, 0}}, kMaxMax);
  CHECK(r == std::vector<int>{0, 0, 0, 1});
}

TEST_CASE("normalize_inputs") {
  const auto n = normalize_inputs({{2.0, 5.0}, {4.0, 5.0}, {6.0, 5.0}});
  CHECK(n.points[0] == DesignPoint{0.0, 0.5});
  CHECK(n.points[1] == DesignPoint{0.5, 0.5});
  CHECK(n.points[2] == DesignPoint{1.0, 0.5});
  CHECK(n.scaling.is_constant(1));
  CHECK_THROWS_AS(normalize_inputs({{1.0, 2.0}, {1.0}}), DimensionError);
  CHECK_THROWS_AS(normalize_inputs({{1.0}, {std::nan("")}}), DataError);
}

TEST_CASE("normalize round trip on random vectors") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  std::vector<std::vector<double>> raw(30, std::vector<double>(5));
  for (auto& r : raw) {
    for (double& v : r) v = u(rng);
  }
  const auto n = normalize_inputs(raw);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const auto back = n.scaling.denormalize(n.points[i]);
    for (std::size_t k = 0; k < 5; ++k) CHECK(back[k] == doctest::Approx(raw[i][k]).epsilon(1e-12));
    for (double v : n.points[i]) CHECK((v >= 0.0 && v <= 1.0));
  }
}

TEST_CASE("spec helpers") {
  CHECK(kMaxMin.canonical(std::vector{2.0, 3.0}) == std::vector{2.0, -3.0});
  CHECK(ObjectiveSpec::worst_corner({{1, 5}, {3, 2}}, kMaxMin.directions) == ObjectiveVector{1, 5});
  ObjectiveSpec s{kMaxMax.directions, {1.0, 1.0}};
  CHECK_THROWS_AS(s.validate_reference({{0.5, 2.0}}), ReferenceError);
  CHECK(parse_scenario("max-min") == Scenario::MaxMin);
  CHECK_THROWS_AS(parse_scenario("min-min"), ConfigError);
}
