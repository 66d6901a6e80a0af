#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include <seqpareto/error.hpp>
#include <seqpareto/metrics.hpp>
#include <seqpareto/pool.hpp>

#include "oracles.hpp"

using namespace seqpareto;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("seqpareto_test_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

void write_text(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

const std::vector<Direction> kMaxMax{Direction::Maximize, Direction::Maximize};

SyntheticSpec synth(SyntheticFamily family, double noise, std::uint64_t seed = 0) {
  SyntheticSpec s;
  s.family = family;
  s.noise = noise;
  s.seed = seed;
  return s;
}

// Sorted-by-f1 gaps between consecutive front members, normalized by the
// pool's objective ranges.
std::vector<double> front_gaps(const CandidatePool& pool) {
  const ObjectiveNormalizer n(pool.objectives(), pool.default_spec());
  std::vector<std::vector<double>> pts;
  for (const auto& y : pool.true_front().objectives) pts.push_back(n.apply(y));
  std::sort(pts.begin(), pts.end());
  std::vector<double> gaps;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    gaps.push_back(std::hypot(pts[i][0] - pts[i - 1][0], pts[i][1] - pts[i - 1][1]));
  }
  return gaps;
}

}  // namespace

TEST_CASE("csv ingestion drops malformed rows and is digest stable") {
  TempDir dir;
  const auto file = dir.path / "pool.csv";
  write_text(file, "\xEF\xBB\xBFid,a,b,f1,f2\n1,0.1,2,5,6\n2,0.2,,7,8\n3,\"0.3\",4, 9 ,10\n");
  const auto pool = ingest_csv(file, {"a", "b"}, {"f1", "f2"}, kMaxMax);
  CHECK(pool.size() == 2);
  CHECK(pool.manifest().dropped_rows == 1);
  CHECK(pool.objectives()[1] == ObjectiveVector{9, 10});
  CHECK(pool.inputs()[1] == DesignPoint{1.0, 1.0});
  const auto again = ingest_csv(file, {"a", "b"}, {"f1", "f2"}, kMaxMax);
  CHECK(again.digest() == pool.digest());
  CHECK(pool.digest().size() == 64);

  CHECK_THROWS_AS(ingest_csv(file, {"missing"}, {"f1", "f2"}, kMaxMax), SchemaError);
  write_text(file, "a,f1,f2\n1,2,3\nx,2,3\n");
  CHECK_THROWS_AS(ingest_csv(file, {"a"}, {"f1", "f2"}, kMaxMax), DataError);
  write_text(file, "a,f1,f2\n1,2,inf\n2,3,4\n3,4,5\n");
  CHECK(ingest_csv(file, {"a"}, {"f1", "f2"}, kMaxMax).manifest().dropped_rows == 1);
}

TEST_CASE("selecting a column subset gives the requested shape") {
  TempDir dir;
  const auto file = dir.path / "wide.csv";
  std::string text;
  for (int c = 0; c < 16; ++c) text += (c ? ",c" : "c") + std::to_string(c);
  text += "\n";
  for (int r = 0; r < 5; ++r) {
    for (int c = 0; c < 16; ++c) text += (c ? "," : "") + std::to_string(r * 16 + c + (c * r) % 3);
    text += "\n";
  }
  write_text(file, text);
  const auto pool = ingest_csv(file, {"c0", "c1", "c2", "c3", "c4", "c5", "c6"}, {"c10", "c12"}, kMaxMax);
  CHECK(pool.dims() == 7);
  CHECK(pool.num_objectives() == 2);
}

TEST_CASE("synthetic generation round trips through csv") {
  TempDir dir;
  const auto pool = generate_synthetic_pool(SyntheticSpec{});
  CHECK(pool.size() == 402);
  CHECK(pool.dims() == 7);
  CHECK(pool.num_objectives() == 2);
  CHECK(generate_synthetic_pool(SyntheticSpec{}).digest() == pool.digest());
  CHECK(generate_synthetic_pool(synth(SyntheticFamily::ConcaveFront, 0.01, 1)).digest() != pool.digest());
  const auto file = dir.path / "synth.csv";
  write_pool_csv(pool, file);
  const auto back = ingest_csv(file, pool.input_names(), pool.objective_names(), pool.directions());
  CHECK(back.digest() == pool.digest());
  CHECK(back.inputs() == pool.inputs());
  CHECK(read_objectives_csv(file, pool.objective_names()) == pool.objectives());
  CHECK_THROWS_AS(generate_synthetic_pool(SyntheticSpec{SyntheticFamily::ConcaveFront, 19, 7, 0.0, 0}), DataError);
}

TEST_CASE("noise-free concave pool front lies on the analytic curve") {
  const auto pool = generate_synthetic_pool(synth(SyntheticFamily::ConcaveFront, 0.0));
  for (std::size_t k = 0; k < pool.true_front().size(); ++k) {
    const auto& y = pool.true_front().objectives[k];
    CHECK(std::abs(std::hypot(y[0], y[1]) - 1.0) < 1e-9);
    CHECK(synthetic_plateau_distance(pool.inputs()[pool.true_front().indices[k]]) == 0.0);
  }
}

TEST_CASE("noise-free fronts only contain plateau points") {
  for (auto family : {SyntheticFamily::ConvexFront, SyntheticFamily::DisconnectedFront}) {
    const auto pool = generate_synthetic_pool(synth(family, 0.0));
    for (std::size_t i : pool.true_front().indices) CHECK(synthetic_plateau_distance(pool.inputs()[i]) == 0.0);
  }
}

TEST_CASE("disconnected family has separated clusters") {
  for (double noise : {0.0, 0.01}) {
    const auto gaps = front_gaps(generate_synthetic_pool(synth(SyntheticFamily::DisconnectedFront, noise)));
    CHECK(std::count_if(gaps.begin(), gaps.end(), [](double g) { return g > 0.1; }) >= 1);
  }
  CHECK(parse_family("disconnected") == SyntheticFamily::DisconnectedFront);
  CHECK_THROWS_AS(parse_family("zdt1"), ConfigError);
}

TEST_CASE("cached true front equals brute-force extraction") {
  for (auto family : {SyntheticFamily::ConcaveFront, SyntheticFamily::ConvexFront, SyntheticFamily::DisconnectedFront}) {
    const auto pool = generate_synthetic_pool(synth(family, 0.01, 3));
    CHECK(pool.true_front().indices == oracle::brute_front(pool.objectives(), {1.0, 1.0}));
  }
}

TEST_CASE("manifest round trip and scaling reproduce inputs") {
  const auto pool = generate_synthetic_pool(SyntheticSpec{});
  const nlohmann::json j = pool.manifest();
  const auto m = j.get<PoolManifest>();
  CHECK(m.digest == pool.digest());
  CHECK(m.source == "synthetic:concave");
  for (std::size_t i = 0; i < pool.size(); ++i) {
    CHECK(m.input_scaling.normalize(pool.raw_inputs()[i]) == pool.inputs()[i]);
  }
  auto bad = j;
  bad["schema_version"] = 99;
  CHECK_THROWS_AS(bad.get<PoolManifest>(), MigrationError);
}

TEST_CASE("subsample") {
  const auto pool = generate_synthetic_pool(SyntheticSpec{});
  const auto same = subsample(pool, pool.size(), 4);
  CHECK(same.digest() == pool.digest());
  const auto cap = subsample(pool, 100, 4);
  CHECK(cap.size() == 100);
  CHECK(subsample(pool, 100, 4).digest() == cap.digest());
  CHECK(subsample(pool, 100, 5).digest() != cap.digest());
  CHECK(cap.manifest().generator.at("cap") == 100);
  const auto spec = pool.default_spec();
  CHECK(phv(cap.true_front().objectives, pool.true_front().objectives, spec) <= 1.0);
  CHECK_THROWS_AS(subsample(pool, 1, 0), DataError);
  CHECK_THROWS_AS(subsample(pool, 403, 0), DataError);
}

TEST_CASE("consumption and nearest lookup") {
  auto pool = generate_synthetic_pool(SyntheticSpec{});
  const std::size_t i = pool.nearest(pool.inputs()[17]);
  CHECK(i == 17);
  pool.consume(17);
  CHECK(pool.is_consumed(17));
  CHECK(pool.nearest_unconsumed(pool.inputs()[17]) != 17);
  CHECK(pool.nearest(pool.inputs()[17]) == 17);
  CHECK_THROWS_AS(pool.consume(17), StateError);
  CHECK(pool.available() == 401);
  pool.reset_consumption();
  CHECK(pool.available() == 402);
  const auto flipped = pool.with_directions({Direction::Maximize, Direction::Minimize});
  CHECK(flipped.digest() == pool.digest());
  CHECK(flipped.true_front().indices != pool.true_front().indices);
}
