#include <doctest.h>

#include <filesystem>
#include <fstream>

#include <seqpareto/error.hpp>

#include "bench.hpp"

using namespace seqpareto;
using namespace seqpareto::bench;
namespace fs = std::filesystem;

namespace {

BenchOptions tiny(Study study) {
  BenchOptions o;
  o.study = study;
  o.seeds = 3;
  o.budget = 16;
  o.n_start = 10;
  o.n_iter = 4;
  o.doe_step = 50;
  o.raw_samples = 32;
  o.num_restarts = 2;
  o.fit_restarts = 2;
  o.nsga_pop = 20;
  o.nsga_generations = 3;
  o.jobs = 2;
  return o;
}

std::size_t count_lines(const fs::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) ++n;
  return n;
}

}  // namespace

TEST_CASE("quantiles interpolate linearly") {
  CHECK(quantile({3, 1, 2}, 0.5) == 2.0);
  CHECK(quantile({1, 2, 3, 4}, 0.5) == 2.5);
  CHECK(quantile({1, 2, 3, 4, 5}, 0.25) == 2.0);
  CHECK(quantile({1, 2}, 0.25) == 1.25);
  CHECK(quantile({7}, 0.75) == 7.0);
}

TEST_CASE("milestone iterations") {
  CHECK(milestone_iterations(90) == std::vector<std::size_t>{1, 23, 45, 90});
  CHECK(milestone_iterations(2) == std::vector<std::size_t>{1, 2});
  CHECK(milestone_iterations(1) == std::vector<std::size_t>{1});
}

TEST_CASE("option parsing and validation") {
  CHECK(parse_algo("nsga2") == Algo::Nsga2);
  CHECK(parse_study("data-usage") == Study::DataUsage);
  CHECK_THROWS_AS(parse_algo("random"), ConfigError);
  BenchOptions o;
  CHECK(o.start_points() == 10);
  o.study = Study::Milestones;
  CHECK(o.start_points() == 30);
  o = BenchOptions{};
  o.budget = 10;
  CHECK_THROWS_AS(o.validate(), ConfigError);
}

TEST_CASE("stability study counts, aggregates and round trips") {
  const auto pool = generate_synthetic_pool(SyntheticSpec{});
  auto o = tiny(Study::Stability);
  const auto report = run_bench(pool, o);
  CHECK(report.runs.size() == all_algos().size() * 2 * o.seeds);
  for (const auto& a : report.aggregates) CHECK(a.count == o.seeds);
  CHECK(report.aggregates.size() == all_algos().size() * 2 * metric_names().size());
  for (const auto& r : report.runs) {
    if (r.algo == Algo::Nsga2) {
      CHECK(r.budget == 80);
    } else {
      CHECK(r.budget == 16);
    }
  }

  o.jobs = 1;
  const auto serial = run_bench(pool, o);
  for (std::size_t i = 0; i < report.runs.size(); ++i) {
    CHECK(report.runs[i].metrics.phv == serial.runs[i].metrics.phv);
    CHECK(report.runs[i].seed == serial.runs[i].seed);
  }

  const auto doc = to_json(report);
  const auto loaded = load_report(nlohmann::json::parse(doc.dump()));
  CHECK(loaded.runs.size() == report.runs.size());
  auto broken = doc;
  broken["aggregates"][0]["median"] = -1.0;
  CHECK_THROWS_AS(load_report(broken), DataError);

  const auto dir = fs::temp_directory_path() / "seqpareto_bench_test";
  fs::create_directories(dir);
  write_runs_csv(report, dir / "runs.csv");
  write_aggregates_csv(report, dir / "agg.csv");
  CHECK(count_lines(dir / "runs.csv") == 1 + report.runs.size() * metric_names().size());
  CHECK(count_lines(dir / "agg.csv") == 1 + report.aggregates.size());
  fs::remove_all(dir);
}

TEST_CASE("milestone and data-usage studies") {
  const auto pool = generate_synthetic_pool(SyntheticSpec{});
  auto o = tiny(Study::Milestones);
  o.algos = {Algo::Bmsdm, Algo::Lhs, Algo::Nsga2};
  o.scenarios = {Scenario::MaxMin};
  o.seeds = 1;
  const auto m = run_bench(pool, o);
  std::vector<std::size_t> lhs_budgets, iters;
  for (const auto& r : m.runs) {
    if (r.algo == Algo::Lhs) lhs_budgets.push_back(r.budget);
    if (r.algo == Algo::Bmsdm) iters.push_back(r.iteration);
  }
  CHECK(iters == std::vector<std::size_t>{1, 2, 4});
  CHECK(lhs_budgets == std::vector<std::size_t>{11, 12, 14});

  o = tiny(Study::DataUsage);
  o.algos = {Algo::Lhs, Algo::Uds};
  o.seeds = 2;
  const auto d = run_bench(pool, o);
  for (const auto& r : d.runs) {
    CHECK(r.budget % 50 == (r.budget == pool.size() ? pool.size() % 50 : 0));
    if (r.reached) CHECK(r.metrics.phv >= 1.0 - 1e-9);
  }
}
