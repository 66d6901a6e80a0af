#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include <seqpareto/metrics.hpp>
#include <seqpareto/pool.hpp>
#include <seqpareto/types.hpp>

namespace seqpareto::bench {

inline constexpr int kBenchSchemaVersion = 1;

enum class Algo { Bmsdm, Lhs, Uds, Spm, Nsga2 };
enum class Study { DataUsage, Milestones, Stability };

std::string_view to_string(Algo a) noexcept;
Algo parse_algo(std::string_view text);
std::string_view to_string(Study s) noexcept;
Study parse_study(std::string_view text);
const std::vector<Algo>& all_algos();

struct BenchOptions {
  Study study = Study::Stability;
  std::vector<Algo> algos = all_algos();
  std::vector<Scenario> scenarios{Scenario::MaxMax, Scenario::MaxMin};
  std::size_t seeds = 25;
  std::uint64_t base_seed = 0;
  std::size_t jobs = 1;

  /// Stability: total points consumed by BMSDM and the DoE baselines.
  std::size_t budget = 100;
  /// BMSDM initial points; 0 selects 10 for stability and 30 otherwise.
  std::size_t n_start = 0;
  /// Milestones: BMSDM iterations.
  std::size_t n_iter = 90;
  /// Data usage: DoE budgets are scanned in multiples of this step.
  std::size_t doe_step = 5;

  std::size_t q = 1;
  std::size_t mc_samples = 32;
  std::size_t num_restarts = 10;
  std::size_t raw_samples = 402;
  std::size_t refit_every = 1;
  int fit_restarts = 8;
  int fit_max_evals = 60;

  std::size_t nsga_pop = 100;
  std::size_t nsga_generations = 9;

  std::size_t start_points() const noexcept;
  void validate() const;
};

void to_json(nlohmann::json& j, const BenchOptions& o);

/// One measurement of one run. Stability and data-usage runs produce one
/// record; milestone runs produce one per milestone.
struct RunRecord {
  Algo algo = Algo::Bmsdm;
  Scenario scenario = Scenario::MaxMax;
  std::uint64_t seed = 0;
  std::size_t budget = 0;     // points consumed (function evaluations for NSGA-II)
  std::size_t iteration = 0;  // milestone iteration; 0 elsewhere
  bool reached = true;        // data usage: PHV = 1 was attained
  MetricsReport metrics;
  double wall_time = 0.0;
};

struct AggregateRecord {
  Algo algo = Algo::Bmsdm;
  Scenario scenario = Scenario::MaxMax;
  std::size_t iteration = 0;
  std::string metric;
  std::size_t count = 0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
};

struct BenchReport {
  Study study = Study::Stability;
  nlohmann::json options;
  nlohmann::json manifest;
  std::vector<RunRecord> runs;
  std::vector<AggregateRecord> aggregates;
};

/// Linear-interpolation quantile of `values` (p in [0, 1]).
double quantile(std::vector<double> values, double p);

/// Names of the aggregated metrics, in output order.
const std::vector<std::string>& metric_names();
double metric_value(const RunRecord& r, std::string_view metric);

/// Median and quartiles per (algo, scenario, iteration, metric), in
/// first-appearance order of the runs.
std::vector<AggregateRecord> aggregate(const std::vector<RunRecord>& runs);

/// Milestone iterations {1, ceil(n/4), ceil(n/2), n}, deduplicated.
std::vector<std::size_t> milestone_iterations(std::size_t n_iter);

/// Runs every (algo, scenario, seed) task on `options.jobs` workers and
/// reduces the results in deterministic task order.
BenchReport run_bench(const CandidatePool& pool, const BenchOptions& options);

nlohmann::json to_json(const BenchReport& report);
/// Parses a report and checks that its aggregates equal a recomputation
/// from its runs. Throws DataError on mismatch.
BenchReport load_report(const nlohmann::json& document);

/// Long format: study,algo,scenario,seed,budget,iteration,reached,metric,value.
void write_runs_csv(const BenchReport& report, const std::filesystem::path& path);
void write_aggregates_csv(const BenchReport& report, const std::filesystem::path& path);

}  // namespace seqpareto::bench
