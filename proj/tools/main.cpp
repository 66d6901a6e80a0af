#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <seqpareto/campaign.hpp>
#include <seqpareto/checkpoint.hpp>
#include <seqpareto/doe.hpp>
#include <seqpareto/error.hpp>
#include <seqpareto/metrics.hpp>
#include <seqpareto/pool.hpp>

#include "bench.hpp"

namespace fs = std::filesystem;
using namespace seqpareto;

namespace {

std::uint64_t default_seed() {
  if (const char* env = std::getenv("SEQPARETO_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw ConfigError("SEQPARETO_SEED must be a non-negative integer");
    }
  }
  return 0;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << j.dump(2) << "\n";
}

// Pool selection shared by run and bench.
struct PoolFlags {
  std::string csv;
  std::vector<std::string> inputs;
  std::vector<std::string> objectives{"f1", "f2"};
  std::string synthetic;
  std::size_t n = 402;
  std::size_t d = 7;
  double noise = 0.01;
  std::uint64_t pool_seed = 0;

  void add(CLI::App& app) {
    auto* p = app.add_option("--pool", csv, "Pool CSV file")->check(CLI::ExistingFile);
    auto* s = app.add_option("--synthetic", synthetic, "Synthetic pool family: concave|convex|disconnected")
                  ->check(CLI::IsMember({"concave", "convex", "disconnected"}));
    p->excludes(s);
    app.add_option("--inputs", inputs, "Input columns of --pool")->delimiter(',');
    app.add_option("--objectives", objectives, "Objective columns of --pool")->delimiter(',');
    app.add_option("--pool-n", n, "Synthetic pool size")->check(CLI::Range(20, 1000000));
    app.add_option("--pool-d", d, "Synthetic input dimension")->check(CLI::Range(1, 1111));
    app.add_option("--noise", noise, "Synthetic noise scale")->check(CLI::NonNegativeNumber);
    app.add_option("--pool-seed", pool_seed, "Synthetic pool seed");
  }

  CandidatePool load() const {
    if (!csv.empty()) {
      if (inputs.empty()) throw CLI::ValidationError("--inputs", "required with --pool");
      std::vector<Direction> dirs(objectives.size(), Direction::Maximize);
      return ingest_csv(csv, inputs, objectives, dirs);
    }
    SyntheticSpec spec;
    spec.family = parse_family(synthetic.empty() ? "concave" : synthetic);
    spec.n = n;
    spec.d = d;
    spec.noise = noise;
    spec.seed = pool_seed;
    return generate_synthetic_pool(spec);
  }
};

std::vector<Direction> parse_directions(const std::vector<std::string>& text) {
  std::vector<Direction> out;
  for (const auto& t : text) out.push_back(parse_direction(t));
  return out;
}

int cmd_run(const PoolFlags& pf, RunConfig cfg, const std::optional<double>& threshold, const std::string& stop_on,
            const fs::path& out_dir, const std::string& resume, const nlohmann::json& flags) {
  cfg.hv_threshold = threshold;
  cfg.stop_on = parse_stop_on(stop_on);
  const CandidatePool source = pf.load();
  fs::create_directories(out_dir);

  std::optional<Campaign> campaign;
  if (!resume.empty()) {
    // Stopping rules given on the command line may extend a resumed run.
    CampaignState state = restore_state(load_document(resume));
    if (flags.contains("--n-iter")) state.config.n_iter = cfg.n_iter;
    if (flags.contains("--hv-threshold")) state.config.hv_threshold = threshold;
    campaign.emplace(source, std::move(state));
  } else {
    campaign.emplace(source, cfg);
  }
  const MetricsReport report = campaign->run();
  const CampaignState& state = campaign->state();

  save_checkpoint(state, out_dir / "checkpoint.json");
  {
    std::ofstream out(out_dir / "hv_trace.csv");
    out << "iteration,hv,phv,points_used\n";
    for (const auto& p : state.hv_trace) {
      out << p.iteration << ',' << format_double(p.hv) << ',' << format_double(p.phv) << ',' << p.points_used << '\n';
    }
  }
  {
    const CandidatePool& pool = campaign->pool();
    std::ofstream out(out_dir / "front.csv");
    out << "index";
    for (const auto& n : pool.input_names()) out << ',' << n;
    for (const auto& n : pool.objective_names()) out << ',' << n;
    out << '\n';
    for (std::size_t i : state.front.indices) {
      out << i;
      for (double v : pool.raw_inputs()[i]) out << ',' << format_double(v);
      for (double v : pool.objectives()[i]) out << ',' << format_double(v);
      out << '\n';
    }
  }
  nlohmann::json manifest = campaign->pool().manifest();
  write_json(out_dir / "manifest.json", manifest);
  write_json(out_dir / "metrics.json", {{"schema_version", 1},
                                        {"kind", "seqpareto-run-report"},
                                        {"flags", flags},
                                        {"config", state.config},
                                        {"pool_digest", state.pool_digest},
                                        {"iterations", state.iteration},
                                        {"metrics", report}});
  std::cout << nlohmann::json(report).dump() << "\n";
  return 0;
}

int cmd_metrics(const std::string& front_path, const std::string& truth_path, const std::vector<std::string>& cols,
                const std::vector<std::string>& dir_text, const std::string& convention, const std::string& out) {
  const auto dirs = parse_directions(dir_text);
  if (dirs.size() != cols.size()) throw ConfigError("need one direction per objective column");
  const auto achieved = read_objectives_csv(front_path, cols);
  const auto pool = read_objectives_csv(truth_path, cols);
  if (pool.empty()) throw DataError("truth file has no rows");
  ObjectiveSpec spec{dirs, ObjectiveSpec::worst_corner(pool, dirs)};
  const auto truth = extract_pareto_front(pool, spec);
  const auto front = achieved.empty() ? ParetoFront{} : extract_pareto_front(achieved, spec);
  const ObjectiveNormalizer normalizer(pool, spec);
  MetricsReport r = evaluate_front(front.objectives, truth.objectives, normalizer, spec, achieved.size(),
                                   std::max(pool.size(), achieved.size()), parse_convention(convention));
  const nlohmann::json j{{"schema_version", 1},
                         {"kind", "seqpareto-metrics-report"},
                         {"convention", convention},
                         {"metrics", r}};
  if (out.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    write_json(out, j);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pool-based multi-objective Bayesian optimization campaigns and benchmarks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "seqpareto 0.1.0");

  std::uint64_t seed = 0;
  bool seed_from_env = true;

  // run
  auto* run = app.add_subcommand("run", "Run one campaign against a pool");
  PoolFlags run_pool;
  run_pool.add(*run);
  RunConfig cfg;
  std::string scenario = "max-max", stop_on = "hv", resume;
  std::optional<double> threshold;
  std::optional<std::size_t> cap;
  std::string run_out = "run_out";
  run->add_option("--scenario", scenario)->check(CLI::IsMember({"max-max", "max-min"}));
  run->add_option("--n-start", cfg.n_start, "Initial points")->capture_default_str();
  run->add_option("--n-iter", cfg.n_iter, "Maximum iterations")->capture_default_str();
  run->add_option("--q", cfg.q, "Batch size")->capture_default_str();
  run->add_option("--hv-threshold", threshold, "Stop threshold (default 0.95 max-max, 0.94 max-min)");
  run->add_option("--stop-on", stop_on, "Threshold metric")->check(CLI::IsMember({"hv", "phv"}));
  run->add_option("--mc-samples", cfg.mc_samples)->capture_default_str();
  run->add_option("--num-restarts", cfg.num_restarts)->capture_default_str();
  run->add_option("--raw-samples", cfg.raw_samples)->capture_default_str();
  run->add_option("--refit-every", cfg.refit_every)->capture_default_str();
  run->add_option("--seed", seed, "Campaign seed (default $SEQPARETO_SEED or 0)");
  run->add_option("--resource-cap", cap, "Subsample the pool to this many rows");
  run->add_option("--resume", resume, "Checkpoint to resume from")->check(CLI::ExistingFile);
  run->add_option("--out-dir", run_out)->capture_default_str();

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "Sweep algorithms x seeds x scenarios");
  PoolFlags bench_pool;
  bench_pool.add(*bench_cmd);
  bench::BenchOptions bo;
  std::string study = "stability";
  std::vector<std::string> algos{"bmsdm", "lhs", "uds", "spm", "nsga2"};
  std::vector<std::string> scenarios{"max-max", "max-min"};
  std::size_t jobs = std::max(1u, std::thread::hardware_concurrency());
  std::string bench_out = "bench_out";
  bench_cmd->add_option("--study", study)->check(CLI::IsMember({"data-usage", "milestones", "stability"}));
  bench_cmd->add_option("--algo,--algos", algos)->delimiter(',')->check(
      CLI::IsMember({"bmsdm", "lhs", "uds", "spm", "nsga2"}));
  bench_cmd->add_option("--scenarios", scenarios)->delimiter(',')->check(CLI::IsMember({"max-max", "max-min"}));
  bench_cmd->add_option("--seeds", bo.seeds, "Runs per (algo, scenario)")->capture_default_str();
  bench_cmd->add_option("--seed", seed, "First run seed (default $SEQPARETO_SEED or 0)");
  bench_cmd->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--budget", bo.budget, "Stability budget")->capture_default_str();
  bench_cmd->add_option("--n-start", bo.n_start, "Initial points (0: 10 for stability, 30 otherwise)");
  bench_cmd->add_option("--n-iter", bo.n_iter, "Milestone iterations")->capture_default_str();
  bench_cmd->add_option("--doe-step", bo.doe_step, "Data-usage DoE budget step")->capture_default_str();
  bench_cmd->add_option("--q", bo.q)->capture_default_str();
  bench_cmd->add_option("--mc-samples", bo.mc_samples)->capture_default_str();
  bench_cmd->add_option("--num-restarts", bo.num_restarts)->capture_default_str();
  bench_cmd->add_option("--raw-samples", bo.raw_samples)->capture_default_str();
  bench_cmd->add_option("--refit-every", bo.refit_every)->capture_default_str();
  bench_cmd->add_option("--fit-restarts", bo.fit_restarts)->capture_default_str();
  bench_cmd->add_option("--nsga-pop", bo.nsga_pop)->capture_default_str();
  bench_cmd->add_option("--nsga-generations", bo.nsga_generations)->capture_default_str();
  bench_cmd->add_option("--out-dir", bench_out)->capture_default_str();

  // metrics
  auto* metrics_cmd = app.add_subcommand("metrics", "GD/IGD/HV/PHV of a front against a pool");
  std::string front_path, truth_path, convention = "paper", metrics_out;
  std::vector<std::string> m_cols{"f1", "f2"}, m_dirs{"max", "max"};
  metrics_cmd->add_option("--front", front_path, "Achieved front CSV")->required()->check(CLI::ExistingFile);
  metrics_cmd->add_option("--truth", truth_path, "Pool or truth CSV")->required()->check(CLI::ExistingFile);
  metrics_cmd->add_option("--objectives", m_cols)->delimiter(',');
  metrics_cmd->add_option("--directions", m_dirs)->delimiter(',')->check(CLI::IsMember({"max", "min"}));
  metrics_cmd->add_option("--convention", convention)->check(CLI::IsMember({"paper", "classic"}));
  metrics_cmd->add_option("--out", metrics_out, "Write JSON here instead of stdout");

  // gen-synth
  auto* gen = app.add_subcommand("gen-synth", "Write a synthetic pool CSV and manifest");
  SyntheticSpec synth;
  std::string family = "concave", gen_out = "pool.csv";
  gen->add_option("--family", family)->check(CLI::IsMember({"concave", "convex", "disconnected"}));
  gen->add_option("--n", synth.n)->check(CLI::Range(20, 1000000))->capture_default_str();
  gen->add_option("--d", synth.d)->check(CLI::Range(1, 1111))->capture_default_str();
  gen->add_option("--noise", synth.noise)->check(CLI::NonNegativeNumber)->capture_default_str();
  gen->add_option("--seed", seed);
  gen->add_option("--out", gen_out)->capture_default_str();

  // doe
  auto* doe_cmd = app.add_subcommand("doe", "Write a space-filling design in [0,1]^d");
  DoeRequest req;
  std::string method = "lhs", doe_out;
  doe_cmd->add_option("--method", method)->check(CLI::IsMember({"lhs", "uds", "spm"}));
  doe_cmd->add_option("--n", req.n)->required()->check(CLI::PositiveNumber);
  doe_cmd->add_option("--d", req.d)->required()->check(CLI::Range(1, 1111));
  doe_cmd->add_option("--seed", seed);
  doe_cmd->add_flag("--uds-random", req.uds_random, "UDS: plain uniform sampling");
  doe_cmd->add_option("--out", doe_out, "CSV path (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    for (auto* sub : app.get_subcommands()) {
      const auto* opt = sub->get_option_no_throw("--seed");
      if (opt != nullptr && opt->count() > 0) seed_from_env = false;
    }
    if (seed_from_env) seed = default_seed();

    if (run->parsed()) {
      cfg.scenario = parse_scenario(scenario);
      cfg.seed = seed;
      cfg.resource_cap = cap;
      nlohmann::json flags;
      for (const auto* opt : run->get_options()) {
        if (opt->count() > 0) flags[opt->get_name(false, true)] = opt->results();
      }
      flags["seed"] = seed;
      return cmd_run(run_pool, cfg, threshold, stop_on, run_out, resume, flags);
    }
    if (bench_cmd->parsed()) {
      bo.study = bench::parse_study(study);
      bo.algos.clear();
      for (const auto& a : algos) bo.algos.push_back(bench::parse_algo(a));
      bo.scenarios.clear();
      for (const auto& s : scenarios) bo.scenarios.push_back(parse_scenario(s));
      bo.base_seed = seed;
      bo.jobs = jobs;
      const CandidatePool pool = bench_pool.load();
      const auto report = bench::run_bench(pool, bo);
      fs::create_directories(bench_out);
      write_json(fs::path(bench_out) / "bench_report.json", bench::to_json(report));
      bench::write_runs_csv(report, fs::path(bench_out) / "bench_runs.csv");
      bench::write_aggregates_csv(report, fs::path(bench_out) / "bench_aggregates.csv");
      nlohmann::json manifest = pool.manifest();
      write_json(fs::path(bench_out) / "manifest.json", manifest);
      for (const auto& a : report.aggregates) {
        if (a.metric != "phv" && a.metric != "data_usage") continue;
        std::printf("%-6s %-8s it=%-3zu %-10s median=%.4f q1=%.4f q3=%.4f\n",
                    std::string(bench::to_string(a.algo)).c_str(), std::string(to_string(a.scenario)).c_str(),
                    a.iteration, a.metric.c_str(), a.median, a.q1, a.q3);
      }
      return 0;
    }
    if (metrics_cmd->parsed()) {
      return cmd_metrics(front_path, truth_path, m_cols, m_dirs, convention, metrics_out);
    }
    if (gen->parsed()) {
      synth.family = parse_family(family);
      synth.seed = seed;
      const CandidatePool pool = generate_synthetic_pool(synth);
      write_pool_csv(pool, gen_out);
      nlohmann::json manifest = pool.manifest();
      write_json(gen_out + ".manifest.json", manifest);
      std::cout << pool.digest() << "\n";
      return 0;
    }
    if (doe_cmd->parsed()) {
      req.method = parse_doe_method(method);
      req.seed = seed;
      const auto design = generate_design(req);
      std::ofstream file;
      if (!doe_out.empty()) {
        file.open(doe_out);
        if (!file) throw Error("cannot write '" + doe_out + "'");
      }
      std::ostream& out = doe_out.empty() ? std::cout : file;
      for (std::size_t k = 0; k < req.d; ++k) out << (k ? "," : "") << "x" << (k + 1);
      out << '\n';
      for (const auto& x : design) {
        for (std::size_t k = 0; k < x.size(); ++k) out << (k ? "," : "") << format_double(x[k]);
        out << '\n';
      }
      return 0;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "seqpareto: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "seqpareto: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "seqpareto: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
