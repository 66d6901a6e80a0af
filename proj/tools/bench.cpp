#include "bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <map>
#include <thread>
#include <tuple>

#include <seqpareto/campaign.hpp>
#include <seqpareto/doe.hpp>
#include <seqpareto/error.hpp>
#include <seqpareto/nsga2.hpp>

namespace seqpareto::bench {
namespace {

constexpr double kPhvTarget = 1.0 - 1e-9;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

nlohmann::json finite_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); }

double number_or_inf(const nlohmann::json& v) {
  return v.is_null() ? std::numeric_limits<double>::infinity() : v.get<double>();
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Scenario-labelled pool, spec and normalizer shared read-only by tasks.
struct ScenarioContext {
  Scenario scenario;
  CandidatePool pool;
  ObjectiveSpec spec;
  ObjectiveNormalizer normalizer;
};

ScenarioContext make_context(const CandidatePool& source, Scenario s) {
  CandidatePool pool = source.with_directions(directions_for(s));
  ObjectiveSpec spec = pool.default_spec();
  ObjectiveNormalizer normalizer(pool.objectives(), spec);
  return {s, std::move(pool), std::move(spec), std::move(normalizer)};
}

MetricsReport metrics_of_rows(const ScenarioContext& ctx, const std::vector<std::size_t>& rows) {
  std::vector<ObjectiveVector> objs;
  objs.reserve(rows.size());
  for (std::size_t r : rows) objs.push_back(ctx.pool.objectives()[r]);
  const auto front = extract_pareto_front(objs, ctx.spec);
  return evaluate_front(front.objectives, ctx.pool.true_front().objectives, ctx.normalizer, ctx.spec, rows.size(),
                        ctx.pool.size());
}

struct Task {
  Algo algo;
  const ScenarioContext* ctx;
  std::uint64_t seed;
};

RunConfig bmsdm_config(const BenchOptions& o, Scenario s, std::uint64_t seed) {
  RunConfig c;
  c.n_start = o.start_points();
  c.q = o.q;
  c.mc_samples = o.mc_samples;
  c.num_restarts = o.num_restarts;
  c.raw_samples = o.raw_samples;
  c.refit_every = o.refit_every;
  c.fit_restarts = o.fit_restarts;
  c.fit_max_evals = o.fit_max_evals;
  c.scenario = s;
  c.seed = seed;
  c.hv_threshold = 2.0;  // fixed budgets never stop early
  return c;
}

RunRecord start_record(const Task& t) {
  RunRecord r;
  r.algo = t.algo;
  r.scenario = t.ctx->scenario;
  r.seed = t.seed;
  return r;
}

std::vector<RunRecord> run_bmsdm(const Task& t, const CandidatePool& source, const BenchOptions& o) {
  const auto t0 = Clock::now();
  RunConfig cfg = bmsdm_config(o, t.ctx->scenario, t.seed);
  switch (o.study) {
    case Study::Stability:
      cfg.n_iter = (o.budget - cfg.n_start) / cfg.q;
      break;
    case Study::Milestones:
      cfg.n_iter = o.n_iter;
      break;
    case Study::DataUsage:
      cfg.n_iter = (source.size() - cfg.n_start) / cfg.q;
      cfg.stop_on = StopOn::Phv;
      cfg.hv_threshold = kPhvTarget;
      break;
  }
  Campaign campaign(source, cfg);
  campaign.run();
  const double wall = seconds_since(t0);

  std::vector<RunRecord> out;
  auto record = [&](std::size_t iteration, std::size_t it_label) {
    RunRecord r = start_record(t);
    r.metrics = campaign.report_at(iteration);
    r.budget = r.metrics.points_used;
    r.iteration = it_label;
    r.reached = r.metrics.phv >= kPhvTarget;
    r.wall_time = wall;
    out.push_back(r);
  };
  if (o.study == Study::Milestones) {
    for (std::size_t k : milestone_iterations(o.n_iter)) record(k, k);
  } else {
    record(campaign.state().iteration, 0);
  }
  return out;
}

MetricsReport doe_metrics(const ScenarioContext& ctx, DoeMethod method, std::size_t n, std::uint64_t seed) {
  CandidatePool pool = ctx.pool;
  const auto design = generate_design({method, n, pool.dims(), seed, false});
  return metrics_of_rows(ctx, project_to_pool(design, pool));
}

std::vector<RunRecord> run_doe(const Task& t, const BenchOptions& o, DoeMethod method) {
  const ScenarioContext& ctx = *t.ctx;
  std::vector<RunRecord> out;
  auto record = [&](std::size_t n, std::size_t iteration) {
    const auto t0 = Clock::now();
    RunRecord r = start_record(t);
    r.metrics = doe_metrics(ctx, method, n, t.seed);
    r.budget = n;
    r.iteration = iteration;
    r.reached = r.metrics.phv >= kPhvTarget;
    r.wall_time = seconds_since(t0);
    out.push_back(r);
  };
  switch (o.study) {
    case Study::Stability:
      record(o.budget, 0);
      break;
    case Study::Milestones:
      for (std::size_t k : milestone_iterations(o.n_iter)) record(o.start_points() + k * o.q, k);
      break;
    case Study::DataUsage: {
      const auto t0 = Clock::now();
      const std::size_t n_max = ctx.pool.size();
      RunRecord r = start_record(t);
      for (std::size_t n = std::min(o.doe_step, n_max);; n = std::min(n + o.doe_step, n_max)) {
        r.metrics = doe_metrics(ctx, method, n, t.seed);
        r.budget = n;
        r.reached = r.metrics.phv >= kPhvTarget;
        if (r.reached || n == n_max) break;
      }
      r.wall_time = seconds_since(t0);
      out.push_back(r);
      break;
    }
  }
  return out;
}

std::vector<RunRecord> run_nsga(const Task& t, const BenchOptions& o) {
  const ScenarioContext& ctx = *t.ctx;
  NsgaConfig cfg = NsgaConfig::for_scenario(ctx.scenario, t.seed);
  cfg.pop_size = o.nsga_pop;
  std::vector<std::size_t> generations{o.nsga_generations};
  if (o.study == Study::Milestones) generations = milestone_iterations(o.nsga_generations);
  std::vector<RunRecord> out;
  for (std::size_t g : generations) {
    const auto t0 = Clock::now();
    cfg.generations = g;
    const NsgaResult res = nsga2_run(ctx.pool, cfg, ctx.spec);
    RunRecord r = start_record(t);
    r.metrics = res.report;
    r.budget = res.function_evaluations;
    r.iteration = o.study == Study::Milestones ? g : 0;
    r.reached = r.metrics.phv >= kPhvTarget;
    r.wall_time = seconds_since(t0);
    out.push_back(r);
  }
  return out;
}

}  // namespace

std::string_view to_string(Algo a) noexcept {
  switch (a) {
    case Algo::Bmsdm: return "bmsdm";
    case Algo::Lhs: return "lhs";
    case Algo::Uds: return "uds";
    case Algo::Spm: return "spm";
    case Algo::Nsga2: return "nsga2";
  }
  return "?";
}

Algo parse_algo(std::string_view text) {
  for (Algo a : all_algos()) {
    if (to_string(a) == text) return a;
  }
  throw ConfigError("unknown algorithm '" + std::string(text) + "'");
}

std::string_view to_string(Study s) noexcept {
  switch (s) {
    case Study::DataUsage: return "data-usage";
    case Study::Milestones: return "milestones";
    case Study::Stability: return "stability";
  }
  return "?";
}

Study parse_study(std::string_view text) {
  for (Study s : {Study::DataUsage, Study::Milestones, Study::Stability}) {
    if (to_string(s) == text) return s;
  }
  throw ConfigError("unknown study '" + std::string(text) + "'");
}

const std::vector<Algo>& all_algos() {
  static const std::vector<Algo> kAll{Algo::Bmsdm, Algo::Lhs, Algo::Uds, Algo::Spm, Algo::Nsga2};
  return kAll;
}

std::size_t BenchOptions::start_points() const noexcept {
  if (n_start != 0) return n_start;
  return study == Study::Stability ? 10 : 30;
}

void BenchOptions::validate() const {
  if (algos.empty()) throw ConfigError("no algorithms selected");
  if (scenarios.empty()) throw ConfigError("no scenarios selected");
  if (seeds == 0) throw ConfigError("seeds must be >= 1");
  if (jobs == 0) throw ConfigError("jobs must be >= 1");
  if (doe_step == 0) throw ConfigError("doe_step must be >= 1");
  if (q == 0) throw ConfigError("q must be >= 1");
  if (study == Study::Stability && (budget <= start_points() || (budget - start_points()) % q != 0)) {
    throw ConfigError("stability budget must exceed n_start by a multiple of q");
  }
  if (study == Study::Milestones && n_iter == 0) throw ConfigError("milestones need n_iter >= 1");
}

void to_json(nlohmann::json& j, const BenchOptions& o) {
  std::vector<std::string> algos, scenarios;
  for (Algo a : o.algos) algos.emplace_back(to_string(a));
  for (Scenario s : o.scenarios) scenarios.emplace_back(to_string(s));
  j = nlohmann::json{{"study", to_string(o.study)},
                     {"algos", algos},
                     {"scenarios", scenarios},
                     {"seeds", o.seeds},
                     {"base_seed", o.base_seed},
                     {"jobs", o.jobs},
                     {"budget", o.budget},
                     {"n_start", o.start_points()},
                     {"n_iter", o.n_iter},
                     {"doe_step", o.doe_step},
                     {"q", o.q},
                     {"mc_samples", o.mc_samples},
                     {"num_restarts", o.num_restarts},
                     {"raw_samples", o.raw_samples},
                     {"refit_every", o.refit_every},
                     {"fit_restarts", o.fit_restarts},
                     {"fit_max_evals", o.fit_max_evals},
                     {"nsga_pop", o.nsga_pop},
                     {"nsga_generations", o.nsga_generations}};
}

double quantile(std::vector<double> values, double p) {
  if (values.empty()) throw EmptySetError("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double h = p * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = h - static_cast<double>(lo);
  if (frac == 0.0) return values[lo];
  return values[lo] + frac * (values[hi] - values[lo]);
}

const std::vector<std::string>& metric_names() {
  static const std::vector<std::string> kNames{"gd", "igd", "hv", "phv", "data_usage", "budget", "wall_time"};
  return kNames;
}

double metric_value(const RunRecord& r, std::string_view metric) {
  if (metric == "gd") return r.metrics.gd;
  if (metric == "igd") return r.metrics.igd;
  if (metric == "hv") return r.metrics.hv;
  if (metric == "phv") return r.metrics.phv;
  if (metric == "data_usage") return r.metrics.data_usage;
  if (metric == "budget") return static_cast<double>(r.budget);
  if (metric == "wall_time") return r.wall_time;
  throw ConfigError("unknown metric '" + std::string(metric) + "'");
}

std::vector<AggregateRecord> aggregate(const std::vector<RunRecord>& runs) {
  using Key = std::tuple<Algo, Scenario, std::size_t>;
  std::vector<Key> order;
  std::map<Key, std::vector<const RunRecord*>> groups;
  for (const auto& r : runs) {
    const Key k{r.algo, r.scenario, r.iteration};
    auto [it, inserted] = groups.try_emplace(k);
    if (inserted) order.push_back(k);
    it->second.push_back(&r);
  }
  std::vector<AggregateRecord> out;
  for (const Key& k : order) {
    const auto& members = groups[k];
    for (const auto& metric : metric_names()) {
      std::vector<double> v;
      for (const RunRecord* r : members) v.push_back(metric_value(*r, metric));
      out.push_back({std::get<0>(k), std::get<1>(k), std::get<2>(k), metric, v.size(), quantile(v, 0.5),
                     quantile(v, 0.25), quantile(v, 0.75)});
    }
  }
  return out;
}

std::vector<std::size_t> milestone_iterations(std::size_t n_iter) {
  std::vector<std::size_t> m{1, (n_iter + 3) / 4, (n_iter + 1) / 2, n_iter};
  std::erase_if(m, [&](std::size_t k) { return k == 0 || k > n_iter; });
  m.erase(std::unique(m.begin(), m.end()), m.end());
  return m;
}

BenchReport run_bench(const CandidatePool& pool, const BenchOptions& options) {
  options.validate();
  std::vector<ScenarioContext> contexts;
  contexts.reserve(options.scenarios.size());
  for (Scenario s : options.scenarios) contexts.push_back(make_context(pool, s));

  std::vector<Task> tasks;
  for (Algo a : options.algos) {
    for (const auto& ctx : contexts) {
      for (std::size_t i = 0; i < options.seeds; ++i) tasks.push_back({a, &ctx, options.base_seed + i});
    }
  }

  std::vector<std::vector<RunRecord>> results(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        const Task& t = tasks[i];
        switch (t.algo) {
          case Algo::Bmsdm: results[i] = run_bmsdm(t, pool, options); break;
          case Algo::Lhs: results[i] = run_doe(t, options, DoeMethod::Lhs); break;
          case Algo::Uds: results[i] = run_doe(t, options, DoeMethod::Uds); break;
          case Algo::Spm: results[i] = run_doe(t, options, DoeMethod::SpherePacking); break;
          case Algo::Nsga2: results[i] = run_nsga(t, options); break;
        }
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t n_workers = std::min(options.jobs, tasks.size());
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool_threads;
    for (std::size_t w = 0; w < n_workers; ++w) pool_threads.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  BenchReport report;
  report.study = options.study;
  report.options = options;
  nlohmann::json manifest = pool.manifest();
  report.manifest = std::move(manifest);
  for (auto& r : results) report.runs.insert(report.runs.end(), r.begin(), r.end());
  report.aggregates = aggregate(report.runs);
  return report;
}

nlohmann::json to_json(const BenchReport& report) {
  nlohmann::json runs = nlohmann::json::array();
  for (const auto& r : report.runs) {
    runs.push_back({{"algo", to_string(r.algo)},
                    {"scenario", to_string(r.scenario)},
                    {"seed", r.seed},
                    {"budget", r.budget},
                    {"iteration", r.iteration},
                    {"reached", r.reached},
                    {"metrics", r.metrics},
                    {"wall_time", r.wall_time}});
  }
  nlohmann::json aggs = nlohmann::json::array();
  for (const auto& a : report.aggregates) {
    aggs.push_back({{"algo", to_string(a.algo)},
                    {"scenario", to_string(a.scenario)},
                    {"iteration", a.iteration},
                    {"metric", a.metric},
                    {"count", a.count},
                    {"median", finite_or_null(a.median)},
                    {"q1", finite_or_null(a.q1)},
                    {"q3", finite_or_null(a.q3)}});
  }
  return {{"schema_version", kBenchSchemaVersion},
          {"kind", "seqpareto-bench-report"},
          {"study", to_string(report.study)},
          {"options", report.options},
          {"manifest", report.manifest},
          {"runs", runs},
          {"aggregates", aggs}};
}

BenchReport load_report(const nlohmann::json& doc) {
  BenchReport report;
  try {
    if (doc.at("schema_version").get<int>() != kBenchSchemaVersion) {
      throw MigrationError("unsupported bench report schema version");
    }
    report.study = parse_study(doc.at("study").get<std::string>());
    report.options = doc.at("options");
    report.manifest = doc.at("manifest");
    for (const auto& r : doc.at("runs")) {
      RunRecord rec;
      rec.algo = parse_algo(r.at("algo").get<std::string>());
      rec.scenario = parse_scenario(r.at("scenario").get<std::string>());
      r.at("seed").get_to(rec.seed);
      r.at("budget").get_to(rec.budget);
      r.at("iteration").get_to(rec.iteration);
      r.at("reached").get_to(rec.reached);
      rec.metrics = r.at("metrics").get<MetricsReport>();
      r.at("wall_time").get_to(rec.wall_time);
      report.runs.push_back(rec);
    }
    for (const auto& a : doc.at("aggregates")) {
      AggregateRecord rec;
      rec.algo = parse_algo(a.at("algo").get<std::string>());
      rec.scenario = parse_scenario(a.at("scenario").get<std::string>());
      a.at("iteration").get_to(rec.iteration);
      a.at("metric").get_to(rec.metric);
      a.at("count").get_to(rec.count);
      rec.median = number_or_inf(a.at("median"));
      rec.q1 = number_or_inf(a.at("q1"));
      rec.q3 = number_or_inf(a.at("q3"));
      report.aggregates.push_back(rec);
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed bench report: ") + e.what());
  }

  const auto expected = aggregate(report.runs);
  bool same = expected.size() == report.aggregates.size();
  for (std::size_t i = 0; same && i < expected.size(); ++i) {
    const auto& a = expected[i];
    const auto& b = report.aggregates[i];
    same = a.algo == b.algo && a.scenario == b.scenario && a.iteration == b.iteration && a.metric == b.metric &&
           a.count == b.count && a.median == b.median && a.q1 == b.q1 && a.q3 == b.q3;
  }
  if (!same) throw DataError("bench report aggregates do not match its runs");
  return report;
}

void write_runs_csv(const BenchReport& report, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << "study,algo,scenario,seed,budget,iteration,reached,metric,value\n";
  for (const auto& r : report.runs) {
    for (const auto& metric : metric_names()) {
      out << to_string(report.study) << ',' << to_string(r.algo) << ',' << to_string(r.scenario) << ',' << r.seed
          << ',' << r.budget << ',' << r.iteration << ',' << (r.reached ? 1 : 0) << ',' << metric << ','
          << format_double(metric_value(r, metric)) << '\n';
    }
  }
}

void write_aggregates_csv(const BenchReport& report, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << "study,algo,scenario,iteration,metric,count,median,q1,q3\n";
  for (const auto& a : report.aggregates) {
    out << to_string(report.study) << ',' << to_string(a.algo) << ',' << to_string(a.scenario) << ','
        << a.iteration << ',' << a.metric << ',' << a.count << ',' << format_double(a.median) << ','
        << format_double(a.q1) << ',' << format_double(a.q3) << '\n';
  }
}

}  // namespace seqpareto::bench
