#include "seqpareto/campaign.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "seqpareto/error.hpp"
#include "seqpareto/random.hpp"

namespace seqpareto {
namespace {

constexpr std::uint64_t kCapStream = 0x636170;
constexpr std::uint64_t kInitStream = 0x696e6974;
constexpr std::uint64_t kFitStream = 0x666974;
constexpr std::uint64_t kAcqStream = 0x616371;

}  // namespace

std::string_view to_string(StopOn s) noexcept { return s == StopOn::Hv ? "hv" : "phv"; }

StopOn parse_stop_on(std::string_view text) {
  if (text == "hv") return StopOn::Hv;
  if (text == "phv") return StopOn::Phv;
  throw ConfigError("unknown stop metric '" + std::string(text) + "' (expected hv or phv)");
}

double default_hv_threshold(Scenario s) noexcept { return s == Scenario::MaxMax ? 0.95 : 0.94; }

double RunConfig::threshold() const noexcept { return hv_threshold.value_or(default_hv_threshold(scenario)); }

AcquisitionConfig RunConfig::acquisition() const {
  AcquisitionConfig a;
  a.q = q;
  a.mc_samples = mc_samples;
  a.num_restarts = num_restarts;
  a.raw_samples = raw_samples;
  a.max_evals_per_restart = acq_max_evals;
  return a;
}

void RunConfig::validate(std::size_t effective_pool_size) const {
  if (n_start < 2) throw ConfigError("n_start must be >= 2");
  if (q == 0) throw ConfigError("q must be >= 1");
  if (refit_every == 0) throw ConfigError("refit_every must be >= 1");
  if (fit_restarts < 1 || fit_max_evals < 1) throw ConfigError("fit budget must be positive");
  if (!(threshold() >= 0.0)) throw ConfigError("hv_threshold must be >= 0");
  if (resource_cap && *resource_cap < 2) throw ConfigError("resource_cap must be >= 2");
  acquisition().validate();
  if (n_start + n_iter * q > effective_pool_size) {
    throw CapacityError("n_start + n_iter * q = " + std::to_string(n_start + n_iter * q) +
                        " exceeds the effective pool size " + std::to_string(effective_pool_size));
  }
}

void to_json(nlohmann::json& j, const RunConfig& c) {
  j = nlohmann::json{{"n_start", c.n_start},
                     {"n_iter", c.n_iter},
                     {"q", c.q},
                     {"hv_threshold", c.threshold()},
                     {"stop_on", to_string(c.stop_on)},
                     {"mc_samples", c.mc_samples},
                     {"num_restarts", c.num_restarts},
                     {"raw_samples", c.raw_samples},
                     {"seed", c.seed},
                     {"scenario", to_string(c.scenario)},
                     {"resource_cap", c.resource_cap ? nlohmann::json(*c.resource_cap) : nlohmann::json()},
                     {"refit_every", c.refit_every},
                     {"fit_restarts", c.fit_restarts},
                     {"fit_max_evals", c.fit_max_evals},
                     {"acq_max_evals", c.acq_max_evals}};
}

void from_json(const nlohmann::json& j, RunConfig& c) {
  j.at("n_start").get_to(c.n_start);
  j.at("n_iter").get_to(c.n_iter);
  j.at("q").get_to(c.q);
  c.hv_threshold = j.at("hv_threshold").get<double>();
  c.stop_on = parse_stop_on(j.at("stop_on").get<std::string>());
  j.at("mc_samples").get_to(c.mc_samples);
  j.at("num_restarts").get_to(c.num_restarts);
  j.at("raw_samples").get_to(c.raw_samples);
  j.at("seed").get_to(c.seed);
  c.scenario = parse_scenario(j.at("scenario").get<std::string>());
  const auto& cap = j.at("resource_cap");
  c.resource_cap = cap.is_null() ? std::nullopt : std::optional<std::size_t>(cap.get<std::size_t>());
  j.at("refit_every").get_to(c.refit_every);
  j.at("fit_restarts").get_to(c.fit_restarts);
  j.at("fit_max_evals").get_to(c.fit_max_evals);
  j.at("acq_max_evals").get_to(c.acq_max_evals);
}

CandidatePool effective_pool(const CandidatePool& source, const RunConfig& config) {
  const auto dirs = directions_for(config.scenario);
  if (dirs.size() != source.num_objectives()) {
    throw DimensionError("scenario needs " + std::to_string(dirs.size()) + " objectives, pool has " +
                         std::to_string(source.num_objectives()));
  }
  if (config.resource_cap && *config.resource_cap < source.size()) {
    return subsample(source, *config.resource_cap, derive_seed(config.seed, kCapStream)).with_directions(dirs);
  }
  return source.with_directions(dirs);
}

void Campaign::setup(const CandidatePool& source) {
  pool_ = effective_pool(source, state_.config);
  state_.config.validate(pool_.size());
  spec_ = pool_.default_spec();
  normalizer_ = ObjectiveNormalizer(pool_.objectives(), spec_);
  true_hv_ = normalizer_.hypervolume(pool_.true_front().objectives);
  if (!(true_hv_ > 0.0)) throw MetricError("true pool front has zero hypervolume");
}

Campaign::Campaign(const CandidatePool& source, const RunConfig& config) {
  state_.config = config;
  state_.seed = config.seed;
  setup(source);
  state_.pool_digest = pool_.digest();

  const auto rank = nondomination_rank(pool_.objectives(), spec_);
  std::vector<std::size_t> eligible;
  for (int min_rank : {2, 1}) {
    eligible.clear();
    for (std::size_t i = 0; i < rank.size(); ++i) {
      if (rank[i] >= min_rank) eligible.push_back(i);
    }
    if (eligible.size() >= config.n_start) break;
  }
  if (eligible.size() < config.n_start) {
    throw CapacityError("only " + std::to_string(eligible.size()) +
                        " pool points lie off the Pareto front; n_start = " + std::to_string(config.n_start));
  }
  Rng rng(derive_seed(state_.seed, kInitStream));
  std::shuffle(eligible.begin(), eligible.end(), rng);
  eligible.resize(config.n_start);
  for (std::size_t i : eligible) {
    pool_.consume(i);
    state_.consumed.push_back(i);
    state_.consumed_objectives.push_back(pool_.objectives()[i]);
  }
  refresh_front();
  update_models(true);
  push_trace();
}

Campaign::Campaign(const CandidatePool& source, CampaignState state) : state_(std::move(state)) {
  setup(source);
  if (pool_.digest() != state_.pool_digest) {
    throw MigrationError("checkpoint belongs to a different pool (digest mismatch)");
  }
  const std::size_t m = pool_.num_objectives();
  if (state_.kernel_params.size() != m) throw MigrationError("checkpoint kernel parameters are incomplete");
  if (state_.consumed.size() != state_.consumed_objectives.size() ||
      state_.consumed.size() != state_.config.n_start + state_.iteration * state_.config.q ||
      state_.hv_trace.size() != state_.iteration + 1) {
    throw MigrationError("checkpoint consumed list, iteration and trace are inconsistent");
  }
  for (std::size_t t = 0; t < state_.consumed.size(); ++t) {
    const std::size_t i = state_.consumed[t];
    if (i >= pool_.size() || pool_.is_consumed(i)) throw MigrationError("checkpoint consumed list is invalid");
    if (pool_.objectives()[i] != state_.consumed_objectives[t]) {
      throw MigrationError("checkpoint objectives disagree with the pool");
    }
    pool_.consume(i);
  }
  const ParetoFront stored = state_.front;
  refresh_front();
  if (stored.indices != state_.front.indices) throw MigrationError("checkpoint front disagrees with its data");
  update_models(false);
}

std::vector<DesignPoint> Campaign::consumed_inputs() const {
  std::vector<DesignPoint> x;
  x.reserve(state_.consumed.size());
  for (std::size_t i : state_.consumed) x.push_back(pool_.inputs()[i]);
  return x;
}

void Campaign::refresh_front() {
  ParetoFront f = extract_pareto_front(consumed_inputs(), state_.consumed_objectives, spec_);
  for (auto& idx : f.indices) idx = state_.consumed[idx];
  state_.front = std::move(f);
}

void Campaign::update_models(bool refit) {
  const auto x = consumed_inputs();
  const std::size_t m = pool_.num_objectives();
  std::vector<GpModel> models;
  models.reserve(m);
  std::vector<double> y(x.size());
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t t = 0; t < x.size(); ++t) y[t] = state_.consumed_objectives[t][k];
    if (refit) {
      FitOptions opt;
      opt.restarts = state_.config.fit_restarts;
      opt.max_evals_per_restart = state_.config.fit_max_evals;
      opt.seed = derive_seed(state_.seed, kFitStream, state_.iteration * m + k);
      if (k < state_.kernel_params.size()) opt.warm_start = state_.kernel_params[k];
      models.push_back(GpModel::fit(x, y, opt));
    } else {
      models.push_back(GpModel::condition(x, y, state_.kernel_params.at(k)));
    }
  }
  state_.kernel_params.clear();
  for (const auto& g : models) state_.kernel_params.push_back(g.params());
  models_ = std::move(models);
}

void Campaign::push_trace() {
  TracePoint p;
  p.iteration = state_.iteration;
  p.hv = normalizer_.hypervolume(state_.front.objectives);
  p.phv = p.hv / true_hv_;
  p.points_used = state_.consumed.size();
  state_.hv_trace.push_back(p);
}

bool Campaign::should_stop() const {
  if (state_.iteration >= state_.config.n_iter) return true;
  const TracePoint& last = state_.hv_trace.back();
  const double metric = state_.config.stop_on == StopOn::Hv ? last.hv : last.phv;
  return metric >= state_.config.threshold();
}

void Campaign::step() {
  const std::size_t q = state_.config.q;
  if (pool_.available() < q) throw CapacityError("candidate pool exhausted");
  const auto acq = maximize_qehvi(models_, state_.front.objectives, spec_, state_.config.acquisition(),
                                  derive_seed(state_.seed, kAcqStream, state_.iteration));
  for (const auto& x : acq.batch) {
    const std::size_t i = pool_.nearest_unconsumed(x);
    pool_.consume(i);
    state_.consumed.push_back(i);
    state_.consumed_objectives.push_back(pool_.objectives()[i]);
  }
  ++state_.iteration;
  refresh_front();
  update_models(state_.iteration % state_.config.refit_every == 0);
  push_trace();
}

MetricsReport Campaign::run() {
  while (!should_stop()) step();
  return report();
}

MetricsReport Campaign::report() const { return report_at(state_.iteration); }

MetricsReport Campaign::report_at(std::size_t iteration) const {
  if (iteration > state_.iteration) throw StateError("iteration has not been reached yet");
  const std::size_t used = state_.config.n_start + iteration * state_.config.q;
  const std::vector<ObjectiveVector> prefix(state_.consumed_objectives.begin(),
                                            state_.consumed_objectives.begin() + static_cast<std::ptrdiff_t>(used));
  const auto front = extract_pareto_front(prefix, spec_);
  return evaluate_front(front.objectives, pool_.true_front().objectives, normalizer_, spec_, used, pool_.size());
}

std::pair<CampaignState, MetricsReport> run_campaign(const CandidatePool& source, const RunConfig& config) {
  Campaign c(source, config);
  MetricsReport r = c.run();
  return {c.state(), r};
}

}  // namespace seqpareto
