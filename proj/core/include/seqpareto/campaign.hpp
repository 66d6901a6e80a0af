#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "seqpareto/acquisition.hpp"
#include "seqpareto/gp.hpp"
#include "seqpareto/metrics.hpp"
#include "seqpareto/pareto.hpp"
#include "seqpareto/pool.hpp"
#include "seqpareto/types.hpp"

namespace seqpareto {

enum class StopOn { Hv, Phv };

std::string_view to_string(StopOn s) noexcept;
StopOn parse_stop_on(std::string_view text);

/// Default HV threshold for a scenario: 0.95 for max-max, 0.94 for max-min.
double default_hv_threshold(Scenario s) noexcept;

struct RunConfig {
  std::size_t n_start = 30;
  std::size_t n_iter = 90;
  std::size_t q = 1;
  /// Unset means default_hv_threshold(scenario). Values above 1 never trigger.
  std::optional<double> hv_threshold;
  StopOn stop_on = StopOn::Hv;
  std::size_t mc_samples = 32;
  std::size_t num_restarts = 10;
  std::size_t raw_samples = 402;
  std::uint64_t seed = 0;
  Scenario scenario = Scenario::MaxMax;
  std::optional<std::size_t> resource_cap;
  /// Hyperparameters are re-optimized every refit_every steps; in between
  /// the models are re-conditioned on new data with the previous values.
  std::size_t refit_every = 1;
  int fit_restarts = 8;
  int fit_max_evals = 60;
  std::size_t acq_max_evals = 400;

  double threshold() const noexcept;
  AcquisitionConfig acquisition() const;

  /// Throws ConfigError for n_start < 2, q == 0, refit_every == 0 or a
  /// negative threshold, and CapacityError when n_start + n_iter * q
  /// exceeds `effective_pool_size`.
  void validate(std::size_t effective_pool_size) const;
};

void to_json(nlohmann::json& j, const RunConfig& c);
void from_json(const nlohmann::json& j, RunConfig& c);

struct TracePoint {
  std::size_t iteration = 0;
  double hv = 0.0;   // normalized-objective hypervolume
  double phv = 0.0;
  std::size_t points_used = 0;

  bool operator==(const TracePoint&) const = default;
};

/// Everything that determines the future of a campaign. Models are not
/// stored: they are rebuilt from the consumed data and kernel_params.
struct CampaignState {
  RunConfig config;
  std::string pool_digest;  // digest of the effective (capped) pool
  std::vector<std::size_t> consumed;
  std::vector<ObjectiveVector> consumed_objectives;
  ParetoFront front;  // indices are pool indices
  std::vector<TracePoint> hv_trace;
  std::size_t iteration = 0;
  std::uint64_t seed = 0;
  std::vector<KernelParams> kernel_params;  // one per objective
};

/// A BMSDM campaign against a candidate pool.
///
/// The campaign owns its effective pool: the source pool, subsampled to
/// config.resource_cap when set, re-labelled with the scenario directions.
class Campaign {
 public:
  /// Initialization: rank the effective pool, draw n_start points from
  /// rank >= 2 (relaxing to rank >= 1), fit the initial models.
  Campaign(const CandidatePool& source, const RunConfig& config);

  /// Resumes from a restored state. Throws MigrationError when the state
  /// does not belong to `source` under its recorded config.
  Campaign(const CandidatePool& source, CampaignState state);

  /// True once iteration >= n_iter or the stop metric reaches the threshold.
  bool should_stop() const;

  /// One acquisition-projection-update cycle. Throws CapacityError when
  /// fewer than q unconsumed points remain.
  void step();

  /// Steps until should_stop(); returns the final report.
  MetricsReport run();

  MetricsReport report() const;
  /// Metrics of the front formed by the first n_start + k*q consumed points.
  MetricsReport report_at(std::size_t iteration) const;

  const CampaignState& state() const noexcept { return state_; }
  const CandidatePool& pool() const noexcept { return pool_; }
  const ObjectiveSpec& spec() const noexcept { return spec_; }
  const ObjectiveNormalizer& normalizer() const noexcept { return normalizer_; }
  const std::vector<GpModel>& models() const noexcept { return models_; }

 private:
  void setup(const CandidatePool& source);
  void refresh_front();
  void push_trace();
  void update_models(bool refit);
  std::vector<DesignPoint> consumed_inputs() const;

  CampaignState state_;
  CandidatePool pool_;
  ObjectiveSpec spec_;
  ObjectiveNormalizer normalizer_;
  double true_hv_ = 0.0;
  std::vector<GpModel> models_;
};

/// The effective pool a config selects from `source`.
CandidatePool effective_pool(const CandidatePool& source, const RunConfig& config);

/// Convenience wrapper: initialize and run to completion.
std::pair<CampaignState, MetricsReport> run_campaign(const CandidatePool& source, const RunConfig& config);

}  // namespace seqpareto
