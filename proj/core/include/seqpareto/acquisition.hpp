#pragma once

#include <cstdint>
#include <vector>

#include "seqpareto/gp.hpp"
#include "seqpareto/hypervolume.hpp"
#include "seqpareto/types.hpp"

namespace seqpareto {

struct AcquisitionConfig {
  std::size_t q = 1;
  std::size_t mc_samples = 32;
  std::size_t num_restarts = 10;
  std::size_t raw_samples = 402;
  double lower_bound = 0.0;
  double upper_bound = 1.0;
  bool quasi_random = true;
  double initial_step = 0.1;
  double final_step = 1e-3;
  /// Evaluation cap for a single pattern-search restart.
  std::size_t max_evals_per_restart = 400;

  /// Throws ConfigError unless q >= 1, mc_samples >= 16,
  /// raw_samples >= num_restarts and the bounds are ordered.
  void validate() const;
};

/// Monte-Carlo qEHVI for a fixed set of per-objective models, front and
/// reference point.
///
/// Base normal draws are generated once per (seed, batch width) and shared
/// by every candidate batch, so values are deterministic and smooth in the
/// candidate locations. Draws for a batch are a prefix-extension of those
/// for any shorter leading batch.
class QehviEvaluator {
 public:
  QehviEvaluator(const std::vector<GpModel>& models, const std::vector<ObjectiveVector>& front,
                 const ObjectiveSpec& spec, const AcquisitionConfig& cfg, std::uint64_t seed);

  double operator()(const std::vector<DesignPoint>& batch) const;

  std::size_t dims() const noexcept { return models_->front().dims(); }
  const ImprovementCalculator& improvement() const noexcept { return calc_; }

 private:
  const std::vector<GpModel>* models_;
  ObjectiveSpec spec_;
  ImprovementCalculator calc_;
  BaseSamples base_;
  std::size_t mc_samples_;
};

/// qEHVI of the candidate batch `xs` averaged over cfg.mc_samples joint
/// posterior draws. Always >= 0.
double qehvi(const std::vector<GpModel>& models, const std::vector<ObjectiveVector>& front,
             const ObjectiveSpec& spec, const std::vector<DesignPoint>& xs,
             const AcquisitionConfig& cfg, std::uint64_t seed);

struct AcquisitionResult {
  std::vector<DesignPoint> batch;
  double value = 0.0;
  /// Screening points of the first greedy stage and their singleton scores.
  std::vector<DesignPoint> raw_points;
  std::vector<double> raw_values;
};

/// Maximizes qEHVI over [lower, upper]^d: quasi-random screening of
/// cfg.raw_samples points, coordinate pattern search from the best
/// cfg.num_restarts of them, and greedy sequential batch growth for q > 1.
AcquisitionResult maximize_qehvi(const std::vector<GpModel>& models,
                                 const std::vector<ObjectiveVector>& front, const ObjectiveSpec& spec,
                                 const AcquisitionConfig& cfg, std::uint64_t seed);

}  // namespace seqpareto
