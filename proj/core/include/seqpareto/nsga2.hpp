#pragma once

#include <cstdint>
#include <vector>

#include "seqpareto/metrics.hpp"
#include "seqpareto/pareto.hpp"
#include "seqpareto/pool.hpp"
#include "seqpareto/types.hpp"

namespace seqpareto {

struct NsgaConfig {
  std::size_t pop_size = 100;
  std::size_t generations = 9;
  /// Probability that a mating pair is recombined.
  double crossover_rate = 0.2;
  /// Probability that a child is mutated; a mutated child resets each gene
  /// uniformly with probability 1/d.
  double mutation_rate = 0.2;
  /// BLX-alpha extension of the parent interval.
  double blend_alpha = 0.5;
  std::uint64_t seed = 0;

  /// pop 100, 9 generations (1000 evaluations); rates 0.2/0.2 for
  /// max-max and 0.85/0.1 for max-min.
  static NsgaConfig for_scenario(Scenario s, std::uint64_t seed);

  /// Throws ConfigError unless pop_size is even and >= 2 and rates lie in [0, 1].
  void validate() const;
};

/// Deb's fast non-dominated sort. Front r lists, in ascending order, the
/// indices whose non-domination rank is r.
std::vector<std::vector<std::size_t>> fast_nondominated_sort(const std::vector<ObjectiveVector>& objectives,
                                                            const ObjectiveSpec& spec);

/// Crowding distance of each member of a single front. Boundary points get
/// +infinity; objectives with zero range contribute nothing.
std::vector<double> crowding_distance(const std::vector<ObjectiveVector>& front, const ObjectiveSpec& spec);

struct NsgaResult {
  ParetoFront front;  // indices are pool indices
  MetricsReport report;
  std::size_t function_evaluations = 0;
  std::size_t unique_evaluations = 0;
  /// Normalized HV of the population's rank-0 set after initialization and
  /// after each generation.
  std::vector<double> generation_hv;
};

/// Real-coded NSGA-II over [0, 1]^d whose fitness is the nearest pool row
/// (revisits allowed). The final front is extracted from every pool row
/// evaluated at least once.
NsgaResult nsga2_run(const CandidatePool& pool, const NsgaConfig& config, const ObjectiveSpec& spec);

}  // namespace seqpareto
