#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "seqpareto/types.hpp"

namespace seqpareto {

class CandidatePool;

enum class DoeMethod { Lhs, Uds, SpherePacking };

std::string_view to_string(DoeMethod m) noexcept;
DoeMethod parse_doe_method(std::string_view text);

struct DoeRequest {
  DoeMethod method = DoeMethod::Lhs;
  std::size_t n = 1;
  std::size_t d = 1;
  std::uint64_t seed = 0;
  /// UDS only: plain uniform-random sampling instead of a scrambled Sobol set.
  bool uds_random = false;
};

/// Latin hypercube: every dimension has exactly one sample in each stratum
/// [i/n, (i+1)/n), placed uniformly within it.
std::vector<DesignPoint> lhs(std::size_t n, std::size_t d, std::uint64_t seed);

/// Uniform design: first n points of a seed-scrambled Sobol sequence, or
/// uniform-random points when `random` is set.
std::vector<DesignPoint> uds(std::size_t n, std::size_t d, std::uint64_t seed, bool random = false);

struct SpherePackingResult {
  std::vector<DesignPoint> points;
  /// Half the minimum pairwise distance of the returned configuration.
  double radius = 0.0;
  /// Minimum pairwise distance after the random start and after each sweep.
  std::vector<double> min_distance_trace;
};

struct SpherePackingOptions {
  std::size_t sweeps = 200;
  std::size_t proposals = 100;
  /// Consecutive sweeps without a move before declaring convergence.
  std::size_t patience = 20;
};

/// Maximin-distance design: from a seeded random start, repeatedly move one
/// point of the closest pair to the best of `proposals` uniform locations
/// whenever that strictly increases its nearest-neighbour distance.
SpherePackingResult sphere_packing(std::size_t n, std::size_t d, std::uint64_t seed,
                                   const SpherePackingOptions& options = {});

std::vector<DesignPoint> generate_design(const DoeRequest& request);

/// Greedy nearest-unconsumed mapping in design order (Euclidean distance in
/// normalized input space, ties to the lowest index). Chosen indices are
/// marked consumed in `pool`. Throws CapacityError when the pool runs out.
std::vector<std::size_t> project_to_pool(const std::vector<DesignPoint>& design, CandidatePool& pool);

}  // namespace seqpareto
