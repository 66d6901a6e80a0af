#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "seqpareto/types.hpp"

namespace seqpareto {

/// True iff `a` is no worse than `b` in every objective and strictly better
/// in at least one, after applying the directions of `spec`.
bool dominates(std::span<const double> a, std::span<const double> b, const ObjectiveSpec& spec);

/// Non-dominated subset of a source set, in ascending source-index order.
struct ParetoFront {
  std::vector<std::size_t> indices;       // positions in the source list
  std::vector<ObjectiveVector> objectives;
  std::vector<DesignPoint> points;        // empty when the source carried no inputs

  std::size_t size() const noexcept { return indices.size(); }
  bool empty() const noexcept { return indices.empty(); }
};

/// Exactly the non-dominated members of `objectives`. Exact duplicates of a
/// retained vector collapse onto the lowest-index copy. Throws EmptySetError
/// on empty input.
ParetoFront extract_pareto_front(const std::vector<ObjectiveVector>& objectives,
                                 const ObjectiveSpec& spec);

/// Same as above, also carrying the design point of each member.
ParetoFront extract_pareto_front(const std::vector<DesignPoint>& points,
                                 const std::vector<ObjectiveVector>& objectives,
                                 const ObjectiveSpec& spec);

/// Peeling rank of every point: 0 for the Pareto front, r for the front
/// that remains once ranks < r are removed.
std::vector<int> nondomination_rank(const std::vector<ObjectiveVector>& objectives,
                                    const ObjectiveSpec& spec);

}  // namespace seqpareto
