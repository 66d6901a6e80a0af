#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "seqpareto/types.hpp"

namespace seqpareto {

/// How GD/IGD aggregate nearest-neighbour distances.
///   Paper:   (1/|A|) * sqrt(sum d_i^2)   (divisor outside the root)
///   Classic: sqrt((1/|A|) * sum d_i^2)
enum class DistanceConvention { Paper, Classic };

std::string_view to_string(DistanceConvention c) noexcept;
DistanceConvention parse_convention(std::string_view text);

/// Generational distance from the achieved set to the true front.
double gd(const std::vector<ObjectiveVector>& achieved, const std::vector<ObjectiveVector>& truth,
          DistanceConvention convention = DistanceConvention::Paper);

/// Inverted generational distance: igd(A, P) == gd(P, A).
double igd(const std::vector<ObjectiveVector>& achieved, const std::vector<ObjectiveVector>& truth,
           DistanceConvention convention = DistanceConvention::Paper);

/// Hypervolume of `front` against spec.reference_point. Every point must be
/// no worse than the reference in each objective (ReferenceError otherwise).
double hypervolume(const std::vector<ObjectiveVector>& front, const ObjectiveSpec& spec);

/// HV(achieved) / HV(truth). An empty achieved set gives 0.
double phv(const std::vector<ObjectiveVector>& achieved, const std::vector<ObjectiveVector>& truth,
           const ObjectiveSpec& spec);

/// points_used / pool_size.
double data_usage(std::size_t points_used, std::size_t pool_size);

/// Affine map taking sign-adjusted objectives to [0, 1] per objective.
/// The lower end is the worse of the pool's worst value and the reference,
/// so the normalized reference lies at the origin or inside the cube.
class ObjectiveNormalizer {
 public:
  ObjectiveNormalizer() = default;
  ObjectiveNormalizer(const std::vector<ObjectiveVector>& pool_objectives, const ObjectiveSpec& spec);

  std::vector<double> apply(const ObjectiveVector& y) const;
  const std::vector<double>& normalized_reference() const noexcept { return ref_; }

  /// Hypervolume of `front` in the normalized frame (values in [0, 1]).
  double hypervolume(const std::vector<ObjectiveVector>& front) const;

 private:
  ObjectiveSpec spec_;
  std::vector<double> lo_;
  std::vector<double> span_;
  std::vector<double> ref_;
};

struct MetricsReport {
  double gd = 0.0;
  double igd = 0.0;
  double hv = 0.0;   // normalized-objective hypervolume
  double phv = 0.0;
  double data_usage = 0.0;
  std::size_t points_used = 0;
};

void to_json(nlohmann::json& j, const MetricsReport& r);
void from_json(const nlohmann::json& j, MetricsReport& r);

/// Full report for an achieved front against the pool's true front.
/// GD/IGD use original units; HV is normalized; PHV is unit-free.
MetricsReport evaluate_front(const std::vector<ObjectiveVector>& achieved_front,
                             const std::vector<ObjectiveVector>& true_front,
                             const ObjectiveNormalizer& normalizer, const ObjectiveSpec& spec,
                             std::size_t points_used, std::size_t pool_size,
                             DistanceConvention convention = DistanceConvention::Paper);

}  // namespace seqpareto
