#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "seqpareto/normalize.hpp"
#include "seqpareto/pareto.hpp"
#include "seqpareto/types.hpp"

namespace seqpareto {

inline constexpr int kManifestSchemaVersion = 1;

/// Source record written beside every pool-derived output.
struct PoolManifest {
  std::string source;  // file path or "synthetic:<family>"
  std::vector<std::string> input_columns;
  std::vector<std::string> objective_columns;
  std::vector<Direction> directions;
  std::size_t rows = 0;
  std::size_t dropped_rows = 0;
  std::string digest;
  nlohmann::json generator;  // synthetic parameters or subsample note; null otherwise
  InputScaling input_scaling;
};

void to_json(nlohmann::json& j, const PoolManifest& m);
void from_json(const nlohmann::json& j, PoolManifest& m);

/// Finite set of pre-measured (input, objective) records standing in for
/// expensive experiments, plus consumed flags for pool-based simulation.
///
/// Inputs are kept both raw and normalized to [0, 1] with statistics taken
/// over the whole pool. Consumed flags belong to whichever campaign owns
/// the pool object; copy the pool to run campaigns side by side.
class CandidatePool {
 public:
  CandidatePool() = default;
  CandidatePool(std::vector<std::vector<double>> raw_inputs, std::vector<ObjectiveVector> objectives,
                std::vector<std::string> input_names, std::vector<std::string> objective_names,
                std::vector<Direction> directions);

  std::size_t size() const noexcept { return objectives_.size(); }
  std::size_t dims() const noexcept { return scaling_.dims(); }
  std::size_t num_objectives() const noexcept { return directions_.size(); }

  const std::vector<DesignPoint>& inputs() const noexcept { return inputs_; }
  const std::vector<std::vector<double>>& raw_inputs() const noexcept { return raw_inputs_; }
  const std::vector<ObjectiveVector>& objectives() const noexcept { return objectives_; }
  const InputScaling& scaling() const noexcept { return scaling_; }
  const std::vector<std::string>& input_names() const noexcept { return input_names_; }
  const std::vector<std::string>& objective_names() const noexcept { return objective_names_; }
  const std::vector<Direction>& directions() const noexcept { return directions_; }

  /// Copy of this pool optimized under different directions.
  CandidatePool with_directions(std::vector<Direction> directions) const;

  /// Objective spec with these directions and the worst-corner reference.
  ObjectiveSpec default_spec() const;

  /// Non-dominated rows under the pool's directions (cached).
  const ParetoFront& true_front() const noexcept { return true_front_; }

  bool is_consumed(std::size_t i) const { return consumed_.at(i); }
  void consume(std::size_t i);
  void reset_consumption();
  std::size_t consumed_count() const noexcept { return consumed_count_; }
  std::size_t available() const noexcept { return size() - consumed_count_; }

  /// Closest row by Euclidean distance in normalized input space, lowest
  /// index on ties, skipping consumed rows. Throws CapacityError if none.
  std::size_t nearest_unconsumed(std::span<const double> x) const;
  /// Closest row ignoring consumed flags.
  std::size_t nearest(std::span<const double> x) const;

  /// SHA-256 over names and full-precision values of every row.
  const std::string& digest() const noexcept { return digest_; }

  PoolManifest& manifest() noexcept { return manifest_; }
  const PoolManifest& manifest() const noexcept { return manifest_; }

 private:
  std::size_t nearest_impl(std::span<const double> x, bool skip_consumed) const;

  std::vector<std::vector<double>> raw_inputs_;
  std::vector<DesignPoint> inputs_;
  std::vector<ObjectiveVector> objectives_;
  InputScaling scaling_;
  std::vector<std::string> input_names_;
  std::vector<std::string> objective_names_;
  std::vector<Direction> directions_;
  ParetoFront true_front_;
  std::vector<bool> consumed_;
  std::size_t consumed_count_ = 0;
  std::string digest_;
  PoolManifest manifest_;
};

/// Reads a comma-delimited UTF-8 CSV with a header row. Rows with missing or
/// non-numeric cells in the selected columns are dropped and counted in
/// manifest().dropped_rows. Throws SchemaError for unknown columns and
/// DataError when fewer than two rows survive.
CandidatePool ingest_csv(const std::filesystem::path& path, const std::vector<std::string>& input_columns,
                         const std::vector<std::string>& objective_columns,
                         const std::vector<Direction>& directions);

/// Writes raw inputs then objectives with round-trip precision.
void write_pool_csv(const CandidatePool& pool, const std::filesystem::path& path);

/// Objective rows from a CSV (used for externally produced fronts).
std::vector<ObjectiveVector> read_objectives_csv(const std::filesystem::path& path,
                                                 const std::vector<std::string>& objective_columns);

enum class SyntheticFamily { ConcaveFront, ConvexFront, DisconnectedFront };

std::string_view to_string(SyntheticFamily f) noexcept;
SyntheticFamily parse_family(std::string_view text);

struct SyntheticSpec {
  SyntheticFamily family = SyntheticFamily::ConcaveFront;
  std::size_t n = 402;
  std::size_t d = 7;
  double noise = 0.01;
  std::uint64_t seed = 0;
};

/// Analytic bi-objective landscape the synthetic pools are drawn from.
/// Inputs in [0, 1]^d; returns the noise-free objective pair.
ObjectiveVector synthetic_objectives(SyntheticFamily family, std::span<const double> x);

/// Plateau distance of the trailing coordinates; zero exactly on the
/// optimal manifold whose image is the analytic trade-off curve.
double synthetic_plateau_distance(std::span<const double> x);

/// Pool with low-discrepancy inputs and noisy synthetic objectives; both
/// objectives are labelled for maximization.
CandidatePool generate_synthetic_pool(const SyntheticSpec& spec);

/// Uniform random subset of `cap` rows (kept in original order).
CandidatePool subsample(const CandidatePool& pool, std::size_t cap, std::uint64_t seed);

}  // namespace seqpareto
