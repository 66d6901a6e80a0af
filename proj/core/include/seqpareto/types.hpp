#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace seqpareto {

/// Input vector with every coordinate normalized to [0, 1].
using DesignPoint = std::vector<double>;

/// Raw objective values in their original physical units.
using ObjectiveVector = std::vector<double>;

enum class Direction { Maximize, Minimize };

/// +1 for Maximize, -1 for Minimize.
constexpr double sign_of(Direction d) noexcept { return d == Direction::Maximize ? 1.0 : -1.0; }

std::string_view to_string(Direction d) noexcept;
Direction parse_direction(std::string_view text);

/// The two optimization scenarios: both objectives maximized, or the
/// first maximized and the second minimized.
enum class Scenario { MaxMax, MaxMin };

std::string_view to_string(Scenario s) noexcept;
Scenario parse_scenario(std::string_view text);
std::vector<Direction> directions_for(Scenario s);

/// Objective directions plus the hypervolume reference point (original units).
///
/// Dominance and hypervolume code works in the canonical "maximize
/// everything" frame obtained by negating minimized objectives.
struct ObjectiveSpec {
  std::vector<Direction> directions;
  ObjectiveVector reference_point;

  std::size_t m() const noexcept { return directions.size(); }

  /// Sign-adjusted copy of `y` (minimized objectives negated).
  std::vector<double> canonical(std::span<const double> y) const;
  std::vector<double> canonical_reference() const { return canonical(reference_point); }

  /// Throws DimensionError if `y` does not have m() entries.
  void check(std::span<const double> y) const;

  /// Throws ReferenceError unless every objective vector is no worse than
  /// the reference point in each coordinate.
  void validate_reference(const std::vector<ObjectiveVector>& objectives) const;

  /// Worst corner of `objectives` under `dirs`: the per-objective minimum
  /// when maximizing and the maximum when minimizing.
  static ObjectiveVector worst_corner(const std::vector<ObjectiveVector>& objectives,
                                      const std::vector<Direction>& dirs);
};

}  // namespace seqpareto
