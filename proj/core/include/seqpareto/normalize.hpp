#pragma once

#include <span>
#include <vector>

#include "seqpareto/types.hpp"

namespace seqpareto {

/// Per-dimension min/max record used to map raw inputs into [0, 1].
/// Constant dimensions (min == max) map to 0.5.
struct InputScaling {
  std::vector<double> min;
  std::vector<double> max;

  std::size_t dims() const noexcept { return min.size(); }
  bool is_constant(std::size_t k) const noexcept { return min[k] == max[k]; }

  DesignPoint normalize(std::span<const double> raw) const;
  std::vector<double> denormalize(std::span<const double> unit) const;
};

struct NormalizedInputs {
  std::vector<DesignPoint> points;
  InputScaling scaling;
};

/// Min-max normalize each column of `raw`. Throws DataError on non-finite
/// values and DimensionError on ragged rows.
NormalizedInputs normalize_inputs(const std::vector<std::vector<double>>& raw);

}  // namespace seqpareto
