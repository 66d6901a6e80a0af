#include "seqpareto/normalize.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "seqpareto/error.hpp"

namespace seqpareto {

DesignPoint InputScaling::normalize(std::span<const double> raw) const {
  if (raw.size() != dims()) throw DimensionError("input has wrong dimensionality");
  DesignPoint out(raw.size());
  for (std::size_t k = 0; k < raw.size(); ++k) {
    if (!std::isfinite(raw[k])) throw DataError("non-finite input value");
    out[k] = is_constant(k) ? 0.5 : (raw[k] - min[k]) / (max[k] - min[k]);
  }
  return out;
}

std::vector<double> InputScaling::denormalize(std::span<const double> unit) const {
  if (unit.size() != dims()) throw DimensionError("input has wrong dimensionality");
  std::vector<double> out(unit.size());
  for (std::size_t k = 0; k < unit.size(); ++k) {
    out[k] = is_constant(k) ? min[k] : min[k] + unit[k] * (max[k] - min[k]);
  }
  return out;
}

NormalizedInputs normalize_inputs(const std::vector<std::vector<double>>& raw) {
  if (raw.empty()) throw EmptySetError("no input rows to normalize");
  const std::size_t d = raw.front().size();
  NormalizedInputs result;
  result.scaling.min.assign(d, 0.0);
  result.scaling.max.assign(d, 0.0);
  for (std::size_t k = 0; k < d; ++k) {
    result.scaling.min[k] = raw.front()[k];
    result.scaling.max[k] = raw.front()[k];
  }
  for (const auto& row : raw) {
    if (row.size() != d) throw DimensionError("ragged input rows");
    for (std::size_t k = 0; k < d; ++k) {
      if (!std::isfinite(row[k])) {
        throw DataError("non-finite input value in column " + std::to_string(k));
      }
      result.scaling.min[k] = std::min(result.scaling.min[k], row[k]);
      result.scaling.max[k] = std::max(result.scaling.max[k], row[k]);
    }
  }
  result.points.reserve(raw.size());
  for (const auto& row : raw) result.points.push_back(result.scaling.normalize(row));
  return result;
}

}  // namespace seqpareto
