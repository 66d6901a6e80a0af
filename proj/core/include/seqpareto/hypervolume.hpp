#pragma once

#include <span>
#include <vector>

#include "seqpareto/pareto.hpp"
#include "seqpareto/types.hpp"

namespace seqpareto {

/// Points and reference in the canonical (maximize-everything) frame.
using CanonicalPoints = std::vector<std::vector<double>>;

/// Lebesgue measure of the union of boxes [ref, p] over `points`.
/// Points not strictly above `ref` in every coordinate contribute nothing,
/// and dominated points are allowed. Supports m = 2 (sorted sweep) and
/// m = 3 (slicing along the last objective); other m throw ConfigError.
double hypervolume_canonical(const CanonicalPoints& points, std::span<const double> ref);

/// Axis-aligned box; upper coordinates may be +infinity.
struct Box {
  std::vector<double> lower;
  std::vector<double> upper;
};

/// Disjoint boxes covering the region above the reference point that the
/// front does not dominate (bi-objective only).
class BoxDecomposition {
 public:
  BoxDecomposition() = default;
  BoxDecomposition(const CanonicalPoints& front, std::span<const double> ref);

  const std::vector<Box>& boxes() const noexcept { return boxes_; }
  const CanonicalPoints& front() const noexcept { return front_; }
  const std::vector<double>& reference() const noexcept { return ref_; }

  /// Measure of the part of the non-dominated region inside [ref, corner].
  double clipped_measure(std::span<const double> corner) const;

 private:
  std::vector<Box> boxes_;
  CanonicalPoints front_;  // non-dominated, sorted by first objective descending
  std::vector<double> ref_;
};

/// Hypervolume improvement machinery for a fixed front and reference.
///
/// For m = 2 the joint improvement of a batch is computed by
/// inclusion-exclusion over the 2^q - 1 non-empty subsets intersected with
/// the box decomposition; for m = 3 it is HV(front + batch) - HV(front).
class ImprovementCalculator {
 public:
  static constexpr std::size_t kMaxBatch = 12;

  ImprovementCalculator(const CanonicalPoints& front, std::span<const double> ref);

  std::size_t m() const noexcept { return ref_.size(); }

  /// Improvement from adding one canonical point.
  double hvi(std::span<const double> y) const;

  /// Measure of the union of the regions each row of `batch` adds.
  double joint(const CanonicalPoints& batch) const;

  /// Same as joint() but reads rows straight from a flat row-major buffer
  /// (q rows of m values) to avoid allocations in Monte-Carlo loops.
  double joint_flat(std::span<const double> rows, std::size_t q) const;

 private:
  std::vector<double> ref_;
  CanonicalPoints front_;
  BoxDecomposition boxes_;
  double front_hv_ = 0.0;
};

/// HV(front + y_new) - HV(front) in original units.
double hvi(const std::vector<ObjectiveVector>& front, const ObjectiveVector& y_new,
           const ObjectiveSpec& spec);

/// Joint hypervolume improvement of the rows of `batch` (q <= 12).
double qhvi_joint(const std::vector<ObjectiveVector>& front,
                  const std::vector<ObjectiveVector>& batch, const ObjectiveSpec& spec);

}  // namespace seqpareto
