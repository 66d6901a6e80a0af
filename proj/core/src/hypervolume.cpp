#include "seqpareto/hypervolume.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "seqpareto/error.hpp"

namespace seqpareto {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool strictly_above(std::span<const double> p, std::span<const double> ref) {
  for (std::size_t k = 0; k < ref.size(); ++k) {
    if (!(p[k] > ref[k])) return false;
  }
  return true;
}

// 2-D sweep: sort by the first objective descending and accumulate the
// staircase strips.
double hv2(std::vector<std::pair<double, double>> pts, double r0, double r1) {
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
    return a.first > b.first || (a.first == b.first && a.second > b.second);
  });
  double area = 0.0;
  double best_y = r1;
  for (const auto& [x, y] : pts) {
    if (y > best_y) {
      area += (x - r0) * (y - best_y);
      best_y = y;
    }
  }
  return area;
}

double hv3(const CanonicalPoints& pts, std::span<const double> ref) {
  std::vector<const std::vector<double>*> sorted;
  sorted.reserve(pts.size());
  for (const auto& p : pts) sorted.push_back(&p);
  std::sort(sorted.begin(), sorted.end(), [](const auto* a, const auto* b) { return (*a)[2] > (*b)[2]; });

  double volume = 0.0;
  std::vector<std::pair<double, double>> slice;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    slice.emplace_back((*sorted[i])[0], (*sorted[i])[1]);
    const double top = (*sorted[i])[2];
    const double bottom = (i + 1 < sorted.size()) ? (*sorted[i + 1])[2] : ref[2];
    if (top > bottom) volume += (top - bottom) * hv2(slice, ref[0], ref[1]);
  }
  return volume;
}

}  // namespace

double hypervolume_canonical(const CanonicalPoints& points, std::span<const double> ref) {
  const std::size_t m = ref.size();
  if (m != 2 && m != 3) {
    throw ConfigError("hypervolume supports 2 or 3 objectives, got " + std::to_string(m));
  }
  CanonicalPoints kept;
  kept.reserve(points.size());
  for (const auto& p : points) {
    if (p.size() != m) throw DimensionError("hypervolume point has wrong dimensionality");
    if (strictly_above(p, ref)) kept.push_back(p);
  }
  if (kept.empty()) return 0.0;
  if (m == 2) {
    std::vector<std::pair<double, double>> pts;
    pts.reserve(kept.size());
    for (const auto& p : kept) pts.emplace_back(p[0], p[1]);
    return hv2(std::move(pts), ref[0], ref[1]);
  }
  return hv3(kept, ref);
}

BoxDecomposition::BoxDecomposition(const CanonicalPoints& front, std::span<const double> ref)
    : ref_(ref.begin(), ref.end()) {
  if (ref.size() != 2) throw ConfigError("box decomposition is implemented for 2 objectives");
  CanonicalPoints pts;
  for (const auto& p : front) {
    if (p.size() != 2) throw DimensionError("front point has wrong dimensionality");
    if (strictly_above(p, ref)) pts.push_back(p);
  }
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
    return a[0] > b[0] || (a[0] == b[0] && a[1] > b[1]);
  });
  for (const auto& p : pts) {
    if (front_.empty() || p[1] > front_.back()[1]) front_.push_back(p);
  }

  if (front_.empty()) {
    boxes_.push_back({{ref_[0], ref_[1]}, {kInf, kInf}});
    return;
  }
  boxes_.push_back({{front_.front()[0], ref_[1]}, {kInf, kInf}});
  for (std::size_t j = 0; j + 1 < front_.size(); ++j) {
    boxes_.push_back({{front_[j + 1][0], front_[j][1]}, {front_[j][0], kInf}});
  }
  boxes_.push_back({{ref_[0], front_.back()[1]}, {front_.back()[0], kInf}});
}

double BoxDecomposition::clipped_measure(std::span<const double> corner) const {
  double total = 0.0;
  for (const auto& b : boxes_) {
    const double w = std::min(b.upper[0], corner[0]) - std::max(b.lower[0], ref_[0]);
    if (w <= 0.0) continue;
    const double h = std::min(b.upper[1], corner[1]) - std::max(b.lower[1], ref_[1]);
    if (h <= 0.0) continue;
    total += w * h;
  }
  return total;
}

ImprovementCalculator::ImprovementCalculator(const CanonicalPoints& front, std::span<const double> ref)
    : ref_(ref.begin(), ref.end()), front_(front) {
  if (m() == 2) {
    boxes_ = BoxDecomposition(front, ref);
  } else if (m() == 3) {
    front_hv_ = hypervolume_canonical(front_, ref_);
  } else {
    throw ConfigError("hypervolume improvement supports 2 or 3 objectives");
  }
}

double ImprovementCalculator::hvi(std::span<const double> y) const {
  if (y.size() != m()) throw DimensionError("improvement point has wrong dimensionality");
  if (m() == 2) return boxes_.clipped_measure(y);
  CanonicalPoints with = front_;
  with.emplace_back(y.begin(), y.end());
  return std::max(0.0, hypervolume_canonical(with, ref_) - front_hv_);
}

double ImprovementCalculator::joint(const CanonicalPoints& batch) const {
  std::vector<double> flat;
  flat.reserve(batch.size() * m());
  for (const auto& row : batch) {
    if (row.size() != m()) throw DimensionError("batch row has wrong dimensionality");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return joint_flat(flat, batch.size());
}

double ImprovementCalculator::joint_flat(std::span<const double> rows, std::size_t q) const {
  if (q == 0) return 0.0;
  if (q > kMaxBatch) {
    throw CombinatorialLimitError("joint improvement limited to batches of " +
                                  std::to_string(kMaxBatch) + " points");
  }
  if (rows.size() != q * m()) throw DimensionError("batch buffer has wrong size");
  if (m() == 3) {
    CanonicalPoints with = front_;
    for (std::size_t i = 0; i < q; ++i) with.emplace_back(rows.begin() + 3 * i, rows.begin() + 3 * i + 3);
    return std::max(0.0, hypervolume_canonical(with, ref_) - front_hv_);
  }
  if (q == 1) return boxes_.clipped_measure(rows.first(2));

  // Inclusion-exclusion: the intersection of the regions dominated by a
  // subset of rows is the box below their componentwise minimum.
  double total = 0.0;
  const std::size_t subsets = std::size_t{1} << q;
  double corner[2];
  for (std::size_t mask = 1; mask < subsets; ++mask) {
    corner[0] = kInf;
    corner[1] = kInf;
    int bits = 0;
    for (std::size_t i = 0; i < q; ++i) {
      if (mask & (std::size_t{1} << i)) {
        corner[0] = std::min(corner[0], rows[2 * i]);
        corner[1] = std::min(corner[1], rows[2 * i + 1]);
        ++bits;
      }
    }
    const double term = boxes_.clipped_measure(corner);
    total += (bits % 2 == 1) ? term : -term;
  }
  return std::max(0.0, total);
}

namespace {

CanonicalPoints canonical_all(const std::vector<ObjectiveVector>& ys, const ObjectiveSpec& spec) {
  CanonicalPoints out;
  out.reserve(ys.size());
  for (const auto& y : ys) out.push_back(spec.canonical(y));
  return out;
}

}  // namespace

double hvi(const std::vector<ObjectiveVector>& front, const ObjectiveVector& y_new,
           const ObjectiveSpec& spec) {
  const ImprovementCalculator calc(canonical_all(front, spec), spec.canonical_reference());
  return calc.hvi(spec.canonical(y_new));
}

double qhvi_joint(const std::vector<ObjectiveVector>& front,
                  const std::vector<ObjectiveVector>& batch, const ObjectiveSpec& spec) {
  if (batch.size() > ImprovementCalculator::kMaxBatch) {
    throw CombinatorialLimitError("joint improvement limited to batches of 12 points");
  }
  const ImprovementCalculator calc(canonical_all(front, spec), spec.canonical_reference());
  return calc.joint(canonical_all(batch, spec));
}

}  // namespace seqpareto
