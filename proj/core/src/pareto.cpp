#include "seqpareto/pareto.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "seqpareto/error.hpp"

namespace seqpareto {

std::string_view to_string(Direction d) noexcept {
  return d == Direction::Maximize ? "max" : "min";
}

Direction parse_direction(std::string_view text) {
  if (text == "max" || text == "maximize" || text == "Maximize") return Direction::Maximize;
  if (text == "min" || text == "minimize" || text == "Minimize") return Direction::Minimize;
  throw ConfigError("unknown objective direction '" + std::string(text) + "'");
}

std::string_view to_string(Scenario s) noexcept {
  return s == Scenario::MaxMax ? "max-max" : "max-min";
}

Scenario parse_scenario(std::string_view text) {
  if (text == "max-max" || text == "maxmax") return Scenario::MaxMax;
  if (text == "max-min" || text == "maxmin") return Scenario::MaxMin;
  throw ConfigError("unknown scenario '" + std::string(text) + "'");
}

std::vector<Direction> directions_for(Scenario s) {
  if (s == Scenario::MaxMax) return {Direction::Maximize, Direction::Maximize};
  return {Direction::Maximize, Direction::Minimize};
}

void ObjectiveSpec::check(std::span<const double> y) const {
  if (y.size() != directions.size()) {
    throw DimensionError("objective vector has " + std::to_string(y.size()) +
                         " entries, expected " + std::to_string(directions.size()));
  }
}

std::vector<double> ObjectiveSpec::canonical(std::span<const double> y) const {
  check(y);
  std::vector<double> out(y.size());
  for (std::size_t k = 0; k < y.size(); ++k) out[k] = sign_of(directions[k]) * y[k];
  return out;
}

void ObjectiveSpec::validate_reference(const std::vector<ObjectiveVector>& objectives) const {
  check(reference_point);
  for (const auto& y : objectives) {
    check(y);
    for (std::size_t k = 0; k < y.size(); ++k) {
      const double s = sign_of(directions[k]);
      if (s * y[k] < s * reference_point[k]) {
        throw ReferenceError("reference point is not dominated by every objective vector (objective " +
                             std::to_string(k) + ")");
      }
    }
  }
}

ObjectiveVector ObjectiveSpec::worst_corner(const std::vector<ObjectiveVector>& objectives,
                                            const std::vector<Direction>& dirs) {
  if (objectives.empty()) throw EmptySetError("worst_corner of an empty set");
  ObjectiveVector out(dirs.size());
  for (std::size_t k = 0; k < dirs.size(); ++k) {
    double worst = objectives.front().at(k);
    for (const auto& y : objectives) {
      worst = dirs[k] == Direction::Maximize ? std::min(worst, y.at(k)) : std::max(worst, y.at(k));
    }
    out[k] = worst;
  }
  return out;
}

bool dominates(std::span<const double> a, std::span<const double> b, const ObjectiveSpec& spec) {
  spec.check(a);
  spec.check(b);
  bool strict = false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double s = sign_of(spec.directions[k]);
    const double sa = s * a[k];
    const double sb = s * b[k];
    if (sa < sb) return false;
    if (sa > sb) strict = true;
  }
  return strict;
}

namespace {

bool weakly_dominates_canonical(const std::vector<double>& a, const std::vector<double>& b) {
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] < b[k]) return false;
  }
  return true;
}

// Source indices ordered lexicographically descending in canonical space,
// ties broken by ascending index. Only earlier entries can dominate later ones.
std::vector<std::size_t> lexicographic_order(const std::vector<std::vector<double>>& canon) {
  std::vector<std::size_t> order(canon.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return std::lexicographical_compare(canon[j].begin(), canon[j].end(), canon[i].begin(),
                                        canon[i].end());
  });
  return order;
}

std::vector<std::vector<double>> canonicalize(const std::vector<ObjectiveVector>& objectives,
                                              const ObjectiveSpec& spec) {
  std::vector<std::vector<double>> canon;
  canon.reserve(objectives.size());
  for (const auto& y : objectives) {
    canon.push_back(spec.canonical(y));
    for (double v : y) {
      if (!std::isfinite(v)) throw DataError("non-finite objective value");
    }
  }
  return canon;
}

std::vector<std::size_t> front_indices(const std::vector<ObjectiveVector>& objectives,
                                       const ObjectiveSpec& spec) {
  if (objectives.empty()) throw EmptySetError("cannot extract a Pareto front from an empty set");
  const auto canon = canonicalize(objectives, spec);
  const auto order = lexicographic_order(canon);

  // Any dominated point is dominated by some front member, and exact
  // duplicates follow their lowest-index copy in `order`, so a weak-dominance
  // test against the kept list rejects both.
  std::vector<std::size_t> kept;
  for (std::size_t idx : order) {
    bool rejected = false;
    for (std::size_t f : kept) {
      if (weakly_dominates_canonical(canon[f], canon[idx])) {
        rejected = true;
        break;
      }
    }
    if (!rejected) kept.push_back(idx);
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

}  // namespace

ParetoFront extract_pareto_front(const std::vector<ObjectiveVector>& objectives,
                                 const ObjectiveSpec& spec) {
  ParetoFront front;
  front.indices = front_indices(objectives, spec);
  front.objectives.reserve(front.indices.size());
  for (std::size_t i : front.indices) front.objectives.push_back(objectives[i]);
  return front;
}

ParetoFront extract_pareto_front(const std::vector<DesignPoint>& points,
                                 const std::vector<ObjectiveVector>& objectives,
                                 const ObjectiveSpec& spec) {
  if (points.size() != objectives.size()) {
    throw DimensionError("design point and objective lists differ in length");
  }
  ParetoFront front = extract_pareto_front(objectives, spec);
  front.points.reserve(front.indices.size());
  for (std::size_t i : front.indices) front.points.push_back(points[i]);
  return front;
}

std::vector<int> nondomination_rank(const std::vector<ObjectiveVector>& objectives,
                                    const ObjectiveSpec& spec) {
  if (objectives.empty()) throw EmptySetError("cannot rank an empty set");
  const auto canon = canonicalize(objectives, spec);
  const auto order = lexicographic_order(canon);

  // A point's peeling rank is one more than the largest rank among the
  // points dominating it; every dominator precedes it in `order`.
  std::vector<int> rank(objectives.size(), 0);
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const std::size_t i = order[pos];
    int r = 0;
    for (std::size_t prev = 0; prev < pos; ++prev) {
      const std::size_t j = order[prev];
      if (rank[j] + 1 > r && weakly_dominates_canonical(canon[j], canon[i]) && canon[j] != canon[i]) {
        r = rank[j] + 1;
      }
    }
    rank[i] = r;
  }
  return rank;
}

}  // namespace seqpareto
