#include "seqpareto/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "seqpareto/error.hpp"
#include "seqpareto/hypervolume.hpp"

namespace seqpareto {

std::string_view to_string(DistanceConvention c) noexcept {
  return c == DistanceConvention::Paper ? "paper" : "classic";
}

DistanceConvention parse_convention(std::string_view text) {
  if (text == "paper") return DistanceConvention::Paper;
  if (text == "classic") return DistanceConvention::Classic;
  throw ConfigError("unknown distance convention '" + std::string(text) + "'");
}

namespace {

double nearest_sq(const ObjectiveVector& a, const std::vector<ObjectiveVector>& set) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : set) {
    if (p.size() != a.size()) throw DimensionError("metric sets have different dimensionality");
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - p[k]) * (a[k] - p[k]);
    best = std::min(best, s);
  }
  return best;
}

double distance_aggregate(const std::vector<ObjectiveVector>& from, const std::vector<ObjectiveVector>& to,
                          DistanceConvention convention) {
  if (from.empty() || to.empty()) throw MetricError("distance metric needs two non-empty sets");
  double sum = 0.0;
  for (const auto& a : from) sum += nearest_sq(a, to);
  const auto n = static_cast<double>(from.size());
  return convention == DistanceConvention::Paper ? std::sqrt(sum) / n : std::sqrt(sum / n);
}

}  // namespace

double gd(const std::vector<ObjectiveVector>& achieved, const std::vector<ObjectiveVector>& truth,
          DistanceConvention convention) {
  return distance_aggregate(achieved, truth, convention);
}

double igd(const std::vector<ObjectiveVector>& achieved, const std::vector<ObjectiveVector>& truth,
           DistanceConvention convention) {
  return distance_aggregate(truth, achieved, convention);
}

double hypervolume(const std::vector<ObjectiveVector>& front, const ObjectiveSpec& spec) {
  const auto ref = spec.canonical_reference();
  CanonicalPoints pts;
  pts.reserve(front.size());
  for (const auto& y : front) {
    auto c = spec.canonical(y);
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (c[k] < ref[k]) {
        throw ReferenceError("front point does not dominate the reference point in objective " +
                             std::to_string(k));
      }
    }
    pts.push_back(std::move(c));
  }
  return hypervolume_canonical(pts, ref);
}

double phv(const std::vector<ObjectiveVector>& achieved, const std::vector<ObjectiveVector>& truth,
           const ObjectiveSpec& spec) {
  if (truth.empty()) throw MetricError("PHV needs a non-empty true front");
  const double denom = hypervolume(truth, spec);
  if (!(denom > 0.0)) throw MetricError("true front has zero hypervolume");
  if (achieved.empty()) return 0.0;
  return hypervolume(achieved, spec) / denom;
}

double data_usage(std::size_t points_used, std::size_t pool_size) {
  if (pool_size == 0) throw MetricError("data usage of an empty pool");
  if (points_used > pool_size) throw MetricError("more points used than the pool holds");
  return static_cast<double>(points_used) / static_cast<double>(pool_size);
}

ObjectiveNormalizer::ObjectiveNormalizer(const std::vector<ObjectiveVector>& pool_objectives,
                                         const ObjectiveSpec& spec)
    : spec_(spec) {
  if (pool_objectives.empty()) throw EmptySetError("cannot normalize objectives of an empty pool");
  const std::size_t m = spec.m();
  const auto ref = spec.canonical_reference();
  lo_ = ref;
  std::vector<double> hi = ref;
  for (const auto& y : pool_objectives) {
    const auto c = spec.canonical(y);
    for (std::size_t k = 0; k < m; ++k) {
      lo_[k] = std::min(lo_[k], c[k]);
      hi[k] = std::max(hi[k], c[k]);
    }
  }
  span_.resize(m);
  ref_.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    span_[k] = hi[k] > lo_[k] ? hi[k] - lo_[k] : 1.0;
    ref_[k] = (ref[k] - lo_[k]) / span_[k];
  }
}

std::vector<double> ObjectiveNormalizer::apply(const ObjectiveVector& y) const {
  auto c = spec_.canonical(y);
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = (c[k] - lo_[k]) / span_[k];
  return c;
}

double ObjectiveNormalizer::hypervolume(const std::vector<ObjectiveVector>& front) const {
  CanonicalPoints pts;
  pts.reserve(front.size());
  for (const auto& y : front) pts.push_back(apply(y));
  return hypervolume_canonical(pts, ref_);
}

namespace {

// JSON has no infinity; distances to an empty set are written as null.
nlohmann::json finite_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); }

double number_or_inf(const nlohmann::json& v) {
  return v.is_null() ? std::numeric_limits<double>::infinity() : v.get<double>();
}

}  // namespace

void to_json(nlohmann::json& j, const MetricsReport& r) {
  j = nlohmann::json{{"gd", finite_or_null(r.gd)},
                     {"igd", finite_or_null(r.igd)},
                     {"hv", r.hv},
                     {"phv", r.phv},
                     {"data_usage", r.data_usage},
                     {"points_used", r.points_used}};
}

void from_json(const nlohmann::json& j, MetricsReport& r) {
  r.gd = number_or_inf(j.at("gd"));
  r.igd = number_or_inf(j.at("igd"));
  j.at("hv").get_to(r.hv);
  j.at("phv").get_to(r.phv);
  j.at("data_usage").get_to(r.data_usage);
  j.at("points_used").get_to(r.points_used);
}

MetricsReport evaluate_front(const std::vector<ObjectiveVector>& achieved_front,
                             const std::vector<ObjectiveVector>& true_front,
                             const ObjectiveNormalizer& normalizer, const ObjectiveSpec& spec,
                             std::size_t points_used, std::size_t pool_size,
                             DistanceConvention convention) {
  MetricsReport r;
  r.points_used = points_used;
  r.data_usage = data_usage(points_used, pool_size);
  r.phv = phv(achieved_front, true_front, spec);
  r.hv = normalizer.hypervolume(achieved_front);
  if (!achieved_front.empty()) {
    r.gd = gd(achieved_front, true_front, convention);
    r.igd = igd(achieved_front, true_front, convention);
  } else {
    r.gd = std::numeric_limits<double>::infinity();
    r.igd = std::numeric_limits<double>::infinity();
  }
  return r;
}

}  // namespace seqpareto
