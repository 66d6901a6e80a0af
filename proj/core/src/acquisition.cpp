#include "seqpareto/acquisition.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "seqpareto/error.hpp"
#include "seqpareto/random.hpp"

namespace seqpareto {
namespace {

constexpr std::uint64_t kBaseStream = 0x62617365;  // base draws
constexpr std::uint64_t kRawStream = 0x726177;     // screening points

CanonicalPoints canonical_front(const std::vector<ObjectiveVector>& front, const ObjectiveSpec& spec) {
  CanonicalPoints out;
  out.reserve(front.size());
  for (const auto& y : front) out.push_back(spec.canonical(y));
  return out;
}

}  // namespace

void AcquisitionConfig::validate() const {
  if (q < 1) throw ConfigError("batch size q must be >= 1");
  if (q > ImprovementCalculator::kMaxBatch) {
    throw ConfigError("batch size q must be <= " + std::to_string(ImprovementCalculator::kMaxBatch));
  }
  if (mc_samples < 16) throw ConfigError("mc_samples must be >= 16");
  if (num_restarts < 1) throw ConfigError("num_restarts must be >= 1");
  if (raw_samples < num_restarts) throw ConfigError("raw_samples must be >= num_restarts");
  if (!(lower_bound < upper_bound)) throw ConfigError("acquisition bounds must satisfy lower < upper");
  if (!(initial_step > 0.0) || !(final_step > 0.0) || final_step > initial_step) {
    throw ConfigError("pattern-search steps must satisfy 0 < final_step <= initial_step");
  }
}

QehviEvaluator::QehviEvaluator(const std::vector<GpModel>& models,
                               const std::vector<ObjectiveVector>& front, const ObjectiveSpec& spec,
                               const AcquisitionConfig& cfg, std::uint64_t seed)
    : models_(&models),
      spec_(spec),
      calc_(canonical_front(front, spec), spec.canonical_reference()),
      mc_samples_(cfg.mc_samples) {
  if (models.size() != spec.m()) throw DimensionError("need one model per objective");
  for (const auto& model : models) {
    if (!model.fitted()) throw StateError("acquisition needs fitted models");
  }
  base_ = BaseSamples::generate(cfg.mc_samples, cfg.q * spec.m(), cfg.quasi_random,
                                derive_seed(seed, kBaseStream));
  // Mirrored draws for minimized objectives, so a max-min problem samples
  // exactly like its negated max-max twin in the canonical frame.
  for (std::size_t t = 0; t < base_.draws; ++t) {
    for (std::size_t c = 0; c < base_.width; ++c) {
      if (spec.directions[c % spec.m()] == Direction::Minimize) base_.z[t * base_.width + c] *= -1.0;
    }
  }
}

double QehviEvaluator::operator()(const std::vector<DesignPoint>& batch) const {
  const std::size_t q = batch.size();
  const std::size_t m = spec_.m();
  if (q == 0) return 0.0;
  if (q * m > base_.width) throw ConfigError("batch is larger than the configured q");

  std::vector<double> signs(m);
  for (std::size_t k = 0; k < m; ++k) signs[k] = sign_of(spec_.directions[k]);

  std::vector<double> rows(q * m);
  double total = 0.0;
  if (q == 1) {
    std::vector<Prediction> pred(m);
    for (std::size_t k = 0; k < m; ++k) pred[k] = (*models_)[k].predict(batch.front());
    std::vector<double> sd(m);
    for (std::size_t k = 0; k < m; ++k) sd[k] = std::sqrt(pred[k].variance);
    for (std::size_t t = 0; t < mc_samples_; ++t) {
      for (std::size_t k = 0; k < m; ++k) rows[k] = signs[k] * (pred[k].mean + sd[k] * base_(t, k));
      total += calc_.joint_flat(rows, 1);
    }
  } else {
    const auto samples = joint_posterior_sample(*models_, batch, base_);
    for (std::size_t t = 0; t < mc_samples_; ++t) {
      for (std::size_t i = 0; i < q; ++i) {
        for (std::size_t k = 0; k < m; ++k) rows[i * m + k] = signs[k] * samples.at(t, i, k);
      }
      total += calc_.joint_flat(rows, q);
    }
  }
  return std::max(0.0, total / static_cast<double>(mc_samples_));
}

double qehvi(const std::vector<GpModel>& models, const std::vector<ObjectiveVector>& front,
             const ObjectiveSpec& spec, const std::vector<DesignPoint>& xs,
             const AcquisitionConfig& cfg, std::uint64_t seed) {
  AcquisitionConfig sized = cfg;
  sized.q = std::max(cfg.q, xs.size());
  const QehviEvaluator eval(models, front, spec, sized, seed);
  return eval(xs);
}

namespace {

struct SearchResult {
  DesignPoint x;
  double value = 0.0;
};

template <class F>
SearchResult pattern_search(F&& f, DesignPoint x, double fx, const AcquisitionConfig& cfg) {
  double step = cfg.initial_step;
  std::size_t evals = 0;
  while (step >= cfg.final_step && evals < cfg.max_evals_per_restart) {
    bool improved = false;
    for (std::size_t k = 0; k < x.size() && !improved; ++k) {
      for (double dir : {1.0, -1.0}) {
        DesignPoint y = x;
        y[k] = std::clamp(x[k] + dir * step, cfg.lower_bound, cfg.upper_bound);
        if (y[k] == x[k]) continue;
        const double fy = f(y);
        ++evals;
        if (fy > fx) {
          x = std::move(y);
          fx = fy;
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return {std::move(x), fx};
}

}  // namespace

AcquisitionResult maximize_qehvi(const std::vector<GpModel>& models,
                                 const std::vector<ObjectiveVector>& front, const ObjectiveSpec& spec,
                                 const AcquisitionConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  const QehviEvaluator eval(models, front, spec, cfg, seed);
  const std::size_t d = eval.dims();

  ScrambledSobol sobol(d, derive_seed(seed, kRawStream));
  std::vector<DesignPoint> raw(cfg.raw_samples, DesignPoint(d));
  for (auto& p : raw) {
    sobol.next(p);
    for (double& v : p) v = cfg.lower_bound + v * (cfg.upper_bound - cfg.lower_bound);
  }

  AcquisitionResult result;
  std::vector<DesignPoint> accepted;
  for (std::size_t stage = 0; stage < cfg.q; ++stage) {
    auto score = [&](const DesignPoint& x) {
      std::vector<DesignPoint> batch = accepted;
      batch.push_back(x);
      return eval(batch);
    };

    std::vector<double> values(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) values[i] = score(raw[i]);
    if (stage == 0) {
      result.raw_points = raw;
      result.raw_values = values;
    }

    std::vector<std::size_t> order(raw.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });

    SearchResult best{raw[order.front()], values[order.front()]};
    const std::size_t restarts = std::min(cfg.num_restarts, order.size());
    for (std::size_t r = 0; r < restarts; ++r) {
      const std::size_t idx = order[r];
      SearchResult local = pattern_search(score, raw[idx], values[idx], cfg);
      if (local.value > best.value) best = std::move(local);
    }
    accepted.push_back(std::move(best.x));
    result.value = best.value;
  }
  result.batch = std::move(accepted);
  return result;
}

}  // namespace seqpareto
