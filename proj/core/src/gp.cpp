#include "seqpareto/gp.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "seqpareto/error.hpp"
#include "seqpareto/random.hpp"

namespace seqpareto {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kJitterStart = 1e-10;
constexpr double kJitterMax = 1e-4;

Eigen::MatrixXd squared_distances(const std::vector<DesignPoint>& x) {
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd d2(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    d2(i, i) = 0.0;
    for (Eigen::Index j = 0; j < i; ++j) {
      double s = 0.0;
      const auto& a = x[static_cast<std::size_t>(i)];
      const auto& b = x[static_cast<std::size_t>(j)];
      for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
      d2(i, j) = s;
      d2(j, i) = s;
    }
  }
  return d2;
}

struct Factorization {
  Eigen::MatrixXd chol;
  double jitter = 0.0;
  bool ok = false;
};

// Cholesky of K + sigma_noise^2 I, escalating diagonal jitter from 1e-10
// by x10 up to 1e-4 when the plain factorization fails.
Factorization factorize(const Eigen::MatrixXd& d2, const KernelParams& p) {
  const Eigen::Index n = d2.rows();
  Eigen::MatrixXd k = (d2.array() * (-0.5 / (p.length_scale * p.length_scale))).exp() * p.signal_variance;
  k.diagonal().array() += p.noise_variance;

  Factorization out;
  double jitter = 0.0;
  while (true) {
    Eigen::MatrixXd kj = k;
    if (jitter > 0.0) kj.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(kj);
    if (llt.info() == Eigen::Success) {
      Eigen::MatrixXd l = llt.matrixL();
      bool finite = true;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (!(l(i, i) > 0.0) || !std::isfinite(l(i, i))) finite = false;
      }
      if (finite) {
        out.chol = std::move(l);
        out.jitter = jitter;
        out.ok = true;
        return out;
      }
    }
    if (jitter == 0.0) {
      jitter = kJitterStart;
    } else if (jitter < kJitterMax * 0.999) {
      jitter *= 10.0;
    } else {
      return out;
    }
  }
}

double lml_from(const Factorization& f, const Eigen::VectorXd& y, Eigen::VectorXd* alpha_out) {
  const auto n = static_cast<double>(y.size());
  Eigen::VectorXd alpha = f.chol.triangularView<Eigen::Lower>().solve(y);
  const double quad = alpha.squaredNorm();
  f.chol.triangularView<Eigen::Lower>().transpose().solveInPlace(alpha);
  const double logdet_half = f.chol.diagonal().array().log().sum();
  if (alpha_out) *alpha_out = std::move(alpha);
  return -0.5 * quad - logdet_half - 0.5 * n * std::log(2.0 * std::numbers::pi);
}

using Vec3 = std::array<double, 3>;

const Vec3 kLogLower = {std::log(KernelBounds::kLengthScaleMin), std::log(KernelBounds::kSignalVarianceMin),
                        std::log(KernelBounds::kNoiseVarianceMin)};
const Vec3 kLogUpper = {std::log(KernelBounds::kLengthScaleMax), std::log(KernelBounds::kSignalVarianceMax),
                        std::log(KernelBounds::kNoiseVarianceMax)};

Vec3 clamp_box(Vec3 v) {
  for (int i = 0; i < 3; ++i) v[i] = std::clamp(v[i], kLogLower[i], kLogUpper[i]);
  return v;
}

KernelParams from_log(const Vec3& v) {
  return {std::exp(v[0]), std::exp(v[1]), std::exp(v[2])};
}

Vec3 to_log(const KernelParams& p) {
  return clamp_box({std::log(p.length_scale), std::log(p.signal_variance), std::log(p.noise_variance)});
}

// Box-constrained Nelder-Mead that maximizes `f`; candidate vertices are
// projected back onto the box.
template <class F>
std::pair<Vec3, double> nelder_mead_max(F&& f, const Vec3& start, double f_start, int max_evals) {
  std::array<Vec3, 4> simplex;
  std::array<double, 4> val;
  simplex[0] = start;
  val[0] = f_start;
  int evals = 0;
  for (int i = 0; i < 3; ++i) {
    Vec3 v = start;
    v[i] += (v[i] + 0.7 <= kLogUpper[i]) ? 0.7 : -0.7;
    simplex[i + 1] = clamp_box(v);
    val[i + 1] = f(simplex[i + 1]);
    ++evals;
  }
  auto order = [&] {
    std::array<int, 4> idx = {0, 1, 2, 3};
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return val[a] > val[b]; });
    std::array<Vec3, 4> s2;
    std::array<double, 4> v2;
    for (int i = 0; i < 4; ++i) {
      s2[i] = simplex[idx[i]];
      v2[i] = val[idx[i]];
    }
    simplex = s2;
    val = v2;
  };
  auto blend = [](const Vec3& a, const Vec3& b, double t) {
    Vec3 r;
    for (int i = 0; i < 3; ++i) r[i] = a[i] + t * (b[i] - a[i]);
    return clamp_box(r);
  };

  while (evals < max_evals) {
    order();
    if (std::isfinite(val[0]) && std::isfinite(val[3]) && std::abs(val[0] - val[3]) < 1e-7) break;
    Vec3 centroid{0.0, 0.0, 0.0};
    for (int i = 0; i < 3; ++i) {
      for (int k = 0; k < 3; ++k) centroid[k] += simplex[i][k] / 3.0;
    }
    const Vec3 reflected = blend(centroid, simplex[3], -1.0);
    const double fr = f(reflected);
    ++evals;
    if (fr > val[0]) {
      const Vec3 expanded = blend(centroid, simplex[3], -2.0);
      const double fe = f(expanded);
      ++evals;
      if (fe > fr) {
        simplex[3] = expanded;
        val[3] = fe;
      } else {
        simplex[3] = reflected;
        val[3] = fr;
      }
      continue;
    }
    if (fr > val[2]) {
      simplex[3] = reflected;
      val[3] = fr;
      continue;
    }
    const Vec3 contracted = blend(centroid, simplex[3], 0.5);
    const double fc = f(contracted);
    ++evals;
    if (fc > val[3]) {
      simplex[3] = contracted;
      val[3] = fc;
      continue;
    }
    for (int i = 1; i < 4; ++i) {
      simplex[i] = blend(simplex[0], simplex[i], 0.5);
      val[i] = f(simplex[i]);
      ++evals;
    }
  }
  order();
  return {simplex[0], val[0]};
}

std::vector<Vec3> restart_points(const FitOptions& options) {
  std::vector<Vec3> starts;
  const int total = std::max(1, options.restarts);
  if (options.warm_start) starts.push_back(to_log(*options.warm_start));
  starts.push_back(to_log(KernelParams{}));
  // Remaining starts are seeded draws from a sensible sub-box.
  Rng rng(derive_seed(options.seed, 0x6770u));
  const Vec3 lo = {std::log(0.05), std::log(0.1), std::log(1e-6)};
  const Vec3 hi = {std::log(2.0), std::log(10.0), std::log(1e-1)};
  while (static_cast<int>(starts.size()) < total) {
    Vec3 v;
    for (int i = 0; i < 3; ++i) v[i] = lo[i] + uniform01(rng) * (hi[i] - lo[i]);
    starts.push_back(v);
  }
  starts.resize(static_cast<std::size_t>(total));
  return starts;
}

void check_training_data(const std::vector<DesignPoint>& x, std::span<const double> y) {
  if (x.size() != y.size()) throw DimensionError("training inputs and outputs differ in length");
  if (x.size() < 2) throw DataError("GP fit needs at least two training points");
  const std::size_t d = x.front().size();
  for (const auto& p : x) {
    if (p.size() != d) throw DimensionError("training inputs have mixed dimensionality");
  }
  for (double v : y) {
    if (!std::isfinite(v)) throw DataError("non-finite training output");
  }
}

struct Standardized {
  Eigen::VectorXd values;
  double mean = 0.0;
  double scale = 1.0;
};

// Zero mean, unit population variance. A constant output keeps scale 1.
Standardized standardize(std::span<const double> y) {
  const auto n = static_cast<Eigen::Index>(y.size());
  const Eigen::VectorXd raw = Eigen::Map<const Eigen::VectorXd>(y.data(), n);
  Standardized out;
  out.mean = raw.mean();
  const double sd = std::sqrt((raw.array() - out.mean).square().mean());
  out.scale = (sd > 1e-12 * std::max(1.0, std::abs(out.mean))) ? sd : 1.0;
  out.values = (raw.array() - out.mean) / out.scale;
  return out;
}

// Lower-triangular L with L L^T = cov for positive semi-definite `cov`.
// Pivots that vanish (coinciding or fully determined points) zero their
// column instead of failing. No pivoting, so the factor of a leading block
// is the leading block of the factor.
Eigen::MatrixXd semidefinite_cholesky(const Eigen::MatrixXd& cov) {
  const Eigen::Index q = cov.rows();
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(q, q);
  const double scale = std::max(1e-300, cov.diagonal().cwiseAbs().maxCoeff());
  const double tol = 1e-10 * scale;
  for (Eigen::Index j = 0; j < q; ++j) {
    double d = cov(j, j);
    for (Eigen::Index k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (d < -1e-8 * scale) throw IllConditionedError("posterior covariance is not positive semi-definite");
    if (d <= tol) continue;
    const double root = std::sqrt(d);
    l(j, j) = root;
    for (Eigen::Index i = j + 1; i < q; ++i) {
      double s = cov(i, j);
      for (Eigen::Index k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / root;
    }
  }
  return l;
}

}  // namespace

double se_kernel(std::span<const double> x, std::span<const double> x2, const KernelParams& params) {
  if (x.size() != x2.size()) throw DimensionError("kernel inputs differ in dimensionality");
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) s += (x[k] - x2[k]) * (x[k] - x2[k]);
  return params.signal_variance * std::exp(-s / (2.0 * params.length_scale * params.length_scale));
}

double GpModel::log_marginal_likelihood(const std::vector<DesignPoint>& x,
                                        std::span<const double> y_standardized,
                                        const KernelParams& params) {
  const Eigen::MatrixXd d2 = squared_distances(x);
  const auto f = factorize(d2, params);
  if (!f.ok) return kNegInf;
  const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(y_standardized.data(),
                                                              static_cast<Eigen::Index>(y_standardized.size()));
  return lml_from(f, y, nullptr);
}

GpModel GpModel::condition(const std::vector<DesignPoint>& x, std::span<const double> y,
                           const KernelParams& params) {
  check_training_data(x, y);
  GpModel model;
  model.train_x_ = x;
  auto st = standardize(y);
  model.y_mean_ = st.mean;
  model.y_std_ = st.scale;
  model.y_standardized_ = std::move(st.values);
  model.params_ = params;

  const auto f = factorize(squared_distances(x), params);
  if (!f.ok) {
    throw IllConditionedError("Cholesky factorization failed after jitter escalation to 1e-4");
  }
  model.chol_ = f.chol;
  model.jitter_ = f.jitter;
  model.lml_ = lml_from(f, model.y_standardized_, &model.alpha_);
  model.fitted_ = true;
  return model;
}

GpModel GpModel::fit(const std::vector<DesignPoint>& x, std::span<const double> y,
                     const FitOptions& options) {
  check_training_data(x, y);
  const Eigen::VectorXd ys = standardize(y).values;

  const Eigen::MatrixXd d2 = squared_distances(x);
  auto objective = [&](const Vec3& v) {
    const auto f = factorize(d2, from_log(v));
    return f.ok ? lml_from(f, ys, nullptr) : kNegInf;
  };

  std::vector<double> initial;
  Vec3 best_v{};
  double best = kNegInf;
  bool have_best = false;
  for (const Vec3& start : restart_points(options)) {
    const double f0 = objective(start);
    initial.push_back(f0);
    const auto [v, fv] = nelder_mead_max(objective, start, f0, options.max_evals_per_restart);
    if (!have_best || fv > best) {
      best = fv;
      best_v = v;
      have_best = true;
    }
  }
  if (!std::isfinite(best)) {
    throw IllConditionedError("no hyperparameter setting produced a factorizable kernel matrix");
  }
  GpModel model = condition(x, y, from_log(best_v));
  model.initial_lml_ = std::move(initial);
  return model;
}

void GpModel::require_fitted() const {
  if (!fitted_) throw StateError("GP model used before fitting");
}

Eigen::VectorXd GpModel::cross_kernel(std::span<const double> x) const {
  if (x.size() != dims()) throw DimensionError("prediction input has wrong dimensionality");
  Eigen::VectorXd k(static_cast<Eigen::Index>(train_x_.size()));
  for (std::size_t i = 0; i < train_x_.size(); ++i) {
    k(static_cast<Eigen::Index>(i)) = se_kernel(x, train_x_[i], params_);
  }
  return k;
}

Prediction GpModel::predict(std::span<const double> x) const {
  require_fitted();
  const Eigen::VectorXd k = cross_kernel(x);
  const double mean_std = k.dot(alpha_);
  const Eigen::VectorXd v = chol_.triangularView<Eigen::Lower>().solve(k);
  const double var_std = std::max(0.0, params_.signal_variance - v.squaredNorm());
  return {y_mean_ + y_std_ * mean_std, var_std * y_std_ * y_std_};
}

void GpModel::posterior(const std::vector<DesignPoint>& xs, Eigen::VectorXd& mean,
                        Eigen::MatrixXd& covariance) const {
  require_fitted();
  const auto q = static_cast<Eigen::Index>(xs.size());
  const auto n = static_cast<Eigen::Index>(train_x_.size());
  Eigen::MatrixXd kx(n, q);
  for (Eigen::Index j = 0; j < q; ++j) kx.col(j) = cross_kernel(xs[static_cast<std::size_t>(j)]);
  mean = (kx.transpose() * alpha_).array() * y_std_ + y_mean_;
  const Eigen::MatrixXd v = chol_.triangularView<Eigen::Lower>().solve(kx);
  Eigen::MatrixXd kqq(q, q);
  for (Eigen::Index i = 0; i < q; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double kij = se_kernel(xs[static_cast<std::size_t>(i)], xs[static_cast<std::size_t>(j)], params_);
      kqq(i, j) = kij;
      kqq(j, i) = kij;
    }
  }
  covariance = (kqq - v.transpose() * v) * (y_std_ * y_std_);
  for (Eigen::Index i = 0; i < q; ++i) covariance(i, i) = std::max(0.0, covariance(i, i));
}

BaseSamples BaseSamples::generate(std::size_t draws, std::size_t width, bool quasi_random,
                                  std::uint64_t seed) {
  BaseSamples base;
  base.draws = draws;
  base.width = width;
  base.z.resize(draws * width);
  if (quasi_random) {
    ScrambledSobol sobol(width, seed);
    std::vector<double> u(width);
    for (std::size_t t = 0; t < draws; ++t) {
      sobol.next_open(u);
      for (std::size_t c = 0; c < width; ++c) base.z[t * width + c] = normal_quantile(u[c]);
    }
  } else {
    Rng rng(seed);
    std::normal_distribution<double> normal;
    for (double& v : base.z) v = normal(rng);
  }
  return base;
}

PosteriorSamples joint_posterior_sample(const std::vector<GpModel>& models,
                                        const std::vector<DesignPoint>& xs, const BaseSamples& base) {
  const std::size_t q = xs.size();
  const std::size_t m = models.size();
  if (q == 0) throw ConfigError("joint posterior sampling needs at least one point");
  if (base.width < q * m) throw DimensionError("base samples are narrower than q * m");

  PosteriorSamples out;
  out.draws = base.draws;
  out.q = q;
  out.m = m;
  out.values.assign(base.draws * q * m, 0.0);

  for (std::size_t k = 0; k < m; ++k) {
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;
    models[k].posterior(xs, mean, cov);

    const Eigen::MatrixXd factor = semidefinite_cholesky(cov);

    for (std::size_t t = 0; t < base.draws; ++t) {
      for (std::size_t i = 0; i < q; ++i) {
        double v = mean(static_cast<Eigen::Index>(i));
        for (std::size_t j = 0; j <= i; ++j) {
          v += factor(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * base(t, j * m + k);
        }
        out.at(t, i, k) = v;
      }
    }
  }
  return out;
}

PosteriorSamples joint_posterior_sample(const std::vector<GpModel>& models,
                                        const std::vector<DesignPoint>& xs, std::size_t draws,
                                        bool quasi_random, std::uint64_t seed) {
  const auto base = BaseSamples::generate(draws, xs.size() * models.size(), quasi_random, seed);
  return joint_posterior_sample(models, xs, base);
}

}  // namespace seqpareto
