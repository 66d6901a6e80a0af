#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "seqpareto/types.hpp"

namespace seqpareto {

/// Squared-exponential kernel hyperparameters. Length scale is in
/// normalized-input units; variances are in standardized-output units.
struct KernelParams {
  double length_scale = 0.5;
  double signal_variance = 1.0;
  double noise_variance = 1e-4;

  bool operator==(const KernelParams&) const = default;
};

/// Box used by the marginal-likelihood search.
struct KernelBounds {
  static constexpr double kLengthScaleMin = 1e-3;
  static constexpr double kLengthScaleMax = 1e3;
  static constexpr double kSignalVarianceMin = 1e-6;
  static constexpr double kSignalVarianceMax = 1e3;
  static constexpr double kNoiseVarianceMin = 1e-8;
  static constexpr double kNoiseVarianceMax = 1e1;
};

/// sigma_f^2 * exp(-|x - x'|^2 / (2 theta^2)).
double se_kernel(std::span<const double> x, std::span<const double> x2, const KernelParams& params);

struct FitOptions {
  int restarts = 8;
  int max_evals_per_restart = 60;
  std::uint64_t seed = 0;
  /// Used as the first restart when present (previous fit's optimum).
  std::optional<KernelParams> warm_start;
};

struct Prediction {
  double mean = 0.0;
  double variance = 0.0;
};

/// Single-output exact GP regressor with an isotropic SE kernel.
///
/// Outputs are standardized to zero mean and unit variance before fitting;
/// predictions are reported in the original units. The Cholesky factor of
/// K + sigma_noise^2 I and alpha = (K + sigma_noise^2 I)^{-1} y are cached,
/// so a fitted model is immutable and safe to share across threads.
class GpModel {
 public:
  GpModel() = default;

  /// Chooses hyperparameters by maximizing the log marginal likelihood.
  static GpModel fit(const std::vector<DesignPoint>& x, std::span<const double> y,
                     const FitOptions& options = {});

  /// Conditions on the data with fixed hyperparameters (no search).
  static GpModel condition(const std::vector<DesignPoint>& x, std::span<const double> y,
                           const KernelParams& params);

  /// Log marginal likelihood of standardized outputs `y_standardized`
  /// under `params`; -infinity when the kernel matrix cannot be factorized.
  static double log_marginal_likelihood(const std::vector<DesignPoint>& x,
                                        std::span<const double> y_standardized,
                                        const KernelParams& params);

  bool fitted() const noexcept { return fitted_; }

  Prediction predict(std::span<const double> x) const;

  /// Posterior mean vector and covariance matrix at `xs`, original units.
  void posterior(const std::vector<DesignPoint>& xs, Eigen::VectorXd& mean,
                 Eigen::MatrixXd& covariance) const;

  const KernelParams& params() const noexcept { return params_; }
  double y_mean() const noexcept { return y_mean_; }
  double y_std() const noexcept { return y_std_; }
  std::size_t size() const noexcept { return train_x_.size(); }
  std::size_t dims() const noexcept { return train_x_.empty() ? 0 : train_x_.front().size(); }
  const std::vector<DesignPoint>& train_x() const noexcept { return train_x_; }
  const Eigen::VectorXd& train_y_standardized() const noexcept { return y_standardized_; }
  const Eigen::MatrixXd& cholesky_factor() const noexcept { return chol_; }
  const Eigen::VectorXd& alpha() const noexcept { return alpha_; }
  /// Diagonal jitter that was needed on top of the noise variance.
  double jitter() const noexcept { return jitter_; }
  double log_marginal_likelihood() const noexcept { return lml_; }
  /// LML at each restart's starting point during the last fit() call.
  const std::vector<double>& initial_log_likelihoods() const noexcept { return initial_lml_; }

 private:
  void require_fitted() const;
  Eigen::VectorXd cross_kernel(std::span<const double> x) const;

  bool fitted_ = false;
  std::vector<DesignPoint> train_x_;
  Eigen::VectorXd y_standardized_;
  double y_mean_ = 0.0;
  double y_std_ = 1.0;
  KernelParams params_;
  Eigen::MatrixXd chol_;
  Eigen::VectorXd alpha_;
  double jitter_ = 0.0;
  double lml_ = 0.0;
  std::vector<double> initial_lml_;
};

/// Draws x q x m posterior samples, stored draw-major.
struct PosteriorSamples {
  std::size_t draws = 0;
  std::size_t q = 0;
  std::size_t m = 0;
  std::vector<double> values;

  double at(std::size_t draw, std::size_t point, std::size_t objective) const {
    return values[(draw * q + point) * m + objective];
  }
  double& at(std::size_t draw, std::size_t point, std::size_t objective) {
    return values[(draw * q + point) * m + objective];
  }
};

/// Standard-normal base draws (draws x q*m) reused across candidate batches
/// so that acquisition values are smooth in the candidate location.
struct BaseSamples {
  std::size_t draws = 0;
  std::size_t width = 0;
  std::vector<double> z;

  static BaseSamples generate(std::size_t draws, std::size_t width, bool quasi_random,
                              std::uint64_t seed);
  double operator()(std::size_t draw, std::size_t column) const { return z[draw * width + column]; }
};

/// Joint posterior draws at the q points `xs` for each independent
/// per-objective model. Within an objective the q values are correlated
/// through the q x q posterior covariance.
PosteriorSamples joint_posterior_sample(const std::vector<GpModel>& models,
                                        const std::vector<DesignPoint>& xs, const BaseSamples& base);

PosteriorSamples joint_posterior_sample(const std::vector<GpModel>& models,
                                        const std::vector<DesignPoint>& xs, std::size_t draws,
                                        bool quasi_random, std::uint64_t seed);

}  // namespace seqpareto
