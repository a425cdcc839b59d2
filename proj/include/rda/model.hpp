#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "rda/types.hpp"

namespace rda {

// Ground-truth statistics of one class: x = mean + covariance^{1/2} z.
struct GaussianClassSpec {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;  // symmetric PSD
  double prior = 0.5;
};

// A two-class Gaussian problem in dimension p.
struct ProblemInstance {
  std::array<GaussianClassSpec, 2> cls;
  int dim = 0;

  const GaussianClassSpec& c0() const { return cls[0]; }
  const GaussianClassSpec& c1() const { return cls[1]; }
  Priors priors() const { return {cls[0].prior, cls[1].prior}; }
  // mu = mu_0 - mu_1
  Eigen::VectorXd mean_diff() const { return cls[0].mean - cls[1].mean; }
};

ProblemInstance make_instance(GaussianClassSpec class0, GaussianClassSpec class1);

// Labeled sample matrix; columns are observations.
struct TrainingSet {
  Eigen::MatrixXd samples;  // p x n
  std::vector<int> labels;  // 0/1 per column
  std::array<int, 2> counts{0, 0};

  int dim() const { return static_cast<int>(samples.rows()); }
  int n_total() const { return static_cast<int>(samples.cols()); }
};

TrainingSet make_training_set(Eigen::MatrixXd samples, std::vector<int> labels);

// columns of one class, in order of appearance
Eigen::MatrixXd class_block(const TrainingSet& train, int cls);

// Symmetric PSD square root. Cholesky factor when strictly PD, otherwise a
// symmetric eigendecomposition with negative eigenvalues clamped at zero.
// Rejects matrices whose smallest eigenvalue is below -1e-10 * ||cov||.
Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& cov);

// Draw `count` samples of one class; deterministic given the seed.
Eigen::MatrixXd sample_class(const GaussianClassSpec& spec, int count,
                             std::uint64_t seed);

// Class-0 columns first, then class-1; per-class seeds split from `seed`.
TrainingSet sample_training_set(const ProblemInstance& instance, int n0, int n1,
                                std::uint64_t seed);

// Everything computable from a training set at a given gamma.
struct FittedDA {
  std::array<Eigen::VectorXd, 2> mu_hat;
  std::array<Eigen::MatrixXd, 2> sigma_hat;
  Eigen::MatrixXd sigma_pooled;
  double gamma = 0.0;
  Eigen::MatrixXd H;                      // (I + gamma Sigma_pooled)^{-1}
  std::array<Eigen::MatrixXd, 2> H_class; // (I + gamma Sigma_i)^{-1}
  std::array<double, 2> log_det_H;        // log|H_i| = -log|I + gamma Sigma_i|
  std::array<int, 2> n{0, 0};
  Priors priors{0.5, 0.5};

  int dim() const { return static_cast<int>(H.rows()); }
  int n_total() const { return n[0] + n[1]; }
};

// Sample moments plus cached spectral factorizations, so a sweep over gamma
// factors each covariance once and reuses it.
struct SampleStats {
  std::array<Eigen::VectorXd, 2> mu_hat;
  std::array<Eigen::MatrixXd, 2> sigma_hat;
  Eigen::MatrixXd sigma_pooled;
  std::array<int, 2> n{0, 0};

  std::array<Eigen::VectorXd, 2> class_evals;  // clamped to >= 0
  std::array<Eigen::MatrixXd, 2> class_evecs;
  Eigen::VectorXd pooled_evals;
  Eigen::MatrixXd pooled_evecs;

  int dim() const { return static_cast<int>(sigma_pooled.rows()); }

  // Resolvents from the cached factorizations; log-determinants via Cholesky
  // of (I + gamma Sigma_i). Priors default to the training fractions n_i/n.
  FittedDA fit(double gamma, std::optional<Priors> priors = std::nullopt) const;
};

SampleStats compute_sample_stats(const TrainingSet& train);

// Mocked-statistics entry point (tests, plugin paths): skips the sampling
// step and treats the given moments as the sample estimates.
SampleStats stats_from_moments(Eigen::VectorXd mu0, Eigen::VectorXd mu1,
                               Eigen::MatrixXd sigma0, Eigen::MatrixXd sigma1,
                               int n0, int n1);

FittedDA fit_statistics(const TrainingSet& train, double gamma,
                        std::optional<Priors> priors = std::nullopt);

}  // namespace rda
