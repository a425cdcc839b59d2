#pragma once

#include <Eigen/Dense>
#include <array>

#include "rda/model.hpp"
#include "rda/types.hpp"

namespace rda {

// Eigendecomposition of a PSD covariance, factored once and shared across a
// gamma sweep. Eigenvalues are validated (>= -1e-10 * ||sigma||) and clamped
// to zero.
struct CovSpectrum {
  Eigen::VectorXd evals;
  Eigen::MatrixXd evecs;
};

CovSpectrum cov_spectrum(const Eigen::MatrixXd& sigma);

// Converged state of the coupled two-class resolvent system at z = -n/(p
// gamma): (p/n) g_i = -(1/z) / (1 + gtilde_i), gtilde_i = (1/p) tr Sigma_i
// Qbar, Qbar = -(1/z)(I + c0 g0 Sigma_0 + c1 g1 Sigma_1)^{-1}.
struct LdaFixedPoint {
  double z = 0.0;
  std::array<double, 2> g{0.0, 0.0};
  std::array<double, 2> g_tilde{0.0, 0.0};
  Eigen::MatrixXd Q_bar;
  int iterations = 0;
  double residual = 0.0;
};

LdaFixedPoint solve_lda_fixed_point(const ProblemInstance& truth, int n0,
                                    int n1, double gamma);

// Deterministic equivalents of the linear rule's conditional error.
struct LdaEquivalents {
  std::array<double, 2> G_bar{0.0, 0.0};
  std::array<double, 2> D_bar{0.0, 0.0};
  std::array<double, 2> R{0.0, 0.0};
  std::array<Eigen::MatrixXd, 2> Q_tilde;
  std::array<double, 2> eps{0.0, 0.0};
  double eps_total = 0.0;
};

LdaEquivalents lda_deterministic_error(const ProblemInstance& truth, int n0,
                                       int n1, double gamma, const Priors& priors);

// Closed form for a common covariance across classes.
struct CommonCovLda {
  double delta = 0.0;
  std::array<double, 2> G_bar{0.0, 0.0};
  double D_bar = 0.0;
  std::array<double, 2> eps{0.0, 0.0};
  double eps_total = 0.0;
};

CommonCovLda lda_common_cov_error(const Eigen::MatrixXd& sigma,
                                  const Eigen::VectorXd& mu, int n0, int n1,
                                  double gamma, const Priors& priors);
CommonCovLda lda_common_cov_error(const CovSpectrum& spectrum,
                                  const Eigen::VectorXd& mu, int n0, int n1,
                                  double gamma, const Priors& priors);

// Per-class scalar fixed point delta = (1/n_i) tr Sigma (I + gamma Sigma /
// (1 + gamma delta))^{-1} and the quantities built from it.
struct QdaDelta {
  double delta = 0.0;
  Eigen::MatrixXd T;       // (I + gamma Sigma / (1 + gamma delta))^{-1}
  double phi = 0.0;        // (1/n_i) tr Sigma^2 T^2
  double phi_tilde = 0.0;  // 1 / (1 + gamma delta)^2
  int iterations = 0;
  double residual = 0.0;
};

QdaDelta solve_qda_delta(const Eigen::MatrixXd& sigma, int n_i, double gamma);
QdaDelta solve_qda_delta(const CovSpectrum& spectrum, int n_i, double gamma);

// Deterministic equivalents of the quadratic rule's conditional error, plus
// the boundedness and contraction diagnostics that back them.
struct QdaEquivalents {
  std::array<double, 2> delta{0.0, 0.0};
  std::array<Eigen::MatrixXd, 2> T;
  std::array<double, 2> phi{0.0, 0.0};
  std::array<double, 2> phi_tilde{0.0, 0.0};
  std::array<double, 2> xi_bar{0.0, 0.0};
  std::array<double, 2> b_bar{0.0, 0.0};
  std::array<double, 2> B_bar{0.0, 0.0};
  double B_simplified = 0.0;
  std::array<double, 2> eps{0.0, 0.0};
  double eps_total = 0.0;
  // scaled differences that must stay O(1): delta/(1+gamma delta) gap,
  // log(1+gamma delta) gap, log|T| gap
  std::array<double, 3> boundedness{0.0, 0.0, 0.0};
  // 2 gamma^2 / ((1+g d0)(1+g d1)) (1/n) tr Sigma_0 T_0 Sigma_1 T_1, < 1 on
  // valid inputs
  double contraction = 0.0;
};

QdaEquivalents qda_deterministic_error(const ProblemInstance& truth, int n0,
                                       int n1, double gamma, const Priors& priors);
QdaEquivalents qda_deterministic_error(const ProblemInstance& truth,
                                       const std::array<CovSpectrum, 2>& spectra,
                                       int n0, int n1, double gamma,
                                       const Priors& priors);

// Advisory report on the growth-rate regime the QDA equivalents assume; never
// blocks computation.
struct GrowthDiagnostics {
  double mean_gap_sq = 0.0;           // ||mu_0 - mu_1||^2
  double mean_ratio = 0.0;            // ||mu||^2 / sqrt(p)
  std::array<double, 2> sigma_norm{0.0, 0.0};
  int large_eigs = 0;                 // #{ |eig(Sigma_0 - Sigma_1)| > 1/sqrt(p) }
  double eig_abs_sum_scaled = 0.0;    // (1/sqrt(p)) sum |eig_j|
};

GrowthDiagnostics check_growth_assumptions(const ProblemInstance& truth, int n0,
                                           int n1);

}  // namespace rda
