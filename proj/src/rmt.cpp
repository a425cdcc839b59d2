#include "rda/rmt.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>

namespace rda {

namespace {

constexpr int kMaxIterations = 10000;
constexpr double kLdaTol = 1e-10;
constexpr double kDeltaTol = 1e-12;

double trace_product(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  // tr(A B) for symmetric A, symmetric B
  return (a.array() * b.array()).sum();
}

// V diag(f(lambda)) V^T
Eigen::MatrixXd from_spectrum(const CovSpectrum& s, const Eigen::VectorXd& diag) {
  Eigen::MatrixXd m = s.evecs * diag.asDiagonal() * s.evecs.transpose();
  return 0.5 * (m + m.transpose());
}

}  // namespace

CovSpectrum cov_spectrum(const Eigen::MatrixXd& sigma) {
  if (sigma.rows() != sigma.cols()) throw ModelError("covariance is not square");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sigma);
  if (eig.info() != Eigen::Success) throw ModelError("eigendecomposition failed");
  const double norm = std::max(eig.eigenvalues().cwiseAbs().maxCoeff(), 1e-300);
  if (eig.eigenvalues().minCoeff() < -1e-10 * norm) {
    throw ModelError("covariance is not positive semidefinite");
  }
  return CovSpectrum{eig.eigenvalues().cwiseMax(0.0), eig.eigenvectors()};
}

LdaFixedPoint solve_lda_fixed_point(const ProblemInstance& truth, int n0,
                                    int n1, double gamma) {
  if (!(gamma > 0.0)) throw DomainError("gamma must be positive");
  if (n0 < 1 || n1 < 1) throw DomainError("class counts must be >= 1");
  const int p = truth.dim;
  const double n = n0 + n1;
  const std::array<double, 2> c{n0 / n, n1 / n};
  const double z = -n / (p * gamma);
  const double neg_inv_z = -1.0 / z;

  LdaFixedPoint fp;
  fp.z = z;
  fp.g_tilde = {1.0, 1.0};
  for (int i = 0; i < 2; ++i) {
    fp.g[i] = (n / p) * neg_inv_z / (1.0 + fp.g_tilde[i]);
  }

  Eigen::MatrixXd m(p, p);
  for (fp.iterations = 1; fp.iterations <= kMaxIterations; ++fp.iterations) {
    // damped g-update followed by the induced g_tilde
    for (int i = 0; i < 2; ++i) {
      const double target = (n / p) * neg_inv_z / (1.0 + fp.g_tilde[i]);
      fp.g[i] = 0.5 * fp.g[i] + 0.5 * target;
    }
    m = c[0] * fp.g[0] * truth.cls[0].covariance +
        c[1] * fp.g[1] * truth.cls[1].covariance;
    m.diagonal().array() += 1.0;
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success) {
      throw SolverError("resolvent system matrix is not positive definite",
                        fp.residual);
    }
    fp.Q_bar = neg_inv_z *
               llt.solve(Eigen::MatrixXd::Identity(p, p));
    fp.Q_bar = 0.5 * (fp.Q_bar + fp.Q_bar.transpose());
    double residual = 0.0;
    for (int i = 0; i < 2; ++i) {
      fp.g_tilde[i] = trace_product(truth.cls[i].covariance, fp.Q_bar) / p;
      const double eq = std::abs((p / n) * fp.g[i] +
                                 (1.0 / z) / (1.0 + fp.g_tilde[i]));
      residual = std::max(residual, eq);
    }
    fp.residual = residual;
    if (residual < kLdaTol) return fp;
  }
  throw SolverError("fixed-point iteration did not converge", fp.residual);
}

LdaEquivalents lda_deterministic_error(const ProblemInstance& truth, int n0,
                                       int n1, double gamma,
                                       const Priors& priors) {
  check_priors(priors);
  const LdaFixedPoint fp = solve_lda_fixed_point(truth, n0, n1, gamma);
  const int p = truth.dim;
  const double n = n0 + n1;
  const std::array<double, 2> c{n0 / n, n1 / n};
  const double z = fp.z;
  const Eigen::VectorXd mu = truth.mean_diff();

  std::array<Eigen::MatrixXd, 2> a;  // A_i = Sigma_i Qbar
  std::array<Eigen::MatrixXd, 2> w;  // W_i = Qbar Sigma_i Qbar
  for (int i = 0; i < 2; ++i) {
    a[i] = truth.cls[i].covariance * fp.Q_bar;
    w[i] = fp.Q_bar * a[i];
    w[i] = 0.5 * (w[i] + w[i].transpose());
  }
  const double t01 = (a[0].array() * a[1].transpose().array()).sum() / n;

  LdaEquivalents eq;
  const double denom =
      1.0 - (z * z * c[0] * fp.g[0] * fp.g[0] + z * z * c[1] * fp.g[1] * fp.g[1]) * t01;
  if (!(denom > 0.0)) {
    throw SolverError("variance normalization denominator is not positive", denom);
  }
  for (int i = 0; i < 2; ++i) {
    eq.R[i] = z * z * c[i] * fp.g[i] * fp.g[i] * t01 / denom;
  }
  const double tr_a0 = a[0].trace();
  const double tr_a1 = a[1].trace();
  const double mu_q_mu = mu.dot(fp.Q_bar * mu);
  const double log_ratio = std::log(priors[1] / priors[0]);
  for (int i = 0; i < 2; ++i) {
    eq.Q_tilde[i] = w[i] + eq.R[0] * w[0] + eq.R[1] * w[1];
    const double sign = (i == 0) ? -1.0 : 1.0;  // (-1)^{i+1}
    eq.G_bar[i] = 0.5 * sign * z * mu_q_mu + z / (2.0 * n0) * tr_a0 -
                  z / (2.0 * n1) * tr_a1;
    eq.D_bar[i] =
        z * z * mu.dot(eq.Q_tilde[i] * mu) +
        z * z / n0 * trace_product(truth.cls[0].covariance, eq.Q_tilde[i]) +
        z * z / n1 * trace_product(truth.cls[1].covariance, eq.Q_tilde[i]);
    if (!(eq.D_bar[i] > 0.0)) {
      throw SolverError("deterministic variance is not positive", eq.D_bar[i]);
    }
    eq.eps[i] = normal_cdf((sign * eq.G_bar[i] - sign * log_ratio) /
                           std::sqrt(eq.D_bar[i]));
  }
  eq.eps_total = priors[0] * eq.eps[0] + priors[1] * eq.eps[1];
  return eq;
}

namespace {

// damped iteration for delta = (1/n_eff) sum_j lambda_j / (1 + gamma lambda_j
// / (1 + gamma delta)), started at p / n_eff
struct ScalarFixedPoint {
  double delta;
  int iterations;
  double residual;
};

ScalarFixedPoint solve_scalar_delta(const Eigen::VectorXd& evals, double n_eff,
                                    double gamma) {
  const double p = static_cast<double>(evals.size());
  double delta = p / n_eff;
  double residual = 0.0;
  for (int it = 1; it <= kMaxIterations; ++it) {
    const double ratio = gamma / (1.0 + gamma * delta);
    const double target =
        (evals.array() / (1.0 + ratio * evals.array())).sum() / n_eff;
    residual = std::abs(target - delta);
    delta = 0.5 * delta + 0.5 * target;
    if (residual < kDeltaTol) return {delta, it, residual};
  }
  throw SolverError("scalar fixed point did not converge", residual);
}

}  // namespace

CommonCovLda lda_common_cov_error(const CovSpectrum& spectrum,
                                  const Eigen::VectorXd& mu, int n0, int n1,
                                  double gamma, const Priors& priors) {
  check_priors(priors);
  if (!(gamma > 0.0)) throw DomainError("gamma must be positive");
  const double n = n0 + n1;
  const auto [delta, iterations, residual] =
      solve_scalar_delta(spectrum.evals, n, gamma);
  (void)iterations;
  (void)residual;

  const double ratio = gamma / (1.0 + gamma * delta);
  const Eigen::ArrayXd denom_j = 1.0 + ratio * spectrum.evals.array();
  const Eigen::VectorXd mu_v = spectrum.evecs.transpose() * mu;
  const Eigen::ArrayXd mu_sq = mu_v.array().square();

  const double mu_form_1 = (mu_sq / denom_j).sum();                      // mu' (I+rS)^-1 mu
  const double mu_form_2 = (mu_sq * spectrum.evals.array() / denom_j.square()).sum();
  const double tr_s2 = (spectrum.evals.array().square() / denom_j.square()).sum();

  const double denominator =
      1.0 - gamma * gamma / (n * (1.0 + gamma * delta) * (1.0 + gamma * delta)) * tr_s2;
  if (!(denominator > 0.0)) {
    throw SolverError("common-covariance variance denominator is not positive",
                      denominator);
  }

  CommonCovLda out;
  out.delta = delta;
  out.D_bar = (mu_form_2 + (1.0 / n0 + 1.0 / n1) * tr_s2) / denominator;
  const double log_ratio = std::log(priors[1] / priors[0]);
  for (int i = 0; i < 2; ++i) {
    const double sign_i = (i == 0) ? 1.0 : -1.0;  // (-1)^i
    out.G_bar[i] = 0.5 * sign_i * mu_form_1 -
                   0.5 * n * delta * (1.0 / n0 - 1.0 / n1);
    out.eps[i] = normal_cdf((-sign_i * out.G_bar[i] + sign_i * log_ratio) /
                            std::sqrt(out.D_bar));
  }
  out.eps_total = priors[0] * out.eps[0] + priors[1] * out.eps[1];
  return out;
}

CommonCovLda lda_common_cov_error(const Eigen::MatrixXd& sigma,
                                  const Eigen::VectorXd& mu, int n0, int n1,
                                  double gamma, const Priors& priors) {
  return lda_common_cov_error(cov_spectrum(sigma), mu, n0, n1, gamma, priors);
}

QdaDelta solve_qda_delta(const CovSpectrum& spectrum, int n_i, double gamma) {
  if (!(gamma > 0.0)) throw DomainError("gamma must be positive");
  if (n_i < 1) throw DomainError("class count must be >= 1");
  const auto [delta, iterations, residual] =
      solve_scalar_delta(spectrum.evals, static_cast<double>(n_i), gamma);
  QdaDelta out;
  out.delta = delta;
  out.iterations = iterations;
  out.residual = residual;
  const double ratio = gamma / (1.0 + gamma * delta);
  const Eigen::ArrayXd denom_j = 1.0 + ratio * spectrum.evals.array();
  out.T = from_spectrum(spectrum, denom_j.inverse().matrix());
  out.phi = (spectrum.evals.array().square() / denom_j.square()).sum() / n_i;
  out.phi_tilde = 1.0 / ((1.0 + gamma * delta) * (1.0 + gamma * delta));
  return out;
}

QdaDelta solve_qda_delta(const Eigen::MatrixXd& sigma, int n_i, double gamma) {
  return solve_qda_delta(cov_spectrum(sigma), n_i, gamma);
}

QdaEquivalents qda_deterministic_error(const ProblemInstance& truth,
                                       const std::array<CovSpectrum, 2>& spectra,
                                       int n0, int n1, double gamma,
                                       const Priors& priors) {
  check_priors(priors);
  const int p = truth.dim;
  const double sqrt_p = std::sqrt(static_cast<double>(p));
  const std::array<int, 2> n_cls{n0, n1};
  const Eigen::VectorXd mu = truth.mean_diff();

  QdaEquivalents eq;
  std::array<double, 2> log_det_T;
  std::array<Eigen::MatrixXd, 2> sigma_T;  // Sigma_i T_i, symmetric
  std::array<Eigen::MatrixXd, 2> sigma_T2; // Sigma_i T_i^2, symmetric
  for (int i = 0; i < 2; ++i) {
    QdaDelta d = solve_qda_delta(spectra[i], n_cls[i], gamma);
    eq.delta[i] = d.delta;
    eq.phi[i] = d.phi;
    eq.phi_tilde[i] = d.phi_tilde;
    eq.T[i] = std::move(d.T);
    const double ratio = gamma / (1.0 + gamma * eq.delta[i]);
    const Eigen::ArrayXd denom_j = 1.0 + ratio * spectra[i].evals.array();
    log_det_T[i] = -denom_j.log().sum();
    sigma_T[i] = from_spectrum(spectra[i],
                               (spectra[i].evals.array() / denom_j).matrix());
    sigma_T2[i] = from_spectrum(
        spectra[i], (spectra[i].evals.array() / denom_j.square()).matrix());
    if (!(1.0 - gamma * gamma * eq.phi[i] * eq.phi_tilde[i] > 0.0)) {
      throw SolverError("variance expansion denominator is not positive",
                        1.0 - gamma * gamma * eq.phi[i] * eq.phi_tilde[i]);
    }
  }

  const double shared =
      -(log_det_T[0] - log_det_T[1]) +
      (n0 * std::log(1.0 + gamma * eq.delta[0]) -
       n1 * std::log(1.0 + gamma * eq.delta[1])) +
      gamma * (n1 * eq.delta[1] / (1.0 + gamma * eq.delta[1]) -
               n0 * eq.delta[0] / (1.0 + gamma * eq.delta[0]));

  for (int i = 0; i < 2; ++i) {
    const int j = 1 - i;
    const double sign = (i == 0) ? 1.0 : -1.0;  // (-1)^i
    eq.xi_bar[i] = (shared - sign * mu.dot(eq.T[j] * mu)) / sqrt_p;
    eq.b_bar[i] =
        trace_product(truth.cls[i].covariance, eq.T[1] - eq.T[0]) / sqrt_p;

    const Eigen::MatrixXd cross = truth.cls[i].covariance * eq.T[j];
    const double tr_sq_cross = cross.squaredNorm();  // tr Sigma_i^2 T_j^2
    const double tr_mixed =
        trace_product(truth.cls[i].covariance, sigma_T2[j]) / n_cls[i];
    const Eigen::MatrixXd si_t1 = (i == 1) ? sigma_T[1] : cross;
    const Eigen::MatrixXd si_t0 =
        (i == 0) ? sigma_T[0] : truth.cls[i].covariance * eq.T[0];
    const double tr_tt = (si_t1.array() * si_t0.transpose().array()).sum();

    eq.B_bar[i] =
        eq.phi[i] / (1.0 - gamma * gamma * eq.phi[i] * eq.phi_tilde[i]) *
            (static_cast<double>(n_cls[i]) / p) +
        tr_sq_cross / p +
        (static_cast<double>(n_cls[i]) / p) * gamma * gamma * eq.phi_tilde[j] /
            (1.0 - gamma * gamma * eq.phi[j] * eq.phi_tilde[j]) * tr_mixed *
            tr_mixed -
        2.0 / p * tr_tt;
    if (!(eq.B_bar[i] > 0.0)) {
      throw SolverError("deterministic quadratic variance is not positive",
                        eq.B_bar[i]);
    }
    eq.eps[i] =
        normal_cdf(sign * (eq.xi_bar[i] - eq.b_bar[i]) / std::sqrt(2.0 * eq.B_bar[i]));
  }
  eq.eps_total = priors[0] * eq.eps[0] + priors[1] * eq.eps[1];

  const double n = n0 + n1;
  eq.B_simplified = (n / p) * eq.phi[0] * eq.phi[0] * eq.phi_tilde[0] /
                    (1.0 - gamma * gamma * eq.phi[0] * eq.phi_tilde[0]);
  eq.boundedness[0] =
      (n0 * eq.delta[0] / (1.0 + gamma * eq.delta[0]) -
       n1 * eq.delta[1] / (1.0 + gamma * eq.delta[1])) / sqrt_p;
  eq.boundedness[1] = (n1 * std::log(1.0 + gamma * eq.delta[1]) -
                       n0 * std::log(1.0 + gamma * eq.delta[0])) / sqrt_p;
  eq.boundedness[2] = (log_det_T[0] - log_det_T[1]) / sqrt_p;
  eq.contraction = 2.0 * gamma * gamma /
                   ((1.0 + gamma * eq.delta[0]) * (1.0 + gamma * eq.delta[1])) *
                   trace_product(sigma_T[0], sigma_T[1]) / n;
  return eq;
}

QdaEquivalents qda_deterministic_error(const ProblemInstance& truth, int n0,
                                       int n1, double gamma,
                                       const Priors& priors) {
  std::array<CovSpectrum, 2> spectra{cov_spectrum(truth.cls[0].covariance),
                                     cov_spectrum(truth.cls[1].covariance)};
  return qda_deterministic_error(truth, spectra, n0, n1, gamma, priors);
}

GrowthDiagnostics check_growth_assumptions(const ProblemInstance& truth, int n0,
                                           int n1) {
  (void)n0;
  (void)n1;
  GrowthDiagnostics diag;
  const int p = truth.dim;
  const double sqrt_p = std::sqrt(static_cast<double>(p));
  diag.mean_gap_sq = truth.mean_diff().squaredNorm();
  diag.mean_ratio = diag.mean_gap_sq / sqrt_p;
  for (int i = 0; i < 2; ++i) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(truth.cls[i].covariance);
    diag.sigma_norm[i] = eig.eigenvalues().cwiseAbs().maxCoeff();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> gap(
      truth.cls[0].covariance - truth.cls[1].covariance);
  const Eigen::ArrayXd abs_eigs = gap.eigenvalues().array().abs();
  const double tau = 1.0 / sqrt_p;
  diag.large_eigs = static_cast<int>((abs_eigs > tau).count());
  diag.eig_abs_sum_scaled = abs_eigs.sum() / sqrt_p;
  return diag;
}

}  // namespace rda
