#include "rda/g_estimators.hpp"

#include <cmath>

#include "rda/classifiers.hpp"

namespace rda {

namespace {

// tr(A B), A symmetric and B symmetric
double trace_sym(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a.array() * b.array()).sum();
}

// tr(A B) for general square A, B
double trace_pair(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a.array() * b.transpose().array()).sum();
}

}  // namespace

GEstimateRlda g_estimate_rlda(const FittedDA& fit, const Priors& priors) {
  check_priors(priors);
  const double n = fit.n_total();
  const double gamma = fit.gamma;
  const double log_ratio = std::log(priors[1] / priors[0]);

  GEstimateRlda out;
  for (int i = 0; i < 2; ++i) {
    const double tr_sh = trace_sym(fit.sigma_hat[i], fit.H);
    const double denom = 1.0 - gamma / (n - 2.0) * tr_sh;
    if (!(denom > 0.0)) {
      throw EstimatorBreakdownError(
          "1 - gamma/(n-2) tr(Sigma_i H) is not positive", denom);
    }
    out.theta_hat[i] = tr_sh / fit.n[i] / denom;
    out.psi_hat[i] = 1.0 / denom;

    const double shift =
        lda_shift_form(fit.mu_hat[i], fit.mu_hat[0], fit.mu_hat[1], fit.H);
    const double noise =
        lda_noise_form(fit.mu_hat[0], fit.mu_hat[1], fit.H, fit.sigma_hat[i]);
    if (!(noise > 0.0)) {
      throw DegenerateVarianceError("estimated score variance is not positive");
    }
    const double sign = (i == 0) ? -1.0 : 1.0;  // (-1)^{i+1}
    out.eps[i] = normal_cdf((sign * shift + out.theta_hat[i] - sign * log_ratio) /
                            (out.psi_hat[i] * std::sqrt(noise)));
  }
  out.eps_total = priors[0] * out.eps[0] + priors[1] * out.eps[1];
  return out;
}

double qda_delta_hat(const FittedDA& fit, int class_index) {
  if (class_index != 0 && class_index != 1) {
    throw DomainError("class index must be 0 or 1");
  }
  const double p = fit.dim();
  const double n_i = fit.n[class_index];
  const double tr_h = fit.H_class[class_index].trace();
  const double denom = 1.0 - p / n_i + tr_h / n_i;
  if (!(denom > 0.0)) {
    throw EstimatorBreakdownError("1 - p/n_i + tr(H_i)/n_i is not positive",
                                  denom);
  }
  return (p / n_i - tr_h / n_i) / denom / fit.gamma;
}

GEstimateRqda g_estimate_rqda(const FittedDA& fit, const Priors& priors) {
  check_priors(priors);
  const int p = fit.dim();
  const double sqrt_p = std::sqrt(static_cast<double>(p));
  const double gamma = fit.gamma;
  const double log_ratio = std::log(priors[1] / priors[0]);
  const Eigen::VectorXd mu_gap = fit.mu_hat[0] - fit.mu_hat[1];

  GEstimateRqda out;
  for (int i = 0; i < 2; ++i) {
    const int j = 1 - i;
    const double n_i = fit.n[i];
    out.delta_hat[i] = qda_delta_hat(fit, i);

    const Eigen::MatrixXd sh_i = fit.sigma_hat[i] * fit.H_class[i];
    const Eigen::MatrixXd sh_j = fit.sigma_hat[i] * fit.H_class[j];
    const double t_ii = trace_pair(sh_i, sh_i) / p;
    const double t_jj = trace_pair(sh_j, sh_j) / p;
    const double t_cross = trace_pair(sh_i, sh_j) / p;
    const double tr_sh_j = trace_sym(fit.sigma_hat[i], fit.H_class[j]);
    const double one_plus = 1.0 + gamma * out.delta_hat[i];

    // tr Sigma_i H_i recovered from tr SigmaHat_i H_i by the rank-one trace
    // inversion at the class's n_i - 1 effective samples, with the
    // second-order term built from the same product traces the variance
    // estimate uses; all of it vanishes relative to the leading terms as p
    // grows but is kept for finite p.
    const double s_i = trace_sym(fit.sigma_hat[i], fit.H_class[i]);
    const double c_i = gamma / (n_i - 1.0);
    const double inv_denom = 1.0 - c_i * s_i;
    if (!(inv_denom > 0.0)) {
      throw EstimatorBreakdownError(
          "1 - gamma/(n_i-1) tr(SigmaHat_i H_i) is not positive", inv_denom);
    }
    const double tau_i = s_i / inv_denom;
    const double quad_trace =
        p * (one_plus * one_plus * one_plus * one_plus * t_ii -
             n_i / p * out.delta_hat[i] * out.delta_hat[i] * one_plus * one_plus);
    const double tr_sh_self = tau_i + c_i * quad_trace / (1.0 + c_i * tau_i);

    const double sign = (i == 0) ? 1.0 : -1.0;  // (-1)^i
    out.xi_hat[i] = -(fit.log_det_H[0] - fit.log_det_H[1]) / sqrt_p -
                    sign * mu_gap.dot(fit.H_class[j] * mu_gap) / sqrt_p +
                    sign * (tr_sh_self + tr_sh_j) / n_i / sqrt_p +
                    2.0 * log_ratio / sqrt_p;
    out.b_hat[i] = sign * tr_sh_j / sqrt_p - sign * tr_sh_self / sqrt_p;

    out.B_hat[i] = one_plus * one_plus * one_plus * one_plus * t_ii -
                   n_i / p * out.delta_hat[i] * out.delta_hat[i] * one_plus * one_plus +
                   t_jj - n_i / p * (tr_sh_j / n_i) * (tr_sh_j / n_i) -
                   2.0 * one_plus * one_plus * t_cross +
                   out.delta_hat[i] * one_plus * 2.0 / p * tr_sh_j;
    if (!(out.B_hat[i] > 0.0)) {
      throw EstimatorBreakdownError("estimated quadratic variance is not positive",
                                    out.B_hat[i]);
    }
    out.eps[i] = normal_cdf(sign * (out.xi_hat[i] - out.b_hat[i]) /
                            std::sqrt(2.0 * out.B_hat[i]));
  }
  out.eps_total = priors[0] * out.eps[0] + priors[1] * out.eps[1];
  return out;
}

ErrorReport g_estimate(const FittedDA& fit, Classifier kind, const Priors& priors) {
  ErrorReport report;
  report.kind = kind;
  report.method = ErrorMethod::GEstimate;
  if (kind == Classifier::RLDA) {
    const GEstimateRlda est = g_estimate_rlda(fit, priors);
    report.per_class = est.eps;
    report.total = est.eps_total;
  } else {
    const GEstimateRqda est = g_estimate_rqda(fit, priors);
    report.per_class = est.eps;
    report.total = est.eps_total;
  }
  return report;
}

}  // namespace rda
