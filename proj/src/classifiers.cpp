#include "rda/classifiers.hpp"

#include <cmath>

namespace rda {

namespace {

void check_dim(const FittedDA& fit, const Eigen::MatrixXd& x) {
  if (x.rows() != fit.dim()) {
    throw ModelError("input dimension does not match the fitted model");
  }
}

void check_finite(double value) {
  if (!std::isfinite(value)) throw Error("discriminant score is not finite");
}

}  // namespace

double score_rlda(const Eigen::VectorXd& x, const FittedDA& fit, const Priors& priors) {
  check_dim(fit, x);
  check_priors(priors);
  const Eigen::VectorXd centered = x - 0.5 * (fit.mu_hat[0] + fit.mu_hat[1]);
  const double value = centered.dot(fit.H * (fit.mu_hat[0] - fit.mu_hat[1])) -
                       std::log(priors[1] / priors[0]);
  check_finite(value);
  return value;
}

double score_rqda(const Eigen::VectorXd& x, const FittedDA& fit, const Priors& priors) {
  check_dim(fit, x);
  check_priors(priors);
  const Eigen::VectorXd d0 = x - fit.mu_hat[0];
  const Eigen::VectorXd d1 = x - fit.mu_hat[1];
  const double value = 0.5 * (fit.log_det_H[0] - fit.log_det_H[1]) -
                       0.5 * d0.dot(fit.H_class[0] * d0) +
                       0.5 * d1.dot(fit.H_class[1] * d1) -
                       std::log(priors[1] / priors[0]);
  check_finite(value);
  return value;
}

Eigen::VectorXd score_batch(const FittedDA& fit, Classifier kind,
                            const Eigen::MatrixXd& x, const Priors& priors) {
  check_dim(fit, x);
  check_priors(priors);
  const double log_ratio = std::log(priors[1] / priors[0]);
  const int m = static_cast<int>(x.cols());
  Eigen::VectorXd scores(m);
  if (kind == Classifier::RLDA) {
    const Eigen::VectorXd w = fit.H * (fit.mu_hat[0] - fit.mu_hat[1]);
    const Eigen::VectorXd mid = 0.5 * (fit.mu_hat[0] + fit.mu_hat[1]);
    scores = (x.transpose() * w).array() - mid.dot(w) - log_ratio;
  } else {
    std::array<Eigen::VectorXd, 2> quad;
    for (int i = 0; i < 2; ++i) {
      Eigen::MatrixXd centered = x.colwise() - fit.mu_hat[i];
      quad[i] = (centered.array() * (fit.H_class[i] * centered).array())
                    .colwise()
                    .sum();
    }
    scores = 0.5 * (fit.log_det_H[0] - fit.log_det_H[1]) -
             (0.5 * quad[0] - 0.5 * quad[1]).array() - log_ratio;
  }
  for (int j = 0; j < m; ++j) check_finite(scores[j]);
  return scores;
}

double lda_shift_form(const Eigen::VectorXd& m, const Eigen::VectorXd& mu0,
                      const Eigen::VectorXd& mu1, const Eigen::MatrixXd& H) {
  return (m - 0.5 * (mu0 + mu1)).dot(H * (mu0 - mu1));
}

double lda_noise_form(const Eigen::VectorXd& mu0, const Eigen::VectorXd& mu1,
                      const Eigen::MatrixXd& H, const Eigen::MatrixXd& sigma) {
  const Eigen::VectorXd v = H * (mu0 - mu1);
  return v.dot(sigma * v);
}

ErrorReport empirical_error(const FittedDA& fit, Classifier kind,
                            const TrainingSet& test, const Priors& priors) {
  if (test.counts[0] < 1 || test.counts[1] < 1) {
    throw InsufficientDataError("test set is missing a class");
  }
  const Eigen::VectorXd scores = score_batch(fit, kind, test.samples, priors);
  std::array<int, 2> wrong{0, 0};
  for (int j = 0; j < test.n_total(); ++j) {
    if (classify(scores[j]) != test.labels[j]) ++wrong[test.labels[j]];
  }
  ErrorReport report;
  report.kind = kind;
  report.method = ErrorMethod::Empirical;
  for (int i = 0; i < 2; ++i) {
    report.per_class[i] = static_cast<double>(wrong[i]) / test.counts[i];
  }
  report.total = priors[0] * report.per_class[0] + priors[1] * report.per_class[1];
  return report;
}

ErrorReport exact_error_rlda(const FittedDA& fit, const ProblemInstance& truth,
                             const Priors& priors) {
  check_priors(priors);
  if (truth.dim != fit.dim()) {
    throw ModelError("truth dimension does not match the fitted model");
  }
  const double log_ratio = std::log(priors[1] / priors[0]);
  ErrorReport report;
  report.kind = Classifier::RLDA;
  report.method = ErrorMethod::Exact;
  for (int i = 0; i < 2; ++i) {
    const double shift = lda_shift_form(truth.cls[i].mean, fit.mu_hat[0],
                                        fit.mu_hat[1], fit.H);
    const double noise = lda_noise_form(fit.mu_hat[0], fit.mu_hat[1], fit.H,
                                        truth.cls[i].covariance);
    if (!(noise > 0.0)) {
      throw DegenerateVarianceError("conditional score variance is not positive");
    }
    const double sign = (i == 0) ? -1.0 : 1.0;  // (-1)^{i+1}
    report.per_class[i] =
        normal_cdf((sign * shift - sign * log_ratio) / std::sqrt(noise));
  }
  report.total = priors[0] * report.per_class[0] + priors[1] * report.per_class[1];
  return report;
}

QdaErrorComponents qda_error_components(const FittedDA& fit,
                                        const ProblemInstance& truth,
                                        int class_index, const Priors& priors) {
  check_priors(priors);
  if (class_index != 0 && class_index != 1) throw DomainError("class index must be 0 or 1");
  if (truth.dim != fit.dim()) {
    throw ModelError("truth dimension does not match the fitted model");
  }
  const Eigen::MatrixXd root = psd_sqrt(truth.cls[class_index].covariance);
  const Eigen::VectorXd& mu = truth.cls[class_index].mean;
  const Eigen::VectorXd d0 = mu - fit.mu_hat[0];
  const Eigen::VectorXd d1 = mu - fit.mu_hat[1];

  // With x = mu + root * z the quadratic form in z uses root^T (.) root, so
  // B and r must share the same factor side.
  QdaErrorComponents comp;
  comp.class_index = class_index;
  comp.B = root.transpose() * (fit.H_class[1] - fit.H_class[0]) * root;
  comp.B = 0.5 * (comp.B + comp.B.transpose());
  comp.r = root.transpose() * (fit.H_class[1] * d1 - fit.H_class[0] * d0);
  comp.xi = -(fit.log_det_H[0] - fit.log_det_H[1]) + d0.dot(fit.H_class[0] * d0) -
            d1.dot(fit.H_class[1] * d1) + 2.0 * std::log(priors[1] / priors[0]);
  comp.tr_B = comp.B.trace();
  comp.tr_B2 = (comp.B.array() * comp.B.array()).sum();
  comp.r_norm_sq = comp.r.squaredNorm();
  return comp;
}

CltQdaError clt_error_rqda(const QdaErrorComponents& comp0,
                           const QdaErrorComponents& comp1, const Priors& priors) {
  check_priors(priors);
  CltQdaError out;
  out.report.kind = Classifier::RQDA;
  out.report.method = ErrorMethod::Exact;
  const QdaErrorComponents* comps[2] = {&comp0, &comp1};
  for (int i = 0; i < 2; ++i) {
    const auto& c = *comps[i];
    const double variance = 2.0 * c.tr_B2 + 4.0 * c.r_norm_sq;
    if (!(variance > 0.0)) {
      throw DegenerateVarianceError("quadratic-form variance is not positive");
    }
    const double sign = (i == 0) ? 1.0 : -1.0;  // (-1)^i
    out.report.per_class[i] =
        normal_cdf(sign * (c.xi - c.tr_B) / std::sqrt(variance));
    out.lyapunov_ratio[i] = (60.0 * c.tr_B2 + 240.0 * c.tr_B2 * c.r_norm_sq +
                             48.0 * c.r_norm_sq * c.r_norm_sq) /
                            (variance * variance);
  }
  out.report.total =
      priors[0] * out.report.per_class[0] + priors[1] * out.report.per_class[1];
  return out;
}

}  // namespace rda
