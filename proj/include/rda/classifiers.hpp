#pragma once

#include <Eigen/Dense>

#include "rda/model.hpp"
#include "rda/types.hpp"

namespace rda {

// Discriminant scores. Decision rule: class 0 iff score > 0; a score of
// exactly 0 goes to class 1.
double score_rlda(const Eigen::VectorXd& x, const FittedDA& fit, const Priors& priors);
double score_rqda(const Eigen::VectorXd& x, const FittedDA& fit, const Priors& priors);

// Scores for every column of x at once.
Eigen::VectorXd score_batch(const FittedDA& fit, Classifier kind,
                            const Eigen::MatrixXd& x, const Priors& priors);

inline int classify(double score) { return score > 0.0 ? 0 : 1; }

// Bilinear forms of the linear discriminant's conditional law: the score of
// a point with mean m is Gaussian with mean shift_form(m,...) - log(pi1/pi0)
// and variance noise_form(..., Sigma of the class).
double lda_shift_form(const Eigen::VectorXd& m, const Eigen::VectorXd& mu0,
                      const Eigen::VectorXd& mu1, const Eigen::MatrixXd& H);
double lda_noise_form(const Eigen::VectorXd& mu0, const Eigen::VectorXd& mu1,
                      const Eigen::MatrixXd& H, const Eigen::MatrixXd& sigma);

// Misclassification fractions on a labeled test set.
ErrorReport empirical_error(const FittedDA& fit, Classifier kind,
                            const TrainingSet& test, const Priors& priors);

// Conditional misclassification probability of the fitted linear rule under
// the ground-truth Gaussian model (closed form).
ErrorReport exact_error_rlda(const FittedDA& fit, const ProblemInstance& truth,
                             const Priors& priors);

// Ingredients of the quadratic rule's conditional error for one class:
// conditioned on the fit, the score of x = mu_i + Sigma_i^{1/2} z satisfies
// 2 W(x) = -(z' B z + 2 z' r - xi) up to the class-i sign convention.
struct QdaErrorComponents {
  Eigen::MatrixXd B;
  Eigen::VectorXd r;
  double xi = 0.0;
  double tr_B = 0.0;
  double tr_B2 = 0.0;
  double r_norm_sq = 0.0;
  int class_index = 0;
};

QdaErrorComponents qda_error_components(const FittedDA& fit,
                                        const ProblemInstance& truth,
                                        int class_index, const Priors& priors);

// Gaussian approximation of the quadratic-form tail, with the fourth-moment
// ratio that controls its validity reported per class.
struct CltQdaError {
  ErrorReport report;
  std::array<double, 2> lyapunov_ratio{0.0, 0.0};
};

CltQdaError clt_error_rqda(const QdaErrorComponents& comp0,
                           const QdaErrorComponents& comp1, const Priors& priors);

}  // namespace rda
