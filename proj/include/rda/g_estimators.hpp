#pragma once

#include <array>

#include "rda/model.hpp"
#include "rda/types.hpp"

namespace rda {

// Consistent estimates of the conditional misclassification error computed
// from the training data alone (no ground-truth statistics enter).

struct GEstimateRlda {
  std::array<double, 2> theta_hat{0.0, 0.0};
  std::array<double, 2> psi_hat{0.0, 0.0};
  std::array<double, 2> eps{0.0, 0.0};
  double eps_total = 0.0;
};

GEstimateRlda g_estimate_rlda(const FittedDA& fit, const Priors& priors);

struct GEstimateRqda {
  std::array<double, 2> xi_hat{0.0, 0.0};
  std::array<double, 2> delta_hat{0.0, 0.0};
  std::array<double, 2> b_hat{0.0, 0.0};
  std::array<double, 2> B_hat{0.0, 0.0};
  std::array<double, 2> eps{0.0, 0.0};
  double eps_total = 0.0;
};

// (1/gamma) (p/n_i - tr(H_i)/n_i) / (1 - p/n_i + tr(H_i)/n_i)
double qda_delta_hat(const FittedDA& fit, int class_index);

GEstimateRqda g_estimate_rqda(const FittedDA& fit, const Priors& priors);

// Convenience: the total error of the requested estimator, as an ErrorReport.
ErrorReport g_estimate(const FittedDA& fit, Classifier kind, const Priors& priors);

}  // namespace rda
