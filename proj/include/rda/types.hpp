#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rda {

enum class Classifier { RLDA, RQDA };

// Provenance tag for error values carried through reports.
enum class ErrorMethod {
  Empirical,
  Exact,
  Deterministic,
  GEstimate,
  CV,
  B632,
  B632Plus,
  Plugin,
};

// Class priors (pi_0, pi_1); must sum to 1.
using Priors = std::array<double, 2>;

// Per-class misclassification rates and their prior-weighted total.
struct ErrorReport {
  std::array<double, 2> per_class{0.0, 0.0};
  double total = 0.0;
  Classifier kind = Classifier::RLDA;
  ErrorMethod method = ErrorMethod::Empirical;
};

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// invalid model inputs: non-PSD covariance, dimension mismatch, bad priors
struct ModelError : Error {
  using Error::Error;
};

// gamma <= 0 and similar out-of-domain parameters
struct DomainError : Error {
  using Error::Error;
};

// too few samples for the requested statistic or split
struct InsufficientDataError : Error {
  using Error::Error;
};

// fixed-point non-convergence or a deterministic-equivalent denominator <= 0
struct SolverError : Error {
  SolverError(const std::string& what, double residual)
      : Error(what), residual(residual) {}
  double residual;
};

// a variance that must be positive is not
struct DegenerateVarianceError : Error {
  using Error::Error;
};

// a G-estimator denominator crossed zero; carries the offending value
struct EstimatorBreakdownError : Error {
  EstimatorBreakdownError(const std::string& what, double denominator)
      : Error(what), denominator(denominator) {}
  double denominator;
};

struct TuningError : Error {
  using Error::Error;
};

// malformed input file (libsvm data or experiment config), with line number
struct ParseError : Error {
  ParseError(const std::string& what, int line) : Error(what), line(line) {}
  int line;
};

// standard normal CDF
inline double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

inline void check_priors(const Priors& priors) {
  if (!(priors[0] > 0.0) || !(priors[1] > 0.0) ||
      std::abs(priors[0] + priors[1] - 1.0) > 1e-12) {
    throw ModelError("priors must be positive and sum to 1");
  }
}

}  // namespace rda
