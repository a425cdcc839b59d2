#pragma once

#include <cstdint>

#include "rda/model.hpp"
#include "rda/types.hpp"

namespace rda {

struct BaselineConfig {
  int folds = 5;
  int repetitions = 5;
  int bootstrap_samples = 100;
};

// Stratified k-fold cross-validation averaged over repetitions. Fold
// membership is derived from seeded content hashes of the samples, so the
// estimate does not depend on the column order of `train`.
ErrorReport cv_error(const TrainingSet& train, double gamma, Classifier kind,
                     const BaselineConfig& cfg, std::uint64_t seed);

// Bootstrap .632 and .632+ from class-stratified resampling with replacement.
struct BootstrapResult {
  ErrorReport b632;
  ErrorReport b632plus;
  double err_resub = 0.0;   // resubstitution (apparent) total error
  double err_oob = 0.0;     // out-of-bag total error averaged over resamples
  double no_info_rate = 0.0;
  double overfit_r = 0.0;   // relative overfitting, clamped to [0, 1]
  double weight = 0.0;      // 0.632 / (1 - 0.368 R)
};

BootstrapResult bootstrap_error(const TrainingSet& train, double gamma,
                                Classifier kind, const BaselineConfig& cfg,
                                std::uint64_t seed);

// Deterministic-equivalent formulas evaluated at the sample statistics.
ErrorReport plugin_error(const FittedDA& fit, Classifier kind, const Priors& priors);

}  // namespace rda
