#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <variant>
#include <vector>

#include "rda/baselines.hpp"
#include "rda/model.hpp"
#include "rda/types.hpp"

namespace rda {

enum class TuningStage { GOnly, TwoStage };

struct TuningResult {
  double gamma_star = 0.0;
  double objective_at_star = 0.0;
  std::pair<double, double> search_interval{0.0, 0.0};
  std::vector<std::pair<double, double>> grid_values;  // every (gamma, objective) evaluated
  TuningStage stage = TuningStage::GOnly;
};

// Minimize objective(gamma) over [lo, hi]: log-uniform grid scan, then
// golden-section refinement around the grid argmin (20 iterations, log
// scale). Gamma points where the objective raises a breakdown/solver error
// are skipped; ties break toward smaller gamma; if refinement does not
// improve on the grid the grid argmin stands.
TuningResult minimize_gamma(const std::function<double(double)>& objective,
                            double lo, double hi, int grid_size);

// Stage-2 search interval around a stage-1 minimizer: ((g - 2/sqrt(p))^+,
// g + 2/sqrt(p)), lower endpoint floored at 1e-6.
std::pair<double, double> two_stage_interval(double gamma_g, int p);

struct CvValidation {
  BaselineConfig cfg;
  std::uint64_t seed = 0;
};

using ValidationSpec = std::variant<TrainingSet, CvValidation>;

// Stage 1 minimizes the training-data-only error estimate over [lo, hi];
// stage 2 scans a 50-point uniform grid of the validation error (hold-out or
// CV) over the interval around the stage-1 minimizer. When stage1_out is
// given it receives the stage-1 result.
TuningResult two_stage_optimize(const TrainingSet& train, Classifier kind,
                                const ValidationSpec& validation, double lo,
                                double hi, int stage1_grid = 50,
                                TuningResult* stage1_out = nullptr);

}  // namespace rda
