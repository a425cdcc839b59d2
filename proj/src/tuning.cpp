#include "rda/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "rda/classifiers.hpp"
#include "rda/g_estimators.hpp"

namespace rda {

namespace {

constexpr int kGoldenIterations = 20;

bool better(double cand_obj, double cand_gamma, double best_obj, double best_gamma) {
  if (cand_obj < best_obj) return true;
  return cand_obj == best_obj && cand_gamma < best_gamma;
}

std::optional<double> try_objective(const std::function<double(double)>& objective,
                                    double gamma) {
  try {
    return objective(gamma);
  } catch (const EstimatorBreakdownError&) {
  } catch (const SolverError&) {
  } catch (const DegenerateVarianceError&) {
  }
  return std::nullopt;
}

}  // namespace

TuningResult minimize_gamma(const std::function<double(double)>& objective,
                            double lo, double hi, int grid_size) {
  if (!(lo > 0.0) || !(hi > lo)) throw DomainError("need 0 < lo < hi");
  if (grid_size < 2) throw DomainError("need at least 2 grid points");

  TuningResult result;
  result.stage = TuningStage::GOnly;
  result.search_interval = {lo, hi};

  std::vector<double> grid(grid_size);
  const double log_lo = std::log(lo);
  const double step = (std::log(hi) - log_lo) / (grid_size - 1);
  for (int k = 0; k < grid_size; ++k) grid[k] = std::exp(log_lo + k * step);
  grid.front() = lo;
  grid.back() = hi;

  double best_gamma = 0.0, best_obj = 0.0;
  int best_index = -1;
  for (int k = 0; k < grid_size; ++k) {
    const auto value = try_objective(objective, grid[k]);
    if (!value) continue;
    result.grid_values.emplace_back(grid[k], *value);
    if (best_index < 0 || better(*value, grid[k], best_obj, best_gamma)) {
      best_index = k;
      best_gamma = grid[k];
      best_obj = *value;
    }
  }
  if (best_index < 0) throw TuningError("objective failed on every grid point");

  // golden-section on log(gamma) between the argmin's neighbors
  double a = std::log(grid[std::max(best_index - 1, 0)]);
  double b = std::log(grid[std::min(best_index + 1, grid_size - 1)]);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  auto eval_log = [&](double t) -> std::optional<double> {
    const double gamma = std::exp(t);
    const auto value = try_objective(objective, gamma);
    if (value) {
      result.grid_values.emplace_back(gamma, *value);
      if (better(*value, gamma, best_obj, best_gamma)) {
        best_obj = *value;
        best_gamma = gamma;
      }
    }
    return value;
  };
  auto fc = eval_log(c);
  auto fd = eval_log(d);
  for (int it = 0; it < kGoldenIterations && fc && fd; ++it) {
    if (*fc < *fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = eval_log(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = eval_log(d);
    }
  }

  result.gamma_star = best_gamma;
  result.objective_at_star = best_obj;
  return result;
}

std::pair<double, double> two_stage_interval(double gamma_g, int p) {
  const double half_width = 2.0 / std::sqrt(static_cast<double>(p));
  const double lo = std::max(std::max(gamma_g - half_width, 0.0), 1e-6);
  return {lo, gamma_g + half_width};
}

TuningResult two_stage_optimize(const TrainingSet& train, Classifier kind,
                                const ValidationSpec& validation, double lo,
                                double hi, int stage1_grid,
                                TuningResult* stage1_out) {
  const SampleStats stats = compute_sample_stats(train);
  const auto estimate = [&](double gamma) {
    const FittedDA fit = stats.fit(gamma);
    return g_estimate(fit, kind, fit.priors).total;
  };
  const TuningResult stage1 = minimize_gamma(estimate, lo, hi, stage1_grid);
  if (stage1_out) *stage1_out = stage1;

  const auto [lo2, hi2] = two_stage_interval(stage1.gamma_star, train.dim());
  TuningResult result;
  result.stage = TuningStage::TwoStage;
  result.search_interval = {lo2, hi2};

  const auto validate = [&](double gamma) -> double {
    if (std::holds_alternative<TrainingSet>(validation)) {
      const FittedDA fit = stats.fit(gamma);
      return empirical_error(fit, kind, std::get<TrainingSet>(validation),
                             fit.priors)
          .total;
    }
    const auto& cv = std::get<CvValidation>(validation);
    return cv_error(train, gamma, kind, cv.cfg, cv.seed).total;
  };

  constexpr int kStage2Points = 50;
  bool have_best = false;
  for (int k = 0; k < kStage2Points; ++k) {
    const double gamma = lo2 + (hi2 - lo2) * k / (kStage2Points - 1);
    const auto value = try_objective(validate, gamma);
    if (!value) continue;
    result.grid_values.emplace_back(gamma, *value);
    if (!have_best || better(*value, gamma, result.objective_at_star,
                             result.gamma_star)) {
      result.gamma_star = gamma;
      result.objective_at_star = *value;
      have_best = true;
    }
  }
  if (!have_best) throw TuningError("validation failed on every stage-2 point");
  return result;
}

}  // namespace rda
