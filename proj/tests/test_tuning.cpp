#include <doctest.h>

#include <cmath>

#include "rda/tuning.hpp"
#include "test_support.hpp"

using namespace rda;

TEST_SUITE_BEGIN("tuning");

TEST_CASE("a smooth quadratic lands on its minimizer") {
  const auto objective = [](double gamma) { return (gamma - 2.0) * (gamma - 2.0); };
  const TuningResult result = minimize_gamma(objective, 0.1, 5.0, 50);
  CHECK(std::abs(result.gamma_star - 2.0) < 1e-3);
  double grid_min = result.grid_values.front().second;
  for (const auto& [gamma, value] : result.grid_values) {
    grid_min = std::min(grid_min, value);
  }
  CHECK(std::abs(result.objective_at_star - grid_min) < 1e-12);
}

TEST_CASE("a constant objective ties toward the left endpoint") {
  const TuningResult result =
      minimize_gamma([](double) { return 1.0; }, 0.5, 8.0, 20);
  CHECK(result.gamma_star == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("breakdown points are skipped, never returned") {
  int failures = 0;
  const auto objective = [&](double gamma) -> double {
    if (gamma < 1.0) {
      ++failures;
      throw EstimatorBreakdownError("synthetic breakdown", -1.0);
    }
    return (gamma - 2.0) * (gamma - 2.0);
  };
  const TuningResult result = minimize_gamma(objective, 0.1, 5.0, 40);
  CHECK(failures > 0);
  CHECK(result.gamma_star >= 1.0);
  CHECK(std::abs(result.gamma_star - 2.0) < 1e-2);
  for (const auto& [gamma, value] : result.grid_values) CHECK(gamma >= 1.0);
}

TEST_CASE("an objective failing everywhere is a tuning error") {
  const auto objective = [](double) -> double {
    throw SolverError("synthetic failure", 0.0);
  };
  CHECK_THROWS_AS(minimize_gamma(objective, 0.1, 1.0, 5), TuningError);
}

TEST_CASE("stage-2 interval arithmetic") {
  const auto [lo, hi] = two_stage_interval(0.896, 256);
  CHECK(lo == 0.896 - 2.0 / 16.0);
  CHECK(hi == 0.896 + 2.0 / 16.0);
  CHECK(lo == doctest::Approx(0.771).epsilon(1e-12));
  CHECK(hi == doctest::Approx(1.021).epsilon(1e-12));

  const auto [lo2, hi2] = two_stage_interval(0.05, 16);
  CHECK(lo2 == 1e-6);  // (0.05 - 0.5)^+ hits the positivity floor
  CHECK(hi2 == doctest::Approx(0.55).epsilon(1e-12));
}

TEST_CASE("two-stage search on separable data ties to the interval start") {
  const int p = 16;
  const ProblemInstance truth = make_instance(
      GaussianClassSpec{Eigen::VectorXd::Zero(p),
                        0.01 * Eigen::MatrixXd::Identity(p, p), 0.5},
      GaussianClassSpec{Eigen::VectorXd::Constant(p, 10.0),
                        0.01 * Eigen::MatrixXd::Identity(p, p), 0.5});
  const TrainingSet train = sample_training_set(truth, 30, 30, 11);
  const TrainingSet holdout = sample_training_set(truth, 100, 100, 12);
  const TuningResult result = two_stage_optimize(
      train, Classifier::RLDA, ValidationSpec{holdout}, 1e-2, 1e2, 25);
  CHECK(result.stage == TuningStage::TwoStage);
  CHECK(result.objective_at_star == 0.0);
  CHECK(result.gamma_star == doctest::Approx(result.search_interval.first).epsilon(1e-12));
}

TEST_CASE("two-stage run is reproducible and brackets its stage-1 pick") {
  const auto geom = test_support::setup_a(60);
  const ProblemInstance truth = build_synthetic(geom);
  const TrainingSet train = sample_training_set(truth, 60, 60, 21);
  const TrainingSet holdout = sample_training_set(truth, 400, 400, 22);

  TuningResult stage1_a, stage1_b;
  const TuningResult a = two_stage_optimize(train, Classifier::RQDA,
                                            ValidationSpec{holdout}, 1e-2, 1e2,
                                            30, &stage1_a);
  const TuningResult b = two_stage_optimize(train, Classifier::RQDA,
                                            ValidationSpec{holdout}, 1e-2, 1e2,
                                            30, &stage1_b);
  CHECK(a.gamma_star == b.gamma_star);
  CHECK(a.objective_at_star == b.objective_at_star);
  CHECK(stage1_a.gamma_star == stage1_b.gamma_star);
  CHECK(a.search_interval.first <= stage1_a.gamma_star);
  CHECK(stage1_a.gamma_star <= a.search_interval.second);
  CHECK(a.gamma_star >= a.search_interval.first);
  CHECK(a.gamma_star <= a.search_interval.second);
}

TEST_CASE("cross-validation can drive the second stage") {
  const auto geom = test_support::setup_a(30);
  const ProblemInstance truth = build_synthetic(geom);
  const TrainingSet train = sample_training_set(truth, 40, 40, 31);
  CvValidation cv;
  cv.cfg.repetitions = 2;
  cv.seed = 32;
  const TuningResult result = two_stage_optimize(
      train, Classifier::RLDA, ValidationSpec{cv}, 1e-2, 1e2, 20);
  CHECK(result.gamma_star > 0.0);
  CHECK(result.objective_at_star >= 0.0);
  CHECK(result.objective_at_star <= 1.0);
}

TEST_CASE("domain validation") {
  CHECK_THROWS_AS(minimize_gamma([](double g) { return g; }, 0.0, 1.0, 5),
                  DomainError);
  CHECK_THROWS_AS(minimize_gamma([](double g) { return g; }, 2.0, 1.0, 5),
                  DomainError);
  CHECK_THROWS_AS(minimize_gamma([](double g) { return g; }, 0.1, 1.0, 1),
                  DomainError);
}

TEST_SUITE_END();
