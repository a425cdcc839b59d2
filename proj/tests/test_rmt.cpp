#include <doctest.h>

#include <cmath>

#include "rda/classifiers.hpp"
#include "rda/rmt.hpp"
#include "rda/rng.hpp"
#include "test_support.hpp"

using namespace rda;

namespace {

ProblemInstance scaled_identity_instance(double s0, double s1, int p) {
  return make_instance(
      GaussianClassSpec{Eigen::VectorXd::Zero(p),
                        s0 * Eigen::MatrixXd::Identity(p, p), 0.5},
      GaussianClassSpec{Eigen::VectorXd::Ones(p),
                        s1 * Eigen::MatrixXd::Identity(p, p), 0.5});
}

// Independent damped iteration on (gtilde_0, gtilde_1) for covariance pairs
// that are multiples of the identity, run from an arbitrary start.
std::array<double, 2> scaled_identity_fixed_point(double s0, double s1, int p,
                                                  int n0, int n1, double gamma,
                                                  double start0, double start1) {
  const double n = n0 + n1;
  const double z = -n / (p * gamma);
  const double neg_inv_z = -1.0 / z;
  const std::array<double, 2> c{n0 / n, n1 / n};
  const std::array<double, 2> s{s0, s1};
  std::array<double, 2> g_tilde{start0, start1};
  std::array<double, 2> g{0.0, 0.0};
  for (int it = 0; it < 200000; ++it) {
    for (int i = 0; i < 2; ++i) g[i] = (n / p) * neg_inv_z / (1.0 + g_tilde[i]);
    const double q = neg_inv_z / (1.0 + c[0] * g[0] * s0 + c[1] * g[1] * s1);
    double gap = 0.0;
    for (int i = 0; i < 2; ++i) {
      const double target = s[i] * q;
      gap = std::max(gap, std::abs(target - g_tilde[i]));
      g_tilde[i] = 0.7 * g_tilde[i] + 0.3 * target;
    }
    if (gap < 1e-13) break;
  }
  for (int i = 0; i < 2; ++i) g[i] = (n / p) * neg_inv_z / (1.0 + g_tilde[i]);
  return g;
}

}  // namespace

TEST_SUITE_BEGIN("rmt");

TEST_CASE("coupled system collapses to a scalar equation for equal spheres") {
  const int p = 50, n0 = 60, n1 = 40;
  const ProblemInstance truth = scaled_identity_instance(1.0, 1.0, p);
  const LdaFixedPoint fp = solve_lda_fixed_point(truth, n0, n1, 1.0);
  CHECK(fp.g[0] == doctest::Approx(fp.g[1]).epsilon(1e-12));
  const double oracle = test_support::scalar_lda_g_oracle(1.0, p, n0 + n1, 1.0);
  CHECK(std::abs(fp.g[0] - oracle) < 1e-9);
  CHECK(fp.residual < 1e-10);
}

TEST_CASE("vanishing regularization trivializes the resolvent") {
  const int p = 30;
  const ProblemInstance truth = scaled_identity_instance(2.0, 1.0, p);
  const LdaFixedPoint fp = solve_lda_fixed_point(truth, 20, 25, 1e-8);
  const Eigen::MatrixXd scaled = -fp.z * fp.Q_bar;
  CHECK((scaled - Eigen::MatrixXd::Identity(p, p)).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("multi-start iteration confirms the solver and empirical uniqueness") {
  const int p = 60, n0 = 30, n1 = 30;
  const double gamma = 1.0;
  const ProblemInstance truth = scaled_identity_instance(2.0, 1.0, p);
  const LdaFixedPoint fp = solve_lda_fixed_point(truth, n0, n1, gamma);
  Rng rng(404);
  for (int start = 0; start < 50; ++start) {
    const auto g = scaled_identity_fixed_point(2.0, 1.0, p, n0, n1, gamma,
                                               10.0 * rng.uniform(),
                                               10.0 * rng.uniform());
    CHECK(std::abs(g[0] - fp.g[0]) < 1e-8);
    CHECK(std::abs(g[1] - fp.g[1]) < 1e-8);
  }
}

TEST_CASE("indistinguishable classes sit at chance level") {
  const int p = 40;
  Eigen::MatrixXd sigma = test_support::random_psd(p, 3);
  const ProblemInstance truth = make_instance(
      GaussianClassSpec{Eigen::VectorXd::Zero(p), sigma, 0.5},
      GaussianClassSpec{Eigen::VectorXd::Zero(p), sigma, 0.5});
  const LdaEquivalents eq = lda_deterministic_error(truth, 30, 30, 1.0, {0.5, 0.5});
  CHECK(eq.G_bar[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(eq.G_bar[1] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(eq.eps_total == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("common-covariance closed form matches the general pipeline") {
  const int p = 60;
  auto geom = test_support::setup_a(p);
  geom.spike_scale = 0.0;  // equal covariances
  const ProblemInstance truth = build_synthetic(geom);
  const Eigen::VectorXd mu = truth.mean_diff();
  for (double gamma : {0.05, 0.4, 1.0, 7.0}) {
    for (auto [n0, n1] : {std::pair{80, 80}, std::pair{100, 50}}) {
      const LdaEquivalents general =
          lda_deterministic_error(truth, n0, n1, gamma, {0.5, 0.5});
      const CommonCovLda reduced = lda_common_cov_error(
          truth.cls[0].covariance, mu, n0, n1, gamma, {0.5, 0.5});
      CHECK(std::abs(general.eps[0] - reduced.eps[0]) < 1e-6);
      CHECK(std::abs(general.eps[1] - reduced.eps[1]) < 1e-6);
    }
  }
}

TEST_CASE("scalar fixed point closed forms") {
  SUBCASE("identity covariance, p = n, gamma = 1") {
    const int p = 50;
    const CommonCovLda out = lda_common_cov_error(
        Eigen::MatrixXd::Identity(p, p), Eigen::VectorXd::Ones(p), 30, 20, 1.0,
        {0.5, 0.5});
    CHECK(std::abs(out.delta - (std::sqrt(5.0) - 1.0) / 2.0) < 1e-9);
  }
  SUBCASE("doubled covariance, p = n, gamma = 1") {
    const int p = 50;
    const CommonCovLda out = lda_common_cov_error(
        2.0 * Eigen::MatrixXd::Identity(p, p), Eigen::VectorXd::Ones(p), 25, 25,
        1.0, {0.5, 0.5});
    CHECK(std::abs(out.delta - 1.0) < 1e-9);
  }
  SUBCASE("no separation is a coin flip") {
    const int p = 40;
    const CommonCovLda out = lda_common_cov_error(
        test_support::random_psd(p, 5), Eigen::VectorXd::Zero(p), 30, 30, 1.0,
        {0.5, 0.5});
    CHECK(out.G_bar[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(out.eps_total == doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("per-class scalar fixed point") {
  SUBCASE("identity covariance, p = n_i, gamma = 1") {
    const int p = 64;
    const QdaDelta d = solve_qda_delta(Eigen::MatrixXd::Identity(p, p), p, 1.0);
    const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
    CHECK(std::abs(d.delta - golden) < 1e-9);
    CHECK(d.T(0, 0) == doctest::Approx(golden).epsilon(1e-9));
    CHECK(std::abs(d.T(0, 1)) < 1e-14);
  }
  SUBCASE("vanishing gamma recovers tr Sigma / n_i") {
    const int p = 32;
    const Eigen::MatrixXd sigma = test_support::random_psd(p, 6);
    const QdaDelta d = solve_qda_delta(sigma, 20, 1e-10);
    CHECK(d.delta == doctest::Approx(sigma.trace() / 20.0).epsilon(1e-6));
  }
  SUBCASE("zero covariance") {
    const int p = 8;
    const QdaDelta d = solve_qda_delta(Eigen::MatrixXd::Zero(p, p), 10, 1.0);
    CHECK(std::abs(d.delta) < 1e-9);
    CHECK(d.T.isApprox(Eigen::MatrixXd::Identity(p, p), 1e-9));
    CHECK(std::abs(d.phi) < 1e-12);
    CHECK(d.phi_tilde == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("identical classes give a trivial quadratic equivalent") {
  const int p = 30;
  const Eigen::MatrixXd sigma = test_support::random_psd(p, 7);
  const ProblemInstance truth = make_instance(
      GaussianClassSpec{Eigen::VectorXd::Zero(p), sigma, 0.5},
      GaussianClassSpec{Eigen::VectorXd::Zero(p), sigma, 0.5});
  const QdaEquivalents eq = qda_deterministic_error(truth, 40, 40, 1.0, {0.5, 0.5});
  CHECK(std::abs(eq.xi_bar[0]) < 1e-10);
  CHECK(std::abs(eq.b_bar[0]) < 1e-10);
  CHECK(eq.eps_total == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("equal covariances reduce to the one-line display") {
  const int p = 80;
  auto geom = test_support::setup_a(p);
  geom.spike_scale = 0.0;
  const ProblemInstance truth = build_synthetic(geom);
  const int n_i = 100;
  for (double gamma : {0.3, 1.0, 2.5}) {
    const QdaEquivalents eq =
        qda_deterministic_error(truth, n_i, n_i, gamma, {0.5, 0.5});
    const double reduced = test_support::rqda_equal_cov_oracle(
        truth.cls[0].covariance, truth.mean_diff(), n_i, gamma);
    CHECK(std::abs(eq.eps_total - reduced) < 1e-8);
    CHECK(std::abs(eq.eps[0] - reduced) < 1e-8);
  }
}

TEST_CASE("variance equivalents of the two classes stay close on setup A") {
  const auto geom = test_support::setup_a(200);
  const ProblemInstance truth = build_synthetic(geom);
  const QdaEquivalents eq =
      qda_deterministic_error(truth, geom.n0, geom.n1, 1.0, {0.5, 0.5});
  CHECK(std::abs(eq.B_bar[0] - eq.B_bar[1]) < 5.0 / std::sqrt(200.0));
  CHECK(eq.contraction < 1.0);
  CHECK(eq.contraction > 0.0);
  for (double b : eq.boundedness) CHECK(std::isfinite(b));
}

TEST_CASE("error equivalents decrease along a separation ray") {
  const int p = 60;
  const auto geom = test_support::setup_a(p);
  const ProblemInstance base = build_synthetic(geom);
  double previous = 1.0;
  for (int step = 0; step < 10; ++step) {
    const double t = 0.4 * (step + 1);
    ProblemInstance scaled = base;
    scaled.cls[1].mean = base.cls[0].mean + t * (base.cls[1].mean - base.cls[0].mean);
    const LdaEquivalents eq =
        lda_deterministic_error(scaled, p, p, 1.0, {0.5, 0.5});
    CHECK(eq.eps_total <= previous + 1e-12);
    previous = eq.eps_total;
    CHECK(eq.eps_total > 0.0);
    CHECK(eq.eps_total < 1.0);
  }
}

TEST_CASE("linear equivalent tracks the conditional error, unequal classes") {
  // unequal class sizes and priors pin the orientation of the prior-ratio
  // term; a flipped sign would shift each class error by far more than the
  // tolerance
  const int p = 100, n0 = 140, n1 = 80;
  auto geom = test_support::setup_a(p);
  geom.mean_shift = 2.0;
  const ProblemInstance truth = build_synthetic(geom);
  const double n = n0 + n1;
  const Priors priors{n0 / n, n1 / n};
  const LdaEquivalents eq = lda_deterministic_error(truth, n0, n1, 1.0, priors);

  std::array<double, 2> mc{0.0, 0.0};
  const int trials = 40;
  for (int t = 0; t < trials; ++t) {
    const TrainingSet train =
        sample_training_set(truth, n0, n1, derive_seed(909, t));
    const FittedDA fit = fit_statistics(train, 1.0, priors);
    const ErrorReport exact = exact_error_rlda(fit, truth, priors);
    mc[0] += exact.per_class[0] / trials;
    mc[1] += exact.per_class[1] / trials;
  }
  CHECK(std::abs(eq.eps[0] - mc[0]) < 0.02);
  CHECK(std::abs(eq.eps[1] - mc[1]) < 0.02);
}

TEST_CASE("quadratic equivalent tracks the conditional error at moderate size") {
  const int p = 120;
  const auto geom = test_support::setup_a(p);
  const ProblemInstance truth = build_synthetic(geom);
  const QdaEquivalents eq =
      qda_deterministic_error(truth, p, p, 1.0, {0.5, 0.5});
  double mc = 0.0;
  const int trials = 30;
  for (int t = 0; t < trials; ++t) {
    const TrainingSet train = sample_training_set(truth, p, p, derive_seed(707, t));
    const FittedDA fit = fit_statistics(train, 1.0, Priors{0.5, 0.5});
    const QdaErrorComponents c0 = qda_error_components(fit, truth, 0, {0.5, 0.5});
    const QdaErrorComponents c1 = qda_error_components(fit, truth, 1, {0.5, 0.5});
    mc += clt_error_rqda(c0, c1, {0.5, 0.5}).report.total / trials;
  }
  CHECK(std::abs(eq.eps_total - mc) < 0.025);
}

TEST_CASE("growth diagnostics") {
  SUBCASE("equal covariances have no large eigenvalues") {
    const int p = 49;
    const Eigen::MatrixXd sigma = test_support::random_psd(p, 8);
    const ProblemInstance truth = make_instance(
        GaussianClassSpec{Eigen::VectorXd::Zero(p), sigma, 0.5},
        GaussianClassSpec{Eigen::VectorXd::Ones(p), sigma, 0.5});
    CHECK(check_growth_assumptions(truth, 10, 10).large_eigs == 0);
  }
  SUBCASE("spiked difference is counted") {
    const ProblemInstance truth = build_synthetic(test_support::setup_a(100));
    const GrowthDiagnostics diag = check_growth_assumptions(truth, 100, 100);
    CHECK(diag.large_eigs == 10);
    CHECK(diag.mean_gap_sq == doctest::Approx(0.64).epsilon(1e-12));
    CHECK(diag.mean_ratio == doctest::Approx(0.064).epsilon(1e-12));
  }
}

TEST_CASE("domain errors surface before any iteration") {
  const ProblemInstance truth = scaled_identity_instance(1.0, 1.0, 10);
  CHECK_THROWS_AS(solve_lda_fixed_point(truth, 5, 5, 0.0), DomainError);
  CHECK_THROWS_AS(solve_qda_delta(Eigen::MatrixXd::Identity(4, 4), 0, 1.0),
                  DomainError);
}

TEST_SUITE_END();
