#include "rda/model.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>

#include "rda/rng.hpp"

namespace rda {

namespace {

void check_square(const Eigen::MatrixXd& m, const char* what) {
  if (m.rows() != m.cols()) throw ModelError(std::string(what) + " is not square");
}

void check_symmetric(const Eigen::MatrixXd& m, const char* what) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw ModelError(std::string(what) + " is not symmetric");
  }
}

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& m) {
  return 0.5 * (m + m.transpose());
}

}  // namespace

ProblemInstance make_instance(GaussianClassSpec class0, GaussianClassSpec class1) {
  const int p = static_cast<int>(class0.mean.size());
  if (class1.mean.size() != p) throw ModelError("class means differ in length");
  for (const auto* spec : {&class0, &class1}) {
    check_square(spec->covariance, "covariance");
    if (spec->covariance.rows() != p) {
      throw ModelError("covariance size does not match the mean length");
    }
    check_symmetric(spec->covariance, "covariance");
    if (!(spec->prior > 0.0) || !(spec->prior < 1.0)) {
      throw ModelError("class prior must lie in (0,1)");
    }
  }
  if (std::abs(class0.prior + class1.prior - 1.0) > 1e-12) {
    throw ModelError("class priors must sum to 1");
  }
  return ProblemInstance{{std::move(class0), std::move(class1)}, p};
}

TrainingSet make_training_set(Eigen::MatrixXd samples, std::vector<int> labels) {
  if (static_cast<int>(labels.size()) != samples.cols()) {
    throw ModelError("label count does not match the number of columns");
  }
  TrainingSet out;
  out.samples = std::move(samples);
  out.labels = std::move(labels);
  for (int lab : out.labels) {
    if (lab != 0 && lab != 1) throw ModelError("labels must be 0 or 1");
    ++out.counts[lab];
  }
  if (out.n_total() - 2 < 1) {
    throw InsufficientDataError("need n - 2 >= 1 samples for the pooled covariance");
  }
  return out;
}

Eigen::MatrixXd class_block(const TrainingSet& train, int cls) {
  Eigen::MatrixXd block(train.dim(), train.counts[cls]);
  int k = 0;
  for (int j = 0; j < train.n_total(); ++j) {
    if (train.labels[j] == cls) block.col(k++) = train.samples.col(j);
  }
  return block;
}

Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& cov) {
  check_square(cov, "covariance");
  check_symmetric(cov, "covariance");
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() == Eigen::Success) {
    return Eigen::MatrixXd(llt.matrixL());
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  if (eig.info() != Eigen::Success) throw ModelError("eigendecomposition failed");
  const Eigen::VectorXd& vals = eig.eigenvalues();
  const double norm = std::max(vals.cwiseAbs().maxCoeff(), 1e-300);
  if (vals.minCoeff() < -1e-10 * norm) {
    throw ModelError("covariance is not positive semidefinite");
  }
  const Eigen::VectorXd root = vals.cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * root.asDiagonal() * eig.eigenvectors().transpose();
}

Eigen::MatrixXd sample_class(const GaussianClassSpec& spec, int count,
                             std::uint64_t seed) {
  if (count < 1) throw DomainError("sample count must be >= 1");
  if (spec.mean.size() != spec.covariance.rows()) {
    throw ModelError("mean length does not match the covariance size");
  }
  const Eigen::MatrixXd root = psd_sqrt(spec.covariance);
  const int p = static_cast<int>(spec.mean.size());
  Rng rng(seed);
  Eigen::MatrixXd z(p, count);
  for (int j = 0; j < count; ++j) {
    for (int i = 0; i < p; ++i) z(i, j) = rng.normal();
  }
  Eigen::MatrixXd out = root * z;
  out.colwise() += spec.mean;
  return out;
}

TrainingSet sample_training_set(const ProblemInstance& instance, int n0, int n1,
                                std::uint64_t seed) {
  if (n0 < 1 || n1 < 1) throw DomainError("class sample counts must be >= 1");
  TrainingSet out;
  out.samples.resize(instance.dim, n0 + n1);
  out.samples.leftCols(n0) =
      sample_class(instance.c0(), n0, derive_seed(seed, 0));
  out.samples.rightCols(n1) =
      sample_class(instance.c1(), n1, derive_seed(seed, 1));
  out.labels.assign(n0, 0);
  out.labels.insert(out.labels.end(), n1, 1);
  out.counts = {n0, n1};
  return out;
}

namespace {

struct Moments {
  std::array<Eigen::VectorXd, 2> mu_hat;
  std::array<Eigen::MatrixXd, 2> sigma_hat;
  Eigen::MatrixXd sigma_pooled;
  std::array<int, 2> n;
};

Moments compute_moments(const TrainingSet& train) {
  for (int i = 0; i < 2; ++i) {
    if (train.counts[i] < 2) {
      throw InsufficientDataError("need at least 2 samples per class");
    }
  }
  Moments m;
  m.n = train.counts;
  for (int i = 0; i < 2; ++i) {
    Eigen::MatrixXd block = class_block(train, i);
    m.mu_hat[i] = block.rowwise().mean();
    block.colwise() -= m.mu_hat[i];
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(train.dim(), train.dim());
    cov.selfadjointView<Eigen::Lower>().rankUpdate(
        block, 1.0 / static_cast<double>(train.counts[i] - 1));
    m.sigma_hat[i] = cov.selfadjointView<Eigen::Lower>();
  }
  const int n = m.n[0] + m.n[1];
  m.sigma_pooled =
      symmetrized(((m.n[0] - 1) * m.sigma_hat[0] + (m.n[1] - 1) * m.sigma_hat[1]) /
                  static_cast<double>(n - 2));
  return m;
}

void spectral_factor(const Eigen::MatrixXd& sigma, Eigen::VectorXd& evals,
                     Eigen::MatrixXd& evecs) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sigma);
  if (eig.info() != Eigen::Success) throw ModelError("eigendecomposition failed");
  evals = eig.eigenvalues().cwiseMax(0.0);
  evecs = eig.eigenvectors();
}

void finish_stats(SampleStats& s) {
  const int n = s.n[0] + s.n[1];
  s.sigma_pooled = symmetrized(
      ((s.n[0] - 1) * s.sigma_hat[0] + (s.n[1] - 1) * s.sigma_hat[1]) /
      static_cast<double>(n - 2));
  for (int i = 0; i < 2; ++i) {
    spectral_factor(s.sigma_hat[i], s.class_evals[i], s.class_evecs[i]);
  }
  spectral_factor(s.sigma_pooled, s.pooled_evals, s.pooled_evecs);
}

void verify_resolvent(const Eigen::MatrixXd& h, const Eigen::MatrixXd& sigma,
                      double gamma) {
  Eigen::MatrixXd check = h * (gamma * sigma);
  check += h;
  check.diagonal().array() -= 1.0;
  if (check.cwiseAbs().maxCoeff() > 1e-8) {
    throw ModelError(
        "resolvent verification failed: ||H(I + gamma Sigma) - I|| too large");
  }
}

// H = (I + gamma Sigma)^{-1} by Cholesky solve; the factor also yields
// log|I + gamma Sigma|.
Eigen::MatrixXd resolvent_by_cholesky(const Eigen::MatrixXd& sigma, double gamma,
                                      double* neg_log_det = nullptr) {
  const int p = static_cast<int>(sigma.rows());
  Eigen::MatrixXd m = gamma * sigma;
  m.diagonal().array() += 1.0;
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) {
    throw ModelError("Cholesky of (I + gamma Sigma) failed");
  }
  if (neg_log_det) {
    double log_det = 0.0;
    for (int i = 0; i < p; ++i) log_det += std::log(llt.matrixL()(i, i));
    *neg_log_det = -2.0 * log_det;
  }
  Eigen::MatrixXd h = llt.solve(Eigen::MatrixXd::Identity(p, p));
  return symmetrized(h);
}

// H = V diag(1/(1 + gamma lambda)) V^T
Eigen::MatrixXd resolvent_from_spectrum(const Eigen::VectorXd& evals,
                                        const Eigen::MatrixXd& evecs,
                                        double gamma) {
  const Eigen::VectorXd d =
      (1.0 + gamma * evals.array()).inverse().matrix();
  return symmetrized(evecs * d.asDiagonal() * evecs.transpose());
}

double neg_log_det_ridge(const Eigen::MatrixXd& sigma, double gamma) {
  const int p = static_cast<int>(sigma.rows());
  Eigen::MatrixXd m = gamma * sigma;
  m.diagonal().array() += 1.0;
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) {
    throw ModelError("Cholesky of (I + gamma Sigma) failed");
  }
  double log_det = 0.0;
  for (int i = 0; i < p; ++i) log_det += std::log(llt.matrixL()(i, i));
  return -2.0 * log_det;
}

}  // namespace

SampleStats compute_sample_stats(const TrainingSet& train) {
  Moments m = compute_moments(train);
  SampleStats s;
  s.mu_hat = std::move(m.mu_hat);
  s.sigma_hat = std::move(m.sigma_hat);
  s.n = m.n;
  finish_stats(s);
  return s;
}

SampleStats stats_from_moments(Eigen::VectorXd mu0, Eigen::VectorXd mu1,
                               Eigen::MatrixXd sigma0, Eigen::MatrixXd sigma1,
                               int n0, int n1) {
  if (n0 < 2 || n1 < 2) {
    throw InsufficientDataError("need at least 2 samples per class");
  }
  if (mu0.size() != mu1.size() || sigma0.rows() != mu0.size() ||
      sigma1.rows() != mu0.size()) {
    throw ModelError("moment dimensions disagree");
  }
  check_symmetric(sigma0, "sigma0");
  check_symmetric(sigma1, "sigma1");
  SampleStats s;
  s.mu_hat = {std::move(mu0), std::move(mu1)};
  s.sigma_hat = {std::move(sigma0), std::move(sigma1)};
  s.n = {n0, n1};
  finish_stats(s);
  return s;
}

FittedDA SampleStats::fit(double gamma, std::optional<Priors> priors) const {
  if (!(gamma > 0.0)) throw DomainError("gamma must be positive");
  FittedDA f;
  f.mu_hat = mu_hat;
  f.sigma_hat = sigma_hat;
  f.sigma_pooled = sigma_pooled;
  f.gamma = gamma;
  f.n = n;
  if (priors) {
    check_priors(*priors);
    f.priors = *priors;
  } else {
    const double total = static_cast<double>(n[0] + n[1]);
    f.priors = {n[0] / total, n[1] / total};
  }
  f.H = resolvent_from_spectrum(pooled_evals, pooled_evecs, gamma);
  for (int i = 0; i < 2; ++i) {
    f.H_class[i] = resolvent_from_spectrum(class_evals[i], class_evecs[i], gamma);
    f.log_det_H[i] = neg_log_det_ridge(sigma_hat[i], gamma);
  }
  verify_resolvent(f.H, sigma_pooled, gamma);
  return f;
}

FittedDA fit_statistics(const TrainingSet& train, double gamma,
                        std::optional<Priors> priors) {
  if (!(gamma > 0.0)) throw DomainError("gamma must be positive");
  Moments m = compute_moments(train);
  FittedDA f;
  f.mu_hat = std::move(m.mu_hat);
  f.sigma_hat = std::move(m.sigma_hat);
  f.sigma_pooled = std::move(m.sigma_pooled);
  f.gamma = gamma;
  f.n = m.n;
  if (priors) {
    check_priors(*priors);
    f.priors = *priors;
  } else {
    const double total = static_cast<double>(f.n[0] + f.n[1]);
    f.priors = {f.n[0] / total, f.n[1] / total};
  }
  f.H = resolvent_by_cholesky(f.sigma_pooled, gamma);
  for (int i = 0; i < 2; ++i) {
    f.H_class[i] = resolvent_by_cholesky(f.sigma_hat[i], gamma, &f.log_det_H[i]);
  }
  verify_resolvent(f.H, f.sigma_pooled, gamma);
  return f;
}

}  // namespace rda
