#include "rda/baselines.hpp"

#include <algorithm>
#include <cstring>
#include <numeric>
#include <vector>

#include "rda/classifiers.hpp"
#include "rda/rmt.hpp"
#include "rda/rng.hpp"

namespace rda {

namespace {

void check_config(const BaselineConfig& cfg) {
  if (cfg.folds < 2) throw DomainError("need at least 2 folds");
  if (cfg.repetitions < 1) throw DomainError("need at least 1 repetition");
  if (cfg.bootstrap_samples < 1) throw DomainError("need at least 1 bootstrap resample");
}

std::uint64_t fnv1a(const unsigned char* data, std::size_t size) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (std::size_t i = 0; i < size; ++i) {
    h ^= data[i];
    h *= 0x100000001B3ULL;
  }
  return h;
}

std::uint64_t column_hash(const Eigen::MatrixXd& samples, int col) {
  return fnv1a(reinterpret_cast<const unsigned char*>(samples.col(col).data()),
               sizeof(double) * samples.rows());
}

// Class-i column indices ordered by seeded content hash. Permuting the
// training columns permutes nothing here, which makes the estimators
// order-invariant for a fixed seed.
std::vector<int> hashed_order(const TrainingSet& train, int cls,
                              std::uint64_t stream_seed) {
  std::vector<std::pair<std::uint64_t, int>> keyed;
  keyed.reserve(train.counts[cls]);
  for (int j = 0; j < train.n_total(); ++j) {
    if (train.labels[j] != cls) continue;
    std::uint64_t s = column_hash(train.samples, j) ^ stream_seed;
    keyed.emplace_back(splitmix64(s), j);
  }
  std::sort(keyed.begin(), keyed.end());
  std::vector<int> order(keyed.size());
  for (std::size_t k = 0; k < keyed.size(); ++k) order[k] = keyed[k].second;
  return order;
}

TrainingSet subset(const TrainingSet& train, const std::vector<int>& cols) {
  TrainingSet out;
  out.samples.resize(train.dim(), static_cast<int>(cols.size()));
  out.labels.resize(cols.size());
  int k = 0;
  for (int j : cols) {
    out.samples.col(k) = train.samples.col(j);
    out.labels[k] = train.labels[j];
    ++out.counts[train.labels[j]];
    ++k;
  }
  return out;
}

std::array<double, 2> per_class_error(const FittedDA& fit, Classifier kind,
                                      const TrainingSet& test, const Priors& priors) {
  const Eigen::VectorXd scores = score_batch(fit, kind, test.samples, priors);
  std::array<int, 2> wrong{0, 0};
  for (int j = 0; j < test.n_total(); ++j) {
    if (classify(scores[j]) != test.labels[j]) ++wrong[test.labels[j]];
  }
  return {wrong[0] / std::max(1.0, double(test.counts[0])),
          wrong[1] / std::max(1.0, double(test.counts[1]))};
}

Priors training_fractions(const TrainingSet& train) {
  const double n = train.n_total();
  return {train.counts[0] / n, train.counts[1] / n};
}

}  // namespace

ErrorReport cv_error(const TrainingSet& train, double gamma, Classifier kind,
                     const BaselineConfig& cfg, std::uint64_t seed) {
  check_config(cfg);
  for (int i = 0; i < 2; ++i) {
    if (train.counts[i] < cfg.folds) {
      throw InsufficientDataError("a class has fewer samples than folds");
    }
  }
  const Priors priors = training_fractions(train);
  std::array<double, 2> err_sum{0.0, 0.0};
  for (int rep = 0; rep < cfg.repetitions; ++rep) {
    std::array<std::vector<int>, 2> order;
    for (int cls = 0; cls < 2; ++cls) {
      order[cls] = hashed_order(train, cls, derive_seed(seed, 2 * rep + cls));
    }
    std::array<int, 2> wrong{0, 0};
    for (int fold = 0; fold < cfg.folds; ++fold) {
      std::vector<int> train_cols, test_cols;
      for (int cls = 0; cls < 2; ++cls) {
        for (int k = 0; k < static_cast<int>(order[cls].size()); ++k) {
          (k % cfg.folds == fold ? test_cols : train_cols)
              .push_back(order[cls][k]);
        }
      }
      const TrainingSet fold_train = subset(train, train_cols);
      const TrainingSet fold_test = subset(train, test_cols);
      const FittedDA fit = fit_statistics(fold_train, gamma, priors);
      const Eigen::VectorXd scores =
          score_batch(fit, kind, fold_test.samples, priors);
      for (int j = 0; j < fold_test.n_total(); ++j) {
        if (classify(scores[j]) != fold_test.labels[j]) ++wrong[fold_test.labels[j]];
      }
    }
    for (int i = 0; i < 2; ++i) {
      err_sum[i] += static_cast<double>(wrong[i]) / train.counts[i];
    }
  }
  ErrorReport report;
  report.kind = kind;
  report.method = ErrorMethod::CV;
  for (int i = 0; i < 2; ++i) report.per_class[i] = err_sum[i] / cfg.repetitions;
  report.total = priors[0] * report.per_class[0] + priors[1] * report.per_class[1];
  return report;
}

BootstrapResult bootstrap_error(const TrainingSet& train, double gamma,
                                Classifier kind, const BaselineConfig& cfg,
                                std::uint64_t seed) {
  check_config(cfg);
  const Priors priors = training_fractions(train);

  const FittedDA full_fit = fit_statistics(train, gamma, priors);
  const std::array<double, 2> resub = per_class_error(full_fit, kind, train, priors);

  std::array<std::vector<int>, 2> order;
  for (int cls = 0; cls < 2; ++cls) {
    order[cls] = hashed_order(train, cls, derive_seed(seed, 1000003 + cls));
  }

  std::array<double, 2> oob_sum{0.0, 0.0};
  for (int b = 0; b < cfg.bootstrap_samples; ++b) {
    Rng rng(derive_seed(seed, 2000003 + b));
    std::vector<int> bag;
    std::vector<int> oob;
    for (int attempt = 0;; ++attempt) {
      bag.clear();
      oob.clear();
      bool ok = true;
      for (int cls = 0; cls < 2; ++cls) {
        const int n_cls = static_cast<int>(order[cls].size());
        std::vector<char> drawn(n_cls, 0);
        for (int k = 0; k < n_cls; ++k) {
          const int pick = static_cast<int>(rng.uniform_below(n_cls));
          bag.push_back(order[cls][pick]);
          drawn[pick] = 1;
        }
        int held_out = 0;
        for (int k = 0; k < n_cls; ++k) {
          if (!drawn[k]) {
            oob.push_back(order[cls][k]);
            ++held_out;
          }
        }
        if (held_out < 2) ok = false;
      }
      if (ok) break;
      if (attempt >= 100) {
        throw InsufficientDataError(
            "bootstrap resampling kept exhausting a class's out-of-bag set");
      }
    }
    const TrainingSet bag_set = subset(train, bag);
    const TrainingSet oob_set = subset(train, oob);
    const FittedDA fit = fit_statistics(bag_set, gamma, priors);
    const std::array<double, 2> err = per_class_error(fit, kind, oob_set, priors);
    for (int i = 0; i < 2; ++i) oob_sum[i] += err[i];
  }

  std::array<double, 2> oob{oob_sum[0] / cfg.bootstrap_samples,
                            oob_sum[1] / cfg.bootstrap_samples};

  BootstrapResult out;
  out.err_resub = priors[0] * resub[0] + priors[1] * resub[1];
  out.err_oob = priors[0] * oob[0] + priors[1] * oob[1];
  out.no_info_rate =
      priors[0] * (1.0 - priors[0]) + priors[1] * (1.0 - priors[1]);

  double r = 0.0;
  if (out.err_oob > out.err_resub && out.no_info_rate > out.err_resub) {
    r = (out.err_oob - out.err_resub) / (out.no_info_rate - out.err_resub);
  }
  out.overfit_r = std::clamp(r, 0.0, 1.0);
  out.weight = 0.632 / (1.0 - 0.368 * out.overfit_r);

  out.b632.kind = kind;
  out.b632.method = ErrorMethod::B632;
  out.b632plus.kind = kind;
  out.b632plus.method = ErrorMethod::B632Plus;
  for (int i = 0; i < 2; ++i) {
    out.b632.per_class[i] = 0.368 * resub[i] + 0.632 * oob[i];
    out.b632plus.per_class[i] =
        (1.0 - out.weight) * resub[i] + out.weight * oob[i];
  }
  out.b632.total = priors[0] * out.b632.per_class[0] + priors[1] * out.b632.per_class[1];
  out.b632plus.total =
      priors[0] * out.b632plus.per_class[0] + priors[1] * out.b632plus.per_class[1];
  return out;
}

ErrorReport plugin_error(const FittedDA& fit, Classifier kind, const Priors& priors) {
  check_priors(priors);
  const ProblemInstance plugged = make_instance(
      GaussianClassSpec{fit.mu_hat[0], fit.sigma_hat[0], priors[0]},
      GaussianClassSpec{fit.mu_hat[1], fit.sigma_hat[1], priors[1]});
  ErrorReport report;
  report.kind = kind;
  report.method = ErrorMethod::Plugin;
  if (kind == Classifier::RLDA) {
    const LdaEquivalents eq =
        lda_deterministic_error(plugged, fit.n[0], fit.n[1], fit.gamma, priors);
    report.per_class = eq.eps;
    report.total = eq.eps_total;
  } else {
    const QdaEquivalents eq =
        qda_deterministic_error(plugged, fit.n[0], fit.n[1], fit.gamma, priors);
    report.per_class = eq.eps;
    report.total = eq.eps_total;
  }
  return report;
}

}  // namespace rda
