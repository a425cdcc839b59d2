#include "rda/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "rda/classifiers.hpp"
#include "rda/g_estimators.hpp"
#include "rda/libsvm.hpp"
#include "rda/rmt.hpp"
#include "rda/rng.hpp"

namespace rda {

using nlohmann::json;

ProblemInstance build_synthetic(const SyntheticGeometry& geom) {
  if (geom.p < 2) throw DomainError("need p >= 2");
  if (std::abs(geom.toeplitz_ratio) >= 1.0) {
    throw DomainError("|toeplitz_ratio| must be < 1");
  }
  const int p = geom.p;
  Eigen::MatrixXd sigma0(p, p);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) {
      sigma0(i, j) = std::pow(geom.toeplitz_ratio, std::abs(i - j));
    }
  }
  Eigen::MatrixXd sigma1 = sigma0;
  const int spikes = static_cast<int>(std::ceil(std::sqrt(double(p))));
  for (int i = 0; i < spikes; ++i) sigma1(i, i) += geom.spike_scale;

  Eigen::VectorXd mu0 = Eigen::VectorXd::Zero(p);
  mu0[0] = 1.0;
  Eigen::VectorXd mu1 =
      mu0 + Eigen::VectorXd::Constant(p, geom.mean_shift / std::sqrt(double(p)));

  return make_instance(GaussianClassSpec{mu0, sigma0, geom.prior0},
                       GaussianClassSpec{mu1, sigma1, 1.0 - geom.prior0});
}

std::vector<double> parse_gamma_spec(const std::string& spec) {
  auto parse_positive = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw DomainError("bad gamma value '" + s + "'");
    }
    if (used != s.size() || !(v > 0.0)) {
      throw DomainError("bad gamma value '" + s + "'");
    }
    return v;
  };
  if (spec.rfind("log:", 0) == 0 || spec.rfind("lin:", 0) == 0) {
    std::vector<std::string> parts;
    std::stringstream in(spec);
    std::string tok;
    while (std::getline(in, tok, ':')) parts.push_back(tok);
    if (parts.size() != 4) {
      throw DomainError("grid spec must be log:lo:hi:count or lin:lo:hi:count");
    }
    const double lo = parse_positive(parts[1]);
    const double hi = parse_positive(parts[2]);
    int count = 0;
    try {
      count = std::stoi(parts[3]);
    } catch (const std::exception&) {
      throw DomainError("bad grid count '" + parts[3] + "'");
    }
    if (!(hi > lo) || count < 2) throw DomainError("grid spec needs lo < hi, count >= 2");
    std::vector<double> grid(count);
    if (parts[0] == "log") {
      const double step = (std::log(hi) - std::log(lo)) / (count - 1);
      for (int k = 0; k < count; ++k) grid[k] = std::exp(std::log(lo) + k * step);
    } else {
      for (int k = 0; k < count; ++k) grid[k] = lo + (hi - lo) * k / (count - 1);
    }
    grid.front() = lo;
    grid.back() = hi;
    return grid;
  }
  std::vector<double> grid;
  std::stringstream in(spec);
  std::string tok;
  while (std::getline(in, tok, ',')) grid.push_back(parse_positive(tok));
  if (grid.empty()) throw DomainError("empty gamma spec");
  return grid;
}

std::string method_name(ErrorMethod method) {
  switch (method) {
    case ErrorMethod::Empirical: return "empirical";
    case ErrorMethod::Exact: return "exact";
    case ErrorMethod::Deterministic: return "deterministic";
    case ErrorMethod::GEstimate: return "g";
    case ErrorMethod::CV: return "cv";
    case ErrorMethod::B632: return "b632";
    case ErrorMethod::B632Plus: return "b632plus";
    case ErrorMethod::Plugin: return "plugin";
  }
  return "?";
}

std::string classifier_name(Classifier kind) {
  return kind == Classifier::RLDA ? "rlda" : "rqda";
}

RunMeta make_run_meta(const std::string& command, std::uint64_t seed) {
  RunMeta meta;
  meta.command = command;
  meta.seed = seed;
  const std::time_t now = std::time(nullptr);
  char buf[32];
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  meta.timestamp = buf;
  return meta;
}

std::string format_double(double value) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

// ---------------------------------------------------------------------------
// config file

namespace {

ErrorMethod method_from_name(const std::string& name, int line) {
  if (name == "g") return ErrorMethod::GEstimate;
  if (name == "plugin") return ErrorMethod::Plugin;
  if (name == "cv") return ErrorMethod::CV;
  if (name == "b632") return ErrorMethod::B632;
  if (name == "b632plus") return ErrorMethod::B632Plus;
  if (name == "empirical") return ErrorMethod::Empirical;
  throw ParseError("unknown estimator '" + name + "'", line);
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double to_double(const std::string& value, int line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ParseError("expected a number, got '" + value + "'", line);
  }
}

int to_int(const std::string& value, int line) {
  const double v = to_double(value, line);
  if (v != std::floor(v)) throw ParseError("expected an integer, got '" + value + "'", line);
  return static_cast<int>(v);
}

}  // namespace

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config '" + path + "'");
  ExperimentConfig config;
  SyntheticGeometry geom;
  DatasetPaths data;
  bool saw_data = false;
  bool saw_classifiers = false;

  std::string section;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError("unterminated section header", line_no);
      section = trim(line.substr(1, line.size() - 2));
      if (section != "geometry" && section != "data" && section != "sweep" &&
          section != "tune" && section != "run") {
        throw ParseError("unknown section [" + section + "]", line_no);
      }
      if (section == "data") saw_data = true;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected key = value", line_no);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty()) throw ParseError("key outside any section", line_no);

    if (section == "geometry") {
      if (key == "p") geom.p = to_int(value, line_no);
      else if (key == "n0") geom.n0 = to_int(value, line_no);
      else if (key == "n1") geom.n1 = to_int(value, line_no);
      else if (key == "toeplitz_ratio") geom.toeplitz_ratio = to_double(value, line_no);
      else if (key == "spike_scale") geom.spike_scale = to_double(value, line_no);
      else if (key == "mean_shift") geom.mean_shift = to_double(value, line_no);
      else if (key == "prior0") geom.prior0 = to_double(value, line_no);
      else throw ParseError("unknown geometry key '" + key + "'", line_no);
    } else if (section == "data") {
      if (key == "train") data.train_path = value;
      else if (key == "test") data.test_path = value;
      else if (key == "digits") {
        std::stringstream ss(value);
        std::string a, b;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b) || !trim(a).size() ||
            !trim(b).size()) {
          throw ParseError("digits must be 'a,b'", line_no);
        }
        data.label0 = to_double(trim(a), line_no);
        data.label1 = to_double(trim(b), line_no);
      } else if (key == "n0") data.n0 = to_int(value, line_no);
      else if (key == "n1") data.n1 = to_int(value, line_no);
      else if (key == "features") data.min_features = to_int(value, line_no);
      else throw ParseError("unknown data key '" + key + "'", line_no);
    } else if (section == "sweep") {
      if (key == "gamma") config.gamma_grid = parse_gamma_spec(value);
      else if (key == "trials") config.trials = to_int(value, line_no);
      else if (key == "test_size") config.test_size = to_int(value, line_no);
      else if (key == "estimators") {
        config.estimators.clear();
        std::stringstream ss(value);
        std::string name;
        while (std::getline(ss, name, ',')) {
          config.estimators.push_back(method_from_name(trim(name), line_no));
        }
      } else if (key == "folds") config.baseline.folds = to_int(value, line_no);
      else if (key == "repetitions") config.baseline.repetitions = to_int(value, line_no);
      else if (key == "bootstrap_samples") {
        config.baseline.bootstrap_samples = to_int(value, line_no);
      } else throw ParseError("unknown sweep key '" + key + "'", line_no);
    } else if (section == "tune") {
      if (key == "lo") config.tune_lo = to_double(value, line_no);
      else if (key == "hi") config.tune_hi = to_double(value, line_no);
      else if (key == "grid") config.tune_grid = to_int(value, line_no);
      else if (key == "validation") {
        if (value == "cv") config.tune_use_cv = true;
        else if (value == "holdout") config.tune_use_cv = false;
        else throw ParseError("validation must be cv or holdout", line_no);
      } else if (key == "holdout_size") config.holdout_size = to_int(value, line_no);
      else throw ParseError("unknown tune key '" + key + "'", line_no);
    } else if (section == "run") {
      if (key == "seed") config.seed = static_cast<std::uint64_t>(to_double(value, line_no));
      else if (key == "classifier") {
        saw_classifiers = true;
        if (value == "rlda") config.classifiers = {Classifier::RLDA};
        else if (value == "rqda") config.classifiers = {Classifier::RQDA};
        else if (value == "both") {
          config.classifiers = {Classifier::RLDA, Classifier::RQDA};
        } else throw ParseError("classifier must be rlda, rqda or both", line_no);
      } else if (key == "out") config.out_path = value;
      else if (key == "format") {
        if (value != "csv" && value != "json") {
          throw ParseError("format must be csv or json", line_no);
        }
        config.format = value;
      } else throw ParseError("unknown run key '" + key + "'", line_no);
    }
  }
  (void)saw_classifiers;
  if (saw_data) {
    if (data.train_path.empty()) throw Error("config: [data] needs train = <path>");
    config.geometry = data;
  } else {
    config.geometry = geom;
  }
  if (config.trials < 1) throw DomainError("trials must be >= 1");
  if (config.gamma_grid.empty()) throw DomainError("gamma grid must be nonempty");
  return config;
}

// ---------------------------------------------------------------------------
// experiment drivers

namespace {

Priors config_priors(const ExperimentConfig& config) {
  if (config.synthetic()) {
    const auto& geom = std::get<SyntheticGeometry>(config.geometry);
    return {geom.prior0, 1.0 - geom.prior0};
  }
  const auto& data = std::get<DatasetPaths>(config.geometry);
  const double n = data.n0 + data.n1;
  return {data.n0 / n, data.n1 / n};
}

void pad_rows(Eigen::MatrixXd& m, int rows) {
  if (m.rows() >= rows) return;
  Eigen::MatrixXd padded = Eigen::MatrixXd::Zero(rows, m.cols());
  padded.topRows(m.rows()) = m;
  m = std::move(padded);
}

// Pools for real-data trials: class columns of the train file plus the truth
// test set (the test file, or the unused remainder of the train file).
struct DataPool {
  TrainingSet pool;
  std::optional<TrainingSet> test;  // fixed test set if a file was given

  std::array<std::vector<int>, 2> class_cols;
};

DataPool load_pool(const DatasetPaths& data) {
  DataPool out;
  LibsvmData train_raw = load_libsvm_file(data.train_path, data.min_features);
  if (!data.test_path.empty()) {
    LibsvmData test_raw = load_libsvm_file(data.test_path, data.min_features);
    const int p = std::max(train_raw.features.rows(), test_raw.features.rows());
    pad_rows(train_raw.features, p);
    pad_rows(test_raw.features, p);
    out.test = select_label_pair(test_raw, data.label0, data.label1);
  }
  out.pool = select_label_pair(train_raw, data.label0, data.label1);
  for (int j = 0; j < out.pool.n_total(); ++j) {
    out.class_cols[out.pool.labels[j]].push_back(j);
  }
  for (int i = 0; i < 2; ++i) {
    const int need = i == 0 ? data.n0 : data.n1;
    if (static_cast<int>(out.class_cols[i].size()) < need + (out.test ? 0 : 1)) {
      throw InsufficientDataError("train file has too few samples of a class");
    }
  }
  return out;
}

// Per-trial subset of the pool (and the remainder when no test file exists).
std::pair<TrainingSet, TrainingSet> draw_subset(const DataPool& pool,
                                                const DatasetPaths& data,
                                                std::uint64_t seed) {
  Rng rng(seed);
  std::vector<int> chosen, rest;
  for (int cls = 0; cls < 2; ++cls) {
    std::vector<int> cols = pool.class_cols[cls];
    for (int k = static_cast<int>(cols.size()) - 1; k > 0; --k) {
      std::swap(cols[k], cols[rng.uniform_below(k + 1)]);
    }
    const int need = cls == 0 ? data.n0 : data.n1;
    chosen.insert(chosen.end(), cols.begin(), cols.begin() + need);
    rest.insert(rest.end(), cols.begin() + need, cols.end());
  }
  std::sort(chosen.begin(), chosen.end());
  std::sort(rest.begin(), rest.end());
  auto take = [&](const std::vector<int>& cols) {
    Eigen::MatrixXd m(pool.pool.dim(), static_cast<int>(cols.size()));
    std::vector<int> labels(cols.size());
    for (std::size_t k = 0; k < cols.size(); ++k) {
      m.col(static_cast<int>(k)) = pool.pool.samples.col(cols[k]);
      labels[k] = pool.pool.labels[cols[k]];
    }
    return make_training_set(std::move(m), std::move(labels));
  };
  return {take(chosen), take(rest)};
}

struct TrialContext {
  TrainingSet train;
  TrainingSet truth_test;
};

TrialContext make_trial(const ExperimentConfig& config,
                        const ProblemInstance* instance, const DataPool* pool,
                        int trial) {
  const std::uint64_t tseed = derive_seed(config.seed, trial);
  TrialContext ctx;
  if (instance) {
    const auto& geom = std::get<SyntheticGeometry>(config.geometry);
    ctx.train = sample_training_set(*instance, geom.n0, geom.n1,
                                    derive_seed(tseed, 10));
    ctx.truth_test = sample_training_set(*instance, config.test_size,
                                         config.test_size, derive_seed(tseed, 11));
  } else {
    const auto& data = std::get<DatasetPaths>(config.geometry);
    auto [train, rest] = draw_subset(*pool, data, derive_seed(tseed, 14));
    ctx.train = std::move(train);
    ctx.truth_test = pool->test ? *pool->test : std::move(rest);
  }
  return ctx;
}

std::optional<double> run_estimator(const ExperimentConfig& config,
                                    ErrorMethod method, Classifier kind,
                                    const TrialContext& ctx, const FittedDA& fit,
                                    const Priors& priors, double gamma,
                                    std::uint64_t tseed,
                                    std::optional<BootstrapResult>& boot_cache) {
  try {
    switch (method) {
      case ErrorMethod::GEstimate:
        return g_estimate(fit, kind, priors).total;
      case ErrorMethod::Plugin:
        return plugin_error(fit, kind, priors).total;
      case ErrorMethod::CV:
        return cv_error(ctx.train, gamma, kind, config.baseline,
                        derive_seed(tseed, 12))
            .total;
      case ErrorMethod::B632:
      case ErrorMethod::B632Plus: {
        if (!boot_cache) {
          boot_cache = bootstrap_error(ctx.train, gamma, kind, config.baseline,
                                       derive_seed(tseed, 13));
        }
        return method == ErrorMethod::B632 ? boot_cache->b632.total
                                           : boot_cache->b632plus.total;
      }
      case ErrorMethod::Empirical:
        return empirical_error(fit, kind, ctx.truth_test, priors).total;
      default:
        throw DomainError("method not usable as a per-trial estimator");
    }
  } catch (const EstimatorBreakdownError&) {
  } catch (const SolverError&) {
  } catch (const DegenerateVarianceError&) {
  }
  return std::nullopt;
}

}  // namespace

RmsExperimentResult run_rms_experiment(const ExperimentConfig& config) {
  const Priors priors = config_priors(config);
  const double gamma = config.gamma_grid.front();

  std::optional<ProblemInstance> instance;
  std::optional<DataPool> pool;
  if (config.synthetic()) {
    instance = build_synthetic(std::get<SyntheticGeometry>(config.geometry));
  } else {
    pool = load_pool(std::get<DatasetPaths>(config.geometry));
  }

  RmsExperimentResult result;
  result.classifiers = config.classifiers;
  result.estimators = config.estimators;

  struct Accum {
    std::vector<double> diffs;
    int skipped = 0;
  };
  std::map<std::pair<int, int>, Accum> accum;  // (kind idx, method idx)

  for (int trial = 0; trial < config.trials; ++trial) {
    const std::uint64_t tseed = derive_seed(config.seed, trial);
    const TrialContext ctx = make_trial(
        config, instance ? &*instance : nullptr, pool ? &*pool : nullptr, trial);
    const FittedDA fit = fit_statistics(ctx.train, gamma, priors);

    for (std::size_t ki = 0; ki < config.classifiers.size(); ++ki) {
      const Classifier kind = config.classifiers[ki];
      double truth;
      if (instance && kind == Classifier::RLDA) {
        truth = exact_error_rlda(fit, *instance, priors).total;
      } else {
        truth = empirical_error(fit, kind, ctx.truth_test, priors).total;
      }
      TrialRow row;
      row.trial = trial;
      row.kind = kind;
      row.truth = truth;
      std::optional<BootstrapResult> boot_cache;
      for (std::size_t mi = 0; mi < config.estimators.size(); ++mi) {
        const auto estimate =
            run_estimator(config, config.estimators[mi], kind, ctx, fit, priors,
                          gamma, tseed, boot_cache);
        row.estimates.push_back(estimate);
        auto& cell = accum[{static_cast<int>(ki), static_cast<int>(mi)}];
        if (estimate) {
          cell.diffs.push_back(*estimate - truth);
        } else {
          ++cell.skipped;
        }
      }
      result.trials.push_back(std::move(row));
    }
  }

  for (std::size_t ki = 0; ki < config.classifiers.size(); ++ki) {
    for (std::size_t mi = 0; mi < config.estimators.size(); ++mi) {
      const auto& cell = accum[{static_cast<int>(ki), static_cast<int>(mi)}];
      result.summary.push_back(summarize_rms(config.classifiers[ki],
                                             config.estimators[mi], cell.diffs,
                                             cell.skipped));
    }
  }
  return result;
}

RmsRow summarize_rms(Classifier kind, ErrorMethod method,
                     const std::vector<double>& diffs, int skipped) {
  RmsRow row;
  row.kind = kind;
  row.method = method;
  row.used_trials = static_cast<int>(diffs.size());
  row.skipped = skipped;
  if (!diffs.empty()) {
    double mean = 0.0;
    for (double d : diffs) mean += d;
    mean /= diffs.size();
    double var = 0.0;
    for (double d : diffs) var += (d - mean) * (d - mean);
    var /= diffs.size();
    row.bias = mean;
    row.variance = var;
    row.rms = std::sqrt(mean * mean + var);
  }
  return row;
}

std::vector<SweepRow> run_gamma_sweep(const ExperimentConfig& config) {
  const Priors priors = config_priors(config);

  std::optional<ProblemInstance> instance;
  std::optional<DataPool> pool;
  std::array<std::optional<CovSpectrum>, 2> spectra;
  if (config.synthetic()) {
    instance = build_synthetic(std::get<SyntheticGeometry>(config.geometry));
    spectra[0] = cov_spectrum(instance->cls[0].covariance);
    spectra[1] = cov_spectrum(instance->cls[1].covariance);
  } else {
    pool = load_pool(std::get<DatasetPaths>(config.geometry));
  }

  const auto& grid = config.gamma_grid;
  const int n_gamma = static_cast<int>(grid.size());

  struct Cell {
    double sum = 0.0;
    int used = 0;
  };
  // (gamma idx, kind idx, method idx) -> average accumulator
  std::map<std::tuple<int, int, int>, Cell> cells;

  std::vector<ErrorMethod> methods{ErrorMethod::Empirical};
  for (ErrorMethod m : config.estimators) {
    if (m != ErrorMethod::Empirical) methods.push_back(m);
  }

  for (int trial = 0; trial < config.trials; ++trial) {
    const std::uint64_t tseed = derive_seed(config.seed, trial);
    const TrialContext ctx = make_trial(
        config, instance ? &*instance : nullptr, pool ? &*pool : nullptr, trial);
    const SampleStats stats = compute_sample_stats(ctx.train);
    for (int gi = 0; gi < n_gamma; ++gi) {
      const FittedDA fit = stats.fit(grid[gi], priors);
      for (std::size_t ki = 0; ki < config.classifiers.size(); ++ki) {
        const Classifier kind = config.classifiers[ki];
        std::optional<BootstrapResult> boot_cache;
        for (std::size_t mi = 0; mi < methods.size(); ++mi) {
          const auto value = run_estimator(config, methods[mi], kind, ctx, fit,
                                           priors, grid[gi], tseed, boot_cache);
          if (value) {
            auto& cell = cells[{gi, static_cast<int>(ki), static_cast<int>(mi)}];
            cell.sum += *value;
            ++cell.used;
          }
        }
      }
    }
  }

  std::vector<SweepRow> rows;
  for (int gi = 0; gi < n_gamma; ++gi) {
    for (std::size_t ki = 0; ki < config.classifiers.size(); ++ki) {
      const Classifier kind = config.classifiers[ki];
      if (instance) {
        SweepRow det;
        det.gamma = grid[gi];
        det.kind = kind;
        det.method = ErrorMethod::Deterministic;
        const auto& geom = std::get<SyntheticGeometry>(config.geometry);
        if (kind == Classifier::RLDA) {
          det.value = lda_deterministic_error(*instance, geom.n0, geom.n1,
                                              grid[gi], priors)
                          .eps_total;
        } else {
          det.value = qda_deterministic_error(*instance, {*spectra[0], *spectra[1]},
                                              geom.n0, geom.n1, grid[gi], priors)
                          .eps_total;
        }
        det.used_trials = config.trials;
        rows.push_back(det);
      }
      for (std::size_t mi = 0; mi < methods.size(); ++mi) {
        const auto& cell = cells[{gi, static_cast<int>(ki), static_cast<int>(mi)}];
        SweepRow row;
        row.gamma = grid[gi];
        row.kind = kind;
        row.method = methods[mi];
        row.value = cell.used > 0 ? cell.sum / cell.used : 0.0;
        row.used_trials = cell.used;
        rows.push_back(row);
      }
    }
  }
  return rows;
}

std::vector<TuneOutcome> run_tune(const ExperimentConfig& config) {
  std::vector<TuneOutcome> outcomes;
  TrainingSet train;
  std::optional<ValidationSpec> validation;

  if (config.synthetic()) {
    const auto& geom = std::get<SyntheticGeometry>(config.geometry);
    const ProblemInstance instance = build_synthetic(geom);
    train = sample_training_set(instance, geom.n0, geom.n1,
                                derive_seed(config.seed, 100));
    if (config.tune_use_cv) {
      validation = CvValidation{config.baseline, derive_seed(config.seed, 102)};
    } else {
      validation = ValidationSpec{sample_training_set(
          instance, config.holdout_size, config.holdout_size,
          derive_seed(config.seed, 101))};
    }
  } else {
    const auto& data = std::get<DatasetPaths>(config.geometry);
    const DataPool pool = load_pool(data);
    auto [subset, rest] = draw_subset(pool, data, derive_seed(config.seed, 100));
    train = std::move(subset);
    if (config.tune_use_cv) {
      validation = CvValidation{config.baseline, derive_seed(config.seed, 102)};
    } else {
      validation = ValidationSpec{pool.test ? *pool.test : std::move(rest)};
    }
  }

  for (Classifier kind : config.classifiers) {
    TuneOutcome outcome;
    outcome.kind = kind;
    outcome.result =
        two_stage_optimize(train, kind, *validation, config.tune_lo,
                           config.tune_hi, config.tune_grid, &outcome.stage1);
    outcomes.push_back(std::move(outcome));
  }
  return outcomes;
}

// ---------------------------------------------------------------------------
// emission

namespace {

std::string meta_line(const RunMeta& meta) {
  return "# command=" + meta.command + " seed=" + std::to_string(meta.seed) +
         " timestamp=" + meta.timestamp + "\n";
}

json config_to_json(const ExperimentConfig& config) {
  json j;
  if (config.synthetic()) {
    const auto& geom = std::get<SyntheticGeometry>(config.geometry);
    j["geometry"] = {{"p", geom.p},
                     {"n0", geom.n0},
                     {"n1", geom.n1},
                     {"toeplitz_ratio", geom.toeplitz_ratio},
                     {"spike_scale", geom.spike_scale},
                     {"mean_shift", geom.mean_shift},
                     {"prior0", geom.prior0}};
  } else {
    const auto& data = std::get<DatasetPaths>(config.geometry);
    j["data"] = {{"train", data.train_path}, {"test", data.test_path},
                 {"label0", data.label0},    {"label1", data.label1},
                 {"n0", data.n0},            {"n1", data.n1}};
  }
  j["gamma"] = config.gamma_grid;
  j["trials"] = config.trials;
  j["test_size"] = config.test_size;
  j["seed"] = config.seed;
  std::vector<std::string> classifiers, estimators;
  for (Classifier kind : config.classifiers) classifiers.push_back(classifier_name(kind));
  for (ErrorMethod m : config.estimators) estimators.push_back(method_name(m));
  j["classifiers"] = classifiers;
  j["estimators"] = estimators;
  return j;
}

json meta_to_json(const RunMeta& meta) {
  return json{{"command", meta.command},
              {"seed", meta.seed},
              {"timestamp", meta.timestamp}};
}

}  // namespace

std::string rms_to_csv(const RmsExperimentResult& result, const RunMeta& meta) {
  std::string out = meta_line(meta);
  out +=
      "record,trial,classifier,method,truth,estimate,bias,variance,rms,"
      "used_trials,skipped\n";
  for (const RmsRow& row : result.summary) {
    out += "summary,," + classifier_name(row.kind) + "," + method_name(row.method) +
           ",,," + format_double(row.bias) + "," + format_double(row.variance) +
           "," + format_double(row.rms) + "," + std::to_string(row.used_trials) +
           "," + std::to_string(row.skipped) + "\n";
  }
  for (const TrialRow& row : result.trials) {
    for (std::size_t mi = 0; mi < result.estimators.size(); ++mi) {
      out += "trial," + std::to_string(row.trial) + "," +
             classifier_name(row.kind) + "," +
             method_name(result.estimators[mi]) + "," +
             format_double(row.truth) + "," +
             (row.estimates[mi] ? format_double(*row.estimates[mi]) : "") +
             ",,,,,\n";
    }
  }
  return out;
}

std::string rms_to_json(const RmsExperimentResult& result, const RunMeta& meta,
                        const ExperimentConfig& config) {
  json summary = json::array();
  for (const RmsRow& row : result.summary) {
    summary.push_back({{"classifier", classifier_name(row.kind)},
                       {"method", method_name(row.method)},
                       {"bias", row.bias},
                       {"variance", row.variance},
                       {"rms", row.rms},
                       {"used_trials", row.used_trials},
                       {"skipped", row.skipped}});
  }
  json trials = json::array();
  for (const TrialRow& row : result.trials) {
    json estimates = json::object();
    for (std::size_t mi = 0; mi < result.estimators.size(); ++mi) {
      if (row.estimates[mi]) {
        estimates[method_name(result.estimators[mi])] = *row.estimates[mi];
      } else {
        estimates[method_name(result.estimators[mi])] = nullptr;
      }
    }
    trials.push_back({{"trial", row.trial},
                      {"classifier", classifier_name(row.kind)},
                      {"truth", row.truth},
                      {"estimates", estimates}});
  }
  const json j{{"meta", meta_to_json(meta)},
               {"config", config_to_json(config)},
               {"summary", summary},
               {"trials", trials}};
  return j.dump(2) + "\n";
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows, const RunMeta& meta) {
  std::string out = meta_line(meta);
  out += "gamma,classifier,method,error,used_trials\n";
  for (const SweepRow& row : rows) {
    out += format_double(row.gamma) + "," + classifier_name(row.kind) + "," +
           method_name(row.method) + "," + format_double(row.value) + "," +
           std::to_string(row.used_trials) + "\n";
  }
  return out;
}

std::string sweep_to_json(const std::vector<SweepRow>& rows, const RunMeta& meta,
                          const ExperimentConfig& config) {
  json trials = json::array();
  for (const SweepRow& row : rows) {
    trials.push_back({{"gamma", row.gamma},
                      {"classifier", classifier_name(row.kind)},
                      {"method", method_name(row.method)},
                      {"error", row.value},
                      {"used_trials", row.used_trials}});
  }
  json summary = json::object();
  summary["rows"] = trials.size();
  const json j{{"meta", meta_to_json(meta)},
               {"config", config_to_json(config)},
               {"summary", summary},
               {"trials", trials}};
  return j.dump(2) + "\n";
}

std::string tune_to_csv(const std::vector<TuneOutcome>& outcomes,
                        const RunMeta& meta) {
  std::string out = meta_line(meta);
  out +=
      "classifier,stage,gamma_star,objective,interval_lo,interval_hi,"
      "evaluations\n";
  for (const TuneOutcome& outcome : outcomes) {
    const auto emit = [&](const char* stage, const TuningResult& r) {
      out += classifier_name(outcome.kind) + std::string(",") + stage + "," +
             format_double(r.gamma_star) + "," +
             format_double(r.objective_at_star) + "," +
             format_double(r.search_interval.first) + "," +
             format_double(r.search_interval.second) + "," +
             std::to_string(r.grid_values.size()) + "\n";
    };
    emit("estimator", outcome.stage1);
    emit("two_stage", outcome.result);
  }
  return out;
}

std::string tune_to_json(const std::vector<TuneOutcome>& outcomes,
                         const RunMeta& meta, const ExperimentConfig& config) {
  json summary = json::array();
  for (const TuneOutcome& outcome : outcomes) {
    const auto stage_json = [](const TuningResult& r) {
      json grid = json::array();
      for (const auto& [gamma, value] : r.grid_values) {
        grid.push_back({{"gamma", gamma}, {"objective", value}});
      }
      return json{{"gamma_star", r.gamma_star},
                  {"objective", r.objective_at_star},
                  {"interval", {r.search_interval.first, r.search_interval.second}},
                  {"evaluations", grid}};
    };
    summary.push_back({{"classifier", classifier_name(outcome.kind)},
                       {"estimator_stage", stage_json(outcome.stage1)},
                       {"two_stage", stage_json(outcome.result)}});
  }
  const json j{{"meta", meta_to_json(meta)},
               {"config", config_to_json(config)},
               {"summary", summary},
               {"trials", json::array()}};
  return j.dump(2) + "\n";
}

void write_report(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw Error("cannot open '" + out_path + "' for writing");
  out << content;
  if (!out) throw Error("write to '" + out_path + "' failed");
}

}  // namespace rda
