#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rda/baselines.hpp"
#include "rda/model.hpp"
#include "rda/tuning.hpp"
#include "rda/types.hpp"

namespace rda {

// Synthetic two-class geometry: Toeplitz Sigma_0 with a diagonal spike block
// added for class 1, mean gap (mean_shift / sqrt(p)) along the all-ones
// direction.
struct SyntheticGeometry {
  int p = 100;
  int n0 = 100;
  int n1 = 100;
  double toeplitz_ratio = 0.6;  // [Sigma_0]_{ij} = ratio^{|i-j|}
  double spike_scale = 3.0;     // Sigma_1 = Sigma_0 + scale * S_p
  double mean_shift = 0.8;
  double prior0 = 0.5;
};

ProblemInstance build_synthetic(const SyntheticGeometry& geom);

// Real-data mode: libsvm files plus a label pair; per-trial training subsets
// of n0/n1 columns are drawn from the train file.
struct DatasetPaths {
  std::string train_path;
  std::string test_path;  // empty: hold out from the train file
  double label0 = 0.0;
  double label1 = 1.0;
  int n0 = 100;
  int n1 = 100;
  int min_features = 0;
};

struct ExperimentConfig {
  std::variant<SyntheticGeometry, DatasetPaths> geometry = SyntheticGeometry{};
  std::vector<double> gamma_grid{1.0};
  int trials = 100;
  int test_size = 1000;  // Monte Carlo hold-out size per class (synthetic truth)
  std::vector<Classifier> classifiers{Classifier::RLDA, Classifier::RQDA};
  std::vector<ErrorMethod> estimators{ErrorMethod::GEstimate};
  BaselineConfig baseline;
  std::uint64_t seed = 1;
  std::string out_path;        // empty: stdout
  std::string format = "csv";  // csv | json
  // tuning parameters
  double tune_lo = 1e-2;
  double tune_hi = 1e2;
  int tune_grid = 50;
  bool tune_use_cv = false;
  int holdout_size = 1000;  // per-class validation size in synthetic tune mode

  bool synthetic() const {
    return std::holds_alternative<SyntheticGeometry>(geometry);
  }
};

// "log:lo:hi:count", "lin:lo:hi:count", a comma list, or a single value.
std::vector<double> parse_gamma_spec(const std::string& spec);

// Key/value sections ([geometry], [data], [sweep], [tune], [run]); unknown
// keys are errors with their line number.
ExperimentConfig parse_config_file(const std::string& path);

std::string method_name(ErrorMethod method);
std::string classifier_name(Classifier kind);

struct RunMeta {
  std::string command;
  std::uint64_t seed = 0;
  std::string timestamp;  // the only field allowed to differ between reruns
};

RunMeta make_run_meta(const std::string& command, std::uint64_t seed);

// ---------------------------------------------------------------------------
// RMS experiment: per trial, the "true" conditional error next to each
// configured estimator, summarized as bias / variance / RMS.

struct RmsRow {
  Classifier kind;
  ErrorMethod method;
  double bias = 0.0;
  double variance = 0.0;
  double rms = 0.0;
  int used_trials = 0;
  int skipped = 0;
};

struct TrialRow {
  int trial = 0;
  Classifier kind;
  double truth = 0.0;
  std::vector<std::optional<double>> estimates;  // parallel to estimators
};

struct RmsExperimentResult {
  std::vector<Classifier> classifiers;
  std::vector<ErrorMethod> estimators;
  std::vector<RmsRow> summary;
  std::vector<TrialRow> trials;
};

// bias / variance / rms of estimate-minus-truth differences
RmsRow summarize_rms(Classifier kind, ErrorMethod method,
                     const std::vector<double>& diffs, int skipped);

RmsExperimentResult run_rms_experiment(const ExperimentConfig& config);

// ---------------------------------------------------------------------------
// Gamma sweep: per gamma, trial-averaged empirical error, the deterministic
// equivalent (synthetic truth only), the training-data estimate, and any
// configured baselines.

struct SweepRow {
  double gamma = 0.0;
  Classifier kind;
  ErrorMethod method;
  double value = 0.0;
  int used_trials = 0;
};

std::vector<SweepRow> run_gamma_sweep(const ExperimentConfig& config);

// ---------------------------------------------------------------------------
// Two-stage tuning driver.

struct TuneOutcome {
  Classifier kind;
  TuningResult stage1;  // estimator-only minimizer
  TuningResult result;  // after the validation stage
};

std::vector<TuneOutcome> run_tune(const ExperimentConfig& config);

// ---------------------------------------------------------------------------
// Report emission. CSV carries one metadata comment line (the timestamp
// lives there and nowhere else); JSON nests it under "meta".

std::string format_double(double value);

std::string rms_to_csv(const RmsExperimentResult& result, const RunMeta& meta);
std::string rms_to_json(const RmsExperimentResult& result, const RunMeta& meta,
                        const ExperimentConfig& config);
std::string sweep_to_csv(const std::vector<SweepRow>& rows, const RunMeta& meta);
std::string sweep_to_json(const std::vector<SweepRow>& rows, const RunMeta& meta,
                          const ExperimentConfig& config);
std::string tune_to_csv(const std::vector<TuneOutcome>& outcomes,
                        const RunMeta& meta);
std::string tune_to_json(const std::vector<TuneOutcome>& outcomes,
                         const RunMeta& meta, const ExperimentConfig& config);

void write_report(const std::string& out_path, const std::string& content);

}  // namespace rda
