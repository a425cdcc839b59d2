#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <string>

#include "rda/harness.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_path;
  std::string format;
  std::string classifier;
  std::string gamma;
  std::string digits;
  std::string train_path;
  std::string test_path;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "experiment config file");
  cmd->add_option("--seed", flags.seed, "master seed");
  cmd->add_option("--out", flags.out_path, "output path (default: stdout)");
  cmd->add_option("--format", flags.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--classifier", flags.classifier, "rlda, rqda or both")
      ->check(CLI::IsMember({"rlda", "rqda", "both"}));
  cmd->add_option("--gamma", flags.gamma,
                  "gamma value, comma list, or log:lo:hi:n / lin:lo:hi:n");
  cmd->add_option("--digits", flags.digits, "label pair a,b for real data");
  cmd->add_option("--train", flags.train_path, "libsvm training file");
  cmd->add_option("--test", flags.test_path, "libsvm test file");
}

rda::ExperimentConfig resolve_config(const CommonFlags& flags) {
  rda::ExperimentConfig config;
  if (!flags.config_path.empty()) {
    config = rda::parse_config_file(flags.config_path);
  }
  if (flags.seed) config.seed = *flags.seed;
  if (!flags.out_path.empty()) config.out_path = flags.out_path;
  if (!flags.format.empty()) config.format = flags.format;
  if (!flags.classifier.empty()) {
    if (flags.classifier == "rlda") config.classifiers = {rda::Classifier::RLDA};
    else if (flags.classifier == "rqda") config.classifiers = {rda::Classifier::RQDA};
    else config.classifiers = {rda::Classifier::RLDA, rda::Classifier::RQDA};
  }
  if (!flags.gamma.empty()) config.gamma_grid = rda::parse_gamma_spec(flags.gamma);

  const bool wants_data =
      !flags.train_path.empty() || !flags.digits.empty() || !flags.test_path.empty();
  if (wants_data && config.synthetic()) config.geometry = rda::DatasetPaths{};
  if (!config.synthetic()) {
    auto& data = std::get<rda::DatasetPaths>(config.geometry);
    if (!flags.train_path.empty()) data.train_path = flags.train_path;
    if (!flags.test_path.empty()) data.test_path = flags.test_path;
    if (!flags.digits.empty()) {
      const auto comma = flags.digits.find(',');
      if (comma == std::string::npos) {
        throw rda::DomainError("--digits expects 'a,b'");
      }
      data.label0 = std::stod(flags.digits.substr(0, comma));
      data.label1 = std::stod(flags.digits.substr(comma + 1));
    }
  }
  return config;
}

void emit_rms(const rda::ExperimentConfig& config, const std::string& command) {
  const rda::RunMeta meta = rda::make_run_meta(command, config.seed);
  const rda::RmsExperimentResult result = rda::run_rms_experiment(config);
  rda::write_report(config.out_path,
                    config.format == "json"
                        ? rda::rms_to_json(result, meta, config)
                        : rda::rms_to_csv(result, meta));
}

void emit_sweep(const rda::ExperimentConfig& config, const std::string& command) {
  const rda::RunMeta meta = rda::make_run_meta(command, config.seed);
  const auto rows = rda::run_gamma_sweep(config);
  rda::write_report(config.out_path,
                    config.format == "json"
                        ? rda::sweep_to_json(rows, meta, config)
                        : rda::sweep_to_csv(rows, meta));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"regularized discriminant analysis experiments"};
  app.require_subcommand(1);

  CommonFlags synth_rms_flags, sweep_flags, tune_flags, real_flags;
  std::string real_mode = "rms";

  CLI::App* synth_rms =
      app.add_subcommand("synth-rms", "estimator RMS comparison on synthetic data");
  add_common_flags(synth_rms, synth_rms_flags);

  CLI::App* gamma_sweep =
      app.add_subcommand("gamma-sweep", "error-vs-gamma table on synthetic data");
  add_common_flags(gamma_sweep, sweep_flags);

  CLI::App* tune = app.add_subcommand("tune", "two-stage regularizer selection");
  add_common_flags(tune, tune_flags);

  CLI::App* real = app.add_subcommand("real-data", "experiments on libsvm data");
  add_common_flags(real, real_flags);
  real->add_option("--mode", real_mode, "rms or sweep")
      ->check(CLI::IsMember({"rms", "sweep"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth_rms->parsed()) {
      const auto config = resolve_config(synth_rms_flags);
      if (!config.synthetic()) throw rda::DomainError("synth-rms needs synthetic geometry");
      emit_rms(config, "synth-rms");
    } else if (gamma_sweep->parsed()) {
      emit_sweep(resolve_config(sweep_flags), "gamma-sweep");
    } else if (tune->parsed()) {
      const auto config = resolve_config(tune_flags);
      const rda::RunMeta meta = rda::make_run_meta("tune", config.seed);
      const auto outcomes = rda::run_tune(config);
      rda::write_report(config.out_path,
                        config.format == "json"
                            ? rda::tune_to_json(outcomes, meta, config)
                            : rda::tune_to_csv(outcomes, meta));
    } else if (real->parsed()) {
      const auto config = resolve_config(real_flags);
      if (config.synthetic()) {
        throw rda::DomainError("real-data needs --train or a [data] config section");
      }
      if (real_mode == "rms") emit_rms(config, "real-data");
      else emit_sweep(config, "real-data");
    }
  } catch (const rda::ParseError& err) {
    std::cerr << "error (line " << err.line << "): " << err.what() << "\n";
    return 1;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}
