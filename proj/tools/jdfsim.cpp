// jdfsim: command-line front end for the joint frequency/DOA simulator.

#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"

#include "jdf/config.hpp"
#include "jdf/covariance.hpp"
#include "jdf/error.hpp"
#include "jdf/harness.hpp"
#include "jdf/scenario.hpp"
#include "jdf/synth.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitEstimation = 3;
constexpr int kExitIo = 4;

int exit_code(jdf::ErrorCode code) {
  using jdf::ErrorCode;
  switch (code) {
    case ErrorCode::Io: return kExitIo;
    case ErrorCode::InvalidScenario:
    case ErrorCode::NotAscending:
    case ErrorCode::FirstNotZero:
    case ErrorCode::NonContiguousCoarray:
    case ErrorCode::ModeUnavailable: return kExitValidation;
    default: return kExitEstimation;
  }
}

template <typename T>
std::vector<T> split_list(const std::string& text) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    T value{};
    try {
      if constexpr (std::is_integral_v<T>) {
        value = static_cast<T>(std::stoll(item, &used));
      } else {
        value = static_cast<T>(std::stod(item, &used));
      }
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw jdf::Error(jdf::ErrorCode::InvalidScenario, "bad list entry '" + item + "'");
    out.push_back(value);
  }
  return out;
}

int cmd_pattern(const std::string& list) {
  const jdf::DelayPattern pattern{split_list<int>(list)};
  jdf::check_pattern_shape(pattern);
  const auto lags = jdf::difference_coarray(pattern);
  fmt::print("lag,multiplicity\n");
  for (const auto& [lag, count] : lags) fmt::print("{},{}\n", lag, count);
  const int Q = jdf::validate_pattern(pattern);
  fmt::print("M = {}, Q = {}\n", pattern.M(), Q);
  return 0;
}

int cmd_validate(const std::string& path, const std::string& mode_name) {
  const auto config = jdf::load_config(path);
  const auto scenario = config.resolved();
  const auto mode = jdf::estimator_mode_from_string(mode_name);
  const auto check = jdf::check_rate_condition(scenario, mode);
  fmt::print("sources K = {}, branches M = {}, L = {}, f_sub = {} Hz\n", scenario.K(), scenario.M(), scenario.L,
             check.f_sub);
  fmt::print("sigma2 = {}\n", scenario.sigma2);
  fmt::print("rate condition f_sub >= max B: {} (margin {} Hz)\n", check.rate_ok ? "pass" : "FAIL", check.margin_hz);
  fmt::print("identifiability ({} mode, dof {} >= K + 1): {}\n", jdf::to_string(mode), check.dof,
             check.identifiable ? "pass" : "FAIL");
  fmt::print("total sampling rate 2M f_sub = {} Hz\n", 2.0 * scenario.M() * check.f_sub);
  return check.ok() ? 0 : kExitValidation;
}

struct RunArgs {
  std::string config;
  std::string mode = "etm";
  std::uint64_t seed = 1;
  std::string spectra_dir;
  std::string out;
  std::string synth;
  std::string dump_snapshots;
  std::string dump_covariance;
  bool analytic = false;
};

int cmd_run(const RunArgs& args) {
  auto config = jdf::load_config(args.config);
  if (!args.synth.empty()) config.synth = jdf::synth_mode_from_string(args.synth);
  const auto mode = jdf::estimator_mode_from_string(args.mode);

  jdf::RunOptions options;
  options.analytic = args.analytic;
  if (!args.spectra_dir.empty()) options.spectra_dir = args.spectra_dir;

  if (!args.dump_snapshots.empty() || !args.dump_covariance.empty()) {
    const auto snapshots = jdf::simulate_snapshots(config.resolved(), config.synth, args.seed, config.synth_options);
    if (!args.dump_snapshots.empty()) jdf::write_snapshots(snapshots, args.dump_snapshots);
    if (!args.dump_covariance.empty()) {
      jdf::write_covariance_csv(jdf::sample_covariance(snapshots), args.dump_covariance);
    }
  }

  const auto result = jdf::run_scenario(config, mode, args.seed, options);
  for (const auto& w : result.warnings) fmt::print(stderr, "warning: {}\n", w);
  fmt::print("{:>3} {:>16} {:>16} {:>10} {:>10}\n", "k", "f_true[Hz]", "f_hat[Hz]", "theta", "theta_hat");
  for (std::size_t k = 0; k < result.truth.size(); ++k) {
    const auto& e = result.estimates.pairs[k];
    fmt::print("{:>3} {:>16.6f} {:>16.6f} {:>10.3f} {:>10.3f}\n", k, result.truth[k].f_hz, e.f_hz,
               result.truth[k].theta_deg, e.theta_deg);
  }
  fmt::print("rmse: {:.6g} Hz, {:.6g} deg; {}\n", result.rmse_freq_hz(), result.rmse_doa_deg(),
             result.success ? "all pairs within tolerance" : "some pairs outside tolerance");
  if (!args.out.empty()) jdf::export_csv(result, args.out);
  return 0;
}

struct SweepArgs {
  std::string config;
  std::string snr;
  int trials = 50;
  std::string mode = "etm";
  std::uint64_t seed = 1;
  std::string out;
  int threads = 0;
};

int cmd_sweep(const SweepArgs& args) {
  const auto config = jdf::load_config(args.config);
  const auto snr = split_list<double>(args.snr);
  const auto result = jdf::monte_carlo_rmse(config, snr, args.trials, jdf::estimator_mode_from_string(args.mode),
                                            args.seed, args.threads);
  for (const auto& p : result.points) {
    fmt::print("snr {:>6.2f} dB: rmse {:.6g} Hz, {:.6g} deg, success {:.3f}, errored {}/{}\n", p.snr_db,
               p.rmse_freq_hz, p.rmse_doa_deg, p.success_rate, p.n_errored, p.n_trials);
  }
  jdf::export_csv(result, args.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint carrier-frequency and DOA estimation simulator"};
  app.require_subcommand(1);

  std::string pattern_list;
  auto* pattern = app.add_subcommand("pattern", "Print the difference coarray of a delay pattern");
  pattern->add_option("coeffs", pattern_list, "comma-separated delay coefficients")->required();

  std::string validate_path;
  std::string validate_mode = "etm";
  auto* validate = app.add_subcommand("validate", "Check a scenario configuration");
  validate->add_option("config", validate_path, "scenario JSON")->required();
  validate->add_option("--mode", validate_mode, "plain or etm")->check(CLI::IsMember({"plain", "etm"}));

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Run one scenario");
  run->add_option("config", run_args.config, "scenario JSON")->required();
  run->add_option("--mode", run_args.mode, "plain or etm")->check(CLI::IsMember({"plain", "etm"}));
  run->add_option("--seed", run_args.seed, "RNG seed");
  run->add_option("--spectra-dir", run_args.spectra_dir, "write pseudo-spectrum CSVs here");
  run->add_option("--out", run_args.out, "write the trial CSV here");
  run->add_option("--synth", run_args.synth, "phase-model or exact-delay (overrides the config)");
  run->add_option("--dump-snapshots", run_args.dump_snapshots, "write the raw snapshot matrix");
  run->add_option("--dump-covariance", run_args.dump_covariance, "write the sample covariance as CSV");
  run->add_flag("--analytic", run_args.analytic, "use the exact covariance instead of simulated data");

  SweepArgs sweep_args;
  auto* sweep = app.add_subcommand("sweep", "Monte Carlo RMSE over an SNR list");
  sweep->add_option("config", sweep_args.config, "scenario JSON")->required();
  sweep->add_option("--snr", sweep_args.snr, "comma-separated SNR values in dB")->required();
  sweep->add_option("--trials", sweep_args.trials, "trials per SNR point")->required()->check(CLI::PositiveNumber);
  sweep->add_option("--mode", sweep_args.mode, "plain or etm")->check(CLI::IsMember({"plain", "etm"}));
  sweep->add_option("--seed", sweep_args.seed, "base seed");
  sweep->add_option("--out", sweep_args.out, "results CSV")->required();
  sweep->add_option("--threads", sweep_args.threads, "worker threads (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*pattern) return cmd_pattern(pattern_list);
    if (*validate) return cmd_validate(validate_path, validate_mode);
    if (*run) return cmd_run(run_args);
    if (*sweep) return cmd_sweep(sweep_args);
  } catch (const jdf::Error& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return exit_code(e.code());
  } catch (const std::filesystem::filesystem_error& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitIo;
  }
  return 0;
}
