#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jdf/config.hpp"
#include "jdf/subspace.hpp"

namespace jdf {

struct RunOptions {
  /// Replace synthesis + sample covariance with the exact covariance.
  bool analytic = false;
  std::optional<std::filesystem::path> spectra_dir;
};

struct SourceError {
  double f_hz = 0.0;       // estimate - truth
  double theta_deg = 0.0;  // estimate - truth
};

struct TrialResult {
  std::uint64_t seed = 0;
  EstimateSet estimates;
  std::vector<SourceParams> truth;  // ascending carrier
  std::vector<SourceError> errors;  // matched by ascending frequency
  bool success = false;
  std::vector<std::string> warnings;

  double rmse_freq_hz() const;
  double rmse_doa_deg() const;
};

struct SweepPoint {
  double snr_db = 0.0;
  double rmse_freq_hz = 0.0;
  double rmse_doa_deg = 0.0;
  int n_trials = 0;
  int n_errored = 0;  // estimation raised TooFewPeaks/KTooLarge
  double success_rate = 0.0;
  double median_rmse_freq_hz = 0.0;  // median of per-trial RMSE
  double median_rmse_doa_deg = 0.0;
};

struct SweepResult {
  std::vector<SweepPoint> points;
};

TrialResult run_scenario(const RunConfig& config, EstimatorMode mode, std::uint64_t seed,
                         const RunOptions& options = {});

/// RMSE over a set of trials: sqrt(sum_i sum_k err_ik^2 / (N_m K)).
double rmse(std::span<const std::vector<double>> errors_per_trial);

/// Trial t at every SNR point uses seed base_seed + t.  `threads` = 0 picks
/// the hardware concurrency; the result does not depend on it.
SweepResult monte_carlo_rmse(const RunConfig& config, std::span<const double> snr_db, int n_trials,
                             EstimatorMode mode, std::uint64_t base_seed, int threads = 0);

std::string to_csv(const SweepResult& result);
std::string to_csv(const TrialResult& result);
void export_csv(const SweepResult& result, const std::filesystem::path& path);
void export_csv(const TrialResult& result, const std::filesystem::path& path);

}  // namespace jdf
