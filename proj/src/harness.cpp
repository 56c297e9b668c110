#include "jdf/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <thread>

#include <fmt/format.h>

#include "jdf/covariance.hpp"
#include "jdf/error.hpp"
#include "jdf/etm.hpp"
#include "jdf/synth.hpp"

namespace jdf {

namespace {

double root_mean_square(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double acc = 0.0;
  for (double e : v) acc += e * e;
  return std::sqrt(acc / static_cast<double>(v.size()));
}

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

bool is_estimation_failure(ErrorCode code) {
  return code == ErrorCode::TooFewPeaks || code == ErrorCode::KTooLarge;
}

}  // namespace

double TrialResult::rmse_freq_hz() const {
  std::vector<double> v;
  for (const auto& e : errors) v.push_back(e.f_hz);
  return root_mean_square(v);
}

double TrialResult::rmse_doa_deg() const {
  std::vector<double> v;
  for (const auto& e : errors) v.push_back(e.theta_deg);
  return root_mean_square(v);
}

TrialResult run_scenario(const RunConfig& config, EstimatorMode mode, std::uint64_t seed,
                         const RunOptions& options) {
  const Scenario scenario = config.resolved();
  validate_scenario(scenario);

  TrialResult result;
  result.seed = seed;

  CovarianceSet cov;
  if (options.analytic) {
    cov = analytic_covariance(scenario, config.noise_scale);
  } else {
    const auto snapshots = simulate_snapshots(scenario, config.synth, seed, config.synth_options);
    result.warnings = snapshots.warnings;
    if (snapshots.N() < 2 * snapshots.M) {
      result.warnings.push_back(fmt::format("only {} snapshots for {} channels", snapshots.N(), 2 * snapshots.M));
    }
    cov = sample_covariance(snapshots);
  }

  JdfSpectra spectra;
  JdfSpectra* keep = options.spectra_dir ? &spectra : nullptr;
  if (mode == EstimatorMode::Etm) {
    result.estimates = jdf4ba_etm(cov, scenario.pattern, scenario.constants, scenario.K(), config.grids, keep);
  } else {
    result.estimates = jdf4ba(cov, Manifold{scenario.pattern.coeffs, scenario.constants}, scenario.K(),
                              config.grids, keep);
  }

  if (options.spectra_dir) {
    std::filesystem::create_directories(*options.spectra_dir);
    write_spectrum_csv(spectra.freq_xx, *options.spectra_dir / "freq_xx.csv");
    write_spectrum_csv(spectra.freq_xbar, *options.spectra_dir / "freq_xbar.csv");
    for (std::size_t k = 0; k < spectra.doa.size(); ++k) {
      write_spectrum_csv(spectra.doa[k], *options.spectra_dir / fmt::format("doa_{}.csv", k));
    }
  }

  result.truth = scenario.sources;
  std::sort(result.truth.begin(), result.truth.end(),
            [](const SourceParams& a, const SourceParams& b) { return a.f_hz < b.f_hz; });
  result.success = true;
  for (std::size_t k = 0; k < result.truth.size(); ++k) {
    const auto& est = result.estimates.pairs[k];
    const SourceError err{est.f_hz - result.truth[k].f_hz, est.theta_deg - result.truth[k].theta_deg};
    result.errors.push_back(err);
    if (!(std::abs(err.f_hz) <= config.freq_tolerance()) || !(std::abs(err.theta_deg) <= config.doa_tolerance_deg)) {
      result.success = false;
    }
  }
  return result;
}

double rmse(std::span<const std::vector<double>> errors_per_trial) {
  double acc = 0.0;
  std::size_t count = 0;
  for (const auto& trial : errors_per_trial) {
    for (double e : trial) acc += e * e;
    count += trial.size();
  }
  if (count == 0) return std::numeric_limits<double>::quiet_NaN();
  return std::sqrt(acc / static_cast<double>(count));
}

SweepResult monte_carlo_rmse(const RunConfig& config, std::span<const double> snr_db, int n_trials,
                             EstimatorMode mode, std::uint64_t base_seed, int threads) {
  if (n_trials < 1) throw Error(ErrorCode::InvalidScenario, "n_trials must be >= 1");
  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min(threads, n_trials);

  SweepResult out;
  for (double snr : snr_db) {
    const RunConfig point_config = config.with_snr(snr);
    std::vector<std::optional<TrialResult>> trials(static_cast<std::size_t>(n_trials));
    std::vector<std::exception_ptr> fatal(static_cast<std::size_t>(n_trials));
    std::atomic<int> next{0};

    auto worker = [&] {
      for (int t = next++; t < n_trials; t = next++) {
        const auto slot = static_cast<std::size_t>(t);
        try {
          trials[slot] = run_scenario(point_config, mode, base_seed + static_cast<std::uint64_t>(t));
        } catch (const Error& e) {
          if (!is_estimation_failure(e.code())) fatal[slot] = std::current_exception();
        } catch (...) {
          fatal[slot] = std::current_exception();
        }
      }
    };
    {
      std::vector<std::jthread> pool;
      for (int i = 1; i < threads; ++i) pool.emplace_back(worker);
      worker();
    }
    for (const auto& e : fatal) {
      if (e) std::rethrow_exception(e);
    }

    SweepPoint p;
    p.snr_db = snr;
    p.n_trials = n_trials;
    std::vector<std::vector<double>> f_err, t_err;
    std::vector<double> f_trial, t_trial;
    int successes = 0;
    for (const auto& trial : trials) {
      if (!trial) {
        ++p.n_errored;
        continue;
      }
      if (trial->success) ++successes;
      std::vector<double> fe, te;
      for (const auto& e : trial->errors) {
        fe.push_back(e.f_hz);
        te.push_back(e.theta_deg);
      }
      f_err.push_back(std::move(fe));
      t_err.push_back(std::move(te));
      f_trial.push_back(trial->rmse_freq_hz());
      t_trial.push_back(trial->rmse_doa_deg());
    }
    p.rmse_freq_hz = rmse(f_err);
    p.rmse_doa_deg = rmse(t_err);
    p.median_rmse_freq_hz = median(f_trial);
    p.median_rmse_doa_deg = median(t_trial);
    p.success_rate = static_cast<double>(successes) / n_trials;
    out.points.push_back(p);
  }
  return out;
}

std::string to_csv(const SweepResult& result) {
  std::string s = "snr_db,rmse_freq_hz,rmse_doa_deg,n_trials,success_rate\n";
  for (const auto& p : result.points) {
    s += fmt::format("{:.17g},{:.17g},{:.17g},{},{:.17g}\n", p.snr_db, p.rmse_freq_hz, p.rmse_doa_deg,
                     p.n_trials, p.success_rate);
  }
  return s;
}

std::string to_csv(const TrialResult& result) {
  std::string s = "k,f_true,f_hat,theta_true,theta_hat\n";
  for (std::size_t k = 0; k < result.truth.size(); ++k) {
    const auto& est = result.estimates.pairs[k];
    s += fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g}\n", k, result.truth[k].f_hz, est.f_hz,
                     result.truth[k].theta_deg, est.theta_deg);
  }
  return s;
}

void export_csv(const SweepResult& result, const std::filesystem::path& path) { write_text(path, to_csv(result)); }
void export_csv(const TrialResult& result, const std::filesystem::path& path) { write_text(path, to_csv(result)); }

}  // namespace jdf
