// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "oracles.hpp"

#include "jdf/config.hpp"
#include "jdf/covariance.hpp"
#include "jdf/error.hpp"
#include "jdf/etm.hpp"
#include "jdf/harness.hpp"

using namespace jdf;

namespace {

const std::filesystem::path kConfigs = JDF_CONFIG_DIR;
constexpr std::uint64_t kSeed = 20240601;
constexpr int kTrials = 50;

struct Outcome {
  bool pass = false;
  std::string detail;
};

bool within_grid(const EstimateSet& est, const Scenario& s, const Grids& grids) {
  if (est.K() != 6) return false;
  const double fstep = s.constants.f_nyq / grids.freq_points;
  const double astep = 180.0 / (grids.doa_points - 1);
  for (std::size_t k = 0; k < 6; ++k) {
    if (std::abs(est.pairs[k].f_hz - oracle::kSim1F[k]) > fstep) return false;
    if (std::abs(est.pairs[k].theta_deg - oracle::kSim1Theta[k]) > astep) return false;
  }
  return true;
}

Outcome xi_identity() {
  const std::vector<int> c{0, 1, 4, 6};
  const auto xi = build_xi({c});
  std::mt19937_64 rng(kSeed);
  std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double w = u(rng);
    Eigen::VectorXcd a(4);
    for (int m = 0; m < 4; ++m) a(m) = oracle::cis(-w * c[static_cast<std::size_t>(m)]);
    worst = std::max(worst, (xi.apply(oracle::kron_conj(a)) - oracle::continuous_manifold(w, xi.Q)).cwiseAbs().maxCoeff());
  }
  return {worst < 1e-12, fmt::format("max abs error {:.3g}", worst)};
}

Outcome virtual_blocks() {
  const auto s = oracle::sim1();
  const auto v = expand_covariance(analytic_covariance(s, s.L), s.pattern);
  const auto want = oracle::virtual_blocks(s, 7, s.L * s.sigma2);
  const double e[] = {oracle::rel_frobenius(v.block(Block::XX), want.xx),
                      oracle::rel_frobenius(v.block(Block::XXbar), want.xxbar),
                      oracle::rel_frobenius(v.block(Block::XbarX), want.xbarx),
                      oracle::rel_frobenius(v.block(Block::XbarXbar), want.xbarxbar)};
  const double worst = *std::max_element(std::begin(e), std::end(e));
  return {worst < 1e-10, fmt::format("worst relative Frobenius error {:.3g}", worst)};
}

Outcome analytic_etm() {
  const auto s = oracle::sim1();
  const Grids grids;
  const auto est = jdf4ba_etm(analytic_covariance(s, s.L), s.pattern, s.constants, 6, grids);
  double fe = 0.0, te = 0.0;
  for (std::size_t k = 0; k < est.pairs.size(); ++k) {
    fe = std::max(fe, std::abs(est.pairs[k].f_hz - oracle::kSim1F[k]));
    te = std::max(te, std::abs(est.pairs[k].theta_deg - oracle::kSim1Theta[k]));
  }
  return {within_grid(est, s, grids), fmt::format("{} pairs, max |df| {:.3g} Hz, max |dtheta| {:.3g} deg", est.K(), fe, te)};
}

SweepResult sim1_sweep() {
  const auto cfg = load_config(kConfigs / "sim1.json");
  const std::vector<double> snr{cfg.snr_db.value()};
  return monte_carlo_rmse(cfg, snr, kTrials, EstimatorMode::Etm, kSeed);
}

Outcome finite_sample() {
  const auto p = sim1_sweep().points.at(0);
  return {p.success_rate >= 0.9,
          fmt::format("success {:.0f}% of {} trials ({} errored), RMSE {:.3g} Hz / {:.3g} deg", 100.0 * p.success_rate,
                      p.n_trials, p.n_errored, p.rmse_freq_hz, p.rmse_doa_deg)};
}

Outcome plain_ceiling() {
  const Grids grids;
  const auto s3 = oracle::sim1(3);
  const auto est = jdf4ba(analytic_covariance(s3, s3.L), Manifold{s3.pattern.coeffs, s3.constants}, 3, grids);
  bool three = est.K() == 3;
  for (std::size_t k = 0; three && k < 3; ++k) {
    three = std::abs(est.pairs[k].f_hz - oracle::kSim1F[k]) <= s3.constants.f_nyq / grids.freq_points &&
            std::abs(est.pairs[k].theta_deg - oracle::kSim1Theta[k]) <= 0.25;
  }
  const auto s6 = oracle::sim1(6);
  std::string six = "no error";
  try {
    jdf4ba(analytic_covariance(s6, s6.L), Manifold{s6.pattern.coeffs, s6.constants}, 6, grids);
  } catch (const Error& e) {
    six = to_string(e.code());
  }
  const bool six_ok = six == to_string(ErrorCode::KTooLarge) || six == to_string(ErrorCode::TooFewPeaks);
  return {three && six_ok, fmt::format("K=3 recovered: {}, K=6: {}", three ? "yes" : "no", six)};
}

Outcome rate_condition() {
  auto cfg = load_config(kConfigs / "sim1.json");
  const auto at400 = check_rate_condition(cfg.resolved(), EstimatorMode::Etm);
  cfg.scenario.L = 401;
  const auto at401 = check_rate_condition(cfg.resolved(), EstimatorMode::Etm);
  cfg.scenario.L = 400;
  const double total = 2.0 * cfg.scenario.M() * at400.f_sub;
  const auto trial = run_scenario(cfg, EstimatorMode::Etm, kSeed);
  const bool pass = at400.ok() && !at401.rate_ok && trial.success && total < 2.0 * cfg.scenario.M() * cfg.scenario.constants.f_nyq;
  return {pass, fmt::format("L=400 {}, L=401 {}, total rate {:.4g} MHz, end-to-end run at L=400 {}",
                            at400.ok() ? "passes" : "fails", at401.rate_ok ? "passes" : "fails", total / 1e6,
                            trial.success ? "within tolerance" : "outside tolerance")};
}

Outcome rmse_trend() {
  const auto cfg = load_config(kConfigs / "sim2.json");
  const std::vector<double> snr{0.0, 10.0, 20.0};
  const auto sweep = monte_carlo_rmse(cfg, snr, kTrials, EstimatorMode::Etm, kSeed);
  bool pass = true;
  std::string detail = "median RMSE (Hz, deg):";
  for (std::size_t i = 0; i < sweep.points.size(); ++i) {
    const auto& p = sweep.points[i];
    detail += fmt::format(" {:g} dB -> ({:.3g}, {:.3g})", p.snr_db, p.median_rmse_freq_hz, p.median_rmse_doa_deg);
    if (i > 0) {
      const auto& prev = sweep.points[i - 1];
      pass = pass && p.median_rmse_freq_hz <= prev.median_rmse_freq_hz &&
             p.median_rmse_doa_deg <= prev.median_rmse_doa_deg;
    }
  }
  return {pass, detail};
}

Outcome determinism() {
  const auto cfg = load_config(kConfigs / "sim1.json");
  const auto t1 = to_csv(run_scenario(cfg, EstimatorMode::Etm, kSeed));
  const auto t2 = to_csv(run_scenario(cfg, EstimatorMode::Etm, kSeed));
  const auto s1 = to_csv(sim1_sweep());
  const auto s2 = to_csv(sim1_sweep());
  const auto sim2 = load_config(kConfigs / "sim2.json");
  const std::vector<double> snr{0.0, 20.0};
  const auto a = to_csv(monte_carlo_rmse(sim2, snr, 8, EstimatorMode::Etm, kSeed, 1));
  const auto b = to_csv(monte_carlo_rmse(sim2, snr, 8, EstimatorMode::Etm, kSeed, 4));
  const bool pass = t1 == t2 && s1 == s2 && a == b;
  return {pass, fmt::format("trial CSV {}, Sim-1 sweep CSV {}, Sim-2 sweep CSV across thread counts {}",
                            t1 == t2 ? "identical" : "differs", s1 == s2 ? "identical" : "differs",
                            a == b ? "identical" : "differs")};
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "Xi identity", 1.0, xi_identity},
      {2, "virtual covariance blocks", 1.0, virtual_blocks},
      {3, "exact-covariance ETM recovery", 10.0, analytic_etm},
      {4, "finite-sample ETM recovery", 120.0, finite_sample},
      {5, "plain-mode ceiling", 10.0, plain_ceiling},
      {6, "sampling-rate condition", 120.0, rate_condition},
      {7, "RMSE trend", 600.0, rmse_trend},
      {8, "determinism", 600.0, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, fmt::format("exception: {}", e.what())};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.budget_s;
    const bool pass = out.pass && in_time;
    if (!pass) ++failed;
    fmt::print("{} criterion {} ({}): {} [{:.2f} s{}]\n", pass ? "PASS" : "FAIL", c.id, c.name, out.detail, secs,
               in_time ? "" : fmt::format(", over {:g} s budget", c.budget_s));
  }
  fmt::print("{} of {} criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
  return failed == 0 ? 0 : 1;
}
