#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>

#include "doctest.h"

#include "jdf/covariance.hpp"
#include "jdf/error.hpp"

using namespace jdf;

namespace {

Scenario sim1(double sigma2 = 0.0) {
  Scenario s;
  s.constants = ArrayConstants(10e9);
  s.pattern = {{0, 1, 4, 6}};
  s.L = 400;
  const double f[] = {1.22e9, 2.77e9, 4.32e9, 6.54e9, 7.64e9, 8.48e9};
  const double th[] = {45, 20, 0, -30, 10, -20};
  for (int k = 0; k < 6; ++k) s.sources.push_back({f[k], th[k], 1.0, BasebandKind::Qpsk, 25e6});
  s.sigma2 = sigma2;
  return s;
}

// Independent builders for the per-block forms.
Eigen::MatrixXcd steering_block(const Scenario& s) {
  Eigen::MatrixXcd at(s.M(), s.K());
  for (int k = 0; k < s.K(); ++k) {
    const double omega = 2.0 * std::numbers::pi * s.sources[static_cast<std::size_t>(k)].f_hz * s.constants.tau;
    for (int m = 0; m < s.M(); ++m) {
      at(m, k) = std::exp(std::complex<double>(0.0, -omega * s.pattern.coeffs[static_cast<std::size_t>(m)]));
    }
  }
  return at;
}

Eigen::VectorXcd d_phi(const Scenario& s) {
  Eigen::VectorXcd d(s.K());
  for (int k = 0; k < s.K(); ++k) {
    const auto& src = s.sources[static_cast<std::size_t>(k)];
    const double phi = std::numbers::pi * src.f_hz / s.constants.f_nyq * std::sin(src.theta_deg * std::numbers::pi / 180.0);
    d(k) = std::exp(std::complex<double>(0.0, -phi));
  }
  return d;
}

double rel_err(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) { return (a - b).norm() / b.norm(); }

}  // namespace

TEST_CASE("single all-ones snapshot gives the all-ones matrix") {
  const auto cov = sample_covariance(Eigen::MatrixXcd::Ones(8, 1));
  CHECK(cov.full() == Eigen::MatrixXcd::Ones(8, 8));
  CHECK(cov.n_used() == 1);
}

TEST_CASE("zero snapshots give a zero covariance; no snapshots is an error") {
  CHECK(sample_covariance(Eigen::MatrixXcd::Zero(8, 5)).full().isZero(0.0));
  try {
    sample_covariance(Eigen::MatrixXcd(8, 0));
    FAIL("expected DegenerateSnapshots");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateSnapshots);
  }
}

TEST_CASE("sample covariance is Hermitian and invariant to snapshot order") {
  std::mt19937 rng(1);
  std::normal_distribution<double> g;
  Eigen::MatrixXcd y(8, 300);
  for (Eigen::Index i = 0; i < y.size(); ++i) y(i) = {g(rng), g(rng)};
  const auto a = sample_covariance(y);
  CHECK(a.full() == a.full().adjoint());
  CHECK(a.block(Block::XbarX) == a.block(Block::XXbar).adjoint());

  std::vector<int> perm(300);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  Eigen::MatrixXcd shuffled(8, 300);
  for (int i = 0; i < 300; ++i) shuffled.col(i) = y.col(perm[static_cast<std::size_t>(i)]);
  CHECK((sample_covariance(shuffled).full() - a.full()).norm() < 1e-12 * a.full().norm());
}

TEST_CASE("analytic covariance special cases") {
  Scenario s = sim1();
  s.sources.resize(1);
  s.sources[0].power = 1.0;
  const auto one = analytic_covariance(s);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(one.full());
  CHECK(es.eigenvalues()(7) == doctest::Approx(8.0));
  CHECK(es.eigenvalues().head(7).cwiseAbs().maxCoeff() < 1e-12);

  s.sources.clear();
  s.sigma2 = 1.0;
  const auto noise = analytic_covariance(s);
  CHECK(noise.full().isApprox(Eigen::MatrixXcd::Identity(8, 8)));
  CHECK(noise.block(Block::XX).isApprox(Eigen::MatrixXcd::Identity(4, 4)));
  CHECK(noise.block(Block::XXbar).isZero(0.0));
  CHECK(noise.block(Block::XbarX).isZero(0.0));
  CHECK(analytic_covariance(s, 400.0).full().isApprox(400.0 * Eigen::MatrixXcd::Identity(8, 8)));
}

TEST_CASE("analytic blocks match their independent block forms") {
  const Scenario s = sim1(0.3);
  const auto cov = analytic_covariance(s);
  const auto at = steering_block(s);
  const auto d = d_phi(s);
  const Eigen::MatrixXcd aw = at;  // W = I
  const Eigen::MatrixXcd xx = aw * at.adjoint() + 0.3 * Eigen::MatrixXcd::Identity(4, 4);
  const Eigen::MatrixXcd xbx = at * d.asDiagonal() * at.adjoint();
  const Eigen::MatrixXcd xxb = at * d.conjugate().asDiagonal() * at.adjoint();
  CHECK((cov.block(Block::XX) - xx).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((cov.block(Block::XbarX) - xbx).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((cov.block(Block::XXbar) - xxb).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((block(cov, Block::XX) - block(cov, Block::XbarXbar)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("analytic spectrum: K signal eigenvalues above an exact noise floor") {
  for (double scale : {1.0, 400.0}) {
    Scenario s = sim1(0.05);
    s.sources.resize(5);
    const auto cov = analytic_covariance(s, scale);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(cov.full());
    const auto& ev = es.eigenvalues();
    const double floor = scale * 0.05;
    CHECK(ev.minCoeff() >= -1e-10 * ev.maxCoeff());
    for (int i = 0; i < 3; ++i) CHECK(std::abs(ev(i) - floor) < 1e-10 * ev.maxCoeff());
    for (int i = 3; i < 8; ++i) CHECK(ev(i) > floor * (1 + 1e-6));
  }
}

TEST_CASE("QPSK sample covariance converges to the analytic one") {
  Scenario s = sim1();
  s.n_snapshots = 1 << 14;
  const auto snap = simulate_snapshots(s, SynthMode::ExactDelay, 17);
  const auto r = sample_covariance(snap);
  CHECK(rel_err(r.full(), analytic_covariance(s).full()) < 0.05);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(r.full());
  CHECK(es.eigenvalues().minCoeff() >= -1e-10 * es.eigenvalues().maxCoeff());
}

TEST_CASE("sinusoid sample covariance converges to the analytic one") {
  // L = 40 keeps the six aliased tones on distinct sub-Nyquist frequencies.
  Scenario s = sim1();
  s.L = 40;
  for (auto& src : s.sources) {
    src.kind = BasebandKind::ComplexSinusoid;
    src.bandwidth_hz = 0.0;
  }
  s.n_snapshots = 1 << 14;
  const auto r = sample_covariance(simulate_snapshots(s, SynthMode::PhaseModel, 5));
  CHECK(rel_err(r.full(), analytic_covariance(s).full()) < 0.05);
}

TEST_CASE("covariance CSV dump") {
  const auto path = std::filesystem::temp_directory_path() / "jdf_cov.csv";
  write_covariance_csv(analytic_covariance(sim1(1.0)), path);
  std::ifstream in(path);
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 15);
  }
  CHECK(rows == 8);
  std::filesystem::remove(path);
}
