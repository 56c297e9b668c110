#include "jdf/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>
#include <fmt/os.h>

#include "jdf/error.hpp"
#include "jdf/manifold.hpp"

namespace jdf {

EigenBasis eigh(const Eigen::MatrixXcd& matrix) {
  if (matrix.rows() != matrix.cols()) throw Error(ErrorCode::DimensionMismatch, "eigh needs a square matrix");
  if (!matrix.allFinite()) throw Error(ErrorCode::NonFinite, "matrix has non-finite entries");
  const double scale = std::max(1.0, matrix.cwiseAbs().maxCoeff());
  if ((matrix - matrix.adjoint()).cwiseAbs().maxCoeff() > 1e-8 * scale) {
    throw Error(ErrorCode::NotHermitian, "matrix is not Hermitian");
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(matrix);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::NonFinite, "eigendecomposition did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

Eigen::MatrixXcd noise_subspace(const EigenBasis& basis, int K) {
  if (K >= basis.dim()) {
    throw Error(ErrorCode::KTooLarge, fmt::format("K = {} needs dimension > K, got {}", K, basis.dim()));
  }
  if (K < 1) throw Error(ErrorCode::InvalidScenario, "K must be >= 1");
  return basis.vectors.leftCols(basis.dim() - K);
}

std::vector<double> Grids::frequencies(const ArrayConstants& constants) const {
  std::vector<double> grid(static_cast<std::size_t>(std::max(freq_points, 0)));
  const double step = constants.scan_span() / freq_points;
  for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = static_cast<double>(i) * step;
  return grid;
}

std::vector<double> Grids::angles() const {
  std::vector<double> grid(static_cast<std::size_t>(std::max(doa_points, 0)));
  if (grid.size() == 1) return {0.0};
  const double step = 180.0 / (doa_points - 1);
  for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = -90.0 + static_cast<double>(i) * step;
  if (!grid.empty()) grid.back() = 90.0;
  return grid;
}

namespace {

double reciprocal_projection(const Eigen::MatrixXcd& noise, const Eigen::VectorXcd& a) {
  const double den = (noise.adjoint() * a).squaredNorm();
  return 1.0 / std::max(den, std::numeric_limits<double>::min());
}

void require_grid(std::span<const double> grid) {
  if (grid.empty()) throw Error(ErrorCode::GridEmpty, "scan grid is empty");
}

void require_rows(const Eigen::MatrixXcd& noise, Eigen::Index rows) {
  if (noise.rows() != rows) {
    throw Error(ErrorCode::DimensionMismatch,
                fmt::format("noise subspace has {} rows, manifold needs {}", noise.rows(), rows));
  }
}

// Abscissa of the vertex of the parabola through three points.
double parabola_vertex(double x0, double y0, double x1, double y1, double x2, double y2) {
  const double d10 = x1 - x0;
  const double d12 = x1 - x2;
  const double den = d10 * (y1 - y2) - d12 * (y1 - y0);
  if (den == 0.0 || !std::isfinite(den)) return x1;
  const double num = d10 * d10 * (y1 - y2) - d12 * d12 * (y1 - y0);
  const double x = x1 - 0.5 * num / den;
  return std::isfinite(x) ? std::clamp(x, x0, x2) : x1;
}

}  // namespace

PseudoSpectrum freq_pseudospectrum(const Eigen::MatrixXcd& noise, const Manifold& manifold,
                                   std::span<const double> grid_hz) {
  require_grid(grid_hz);
  require_rows(noise, static_cast<Eigen::Index>(manifold.delays.size()));
  PseudoSpectrum out;
  out.kind = SpectrumKind::Frequency;
  out.grid.assign(grid_hz.begin(), grid_hz.end());
  out.values.resize(grid_hz.size());
  for (std::size_t i = 0; i < grid_hz.size(); ++i) {
    const double omega = unit_omega(grid_hz[i], manifold.constants);
    out.values[i] = reciprocal_projection(noise, time_delay_manifold(omega, manifold.delays));
  }
  return out;
}

PseudoSpectrum doa_pseudospectrum(const Eigen::MatrixXcd& noise, const Manifold& manifold, double f_hat,
                                  std::span<const double> grid_deg) {
  require_grid(grid_deg);
  require_rows(noise, 2 * static_cast<Eigen::Index>(manifold.delays.size()));
  PseudoSpectrum out;
  out.kind = SpectrumKind::Doa;
  out.f_hat = f_hat;
  out.grid.assign(grid_deg.begin(), grid_deg.end());
  out.values.resize(grid_deg.size());
  const double omega = unit_omega(f_hat, manifold.constants);
  for (std::size_t i = 0; i < grid_deg.size(); ++i) {
    const double phi = unit_phi(f_hat, deg2rad(grid_deg[i]), manifold.constants);
    out.values[i] = reciprocal_projection(noise, stacked_manifold(omega, phi, manifold.delays));
  }
  return out;
}

std::vector<Peak> pick_peaks(const PseudoSpectrum& spectrum, int K) {
  const auto& x = spectrum.grid;
  const auto& y = spectrum.values;
  if (x.size() < 3 || y.size() != x.size()) {
    throw Error(ErrorCode::GridEmpty, "peak search needs at least three grid points");
  }
  if (K < 1) throw Error(ErrorCode::InvalidScenario, "K must be >= 1");

  std::vector<std::size_t> maxima;
  for (std::size_t i = 1; i + 1 < y.size(); ++i) {
    if (y[i] > y[i - 1] && y[i] > y[i + 1]) maxima.push_back(i);
  }
  if (maxima.size() < static_cast<std::size_t>(K)) {
    throw Error(ErrorCode::TooFewPeaks,
                fmt::format("found {} local maxima, need {}", maxima.size(), K));
  }
  // Indices ascend with abscissa, so a stable sort breaks ties toward the lower one.
  std::stable_sort(maxima.begin(), maxima.end(), [&](std::size_t a, std::size_t b) { return y[a] > y[b]; });
  maxima.resize(static_cast<std::size_t>(K));

  std::vector<Peak> peaks;
  peaks.reserve(maxima.size());
  for (std::size_t i : maxima) {
    peaks.push_back({parabola_vertex(x[i - 1], y[i - 1], x[i], y[i], x[i + 1], y[i + 1]), y[i]});
  }
  std::sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) { return a.abscissa < b.abscissa; });
  return peaks;
}

namespace {

Peak global_peak(const PseudoSpectrum& spectrum) {
  const auto& x = spectrum.grid;
  const auto& y = spectrum.values;
  const auto best = static_cast<std::size_t>(std::max_element(y.begin(), y.end()) - y.begin());
  if (best == 0 || best + 1 >= y.size()) return {x[best], y[best]};
  return {parabola_vertex(x[best - 1], y[best - 1], x[best], y[best], x[best + 1], y[best + 1]), y[best]};
}

}  // namespace

EstimateSet jdf4ba(const CovarianceSet& cov, const Manifold& manifold, int K, const Grids& grids,
                   JdfSpectra* spectra) {
  const int n = cov.half();
  if (static_cast<int>(manifold.delays.size()) != n) {
    throw Error(ErrorCode::DimensionMismatch,
                fmt::format("manifold has {} delays, covariance blocks are {}x{}", manifold.delays.size(), n, n));
  }
  if (K >= n) {
    throw Error(ErrorCode::KTooLarge, fmt::format("K = {} sources needs K < {}", K, n));
  }

  const auto freq_grid = grids.frequencies(manifold.constants);
  const auto g_xx = noise_subspace(eigh(cov.block(Block::XX)), K);
  const auto g_xbar = noise_subspace(eigh(cov.block(Block::XbarXbar)), K);
  auto spec_xx = freq_pseudospectrum(g_xx, manifold, freq_grid);
  auto spec_xbar = freq_pseudospectrum(g_xbar, manifold, freq_grid);
  const auto peaks_xx = pick_peaks(spec_xx, K);
  const auto peaks_xbar = pick_peaks(spec_xbar, K);

  const auto u = noise_subspace(eigh(cov.full()), K);
  const auto angle_grid = grids.angles();

  EstimateSet out;
  for (int k = 0; k < K; ++k) {
    const auto& a = peaks_xx[static_cast<std::size_t>(k)];
    const auto& b = peaks_xbar[static_cast<std::size_t>(k)];
    Estimate e;
    e.f_hz = 0.5 * (a.abscissa + b.abscissa);
    e.freq_peak = 0.5 * (a.height + b.height);
    auto doa = doa_pseudospectrum(u, manifold, e.f_hz, angle_grid);
    const Peak p = global_peak(doa);
    e.theta_deg = std::clamp(p.abscissa, -90.0, 90.0);
    e.doa_peak = p.height;
    out.pairs.push_back(e);
    if (spectra) spectra->doa.push_back(std::move(doa));
  }
  if (spectra) {
    spectra->freq_xx = std::move(spec_xx);
    spectra->freq_xbar = std::move(spec_xbar);
  }
  return out;
}

void write_spectrum_csv(const PseudoSpectrum& spectrum, const std::filesystem::path& path) {
  try {
    auto out = fmt::output_file(path.string());
    out.print("# kind={}, f_hat={}\n", spectrum.kind == SpectrumKind::Frequency ? "frequency" : "doa",
              spectrum.f_hat ? fmt::format("{:.17g}", *spectrum.f_hat) : std::string("none"));
    out.print("abscissa,value\n");
    for (std::size_t i = 0; i < spectrum.grid.size(); ++i) {
      out.print("{:.17g},{:.17g}\n", spectrum.grid[i], spectrum.values[i]);
    }
  } catch (const std::system_error& e) {
    throw Error(ErrorCode::Io, e.what());
  }
}

}  // namespace jdf
