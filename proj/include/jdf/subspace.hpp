#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "jdf/covariance.hpp"
#include "jdf/scenario.hpp"

namespace jdf {

/// Eigenpairs of a Hermitian matrix, values ascending, vectors.col(i)
/// paired with values(i).
struct EigenBasis {
  Eigen::VectorXd values;
  Eigen::MatrixXcd vectors;

  int dim() const { return static_cast<int>(values.size()); }
};

EigenBasis eigh(const Eigen::MatrixXcd& matrix);

/// Eigenvectors of the dim - K smallest eigenvalues.
Eigen::MatrixXcd noise_subspace(const EigenBasis& basis, int K);

enum class SpectrumKind { Frequency, Doa };

struct PseudoSpectrum {
  std::vector<double> grid;  // Hz for frequency, degrees for DOA
  std::vector<double> values;
  SpectrumKind kind = SpectrumKind::Frequency;
  std::optional<double> f_hat;  // DOA scans only
};

struct Grids {
  int freq_points = 4096;
  int doa_points = 721;

  /// Uniform over [0, 1/tau).
  std::vector<double> frequencies(const ArrayConstants& constants) const;
  /// Uniform over [-90, 90] degrees, both endpoints included.
  std::vector<double> angles() const;
};

/// Delay lags of the steering vector together with the array constants
/// that turn (f, theta) into (omega, phi).  Plain estimation uses the
/// physical pattern; the virtual covariance uses lags 0..Q-1.
struct Manifold {
  std::vector<int> delays;
  ArrayConstants constants;
};

PseudoSpectrum freq_pseudospectrum(const Eigen::MatrixXcd& noise, const Manifold& manifold,
                                   std::span<const double> grid_hz);

PseudoSpectrum doa_pseudospectrum(const Eigen::MatrixXcd& noise, const Manifold& manifold, double f_hat,
                                  std::span<const double> grid_deg);

struct Peak {
  double abscissa = 0.0;
  double height = 0.0;
};

/// K highest strict local maxima, each refined by the vertex of the parabola
/// through it and its neighbours, returned in ascending abscissa order.
std::vector<Peak> pick_peaks(const PseudoSpectrum& spectrum, int K);

struct Estimate {
  double f_hz = 0.0;
  double theta_deg = 0.0;
  double freq_peak = 0.0;
  double doa_peak = 0.0;
};

struct EstimateSet {
  std::vector<Estimate> pairs;  // ascending frequency
  EstimatorMode mode = EstimatorMode::Plain;

  int K() const { return static_cast<int>(pairs.size()); }
};

/// Intermediate spectra kept for export.
struct JdfSpectra {
  PseudoSpectrum freq_xx;
  PseudoSpectrum freq_xbar;
  std::vector<PseudoSpectrum> doa;
};

/// Twice-MUSIC joint estimator on a stacked covariance: frequencies from the
/// two diagonal blocks (averaged), then one DOA scan per frequency on the
/// full matrix, which keeps each (f, theta) pair together.
EstimateSet jdf4ba(const CovarianceSet& cov, const Manifold& manifold, int K, const Grids& grids,
                   JdfSpectra* spectra = nullptr);

void write_spectrum_csv(const PseudoSpectrum& spectrum, const std::filesystem::path& path);

}  // namespace jdf
