#include "jdf/covariance.hpp"

#include <fmt/format.h>
#include <fmt/os.h>

#include "jdf/error.hpp"
#include "jdf/manifold.hpp"

namespace jdf {

CovarianceSet::CovarianceSet(Eigen::MatrixXcd full, int n_used) : n_used_(n_used) {
  if (full.rows() != full.cols() || full.rows() % 2 != 0) {
    throw Error(ErrorCode::DimensionMismatch, "stacked covariance must be square with even size");
  }
  full_ = (full + full.adjoint()) * 0.5;
}

Eigen::Block<const Eigen::MatrixXcd> CovarianceSet::block(Block which) const {
  const Eigen::Index n = half();
  switch (which) {
    case Block::XX: return full_.block(0, 0, n, n);
    case Block::XXbar: return full_.block(0, n, n, n);
    case Block::XbarX: return full_.block(n, 0, n, n);
    case Block::XbarXbar: break;
  }
  return full_.block(n, n, n, n);
}

CovarianceSet sample_covariance(const Eigen::MatrixXcd& y) {
  if (y.cols() == 0) throw Error(ErrorCode::DegenerateSnapshots, "no snapshots");
  const Eigen::MatrixXcd r = (y * y.adjoint()) / static_cast<double>(y.cols());
  return {r, static_cast<int>(y.cols())};
}

CovarianceSet sample_covariance(const SnapshotMatrix& snapshots) {
  return sample_covariance(snapshots.data);
}

Eigen::MatrixXcd manifold_matrix(const Scenario& s) {
  const auto phases = unit_phases(s);
  Eigen::MatrixXcd a(2 * s.M(), s.K());
  for (int k = 0; k < s.K(); ++k) {
    a.col(k) = stacked_manifold(phases[static_cast<std::size_t>(k)].omega,
                                phases[static_cast<std::size_t>(k)].phi, s.pattern.coeffs);
  }
  return a;
}

CovarianceSet analytic_covariance(const Scenario& s, double noise_scale) {
  check_pattern_shape(s.pattern);
  const Eigen::MatrixXcd a = manifold_matrix(s);
  Eigen::VectorXd w(s.K());
  for (int k = 0; k < s.K(); ++k) w(k) = s.sources[static_cast<std::size_t>(k)].power;
  const Eigen::Index dim = 2 * s.M();
  Eigen::MatrixXcd r = a * w.asDiagonal() * a.adjoint();
  r += Eigen::MatrixXcd::Identity(dim, dim) * (noise_scale * s.sigma2);
  return {r, 0};
}

void write_covariance_csv(const CovarianceSet& cov, const std::filesystem::path& path) {
  try {
    auto out = fmt::output_file(path.string());
    const auto& r = cov.full();
    for (Eigen::Index i = 0; i < r.rows(); ++i) {
      for (Eigen::Index j = 0; j < r.cols(); ++j) {
        out.print("{}{:.17g},{:.17g}", j == 0 ? "" : ",", r(i, j).real(), r(i, j).imag());
      }
      out.print("\n");
    }
  } catch (const std::system_error& e) {
    throw Error(ErrorCode::Io, e.what());
  }
}

}  // namespace jdf
