#pragma once

#include <filesystem>

#include <Eigen/Dense>

#include "jdf/scenario.hpp"
#include "jdf/synth.hpp"

namespace jdf {

enum class Block { XX, XXbar, XbarX, XbarXbar };

/// Stacked 2n x 2n Hermitian covariance of the two elements' branch outputs,
/// laid out as [[R_XX, R_XXbar], [R_XbarX, R_XbarXbar]].  The same type holds
/// the physical (n = M) and the virtual (n = Q) covariance.
class CovarianceSet {
 public:
  CovarianceSet() = default;
  /// Symmetrizes `full` to (R + R^H)/2.  n_used = 0 marks an analytic matrix.
  CovarianceSet(Eigen::MatrixXcd full, int n_used);

  const Eigen::MatrixXcd& full() const { return full_; }
  int half() const { return static_cast<int>(full_.rows() / 2); }
  int n_used() const { return n_used_; }

  Eigen::Block<const Eigen::MatrixXcd> block(Block which) const;

 private:
  Eigen::MatrixXcd full_;
  int n_used_ = 0;
};

using VirtualCovariance = CovarianceSet;

inline Eigen::MatrixXcd block(const CovarianceSet& cov, Block which) { return cov.block(which); }

CovarianceSet sample_covariance(const Eigen::MatrixXcd& snapshots);
CovarianceSet sample_covariance(const SnapshotMatrix& snapshots);

/// Stacked manifold matrix A with one column a(f_k, phi_k) per source.
Eigen::MatrixXcd manifold_matrix(const Scenario& scenario);

/// A diag(W) A^H + noise_scale * sigma2 * I.  noise_scale = 1 matches the
/// time-domain estimator; noise_scale = L reproduces the folded-noise form.
CovarianceSet analytic_covariance(const Scenario& scenario, double noise_scale = 1.0);

/// One row per matrix row, `re,im` pairs separated by commas.
void write_covariance_csv(const CovarianceSet& cov, const std::filesystem::path& path);

}  // namespace jdf
