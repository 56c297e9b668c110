#pragma once

#include <vector>

#include <Eigen/Dense>

#include "jdf/covariance.hpp"
#include "jdf/scenario.hpp"
#include "jdf/subspace.hpp"

namespace jdf {

/// Linear map from the M^2 column-vectorized entries of an M x M covariance
/// block onto the 2Q-1 contiguous coarray lags.
///
/// Output position i carries the coefficient of e^{+j omega (Q-1-i)}, so
/// applying the operator to conj(a) (x) a yields
/// [e^{j omega (Q-1)}, ..., e^{-j omega (Q-1)}]^T.  Entry (p, q) of a block
/// (vec index q*M + p) lands on lag c_q - c_p; repeated lags are averaged.
struct XiOperator {
  int M = 0;
  int Q = 0;
  std::vector<std::vector<int>> rows;  // source vec indices per output position
  std::vector<int> target;             // output position per vec index

  int lags() const { return 2 * Q - 1; }

  Eigen::VectorXcd apply(const Eigen::VectorXcd& r) const;
  /// Dense (2Q-1) x M^2 form.
  Eigen::MatrixXd matrix() const;
};

XiOperator build_xi(const DelayPattern& pattern);

/// The four stacked-covariance blocks, either as vec(R) (length M^2) or
/// after the lag rearrangement (length 2Q-1).
struct BlockVectors {
  Eigen::VectorXcd xx;
  Eigen::VectorXcd xxbar;
  Eigen::VectorXcd xbarx;
  Eigen::VectorXcd xbarxbar;
};

/// Column-stacks each block.  The noise term stays on the diagonal-block
/// vectors; nothing is subtracted.
BlockVectors vectorize_blocks(const CovarianceSet& cov);

BlockVectors virtual_vectors(const XiOperator& xi, const BlockVectors& vec);

/// Builds each Q x Q virtual block from sliding Q-windows of the lag vector
/// (column c holds window start Q-1-c) and stacks the four blocks.
VirtualCovariance assemble_virtual(const BlockVectors& z, int Q);

/// vectorize -> rearrange -> assemble in one call.
VirtualCovariance expand_covariance(const CovarianceSet& cov, const DelayPattern& pattern);

/// Lags 0..Q-1 of the virtual time-delay manifold.
Manifold virtual_manifold(int Q, const ArrayConstants& constants);

/// JDF4BA on the virtual covariance; identifies up to Q-1 sources.
EstimateSet jdf4ba_etm(const CovarianceSet& cov, const DelayPattern& pattern, const ArrayConstants& constants,
                       int K, const Grids& grids, JdfSpectra* spectra = nullptr);

}  // namespace jdf
