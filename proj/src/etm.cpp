#include "jdf/etm.hpp"

#include <numeric>

#include <fmt/format.h>

#include "jdf/error.hpp"

namespace jdf {

XiOperator build_xi(const DelayPattern& pattern) {
  XiOperator xi;
  xi.Q = validate_pattern(pattern);
  xi.M = pattern.M();
  xi.rows.assign(static_cast<std::size_t>(xi.lags()), {});
  xi.target.assign(static_cast<std::size_t>(xi.M * xi.M), 0);
  const auto& c = pattern.coeffs;
  for (int q = 0; q < xi.M; ++q) {
    for (int p = 0; p < xi.M; ++p) {
      const int index = q * xi.M + p;
      const int lag = c[static_cast<std::size_t>(q)] - c[static_cast<std::size_t>(p)];
      const int position = xi.Q - 1 - lag;
      xi.rows[static_cast<std::size_t>(position)].push_back(index);
      xi.target[static_cast<std::size_t>(index)] = position;
    }
  }
  return xi;
}

Eigen::VectorXcd XiOperator::apply(const Eigen::VectorXcd& r) const {
  if (r.size() != static_cast<Eigen::Index>(M) * M) {
    throw Error(ErrorCode::DimensionMismatch, fmt::format("expected a vector of length {}, got {}", M * M, r.size()));
  }
  Eigen::VectorXcd z(lags());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::complex<double> acc{0.0, 0.0};
    for (int index : rows[i]) acc += r(index);
    z(static_cast<Eigen::Index>(i)) = acc / static_cast<double>(rows[i].size());
  }
  return z;
}

Eigen::MatrixXd XiOperator::matrix() const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(lags(), M * M);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (int index : rows[i]) out(static_cast<Eigen::Index>(i), index) = 1.0 / static_cast<double>(rows[i].size());
  }
  return out;
}

namespace {

Eigen::VectorXcd vec(const Eigen::MatrixXcd& m) {
  return Eigen::Map<const Eigen::VectorXcd>(m.data(), m.size());
}

Eigen::MatrixXcd toeplitz_from_lags(const Eigen::VectorXcd& z, int Q) {
  if (z.size() != 2 * Q - 1) {
    throw Error(ErrorCode::DimensionMismatch, fmt::format("lag vector must have length {}, got {}", 2 * Q - 1, z.size()));
  }
  Eigen::MatrixXcd r(Q, Q);
  for (int col = 0; col < Q; ++col) r.col(col) = z.segment(Q - 1 - col, Q);
  return r;
}

}  // namespace

BlockVectors vectorize_blocks(const CovarianceSet& cov) {
  return {vec(cov.block(Block::XX)), vec(cov.block(Block::XXbar)), vec(cov.block(Block::XbarX)),
          vec(cov.block(Block::XbarXbar))};
}

BlockVectors virtual_vectors(const XiOperator& xi, const BlockVectors& v) {
  return {xi.apply(v.xx), xi.apply(v.xxbar), xi.apply(v.xbarx), xi.apply(v.xbarxbar)};
}

VirtualCovariance assemble_virtual(const BlockVectors& z, int Q) {
  Eigen::MatrixXcd full(2 * Q, 2 * Q);
  full.topLeftCorner(Q, Q) = toeplitz_from_lags(z.xx, Q);
  full.topRightCorner(Q, Q) = toeplitz_from_lags(z.xxbar, Q);
  full.bottomLeftCorner(Q, Q) = toeplitz_from_lags(z.xbarx, Q);
  full.bottomRightCorner(Q, Q) = toeplitz_from_lags(z.xbarxbar, Q);
  return {full, 0};
}

VirtualCovariance expand_covariance(const CovarianceSet& cov, const DelayPattern& pattern) {
  const XiOperator xi = build_xi(pattern);
  if (cov.half() != xi.M) {
    throw Error(ErrorCode::DimensionMismatch,
                fmt::format("covariance blocks are {}x{} but the pattern has M = {}", cov.half(), cov.half(), xi.M));
  }
  const auto expanded = assemble_virtual(virtual_vectors(xi, vectorize_blocks(cov)), xi.Q);
  return {expanded.full(), cov.n_used()};
}

Manifold virtual_manifold(int Q, const ArrayConstants& constants) {
  Manifold m{std::vector<int>(static_cast<std::size_t>(Q)), constants};
  std::iota(m.delays.begin(), m.delays.end(), 0);
  return m;
}

EstimateSet jdf4ba_etm(const CovarianceSet& cov, const DelayPattern& pattern, const ArrayConstants& constants,
                       int K, const Grids& grids, JdfSpectra* spectra) {
  const int Q = validate_pattern(pattern);
  if (K >= Q) throw Error(ErrorCode::KTooLarge, fmt::format("K = {} sources needs K < Q = {}", K, Q));
  const auto virtual_cov = expand_covariance(cov, pattern);
  auto out = jdf4ba(virtual_cov, virtual_manifold(Q, constants), K, grids, spectra);
  out.mode = EstimatorMode::Etm;
  return out;
}

}  // namespace jdf
