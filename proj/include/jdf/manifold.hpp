#pragma once

#include <complex>
#include <span>

#include <Eigen/Dense>

namespace jdf {

/// Time-delay steering vector [e^{-j omega c_1}, ..., e^{-j omega c_M}]^T.
inline Eigen::VectorXcd time_delay_manifold(double omega, std::span<const int> delays) {
  Eigen::VectorXcd a(static_cast<Eigen::Index>(delays.size()));
  for (std::size_t m = 0; m < delays.size(); ++m) {
    a(static_cast<Eigen::Index>(m)) = std::polar(1.0, -omega * delays[m]);
  }
  return a;
}

/// Stacked two-element steering vector [a_t; a_t e^{-j phi}].
inline Eigen::VectorXcd stacked_manifold(double omega, double phi, std::span<const int> delays) {
  const Eigen::VectorXcd at = time_delay_manifold(omega, delays);
  Eigen::VectorXcd a(2 * at.size());
  a.head(at.size()) = at;
  a.tail(at.size()) = at * std::polar(1.0, -phi);
  return a;
}

}  // namespace jdf
