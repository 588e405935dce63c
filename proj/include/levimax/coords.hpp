#pragma once

// Real/complex coordinate convention shared by every module:
//   z_j = x_{2j-1} + i x_{2j}   (1-based), i.e. z[j] = x[2j] + i x[2j+1] (0-based).
// Tangent vectors follow the same pairing.

#include <Eigen/Dense>
#include <complex>

namespace levimax {

using cplx = std::complex<double>;
using Point = Eigen::VectorXd;

inline Eigen::VectorXcd to_complex(const Eigen::VectorXd& x) {
  const Eigen::Index n = x.size() / 2;
  Eigen::VectorXcd z(n);
  for (Eigen::Index j = 0; j < n; ++j) z[j] = cplx(x[2 * j], x[2 * j + 1]);
  return z;
}

inline Eigen::VectorXd to_real(const Eigen::VectorXcd& z) {
  Eigen::VectorXd x(2 * z.size());
  for (Eigen::Index j = 0; j < z.size(); ++j) {
    x[2 * j] = z[j].real();
    x[2 * j + 1] = z[j].imag();
  }
  return x;
}

/// Matrix of multiplication by i on R^{2n}.
inline Eigen::MatrixXd standard_structure(int n) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (int k = 0; k < n; ++k) {
    j(2 * k + 1, 2 * k) = 1.0;
    j(2 * k, 2 * k + 1) = -1.0;
  }
  return j;
}

}  // namespace levimax
