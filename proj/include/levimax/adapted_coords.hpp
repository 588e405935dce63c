#pragma once

#include <vector>

#include <Eigen/Dense>

#include "levimax/almost_complex.hpp"
#include "levimax/field.hpp"

namespace levimax {

/// Real-linear chart z' = L(z - p) with L J(p) L^{-1} = J_st.
///
/// L^{-1} has columns (v_1, J v_1, ..., v_n, J v_n): v_1 = e_1 and each next v is
/// the normalized residual of the first standard basis vector outside the span
/// built so far. Already-standard J(p) gives L = I.
/// Throws PreconditionError unless J(p)^2 = -I within `tol`.
CoordinateChange linear_normalize(const AlmostComplexStructure& s, const Point& p, double tol = 1e-8);

/// z'_j = z_j + sum c_jkl z_k conj(z_l) with c_jkl = d A_jl / d z_k (0), which
/// removes d_z A(0) at first order. Requires A(0) = 0 within a_tol. The result is
/// verified: |A'(0)| and |d_z A'(0)| must be <= verify_tol, else ConvergenceError.
CoordinateChange quadratic_normalize(const AlmostComplexStructure& s, double a_tol = 1e-8,
                                     double verify_tol = 1e-8);

/// Both steps at p: the composite chart with Phi(p) = 0.
CoordinateChange adapted_chart(const AlmostComplexStructure& s, const Point& p);

struct AdaptedReport {
  /// max |A'(0)| entry.
  double a_residual = 0.0;
  /// max |d A' / d z_k (0)| entry over k.
  double da_residual = 0.0;
  /// Levi matrix of the transformed data at 0 and 4 x its J_st hermitian matrix.
  Eigen::MatrixXd levi;
  Eigen::MatrixXd hermitian;
  /// max |levi - hermitian| / max(1, max |levi|).
  double levi_residual = 0.0;
  double coefficient_tol = 1e-8;
  double levi_tol = 1e-5;
  bool pass = false;
};

/// Residuals at the chart origin for the structure pushed forward by phi and
/// u o phi^{-1}. Never throws on a failed check; the report carries it.
AdaptedReport verify_adapted(const AlmostComplexStructure& s, const CoordinateChange& phi, const ScalarField& u,
                             double coefficient_tol = 1e-8, double levi_tol = 1e-5);

/// Real matrix of V -> 4 sum L_kj V_k conj(V_j).
Eigen::MatrixXd hermitian_real_matrix(const Eigen::MatrixXcd& l);

}  // namespace levimax
