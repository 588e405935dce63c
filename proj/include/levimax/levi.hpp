#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "levimax/almost_complex.hpp"
#include "levimax/field.hpp"

namespace levimax {

// Convention: H_J(u)(p, V) = -(d J*du)_p(X, JX). For J_st on C this is the
// Laplacian along V = d/dxi, i.e. four times the Wirtinger form sum L_kj V_k conj(V_j).
inline constexpr double kLeviConvention = 4.0;

/// beta_i(x) = sum_j du/dx_j(x) J_ji(x), so beta(X) = du(JX).
class OneForm {
 public:
  OneForm(AlmostComplexStructure s, ScalarField u);
  Eigen::VectorXd operator()(const Point& p) const;
  /// d beta_j / d x_i at p, as the matrix D(i, j); product rule over Hess u and dJ.
  Eigen::MatrixXd jacobian(const Point& p) const;
  /// d beta as an antisymmetric matrix: Omega_ij = d_i beta_j - d_j beta_i.
  Eigen::MatrixXd exterior_derivative(const Point& p) const;

 private:
  AlmostComplexStructure s_;
  ScalarField u_;
};

struct LeviQuadraticForm {
  Point point;
  /// Symmetric; V^T S V = H_J(u)(p, V).
  Eigen::MatrixXd s;

  double operator()(const Eigen::VectorXd& v) const { return v.dot(s * v); }
};

double levi_value(const AlmostComplexStructure& s, const ScalarField& u, const Point& p,
                  const Eigen::VectorXd& v);

/// Same value through Cartan's formula d beta(X, Y) = X beta(Y) - Y beta(X) - beta([X, Y])
/// with the vector fields X(z) = V + M(z - p) and Y = J X, all by finite differences.
double levi_value_extended(const AlmostComplexStructure& s, const ScalarField& u, const Point& p,
                           const Eigen::VectorXd& v, const Eigen::MatrixXd& m);

/// Matrix by polarization over the real basis.
LeviQuadraticForm levi_matrix(const AlmostComplexStructure& s, const ScalarField& u, const Point& p);

/// Smallest generalized eigenvalue of (S, 4 H_real): min over V of H_J(u)(p,V) / (4 h_p(V)).
double min_levi_eigen(const LeviQuadraticForm& form, const HermitianMetric& h);
double min_levi_eigen(const AlmostComplexStructure& s, const ScalarField& u, const Point& p,
                      const HermitianMetric& h);

struct PshPointRecord {
  Point point;
  double min_eigen = 0.0;
  bool pass = false;
};

struct PshReport {
  std::vector<PshPointRecord> points;
  double margin = 0.0;
  double worst_eigen = 0.0;
  Point worst_point;
  bool pass = false;
};

/// Passes iff every node has min_levi_eigen >= margin and > 0 (strict positivity).
PshReport is_strictly_psh(const AlmostComplexStructure& s, const ScalarField& u, const std::vector<Point>& grid,
                          const HermitianMetric& h, double margin);

struct InvarianceResult {
  double lhs = 0.0;  // H_{J'}(u o F)(p', V')
  double rhs = 0.0;  // H_J(u)(F(p'), dF(p') V')
  double holomorphy_residual = 0.0;
};

/// Checks |dF J' - J(F) dF| <= holomorphy_tol at p' and a few nearby samples, then
/// computes both sides independently. Throws PreconditionError if F is not holomorphic.
InvarianceResult hessian_invariance_check(const CoordinateChange& f, const AlmostComplexStructure& s_prime,
                                          const AlmostComplexStructure& s, const ScalarField& u,
                                          const Point& p_prime, const Eigen::VectorXd& v_prime,
                                          double holomorphy_tol = 1e-8);

/// u o F as a NUMERIC field.
ScalarField compose_field(const ScalarField& u, const CoordinateChange& f);

}  // namespace levimax
