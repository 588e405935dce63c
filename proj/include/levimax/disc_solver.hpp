#pragma once

#include <vector>

#include <Eigen/Dense>

#include "levimax/almost_complex.hpp"
#include "levimax/field.hpp"
#include "levimax/quadrature.hpp"

namespace levimax {

/// Polar grid on the disc of radius r: Gauss–Legendre rings s_j in (0, r) times
/// N_phi equispaced sectors. Node (j, k) has flat index j * N_phi + k.
class DiscGrid {
 public:
  DiscGrid(double radius, int n_r, int n_phi);

  double radius() const noexcept { return radius_; }
  int rings() const noexcept { return n_r_; }
  int sectors() const noexcept { return n_phi_; }
  int size() const noexcept { return n_r_ * n_phi_; }
  double ring(int j) const { return s_[j]; }
  double angle(int k) const;
  cplx node(int j, int k) const;
  cplx node(int index) const { return node(index / n_phi_, index % n_phi_); }
  /// Area weight of node (j, k): GL weight * s_j * dphi. Sums to pi r^2.
  double weight(int j, int k) const;
  double total_weight() const;

  const std::vector<double>& ring_nodes() const noexcept { return s_; }
  const std::vector<double>& ring_weights() const noexcept { return w_; }

 private:
  double radius_;
  int n_r_;
  int n_phi_;
  std::vector<double> s_;
  std::vector<double> w_;
};

/// T[g] = (1/pi) int g(w) / (zeta - w) dA(w), so that d/dzbar T[g] = g.
///
/// g is expanded in angular modes m = -N/2+1 .. N/2-1 on each ring; each mode
/// reduces to a one-dimensional radial integral evaluated by Gauss–Legendre
/// on [0, rho] and [rho, r] with polynomial interpolation between rings.
class CauchyGreenTransform {
 public:
  /// `g` has one row per grid node and one column per component.
  CauchyGreenTransform(const DiscGrid& grid, const Eigen::MatrixXcd& g);

  int components() const noexcept { return comps_; }
  /// T[g] and d/dzeta T[g] at an arbitrary point of the closed disc.
  Eigen::VectorXcd value(cplx zeta) const;
  Eigen::VectorXcd dzeta(cplx zeta) const;
  /// Trigonometric/polynomial interpolant of g itself.
  Eigen::VectorXcd density(cplx zeta) const;
  /// T[g] and d/dzeta T[g] at all grid nodes.
  void at_nodes(Eigen::MatrixXcd& values, Eigen::MatrixXcd& dz) const;

 private:
  struct Ring {
    Eigen::MatrixXcd c;    // modes x comps
    Eigen::MatrixXcd d;    // modes x comps
    Eigen::MatrixXcd hat;  // modes x comps, g-hat at rho
  };
  Ring ring_at(double rho) const;
  Eigen::VectorXd interpolation_row(double x) const;
  int mode(int index) const { return index - half_; }

  DiscGrid grid_;
  int comps_;
  int half_;   // modes run over index 0..2*half_, m = index - half_
  std::vector<Eigen::MatrixXcd> hat_;  // per component: rings x modes
  std::vector<double> bary_;
  GaussLegendreRule sub_rule_;
};

/// Node samples of T[g].
Eigen::MatrixXcd cauchy_green(const DiscGrid& grid, const Eigen::MatrixXcd& g);

struct DiscOptions {
  double radius = 0.1;
  int n_r = 32;
  int n_phi = 64;
  double tol = 1e-4;
  int max_iterations = 50;
  /// The structure is trusted on the ball |x| < chart_radius.
  double chart_radius = 1.0;
};

/// Disc f(zeta) = p + zeta V + T[g](zeta) - T[g](0) - b zeta with g = -A(f) conj(f_zeta),
/// b chosen so that f(0) = p and df(0)(d/dxi) = V.
class DiscMap {
 public:
  DiscMap(DiscGrid grid, Eigen::VectorXcd p, Eigen::VectorXcd v, Eigen::MatrixXcd g);

  const DiscGrid& grid() const noexcept { return grid_; }
  Eigen::VectorXcd center() const { return p_; }
  Eigen::VectorXcd center_derivative() const { return v_; }
  /// f and (f_zeta, f_zetabar) anywhere in the disc.
  Eigen::VectorXcd operator()(cplx zeta) const;
  Eigen::VectorXcd dzeta(cplx zeta) const;
  /// Node samples (rows = nodes, cols = components).
  const Eigen::MatrixXcd& values() const noexcept { return values_; }
  const Eigen::MatrixXcd& dzeta_values() const noexcept { return dz_values_; }

  int iterations = 0;
  double final_increment = 0.0;
  double cr_residual = 0.0;

 private:
  DiscGrid grid_;
  Eigen::VectorXcd p_;
  Eigen::VectorXcd v_;
  CauchyGreenTransform transform_;
  Eigen::VectorXcd t0_;
  Eigen::VectorXcd b_;
  Eigen::MatrixXcd values_;
  Eigen::MatrixXcd dz_values_;
};

/// Picard iteration for the disc through p tangent to V. Throws ConvergenceError
/// after max_iterations and DomainError if the disc leaves the chart ball.
DiscMap solve_disc(const AlmostComplexStructure& s, const Point& p, const Eigen::VectorXcd& v,
                   const DiscOptions& options = {});

/// max |d_eta f - J(f) d_xi f| over off-node check points (mid-radii x mid-angles,
/// at most `max_radii` x `max_angles`), by central differences of the disc.
double cr_residual(const AlmostComplexStructure& s, const DiscMap& f, int max_radii = 8, int max_angles = 16);

/// Laplacian of u o f at 0 by the 5-point stencil at r/4 and r/8 with one
/// Richardson step: the Levi form along V.
double hessian_via_disc(const AlmostComplexStructure& s, const ScalarField& u, const Point& p,
                        const Eigen::VectorXcd& v, const DiscOptions& options = {});

/// Average of u o f over the circle of radius rho (N_phi equispaced samples).
double circle_average(const ScalarField& u, const DiscMap& f, double rho);

}  // namespace levimax
