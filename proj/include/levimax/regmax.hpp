#pragma once

#include <span>
#include <vector>

#include "levimax/field.hpp"
#include "levimax/quadrature.hpp"

namespace levimax {

/// The bump omega(s) = C exp(-1/(s(1-s))) on (0,1), zero elsewhere, with unit mass.
///
/// Besides the density it provides the distribution function F(s) = int_0^s omega,
/// tabulated once on 512 cells and completed inside a cell by a 16-point rule.
class Mollifier {
 public:
  /// Process-wide instance; built on first use and immutable afterwards.
  static const Mollifier& standard();

  double constant() const noexcept { return c_; }
  /// Unnormalized integral int_0^1 exp(-1/(s(1-s))) ds.
  double raw_integral() const noexcept { return 1.0 / c_; }
  double first_moment() const noexcept { return m1_; }

  static double raw_kernel(double s);
  double density(double s) const { return c_ * raw_kernel(s); }
  /// Distribution function, clamped to [0, 1]; exactly 0 for s <= 0 and 1 for s >= 1.
  double cdf(double s) const;

 private:
  Mollifier();

  static constexpr int kCells = 512;
  double c_ = 0.0;
  double m1_ = 0.0;
  std::vector<double> table_;  // normalized cdf at cell boundaries
  GaussLegendreRule cell_rule_{16};
};

/// Mollifier constant C with C * int_0^1 exp(-1/(s(1-s))) ds = 1.
double mollifier_constant();

/// Smoothing widths theta_j > 0.
class ThetaVector {
 public:
  explicit ThetaVector(std::vector<double> theta);
  std::size_t size() const noexcept { return theta_.size(); }
  double operator[](std::size_t j) const { return theta_[j]; }
  const std::vector<double>& values() const noexcept { return theta_; }
  double max() const;

 private:
  std::vector<double> theta_;
};

inline constexpr int kDefaultMaxArity = 4;

/// Regularized max M_theta(t) = int max_j(t_j + s_j) prod_j omega(s_j/theta_j)/theta_j ds.
///
/// With S_j iid of density omega, M_theta(t) = E[max_j(t_j + theta_j S_j)], which reduces
/// to max(t) + int_{max t}^{max(t+theta)} (1 - prod_j F((x - t_j)/theta_j)) dx.
/// The integrand is smooth, so adaptive Gauss–Legendre split at the points t_j and
/// t_j + theta_j reaches ~1e-14. Nonnegative integrand and weights keep
/// max(t) <= M <= max(t+theta) exactly.
class RegularizedMax {
 public:
  /// Throws PreconditionError when theta has more than max_arity components.
  explicit RegularizedMax(ThetaVector theta, int max_arity = kDefaultMaxArity);

  std::size_t arity() const noexcept { return theta_.size(); }
  const ThetaVector& theta() const noexcept { return theta_; }

  double operator()(std::span<const double> t) const;

  /// dM/dt_j = int f_j(x) prod_{l != j} F_l(x) dx = P(t_j + theta_j S_j is the max).
  /// This is the derivative of the shifted form of the integral with the other
  /// coordinates integrated out.
  std::vector<double> gradient(std::span<const double> t) const;

 private:
  void check(std::span<const double> t) const;
  std::vector<double> breakpoints(std::span<const double> t, double lo, double hi) const;

  ThetaVector theta_;
};

double regmax_eval(std::span<const double> t, const ThetaVector& theta,
                   int max_arity = kDefaultMaxArity);
std::vector<double> regmax_grad(std::span<const double> t, const ThetaVector& theta,
                                int max_arity = kDefaultMaxArity);

/// Composite NUMERIC-tier field p -> M_theta(u_1(p), ..., u_k(p)).
ScalarField regmax_field(const std::vector<ScalarField>& u, const ThetaVector& theta,
                         int max_arity = kDefaultMaxArity);

}  // namespace levimax
