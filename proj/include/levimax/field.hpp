#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>

#include <Eigen/Dense>

#include "levimax/coords.hpp"
#include "levimax/expr.hpp"

namespace levimax {

enum class DerivativeTier { Exact, Numeric };

/// A real function of 2n real variables with derivatives up to order 2.
///
/// EXACT fields come from expressions and differentiate by forward jets;
/// NUMERIC fields (closures, composites) use Richardson-extrapolated central
/// differences. Fields are immutable and safe to evaluate concurrently.
class ScalarField {
 public:
  class Impl {
   public:
    virtual ~Impl() = default;
    virtual double value(const Point& p) const = 0;
    virtual DerivativeTier tier() const { return DerivativeTier::Numeric; }
    virtual Jet2 jet(const Point& p) const;
  };

  ScalarField(int n, std::shared_ptr<const Impl> impl, std::string label = {});

  static ScalarField from_expression(const Expression& e);
  static ScalarField parse(std::string_view text, int n);
  static ScalarField from_function(int n, std::function<double(const Point&)> fn,
                                   std::string label = "closure");

  int dimension() const noexcept { return n_; }
  DerivativeTier tier() const { return impl_->tier(); }
  const std::string& label() const noexcept { return label_; }

  double operator()(const Point& p) const;
  /// Value, gradient and Hessian; exact for EXACT tier, finite differences otherwise.
  Jet2 jet(const Point& p) const;

 private:
  void check_point(const Point& p) const;

  int n_;
  std::shared_ptr<const Impl> impl_;
  std::string label_;
};

/// Mixed partial of order |idx| <= 2; idx lists 0-based real coordinate indices
/// (empty = value, {i} = d/dx_{i+1}, {i, j} = d^2/dx_{i+1}dx_{j+1}).
double derivative(const ScalarField& f, const Point& p, std::span<const int> idx);
double derivative(const ScalarField& f, const Point& p, std::initializer_list<int> idx);

/// Finite-difference gradient and Hessian regardless of tier (used as oracles).
Eigen::VectorXd numeric_gradient(const ScalarField& f, const Point& p);
Eigen::MatrixXd numeric_hessian(const ScalarField& f, const Point& p);

/// Wirtinger matrix L_kj = d^2 u / dz_k dzbar_j at p, symmetrized to be hermitian.
Eigen::MatrixXcd hermitian_hessian_jst(const ScalarField& f, const Point& p);

/// Same from a real Hessian; also reports the pre-symmetrization asymmetry.
Eigen::MatrixXcd hermitian_from_real_hessian(const Eigen::MatrixXd& hess, double* asymmetry = nullptr);

/// Hermitian form sum_kj L_kj v_k conj(v_j).
double hermitian_form(const Eigen::MatrixXcd& l, const Eigen::VectorXcd& v);

/// Positive-definite hermitian metric h_p(V) = V^* H(p) V, constant or field-valued.
class HermitianMetric {
 public:
  using MatrixFn = std::function<Eigen::MatrixXcd(const Point&)>;

  static HermitianMetric euclidean(int n);
  /// Throws PreconditionError unless `h` is hermitian positive definite.
  static HermitianMetric constant(const Eigen::MatrixXcd& h);
  static HermitianMetric field(int n, MatrixFn fn);

  int dimension() const noexcept { return n_; }
  Eigen::MatrixXcd matrix(const Point& p) const { return fn_(p); }
  double value(const Point& p, const Eigen::VectorXcd& v) const;
  /// Real symmetric 2n x 2n matrix with x^T R x = h_p(x as complex vector).
  Eigen::MatrixXd real_form(const Point& p) const;

 private:
  HermitianMetric(int n, MatrixFn fn) : n_(n), fn_(std::move(fn)) {}
  int n_;
  MatrixFn fn_;
};

}  // namespace levimax
