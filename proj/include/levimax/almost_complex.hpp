#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "levimax/coords.hpp"
#include "levimax/expr.hpp"
#include "levimax/field.hpp"

namespace levimax {

/// Lv = P v + Q conj(v) for a real-linear operator L on C^n.
struct LinearComplexDecomposition {
  Eigen::MatrixXcd p;
  Eigen::MatrixXcd q;

  Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const { return p * v + q * v.conjugate(); }
  /// The real 2n x 2n matrix of v -> P v + Q conj(v).
  Eigen::MatrixXd real_matrix() const;
};

/// P v = (Lv - i L(iv))/2, Q conj(v) = (Lv + i L(iv))/2 for a real 2n x 2n matrix L.
LinearComplexDecomposition decompose_linear(const Eigen::MatrixXd& l);

/// Complex matrix of a single operator J with J^2 = -I:
/// the unique A with (w + iJw) + A conj(w - iJw) = 0 for all w, namely
/// A = -iQ (I + i conj(P))^{-1} for J = (P, Q). Throws SingularError far from J_st.
Eigen::MatrixXcd complex_matrix_from_j(const Eigen::MatrixXd& j);

/// Inverse correspondence: J = K' K^{-1} with K(a) = a - A conj(a), K'(a) = i(a + A conj(a)).
/// Throws PreconditionError when the operator norm of A is >= 1.
Eigen::MatrixXd j_from_complex_matrix(const Eigen::MatrixXcd& a);

/// Residual of the defining identity (w + iJw) + A conj(w - iJw) for one vector.
double defining_identity_residual(const Eigen::MatrixXd& j, const Eigen::MatrixXcd& a,
                                  const Eigen::VectorXcd& w);

/// Chart-local almost complex structure on a ball of C^n, stored either as the
/// real matrix field J(z) or as the complex matrix field A(z) of the quasilinear
/// Cauchy–Riemann system. Immutable; safe for concurrent evaluation.
class AlmostComplexStructure {
 public:
  enum class Representation { JMatrix, ComplexMatrix };
  using JFn = std::function<Eigen::MatrixXd(const Point&)>;
  using AFn = std::function<Eigen::MatrixXcd(const Point&)>;

  class Impl {
   public:
    virtual ~Impl() = default;
    virtual Representation representation() const = 0;
    virtual DerivativeTier tier() const { return DerivativeTier::Numeric; }
    virtual Eigen::MatrixXd j(const Point& p) const = 0;
    virtual Eigen::MatrixXcd a(const Point& p) const = 0;
    /// dJ/dx_i for i < 2n; finite differences unless overridden.
    virtual std::vector<Eigen::MatrixXd> j_derivatives(const Point& p) const;
  };

  AlmostComplexStructure(int n, std::shared_ptr<const Impl> impl, std::string label);

  static AlmostComplexStructure standard(int n);
  /// 2n x 2n real expression entries J(z) (EXACT tier).
  static AlmostComplexStructure from_j_expressions(int n, const std::vector<std::vector<Expression>>& entries);
  /// n x n complex entries given as (real part, imaginary part) expressions.
  static AlmostComplexStructure from_a_expressions(
      int n, const std::vector<std::vector<std::pair<Expression, Expression>>>& entries);
  static AlmostComplexStructure from_j_function(int n, JFn fn, std::string label = "J-field");
  static AlmostComplexStructure from_a_function(int n, AFn fn, std::string label = "A-field");

  int dimension() const noexcept { return n_; }
  Representation representation() const { return impl_->representation(); }
  DerivativeTier tier() const { return impl_->tier(); }
  const std::string& label() const noexcept { return label_; }

  Eigen::MatrixXd j(const Point& p) const;
  Eigen::MatrixXcd a(const Point& p) const;
  std::vector<Eigen::MatrixXd> j_derivatives(const Point& p) const;

 private:
  void check_point(const Point& p) const;

  int n_;
  std::shared_ptr<const Impl> impl_;
  std::string label_;
};

/// complex_matrix(S, p): A(p) for any representation.
inline Eigen::MatrixXcd complex_matrix(const AlmostComplexStructure& s, const Point& p) { return s.a(p); }

/// The same structure re-expressed in the J-matrix representation (NUMERIC tier).
AlmostComplexStructure structure_from_complex_matrix(const AlmostComplexStructure& a_field);

struct StructureReport {
  AlmostComplexStructure::Representation representation;
  std::size_t points = 0;
  /// J form: max |J^2 + I| entry. A form: max operator norm of A.
  double max_residual = 0.0;
  /// A form only: 1 - max ||A||.
  double margin = 0.0;
  Point worst_point;
  double tolerance = 0.0;
  bool pass = false;
};

StructureReport validate_structure(const AlmostComplexStructure& s, const std::vector<Point>& grid,
                                   double tolerance = 1e-8);

/// Default validation lattice: 9 points per axis on [-0.9, 0.9]^{2n}.
std::vector<Point> default_structure_grid(int n);

/// Smooth chart change z' = Phi(z) on C^n (real 2n coordinates).
class CoordinateChange {
 public:
  enum class Kind { Identity, Affine, Quadratic, Expression, Function, Composite };

  class Impl {
   public:
    virtual ~Impl() = default;
    virtual Kind kind() const = 0;
    virtual Point apply(const Point& z) const = 0;
    virtual Eigen::MatrixXd jacobian(const Point& z) const;
    virtual std::optional<Point> explicit_inverse(const Point&) const { return std::nullopt; }
  };

  CoordinateChange(int n, std::shared_ptr<const Impl> impl);

  static CoordinateChange identity(int n);
  /// z' = L (z - origin).
  static CoordinateChange affine(const Eigen::MatrixXd& l, const Point& origin);
  /// z'_j = z_j + sum_{k,l} c[j](k,l) z_k conj(z_l).
  static CoordinateChange quadratic(const std::vector<Eigen::MatrixXcd>& c);
  /// 2n real component expressions, optionally with explicit inverse components.
  static CoordinateChange from_expressions(int n, const std::vector<Expression>& components,
                                           const std::vector<Expression>& inverse = {});
  static CoordinateChange from_function(int n, std::function<Point(const Point&)> fn);
  /// outer o inner.
  static CoordinateChange compose(const CoordinateChange& outer, const CoordinateChange& inner);

  int dimension() const noexcept { return n_; }
  Kind kind() const { return impl_->kind(); }

  Point operator()(const Point& z) const;
  /// Real 2n x 2n differential.
  Eigen::MatrixXd jacobian(const Point& z) const;
  /// Wirtinger derivatives (dz'/dz, dz'/dzbar), the (P, Q) split of the differential.
  LinearComplexDecomposition wirtinger(const Point& z) const;
  /// Phi^{-1}(q): explicit inverse if provided, else Newton from `guess` (default q).
  Point inverse(const Point& q, const std::optional<Point>& guess = std::nullopt) const;

  /// Affine: (L, origin). Quadratic: coefficients. Empty otherwise.
  std::optional<std::pair<Eigen::MatrixXd, Point>> affine_part() const;
  std::optional<std::vector<Eigen::MatrixXcd>> quadratic_coefficients() const;

 private:
  int n_;
  std::shared_ptr<const Impl> impl_;
};

/// A' at Phi(p) from ((dz'/dz) A - dz'/dzbar)(conj(dz'/dz) - conj(dz'/dzbar) A)^{-1}.
/// Throws SingularError when the inverted factor is singular.
Eigen::MatrixXcd transform_complex_matrix(const AlmostComplexStructure& s, const CoordinateChange& phi,
                                          const Point& p);

/// Direct image: J'(Phi(z)) = dPhi(z) J(z) dPhi(z)^{-1} (NUMERIC tier, inverse by Newton).
AlmostComplexStructure pushforward(const AlmostComplexStructure& s, const CoordinateChange& phi);

/// Pullback by F: J(z) = dF(z)^{-1} J_S(F(z)) dF(z); F becomes (J, J_S)-holomorphic.
AlmostComplexStructure pullback(const AlmostComplexStructure& s, const CoordinateChange& f);

/// Isotropic dilation: A_lambda(w) = A(lambda w) (same representation). lambda > 0.
AlmostComplexStructure scale_structure(const AlmostComplexStructure& s, double lambda);

/// Wirtinger derivatives of a matrix field at p by central differences with
/// Richardson (step h): returns (d/dz_k, d/dzbar_k) for k < n.
std::pair<std::vector<Eigen::MatrixXcd>, std::vector<Eigen::MatrixXcd>> wirtinger_matrix_derivatives(
    const std::function<Eigen::MatrixXcd(const Point&)>& fn, const Point& p, double h = 1e-5);

}  // namespace levimax
