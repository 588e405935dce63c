#include "levimax/almost_complex.hpp"

#include <cmath>

#include "levimax/errors.hpp"
#include "levimax/finite_difference.hpp"
#include "levimax/grid.hpp"

namespace levimax {

namespace {

const cplx kI(0.0, 1.0);

// Complex images of the real basis vectors e_0..e_{2n-1}.
Eigen::MatrixXcd real_basis_images(int n) {
  Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(n, 2 * n);
  for (int k = 0; k < n; ++k) {
    b(k, 2 * k) = 1.0;
    b(k, 2 * k + 1) = kI;
  }
  return b;
}

Eigen::VectorXcd apply_real(const Eigen::MatrixXd& l, const Eigen::VectorXcd& v) {
  return to_complex(l * to_real(v));
}

double operator_norm(const Eigen::MatrixXcd& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
  return svd.singularValues()[0];
}

}  // namespace

Eigen::MatrixXd LinearComplexDecomposition::real_matrix() const {
  const int n = static_cast<int>(p.rows());
  const Eigen::MatrixXcd basis = real_basis_images(n);
  Eigen::MatrixXd l(2 * n, 2 * n);
  for (int a = 0; a < 2 * n; ++a) l.col(a) = to_real(apply(basis.col(a)));
  return l;
}

LinearComplexDecomposition decompose_linear(const Eigen::MatrixXd& l) {
  if (l.rows() != l.cols() || l.rows() % 2 != 0) {
    throw DimensionError("real-linear operator must be 2n x 2n");
  }
  const int n = static_cast<int>(l.rows() / 2);
  LinearComplexDecomposition d{Eigen::MatrixXcd(n, n), Eigen::MatrixXcd(n, n)};
  for (int k = 0; k < n; ++k) {
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(n);
    e[k] = 1.0;
    const Eigen::VectorXcd le = apply_real(l, e);
    const Eigen::VectorXcd lie = apply_real(l, kI * e);
    d.p.col(k) = 0.5 * (le - kI * lie);
    d.q.col(k) = 0.5 * (le + kI * lie);
  }
  return d;
}

Eigen::MatrixXcd complex_matrix_from_j(const Eigen::MatrixXd& j) {
  const LinearComplexDecomposition d = decompose_linear(j);
  const int n = static_cast<int>(d.p.rows());
  const Eigen::MatrixXcd factor = Eigen::MatrixXcd::Identity(n, n) + kI * d.p.conjugate();
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(factor.transpose());
  if (!lu.isInvertible() || lu.rcond() < 1e-12) {
    throw SingularError("I + i conj(P) is singular: structure too far from J_st in this chart");
  }
  // Solve X (I + i conj P) = -iQ via the transpose system.
  const Eigen::MatrixXcd rhs = (-kI * d.q).transpose();
  return lu.solve(rhs).transpose();
}

Eigen::MatrixXd j_from_complex_matrix(const Eigen::MatrixXcd& a) {
  if (a.rows() != a.cols()) throw DimensionError("complex matrix must be square");
  const double norm = operator_norm(a);
  if (!(norm < 1.0)) {
    throw PreconditionError("complex matrix has operator norm " + std::to_string(norm) + " >= 1");
  }
  const int n = static_cast<int>(a.rows());
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  const Eigen::MatrixXd k = LinearComplexDecomposition{id, -a}.real_matrix();
  const Eigen::MatrixXd k_prime = LinearComplexDecomposition{kI * id, kI * a}.real_matrix();
  // J = K' K^{-1}  <=>  K^T J^T = K'^T
  return k.transpose().partialPivLu().solve(k_prime.transpose()).transpose();
}

double defining_identity_residual(const Eigen::MatrixXd& j, const Eigen::MatrixXcd& a,
                                  const Eigen::VectorXcd& w) {
  const Eigen::VectorXcd jw = apply_real(j, w);
  const Eigen::VectorXcd lhs = (w + kI * jw) + a * (w - kI * jw).conjugate();
  return lhs.cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------
// Structures

std::vector<Eigen::MatrixXd> AlmostComplexStructure::Impl::j_derivatives(const Point& p) const {
  auto fn = [this](const Point& x) { return j(x); };
  std::vector<Eigen::MatrixXd> out;
  out.reserve(p.size());
  for (int i = 0; i < p.size(); ++i) out.push_back(fd::partial(fn, p, i));
  return out;
}

namespace {

using Rep = AlmostComplexStructure::Representation;

class JExpressionImpl final : public AlmostComplexStructure::Impl {
 public:
  JExpressionImpl(int n, std::vector<std::vector<Expression>> e) : n_(n), entries_(std::move(e)) {}
  Rep representation() const override { return Rep::JMatrix; }
  DerivativeTier tier() const override { return DerivativeTier::Exact; }
  Eigen::MatrixXd j(const Point& p) const override {
    Eigen::MatrixXd m(2 * n_, 2 * n_);
    for (int r = 0; r < 2 * n_; ++r)
      for (int c = 0; c < 2 * n_; ++c) m(r, c) = entries_[r][c].eval(p);
    return m;
  }
  Eigen::MatrixXcd a(const Point& p) const override { return complex_matrix_from_j(j(p)); }
  std::vector<Eigen::MatrixXd> j_derivatives(const Point& p) const override {
    std::vector<Eigen::MatrixXd> out(2 * n_, Eigen::MatrixXd(2 * n_, 2 * n_));
    for (int r = 0; r < 2 * n_; ++r) {
      for (int c = 0; c < 2 * n_; ++c) {
        const Jet2 jet = entries_[r][c].eval_jet(p);
        for (int i = 0; i < 2 * n_; ++i) out[i](r, c) = jet.grad[i];
      }
    }
    return out;
  }

 private:
  int n_;
  std::vector<std::vector<Expression>> entries_;
};

class JFunctionImpl final : public AlmostComplexStructure::Impl {
 public:
  explicit JFunctionImpl(AlmostComplexStructure::JFn fn) : fn_(std::move(fn)) {}
  Rep representation() const override { return Rep::JMatrix; }
  Eigen::MatrixXd j(const Point& p) const override { return fn_(p); }
  Eigen::MatrixXcd a(const Point& p) const override { return complex_matrix_from_j(fn_(p)); }

 private:
  AlmostComplexStructure::JFn fn_;
};

class AFunctionImpl final : public AlmostComplexStructure::Impl {
 public:
  explicit AFunctionImpl(AlmostComplexStructure::AFn fn) : fn_(std::move(fn)) {}
  Rep representation() const override { return Rep::ComplexMatrix; }
  Eigen::MatrixXd j(const Point& p) const override { return j_from_complex_matrix(fn_(p)); }
  Eigen::MatrixXcd a(const Point& p) const override { return fn_(p); }

 private:
  AlmostComplexStructure::AFn fn_;
};

class StandardImpl final : public AlmostComplexStructure::Impl {
 public:
  explicit StandardImpl(int n) : n_(n), j_(standard_structure(n)) {}
  Rep representation() const override { return Rep::JMatrix; }
  DerivativeTier tier() const override { return DerivativeTier::Exact; }
  Eigen::MatrixXd j(const Point&) const override { return j_; }
  Eigen::MatrixXcd a(const Point&) const override { return Eigen::MatrixXcd::Zero(n_, n_); }
  std::vector<Eigen::MatrixXd> j_derivatives(const Point&) const override {
    return std::vector<Eigen::MatrixXd>(2 * n_, Eigen::MatrixXd::Zero(2 * n_, 2 * n_));
  }

 private:
  int n_;
  Eigen::MatrixXd j_;
};

}  // namespace

AlmostComplexStructure::AlmostComplexStructure(int n, std::shared_ptr<const Impl> impl, std::string label)
    : n_(n), impl_(std::move(impl)), label_(std::move(label)) {
  if (n_ < 1) throw PreconditionError("structure dimension must be >= 1");
}

AlmostComplexStructure AlmostComplexStructure::standard(int n) {
  return AlmostComplexStructure(n, std::make_shared<StandardImpl>(n), "J_st");
}

AlmostComplexStructure AlmostComplexStructure::from_j_expressions(
    int n, const std::vector<std::vector<Expression>>& entries) {
  if (static_cast<int>(entries.size()) != 2 * n) {
    throw DimensionError("J needs " + std::to_string(2 * n) + " rows");
  }
  for (const auto& row : entries) {
    if (static_cast<int>(row.size()) != 2 * n) {
      throw DimensionError("J needs " + std::to_string(2 * n) + " columns per row");
    }
    for (const auto& e : row) {
      if (e.dimension() != n) throw DimensionError("J entry has wrong dimension");
    }
  }
  return AlmostComplexStructure(n, std::make_shared<JExpressionImpl>(n, entries), "J-expressions");
}

AlmostComplexStructure AlmostComplexStructure::from_a_expressions(
    int n, const std::vector<std::vector<std::pair<Expression, Expression>>>& entries) {
  if (static_cast<int>(entries.size()) != n) throw DimensionError("A needs " + std::to_string(n) + " rows");
  for (const auto& row : entries) {
    if (static_cast<int>(row.size()) != n) {
      throw DimensionError("A needs " + std::to_string(n) + " columns per row");
    }
    for (const auto& [re, im] : row) {
      if (re.dimension() != n || im.dimension() != n) throw DimensionError("A entry has wrong dimension");
    }
  }
  auto fn = [n, entries](const Point& p) {
    Eigen::MatrixXcd a(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) a(r, c) = cplx(entries[r][c].first.eval(p), entries[r][c].second.eval(p));
    return a;
  };
  return AlmostComplexStructure(n, std::make_shared<AFunctionImpl>(fn), "A-expressions");
}

AlmostComplexStructure AlmostComplexStructure::from_j_function(int n, JFn fn, std::string label) {
  return AlmostComplexStructure(n, std::make_shared<JFunctionImpl>(std::move(fn)), std::move(label));
}

AlmostComplexStructure AlmostComplexStructure::from_a_function(int n, AFn fn, std::string label) {
  return AlmostComplexStructure(n, std::make_shared<AFunctionImpl>(std::move(fn)), std::move(label));
}

void AlmostComplexStructure::check_point(const Point& p) const {
  if (p.size() != 2 * n_) {
    throw DimensionError("structure expects " + std::to_string(2 * n_) + " coordinates, got " +
                         std::to_string(p.size()));
  }
}

Eigen::MatrixXd AlmostComplexStructure::j(const Point& p) const {
  check_point(p);
  return impl_->j(p);
}

Eigen::MatrixXcd AlmostComplexStructure::a(const Point& p) const {
  check_point(p);
  return impl_->a(p);
}

std::vector<Eigen::MatrixXd> AlmostComplexStructure::j_derivatives(const Point& p) const {
  check_point(p);
  return impl_->j_derivatives(p);
}

AlmostComplexStructure structure_from_complex_matrix(const AlmostComplexStructure& a_field) {
  auto src = a_field;
  return AlmostComplexStructure::from_j_function(
      a_field.dimension(), [src](const Point& p) { return j_from_complex_matrix(src.a(p)); },
      "J(" + a_field.label() + ")");
}

StructureReport validate_structure(const AlmostComplexStructure& s, const std::vector<Point>& grid,
                                   double tolerance) {
  StructureReport r;
  r.representation = s.representation();
  r.points = grid.size();
  r.tolerance = tolerance;
  const int d = 2 * s.dimension();
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(d, d);
  for (const Point& p : grid) {
    double value;
    if (r.representation == Rep::JMatrix) {
      const Eigen::MatrixXd j = s.j(p);
      value = (j * j + id).cwiseAbs().maxCoeff();
    } else {
      value = operator_norm(s.a(p));
    }
    if (r.worst_point.size() == 0 || value > r.max_residual) {
      r.max_residual = value;
      r.worst_point = p;
    }
  }
  if (r.representation == Rep::JMatrix) {
    r.pass = r.max_residual <= tolerance;
  } else {
    r.margin = 1.0 - r.max_residual;
    r.pass = r.max_residual < 1.0;
  }
  return r;
}

std::vector<Point> default_structure_grid(int n) { return lattice(2 * n, 9, -0.9, 0.9); }

// ---------------------------------------------------------------------------
// Coordinate changes

Eigen::MatrixXd CoordinateChange::Impl::jacobian(const Point& z) const {
  auto fn = [this](const Point& x) { return apply(x); };
  Eigen::MatrixXd d(z.size(), z.size());
  for (int i = 0; i < z.size(); ++i) d.col(i) = fd::partial(fn, z, i);
  return d;
}

namespace {

using Kind = CoordinateChange::Kind;

class AffineImpl final : public CoordinateChange::Impl {
 public:
  AffineImpl(Eigen::MatrixXd l, Point origin) : l_(std::move(l)), origin_(std::move(origin)), lu_(l_) {
    if (!lu_.isInvertible()) throw SingularError("affine chart change is not invertible");
  }
  Kind kind() const override { return origin_.isZero(0.0) && l_.isIdentity(0.0) ? Kind::Identity : Kind::Affine; }
  Point apply(const Point& z) const override { return l_ * (z - origin_); }
  Eigen::MatrixXd jacobian(const Point&) const override { return l_; }
  std::optional<Point> explicit_inverse(const Point& q) const override {
    return Point(lu_.solve(q) + origin_);
  }
  const Eigen::MatrixXd& matrix() const { return l_; }
  const Point& origin() const { return origin_; }

 private:
  Eigen::MatrixXd l_;
  Point origin_;
  Eigen::FullPivLU<Eigen::MatrixXd> lu_;
};

class QuadraticImpl final : public CoordinateChange::Impl {
 public:
  explicit QuadraticImpl(std::vector<Eigen::MatrixXcd> c) : c_(std::move(c)) {}
  Kind kind() const override { return Kind::Quadratic; }
  Point apply(const Point& x) const override {
    const Eigen::VectorXcd z = to_complex(x);
    Eigen::VectorXcd out = z;
    for (std::size_t j = 0; j < c_.size(); ++j) out[j] += (z.transpose() * c_[j] * z.conjugate())(0, 0);
    return to_real(out);
  }
  Eigen::MatrixXd jacobian(const Point& x) const override {
    const Eigen::VectorXcd z = to_complex(x);
    const int n = static_cast<int>(z.size());
    LinearComplexDecomposition d{Eigen::MatrixXcd::Identity(n, n), Eigen::MatrixXcd::Zero(n, n)};
    for (int j = 0; j < n; ++j) {
      d.p.row(j) += (c_[j] * z.conjugate()).transpose();  // dq_j/dz_k = sum_l c_jkl conj(z_l)
      d.q.row(j) += (c_[j].transpose() * z).transpose();  // dq_j/dzbar_l = sum_k c_jkl z_k
    }
    return d.real_matrix();
  }
  const std::vector<Eigen::MatrixXcd>& coefficients() const { return c_; }

 private:
  std::vector<Eigen::MatrixXcd> c_;
};

class ExpressionChangeImpl final : public CoordinateChange::Impl {
 public:
  ExpressionChangeImpl(std::vector<Expression> comp, std::vector<Expression> inv)
      : comp_(std::move(comp)), inv_(std::move(inv)) {}
  Kind kind() const override { return Kind::Expression; }
  Point apply(const Point& z) const override {
    Point out(comp_.size());
    for (std::size_t i = 0; i < comp_.size(); ++i) out[i] = comp_[i].eval(z);
    return out;
  }
  Eigen::MatrixXd jacobian(const Point& z) const override {
    Eigen::MatrixXd d(comp_.size(), z.size());
    for (std::size_t i = 0; i < comp_.size(); ++i) d.row(i) = comp_[i].eval_jet(z).grad.transpose();
    return d;
  }
  std::optional<Point> explicit_inverse(const Point& q) const override {
    if (inv_.empty()) return std::nullopt;
    Point out(inv_.size());
    for (std::size_t i = 0; i < inv_.size(); ++i) out[i] = inv_[i].eval(q);
    return out;
  }

 private:
  std::vector<Expression> comp_;
  std::vector<Expression> inv_;
};

class FunctionChangeImpl final : public CoordinateChange::Impl {
 public:
  explicit FunctionChangeImpl(std::function<Point(const Point&)> fn) : fn_(std::move(fn)) {}
  Kind kind() const override { return Kind::Function; }
  Point apply(const Point& z) const override { return fn_(z); }

 private:
  std::function<Point(const Point&)> fn_;
};

class CompositeImpl final : public CoordinateChange::Impl {
 public:
  CompositeImpl(CoordinateChange outer, CoordinateChange inner)
      : outer_(std::move(outer)), inner_(std::move(inner)) {}
  Kind kind() const override { return Kind::Composite; }
  Point apply(const Point& z) const override { return outer_(inner_(z)); }
  Eigen::MatrixXd jacobian(const Point& z) const override {
    return outer_.jacobian(inner_(z)) * inner_.jacobian(z);
  }
  std::optional<Point> explicit_inverse(const Point& q) const override {
    return inner_.inverse(outer_.inverse(q));
  }

 private:
  CoordinateChange outer_;
  CoordinateChange inner_;
};

}  // namespace

CoordinateChange::CoordinateChange(int n, std::shared_ptr<const Impl> impl) : n_(n), impl_(std::move(impl)) {}

CoordinateChange CoordinateChange::identity(int n) {
  return CoordinateChange(n, std::make_shared<AffineImpl>(Eigen::MatrixXd::Identity(2 * n, 2 * n),
                                                          Point::Zero(2 * n)));
}

CoordinateChange CoordinateChange::affine(const Eigen::MatrixXd& l, const Point& origin) {
  if (l.rows() != l.cols() || l.rows() % 2 != 0 || origin.size() != l.rows()) {
    throw DimensionError("affine chart change needs a 2n x 2n matrix and a 2n origin");
  }
  return CoordinateChange(static_cast<int>(l.rows() / 2), std::make_shared<AffineImpl>(l, origin));
}

CoordinateChange CoordinateChange::quadratic(const std::vector<Eigen::MatrixXcd>& c) {
  const int n = static_cast<int>(c.size());
  if (n < 1) throw DimensionError("quadratic chart change needs n >= 1 coefficient matrices");
  for (const auto& m : c) {
    if (m.rows() != n || m.cols() != n) throw DimensionError("quadratic coefficients must be n x n");
  }
  return CoordinateChange(n, std::make_shared<QuadraticImpl>(c));
}

CoordinateChange CoordinateChange::from_expressions(int n, const std::vector<Expression>& components,
                                                    const std::vector<Expression>& inverse) {
  if (static_cast<int>(components.size()) != 2 * n) {
    throw DimensionError("chart change needs " + std::to_string(2 * n) + " real components");
  }
  if (!inverse.empty() && static_cast<int>(inverse.size()) != 2 * n) {
    throw DimensionError("chart inverse needs " + std::to_string(2 * n) + " real components");
  }
  return CoordinateChange(n, std::make_shared<ExpressionChangeImpl>(components, inverse));
}

CoordinateChange CoordinateChange::from_function(int n, std::function<Point(const Point&)> fn) {
  return CoordinateChange(n, std::make_shared<FunctionChangeImpl>(std::move(fn)));
}

CoordinateChange CoordinateChange::compose(const CoordinateChange& outer, const CoordinateChange& inner) {
  if (outer.dimension() != inner.dimension()) throw DimensionError("composed charts differ in dimension");
  return CoordinateChange(outer.dimension(), std::make_shared<CompositeImpl>(outer, inner));
}

Point CoordinateChange::operator()(const Point& z) const { return impl_->apply(z); }

Eigen::MatrixXd CoordinateChange::jacobian(const Point& z) const { return impl_->jacobian(z); }

LinearComplexDecomposition CoordinateChange::wirtinger(const Point& z) const {
  return decompose_linear(jacobian(z));
}

Point CoordinateChange::inverse(const Point& q, const std::optional<Point>& guess) const {
  if (auto explicit_inv = impl_->explicit_inverse(q)) return *explicit_inv;
  Point z = guess.value_or(q);
  double step_norm = 0.0;
  for (int iter = 0; iter < 60; ++iter) {
    const Point residual = impl_->apply(z) - q;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(impl_->jacobian(z));
    if (!lu.isInvertible()) throw SingularError("chart change has a singular differential");
    const Point step = lu.solve(residual);
    z -= step;
    step_norm = step.cwiseAbs().maxCoeff();
    if (step_norm <= 1e-15 * std::max(1.0, z.cwiseAbs().maxCoeff())) {
      // One more step polishes the last bits of the quadratic convergence.
      const Point polish = lu.solve(impl_->apply(z) - q);
      return z - polish;
    }
  }
  throw ConvergenceError("Newton inversion of chart change did not converge", step_norm);
}

std::optional<std::pair<Eigen::MatrixXd, Point>> CoordinateChange::affine_part() const {
  if (auto* a = dynamic_cast<const AffineImpl*>(impl_.get())) return std::make_pair(a->matrix(), a->origin());
  return std::nullopt;
}

std::optional<std::vector<Eigen::MatrixXcd>> CoordinateChange::quadratic_coefficients() const {
  if (auto* q = dynamic_cast<const QuadraticImpl*>(impl_.get())) return q->coefficients();
  return std::nullopt;
}

Eigen::MatrixXcd transform_complex_matrix(const AlmostComplexStructure& s, const CoordinateChange& phi,
                                          const Point& p) {
  const Eigen::MatrixXcd a = s.a(p);
  const LinearComplexDecomposition w = phi.wirtinger(p);
  const Eigen::MatrixXcd num = w.p * a - w.q;
  const Eigen::MatrixXcd den = w.p.conjugate() - w.q.conjugate() * a;
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(den.transpose());
  if (!lu.isInvertible() || lu.rcond() < 1e-12) {
    throw SingularError("chart change not admissible here: second factor is singular");
  }
  return lu.solve(num.transpose()).transpose();
}

AlmostComplexStructure pushforward(const AlmostComplexStructure& s, const CoordinateChange& phi) {
  if (s.dimension() != phi.dimension()) throw DimensionError("pushforward: dimension mismatch");
  auto fn = [s, phi](const Point& q) {
    const Point z = phi.inverse(q);
    const Eigen::MatrixXd d = phi.jacobian(z);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(d.transpose());
    if (!lu.isInvertible()) throw SingularError("pushforward: singular differential");
    // d J d^{-1} = (d^{-T} (d J)^T)^T
    return Eigen::MatrixXd(lu.solve((d * s.j(z)).transpose()).transpose());
  };
  return AlmostComplexStructure::from_j_function(s.dimension(), fn, "push(" + s.label() + ")");
}

AlmostComplexStructure pullback(const AlmostComplexStructure& s, const CoordinateChange& f) {
  if (s.dimension() != f.dimension()) throw DimensionError("pullback: dimension mismatch");
  auto fn = [s, f](const Point& z) {
    const Eigen::MatrixXd d = f.jacobian(z);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(d);
    if (!lu.isInvertible()) throw SingularError("pullback: singular differential");
    return Eigen::MatrixXd(lu.solve(s.j(f(z)) * d));
  };
  return AlmostComplexStructure::from_j_function(s.dimension(), fn, "pull(" + s.label() + ")");
}

AlmostComplexStructure scale_structure(const AlmostComplexStructure& s, double lambda) {
  if (!(lambda > 0.0)) throw PreconditionError("dilation factor must be positive");
  const std::string label = "scale(" + s.label() + ", " + std::to_string(lambda) + ")";
  if (s.representation() == AlmostComplexStructure::Representation::ComplexMatrix) {
    return AlmostComplexStructure::from_a_function(
        s.dimension(), [s, lambda](const Point& w) { return s.a(Point(lambda * w)); }, label);
  }
  return AlmostComplexStructure::from_j_function(
      s.dimension(), [s, lambda](const Point& w) { return s.j(Point(lambda * w)); }, label);
}

std::pair<std::vector<Eigen::MatrixXcd>, std::vector<Eigen::MatrixXcd>> wirtinger_matrix_derivatives(
    const std::function<Eigen::MatrixXcd(const Point&)>& fn, const Point& p, double h) {
  const int n = static_cast<int>(p.size() / 2);
  std::vector<Eigen::MatrixXcd> dz, dzbar;
  for (int k = 0; k < n; ++k) {
    const Eigen::MatrixXcd dx = fd::partial(fn, p, 2 * k, h);
    const Eigen::MatrixXcd dy = fd::partial(fn, p, 2 * k + 1, h);
    dz.push_back(0.5 * (dx - kI * dy));
    dzbar.push_back(0.5 * (dx + kI * dy));
  }
  return {dz, dzbar};
}

}  // namespace levimax
