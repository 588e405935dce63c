#include "levimax/field.hpp"

#include <cmath>

#include "levimax/errors.hpp"
#include "levimax/finite_difference.hpp"

namespace levimax {

namespace {

class ExpressionImpl final : public ScalarField::Impl {
 public:
  explicit ExpressionImpl(Expression e) : expr_(std::move(e)) {}
  double value(const Point& p) const override { return expr_.eval(p); }
  DerivativeTier tier() const override { return DerivativeTier::Exact; }
  Jet2 jet(const Point& p) const override { return expr_.eval_jet(p); }

 private:
  Expression expr_;
};

class FunctionImpl final : public ScalarField::Impl {
 public:
  explicit FunctionImpl(std::function<double(const Point&)> fn) : fn_(std::move(fn)) {}
  double value(const Point& p) const override { return fn_(p); }

 private:
  std::function<double(const Point&)> fn_;
};

}  // namespace

Jet2 ScalarField::Impl::jet(const Point& p) const {
  auto f = [this](const Point& x) { return value(x); };
  const int d = static_cast<int>(p.size());
  Jet2 j = Jet2::constant(value(p), d);
  for (int i = 0; i < d; ++i) j.grad[i] = fd::partial(f, p, i);
  for (int i = 0; i < d; ++i) {
    for (int k = i; k < d; ++k) {
      j.hess(i, k) = fd::second_partial(f, p, i, k);
      j.hess(k, i) = j.hess(i, k);
    }
  }
  return j;
}

ScalarField::ScalarField(int n, std::shared_ptr<const Impl> impl, std::string label)
    : n_(n), impl_(std::move(impl)), label_(std::move(label)) {
  if (n_ < 1) throw PreconditionError("field dimension must be >= 1");
}

ScalarField ScalarField::from_expression(const Expression& e) {
  return ScalarField(e.dimension(), std::make_shared<ExpressionImpl>(e), e.text());
}

ScalarField ScalarField::parse(std::string_view text, int n) {
  return from_expression(Expression::parse(text, n));
}

ScalarField ScalarField::from_function(int n, std::function<double(const Point&)> fn,
                                       std::string label) {
  return ScalarField(n, std::make_shared<FunctionImpl>(std::move(fn)), std::move(label));
}

void ScalarField::check_point(const Point& p) const {
  if (p.size() != 2 * n_) {
    throw DimensionError("field '" + label_ + "' expects " + std::to_string(2 * n_) +
                         " coordinates, got " + std::to_string(p.size()));
  }
}

double ScalarField::operator()(const Point& p) const {
  check_point(p);
  return impl_->value(p);
}

Jet2 ScalarField::jet(const Point& p) const {
  check_point(p);
  return impl_->jet(p);
}

double derivative(const ScalarField& f, const Point& p, std::span<const int> idx) {
  if (idx.size() > 2) throw PreconditionError("derivative order must be <= 2");
  for (int i : idx) {
    if (i < 0 || i >= 2 * f.dimension()) {
      throw DimensionError("derivative index " + std::to_string(i) + " out of range");
    }
  }
  if (idx.empty()) return f(p);
  if (f.tier() == DerivativeTier::Exact) {
    const Jet2 j = f.jet(p);
    return idx.size() == 1 ? j.grad[idx[0]] : j.hess(idx[0], idx[1]);
  }
  auto fn = [&f](const Point& x) { return f(x); };
  return idx.size() == 1 ? fd::partial(fn, p, idx[0]) : fd::second_partial(fn, p, idx[0], idx[1]);
}

double derivative(const ScalarField& f, const Point& p, std::initializer_list<int> idx) {
  return derivative(f, p, std::span<const int>(idx.begin(), idx.size()));
}

Eigen::VectorXd numeric_gradient(const ScalarField& f, const Point& p) {
  auto fn = [&f](const Point& x) { return f(x); };
  Eigen::VectorXd g(p.size());
  for (int i = 0; i < p.size(); ++i) g[i] = fd::partial(fn, p, i);
  return g;
}

Eigen::MatrixXd numeric_hessian(const ScalarField& f, const Point& p) {
  auto fn = [&f](const Point& x) { return f(x); };
  const int d = static_cast<int>(p.size());
  Eigen::MatrixXd h(d, d);
  for (int i = 0; i < d; ++i) {
    for (int k = i; k < d; ++k) {
      h(i, k) = fd::second_partial(fn, p, i, k);
      h(k, i) = h(i, k);
    }
  }
  return h;
}

Eigen::MatrixXcd hermitian_from_real_hessian(const Eigen::MatrixXd& hess, double* asymmetry) {
  const Eigen::Index n = hess.rows() / 2;
  Eigen::MatrixXcd l(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const Eigen::Index xk = 2 * k, yk = 2 * k + 1, xj = 2 * j, yj = 2 * j + 1;
      l(k, j) = 0.25 * cplx(hess(xk, xj) + hess(yk, yj), hess(xk, yj) - hess(yk, xj));
    }
  }
  const Eigen::MatrixXcd adj = l.adjoint();
  if (asymmetry != nullptr) *asymmetry = (l - adj).cwiseAbs().maxCoeff();
  return 0.5 * (l + adj);
}

Eigen::MatrixXcd hermitian_hessian_jst(const ScalarField& f, const Point& p) {
  return hermitian_from_real_hessian(f.jet(p).hess);
}

double hermitian_form(const Eigen::MatrixXcd& l, const Eigen::VectorXcd& v) {
  return (v.transpose() * l * v.conjugate())(0, 0).real();
}

HermitianMetric HermitianMetric::euclidean(int n) {
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  return HermitianMetric(n, [id](const Point&) { return id; });
}

HermitianMetric HermitianMetric::constant(const Eigen::MatrixXcd& h) {
  if (h.rows() != h.cols() || h.rows() < 1) throw DimensionError("metric matrix must be square");
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, h.cwiseAbs().maxCoeff())) {
    throw PreconditionError("metric matrix is not hermitian");
  }
  Eigen::LLT<Eigen::MatrixXcd> llt(h);
  if (llt.info() != Eigen::Success) throw PreconditionError("metric matrix is not positive definite");
  return HermitianMetric(static_cast<int>(h.rows()), [h](const Point&) { return h; });
}

HermitianMetric HermitianMetric::field(int n, MatrixFn fn) { return HermitianMetric(n, std::move(fn)); }

double HermitianMetric::value(const Point& p, const Eigen::VectorXcd& v) const {
  return (v.adjoint() * matrix(p) * v)(0, 0).real();
}

Eigen::MatrixXd HermitianMetric::real_form(const Point& p) const {
  const Eigen::MatrixXcd h = matrix(p);
  const int d = 2 * n_;
  Eigen::MatrixXcd basis = Eigen::MatrixXcd::Zero(n_, d);
  for (int k = 0; k < n_; ++k) {
    basis(k, 2 * k) = 1.0;
    basis(k, 2 * k + 1) = cplx(0.0, 1.0);
  }
  const Eigen::MatrixXd r = (basis.adjoint() * h * basis).real();
  return 0.5 * (r + r.transpose());
}

}  // namespace levimax
