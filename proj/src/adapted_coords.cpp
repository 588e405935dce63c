#include "levimax/adapted_coords.hpp"

#include <algorithm>
#include <cmath>

#include "levimax/errors.hpp"
#include "levimax/levi.hpp"

namespace levimax {

namespace {

constexpr double kWirtingerStep = 1e-5;

double max_entry(const Eigen::MatrixXcd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

double max_derivative(const std::vector<Eigen::MatrixXcd>& dz) {
  double r = 0.0;
  for (const auto& m : dz) r = std::max(r, max_entry(m));
  return r;
}

}  // namespace

CoordinateChange linear_normalize(const AlmostComplexStructure& s, const Point& p, double tol) {
  const int n = s.dimension();
  const int d = 2 * n;
  const Eigen::MatrixXd j = s.j(p);
  const double defect = (j * j + Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff();
  if (!(defect <= tol)) {
    throw PreconditionError("J(p)^2 + I has entry " + std::to_string(defect) + "; not a complex structure");
  }
  Eigen::MatrixXd basis(d, d);    // (v_1, J v_1, ...)
  Eigen::MatrixXd ortho(d, 0);    // orthonormal basis of the span so far
  auto append_ortho = [&ortho, d](Eigen::VectorXd w) {
    w -= ortho * (ortho.transpose() * w);
    w -= ortho * (ortho.transpose() * w);
    ortho.conservativeResize(d, ortho.cols() + 1);
    ortho.col(ortho.cols() - 1) = w.normalized();
  };
  int candidate = 0;
  for (int m = 0; m < n; ++m) {
    Eigen::VectorXd v;
    for (; candidate < d; ++candidate) {
      Eigen::VectorXd r = Eigen::VectorXd::Unit(d, candidate);
      r -= ortho * (ortho.transpose() * r);
      if (r.norm() > 1e-6) {
        v = r.normalized();
        break;
      }
    }
    if (v.size() == 0) throw SingularError("linear normalization found no independent direction");
    basis.col(2 * m) = v;
    basis.col(2 * m + 1) = j * v;
    append_ortho(v);
    append_ortho(j * v);
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(basis);
  if (!lu.isInvertible()) throw SingularError("linear normalization basis is degenerate");
  return CoordinateChange::affine(lu.inverse(), p);
}

CoordinateChange quadratic_normalize(const AlmostComplexStructure& s, double a_tol, double verify_tol) {
  const int n = s.dimension();
  const Point origin = Point::Zero(2 * n);
  const double a0 = max_entry(s.a(origin));
  if (!(a0 <= a_tol)) {
    throw PreconditionError("quadratic normalization needs A(0) = 0; |A(0)| = " + std::to_string(a0));
  }
  auto a_fn = [&s](const Point& z) { return s.a(z); };
  const auto [dz, dzbar] = wirtinger_matrix_derivatives(a_fn, origin, kWirtingerStep);
  std::vector<Eigen::MatrixXcd> c(n, Eigen::MatrixXcd::Zero(n, n));
  for (int jj = 0; jj < n; ++jj)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) c[jj](k, l) = dz[k](jj, l);
  const CoordinateChange phi = CoordinateChange::quadratic(c);

  // Phi(0) = 0 and dPhi(0) = I, so d_z of A' o Phi at 0 equals d_z A'(0).
  auto transformed = [&s, &phi](const Point& z) { return transform_complex_matrix(s, phi, z); };
  const double r0 = max_entry(transformed(origin));
  const double r1 = max_derivative(wirtinger_matrix_derivatives(transformed, origin, kWirtingerStep).first);
  if (!(r0 <= verify_tol && r1 <= verify_tol)) {
    throw ConvergenceError("quadratic normalization failed verification (|A'(0)| = " + std::to_string(r0) +
                               ", |dA'(0)| = " + std::to_string(r1) + ")",
                           std::max(r0, r1));
  }
  return phi;
}

CoordinateChange adapted_chart(const AlmostComplexStructure& s, const Point& p) {
  const CoordinateChange linear = linear_normalize(s, p);
  const CoordinateChange quad = quadratic_normalize(pushforward(s, linear));
  return CoordinateChange::compose(quad, linear);
}

Eigen::MatrixXd hermitian_real_matrix(const Eigen::MatrixXcd& l) {
  const int d = 2 * static_cast<int>(l.rows());
  auto q = [&l](const Eigen::VectorXd& v) { return kLeviConvention * hermitian_form(l, to_complex(v)); };
  Eigen::MatrixXd out(d, d);
  for (int a = 0; a < d; ++a) {
    const Eigen::VectorXd ea = Eigen::VectorXd::Unit(d, a);
    out(a, a) = q(ea);
    for (int b = a + 1; b < d; ++b) {
      const Eigen::VectorXd eb = Eigen::VectorXd::Unit(d, b);
      out(a, b) = out(b, a) = 0.25 * (q(ea + eb) - q(ea - eb));
    }
  }
  return out;
}

AdaptedReport verify_adapted(const AlmostComplexStructure& s, const CoordinateChange& phi, const ScalarField& u,
                             double coefficient_tol, double levi_tol) {
  AdaptedReport r;
  r.coefficient_tol = coefficient_tol;
  r.levi_tol = levi_tol;
  const int n = s.dimension();
  const Point origin = Point::Zero(2 * n);
  const Point base = phi.inverse(origin);

  auto a_prime = [&s, &phi, &base](const Point& w) {
    return transform_complex_matrix(s, phi, phi.inverse(w, base));
  };
  r.a_residual = max_entry(a_prime(origin));
  r.da_residual = max_derivative(wirtinger_matrix_derivatives(a_prime, origin, kWirtingerStep).first);

  const AlmostComplexStructure s_prime = pushforward(s, phi);
  const ScalarField u_prime = ScalarField::from_function(
      n, [u, phi, base](const Point& w) { return u(phi.inverse(w, base)); }, "u o phi^-1");
  r.levi = levi_matrix(s_prime, u_prime, origin).s;
  r.hermitian = hermitian_real_matrix(hermitian_hessian_jst(u_prime, origin));
  r.levi_residual = (r.levi - r.hermitian).cwiseAbs().maxCoeff() / std::max(1.0, r.levi.cwiseAbs().maxCoeff());
  r.pass = r.a_residual <= coefficient_tol && r.da_residual <= coefficient_tol && r.levi_residual <= levi_tol;
  return r;
}

}  // namespace levimax
