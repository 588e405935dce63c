#include "levimax/levi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "levimax/errors.hpp"
#include "levimax/finite_difference.hpp"
#include "levimax/parallel.hpp"

namespace levimax {

namespace {

void check_vector(const AlmostComplexStructure& s, const ScalarField& u, const Point& p, const Eigen::VectorXd& v) {
  const int d = 2 * s.dimension();
  if (u.dimension() != s.dimension()) throw DimensionError("field and structure differ in dimension");
  if (p.size() != d || v.size() != d) {
    throw DimensionError("point and vector need " + std::to_string(d) + " real coordinates");
  }
}

}  // namespace

OneForm::OneForm(AlmostComplexStructure s, ScalarField u) : s_(std::move(s)), u_(std::move(u)) {
  if (s_.dimension() != u_.dimension()) throw DimensionError("field and structure differ in dimension");
}

Eigen::VectorXd OneForm::operator()(const Point& p) const {
  return s_.j(p).transpose() * u_.jet(p).grad;
}

Eigen::MatrixXd OneForm::jacobian(const Point& p) const {
  const Jet2 jet = u_.jet(p);
  const Eigen::MatrixXd j = s_.j(p);
  const std::vector<Eigen::MatrixXd> dj = s_.j_derivatives(p);
  Eigen::MatrixXd d = jet.hess * j;
  for (int i = 0; i < d.rows(); ++i) d.row(i) += (dj[i].transpose() * jet.grad).transpose();
  return d;
}

Eigen::MatrixXd OneForm::exterior_derivative(const Point& p) const {
  const Eigen::MatrixXd d = jacobian(p);
  return d - d.transpose();
}

double levi_value(const AlmostComplexStructure& s, const ScalarField& u, const Point& p, const Eigen::VectorXd& v) {
  check_vector(s, u, p, v);
  const Eigen::MatrixXd omega = OneForm(s, u).exterior_derivative(p);
  return -v.dot(omega * (s.j(p) * v));
}

double levi_value_extended(const AlmostComplexStructure& s, const ScalarField& u, const Point& p,
                           const Eigen::VectorXd& v, const Eigen::MatrixXd& m) {
  check_vector(s, u, p, v);
  const OneForm beta(s, u);
  auto x_field = [&](const Point& z) -> Eigen::VectorXd { return v + m * (z - p); };
  auto y_field = [&](const Point& z) -> Eigen::VectorXd { return s.j(z) * x_field(z); };
  const Eigen::VectorXd xp = x_field(p);
  const Eigen::VectorXd yp = y_field(p);

  // Directional derivative of a function of z along w at p.
  auto along = [&p](const auto& fn, const Eigen::VectorXd& w) {
    auto line = [&](const Eigen::VectorXd& t) { return fn(Point(p + t[0] * w)); };
    return fd::partial(line, Eigen::VectorXd::Zero(1), 0);
  };
  auto beta_y = [&](const Point& z) { return beta(z).dot(y_field(z)); };
  auto beta_x = [&](const Point& z) { return beta(z).dot(x_field(z)); };
  const double x_beta_y = along(beta_y, xp);
  const double y_beta_x = along(beta_x, yp);
  const Eigen::VectorXd dy_x = along(y_field, xp);
  const Eigen::VectorXd bracket = dy_x - m * yp;
  return -(x_beta_y - y_beta_x - beta(p).dot(bracket));
}

LeviQuadraticForm levi_matrix(const AlmostComplexStructure& s, const ScalarField& u, const Point& p) {
  const int d = 2 * s.dimension();
  check_vector(s, u, p, Eigen::VectorXd::Zero(d));
  // levi_value is a quadratic form in V with fixed pointwise data, so the
  // polarization identity is exact up to rounding; evaluate the data once.
  const Eigen::MatrixXd omega = OneForm(s, u).exterior_derivative(p);
  const Eigen::MatrixXd j = s.j(p);
  auto q = [&](const Eigen::VectorXd& v) { return -v.dot(omega * (j * v)); };
  LeviQuadraticForm form{p, Eigen::MatrixXd(d, d)};
  for (int a = 0; a < d; ++a) {
    const Eigen::VectorXd ea = Eigen::VectorXd::Unit(d, a);
    form.s(a, a) = q(ea);
    for (int b = a + 1; b < d; ++b) {
      const Eigen::VectorXd eb = Eigen::VectorXd::Unit(d, b);
      form.s(a, b) = form.s(b, a) = 0.25 * (q(ea + eb) - q(ea - eb));
    }
  }
  return form;
}

double min_levi_eigen(const LeviQuadraticForm& form, const HermitianMetric& h) {
  const Eigen::MatrixXd metric = kLeviConvention * h.real_form(form.point);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(form.s, metric, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw PreconditionError("hermitian metric is not positive definite");
  return solver.eigenvalues()[0];
}

double min_levi_eigen(const AlmostComplexStructure& s, const ScalarField& u, const Point& p,
                      const HermitianMetric& h) {
  return min_levi_eigen(levi_matrix(s, u, p), h);
}

PshReport is_strictly_psh(const AlmostComplexStructure& s, const ScalarField& u, const std::vector<Point>& grid,
                          const HermitianMetric& h, double margin) {
  PshReport report;
  report.margin = margin;
  report.points.resize(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    PshPointRecord& r = report.points[i];
    r.point = grid[i];
    r.min_eigen = min_levi_eigen(s, u, grid[i], h);
    r.pass = r.min_eigen >= margin && r.min_eigen > 0.0;
  });
  report.pass = !grid.empty();
  report.worst_eigen = std::numeric_limits<double>::infinity();
  for (const PshPointRecord& r : report.points) {
    report.pass = report.pass && r.pass;
    if (r.min_eigen < report.worst_eigen) {
      report.worst_eigen = r.min_eigen;
      report.worst_point = r.point;
    }
  }
  return report;
}

ScalarField compose_field(const ScalarField& u, const CoordinateChange& f) {
  if (u.dimension() != f.dimension()) throw DimensionError("compose_field: dimension mismatch");
  if (f.kind() == CoordinateChange::Kind::Identity) return u;
  return ScalarField::from_function(
      u.dimension(), [u, f](const Point& z) { return u(f(z)); }, "(" + u.label() + ") o F");
}

InvarianceResult hessian_invariance_check(const CoordinateChange& f, const AlmostComplexStructure& s_prime,
                                          const AlmostComplexStructure& s, const ScalarField& u,
                                          const Point& p_prime, const Eigen::VectorXd& v_prime,
                                          double holomorphy_tol) {
  check_vector(s_prime, u, p_prime, v_prime);
  if (f.dimension() != s.dimension()) throw DimensionError("map and target structure differ in dimension");
  InvarianceResult out;
  const int d = 2 * s.dimension();
  std::vector<Point> samples{p_prime};
  for (int i = 0; i < d; ++i) {
    samples.push_back(p_prime + 1e-2 * Eigen::VectorXd::Unit(d, i));
    samples.push_back(p_prime - 1e-2 * Eigen::VectorXd::Unit(d, i));
  }
  for (const Point& q : samples) {
    const Eigen::MatrixXd df = f.jacobian(q);
    const double r = (df * s_prime.j(q) - s.j(f(q)) * df).cwiseAbs().maxCoeff();
    out.holomorphy_residual = std::max(out.holomorphy_residual, r);
  }
  if (!(out.holomorphy_residual <= holomorphy_tol)) {
    throw PreconditionError("map is not holomorphic between the given structures (residual " +
                            std::to_string(out.holomorphy_residual) + ")");
  }
  out.lhs = levi_value(s_prime, compose_field(u, f), p_prime, v_prime);
  out.rhs = levi_value(s, u, f(p_prime), f.jacobian(p_prime) * v_prime);
  return out;
}

}  // namespace levimax
