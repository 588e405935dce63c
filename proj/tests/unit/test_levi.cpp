#include <doctest.h>

#include <cstdio>
#include <random>
#include <string>

#include "levimax/errors.hpp"
#include "levimax/grid.hpp"
#include "levimax/levi.hpp"

using namespace levimax;

namespace {
AlmostComplexStructure flat_structure() {
  return AlmostComplexStructure::from_a_function(1, [](const Point& p) {
    const cplx z(p[0], p[1]);
    Eigen::MatrixXcd a(1, 1);
    a(0, 0) = z / (1.0 + std::conj(z));
    return a;
  });
}

AlmostComplexStructure tilted(int n) {
  // A(z) = 0.1 conj(z_n) in entry (1, 1), a non-integrable example for n >= 2.
  return AlmostComplexStructure::from_a_function(n, [n](const Point& p) {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
    a(0, 0) = 0.1 * cplx(p[2 * n - 2], -p[2 * n - 1]);
    return a;
  });
}

std::string coef(double c) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "(%.17g)", c);
  return buf;
}

// Random polynomial plus a transcendental term in 2n variables.
ScalarField random_field(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> unit(-1, 1);
  std::string text = coef(unit(rng)) + "*exp(" + coef(0.5 * unit(rng)) + "*x1)";
  for (int i = 1; i <= 2 * n; ++i) {
    text += " + " + coef(unit(rng)) + "*x" + std::to_string(i);
    for (int j = i; j <= 2 * n; ++j)
      text += " + " + coef(unit(rng)) + "*x" + std::to_string(i) + "*x" + std::to_string(j);
  }
  text += " + " + coef(unit(rng)) + "*x1^3";
  return ScalarField::parse(text, n);
}

Eigen::VectorXd random_point(std::mt19937_64& rng, int dim, double r) {
  std::uniform_real_distribution<double> unit(-r, r);
  Eigen::VectorXd x(dim);
  for (int i = 0; i < dim; ++i) x[i] = unit(rng);
  return x;
}
}  // namespace

TEST_CASE("laplacian identity") {
  const AlmostComplexStructure st = AlmostComplexStructure::standard(1);
  const ScalarField u = ScalarField::parse("x1^2 + x2^2", 1);
  CHECK(levi_value(st, u, Point::Zero(2), Eigen::Vector2d(1, 0)) == doctest::Approx(4.0).epsilon(1e-14));

  const ScalarField w = ScalarField::parse("x1^4 + 3*x2^2*x1 + sin(x2)", 1);
  for (const Point& p : lattice(2, 3, -0.5, 0.5)) {
    const Jet2 j = w.jet(p);
    CHECK(levi_value(st, w, p, Eigen::Vector2d(1, 0)) == doctest::Approx(j.hess.trace()).epsilon(1e-12));
  }
}

TEST_CASE("pluriharmonic fields") {
  const AlmostComplexStructure st = AlmostComplexStructure::standard(2);
  const ScalarField u = ScalarField::parse("x1", 2);
  std::mt19937_64 rng(5);
  for (int t = 0; t < 10; ++t) {
    CHECK(std::abs(levi_value(st, u, random_point(rng, 4, 1), random_point(rng, 4, 1))) <= 1e-14);
  }
  CHECK(levi_matrix(st, u, Point::Zero(4)).s.cwiseAbs().maxCoeff() <= 1e-14);
  CHECK(std::abs(min_levi_eigen(st, u, Point::Zero(4), HermitianMetric::euclidean(2))) <= 1e-14);
}

TEST_CASE("standard structure matches the hermitian hessian") {
  std::mt19937_64 rng(41);
  for (int n : {1, 2}) {
    const AlmostComplexStructure st = AlmostComplexStructure::standard(n);
    for (int t = 0; t < 5; ++t) {
      const ScalarField u = random_field(rng, n);
      const Point p = random_point(rng, 2 * n, 0.8);
      const Eigen::VectorXd v = random_point(rng, 2 * n, 1);
      const double want = kLeviConvention * hermitian_form(hermitian_hessian_jst(u, p), to_complex(v));
      CHECK(levi_value(st, u, p, v) == doctest::Approx(want).epsilon(1e-10));
    }
  }
}

TEST_CASE("straightened field is levi-flat") {
  const AlmostComplexStructure s = flat_structure();
  const ScalarField u = ScalarField::parse("x1 + x1^2 + x2^2", 1);
  std::mt19937_64 rng(8);
  for (int t = 0; t < 20; ++t) {
    const Point p = random_point(rng, 2, 0.2);
    CHECK(std::abs(levi_value(s, u, p, random_point(rng, 2, 1))) <= 1e-5);
  }
  CHECK(std::abs(min_levi_eigen(s, u, Point::Zero(2), HermitianMetric::euclidean(1))) <= 1e-5);
}

TEST_CASE("levi matrix") {
  const LeviQuadraticForm f =
      levi_matrix(AlmostComplexStructure::standard(1), ScalarField::parse("x1^2 + x2^2", 1), Point::Zero(2));
  CHECK((f.s - 4.0 * Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-13);
  CHECK(f(Eigen::Vector2d(1, 0)) == doctest::Approx(4.0));

  const LeviQuadraticForm lin =
      levi_matrix(tilted(2), ScalarField::parse("3*x1 - x2 + 0.5*x4", 2), Point::Constant(4, 0.2));
  CHECK(lin.s.cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("polarization") {
  std::mt19937_64 rng(13);
  const AlmostComplexStructure s = tilted(2);
  for (int t = 0; t < 3; ++t) {
    const ScalarField u = random_field(rng, 2);
    const Point p = random_point(rng, 4, 0.5);
    const LeviQuadraticForm form = levi_matrix(s, u, p);
    CHECK((form.s - form.s.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
    for (int k = 0; k < 50; ++k) {
      const Eigen::VectorXd v = random_point(rng, 4, 1);
      const double direct = levi_value(s, u, p, v);
      CHECK(std::abs(form(v) - direct) <= 1e-7 * std::max(1.0, std::abs(direct)));
    }
  }
}

TEST_CASE("vector-field extension does not matter") {
  std::mt19937_64 rng(17);
  const AlmostComplexStructure s = tilted(2);
  for (int t = 0; t < 5; ++t) {
    const ScalarField u = random_field(rng, 2);
    const Point p = random_point(rng, 4, 0.5);
    const Eigen::VectorXd v = random_point(rng, 4, 1);
    Eigen::MatrixXd m(4, 4);
    for (int i = 0; i < 16; ++i) m.data()[i] = std::uniform_real_distribution<double>(-1, 1)(rng);
    const double direct = levi_value(s, u, p, v);
    CHECK(std::abs(levi_value_extended(s, u, p, v, m) - direct) <= 1e-5 * std::max(1.0, std::abs(direct)));
  }
}

TEST_CASE("one-form") {
  const AlmostComplexStructure s = tilted(2);
  const ScalarField u = ScalarField::parse("x1^2*x3 + sin(x2) + x4", 2);
  const OneForm beta(s, u);
  const Point p = Point::Constant(4, 0.3);
  const Eigen::VectorXd x = Eigen::Vector4d(0.2, -1, 0.5, 0.1);
  CHECK(beta(p).dot(x) == doctest::Approx(u.jet(p).grad.dot(s.j(p) * x)).epsilon(1e-14));
  const Eigen::MatrixXd d = beta.exterior_derivative(p);
  CHECK((d + d.transpose()).cwiseAbs().maxCoeff() == 0.0);
  auto b = [&beta](const Point& q) { return beta(q); };
  for (int i = 0; i < 4; ++i) {
    Point a = p, c = p;
    a[i] += 1e-5;
    c[i] -= 1e-5;
    const Eigen::VectorXd fd = (b(a) - b(c)) / 2e-5;
    CHECK((beta.jacobian(p).row(i).transpose() - fd).cwiseAbs().maxCoeff() <= 1e-7);
  }
}

TEST_CASE("minimum eigenvalue") {
  const AlmostComplexStructure st = AlmostComplexStructure::standard(2);
  const ScalarField u = ScalarField::parse("x1^2 + x2^2 + x3^2 + x4^2", 2);
  CHECK(min_levi_eigen(st, u, Point::Zero(4), HermitianMetric::euclidean(2)) == doctest::Approx(1.0).epsilon(1e-13));

  // Brute-force sphere sample for a non-diagonal case.
  const AlmostComplexStructure s = tilted(2);
  const ScalarField w = ScalarField::parse("x1^2 + 2*x2^2 + x3^2 + x4^2 + x1*x3", 2);
  const Point p = Point::Constant(4, 0.2);
  Eigen::MatrixXcd h(2, 2);
  h << 2.0, cplx(0.3, 0.1), cplx(0.3, -0.1), 1.0;
  const HermitianMetric metric = HermitianMetric::constant(h);
  const double eig = min_levi_eigen(s, w, p, metric);
  const LeviQuadraticForm form = levi_matrix(s, w, p);
  std::mt19937_64 rng(23);
  std::normal_distribution<double> g;
  double best = 1e300;
  for (int k = 0; k < 20000; ++k) {
    Eigen::VectorXd v(4);
    for (int i = 0; i < 4; ++i) v[i] = g(rng);
    best = std::min(best, form(v) / (4.0 * metric.value(p, to_complex(v))));
  }
  CHECK(best >= eig - 1e-12);
  CHECK(best <= eig + 1e-2);
}

TEST_CASE("strict plurisubharmonicity") {
  const std::vector<Point> grid = lattice(2, 5, -0.2, 0.2);
  const HermitianMetric e = HermitianMetric::euclidean(1);
  const AlmostComplexStructure st = AlmostComplexStructure::standard(1);

  const PshReport neg = is_strictly_psh(st, ScalarField::parse("-(x1^2 + x2^2)", 1), grid, e, 0.0);
  CHECK_FALSE(neg.pass);
  for (const PshPointRecord& r : neg.points) CHECK_FALSE(r.pass);

  CHECK_FALSE(is_strictly_psh(st, ScalarField::parse("x1", 1), grid, e, 0.0).pass);

  const PshReport pos = is_strictly_psh(st, ScalarField::parse("x1^2 + x2^2", 1), grid, e, 0.5);
  CHECK(pos.pass);
  CHECK(pos.points.size() == grid.size());
  CHECK(pos.worst_eigen == doctest::Approx(1.0));

  const AlmostComplexStructure small = scale_structure(
      AlmostComplexStructure::from_a_function(1,
                                              [](const Point& p) {
                                                Eigen::MatrixXcd a(1, 1);
                                                a(0, 0) = 8.0 * cplx(p[0], p[1]) * cplx(p[0], p[1]);
                                                return a;
                                              }),
      0.05);
  CHECK(is_strictly_psh(small, ScalarField::parse("x1^2 + x2^2", 1), grid, e, 0.5).pass);
}

TEST_CASE("invariance under holomorphic maps") {
  Point p(2);
  p << 0.1, -0.05;
  const Eigen::VectorXd v = Eigen::Vector2d(0.3, 0.8);
  const ScalarField u = ScalarField::parse("x1^2 + x2^2", 1);
  const AlmostComplexStructure st = AlmostComplexStructure::standard(1);

  const InvarianceResult id = hessian_invariance_check(CoordinateChange::identity(1), st, st, u, p, v);
  CHECK(id.lhs == id.rhs);

  Eigen::Matrix2d m;
  m << 2.0, -1.0, 1.0, 2.0;  // multiplication by 2 + i
  const InvarianceResult lin =
      hessian_invariance_check(CoordinateChange::affine(m, Point::Zero(2)), st, st, u, p, v);
  CHECK(lin.lhs == doctest::Approx(lin.rhs).epsilon(1e-8));
  CHECK(lin.rhs == doctest::Approx(4.0 * 5.0 * v.squaredNorm()).epsilon(1e-10));

  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(1, 1);
  c(0, 0) = 1.0;
  const InvarianceResult rem =
      hessian_invariance_check(CoordinateChange::quadratic({c}), flat_structure(), st, ScalarField::parse("x1", 1), p, v);
  CHECK(std::abs(rem.lhs) <= 1e-5);
  CHECK(std::abs(rem.rhs) <= 1e-5);

  Eigen::Matrix2d conj;
  conj << 1.0, 0.0, 0.0, -1.0;
  CHECK_THROWS_AS(hessian_invariance_check(CoordinateChange::affine(conj, Point::Zero(2)), st, st, u, p, v),
                  PreconditionError);
}
