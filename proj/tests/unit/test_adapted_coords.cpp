#include <doctest.h>

#include <random>

#include "levimax/adapted_coords.hpp"
#include "levimax/errors.hpp"
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

// A(z) = A0 + sum_k (B_k z_k + C_k conj(z_k)), small random coefficients.
AlmostComplexStructure random_structure(std::mt19937_64& rng, int n, double scale) {
  std::uniform_real_distribution<double> unit(-1, 1);
  auto m = [&]() {
    Eigen::MatrixXcd a(n, n);
    for (int i = 0; i < n * n; ++i) a.data()[i] = scale * cplx(unit(rng), unit(rng));
    return a;
  };
  const Eigen::MatrixXcd a0 = m();
  std::vector<Eigen::MatrixXcd> b, c;
  for (int k = 0; k < n; ++k) {
    b.push_back(m());
    c.push_back(m());
  }
  return AlmostComplexStructure::from_a_function(n, [=](const Point& p) {
    Eigen::MatrixXcd a = a0;
    const Eigen::VectorXcd z = to_complex(p);
    for (int k = 0; k < n; ++k) a += b[k] * z[k] + c[k] * std::conj(z[k]);
    return a;
  });
}
}  // namespace

TEST_CASE("linear normalization of the standard structure is the identity") {
  Point p(4);
  p << 0.1, 0.2, -0.3, 0.0;
  const CoordinateChange l = linear_normalize(AlmostComplexStructure::standard(2), p);
  const auto [m, origin] = *l.affine_part();
  CHECK((m - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK((origin - p).norm() == 0.0);
}

TEST_CASE("linear normalization of the opposite structure") {
  const AlmostComplexStructure neg = AlmostComplexStructure::from_j_function(
      1, [](const Point&) { return Eigen::MatrixXd(-standard_structure(1)); });
  const CoordinateChange l = linear_normalize(neg, Point::Zero(2));
  const Eigen::MatrixXd m = l.affine_part()->first;
  CHECK((m * (-standard_structure(1)) * m.inverse() - standard_structure(1)).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK(m.determinant() < 0.0);
}

TEST_CASE("linear normalization conjugates to the standard structure") {
  std::mt19937_64 rng(31);
  for (int n : {1, 2, 3}) {
    const AlmostComplexStructure s = random_structure(rng, n, 0.2);
    const Point p = Point::Constant(2 * n, 0.1);
    const Eigen::MatrixXd m = linear_normalize(s, p).affine_part()->first;
    CHECK((m * s.j(p) * m.inverse() - standard_structure(n)).cwiseAbs().maxCoeff() <= 1e-12);
  }
  const AlmostComplexStructure bad = AlmostComplexStructure::from_j_function(
      1, [](const Point&) { return Eigen::MatrixXd(Eigen::MatrixXd::Identity(2, 2)); });
  CHECK_THROWS_AS(linear_normalize(bad, Point::Zero(2)), PreconditionError);
}

TEST_CASE("quadratic normalization") {
  const CoordinateChange zero = quadratic_normalize(AlmostComplexStructure::standard(2));
  const std::vector<Eigen::MatrixXcd> flat = *zero.quadratic_coefficients();
  for (const Eigen::MatrixXcd& c : flat) CHECK(c.cwiseAbs().maxCoeff() <= 1e-12);

  const CoordinateChange phi = quadratic_normalize(flat_structure());
  const std::vector<Eigen::MatrixXcd> c = *phi.quadratic_coefficients();
  CHECK(std::abs(c[0](0, 0) - 1.0) <= 1e-8);
  const AdaptedReport r = verify_adapted(flat_structure(), phi, ScalarField::parse("x1 + x1^2 + x2^2", 1));
  CHECK(r.pass);
  CHECK(r.levi.cwiseAbs().maxCoeff() <= 1e-5);

  const AlmostComplexStructure off = AlmostComplexStructure::from_a_function(1, [](const Point&) {
    Eigen::MatrixXcd a(1, 1);
    a << 0.2;
    return a;
  });
  CHECK_THROWS_AS(quadratic_normalize(off), PreconditionError);
}

TEST_CASE("adapted chart on random structures") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 1 + trial % 2;
    const AlmostComplexStructure s = random_structure(rng, n, 0.15);
    const Point p = Point::Constant(2 * n, 0.05 * (trial - 2));
    const CoordinateChange chart = adapted_chart(s, p);
    CHECK(chart(p).norm() <= 1e-14);
    std::string text = "x1^2 + 2*x2^2 + x1*x2";
    if (n == 2) text += " + x3^2 + x4^2 + x1*x4";
    const AdaptedReport r = verify_adapted(s, chart, ScalarField::parse(text, n));
    CHECK(r.a_residual <= 1e-8);
    CHECK(r.da_residual <= 1e-8);
    CHECK(r.levi_residual <= 1e-5);
    CHECK(r.pass);
  }
}

TEST_CASE("standard data has vanishing residuals") {
  const AdaptedReport r = verify_adapted(AlmostComplexStructure::standard(2), CoordinateChange::identity(2),
                                         ScalarField::parse("x1^2 + x2^2 + x3^2 + x4^2", 2));
  CHECK(r.a_residual == 0.0);
  CHECK(r.da_residual == 0.0);
  CHECK(r.levi_residual <= 1e-9);
}

TEST_CASE("hermitian real matrix") {
  const Eigen::MatrixXd m = hermitian_real_matrix(Eigen::MatrixXcd::Identity(2, 2));
  CHECK((m - 4.0 * Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-14);
  Eigen::MatrixXcd l(1, 1);
  l << 0.5;
  CHECK((hermitian_real_matrix(l) - 2.0 * Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-14);
}
