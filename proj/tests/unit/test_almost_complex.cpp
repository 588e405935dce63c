#include <doctest.h>

#include <random>

#include "levimax/almost_complex.hpp"
#include "levimax/errors.hpp"
#include "levimax/grid.hpp"

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

CoordinateChange straightening_map() {
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(1, 1);
  c(0, 0) = 1.0;
  return CoordinateChange::quadratic({c});
}

Eigen::MatrixXcd random_small(std::mt19937_64& rng, int n, double scale) {
  std::uniform_real_distribution<double> unit(-1, 1);
  Eigen::MatrixXcd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = scale * cplx(unit(rng), unit(rng));
  return a;
}

Eigen::VectorXcd random_vector(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> unit(-1, 1);
  Eigen::VectorXcd w(n);
  for (int i = 0; i < n; ++i) w[i] = cplx(unit(rng), unit(rng));
  return w;
}

template <class M>
double max_abs(const Eigen::MatrixBase<M>& m) {
  return m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
}
}  // namespace

TEST_CASE("complex-linear split") {
  const LinearComplexDecomposition i = decompose_linear(standard_structure(2));
  CHECK(max_abs(i.p - cplx(0, 1) * Eigen::MatrixXcd::Identity(2, 2)) <= 1e-15);
  CHECK(max_abs(i.q) <= 1e-15);

  Eigen::MatrixXd conj = Eigen::MatrixXd::Identity(2, 2);
  conj(1, 1) = -1.0;
  const LinearComplexDecomposition c = decompose_linear(conj);
  CHECK(max_abs(c.p) <= 1e-15);
  CHECK(std::abs(c.q(0, 0) - 1.0) <= 1e-15);
  CHECK(max_abs(c.real_matrix() - conj) <= 1e-15);
}

TEST_CASE("standard structure has zero complex matrix") {
  CHECK(max_abs(complex_matrix_from_j(standard_structure(3))) <= 1e-15);
  CHECK(max_abs(j_from_complex_matrix(Eigen::MatrixXcd::Zero(2, 2)) - standard_structure(2)) <= 1e-15);
}

TEST_CASE("constant diagonal complex matrix") {
  Eigen::MatrixXcd a(1, 1);
  a << 0.3;
  const Eigen::MatrixXd j = j_from_complex_matrix(a);
  CHECK(max_abs(j * j + Eigen::MatrixXd::Identity(2, 2)) <= 1e-12);
  CHECK(max_abs(complex_matrix_from_j(j) - a) <= 1e-12);

  Eigen::MatrixXcd big(1, 1);
  big << 1.2;
  CHECK_THROWS_AS(j_from_complex_matrix(big), PreconditionError);
}

TEST_CASE("round trip and defining identity on random structures") {
  std::mt19937_64 rng(7);
  for (int n : {1, 2, 3}) {
    for (int trial = 0; trial < 10; ++trial) {
      const Eigen::MatrixXcd a = random_small(rng, n, 0.2);
      const Eigen::MatrixXd j = j_from_complex_matrix(a);
      CHECK(max_abs(j * j + Eigen::MatrixXd::Identity(2 * n, 2 * n)) <= 1e-12);
      CHECK(max_abs(complex_matrix_from_j(j) - a) <= 1e-10);
      for (int k = 0; k < 10; ++k) CHECK(defining_identity_residual(j, a, random_vector(rng, n)) <= 1e-10);
    }
  }
}

TEST_CASE("round trip on a non-constant field") {
  const AlmostComplexStructure s = flat_structure();
  const AlmostComplexStructure sj = structure_from_complex_matrix(s);
  CHECK(sj.representation() == AlmostComplexStructure::Representation::JMatrix);
  for (const Point& p : lattice(2, 5, -0.3, 0.3)) {
    CHECK(max_abs(sj.a(p) - s.a(p)) <= 1e-10);
    CHECK(max_abs(s.j(p) * s.j(p) + Eigen::MatrixXd::Identity(2, 2)) <= 1e-12);
  }
}

TEST_CASE("structure validation") {
  const std::vector<Point> grid = default_structure_grid(1);
  const StructureReport st = validate_structure(AlmostComplexStructure::standard(1), grid);
  CHECK(st.pass);
  CHECK(st.max_residual == 0.0);

  const AlmostComplexStructure bent = AlmostComplexStructure::from_j_function(1, [](const Point&) {
    Eigen::MatrixXd j = standard_structure(1);
    j(0, 0) += 1e-3;
    j(1, 0) += 1e-3;
    return j;
  });
  CHECK_FALSE(validate_structure(bent, grid).pass);

  const AlmostComplexStructure diag = AlmostComplexStructure::from_a_function(2, [](const Point&) {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(2, 2);
    a(0, 0) = 0.5;
    return a;
  });
  const StructureReport d = validate_structure(diag, {Point::Zero(4)});
  CHECK(d.pass);
  CHECK(d.margin == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("expression structures") {
  std::vector<std::vector<std::pair<Expression, Expression>>> entries(1);
  entries[0].push_back({Expression::parse("0.1*x1", 1), Expression::parse("0", 1)});
  const AlmostComplexStructure s = AlmostComplexStructure::from_a_expressions(1, entries);
  Point p(2);
  p << 0.5, 0.2;
  CHECK(std::abs(s.a(p)(0, 0) - 0.05) <= 1e-15);
  CHECK(max_abs(s.j(p) - j_from_complex_matrix(s.a(p))) <= 1e-14);

  std::vector<std::vector<Expression>> jst(2);
  jst[0] = {Expression::parse("0", 1), Expression::parse("-1", 1)};
  jst[1] = {Expression::parse("1", 1), Expression::parse("0", 1)};
  const AlmostComplexStructure sj = AlmostComplexStructure::from_j_expressions(1, jst);
  CHECK(sj.tier() == DerivativeTier::Exact);
  CHECK(max_abs(sj.a(p)) <= 1e-15);
  for (const Eigen::MatrixXd& d : sj.j_derivatives(p)) CHECK(max_abs(d) == 0.0);
}

TEST_CASE("coordinate changes") {
  const CoordinateChange f = straightening_map();
  Point p(2);
  p << 0.2, -0.1;
  const cplx z(0.2, -0.1);
  const Point fp = f(p);
  CHECK(std::abs(cplx(fp[0], fp[1]) - (z + z * std::conj(z))) <= 1e-15);
  CHECK((f.inverse(fp) - p).norm() <= 1e-13);

  const LinearComplexDecomposition w = f.wirtinger(p);
  CHECK(std::abs(w.p(0, 0) - (1.0 + std::conj(z))) <= 1e-12);
  CHECK(std::abs(w.q(0, 0) - z) <= 1e-12);

  const CoordinateChange id = CoordinateChange::identity(1);
  CHECK((id(p) - p).norm() == 0.0);

  Eigen::MatrixXd l(2, 2);
  l << 2.0, 1.0, 0.5, 3.0;
  const CoordinateChange aff = CoordinateChange::affine(l, p);
  CHECK(aff(p).norm() == 0.0);
  const Point q = Point::Constant(2, 0.7);
  CHECK((aff.inverse(aff(q)) - q).norm() <= 1e-14);

  const CoordinateChange comp = CoordinateChange::compose(f, aff);
  CHECK((comp(q) - f(aff(q))).norm() <= 1e-15);
  CHECK((comp.jacobian(q) - f.jacobian(aff(q)) * l).cwiseAbs().maxCoeff() <= 1e-12);

  const CoordinateChange ex = CoordinateChange::from_expressions(
      1, {Expression::parse("x1 + x1^2 + x2^2", 1), Expression::parse("x2", 1)});
  CHECK((ex.jacobian(p) - f.jacobian(p)).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK((ex.inverse(ex(p)) - p).norm() <= 1e-12);
}

TEST_CASE("change of coordinates formula") {
  const AlmostComplexStructure s = flat_structure();
  const CoordinateChange f = straightening_map();
  for (const Point& p : lattice(2, 5, -0.3, 0.3)) {
    CHECK(max_abs(transform_complex_matrix(s, CoordinateChange::identity(1), p) - s.a(p)) <= 1e-14);
    // F straightens the structure z/(1 + conj(z)).
    CHECK(max_abs(transform_complex_matrix(s, f, p)) <= 1e-12);
  }
  // Pulling J_st back by F produces z/(1 + conj(z)).
  const AlmostComplexStructure back = pullback(AlmostComplexStructure::standard(1), f);
  for (const Point& p : lattice(2, 4, -0.3, 0.3)) CHECK(max_abs(back.a(p) - s.a(p)) <= 1e-8);
}

TEST_CASE("two paths agree on random structures") {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> unit(-0.3, 0.3);
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::MatrixXcd a0 = random_small(rng, 2, 0.1), a1 = random_small(rng, 2, 0.1);
    const AlmostComplexStructure s = AlmostComplexStructure::from_a_function(2, [a0, a1](const Point& p) {
      return Eigen::MatrixXcd(a0 * p[0] + a1 * p[3]);
    });
    std::vector<Eigen::MatrixXcd> c{random_small(rng, 2, 0.3), random_small(rng, 2, 0.3)};
    const CoordinateChange phi = CoordinateChange::quadratic(c);
    const AlmostComplexStructure pushed = pushforward(s, phi);
    Point p(4);
    for (int i = 0; i < 4; ++i) p[i] = unit(rng);
    CHECK(max_abs(transform_complex_matrix(s, phi, p) - pushed.a(phi(p))) <= 1e-8);
  }
}

TEST_CASE("complex-linear maps preserve the standard structure") {
  Eigen::MatrixXcd m(2, 2);
  m << cplx(1, 1), cplx(0.2, 0), cplx(0, -0.5), cplx(2, 0);
  Eigen::MatrixXd real = Eigen::MatrixXd::Zero(4, 4);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) {
      real(2 * r, 2 * c) = m(r, c).real();
      real(2 * r, 2 * c + 1) = -m(r, c).imag();
      real(2 * r + 1, 2 * c) = m(r, c).imag();
      real(2 * r + 1, 2 * c + 1) = m(r, c).real();
    }
  const CoordinateChange phi = CoordinateChange::affine(real, Point::Zero(4));
  const AlmostComplexStructure pushed = pushforward(AlmostComplexStructure::standard(2), phi);
  CHECK(max_abs(pushed.j(Point::Constant(4, 0.1)) - standard_structure(2)) <= 1e-12);
}

TEST_CASE("isotropic dilation") {
  const AlmostComplexStructure s = flat_structure();
  const AlmostComplexStructure same = scale_structure(s, 1.0);
  const std::vector<Point> disc = [] {
    std::vector<Point> out;
    for (const Point& p : lattice(2, 41, -1, 1))
      if (p.norm() <= 1.0) out.push_back(p);
    return out;
  }();
  double prev = 1e300;
  for (double lambda : {0.5, 0.2, 0.1, 0.05}) {
    const AlmostComplexStructure sl = scale_structure(s, lambda);
    double sup = 0.0;
    for (const Point& p : disc) sup = std::max(sup, std::abs(sl.a(p)(0, 0)));
    CHECK(sup < prev);
    prev = sup;
    if (lambda == 0.1) CHECK(sup == doctest::Approx(0.1 / 0.9).epsilon(1e-12));
  }
  for (const Point& p : lattice(2, 3, -0.5, 0.5)) CHECK(max_abs(same.a(p) - s.a(p)) == 0.0);
  CHECK_THROWS_AS(scale_structure(s, 0.0), PreconditionError);
}

TEST_CASE("wirtinger derivatives of matrix fields") {
  auto fn = [](const Point& p) {
    const cplx z(p[0], p[1]);
    Eigen::MatrixXcd m(1, 1);
    m(0, 0) = z * z + 3.0 * std::conj(z);
    return m;
  };
  Point p(2);
  p << 0.3, 0.4;
  const auto [dz, dzbar] = wirtinger_matrix_derivatives(fn, p);
  CHECK(std::abs(dz[0](0, 0) - 2.0 * cplx(0.3, 0.4)) <= 1e-9);
  CHECK(std::abs(dzbar[0](0, 0) - 3.0) <= 1e-9);
}
