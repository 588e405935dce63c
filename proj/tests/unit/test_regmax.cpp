#include <doctest.h>

#include <algorithm>
#include <random>

#include "levimax/errors.hpp"
#include "levimax/grid.hpp"
#include "levimax/regmax.hpp"

using namespace levimax;

namespace {
// High-precision reference values computed independently with mpmath.
constexpr double kRawIntegral = 0.00702985840660965623924127053035;
constexpr double kConstant = 142.250375777095868134485183695;
constexpr double kPairAtZero = 0.579035076573271269658329795007;  // M_(1,1)(0, 0)

double fd(const std::vector<double>& t, const ThetaVector& th, std::size_t j, double h = 1e-5) {
  std::vector<double> a = t, b = t;
  a[j] += h;
  b[j] -= h;
  return (regmax_eval(a, th) - regmax_eval(b, th)) / (2 * h);
}
}  // namespace

TEST_CASE("mollifier constants") {
  const Mollifier& m = Mollifier::standard();
  CHECK(m.raw_integral() == doctest::Approx(kRawIntegral).epsilon(1e-13));
  CHECK(mollifier_constant() == doctest::Approx(kConstant).epsilon(1e-13));
  CHECK(mollifier_constant() * kRawIntegral == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(m.first_moment() == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(m.cdf(-1.0) == 0.0);
  CHECK(m.cdf(0.0) == 0.0);
  CHECK(m.cdf(1.0) == 1.0);
  CHECK(m.cdf(0.5) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(Mollifier::raw_kernel(0.0) == 0.0);
  CHECK(Mollifier::raw_kernel(1.2) == 0.0);
}

TEST_CASE("single argument") {
  const ThetaVector th({0.7});
  for (double t : {-3.0, 0.0, 2.5}) {
    CHECK(regmax_eval(std::vector<double>{t}, th) == doctest::Approx(t + 0.7 * 0.5).epsilon(1e-13));
    CHECK(regmax_grad(std::vector<double>{t}, th)[0] == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("separated arguments") {
  const ThetaVector th({1.0, 1.0});
  const std::vector<double> t{0.0, 5.0};
  CHECK(regmax_eval(t, th) == doctest::Approx(5.5).epsilon(1e-13));
  const std::vector<double> g = regmax_grad(t, th);
  CHECK(std::abs(g[0]) <= 1e-9);
  CHECK(std::abs(g[1] - 1.0) <= 1e-9);
}

TEST_CASE("tie value") {
  const ThetaVector th({1.0, 1.0});
  CHECK(regmax_eval(std::vector<double>{0.0, 0.0}, th) == doctest::Approx(kPairAtZero).epsilon(1e-11));
  const std::vector<double> g = regmax_grad(std::vector<double>{0.0, 0.0}, th);
  CHECK(g[0] == doctest::Approx(0.5).epsilon(1e-11));
  CHECK(g[1] == doctest::Approx(0.5).epsilon(1e-11));
}

TEST_CASE("random bounds, equivariance and gradients") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> tdist(-1, 1), thdist(0.01, 1);
  std::uniform_int_distribution<int> kdist(1, 4);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = kdist(rng);
    std::vector<double> t(k), th(k);
    for (int j = 0; j < k; ++j) {
      t[j] = tdist(rng);
      th[j] = thdist(rng);
    }
    const ThetaVector theta(th);
    const double m = regmax_eval(t, theta);
    double lo = -1e300, hi = -1e300;
    for (int j = 0; j < k; ++j) {
      lo = std::max(lo, t[j]);
      hi = std::max(hi, t[j] + th[j]);
    }
    CHECK(m >= lo - 1e-9);
    CHECK(m <= hi + 1e-9);

    const double a = tdist(rng);
    std::vector<double> shifted = t;
    for (double& x : shifted) x += a;
    CHECK(std::abs(regmax_eval(shifted, theta) - m - a) <= 1e-9);

    const std::vector<double> g = regmax_grad(t, theta);
    double sum = 0.0;
    for (int j = 0; j < k; ++j) {
      sum += g[j];
      CHECK(g[j] >= -1e-10);
      CHECK(std::abs(g[j] - fd(t, theta, j)) <= 1e-6);
    }
    CHECK(std::abs(sum - 1.0) <= 1e-8);
  }
}

TEST_CASE("two-argument values against nested quadrature") {
  // M = int int max(t1 + th1 s1, t2 + th2 s2) w(s1) w(s2) ds2 ds1, inner integral split at the kink.
  const Mollifier& m = Mollifier::standard();
  auto brute = [&m](double t1, double t2, double th1, double th2) {
    auto outer = [&](double s1) {
      const double a = t1 + th1 * s1;
      auto inner = [&](double s2) { return std::max(a, t2 + th2 * s2) * m.density(s2); };
      const double kink = std::clamp((a - t2) / th2, 0.0, 1.0);
      double v = 0.0;
      if (kink > 0.0) v += integrate_adaptive(inner, 0.0, kink, 1e-13);
      if (kink < 1.0) v += integrate_adaptive(inner, kink, 1.0, 1e-13);
      return v * m.density(s1);
    };
    return integrate_adaptive(outer, 0.0, 1.0, 1e-12);
  };
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> td(-0.5, 0.5), thd(0.1, 1.0);
  for (int trial = 0; trial < 8; ++trial) {
    const double t1 = td(rng), t2 = td(rng), th1 = thd(rng), th2 = thd(rng);
    const double want = brute(t1, t2, th1, th2);
    CHECK(regmax_eval(std::vector<double>{t1, t2}, ThetaVector({th1, th2})) == doctest::Approx(want).epsilon(1e-9));
  }
  CHECK(brute(0.0, 5.0, 1.0, 1.0) == doctest::Approx(5.5).epsilon(1e-10));
}

TEST_CASE("monotone in each argument") {
  const ThetaVector th({0.3, 0.2, 0.5});
  std::vector<double> t{0.1, 0.0, -0.2};
  double prev = regmax_eval(t, th);
  for (int s = 0; s < 10; ++s) {
    t[1] += 0.05;
    const double next = regmax_eval(t, th);
    CHECK(next >= prev);
    prev = next;
  }
}

TEST_CASE("preconditions") {
  CHECK_THROWS_AS(ThetaVector({0.1, 0.0}), PreconditionError);
  CHECK_THROWS_AS(ThetaVector(std::vector<double>{}), PreconditionError);
  CHECK_THROWS_AS(RegularizedMax(ThetaVector({1, 1, 1, 1, 1})), PreconditionError);
  CHECK_NOTHROW(RegularizedMax(ThetaVector({1, 1, 1, 1, 1}), 5));
  CHECK_THROWS_AS(regmax_eval(std::vector<double>{1.0}, ThetaVector({1, 1})), DimensionError);
}

TEST_CASE("regmax field") {
  const ScalarField f = ScalarField::parse("x1^2 + sin(x2)", 1);
  const ThetaVector th({0.2, 0.2});
  const ScalarField same = regmax_field({f, f}, th);
  const double shift = 0.2 * kPairAtZero;
  for (const Point& p : lattice(2, 5, -1, 1)) CHECK(same(p) - f(p) == doctest::Approx(shift).epsilon(1e-10));

  const ScalarField zero = ScalarField::parse("0", 1), low = ScalarField::parse("-10", 1);
  const ScalarField sep = regmax_field({zero, low}, ThetaVector({0.1, 0.1}));
  for (const Point& p : lattice(2, 3, -1, 1)) {
    CHECK(sep(p) >= 0.0);
    CHECK(sep(p) <= 0.1);
  }

  const ScalarField single = regmax_field({f}, ThetaVector({0.4}));
  Point p(2);
  p << 0.3, -0.2;
  CHECK(single(p) == doctest::Approx(f(p) + 0.2).epsilon(1e-13));

  // Chain-rule jet against finite differences of the composite.
  const ScalarField u2 = ScalarField::parse("x1 + 0.5*x2^2", 1);
  const ScalarField mix = regmax_field({f, u2}, ThetaVector({0.3, 0.3}));
  p << 0.4, 0.1;
  const Jet2 j = mix.jet(p);
  CHECK((j.grad - numeric_gradient(mix, p)).cwiseAbs().maxCoeff() <= 1e-7);
  CHECK((j.hess - numeric_hessian(mix, p)).cwiseAbs().maxCoeff() <= 1e-4);
}
