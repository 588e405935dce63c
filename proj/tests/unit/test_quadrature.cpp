#include <doctest.h>

#include <cmath>

#include "levimax/errors.hpp"
#include "levimax/quadrature.hpp"

using namespace levimax;

TEST_CASE("gauss-legendre exactness") {
  for (int n : {1, 2, 5, 16, 20, 64}) {
    const GaussLegendreRule rule(n);
    double wsum = 0.0;
    for (double w : rule.weights) wsum += w;
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
    // Exact for degree 2n - 1.
    const int deg = 2 * n - 1;
    const double got = rule.integrate([deg](double x) { return std::pow(x, deg - 1) * deg + 1.0; }, 0.0, 1.0);
    CHECK(got == doctest::Approx(2.0).epsilon(1e-13));
  }
}

TEST_CASE("nodes are symmetric and sorted") {
  const GaussLegendreRule rule(17);
  for (int i = 0; i < rule.size(); ++i) {
    CHECK(rule.nodes[i] == doctest::Approx(-rule.nodes[rule.size() - 1 - i]).scale(1));
    if (i > 0) CHECK(rule.nodes[i] > rule.nodes[i - 1]);
  }
}

TEST_CASE("adaptive integration") {
  CHECK(integrate_adaptive([](double x) { return std::exp(x); }, 0, 1, 1e-13) ==
        doctest::Approx(std::exp(1.0) - 1).epsilon(1e-13));
  CHECK(integrate_adaptive([](double x) { return std::sqrt(x); }, 0, 1, 1e-12) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-11));
  CHECK(integrate_adaptive([](double x) { return std::abs(x - 0.3); }, 0, 1, 1e-12) ==
        doctest::Approx(0.5 * (0.09 + 0.49)).epsilon(1e-11));
  CHECK(integrate_adaptive([](double) { return 0.0; }, 0, 1, 1e-14) == 0.0);
}

TEST_CASE("adaptive integration gives up") {
  CHECK_THROWS_AS(integrate_adaptive([](double x) { return std::sin(1.0 / x); }, 1e-9, 1, 1e-15, 3),
                  ConvergenceError);
}
