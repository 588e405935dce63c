#include "levimax/quadrature.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "levimax/errors.hpp"

namespace levimax {

GaussLegendreRule::GaussLegendreRule(int n) : nodes(n), weights(n) {
  if (n < 1) throw PreconditionError("Gauss-Legendre rule needs at least one node");
  // Newton on P_n from the Chebyshev-like initial guess; roots are symmetric.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged root for the weight.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    if (n == 1) p0 = 1.0;
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) nodes[n / 2] = 0.0;
}

const GaussLegendreRule& panel_rule() {
  static const GaussLegendreRule rule(20);
  return rule;
}

namespace {

// `floor` is an absolute error level below which panels are never split further,
// tied to rounding in the top-level estimate; without it the halved tolerance
// chases noise in panels where the integrand is negligible.
double adapt(const std::function<double(double)>& f, double a, double b, double whole, double tol,
             double floor, int depth) {
  const double mid = 0.5 * (a + b);
  const GaussLegendreRule& rule = panel_rule();
  const double left = rule.integrate(f, a, mid);
  const double right = rule.integrate(f, mid, b);
  const double refined = left + right;
  const double err = std::abs(refined - whole);
  if (err <= tol || err <= floor || err <= 1e-15 * std::abs(refined)) return refined;
  if (depth <= 0) throw ConvergenceError("adaptive quadrature did not converge", err);
  return adapt(f, a, mid, left, 0.5 * tol, floor, depth - 1) + adapt(f, mid, b, right, 0.5 * tol, floor, depth - 1);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double abs_tol,
                          int max_depth) {
  if (a == b) return 0.0;
  if (b < a) return -integrate_adaptive(f, b, a, abs_tol, max_depth);
  const double whole = panel_rule().integrate(f, a, b);
  const double floor = 4.0 * std::numeric_limits<double>::epsilon() * std::abs(whole);
  return adapt(f, a, b, whole, abs_tol, floor, max_depth);
}

}  // namespace levimax
