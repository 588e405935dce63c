#pragma once

#include <functional>
#include <vector>

namespace levimax {

/// Gauss–Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  explicit GaussLegendreRule(int n);
  int size() const noexcept { return static_cast<int>(nodes.size()); }

  /// Fixed-rule integral of f over [a, b].
  template <class F>
  double integrate(const F& f, double a, double b) const {
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    double sum = 0.0;
    for (int i = 0; i < size(); ++i) sum += weights[i] * f(mid + half * nodes[i]);
    return half * sum;
  }
};

/// Shared 20-point rule used as the panel rule of the adaptive integrator.
const GaussLegendreRule& panel_rule();

/// Adaptive Gauss–Legendre: bisects until the panel estimate and the sum over
/// its two halves agree within the (proportionally split) absolute tolerance.
/// Throws ConvergenceError if the recursion depth limit is reached.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, int max_depth = 40);

}  // namespace levimax
