#pragma once

// Central differences with one Richardson level. Works for any value type with
// +, - and scalar multiplication (double, Eigen vectors and matrices).

#include <algorithm>
#include <cmath>
#include <limits>
#include <type_traits>

#include <Eigen/Dense>

namespace levimax::fd {

namespace detail {
template <class T>
auto materialize(T&& x) {
  if constexpr (std::is_arithmetic_v<std::decay_t<T>>) {
    return x;
  } else {
    return x.eval();
  }
}
}  // namespace detail

inline double first_order_step(double coordinate) {
  return std::max(1.0, std::abs(coordinate)) * std::cbrt(std::numeric_limits<double>::epsilon());
}

inline double second_order_step(double coordinate) {
  return std::max(1.0, std::abs(coordinate)) *
         std::sqrt(std::sqrt(std::numeric_limits<double>::epsilon()));
}

/// d f / d x_i at p with step h (Richardson over h and h/2).
template <class F>
auto partial(const F& f, const Eigen::VectorXd& p, int i, double h) {
  auto central = [&](double step) {
    Eigen::VectorXd a = p, b = p;
    a[i] += step;
    b[i] -= step;
    return detail::materialize((f(a) - f(b)) * (0.5 / step));
  };
  const auto coarse = central(h);
  const auto fine = central(0.5 * h);
  return detail::materialize((fine * 4.0 - coarse) * (1.0 / 3.0));
}

template <class F>
auto partial(const F& f, const Eigen::VectorXd& p, int i) {
  return partial(f, p, i, first_order_step(p[i]));
}

/// d^2 f / d x_i d x_j at p with steps h_i, h_j (Richardson over h and h/2).
template <class F>
auto second_partial(const F& f, const Eigen::VectorXd& p, int i, int j, double hi, double hj) {
  auto stencil = [&](double scale) {
    const double si = hi * scale, sj = hj * scale;
    if (i == j) {
      Eigen::VectorXd a = p, b = p;
      a[i] += si;
      b[i] -= si;
      return detail::materialize((f(a) - f(p) * 2.0 + f(b)) * (1.0 / (si * si)));
    }
    Eigen::VectorXd pp = p, pm = p, mp = p, mm = p;
    pp[i] += si, pp[j] += sj;
    pm[i] += si, pm[j] -= sj;
    mp[i] -= si, mp[j] += sj;
    mm[i] -= si, mm[j] -= sj;
    return detail::materialize((f(pp) - f(pm) - f(mp) + f(mm)) * (0.25 / (si * sj)));
  };
  const auto coarse = stencil(1.0);
  const auto fine = stencil(0.5);
  return detail::materialize((fine * 4.0 - coarse) * (1.0 / 3.0));
}

template <class F>
auto second_partial(const F& f, const Eigen::VectorXd& p, int i, int j) {
  return second_partial(f, p, i, j, second_order_step(p[i]), second_order_step(p[j]));
}

}  // namespace levimax::fd
