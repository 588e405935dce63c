#pragma once

#include <vector>

#include "levimax/coords.hpp"

namespace levimax {

/// Tensor lattice with `points` nodes per axis on [lo, hi]^dim (lexicographic order).
inline std::vector<Point> lattice(int dim, int points, double lo, double hi) {
  std::vector<Point> out;
  if (dim < 1 || points < 1) return out;
  std::size_t total = 1;
  for (int d = 0; d < dim; ++d) total *= static_cast<std::size_t>(points);
  out.reserve(total);
  std::vector<int> idx(dim, 0);
  const double step = points > 1 ? (hi - lo) / (points - 1) : 0.0;
  for (std::size_t c = 0; c < total; ++c) {
    Point p(dim);
    for (int d = 0; d < dim; ++d) p[d] = points > 1 ? lo + step * idx[d] : 0.5 * (lo + hi);
    out.push_back(std::move(p));
    for (int d = dim - 1; d >= 0; --d) {
      if (++idx[d] < points) break;
      idx[d] = 0;
    }
  }
  return out;
}

}  // namespace levimax
