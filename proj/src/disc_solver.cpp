#include "levimax/disc_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "levimax/errors.hpp"
#include "levimax/finite_difference.hpp"
#include "levimax/parallel.hpp"

namespace levimax {

namespace {

const cplx kI(0.0, 1.0);
constexpr int kExtraSubNodes = 16;

// sup-norm of a complex matrix over all entries.
double sup(const Eigen::MatrixXcd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

// ---------------------------------------------------------------------------
// Grid

DiscGrid::DiscGrid(double radius, int n_r, int n_phi) : radius_(radius), n_r_(n_r), n_phi_(n_phi) {
  if (!(radius > 0.0) || !(radius <= 1.0)) throw PreconditionError("disc radius must lie in (0, 1]");
  if (n_r < 2 || n_phi < 4) throw PreconditionError("disc grid needs n_r >= 2 and n_phi >= 4");
  const GaussLegendreRule rule(n_r);
  s_.resize(n_r);
  w_.resize(n_r);
  for (int j = 0; j < n_r; ++j) {
    s_[j] = 0.5 * radius * (rule.nodes[j] + 1.0);
    w_[j] = 0.5 * radius * rule.weights[j];
  }
}

double DiscGrid::angle(int k) const { return 2.0 * std::numbers::pi * k / n_phi_; }

cplx DiscGrid::node(int j, int k) const { return std::polar(s_[j], angle(k)); }

double DiscGrid::weight(int j, int k) const {
  (void)k;
  return w_[j] * s_[j] * 2.0 * std::numbers::pi / n_phi_;
}

double DiscGrid::total_weight() const {
  double sum = 0.0;
  for (int j = 0; j < n_r_; ++j)
    for (int k = 0; k < n_phi_; ++k) sum += weight(j, k);
  return sum;
}

// ---------------------------------------------------------------------------
// Cauchy–Green transform
//
// With g(s e^{i phi}) = sum_m g_m(s) e^{i m phi}, the mode m contributes
// c_m(rho) e^{i(m-1)psi} at rho e^{i psi}, where
//   c_m =  2 int_0^rho g_m(s) (s/rho)^{1-m} ds    (m <= 0)
//   c_m = -2 int_rho^r g_m(s) (rho/s)^{m-1} ds    (m >= 1)
// and d/dzeta of that term is ((m-1) c_m / rho + g_m(rho)) e^{i(m-2)psi}.

CauchyGreenTransform::CauchyGreenTransform(const DiscGrid& grid, const Eigen::MatrixXcd& g)
    : grid_(grid), comps_(static_cast<int>(g.cols())), half_(grid.sectors() / 2 - 1),
      sub_rule_(grid.rings() + kExtraSubNodes) {
  if (g.rows() != grid.size()) throw DimensionError("Cauchy–Green input must have one row per grid node");
  const int nr = grid.rings(), nphi = grid.sectors(), modes = 2 * half_ + 1;
  Eigen::MatrixXcd basis(nphi, modes);  // e^{-i m phi_k} / N
  for (int k = 0; k < nphi; ++k)
    for (int q = 0; q < modes; ++q) basis(k, q) = std::polar(1.0 / nphi, -mode(q) * grid.angle(k));
  hat_.resize(comps_);
  for (int c = 0; c < comps_; ++c) {
    Eigen::MatrixXcd samples(nr, nphi);
    for (int j = 0; j < nr; ++j)
      for (int k = 0; k < nphi; ++k) samples(j, k) = g(j * nphi + k, c);
    hat_[c] = samples * basis;
  }
  // Barycentric weights on the reference interval (scale-free).
  std::vector<double> x(nr);
  for (int j = 0; j < nr; ++j) x[j] = 2.0 * grid.ring(j) / grid.radius() - 1.0;
  bary_.assign(nr, 1.0);
  for (int j = 0; j < nr; ++j) {
    for (int k = 0; k < nr; ++k)
      if (k != j) bary_[j] *= (x[j] - x[k]);
    bary_[j] = 1.0 / bary_[j];
  }
}

Eigen::VectorXd CauchyGreenTransform::interpolation_row(double s) const {
  const int nr = grid_.rings();
  Eigen::VectorXd row = Eigen::VectorXd::Zero(nr);
  const double x = 2.0 * s / grid_.radius() - 1.0;
  double denom = 0.0;
  for (int j = 0; j < nr; ++j) {
    const double xj = 2.0 * grid_.ring(j) / grid_.radius() - 1.0;
    const double diff = x - xj;
    if (diff == 0.0) {
      row.setZero();
      row[j] = 1.0;
      return row;
    }
    row[j] = bary_[j] / diff;
    denom += row[j];
  }
  return row / denom;
}

CauchyGreenTransform::Ring CauchyGreenTransform::ring_at(double rho) const {
  const int modes = 2 * half_ + 1;
  const double r = grid_.radius();
  const int nsub = sub_rule_.size();
  Ring out{Eigen::MatrixXcd::Zero(modes, comps_), Eigen::MatrixXcd::Zero(modes, comps_),
           Eigen::MatrixXcd::Zero(modes, comps_)};

  Eigen::MatrixXd inner(nsub, grid_.rings()), outer(nsub, grid_.rings());
  std::vector<double> xi(nsub), wi(nsub), xo(nsub), wo(nsub);
  for (int i = 0; i < nsub; ++i) {
    xi[i] = 0.5 * rho * (sub_rule_.nodes[i] + 1.0);
    wi[i] = 0.5 * rho * sub_rule_.weights[i];
    xo[i] = rho + 0.5 * (r - rho) * (sub_rule_.nodes[i] + 1.0);
    wo[i] = 0.5 * (r - rho) * sub_rule_.weights[i];
    inner.row(i) = interpolation_row(xi[i]).transpose();
    outer.row(i) = interpolation_row(xo[i]).transpose();
  }
  const Eigen::VectorXd at_rho = interpolation_row(rho);

  for (int c = 0; c < comps_; ++c) {
    const Eigen::MatrixXcd gi = inner.cast<cplx>() * hat_[c];  // nsub x modes
    const Eigen::MatrixXcd go = outer.cast<cplx>() * hat_[c];
    out.hat.col(c) = (at_rho.transpose().cast<cplx>() * hat_[c]).transpose();
    for (int q = 0; q < modes; ++q) {
      const int m = mode(q);
      cplx acc = 0.0;
      if (m <= 0) {
        if (rho > 0.0)
          for (int i = 0; i < nsub; ++i) acc += wi[i] * gi(i, q) * std::pow(xi[i] / rho, 1 - m);
        acc *= 2.0;
      } else {
        for (int i = 0; i < nsub; ++i) acc += wo[i] * go(i, q) * std::pow(rho / xo[i], m - 1);
        acc *= -2.0;
      }
      out.c(q, c) = acc;
      out.d(q, c) = rho > 0.0 ? static_cast<double>(m - 1) * acc / rho + out.hat(q, c) : cplx(0.0);
    }
  }
  if (rho == 0.0) {
    // Only m = 2 survives in d/dzeta at the origin: -2 int_0^r g_2(s)/s ds.
    const int q2 = 2 + half_;
    if (q2 < modes) {
      for (int c = 0; c < comps_; ++c) {
        cplx acc = 0.0;
        for (int i = 0; i < nsub; ++i) acc += wo[i] * (outer.row(i).cast<cplx>() * hat_[c].col(q2))(0) / xo[i];
        out.d(q2, c) = -2.0 * acc;
      }
    }
  }
  return out;
}

Eigen::VectorXcd CauchyGreenTransform::value(cplx zeta) const {
  const double rho = std::abs(zeta), psi = std::arg(zeta);
  const Ring ring = ring_at(rho);
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(comps_);
  for (int q = 0; q < 2 * half_ + 1; ++q) {
    const int m = mode(q);
    if (rho == 0.0 && m != 1) continue;
    out += ring.c.row(q).transpose() * std::polar(1.0, (m - 1) * psi);
  }
  return out;
}

Eigen::VectorXcd CauchyGreenTransform::dzeta(cplx zeta) const {
  const double rho = std::abs(zeta), psi = std::arg(zeta);
  const Ring ring = ring_at(rho);
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(comps_);
  for (int q = 0; q < 2 * half_ + 1; ++q) {
    const int m = mode(q);
    if (rho == 0.0 && m != 2) continue;
    out += ring.d.row(q).transpose() * std::polar(1.0, (m - 2) * psi);
  }
  return out;
}

Eigen::VectorXcd CauchyGreenTransform::density(cplx zeta) const {
  const double rho = std::abs(zeta), psi = std::arg(zeta);
  const Eigen::VectorXd row = interpolation_row(rho);
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(comps_);
  for (int c = 0; c < comps_; ++c) {
    const Eigen::VectorXcd h = (row.transpose().cast<cplx>() * hat_[c]).transpose();
    for (int q = 0; q < 2 * half_ + 1; ++q) {
      if (rho == 0.0 && mode(q) != 0) continue;
      out[c] += h[q] * std::polar(1.0, mode(q) * psi);
    }
  }
  return out;
}

void CauchyGreenTransform::at_nodes(Eigen::MatrixXcd& values, Eigen::MatrixXcd& dz) const {
  const int nr = grid_.rings(), nphi = grid_.sectors(), modes = 2 * half_ + 1;
  values.resize(grid_.size(), comps_);
  dz.resize(grid_.size(), comps_);
  Eigen::MatrixXcd shift_c(nphi, modes), shift_d(nphi, modes);
  for (int k = 0; k < nphi; ++k) {
    for (int q = 0; q < modes; ++q) {
      shift_c(k, q) = std::polar(1.0, (mode(q) - 1) * grid_.angle(k));
      shift_d(k, q) = std::polar(1.0, (mode(q) - 2) * grid_.angle(k));
    }
  }
  parallel_for(static_cast<std::size_t>(nr), [&](std::size_t j) {
    const Ring ring = ring_at(grid_.ring(static_cast<int>(j)));
    values.middleRows(j * nphi, nphi) = shift_c * ring.c;
    dz.middleRows(j * nphi, nphi) = shift_d * ring.d;
  });
}

Eigen::MatrixXcd cauchy_green(const DiscGrid& grid, const Eigen::MatrixXcd& g) {
  Eigen::MatrixXcd values, dz;
  CauchyGreenTransform(grid, g).at_nodes(values, dz);
  return values;
}

// ---------------------------------------------------------------------------
// Discs

DiscMap::DiscMap(DiscGrid grid, Eigen::VectorXcd p, Eigen::VectorXcd v, Eigen::MatrixXcd g)
    : grid_(grid), p_(std::move(p)), v_(std::move(v)), transform_(grid, g) {
  t0_ = transform_.value(0.0);
  b_ = transform_.dzeta(0.0) + transform_.density(0.0);
  Eigen::MatrixXcd t, dt;
  transform_.at_nodes(t, dt);
  values_.resize(grid_.size(), p_.size());
  dz_values_.resize(grid_.size(), p_.size());
  for (int i = 0; i < grid_.size(); ++i) {
    const cplx zeta = grid_.node(i);
    values_.row(i) = (p_ + zeta * v_ + t.row(i).transpose() - t0_ - zeta * b_).transpose();
    dz_values_.row(i) = (v_ + dt.row(i).transpose() - b_).transpose();
  }
}

Eigen::VectorXcd DiscMap::operator()(cplx zeta) const {
  return p_ + zeta * v_ + transform_.value(zeta) - t0_ - zeta * b_;
}

Eigen::VectorXcd DiscMap::dzeta(cplx zeta) const { return v_ + transform_.dzeta(zeta) - b_; }

namespace {

Eigen::MatrixXcd disc_density(const AlmostComplexStructure& s, const Eigen::MatrixXcd& f, const Eigen::MatrixXcd& fz,
                              double chart_radius) {
  Eigen::MatrixXcd g(f.rows(), f.cols());
  parallel_for(static_cast<std::size_t>(f.rows()), [&](std::size_t i) {
    const Eigen::VectorXcd z = f.row(i).transpose();
    if (!(z.norm() < chart_radius)) {
      throw DomainError("disc left the chart ball (|f| = " + std::to_string(z.norm()) + ")");
    }
    g.row(i) = (-(s.a(to_real(z)) * fz.row(i).transpose().conjugate())).transpose();
  });
  return g;
}

}  // namespace

DiscMap solve_disc(const AlmostComplexStructure& s, const Point& p, const Eigen::VectorXcd& v,
                   const DiscOptions& options) {
  const int n = s.dimension();
  if (p.size() != 2 * n || v.size() != n) throw DimensionError("disc data must match the structure dimension");
  if (!(options.tol > 0.0)) throw PreconditionError("disc tolerance must be positive");
  const DiscGrid grid(options.radius, options.n_r, options.n_phi);
  const Eigen::VectorXcd pc = to_complex(p);

  Eigen::MatrixXcd f(grid.size(), n), fz(grid.size(), n);
  for (int i = 0; i < grid.size(); ++i) {
    f.row(i) = (pc + grid.node(i) * v).transpose();
    fz.row(i) = v.transpose();
  }
  Eigen::MatrixXcd g = disc_density(s, f, fz, options.chart_radius);
  if (sup(g) == 0.0) {
    DiscMap out(grid, pc, v, g);
    out.cr_residual = cr_residual(s, out);
    return out;
  }
  double increment = 0.0;
  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    DiscMap next(grid, pc, v, g);
    increment = sup(next.values() - f);
    f = next.values();
    fz = next.dzeta_values();
    if (increment < 0.1 * options.tol) {
      next.iterations = iter;
      next.final_increment = increment;
      next.cr_residual = cr_residual(s, next);
      return next;
    }
    g = disc_density(s, f, fz, options.chart_radius);
  }
  throw ConvergenceError("disc Picard iteration did not converge in " + std::to_string(options.max_iterations) +
                             " iterations",
                         increment);
}

double cr_residual(const AlmostComplexStructure& s, const DiscMap& f, int max_radii, int max_angles) {
  const DiscGrid& grid = f.grid();
  const int nr = grid.rings(), nphi = grid.sectors();
  const int rstride = std::max(1, (nr - 1 + max_radii - 1) / max_radii);
  const int astride = std::max(1, (nphi + max_angles - 1) / max_angles);
  std::vector<cplx> points;
  for (int j = 0; j + 1 < nr; j += rstride) {
    const double rho = 0.5 * (grid.ring(j) + grid.ring(j + 1));
    for (int k = 0; k < nphi; k += astride) {
      points.push_back(std::polar(rho, grid.angle(k) + std::numbers::pi / nphi));
    }
  }
  const double h = 1e-3 * grid.radius();
  auto as_real = [&f](const Eigen::VectorXd& xy) { return Eigen::VectorXd(to_real(f(cplx(xy[0], xy[1])))); };
  std::vector<double> local(points.size(), 0.0);
  parallel_for(points.size(), [&](std::size_t i) {
    Eigen::VectorXd xy(2);
    xy << points[i].real(), points[i].imag();
    const Eigen::VectorXd dxi = fd::partial(as_real, xy, 0, h);
    const Eigen::VectorXd deta = fd::partial(as_real, xy, 1, h);
    const Eigen::VectorXd value = as_real(xy);
    local[i] = (deta - s.j(value) * dxi).cwiseAbs().maxCoeff();
  });
  return local.empty() ? 0.0 : *std::max_element(local.begin(), local.end());
}

double hessian_via_disc(const AlmostComplexStructure& s, const ScalarField& u, const Point& p,
                        const Eigen::VectorXcd& v, const DiscOptions& options) {
  const DiscMap f = solve_disc(s, p, v, options);
  auto composed = [&](cplx zeta) { return u(to_real(f(zeta))); };
  const double center = composed(0.0);
  auto laplacian = [&](double h) {
    return (composed(h) + composed(-h) + composed(cplx(0.0, h)) + composed(cplx(0.0, -h)) - 4.0 * center) / (h * h);
  };
  const double coarse = laplacian(0.25 * options.radius);
  const double fine = laplacian(0.125 * options.radius);
  return (4.0 * fine - coarse) / 3.0;
}

double circle_average(const ScalarField& u, const DiscMap& f, double rho) {
  const int nphi = f.grid().sectors();
  double sum = 0.0;
  for (int k = 0; k < nphi; ++k) sum += u(to_real(f(std::polar(rho, f.grid().angle(k)))));
  return sum / nphi;
}

}  // namespace levimax
