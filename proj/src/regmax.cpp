#include "levimax/regmax.hpp"

#include <algorithm>
#include <cmath>

#include "levimax/errors.hpp"
#include "levimax/finite_difference.hpp"

namespace levimax {

namespace {
constexpr double kPieceTol = 1e-15;
}

double Mollifier::raw_kernel(double s) {
  if (!(s > 0.0 && s < 1.0)) return 0.0;
  return std::exp(-1.0 / (s * (1.0 - s)));
}

Mollifier::Mollifier() {
  const auto raw = [](double s) { return raw_kernel(s); };
  const double integral = integrate_adaptive(raw, 0.0, 1.0, 1e-17);
  if (!(integral > 0.0)) throw ConvergenceError("mollifier normalization failed", integral);
  c_ = 1.0 / integral;

  table_.assign(kCells + 1, 0.0);
  for (int i = 0; i < kCells; ++i) {
    const double a = static_cast<double>(i) / kCells, b = static_cast<double>(i + 1) / kCells;
    table_[i + 1] = table_[i] + integrate_adaptive(raw, a, b, 1e-19);
  }
  const double total = table_.back();
  for (double& v : table_) v /= total;
  table_.back() = 1.0;

  m1_ = c_ * integrate_adaptive([](double s) { return s * raw_kernel(s); }, 0.0, 1.0, 1e-17);
}

const Mollifier& Mollifier::standard() {
  static const Mollifier instance;
  return instance;
}

double Mollifier::cdf(double s) const {
  if (!(s > 0.0)) return 0.0;
  if (s >= 1.0) return 1.0;
  const int cell = std::min(static_cast<int>(s * kCells), kCells - 1);
  const double a = static_cast<double>(cell) / kCells;
  const double partial = cell_rule_.integrate([this](double x) { return density(x); }, a, s);
  return std::clamp(table_[cell] + partial, 0.0, 1.0);
}

double mollifier_constant() { return Mollifier::standard().constant(); }

ThetaVector::ThetaVector(std::vector<double> theta) : theta_(std::move(theta)) {
  if (theta_.empty()) throw PreconditionError("theta must have at least one component");
  for (std::size_t j = 0; j < theta_.size(); ++j) {
    if (!(theta_[j] > 0.0) || !std::isfinite(theta_[j])) {
      throw PreconditionError("theta[" + std::to_string(j) + "] must be positive and finite");
    }
  }
}

double ThetaVector::max() const { return *std::max_element(theta_.begin(), theta_.end()); }

RegularizedMax::RegularizedMax(ThetaVector theta, int max_arity) : theta_(std::move(theta)) {
  if (static_cast<int>(theta_.size()) > max_arity) {
    throw PreconditionError("regularized max of " + std::to_string(theta_.size()) +
                            " arguments exceeds the configured maximum " + std::to_string(max_arity));
  }
}

void RegularizedMax::check(std::span<const double> t) const {
  if (t.size() != theta_.size()) {
    throw DimensionError("regularized max expects " + std::to_string(theta_.size()) +
                         " arguments, got " + std::to_string(t.size()));
  }
}

std::vector<double> RegularizedMax::breakpoints(std::span<const double> t, double lo,
                                                double hi) const {
  std::vector<double> pts{lo, hi};
  for (std::size_t j = 0; j < t.size(); ++j) {
    for (double x : {t[j], t[j] + theta_[j]}) {
      if (x > lo && x < hi) pts.push_back(x);
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

double RegularizedMax::operator()(std::span<const double> t) const {
  check(t);
  const Mollifier& w = Mollifier::standard();
  double lo = t[0], hi = t[0] + theta_[0];
  for (std::size_t j = 1; j < t.size(); ++j) {
    lo = std::max(lo, t[j]);
    hi = std::max(hi, t[j] + theta_[j]);
  }
  const auto tail = [&](double x) {
    double prod = 1.0;
    for (std::size_t j = 0; j < t.size(); ++j) prod *= w.cdf((x - t[j]) / theta_[j]);
    return 1.0 - prod;
  };
  const std::vector<double> pts = breakpoints(t, lo, hi);
  double integral = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    integral += integrate_adaptive(tail, pts[i], pts[i + 1], kPieceTol * std::max(1.0, pts[i + 1] - pts[i]));
  }
  return lo + integral;
}

std::vector<double> RegularizedMax::gradient(std::span<const double> t) const {
  check(t);
  const Mollifier& w = Mollifier::standard();
  const double lo = *std::max_element(t.begin(), t.end());
  std::vector<double> g(t.size(), 0.0);
  for (std::size_t j = 0; j < t.size(); ++j) {
    const double hi = t[j] + theta_[j];
    if (!(hi > lo)) continue;
    const auto integrand = [&](double x) {
      double prod = w.density((x - t[j]) / theta_[j]) / theta_[j];
      for (std::size_t l = 0; l < t.size(); ++l) {
        if (l != j) prod *= w.cdf((x - t[l]) / theta_[l]);
      }
      return prod;
    };
    const std::vector<double> pts = breakpoints(t, lo, hi);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      g[j] += integrate_adaptive(integrand, pts[i], pts[i + 1], kPieceTol);
    }
  }
  return g;
}

double regmax_eval(std::span<const double> t, const ThetaVector& theta, int max_arity) {
  return RegularizedMax(theta, max_arity)(t);
}

std::vector<double> regmax_grad(std::span<const double> t, const ThetaVector& theta, int max_arity) {
  return RegularizedMax(theta, max_arity).gradient(t);
}

namespace {

// Chain rule through M: grad = sum_j g_j grad u_j and
// Hess = sum_j g_j Hess u_j + sum_{j,l} d_l g_j grad u_j grad u_l^T,
// where d_l g_j comes from central differences of the quadrature gradient.
class RegmaxFieldImpl final : public ScalarField::Impl {
 public:
  RegmaxFieldImpl(std::vector<ScalarField> u, RegularizedMax m) : u_(std::move(u)), m_(std::move(m)) {}

  double value(const Point& p) const override {
    std::vector<double> t(u_.size());
    for (std::size_t j = 0; j < u_.size(); ++j) t[j] = u_[j](p);
    return m_(t);
  }

  Jet2 jet(const Point& p) const override {
    const std::size_t k = u_.size();
    std::vector<Jet2> uj;
    uj.reserve(k);
    std::vector<double> t(k);
    for (std::size_t j = 0; j < k; ++j) {
      uj.push_back(u_[j].jet(p));
      t[j] = uj[j].value;
    }
    const std::vector<double> g = m_.gradient(t);
    Eigen::MatrixXd dg(k, k);
    for (std::size_t l = 0; l < k; ++l) {
      const double h = fd::first_order_step(t[l]);
      std::vector<double> tp = t, tm = t;
      tp[l] += h;
      tm[l] -= h;
      const std::vector<double> gp = m_.gradient(tp), gm = m_.gradient(tm);
      for (std::size_t j = 0; j < k; ++j) dg(j, l) = (gp[j] - gm[j]) / (2.0 * h);
    }
    Jet2 out;
    out.value = m_(t);
    out.grad = Eigen::VectorXd::Zero(p.size());
    out.hess = Eigen::MatrixXd::Zero(p.size(), p.size());
    for (std::size_t j = 0; j < k; ++j) {
      out.grad += g[j] * uj[j].grad;
      out.hess += g[j] * uj[j].hess;
      for (std::size_t l = 0; l < k; ++l) {
        const double c = 0.5 * (dg(j, l) + dg(l, j));
        out.hess += c * uj[j].grad * uj[l].grad.transpose();
      }
    }
    return out;
  }

 private:
  std::vector<ScalarField> u_;
  RegularizedMax m_;
};

}  // namespace

ScalarField regmax_field(const std::vector<ScalarField>& u, const ThetaVector& theta, int max_arity) {
  if (u.empty()) throw PreconditionError("regmax_field needs at least one field");
  if (u.size() != theta.size()) {
    throw DimensionError("regmax_field: " + std::to_string(u.size()) + " fields but " +
                         std::to_string(theta.size()) + " widths");
  }
  const int n = u.front().dimension();
  for (const ScalarField& f : u) {
    if (f.dimension() != n) throw DimensionError("regmax_field: fields have different dimensions");
  }
  std::string label = "regmax(";
  for (std::size_t j = 0; j < u.size(); ++j) label += (j ? ", " : "") + u[j].label();
  label += ")";
  return ScalarField(n, std::make_shared<RegmaxFieldImpl>(u, RegularizedMax(theta, max_arity)), label);
}

}  // namespace levimax
