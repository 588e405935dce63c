#include "levimax/smoothing_verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "levimax/levi.hpp"
#include "levimax/parallel.hpp"

namespace levimax {

namespace {

std::string describe(const Point& p) {
  std::string s = "(";
  for (int i = 0; i < p.size(); ++i) s += (i ? ", " : "") + std::to_string(p[i]);
  return s + ")";
}

double relative_margin(double eig, double alpha) { return (eig - alpha) / std::max(std::abs(alpha), 1.0); }

}  // namespace

HypothesisViolated::HypothesisViolated(std::size_t field, Point point, double min_eigen, double alpha)
    : Error("hypothesis fails for u" + std::to_string(field + 1) + " at " + describe(point) + ": min Levi eigenvalue " +
            std::to_string(min_eigen) + " < alpha " + std::to_string(alpha)),
      field_(field), point_(std::move(point)), min_eigen_(min_eigen), alpha_(alpha) {}

ScalarField smooth_max(const std::vector<ScalarField>& u, const ThetaVector& theta) {
  return regmax_field(u, theta, std::max<int>(kDefaultMaxArity, static_cast<int>(u.size())));
}

VerificationReport verify_estimate(const ScalarField& u1, const ScalarField& u2, double epsilon,
                                   const std::vector<Point>& grid, double tol) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw PreconditionError("epsilon must be positive");
  if (u1.dimension() != u2.dimension()) throw DimensionError("estimate fields differ in dimension");
  const RegularizedMax m(ThetaVector({epsilon, epsilon}));
  VerificationReport report;
  report.points.resize(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    PointRecord& r = report.points[i];
    r.point = grid[i];
    const double t[2] = {u1(grid[i]), u2(grid[i])};
    r.max_u = std::max(t[0], t[1]);
    r.u_tilde = m(t);
    r.gap = r.u_tilde - r.max_u;
    r.margin = std::min(r.gap, epsilon - r.gap);
  });
  CriterionResult c{"estimate", !grid.empty(), std::numeric_limits<double>::infinity(), tol};
  for (const PointRecord& r : report.points) {
    c.worst = std::min(c.worst, r.margin);
    c.pass = c.pass && r.margin >= -tol;
  }
  report.criteria.push_back(c);
  report.pass = c.pass;
  return report;
}

VerificationReport verify_hessian_bound(const Scenario& sc) {
  if (sc.fields.empty()) throw PreconditionError("scenario has no fields");
  if (sc.theta.size() != sc.fields.size()) throw DimensionError("theta must have one width per field");
  const std::size_t k = sc.fields.size();
  const std::size_t np = sc.grid.size();

  // Hypothesis gate: eig(u_j) >= alpha - tol (relative) at every node.
  std::vector<double> hyp(k * np);
  parallel_for(k * np, [&](std::size_t idx) {
    const std::size_t j = idx / np, i = idx % np;
    hyp[idx] = min_levi_eigen(sc.structure, sc.fields[j], sc.grid[i], sc.metric);
  });
  double hyp_margin = std::numeric_limits<double>::infinity();
  for (std::size_t idx = 0; idx < k * np; ++idx) {
    const std::size_t j = idx / np, i = idx % np;
    const double alpha = sc.alpha(sc.grid[i]);
    const double margin = relative_margin(hyp[idx], alpha);
    if (margin < -sc.hessian_tol) throw HypothesisViolated(j, sc.grid[i], hyp[idx], alpha);
    hyp_margin = std::min(hyp_margin, margin);
  }

  const ScalarField u_tilde = smooth_max(sc.fields, ThetaVector(sc.theta));
  VerificationReport report;
  report.hypothesis_margin = hyp_margin;
  report.points.resize(np);
  parallel_for(np, [&](std::size_t i) {
    PointRecord& r = report.points[i];
    const Point& p = sc.grid[i];
    r.point = p;
    r.max_u = -std::numeric_limits<double>::infinity();
    for (const ScalarField& u : sc.fields) r.max_u = std::max(r.max_u, u(p));
    r.u_tilde = u_tilde(p);
    r.gap = r.u_tilde - r.max_u;
    r.min_eigen = min_levi_eigen(sc.structure, u_tilde, p, sc.metric);
    r.bound = sc.alpha(p);
    r.margin = relative_margin(*r.min_eigen, *r.bound);
  });
  const double theta_max = *std::max_element(sc.theta.begin(), sc.theta.end());
  CriterionResult bound{"hessian_bound", np > 0, std::numeric_limits<double>::infinity(), sc.hessian_tol};
  CriterionResult gap{"gap_bounds", np > 0, std::numeric_limits<double>::infinity(), sc.estimate_tol};
  for (const PointRecord& r : report.points) {
    bound.worst = std::min(bound.worst, r.margin);
    bound.pass = bound.pass && r.margin >= -sc.hessian_tol;
    const double g = std::min(r.gap, theta_max - r.gap);
    gap.worst = std::min(gap.worst, g);
    gap.pass = gap.pass && g >= -sc.estimate_tol;
  }
  report.criteria = {bound, gap};
  report.pass = bound.pass && gap.pass;
  return report;
}

}  // namespace levimax
