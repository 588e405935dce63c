#pragma once

#include <optional>
#include <string>
#include <vector>

#include "levimax/almost_complex.hpp"
#include "levimax/errors.hpp"
#include "levimax/field.hpp"
#include "levimax/regmax.hpp"

namespace levimax {

/// Hypotheses of the smoothing theorem packaged for one chart.
struct Scenario {
  std::string name;
  int n = 1;
  AlmostComplexStructure structure = AlmostComplexStructure::standard(1);
  std::vector<ScalarField> fields;
  HermitianMetric metric = HermitianMetric::euclidean(1);
  /// Lower bound alpha(p) in units of the metric (same normalization as min_levi_eigen).
  ScalarField alpha = ScalarField::parse("1", 1);
  std::vector<double> theta;
  std::vector<Point> grid;
  double estimate_tol = 1e-8;
  double hessian_tol = 0.05;
};

/// A field violates H_J(u_j) >= alpha h at some grid node, so the theorem does not apply.
class HypothesisViolated : public Error {
 public:
  HypothesisViolated(std::size_t field, Point point, double min_eigen, double alpha);
  std::size_t field() const noexcept { return field_; }
  const Point& point() const noexcept { return point_; }
  double min_eigen() const noexcept { return min_eigen_; }
  double alpha() const noexcept { return alpha_; }

 private:
  std::size_t field_;
  Point point_;
  double min_eigen_;
  double alpha_;
};

struct PointRecord {
  Point point;
  double max_u = 0.0;
  double u_tilde = 0.0;
  double gap = 0.0;
  /// Hessian checks only.
  std::optional<double> min_eigen;
  std::optional<double> bound;
  /// Estimate: distance to the violated side (>= 0 passes). Hessian: (eig - alpha)/max(|alpha|, 1).
  double margin = 0.0;
};

struct CriterionResult {
  std::string name;
  bool pass = false;
  double worst = 0.0;
  double tolerance = 0.0;
};

struct VerificationReport {
  std::vector<PointRecord> points;
  std::vector<CriterionResult> criteria;
  /// Smallest hypothesis margin over fields and nodes (Hessian checks).
  std::optional<double> hypothesis_margin;
  bool pass = false;
};

/// M_theta(u_1, ..., u_k) as a field.
ScalarField smooth_max(const std::vector<ScalarField>& u, const ThetaVector& theta);

/// u~ = M_(eps, eps)(u_1, u_2) on the grid; passes iff -tol <= u~ - max <= eps + tol everywhere.
VerificationReport verify_estimate(const ScalarField& u1, const ScalarField& u2, double epsilon,
                                   const std::vector<Point>& grid, double tol = 1e-8);

/// Checks the hypothesis for every u_j first (throws HypothesisViolated), then requires
/// min_levi_eigen(u~) >= alpha - tol in the relative sense at every node.
VerificationReport verify_hessian_bound(const Scenario& scenario);

}  // namespace levimax
