#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "levimax/disc_solver.hpp"
#include "levimax/smoothing_verify.hpp"

namespace levimax {

struct LeviCheckConfig {
  double margin = 0.0;
  /// Dilation factors lambda for scale_structure; 1 means the structure as given.
  std::vector<double> scales{1.0};
  /// Expected psh verdict, indexed [scale][field]; the criterion is that the verdict matches.
  /// In JSON each per-scale entry is either one flag for all fields or an array with one flag per field.
  std::vector<std::vector<bool>> expect_psh;
  /// When set, every Levi matrix entry on the grid must be at most this in magnitude.
  std::optional<double> vanishing_tol;
  int samples = 50;
  double polarization_tol = 1e-7;
};

struct DiscConfig {
  Point point;
  Eigen::VectorXcd direction;
  DiscOptions options;
  /// Picard tolerance used for the Laplacian comparison.
  double hessian_tol = 1e-10;
  double agreement_tol = 1e-3;
};

/// Scenario file contents: the smoothing hypotheses plus per-command settings.
struct ScenarioConfig {
  Scenario scenario;
  std::string description;
  std::string source;
  std::optional<double> epsilon;
  double structure_tol = 1e-8;
  double adapted_coefficient_tol = 1e-8;
  double adapted_levi_tol = 1e-5;
  LeviCheckConfig levi;
  DiscConfig disc;
  Point adapt_point;
  std::uint64_t seed = 0;
};

/// Parses scenario JSON text; ConfigError names the offending field.
ScenarioConfig parse_scenario(const std::string& json_text, const std::string& source = "<string>");

/// "builtin:<name>" or a path to a JSON file.
ScenarioConfig load_scenario(const std::string& spec);

/// Names of the scenarios compiled into the library, sorted.
std::vector<std::string> builtin_scenario_names();

}  // namespace levimax
