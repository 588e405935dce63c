#include "levimax/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "levimax/adapted_coords.hpp"
#include "levimax/disc_solver.hpp"
#include "levimax/levi.hpp"
#include "levimax/regmax.hpp"
#include "levimax/scenario.hpp"
#include "levimax/smoothing_verify.hpp"

namespace levimax::cli {

namespace {

using Json = nlohmann::ordered_json;

Json to_json(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Json to_json(cplx z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) rows.push_back(to_json(Eigen::VectorXd(m.row(r).transpose())));
  return rows;
}

Json to_json(const Eigen::MatrixXcd& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    rows.push_back(row);
  }
  return rows;
}

Json criterion(const std::string& name, bool pass, double worst, double tolerance) {
  return Json{{"name", name}, {"pass", pass}, {"worst", worst}, {"tolerance", tolerance}};
}

Json to_json(const CriterionResult& c) { return criterion(c.name, c.pass, c.worst, c.tolerance); }

Json to_json(const PointRecord& r) {
  Json j{{"point", to_json(r.point)}, {"max_u", r.max_u}, {"u_tilde", r.u_tilde}, {"gap", r.gap}};
  if (r.min_eigen) j["min_levi_eigen"] = *r.min_eigen;
  if (r.bound) j["alpha_bound"] = *r.bound;
  j["margin"] = r.margin;
  return j;
}

class Csv {
 public:
  explicit Csv(std::vector<std::string> header) : header_(std::move(header)) {}
  void row(const std::vector<double>& values) { rows_.push_back(values); }
  void write(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw ConfigError("--csv: cannot write '" + path + "'");
    for (std::size_t i = 0; i < header_.size(); ++i) out << (i ? "," : "") << header_[i];
    out << "\n" << std::setprecision(17);
    for (const auto& r : rows_) {
      for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i];
      out << "\n";
    }
  }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<double>> rows_;
};

std::vector<std::string> coordinate_names(int n) {
  std::vector<std::string> names;
  for (int i = 1; i <= 2 * n; ++i) names.push_back("x" + std::to_string(i));
  return names;
}

std::vector<double> with_point(std::vector<double> head, const Point& p, std::vector<double> tail) {
  for (Eigen::Index i = 0; i < p.size(); ++i) head.push_back(p[i]);
  head.insert(head.end(), tail.begin(), tail.end());
  return head;
}

struct Options {
  std::string scenario;
  std::string out_path;
  std::string csv_path;
  std::optional<std::uint64_t> seed;
};

struct Outcome {
  Json report;
  std::optional<Csv> csv;
};

Json header(const std::string& command, const ScenarioConfig& cfg) {
  return Json{{"command", command}, {"scenario", cfg.scenario.name}, {"source", cfg.source}, {"seed", cfg.seed}};
}

AlmostComplexStructure scaled(const AlmostComplexStructure& s, double lambda) {
  return lambda == 1.0 ? s : scale_structure(s, lambda);
}

// ---------------------------------------------------------------------------
// Commands

Outcome levi_check(const ScenarioConfig& cfg) {
  const Scenario& sc = cfg.scenario;
  Outcome o;
  Json rep = header("levi check", cfg);
  Json criteria = Json::array();

  const StructureReport sv = validate_structure(sc.structure, sc.grid, cfg.structure_tol);
  rep["structure"] = Json{{"representation", sv.representation == AlmostComplexStructure::Representation::JMatrix
                                                 ? "j_matrix"
                                                 : "complex_matrix"},
                          {"max_residual", sv.max_residual},
                          {"worst_point", to_json(sv.worst_point)}};
  criteria.push_back(criterion("structure_valid", sv.pass, sv.max_residual, cfg.structure_tol));

  std::vector<std::string> head{"scale", "field"};
  for (const auto& c : coordinate_names(sc.n)) head.push_back(c);
  head.push_back("min_levi_eigen");
  Csv csv(head);

  Json checks = Json::array();
  for (std::size_t si = 0; si < cfg.levi.scales.size(); ++si) {
    const double lambda = cfg.levi.scales[si];
    const AlmostComplexStructure s = scaled(sc.structure, lambda);
    for (std::size_t f = 0; f < sc.fields.size(); ++f) {
      const PshReport r = is_strictly_psh(s, sc.fields[f], sc.grid, sc.metric, cfg.levi.margin);
      const bool expected = cfg.levi.expect_psh[si][f];
      checks.push_back(Json{{"scale", lambda},
                            {"field", sc.fields[f].label()},
                            {"margin", cfg.levi.margin},
                            {"min_eigen", r.worst_eigen},
                            {"worst_point", to_json(r.worst_point)},
                            {"strictly_psh", r.pass},
                            {"expected", expected}});
      criteria.push_back(criterion("psh_verdict[scale=" + std::to_string(lambda) + ", field=" + std::to_string(f + 1) + "]",
                                   r.pass == expected, r.worst_eigen, cfg.levi.margin));
      for (const PshPointRecord& p : r.points) {
        csv.row(with_point({lambda, static_cast<double>(f + 1)}, p.point, {p.min_eigen}));
      }
    }
  }
  rep["checks"] = checks;

  // Polarization: V^T S V against the direct value at seeded random points and vectors.
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, sc.grid.size() - 1);
  double worst = 0.0;
  for (int i = 0; i < cfg.levi.samples; ++i) {
    const Point& p = sc.grid[pick(rng)];
    Eigen::VectorXd v(2 * sc.n);
    for (Eigen::Index a = 0; a < v.size(); ++a) v[a] = unit(rng);
    const ScalarField& u = sc.fields[static_cast<std::size_t>(i) % sc.fields.size()];
    const double direct = levi_value(sc.structure, u, p, v);
    const double via = levi_matrix(sc.structure, u, p)(v);
    worst = std::max(worst, std::abs(direct - via) / std::max(1.0, std::abs(direct)));
  }
  rep["polarization"] = Json{{"samples", cfg.levi.samples}, {"max_relative_residual", worst}};
  criteria.push_back(criterion("polarization", worst <= cfg.levi.polarization_tol, worst, cfg.levi.polarization_tol));

  if (cfg.levi.vanishing_tol) {
    double largest = 0.0;
    for (const ScalarField& u : sc.fields)
      for (const Point& p : sc.grid)
        largest = std::max(largest, levi_matrix(sc.structure, u, p).s.cwiseAbs().maxCoeff());
    rep["vanishing"] = Json{{"max_abs_entry", largest}};
    criteria.push_back(criterion("levi_vanishes", largest <= *cfg.levi.vanishing_tol, largest, *cfg.levi.vanishing_tol));
  }
  rep["criteria"] = criteria;
  o.report = rep;
  o.csv = csv;
  return o;
}

Outcome adapt(const ScenarioConfig& cfg) {
  const Scenario& sc = cfg.scenario;
  Outcome o;
  Json rep = header("adapt", cfg);
  const CoordinateChange linear = linear_normalize(sc.structure, cfg.adapt_point, cfg.structure_tol);
  const CoordinateChange quad = quadratic_normalize(pushforward(sc.structure, linear), cfg.adapted_coefficient_tol,
                                                    cfg.adapted_coefficient_tol);
  const CoordinateChange chart = CoordinateChange::compose(quad, linear);
  const auto [l, origin] = *linear.affine_part();
  Json coeffs = Json::array();
  const std::vector<Eigen::MatrixXcd> quadratic = *quad.quadratic_coefficients();
  for (const Eigen::MatrixXcd& c : quadratic) coeffs.push_back(to_json(c));
  rep["chart"] = Json{{"origin", to_json(origin)}, {"linear", to_json(l)}, {"quadratic", coeffs}};

  Json criteria = Json::array();
  Json fields = Json::array();
  for (std::size_t f = 0; f < sc.fields.size(); ++f) {
    const AdaptedReport r =
        verify_adapted(sc.structure, chart, sc.fields[f], cfg.adapted_coefficient_tol, cfg.adapted_levi_tol);
    fields.push_back(Json{{"field", sc.fields[f].label()},
                          {"a_residual", r.a_residual},
                          {"da_residual", r.da_residual},
                          {"levi_residual", r.levi_residual},
                          {"levi_matrix", to_json(r.levi)},
                          {"hermitian_matrix", to_json(r.hermitian)}});
    const std::string tag = "[field=" + std::to_string(f + 1) + "]";
    criteria.push_back(criterion("a_vanishes" + tag, r.a_residual <= r.coefficient_tol, r.a_residual, r.coefficient_tol));
    criteria.push_back(criterion("da_vanishes" + tag, r.da_residual <= r.coefficient_tol, r.da_residual, r.coefficient_tol));
    criteria.push_back(criterion("levi_identity" + tag, r.levi_residual <= r.levi_tol, r.levi_residual, r.levi_tol));
  }
  rep["fields"] = fields;
  rep["criteria"] = criteria;
  o.report = rep;
  return o;
}

Outcome disc_solve(const ScenarioConfig& cfg) {
  const Scenario& sc = cfg.scenario;
  Outcome o;
  Json rep = header("disc solve", cfg);
  const DiscConfig& dc = cfg.disc;
  const DiscMap f = solve_disc(sc.structure, dc.point, dc.direction, dc.options);
  Json dir = Json::array();
  for (Eigen::Index i = 0; i < dc.direction.size(); ++i) dir.push_back(to_json(dc.direction[i]));
  rep["disc"] = Json{{"point", to_json(dc.point)},
                     {"direction", dir},
                     {"radius", dc.options.radius},
                     {"n_r", dc.options.n_r},
                     {"n_phi", dc.options.n_phi},
                     {"iterations", f.iterations},
                     {"final_increment", f.final_increment},
                     {"cr_residual", f.cr_residual}};
  Json criteria = Json::array();
  criteria.push_back(criterion("cr_residual", f.cr_residual <= dc.options.tol, f.cr_residual, dc.options.tol));

  DiscOptions tight = dc.options;
  tight.tol = dc.hessian_tol;
  Json fields = Json::array();
  for (std::size_t i = 0; i < sc.fields.size(); ++i) {
    const double via_disc = hessian_via_disc(sc.structure, sc.fields[i], dc.point, dc.direction, tight);
    const double direct = levi_value(sc.structure, sc.fields[i], dc.point, to_real(dc.direction));
    const double rel = std::abs(via_disc - direct) / std::max(1.0, std::abs(direct));
    fields.push_back(Json{{"field", sc.fields[i].label()}, {"hessian_via_disc", via_disc}, {"levi_value", direct},
                          {"relative_difference", rel}});
    criteria.push_back(criterion("disc_levi_agreement[field=" + std::to_string(i + 1) + "]", rel <= dc.agreement_tol,
                                 rel, dc.agreement_tol));
  }
  rep["fields"] = fields;
  rep["criteria"] = criteria;

  std::vector<std::string> head{"xi", "eta"};
  for (int k = 1; k <= sc.n; ++k) {
    head.push_back("re_f" + std::to_string(k));
    head.push_back("im_f" + std::to_string(k));
  }
  Csv csv(head);
  for (int i = 0; i < f.grid().size(); ++i) {
    const cplx zeta = f.grid().node(i);
    std::vector<double> row{zeta.real(), zeta.imag()};
    for (int k = 0; k < sc.n; ++k) {
      row.push_back(f.values()(i, k).real());
      row.push_back(f.values()(i, k).imag());
    }
    csv.row(row);
  }
  o.report = rep;
  o.csv = csv;
  return o;
}

Csv point_csv(int n, const std::vector<PointRecord>& points, bool hessian) {
  std::vector<std::string> head = coordinate_names(n);
  for (const char* c : {"max_u", "u_tilde", "gap"}) head.emplace_back(c);
  if (hessian) {
    head.emplace_back("min_levi_eigen");
    head.emplace_back("alpha_bound");
  }
  head.emplace_back("margin");
  Csv csv(head);
  for (const PointRecord& r : points) {
    std::vector<double> tail{r.max_u, r.u_tilde, r.gap};
    if (hessian) {
      tail.push_back(r.min_eigen.value_or(NAN));
      tail.push_back(r.bound.value_or(NAN));
    }
    tail.push_back(r.margin);
    csv.row(with_point({}, r.point, tail));
  }
  return csv;
}

Outcome smooth_estimate(const ScenarioConfig& cfg) {
  const Scenario& sc = cfg.scenario;
  if (sc.fields.size() != 2) throw ConfigError("fields: smooth estimate needs exactly two fields");
  double eps = 0.0;
  if (cfg.epsilon) {
    eps = *cfg.epsilon;
  } else {
    if (sc.theta[0] != sc.theta[1]) throw ConfigError("theta: smooth estimate needs equal widths (or give epsilon)");
    eps = sc.theta[0];
  }
  const VerificationReport r = verify_estimate(sc.fields[0], sc.fields[1], eps, sc.grid, sc.estimate_tol);
  Outcome o;
  Json rep = header("smooth estimate", cfg);
  double min_gap = INFINITY, max_gap = -INFINITY;
  for (const PointRecord& p : r.points) {
    min_gap = std::min(min_gap, p.gap);
    max_gap = std::max(max_gap, p.gap);
  }
  rep["epsilon"] = eps;
  rep["nodes"] = r.points.size();
  rep["min_gap"] = min_gap;
  rep["max_gap"] = max_gap;
  Json criteria = Json::array();
  for (const CriterionResult& c : r.criteria) criteria.push_back(to_json(c));
  rep["criteria"] = criteria;
  Json pts = Json::array();
  for (const PointRecord& p : r.points) pts.push_back(to_json(p));
  rep["points"] = pts;
  o.report = rep;
  o.csv = point_csv(sc.n, r.points, false);
  return o;
}

Outcome smooth_hessian(const ScenarioConfig& cfg) {
  const Scenario& sc = cfg.scenario;
  Outcome o;
  Json rep = header("smooth hessian", cfg);
  rep["theta"] = sc.theta;
  rep["tolerance"] = sc.hessian_tol;
  try {
    const VerificationReport r = verify_hessian_bound(sc);
    rep["status"] = "checked";
    rep["hypothesis_margin"] = *r.hypothesis_margin;
    Json criteria = Json::array();
    for (const CriterionResult& c : r.criteria) criteria.push_back(to_json(c));
    rep["criteria"] = criteria;
    Json pts = Json::array();
    for (const PointRecord& p : r.points) pts.push_back(to_json(p));
    rep["points"] = pts;
    o.csv = point_csv(sc.n, r.points, true);
  } catch (const HypothesisViolated& e) {
    rep["status"] = "hypothesis_violated";
    rep["message"] = e.what();
    rep["field"] = e.field() + 1;
    rep["point"] = to_json(e.point());
    rep["min_levi_eigen"] = e.min_eigen();
    rep["alpha"] = e.alpha();
    rep["criteria"] = Json::array({criterion("hypothesis", false, e.min_eigen() - e.alpha(), sc.hessian_tol)});
  }
  o.report = rep;
  return o;
}

bool all_pass(Json& report) {
  bool pass = true;
  for (const auto& c : report["criteria"]) pass = pass && c["pass"].get<bool>();
  report["pass"] = pass;
  return pass;
}

int emit(Outcome& o, const Options& opt, std::ostream& out) {
  const bool pass = all_pass(o.report);
  if (!opt.csv_path.empty()) {
    if (!o.csv) throw ConfigError("--csv: this command has no grid dump");
    o.csv->write(opt.csv_path);
  }
  const std::string text = o.report.dump(2) + "\n";
  if (opt.out_path.empty()) {
    out << text;
  } else {
    std::ofstream file(opt.out_path);
    if (!file) throw ConfigError("--out: cannot write '" + opt.out_path + "'");
    file << text;
    out << (pass ? "pass" : "FAIL") << ": report written to " << opt.out_path << "\n";
  }
  return pass ? 0 : 1;
}

void add_common(CLI::App* cmd, Options& opt, bool scenario) {
  if (scenario) cmd->add_option("--scenario", opt.scenario, "Scenario JSON file or builtin:<name>")->required();
  cmd->add_option("--out", opt.out_path, "Write the JSON report to this file");
  cmd->add_option("--csv", opt.csv_path, "Write the grid dump to this CSV file");
  cmd->add_option("--seed", opt.seed, "Override the scenario seed");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Levi forms, regularized maxima and J-holomorphic discs on chart-local almost complex structures",
               "levimax"};
  app.require_subcommand(1);
  Options opt;
  std::function<Outcome(const ScenarioConfig&)> scenario_command;
  std::function<int()> direct_command;

  std::vector<double> t, theta;
  int max_arity = kDefaultMaxArity;
  auto* regmax = app.add_subcommand("regmax", "Regularized maximum")->require_subcommand(1);
  auto* regmax_eval_cmd = regmax->add_subcommand("eval", "Evaluate M_theta(t) and its gradient");
  regmax_eval_cmd->add_option("--t", t, "Arguments t_1,...,t_k")->required()->delimiter(',');
  regmax_eval_cmd->add_option("--theta", theta, "Widths theta_1,...,theta_k")->required()->delimiter(',');
  regmax_eval_cmd->add_option("--max-arity", max_arity, "Largest k accepted");
  regmax_eval_cmd->add_option("--out", opt.out_path, "Write the JSON report to this file");
  regmax_eval_cmd->callback([&] {
    direct_command = [&]() {
      const ThetaVector th(theta);
      if (t.size() != th.size()) throw ConfigError("--t: expected " + std::to_string(th.size()) + " values");
      const RegularizedMax m(th, max_arity);
      const double value = m(t);
      double lo = -INFINITY, hi = -INFINITY;
      for (std::size_t j = 0; j < t.size(); ++j) {
        lo = std::max(lo, t[j]);
        hi = std::max(hi, t[j] + theta[j]);
      }
      Outcome o;
      o.report = Json{{"command", "regmax eval"}, {"t", t}, {"theta", theta}, {"value", value},
                      {"gradient", m.gradient(t)}, {"lower", lo}, {"upper", hi}};
      o.report["criteria"] = Json::array(
          {criterion("bounds", lo <= value && value <= hi, std::min(value - lo, hi - value), 0.0)});
      return emit(o, opt, out);
    };
  });

  auto bind = [&](CLI::App* cmd, std::function<Outcome(const ScenarioConfig&)> fn) {
    add_common(cmd, opt, true);
    cmd->callback([&scenario_command, fn] { scenario_command = fn; });
  };
  auto* levi = app.add_subcommand("levi", "Levi form checks")->require_subcommand(1);
  bind(levi->add_subcommand("check", "Strict psh sweep, polarization and vanishing checks"), levi_check);
  bind(app.add_subcommand("adapt", "Adapted coordinates at the scenario point"), adapt);
  auto* disc = app.add_subcommand("disc", "J-holomorphic discs")->require_subcommand(1);
  bind(disc->add_subcommand("solve", "Solve a disc and compare its Laplacian with the Levi form"), disc_solve);
  auto* smooth = app.add_subcommand("smooth", "Regularized-max smoothing")->require_subcommand(1);
  bind(smooth->add_subcommand("estimate", "Uniform estimate max <= u~ <= max + eps"), smooth_estimate);
  bind(smooth->add_subcommand("hessian", "Levi lower bound for the regularized max"), smooth_hessian);
  auto* scenario = app.add_subcommand("scenario", "Scenario registry")->require_subcommand(1);
  scenario->add_subcommand("list", "List builtin scenarios")->callback([&] {
    direct_command = [&]() {
      for (const std::string& name : builtin_scenario_names()) out << name << "\n";
      return 0;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream msg, usage;
    const int code = app.exit(e, usage, msg);
    out << usage.str();
    err << msg.str();
    return code == 0 ? 0 : 2;
  }

  try {
    if (direct_command) return direct_command();
    ScenarioConfig cfg = load_scenario(opt.scenario);
    if (opt.seed) cfg.seed = *opt.seed;
    Outcome o = scenario_command(cfg);
    return emit(o, opt, out);
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const levimax::ParseError& e) {
    err << "expression error: " << e.what() << "\n";
    return 2;
  } catch (const DimensionError& e) {
    err << "dimension mismatch: " << e.what() << "\n";
    return 2;
  } catch (const PreconditionError& e) {
    err << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace levimax::cli
