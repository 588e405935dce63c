#include "levimax/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "levimax/grid.hpp"

namespace levimax {

namespace {

using nlohmann::json;

struct Builtin {
  const char* name;
  const char* text;
};

const Builtin kBuiltins[] = {
#include "levimax/builtin_scenarios.inc"
};

[[noreturn]] void fail(const std::string& field, const std::string& message) {
  throw ConfigError(field + ": " + message);
}

const json& require(const json& j, const std::string& key, const std::string& path) {
  if (!j.contains(key)) fail(path + key, "missing");
  return j.at(key);
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

int integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

std::string text(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

Expression expression(const json& j, int n, const std::string& path) {
  if (j.is_number()) {
    std::ostringstream literal;
    literal.precision(17);
    literal << j.get<double>();
    return Expression::parse(literal.str(), n);
  }
  try {
    return Expression::parse(text(j, path), n);
  } catch (const ParseError& e) {
    fail(path, e.what());
  }
}

std::vector<double> numbers(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

cplx complex_number(const json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (j.is_array() && j.size() == 2) return {number(j[0], path + "[0]"), number(j[1], path + "[1]")};
  if (j.is_object()) {
    return {j.contains("re") ? number(j["re"], path + ".re") : 0.0, j.contains("im") ? number(j["im"], path + ".im") : 0.0};
  }
  fail(path, "expected a complex number ([re, im] or {\"re\", \"im\"})");
}

const json& square(const json& j, int size, const std::string& path) {
  if (!j.is_array() || static_cast<int>(j.size()) != size) fail(path, "expected " + std::to_string(size) + " rows");
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || static_cast<int>(j[r].size()) != size) {
      fail(path + "[" + std::to_string(r) + "]", "expected " + std::to_string(size) + " entries");
    }
  }
  return j;
}

AlmostComplexStructure structure(const json& j, int n, const std::string& path) {
  const std::string kind = j.contains("kind") ? text(j["kind"], path + ".kind") : "standard";
  if (kind == "standard") return AlmostComplexStructure::standard(n);
  if (kind == "complex_matrix") {
    const json& e = square(require(j, "entries", path + "."), n, path + ".entries");
    std::vector<std::vector<std::pair<Expression, Expression>>> entries(n);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) {
        const std::string at = path + ".entries[" + std::to_string(r) + "][" + std::to_string(c) + "]";
        const json& cell = e[r][c];
        if (!cell.is_object()) fail(at, "expected {\"re\": expr, \"im\": expr}");
        entries[r].emplace_back(cell.contains("re") ? expression(cell["re"], n, at + ".re") : Expression::parse("0", n),
                                cell.contains("im") ? expression(cell["im"], n, at + ".im") : Expression::parse("0", n));
      }
    }
    return AlmostComplexStructure::from_a_expressions(n, entries);
  }
  if (kind == "j_matrix") {
    const json& e = square(require(j, "entries", path + "."), 2 * n, path + ".entries");
    std::vector<std::vector<Expression>> entries(2 * n);
    for (int r = 0; r < 2 * n; ++r)
      for (int c = 0; c < 2 * n; ++c)
        entries[r].push_back(
            expression(e[r][c], n, path + ".entries[" + std::to_string(r) + "][" + std::to_string(c) + "]"));
    return AlmostComplexStructure::from_j_expressions(n, entries);
  }
  fail(path + ".kind", "unknown structure kind '" + kind + "'");
}

HermitianMetric metric(const json& j, int n, const std::string& path) {
  const std::string kind = j.contains("kind") ? text(j["kind"], path + ".kind") : "euclidean";
  if (kind == "euclidean") return HermitianMetric::euclidean(n);
  if (kind == "constant") {
    const json& e = square(require(j, "entries", path + "."), n, path + ".entries");
    Eigen::MatrixXcd h(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        h(r, c) = complex_number(e[r][c], path + ".entries[" + std::to_string(r) + "][" + std::to_string(c) + "]");
    try {
      return HermitianMetric::constant(h);
    } catch (const Error& err) {
      fail(path + ".entries", err.what());
    }
  }
  fail(path + ".kind", "unknown metric kind '" + kind + "'");
}

Point point(const json& j, int n, const std::string& path) {
  const std::vector<double> v = numbers(j, path);
  if (static_cast<int>(v.size()) != 2 * n) fail(path, "expected " + std::to_string(2 * n) + " real coordinates");
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& json_text, const std::string& source) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(source + ": malformed JSON (" + std::string(e.what()) + ")");
  }
  if (!j.is_object()) throw ConfigError(source + ": top level must be an object");

  ScenarioConfig cfg;
  cfg.source = source;
  Scenario& sc = cfg.scenario;
  sc.name = text(require(j, "name", ""), "name");
  if (j.contains("description")) cfg.description = text(j["description"], "description");
  sc.n = integer(require(j, "n", ""), "n");
  if (sc.n < 1) fail("n", "must be >= 1");
  const int n = sc.n;

  sc.structure = structure(j.value("structure", json::object()), n, "structure");
  if (j.contains("scale")) {
    const double lambda = number(j["scale"], "scale");
    if (!(lambda > 0.0)) fail("scale", "must be positive");
    sc.structure = scale_structure(sc.structure, lambda);
  }

  const json& fields = require(j, "fields", "");
  if (!fields.is_array() || fields.empty()) fail("fields", "expected a non-empty array of expressions");
  for (std::size_t i = 0; i < fields.size(); ++i) {
    sc.fields.push_back(ScalarField::from_expression(expression(fields[i], n, "fields[" + std::to_string(i) + "]")));
  }

  sc.metric = metric(j.value("metric", json::object()), n, "metric");
  sc.alpha = ScalarField::from_expression(j.contains("alpha") ? expression(j["alpha"], n, "alpha")
                                                              : Expression::parse("1", n));

  if (j.contains("epsilon")) {
    cfg.epsilon = number(j["epsilon"], "epsilon");
    if (!(*cfg.epsilon > 0.0)) fail("epsilon", "must be positive");
  }
  if (j.contains("theta")) {
    sc.theta = numbers(j["theta"], "theta");
    if (sc.theta.size() != sc.fields.size()) fail("theta", "needs one width per field");
    for (double t : sc.theta)
      if (!(t > 0.0)) fail("theta", "widths must be positive");
  } else if (cfg.epsilon) {
    sc.theta.assign(sc.fields.size(), *cfg.epsilon);
  } else {
    fail("theta", "missing (give theta or epsilon)");
  }

  const json grid = j.value("grid", json::object());
  const double lo = grid.contains("lo") ? number(grid["lo"], "grid.lo") : -0.5;
  const double hi = grid.contains("hi") ? number(grid["hi"], "grid.hi") : 0.5;
  const int pts = grid.contains("points") ? integer(grid["points"], "grid.points") : 5;
  if (!(hi > lo)) fail("grid", "hi must exceed lo");
  if (pts < 1) fail("grid.points", "must be >= 1");
  sc.grid = lattice(2 * n, pts, lo, hi);

  const json tol = j.value("tolerances", json::object());
  auto tolerance = [&tol](const char* key, double fallback) {
    if (!tol.contains(key)) return fallback;
    const double v = number(tol[key], std::string("tolerances.") + key);
    if (!(v >= 0.0)) fail(std::string("tolerances.") + key, "must be non-negative");
    return v;
  };
  sc.estimate_tol = tolerance("estimate", 1e-8);
  sc.hessian_tol = tolerance("hessian", 0.05);
  cfg.structure_tol = tolerance("structure", 1e-8);
  cfg.adapted_coefficient_tol = tolerance("adapted_coefficients", 1e-8);
  cfg.adapted_levi_tol = tolerance("adapted_levi", 1e-5);
  cfg.levi.polarization_tol = tolerance("polarization", 1e-7);
  cfg.disc.options.tol = tolerance("disc", 1e-4);
  cfg.disc.agreement_tol = tolerance("disc_agreement", 1e-3);
  cfg.disc.hessian_tol = tolerance("disc_hessian", 1e-10);

  const json levi = j.value("levi", json::object());
  if (levi.contains("margin")) cfg.levi.margin = number(levi["margin"], "levi.margin");
  if (levi.contains("scales")) {
    cfg.levi.scales = numbers(levi["scales"], "levi.scales");
    for (double s : cfg.levi.scales)
      if (!(s > 0.0)) fail("levi.scales", "must be positive");
  }
  const std::size_t field_count = cfg.scenario.fields.size();
  cfg.levi.expect_psh.assign(cfg.levi.scales.size(), std::vector<bool>(field_count, true));
  if (levi.contains("expect_psh")) {
    const json& e = levi["expect_psh"];
    if (!e.is_array() || e.size() != cfg.levi.scales.size()) fail("levi.expect_psh", "needs one entry per scale");
    for (std::size_t i = 0; i < e.size(); ++i) {
      const std::string key = "levi.expect_psh[" + std::to_string(i) + "]";
      if (e[i].is_boolean()) {
        cfg.levi.expect_psh[i].assign(field_count, e[i].get<bool>());
      } else if (e[i].is_array() && e[i].size() == field_count) {
        for (std::size_t f = 0; f < field_count; ++f) {
          if (!e[i][f].is_boolean()) fail(key, "expected true or false");
          cfg.levi.expect_psh[i][f] = e[i][f].get<bool>();
        }
      } else {
        fail(key, "expected a flag or one flag per field");
      }
    }
  }
  if (levi.contains("vanishing_tol")) cfg.levi.vanishing_tol = number(levi["vanishing_tol"], "levi.vanishing_tol");
  if (levi.contains("samples")) cfg.levi.samples = integer(levi["samples"], "levi.samples");

  const json disc = j.value("disc", json::object());
  cfg.disc.point = disc.contains("point") ? point(disc["point"], n, "disc.point") : Point(Point::Zero(2 * n));
  cfg.disc.direction = Eigen::VectorXcd::Zero(n);
  cfg.disc.direction[0] = 1.0;
  if (disc.contains("direction")) {
    const json& d = disc["direction"];
    if (!d.is_array() || static_cast<int>(d.size()) != n) fail("disc.direction", "expected " + std::to_string(n) + " complex entries");
    for (int i = 0; i < n; ++i) cfg.disc.direction[i] = complex_number(d[i], "disc.direction[" + std::to_string(i) + "]");
  }
  if (disc.contains("radius")) cfg.disc.options.radius = number(disc["radius"], "disc.radius");
  if (disc.contains("n_r")) cfg.disc.options.n_r = integer(disc["n_r"], "disc.n_r");
  if (disc.contains("n_phi")) cfg.disc.options.n_phi = integer(disc["n_phi"], "disc.n_phi");
  if (disc.contains("max_iterations")) cfg.disc.options.max_iterations = integer(disc["max_iterations"], "disc.max_iterations");

  const json adapt = j.value("adapt", json::object());
  cfg.adapt_point = adapt.contains("point") ? point(adapt["point"], n, "adapt.point") : Point(Point::Zero(2 * n));

  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) fail("seed", "expected a non-negative integer");
    cfg.seed = j["seed"].get<std::uint64_t>();
  }
  return cfg;
}

ScenarioConfig load_scenario(const std::string& spec) {
  const std::string prefix = "builtin:";
  if (spec.rfind(prefix, 0) == 0) {
    const std::string name = spec.substr(prefix.size());
    for (const Builtin& b : kBuiltins) {
      if (name == b.name) return parse_scenario(b.text, spec);
    }
    throw ConfigError("scenario: no builtin scenario named '" + name + "'");
  }
  std::ifstream in(spec);
  if (!in) throw ConfigError("scenario: cannot open '" + spec + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str(), spec);
}

std::vector<std::string> builtin_scenario_names() {
  std::vector<std::string> names;
  for (const Builtin& b : kBuiltins) names.emplace_back(b.name);
  std::sort(names.begin(), names.end());
  return names;
}

}  // namespace levimax
