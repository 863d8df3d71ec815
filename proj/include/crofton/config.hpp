#pragma once

// YAML documents for section spaces, polytopes and experiment configurations.
//
// Point grammar (spectrum points, polytope vertices, domain centers): a point
// in C^n is a list of n coordinates; each coordinate is either a number (real)
// or a pair [re, im]. Canonical output always writes pairs.
//
//   kind: exponential-sum          kind: kostlan        kind: polytope
//   n: 2                           degree: 3            n: 1
//   support:                                            vertices:
//     - [[0, 0], [0, 0]]                                  - [[0, 0]]
//     - [[1, 0], [0, 0]]                                  - [[1, 0]]

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "crofton/numerics.hpp"
#include "crofton/polytope.hpp"
#include "crofton/quadrature.hpp"
#include "crofton/section_space.hpp"

namespace crofton {

/// A configuration problem tied to a named field.
class ConfigError : public InputError {
 public:
  ConfigError(std::string field, const std::string& message)
      : InputError("config field '" + field + "': " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

enum class ExperimentKind { kVerifyCrofton, kIntegrateVolume, kEstimateZeros, kPseudoVolume, kBkk, kAsymptotics };

inline const char* to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::kVerifyCrofton: return "verify-crofton";
    case ExperimentKind::kIntegrateVolume: return "integrate-volume";
    case ExperimentKind::kEstimateZeros: return "estimate-zeros";
    case ExperimentKind::kPseudoVolume: return "pseudo-volume";
    case ExperimentKind::kBkk: return "bkk";
    case ExperimentKind::kAsymptotics: return "asymptotics";
  }
  return "?";
}

inline std::optional<ExperimentKind> parse_experiment_kind(const std::string& s) {
  for (auto k : {ExperimentKind::kVerifyCrofton, ExperimentKind::kIntegrateVolume, ExperimentKind::kEstimateZeros,
                 ExperimentKind::kPseudoVolume, ExperimentKind::kBkk, ExperimentKind::kAsymptotics}) {
    if (s == to_string(k)) return k;
  }
  return std::nullopt;
}

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kVerifyCrofton;
  std::uint64_t seed = 0;
  std::vector<SectionSpace> spaces;
  std::vector<Polytope> polytopes;
  std::optional<Domain> domain;
  QuadratureSpec quadrature;
  bool quadrature_seed_given = false;
  std::uint64_t samples = 10000;
  double tolerance = 0.03;
  std::vector<double> t_grid{8.0, 16.0, 32.0};
  std::vector<double> t_list{5.0, 10.0, 20.0};
  std::vector<double> lambda_grid;
  int trials = 20;
  std::optional<double> expected;
  std::string output;
  std::string csv;
};

inline double default_tolerance(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::kPseudoVolume: return 0.02;
    case ExperimentKind::kBkk: return 0.0;
    case ExperimentKind::kAsymptotics: return 0.05;
    default: return 0.03;
  }
}

namespace yaml {

/// Shortest decimal that reads back to the same double.
inline std::string num(double v) {
  if (std::isnan(v)) return ".nan";
  if (std::isinf(v)) return v > 0 ? ".inf" : "-.inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline double number(const YAML::Node& node, const std::string& field) {
  if (!node || !node.IsScalar()) throw ConfigError(field, "expected a number");
  try {
    const double v = node.as<double>();
    if (!std::isfinite(v)) throw ConfigError(field, "must be finite");
    return v;
  } catch (const YAML::Exception&) {
    throw ConfigError(field, "expected a number, got '" + node.Scalar() + "'");
  }
}

inline double positive(const YAML::Node& node, const std::string& field) {
  const double v = number(node, field);
  if (!(v > 0.0)) throw ConfigError(field, "must be positive");
  return v;
}

inline std::uint64_t count(const YAML::Node& node, const std::string& field) {
  if (!node || !node.IsScalar()) throw ConfigError(field, "expected a positive integer");
  try {
    const long long v = node.as<long long>();
    if (v < 1) throw ConfigError(field, "must be positive");
    return static_cast<std::uint64_t>(v);
  } catch (const YAML::Exception&) {
    throw ConfigError(field, "expected a positive integer, got '" + node.Scalar() + "'");
  }
}

inline std::string string(const YAML::Node& node, const std::string& field) {
  if (!node || !node.IsScalar()) throw ConfigError(field, "expected a string");
  return node.Scalar();
}

inline cplx coordinate(const YAML::Node& node, const std::string& field) {
  if (node.IsScalar()) return {number(node, field), 0.0};
  if (node.IsSequence() && node.size() == 2) return {number(node[0], field), number(node[1], field)};
  throw ConfigError(field, "coordinate must be a number or [re, im]");
}

inline SpectrumPoint point(const YAML::Node& node, const std::string& field) {
  if (!node.IsSequence() || node.size() == 0) throw ConfigError(field, "point must be a nonempty list of coordinates");
  SpectrumPoint p(static_cast<Eigen::Index>(node.size()));
  for (std::size_t j = 0; j < node.size(); ++j) p[static_cast<Eigen::Index>(j)] = coordinate(node[j], field);
  return p;
}

inline std::vector<SpectrumPoint> points(const YAML::Node& node, const std::string& field) {
  if (!node || !node.IsSequence() || node.size() == 0) throw ConfigError(field, "expected a nonempty list of points");
  std::vector<SpectrumPoint> pts;
  for (std::size_t i = 0; i < node.size(); ++i) pts.push_back(point(node[i], field + "[" + std::to_string(i) + "]"));
  return pts;
}

inline std::vector<double> numbers(const YAML::Node& node, const std::string& field) {
  if (!node || !node.IsSequence() || node.size() == 0) throw ConfigError(field, "expected a nonempty list of numbers");
  std::vector<double> v;
  for (std::size_t i = 0; i < node.size(); ++i) v.push_back(number(node[i], field));
  return v;
}

inline void emit_point(YAML::Emitter& out, const SpectrumPoint& p) {
  out << YAML::Flow << YAML::BeginSeq;
  for (Eigen::Index j = 0; j < p.size(); ++j) {
    out << YAML::Flow << YAML::BeginSeq << num(p[j].real()) << num(p[j].imag()) << YAML::EndSeq;
  }
  out << YAML::EndSeq;
}

inline YAML::Node load_file(const std::filesystem::path& path, const std::string& field) {
  try {
    return YAML::LoadFile(path.string());
  } catch (const YAML::BadFile&) {
    throw ConfigError(field, "cannot read file '" + path.string() + "'");
  } catch (const YAML::ParserException& e) {
    throw ConfigError(field, "malformed YAML in '" + path.string() + "': " + e.what());
  }
}

}  // namespace yaml

inline SectionSpace parse_section_space(const YAML::Node& node, const std::string& field,
                                        const std::filesystem::path& base_dir = {}) {
  if (!node || !node.IsMap()) throw ConfigError(field, "expected a mapping");
  if (node["file"]) {
    const auto path = base_dir / yaml::string(node["file"], field + ".file");
    return parse_section_space(yaml::load_file(path, field + ".file"), field, path.parent_path());
  }
  const std::string kind = yaml::string(node["kind"], field + ".kind");
  if (kind == "kostlan") {
    const double d = yaml::number(node["degree"], field + ".degree");
    if (d < 0 || d != std::floor(d)) throw ConfigError(field + ".degree", "must be a non-negative integer");
    return SectionSpace::kostlan(static_cast<int>(d));
  }
  if (kind == "exponential-sum") {
    std::vector<SpectrumPoint> support = yaml::points(node["support"], field + ".support");
    if (node["n"]) {
      const double n = yaml::number(node["n"], field + ".n");
      for (const auto& p : support) {
        if (p.size() != static_cast<Eigen::Index>(n)) throw ConfigError(field + ".support", "point dimension differs from n");
      }
    }
    try {
      return SectionSpace::exponential_sum(std::move(support));
    } catch (const InputError& e) {
      throw ConfigError(field + ".support", e.what());
    }
  }
  throw ConfigError(field + ".kind", "unknown space kind '" + kind + "' (expected kostlan or exponential-sum)");
}

inline Polytope parse_polytope(const YAML::Node& node, const std::string& field,
                               const std::filesystem::path& base_dir = {}) {
  if (!node || !node.IsMap()) throw ConfigError(field, "expected a mapping");
  if (node["file"]) {
    const auto path = base_dir / yaml::string(node["file"], field + ".file");
    return parse_polytope(yaml::load_file(path, field + ".file"), field, path.parent_path());
  }
  const YAML::Node pts = node["vertices"] ? node["vertices"] : node["support"];
  const std::string key = node["vertices"] ? ".vertices" : ".support";
  try {
    return Polytope::hull_of(yaml::points(pts, field + key));
  } catch (const ConfigError&) {
    throw;
  } catch (const InputError& e) {
    throw ConfigError(field + key, e.what());
  }
}

inline void emit_section_space(YAML::Emitter& out, const SectionSpace& s) {
  out << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value << to_string(s.kind());
  switch (s.kind()) {
    case SectionSpace::Kind::kKostlan: out << YAML::Key << "degree" << YAML::Value << s.degree(); break;
    case SectionSpace::Kind::kExponentialSum:
      out << YAML::Key << "n" << YAML::Value << s.dim();
      out << YAML::Key << "support" << YAML::Value << YAML::BeginSeq;
      for (const auto& p : s.support()) yaml::emit_point(out, p);
      out << YAML::EndSeq;
      break;
    case SectionSpace::Kind::kExplicitBasis: throw InputError("explicit-basis spaces cannot be serialized");
  }
  if (s.has_basis_change()) throw InputError("spaces with a basis change cannot be serialized");
  out << YAML::EndMap;
}

inline void emit_polytope(YAML::Emitter& out, const Polytope& k) {
  out << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value << "polytope";
  out << YAML::Key << "n" << YAML::Value << k.dim();
  out << YAML::Key << "vertices" << YAML::Value << YAML::BeginSeq;
  for (const auto& v : k.vertices()) yaml::emit_point(out, v);
  out << YAML::EndSeq << YAML::EndMap;
}

inline std::string to_yaml(const SectionSpace& s) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  emit_section_space(out, s);
  return std::string(out.c_str()) + "\n";
}

inline std::string to_yaml(const Polytope& k) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  emit_polytope(out, k);
  return std::string(out.c_str()) + "\n";
}

inline Domain parse_domain(const YAML::Node& node, int n) {
  if (!node || !node.IsMap()) throw ConfigError("domain", "expected a mapping");
  const std::string kind = yaml::string(node["kind"], "domain.kind");
  if (kind == "ball") {
    const double r = yaml::positive(node["radius"], "domain.radius");
    SpectrumPoint c = SpectrumPoint::Zero(n);
    if (node["center"]) {
      c = yaml::point(node["center"], "domain.center");
      if (c.size() != n) throw ConfigError("domain.center", "expected " + std::to_string(n) + " coordinates");
    }
    return Domain::ball(ComplexPoint(c), r);
  }
  if (kind == "box") {
    const YAML::Node iv = node["intervals"];
    if (!iv || !iv.IsSequence() || iv.size() != static_cast<std::size_t>(2 * n)) {
      throw ConfigError("domain.intervals", "expected " + std::to_string(2 * n) + " [lo, hi] pairs (Re z1, Im z1, ...)");
    }
    std::vector<std::pair<double, double>> intervals;
    for (std::size_t i = 0; i < iv.size(); ++i) {
      if (!iv[i].IsSequence() || iv[i].size() != 2) throw ConfigError("domain.intervals", "each interval is [lo, hi]");
      const double lo = yaml::number(iv[i][0], "domain.intervals"), hi = yaml::number(iv[i][1], "domain.intervals");
      if (!(lo < hi)) throw ConfigError("domain.intervals", "interval " + std::to_string(i) + " is empty");
      intervals.emplace_back(lo, hi);
    }
    return Domain::box(std::move(intervals));
  }
  throw ConfigError("domain.kind", "unknown domain kind '" + kind + "' (expected ball or box)");
}

inline QuadratureSpec parse_quadrature(const YAML::Node& node, bool& seed_given) {
  QuadratureSpec q;
  seed_given = false;
  if (!node) return q;
  if (!node.IsMap()) throw ConfigError("quadrature", "expected a mapping");
  if (node["method"]) {
    const std::string m = yaml::string(node["method"], "quadrature.method");
    if (m == "monte-carlo") q.method = QuadratureSpec::Method::kMonteCarlo;
    else if (m == "quasi-monte-carlo") q.method = QuadratureSpec::Method::kQuasiMonteCarlo;
    else if (m == "product-gauss") q.method = QuadratureSpec::Method::kProductGauss;
    else throw ConfigError("quadrature.method", "unknown method '" + m + "'");
  }
  if (node["samples"]) q.sample_count = yaml::count(node["samples"], "quadrature.samples");
  if (node["nodes"]) q.nodes_per_axis = static_cast<int>(yaml::count(node["nodes"], "quadrature.nodes"));
  if (node["seed"]) {
    q.seed = yaml::count(node["seed"], "quadrature.seed");
    seed_given = true;
  }
  return q;
}

/// Parses an experiment configuration. `kind_override` (the CLI subcommand)
/// must agree with an `experiment` field when both are present;
/// `seed_override` replaces the config seed.
inline ExperimentConfig parse_config(const YAML::Node& root, std::optional<ExperimentKind> kind_override = {},
                                     std::optional<std::uint64_t> seed_override = {},
                                     const std::filesystem::path& base_dir = {}) {
  if (!root || !root.IsMap()) throw ConfigError("<root>", "configuration must be a mapping");
  static const char* known[] = {"experiment", "seed",   "spaces",  "polytopes", "domain",  "quadrature", "samples",
                                "tolerance",  "t_grid", "t_list",  "lambda_grid", "trials", "expected",  "output",
                                "csv"};
  for (const auto& kv : root) {
    const std::string key = kv.first.as<std::string>();
    if (std::find(std::begin(known), std::end(known), key) == std::end(known)) throw ConfigError(key, "unknown field");
  }

  ExperimentConfig c;
  std::optional<ExperimentKind> kind;
  if (root["experiment"]) {
    const std::string s = yaml::string(root["experiment"], "experiment");
    kind = parse_experiment_kind(s);
    if (!kind) throw ConfigError("experiment", "unknown experiment '" + s + "'");
  }
  if (kind_override) {
    if (kind && *kind != *kind_override) {
      throw ConfigError("experiment", std::string("config says '") + to_string(*kind) + "' but command is '" +
                                          to_string(*kind_override) + "'");
    }
    kind = kind_override;
  }
  if (!kind) throw ConfigError("experiment", "missing");
  c.kind = *kind;

  if (seed_override) {
    c.seed = *seed_override;
  } else if (root["seed"]) {
    if (!root["seed"].IsScalar()) throw ConfigError("seed", "expected an integer");
    try {
      c.seed = root["seed"].as<std::uint64_t>();
    } catch (const YAML::Exception&) {
      throw ConfigError("seed", "expected a non-negative integer");
    }
  } else {
    throw ConfigError("seed", "missing (seeds are mandatory; pass --seed or set seed)");
  }

  if (root["spaces"]) {
    const YAML::Node sp = root["spaces"];
    if (!sp.IsSequence() || sp.size() == 0) throw ConfigError("spaces", "expected a nonempty list");
    for (std::size_t i = 0; i < sp.size(); ++i) {
      c.spaces.push_back(parse_section_space(sp[i], "spaces[" + std::to_string(i) + "]", base_dir));
    }
  }
  if (root["polytopes"]) {
    const YAML::Node ps = root["polytopes"];
    if (!ps.IsSequence() || ps.size() == 0) throw ConfigError("polytopes", "expected a nonempty list");
    for (std::size_t i = 0; i < ps.size(); ++i) {
      c.polytopes.push_back(parse_polytope(ps[i], "polytopes[" + std::to_string(i) + "]", base_dir));
    }
  }
  const int n = !c.spaces.empty() ? c.spaces.front().dim() : !c.polytopes.empty() ? c.polytopes.front().dim() : 0;
  if (root["domain"]) {
    if (n == 0) throw ConfigError("domain", "a domain needs spaces to fix the dimension");
    c.domain = parse_domain(root["domain"], n);
  }
  c.quadrature = parse_quadrature(root["quadrature"], c.quadrature_seed_given);
  if (!c.quadrature_seed_given) c.quadrature.seed = splitmix64(c.seed ^ 0x71a2b3c4d5e6f708ULL);
  if (root["samples"]) c.samples = yaml::count(root["samples"], "samples");
  c.tolerance = default_tolerance(c.kind);
  if (root["tolerance"]) {
    c.tolerance = yaml::number(root["tolerance"], "tolerance");
    if (c.tolerance < 0.0) throw ConfigError("tolerance", "must be non-negative");
  }
  if (root["t_grid"]) {
    c.t_grid = yaml::numbers(root["t_grid"], "t_grid");
    if (c.t_grid.size() < 3) throw ConfigError("t_grid", "needs at least 3 values");
    for (std::size_t i = 0; i < c.t_grid.size(); ++i) {
      if (!(c.t_grid[i] > 0.0) || (i > 0 && !(c.t_grid[i] > c.t_grid[i - 1]))) {
        throw ConfigError("t_grid", "values must be positive and increasing");
      }
    }
  }
  if (root["t_list"]) {
    c.t_list = yaml::numbers(root["t_list"], "t_list");
    for (double t : c.t_list)
      if (!(t > 0.0)) throw ConfigError("t_list", "values must be positive");
  }
  if (root["lambda_grid"]) {
    c.lambda_grid = yaml::numbers(root["lambda_grid"], "lambda_grid");
    for (double l : c.lambda_grid)
      if (!(l > 0.0)) throw ConfigError("lambda_grid", "values must be positive");
  }
  if (root["trials"]) c.trials = static_cast<int>(yaml::count(root["trials"], "trials"));
  if (root["expected"]) c.expected = yaml::number(root["expected"], "expected");
  if (root["output"]) c.output = yaml::string(root["output"], "output");
  if (root["csv"]) c.csv = yaml::string(root["csv"], "csv");
  return c;
}

inline ExperimentConfig load_config(const std::filesystem::path& path, std::optional<ExperimentKind> kind_override = {},
                                    std::optional<std::uint64_t> seed_override = {}) {
  return parse_config(yaml::load_file(path, "--config"), kind_override, seed_override, path.parent_path());
}

/// Canonical, self-contained echo of a configuration (file references are
/// inlined). Parsing the echo reproduces the run.
inline void emit_config(YAML::Emitter& out, const ExperimentConfig& c) {
  out << YAML::BeginMap;
  out << YAML::Key << "experiment" << YAML::Value << to_string(c.kind);
  out << YAML::Key << "seed" << YAML::Value << c.seed;
  if (!c.spaces.empty()) {
    out << YAML::Key << "spaces" << YAML::Value << YAML::BeginSeq;
    for (const auto& s : c.spaces) emit_section_space(out, s);
    out << YAML::EndSeq;
  }
  if (!c.polytopes.empty()) {
    out << YAML::Key << "polytopes" << YAML::Value << YAML::BeginSeq;
    for (const auto& k : c.polytopes) emit_polytope(out, k);
    out << YAML::EndSeq;
  }
  if (c.domain) {
    const Domain& d = *c.domain;
    out << YAML::Key << "domain" << YAML::Value << YAML::BeginMap;
    if (d.is_ball()) {
      out << YAML::Key << "kind" << YAML::Value << "ball";
      out << YAML::Key << "center" << YAML::Value;
      yaml::emit_point(out, d.complex_center().coords());
      out << YAML::Key << "radius" << YAML::Value << yaml::num(d.radius());
    } else {
      out << YAML::Key << "kind" << YAML::Value << "box";
      out << YAML::Key << "intervals" << YAML::Value << YAML::BeginSeq;
      for (const auto& [lo, hi] : d.intervals()) out << YAML::Flow << YAML::BeginSeq << yaml::num(lo) << yaml::num(hi) << YAML::EndSeq;
      out << YAML::EndSeq;
    }
    out << YAML::EndMap;
  }
  out << YAML::Key << "quadrature" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "method" << YAML::Value << to_string(c.quadrature.method);
  out << YAML::Key << "samples" << YAML::Value << c.quadrature.sample_count;
  out << YAML::Key << "nodes" << YAML::Value << c.quadrature.nodes_per_axis;
  out << YAML::Key << "seed" << YAML::Value << c.quadrature.seed;
  out << YAML::EndMap;
  out << YAML::Key << "samples" << YAML::Value << c.samples;
  out << YAML::Key << "tolerance" << YAML::Value << yaml::num(c.tolerance);
  auto list = [&](const char* key, const std::vector<double>& v) {
    if (v.empty()) return;
    out << YAML::Key << key << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (double x : v) out << yaml::num(x);
    out << YAML::EndSeq;
  };
  list("t_grid", c.t_grid);
  list("t_list", c.t_list);
  list("lambda_grid", c.lambda_grid);
  out << YAML::Key << "trials" << YAML::Value << c.trials;
  if (c.expected) out << YAML::Key << "expected" << YAML::Value << yaml::num(*c.expected);
  if (!c.output.empty()) out << YAML::Key << "output" << YAML::Value << c.output;
  if (!c.csv.empty()) out << YAML::Key << "csv" << YAML::Value << c.csv;
  out << YAML::EndMap;
}

}  // namespace crofton
