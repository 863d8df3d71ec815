#pragma once

// Experiment runners and YAML reports.
//
// Report layout (keys in this order; everything above wall_time_seconds is a
// pure function of the configuration):
//
//   experiment: <kind>
//   config: {...}                 canonical echo, re-runnable as a config
//   quantities:
//     <name>: {estimate: x, standard_error: e}
//   comparison: {lhs, rhs, absolute_gap, gap_in_sigma, relative_gap, tolerance, verdict}
//   details: {...}                experiment-specific extras
//   rejected_sample_count: k
//   verdict: PASS | FAIL
//   wall_time_seconds: w

#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "crofton/config.hpp"
#include "crofton/crofton.hpp"
#include "crofton/polytope.hpp"
#include "crofton/random.hpp"
#include "crofton/zero_count.hpp"

namespace crofton {

struct Quantity {
  std::string name;
  double estimate = 0.0;
  double standard_error = 0.0;
};

struct Comparison {
  double lhs = 0.0;
  double rhs = 0.0;
  double lhs_error = 0.0;
  double rhs_error = 0.0;
  double tolerance = 0.0;

  double absolute_gap() const { return std::abs(lhs - rhs); }
  double sigma() const { return std::hypot(lhs_error, rhs_error); }
  double gap_in_sigma() const {
    const double s = sigma(), g = absolute_gap();
    if (s > 0.0) return g / s;
    return g == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  double relative_gap() const {
    const double g = absolute_gap(), scale = std::abs(rhs);
    if (scale > 0.0) return g / scale;
    return g == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  bool pass() const { return gap_in_sigma() <= 3.0 || relative_gap() <= tolerance; }
};

/// The comparison for exact (integer) checks: no error bars, tolerance 0.
inline Comparison exact_comparison(double lhs, double rhs) { return {lhs, rhs, 0.0, 0.0, 0.0}; }

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<Quantity> quantities;
  std::optional<Comparison> comparison;
  YAML::Node details{YAML::NodeType::Map};
  std::uint64_t rejected_sample_count = 0;
  bool forced_fail = false;   // e.g. rejection budget exceeded
  std::string fail_reason;
  double wall_time_seconds = 0.0;
  std::vector<AsymptoticRow> curve;   // asymptotics only

  bool pass() const { return !forced_fail && (!comparison || comparison->pass()); }
  const Quantity* quantity(const std::string& name) const {
    for (const auto& q : quantities)
      if (q.name == name) return &q;
    return nullptr;
  }
};

namespace detail {

inline std::vector<SectionSpace> require_spaces(const ExperimentConfig& c, std::size_t lo, std::size_t hi) {
  if (c.spaces.size() < lo || c.spaces.size() > hi) {
    throw ConfigError("spaces", std::string(to_string(c.kind)) + " needs " + std::to_string(lo) +
                                    (lo == hi ? "" : "-" + std::to_string(hi)) + " spaces, got " +
                                    std::to_string(c.spaces.size()));
  }
  const int n = c.spaces.front().dim();
  for (std::size_t i = 0; i < c.spaces.size(); ++i) {
    if (c.spaces[i].dim() != n) {
      throw ConfigError("spaces[" + std::to_string(i) + "]", "all spaces must live on the same C^n");
    }
  }
  if (static_cast<std::size_t>(n) != c.spaces.size() && c.kind != ExperimentKind::kBkk) {
    throw ConfigError("spaces", "need exactly n = " + std::to_string(n) + " spaces on C^" + std::to_string(n));
  }
  return c.spaces;
}

inline const Domain& require_domain(const ExperimentConfig& c) {
  if (!c.domain) throw ConfigError("domain", "missing");
  return *c.domain;
}

inline void require_ball(const ExperimentConfig& c) {
  if (!require_domain(c).is_ball()) throw ConfigError("domain.kind", "zero counting needs a ball");
}

// Rethrows input problems found by the numerics as errors on a config field.
template <class F>
auto as_field(const std::string& field, F&& f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const InputError& e) {
    throw ConfigError(field, e.what());
  }
}

inline void note_estimate(ExperimentReport& r, const AverageZeroEstimate& est) {
  r.quantities.push_back({"average_zeros", est.mean, est.standard_error});
  r.details["accepted_samples"] = est.sample_count;
  r.rejected_sample_count += est.rejected_count;
  if (!est.valid) {
    r.forced_fail = true;
    r.fail_reason = "rejection budget exceeded";
  }
}

inline ExperimentReport run_verify_crofton(const ExperimentConfig& c) {
  ExperimentReport r;
  auto spaces = require_spaces(c, 1, 2);
  require_ball(c);
  const Domain& domain = *c.domain;
  const RandomStream stream(c.seed);
  const auto est =
      as_field("spaces", [&] { return estimate_average_zeros(spaces, domain, c.samples, stream.derive(0)); });
  const auto integral = as_field("domain", [&] { return expected_zero_count_integral(spaces, domain, c.quadrature); });
  note_estimate(r, est);
  r.quantities.push_back({"crofton_integral", integral.estimate, integral.standard_error});
  r.comparison = Comparison{est.mean, integral.estimate, est.standard_error, integral.standard_error, c.tolerance};
  if (c.expected) {
    r.details["expected"] = yaml::num(*c.expected);
    const Comparison lhs_vs_oracle{est.mean, *c.expected, est.standard_error, 0.0, c.tolerance};
    const Comparison rhs_vs_oracle{integral.estimate, *c.expected, integral.standard_error, 0.0, c.tolerance};
    r.details["average_zeros_vs_expected"] = lhs_vs_oracle.pass() ? "PASS" : "FAIL";
    r.details["crofton_integral_vs_expected"] = rhs_vs_oracle.pass() ? "PASS" : "FAIL";
    if (!lhs_vs_oracle.pass() || !rhs_vs_oracle.pass()) {
      r.forced_fail = true;
      r.fail_reason = "disagreement with expected value";
    }
  }
  return r;
}

inline ExperimentReport run_integrate_volume(const ExperimentConfig& c) {
  ExperimentReport r;
  auto spaces = require_spaces(c, 1, 2);
  const Domain& domain = require_domain(c);
  const auto integral = as_field("domain", [&] { return expected_zero_count_integral(spaces, domain, c.quadrature); });
  const double nf = factorial(static_cast<int>(spaces.size()));
  r.quantities.push_back({"crofton_integral", integral.estimate, integral.standard_error});
  r.quantities.push_back({"hermitian_mixed_volume", integral.estimate / nf, integral.standard_error / nf});
  if (!c.lambda_grid.empty()) {
    if (spaces.size() != 2) throw ConfigError("lambda_grid", "the polynomiality check needs two spaces on C^2");
    const auto rep = as_field("lambda_grid", [&] {
      return check_volume_polynomiality(spaces[0], spaces[1], domain, c.lambda_grid, c.quadrature);
    });
    YAML::Node p;
    p["fit"] = YAML::Node(YAML::NodeType::Sequence);
    p["fit"].push_back(yaml::num(rep.a));
    p["fit"].push_back(yaml::num(rep.b));
    p["fit"].push_back(yaml::num(rep.c));
    p["fit_residual"] = yaml::num(rep.fit_residual);
    p["polarization"] = yaml::num(rep.polarization);
    p["mixed_volume"] = yaml::num(rep.mixed_volume);
    p["polarization_error"] = yaml::num(rep.polarization_error);
    p["homogeneity_error"] = yaml::num(rep.homogeneity_error);
    p["verdict"] = rep.pass ? "PASS" : "FAIL";
    r.details["polynomiality"] = p;
    if (!rep.pass) {
      r.forced_fail = true;
      r.fail_reason = "polynomiality check failed";
    }
  }
  if (c.expected) {
    r.comparison = Comparison{integral.estimate, *c.expected, integral.standard_error, 0.0, c.tolerance};
  }
  return r;
}

inline ExperimentReport run_estimate_zeros(const ExperimentConfig& c) {
  ExperimentReport r;
  auto spaces = require_spaces(c, 1, 2);
  require_ball(c);
  const RandomStream stream(c.seed);
  const auto est =
      as_field("spaces", [&] { return estimate_average_zeros(spaces, *c.domain, c.samples, stream.derive(0)); });
  note_estimate(r, est);
  if (c.expected) r.comparison = Comparison{est.mean, *c.expected, est.standard_error, 0.0, c.tolerance};
  return r;
}

inline std::vector<Polytope> config_polytopes(const ExperimentConfig& c) {
  if (!c.polytopes.empty()) return c.polytopes;
  if (c.spaces.empty()) throw ConfigError("polytopes", "missing (give polytopes or spaces)");
  std::vector<Polytope> ks;
  for (std::size_t i = 0; i < c.spaces.size(); ++i) {
    ks.push_back(as_field("spaces[" + std::to_string(i) + "]", [&] { return newton_polytope(c.spaces[i]); }));
  }
  return ks;
}

inline ExperimentReport run_pseudo_volume(const ExperimentConfig& c) {
  ExperimentReport r;
  const auto ks = config_polytopes(c);
  const int n = ks.front().dim();
  if (static_cast<std::size_t>(n) != ks.size()) {
    throw ConfigError("polytopes", "need exactly n = " + std::to_string(n) + " polytopes in C^" + std::to_string(n));
  }
  PseudoVolumeOptions opts;
  opts.t_grid = c.t_grid;
  const auto pv = as_field("polytopes", [&] { return mixed_pseudo_volume(ks, opts); });
  r.quantities.push_back({"pseudo_volume", pv.value, pv.extrapolation_error});
  YAML::Node curve(YAML::NodeType::Sequence);
  for (std::size_t i = 0; i < pv.t_grid.size(); ++i) {
    YAML::Node row;
    row["t"] = yaml::num(pv.t_grid[i]);
    row["value"] = yaml::num(pv.values[i]);
    row["quadrature_error"] = yaml::num(pv.quadrature_errors[i]);
    curve.push_back(row);
  }
  r.details["smoothed_values"] = curve;
  r.details["slice_dim"] = pv.slice_dim;
  r.details["non_monotone"] = pv.non_monotone;

  bool all_real = n <= 3;
  for (const auto& k : ks) all_real = all_real && k.is_real();
  double rhs = 0.0;
  if (c.expected) {
    rhs = *c.expected;
  } else if (all_real) {
    rhs = mixed_volume(ks);
    r.quantities.push_back({"mixed_volume", rhs, 0.0});
  }
  if (c.expected || all_real) r.comparison = Comparison{pv.value, rhs, pv.extrapolation_error, 0.0, c.tolerance};
  return r;
}

inline ExperimentReport run_bkk(const ExperimentConfig& c) {
  ExperimentReport r;
  auto spaces = require_spaces(c, 2, 2);
  for (std::size_t i = 0; i < 2; ++i) {
    if (spaces[i].dim() != 2 || !spaces[i].has_integer_support()) {
      throw ConfigError("spaces[" + std::to_string(i) + "]", "bkk needs exponential sums with integer spectra on C^2");
    }
  }
  const std::vector<Polytope> ks{newton_polytope(spaces[0]), newton_polytope(spaces[1])};
  const double bkk = 2.0 * mixed_volume(ks);
  const double bkk_int = std::round(bkk);
  const RandomStream stream(c.seed);
  YAML::Node counts(YAML::NodeType::Sequence);
  int mismatches = 0;
  std::uint64_t rejected = 0;
  double sum = 0.0;
  int accepted = 0;
  for (int trial = 0; trial < c.trials; ++trial) {
    RandomStream sub = stream.derive(static_cast<std::uint64_t>(trial));
    const Section s1 = sample_section(spaces[0], sub);
    const Section s2 = sample_section(spaces[1], sub);
    const LaurentSolution sol = solve_laurent_2d(s1, s2);
    if (sol.rejected) {
      ++rejected;
      counts.push_back("rejected");
      continue;
    }
    const int k = static_cast<int>(sol.roots.size());
    counts.push_back(k);
    sum += k;
    ++accepted;
    if (k != static_cast<int>(bkk_int)) ++mismatches;
  }
  r.quantities.push_back({"bkk_number", bkk, 0.0});
  r.quantities.push_back({"mean_root_count", accepted ? sum / accepted : 0.0, 0.0});
  r.details["root_counts"] = counts;
  r.details["mismatches"] = mismatches;
  r.rejected_sample_count = rejected;
  r.comparison = exact_comparison(accepted ? sum / accepted : 0.0, bkk_int);
  if (mismatches > 0 || accepted == 0 || rejected > 0) {
    r.forced_fail = true;
    r.fail_reason = mismatches > 0 ? "root count differs from the BKK number" : "degenerate draws";
  }
  return r;
}

inline ExperimentReport run_asymptotics(const ExperimentConfig& c) {
  ExperimentReport r;
  auto spaces = require_spaces(c, 1, 2);
  PseudoVolumeOptions opts;
  opts.t_grid = c.t_grid;
  const RandomStream stream(c.seed);
  const auto table =
      as_field("spaces", [&] { return asymptotic_zero_density(spaces, c.t_list, c.samples, stream, opts); });
  r.curve = table.rows;
  YAML::Node rows(YAML::NodeType::Sequence);
  bool valid = true;
  for (const auto& row : table.rows) {
    YAML::Node y;
    y["t"] = yaml::num(row.t);
    y["estimate"] = yaml::num(row.estimate);
    y["standard_error"] = yaml::num(row.standard_error);
    y["rejected"] = row.rejected;
    rows.push_back(y);
    r.rejected_sample_count += row.rejected;
    valid = valid && row.valid;
  }
  r.details["rows"] = rows;
  r.quantities.push_back({"pseudo_volume", table.pseudo_volume.value, table.pseudo_volume.extrapolation_error});
  r.quantities.push_back({"prediction", table.prediction, 0.0});
  const auto& last = table.rows.back();
  r.quantities.push_back({"final_ratio", last.estimate, last.standard_error});
  const double rhs = c.expected ? *c.expected : table.prediction;
  r.comparison = Comparison{last.estimate, rhs, last.standard_error, 0.0, c.tolerance};
  if (!valid) {
    r.forced_fail = true;
    r.fail_reason = "rejection budget exceeded";
  }
  return r;
}

}  // namespace detail

/// Runs one experiment. Configuration problems surface as ConfigError.
inline ExperimentReport run_experiment(const ExperimentConfig& c) {
  const auto start = std::chrono::steady_clock::now();
  ExperimentReport r;
  switch (c.kind) {
    case ExperimentKind::kVerifyCrofton: r = detail::run_verify_crofton(c); break;
    case ExperimentKind::kIntegrateVolume: r = detail::run_integrate_volume(c); break;
    case ExperimentKind::kEstimateZeros: r = detail::run_estimate_zeros(c); break;
    case ExperimentKind::kPseudoVolume: r = detail::run_pseudo_volume(c); break;
    case ExperimentKind::kBkk: r = detail::run_bkk(c); break;
    case ExperimentKind::kAsymptotics: r = detail::run_asymptotics(c); break;
  }
  r.config = c;
  r.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

/// Report body without the wall-time line.
inline std::string report_body(const ExperimentReport& r) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "experiment" << YAML::Value << to_string(r.config.kind);
  out << YAML::Key << "config" << YAML::Value;
  emit_config(out, r.config);
  out << YAML::Key << "quantities" << YAML::Value << YAML::BeginMap;
  for (const auto& q : r.quantities) {
    out << YAML::Key << q.name << YAML::Value << YAML::Flow << YAML::BeginMap;
    out << YAML::Key << "estimate" << YAML::Value << yaml::num(q.estimate);
    out << YAML::Key << "standard_error" << YAML::Value << yaml::num(q.standard_error);
    out << YAML::EndMap;
  }
  out << YAML::EndMap;
  if (r.comparison) {
    const Comparison& cmp = *r.comparison;
    out << YAML::Key << "comparison" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "lhs" << YAML::Value << yaml::num(cmp.lhs);
    out << YAML::Key << "rhs" << YAML::Value << yaml::num(cmp.rhs);
    out << YAML::Key << "absolute_gap" << YAML::Value << yaml::num(cmp.absolute_gap());
    out << YAML::Key << "gap_in_sigma" << YAML::Value << yaml::num(cmp.gap_in_sigma());
    out << YAML::Key << "relative_gap" << YAML::Value << yaml::num(cmp.relative_gap());
    out << YAML::Key << "tolerance" << YAML::Value << yaml::num(cmp.tolerance);
    out << YAML::Key << "verdict" << YAML::Value << (cmp.pass() ? "PASS" : "FAIL");
    out << YAML::EndMap;
  }
  if (r.details.size() > 0) out << YAML::Key << "details" << YAML::Value << r.details;
  out << YAML::Key << "rejected_sample_count" << YAML::Value << r.rejected_sample_count;
  if (!r.fail_reason.empty()) out << YAML::Key << "fail_reason" << YAML::Value << r.fail_reason;
  out << YAML::Key << "verdict" << YAML::Value << (r.pass() ? "PASS" : "FAIL");
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

inline std::string report_yaml(const ExperimentReport& r) {
  std::ostringstream s;
  s.precision(6);
  s << report_body(r) << "wall_time_seconds: " << r.wall_time_seconds << "\n";
  return s.str();
}

/// CSV with columns t,estimate,stderr,prediction (asymptotics only).
inline std::string report_csv(const ExperimentReport& r) {
  std::ostringstream s;
  s << "t,estimate,stderr,prediction\n";
  for (const auto& row : r.curve) {
    s << yaml::num(row.t) << ',' << yaml::num(row.estimate) << ',' << yaml::num(row.standard_error) << ','
      << yaml::num(row.prediction) << '\n';
  }
  return s.str();
}

}  // namespace crofton
