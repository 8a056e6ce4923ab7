#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "proxpep/algorithms.hpp"
#include "proxpep/bounds.hpp"
#include "proxpep/io.hpp"
#include "proxpep/pep.hpp"
#include "proxpep/problems.hpp"
#include "proxpep/quad.hpp"
#include "proxpep/rng.hpp"
#include "proxpep/schedules.hpp"

namespace proxpep {

/// Bad configuration or arguments; the CLI maps it to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Config JSON:
// {
//   "problem":    {"kind": "lasso" | "box_ls", "dimension": d}  or  {"path": "problem.json"},
//   "algorithms": [{"name": "pgm"}, {"name": "fpgm"},
//                  {"name": "fpgm_m", "m": 5} or {"name": "fpgm_m", "m_rule": "two_thirds" | "ceil_third"},
//                  {"name": "fpgm_sigma", "sigma": 0.78}, {"name": "fpgm_opg"},
//                  {"name": "fpgm_a", "a": 4}, {"name": "gfpgm", "t": "fista" | "opg" | "linear:4"}],
//   "N": [10, 20],
//   "seed": 1,
//   "tolerance": 1e-12,          reference solver tolerance
//   "solve_reference": false,    compute x* for a loaded problem that lacks one
//   "out": "out"
// }
struct ExperimentConfig {
  std::string problem_kind = "lasso";
  Index dimension = 10;
  std::optional<std::filesystem::path> problem_path;
  bool solve_missing_reference = false;
  std::vector<AlgorithmSpec> algorithms;
  std::vector<std::size_t> horizons{20};
  std::uint64_t seed = 1;
  double tolerance = 1e-12;
  std::filesystem::path out = "out";
};

/// Flags that override the config file.
struct CliOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out;
  std::optional<double> tolerance;
  std::optional<MRounding> rounding;
  std::optional<SigmaConstant> sigma_constant;
};

inline MRounding parse_rounding(const std::string& s) {
  if (s == "floor") return MRounding::floor;
  if (s == "ceil") return MRounding::ceil;
  throw UsageError("m-rounding must be 'floor' or 'ceil', got '" + s + "'");
}

inline SigmaConstant parse_sigma_constant(const std::string& s) {
  if (s == "L_over_sigma") return SigmaConstant::L_over_sigma;
  if (s == "sigma_L") return SigmaConstant::sigma_L;
  throw UsageError("sigma-constant must be 'L_over_sigma' or 'sigma_L', got '" + s + "'");
}

/// "fista", "opg", "linear:A", "custom:1,1.5,2".
inline TSequenceSpec parse_t_spec(const std::string& s, MRounding rounding = MRounding::floor) {
  TSequenceSpec spec;
  spec.rounding = rounding;
  const auto colon = s.find(':');
  const std::string head = s.substr(0, colon);
  const std::string tail = colon == std::string::npos ? "" : s.substr(colon + 1);
  if (head == "fista") {
    spec.kind = SequenceKind::fista;
  } else if (head == "opg") {
    spec.kind = SequenceKind::opg;
  } else if (head == "linear") {
    spec.kind = SequenceKind::linear;
    try {
      spec.a = tail.empty() ? 4.0 : std::stod(tail);
    } catch (const std::exception&) {
      throw UsageError("bad linear parameter in '" + s + "'");
    }
  } else if (head == "custom") {
    spec.kind = SequenceKind::custom;
    std::stringstream ss(tail);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        spec.values.push_back(std::stod(item));
      } catch (const std::exception&) {
        throw UsageError("bad custom value '" + item + "' in '" + s + "'");
      }
    }
    if (spec.values.empty()) throw UsageError("custom sequence needs at least one value");
  } else {
    throw UsageError("unknown t-sequence '" + s + "' (fista, opg, linear:A, custom:v0,v1,...)");
  }
  return spec;
}

inline AlgorithmSpec parse_algorithm(const json& j) {
  if (!j.is_object() || !j.contains("name")) throw UsageError("algorithm entry needs a name");
  const std::string name = j.at("name").get<std::string>();
  AlgorithmSpec a;
  if (name == "pgm") {
    a.kind = AlgorithmKind::pgm;
  } else if (name == "fpgm") {
    a.kind = AlgorithmKind::fpgm;
  } else if (name == "fpgm_m") {
    a.kind = AlgorithmKind::fpgm_m;
    if (j.contains("m")) {
      const long m = j.at("m").get<long>();
      if (m < 1) throw UsageError("fpgm_m: m must be >= 1");
      a.m_choice = MChoice::explicit_value;
      a.m = static_cast<std::size_t>(m);
    } else {
      const std::string rule = j.value("m_rule", "two_thirds");
      if (rule == "two_thirds") a.m_choice = MChoice::two_thirds;
      else if (rule == "ceil_third") a.m_choice = MChoice::ceil_third;
      else throw UsageError("fpgm_m: unknown m_rule '" + rule + "'");
    }
  } else if (name == "fpgm_sigma") {
    a.kind = AlgorithmKind::fpgm_sigma;
    a.sigma = j.value("sigma", 0.78);
    if (!(a.sigma > 0.0 && a.sigma < 1.0)) throw UsageError("fpgm_sigma: sigma must lie in (0, 1)");
  } else if (name == "fpgm_opg") {
    a.kind = AlgorithmKind::fpgm_opg;
  } else if (name == "fpgm_a") {
    a.kind = AlgorithmKind::fpgm_a;
    a.a = j.value("a", 4.0);
    if (!(a.a >= 2.0)) throw UsageError("fpgm_a: a must be >= 2");
  } else if (name == "gfpgm") {
    a.kind = AlgorithmKind::gfpgm;
    a.t = parse_t_spec(j.value("t", std::string("fista")));
  } else {
    throw UsageError("unknown algorithm '" + name + "'");
  }
  return a;
}

inline ExperimentConfig parse_config(const json& j, const CliOverrides& o = {}) {
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  ExperimentConfig c;
  if (j.contains("problem")) {
    const json& p = j.at("problem");
    if (p.contains("path")) {
      c.problem_path = p.at("path").get<std::string>();
    } else {
      c.problem_kind = p.value("kind", std::string("lasso"));
      if (c.problem_kind != "lasso" && c.problem_kind != "box_ls") {
        throw UsageError("problem.kind must be 'lasso' or 'box_ls'");
      }
      const long d = p.value("dimension", 10L);
      if (d < 1 || d > 200) throw UsageError("problem.dimension must lie in [1, 200]");
      c.dimension = static_cast<Index>(d);
    }
  }
  if (!j.contains("algorithms") || !j.at("algorithms").is_array() || j.at("algorithms").empty()) {
    throw UsageError("config needs a non-empty 'algorithms' list");
  }
  for (const json& a : j.at("algorithms")) c.algorithms.push_back(parse_algorithm(a));
  if (j.contains("N")) {
    c.horizons.clear();
    const json& n = j.at("N");
    if (n.is_array()) {
      for (const json& v : n) c.horizons.push_back(v.get<long>() < 1 ? 0 : v.get<std::size_t>());
    } else {
      c.horizons.push_back(n.get<long>() < 1 ? 0 : n.get<std::size_t>());
    }
    if (c.horizons.empty()) throw UsageError("N list is empty");
    for (std::size_t N : c.horizons) {
      if (N == 0) throw UsageError("every N must be >= 1");
    }
  }
  c.seed = j.value("seed", c.seed);
  c.tolerance = j.value("tolerance", c.tolerance);
  c.solve_missing_reference = j.value("solve_reference", false);
  if (j.contains("out")) c.out = j.at("out").get<std::string>();

  if (o.seed) c.seed = *o.seed;
  if (o.out) c.out = *o.out;
  if (o.tolerance) c.tolerance = *o.tolerance;
  if (!(c.tolerance > 0.0)) throw UsageError("tolerance must be positive");
  for (auto& a : c.algorithms) {
    if (o.rounding) {
      a.rounding = *o.rounding;
      a.t.rounding = *o.rounding;
    }
    if (o.sigma_constant) a.sigma_constant = *o.sigma_constant;
  }
  return c;
}

/// Problem, start point and R for one experiment.
struct Instance {
  CompositeProblem problem;
  InitialCondition init;
};

/// Builds the problem from the seed (or loads it), attaches x*, draws x0 ~ N(0, I).
inline Instance build_instance(const ExperimentConfig& c) {
  SplitMix64 rng(c.seed);
  std::optional<CompositeProblem> p;
  if (c.problem_path) {
    p = problem_from_json(read_json_file(*c.problem_path));
    if (!p->reference()) {
      if (!c.solve_missing_reference) {
        throw std::runtime_error("problem " + c.problem_path->string() +
                                 " has no reference solution (x_star); run solve_reference first "
                                 "or set \"solve_reference\": true in the config");
      }
      p = p->with_reference(solve_reference(*p, c.tolerance));
    }
  } else {
    p = c.problem_kind == "lasso" ? random_lasso(rng, c.dimension) : random_box_ls(rng, c.dimension);
    p = p->with_reference(solve_reference(*p, c.tolerance));
  }
  Vector x0 = rng.normal_vector(p->dimension());
  InitialCondition init = make_initial_condition(*p, std::move(x0));
  return Instance{std::move(*p), std::move(init)};
}

inline std::string cell_name(const AlgorithmSpec& a, std::size_t N) {
  return a.slug() + "_N" + std::to_string(N) + ".csv";
}

/// One trace CSV per (algorithm, N) plus problem.json; returns the written paths.
inline std::vector<std::filesystem::path> cmd_run(const ExperimentConfig& c, std::ostream& log) {
  const Instance inst = build_instance(c);
  std::vector<std::filesystem::path> written;
  const auto problem_path = c.out / "problem.json";
  write_file_atomic(problem_path, to_json(inst.problem).dump(2) + "\n");
  written.push_back(problem_path);
  const double F_star = inst.problem.reference()->F;
  for (const auto& a : c.algorithms) {
    for (std::size_t N : c.horizons) {
      const RunTrace tr = run_algorithm(inst.problem, a, inst.init.x0, N);
      const auto path = c.out / cell_name(a, N);
      write_file_atomic(path, trace_csv(tr, F_star));
      written.push_back(path);
      log << tr.label << " N=" << N << " -> " << path.string() << '\n';
    }
  }
  return written;
}

struct CompareRow {
  std::string algorithm;
  std::size_t N = 0;
  std::optional<BoundValue> cost_bound;
  double F_gap = 0.0;
  std::optional<BoundValue> mapping_bound;
  double omega_min = 0.0;

  std::optional<double> cost_ratio() const {
    if (!cost_bound) return std::nullopt;
    return F_gap / cost_bound->value;
  }
  std::optional<double> mapping_ratio() const {
    if (!mapping_bound) return std::nullopt;
    return omega_min / mapping_bound->value;
  }
};

struct CompareResult {
  double L = 0.0;
  double R = 0.0;
  std::vector<CompareRow> rows;
  std::string markdown;
  /// Non-advisory cells with ratio > 1 + 1e-8.
  std::size_t violations = 0;
};

/// Algorithms of the default comparison table.
inline std::vector<AlgorithmSpec> default_comparison_algorithms() {
  std::vector<AlgorithmSpec> out(6);
  out[0].kind = AlgorithmKind::pgm;
  out[1].kind = AlgorithmKind::fpgm;
  out[2].kind = AlgorithmKind::fpgm_sigma;
  out[2].sigma = 0.78;
  out[3].kind = AlgorithmKind::fpgm_m;
  out[3].m_choice = MChoice::two_thirds;
  out[4].kind = AlgorithmKind::fpgm_opg;
  out[5].kind = AlgorithmKind::fpgm_a;
  out[5].a = 4.0;
  return out;
}

namespace detail {

inline std::string cell(double v) {
  std::ostringstream os;
  os << std::setprecision(7) << v;
  return os.str();
}

inline std::string bound_cell(const std::optional<BoundValue>& b) {
  if (!b) return "-";
  return cell(b->value) + (b->advisory ? "*" : "");
}

inline std::string ratio_cell(const std::optional<double>& r) { return r ? cell(*r) : "-"; }

}  // namespace detail

inline CompareResult cmd_compare(const ExperimentConfig& c) {
  const Instance inst = build_instance(c);
  CompareResult res;
  res.L = inst.problem.lipschitz();
  res.R = inst.init.R;
  const double F_star = inst.problem.reference()->F;
  for (const auto& a : c.algorithms) {
    for (std::size_t N : c.horizons) {
      const RunTrace tr = run_algorithm(inst.problem, a, inst.init.x0, N);
      const BoundReport b = analytic_bounds(a, N, res.L, res.R);
      CompareRow row;
      row.algorithm = tr.label;
      row.N = N;
      row.cost_bound = b.cost;
      row.F_gap = tr.F.back() - F_star;
      row.mapping_bound = b.mapping;
      row.omega_min = tr.omega_min();
      auto over = [](const std::optional<double>& r, const std::optional<BoundValue>& bv) {
        return r && bv && !bv->advisory && *r > 1.0 + 1e-8;
      };
      if (over(row.cost_ratio(), row.cost_bound)) ++res.violations;
      if (over(row.mapping_ratio(), row.mapping_bound)) ++res.violations;
      res.rows.push_back(std::move(row));
    }
  }

  std::ostringstream md;
  md << "L = " << detail::cell(res.L) << ", R = " << detail::cell(res.R) << "\n\n";
  md << "| algorithm | N | cost bound | F(x_N) - F* | cost ratio | mapping bound | min mapping norm | "
        "mapping ratio |\n";
  md << "|---|---|---|---|---|---|---|---|\n";
  for (const auto& r : res.rows) {
    md << "| " << r.algorithm << " | " << r.N << " | " << detail::bound_cell(r.cost_bound) << " | "
       << detail::cell(r.F_gap) << " | " << detail::ratio_cell(r.cost_ratio()) << " | "
       << detail::bound_cell(r.mapping_bound) << " | " << detail::cell(r.omega_min) << " | "
       << detail::ratio_cell(r.mapping_ratio()) << " |\n";
  }
  md << "\n* advisory bound (not asserted)\n";
  res.markdown = md.str();
  return res;
}

struct CertifyResult {
  json report;
  bool valid = false;
};

/// Dual certificates for one t-sequence: feasibility, dual bounds and the
/// matching closed-form bounds where one exists.
inline CertifyResult cmd_certify(const TSequenceSpec& spec, std::size_t N, double L = 1.0,
                                 double R = 1.0) {
  if (N == 0) throw UsageError("certify: N must be >= 1");
  const TSequence t = spec.make(N);
  CertifyResult out;
  const TValidation v = validate_t_sequence(t);
  out.valid = v.valid();
  out.report = {{"t_sequence", to_json(t)}, {"validation", to_json(v)}, {"L", L}, {"R", R}};
  if (!out.valid) return out;

  const StepSchedule h = step_coefficients(t);
  const CostCertificate cc = lemma2_certificate(t);
  const MappingCertificate mc = lemma4_certificate(t);
  json cost = {{"certificate", to_json(cc)},
               {"feasibility", to_json(check_feasibility(h, cc))},
               {"bound", dual_bound_cost(cc, L, R)}};
  json mapping = {{"certificate", to_json(mc)},
                  {"feasibility", to_json(check_feasibility(h, mc))},
                  {"bound", dual_bound_mapping(mc, L, R)}};
  switch (spec.kind) {
    case SequenceKind::fista:
      cost["closed_form"] = {{"formula", "fpgm_cost"}, {"value", bound::fpgm_cost(N, L, R)}};
      break;
    case SequenceKind::linear:
      cost["closed_form"] = {{"formula", "fpgm_a_cost"}, {"value", bound::fpgm_a_cost(N, spec.a, L, R)}};
      mapping["closed_form"] = {{"formula", "fpgm_a_mapping"},
                                {"value", bound::fpgm_a_mapping(N, spec.a, L, R)}};
      break;
    case SequenceKind::opg:
      cost["closed_form"] = {{"formula", "fpgm_opg_cost"}, {"value", bound::fpgm_opg_cost(N, L, R)}};
      if (N >= 3) {
        mapping["closed_form"] = {{"formula", "fpgm_opg_mapping"}, {"value", bound::fpgm_opg_mapping(N, L, R)}};
      }
      break;
    case SequenceKind::custom: break;
  }
  out.report["cost"] = std::move(cost);
  out.report["mapping"] = std::move(mapping);
  return out;
}

inline json cmd_quadopt(std::size_t N, MRounding rounding = MRounding::floor,
                        const QuadOptions& opt = {}) {
  if (N < 2) throw UsageError("quadopt: N must be >= 2 (nothing to optimize at N = 1)");
  const QuadResult best = maximize_quad(N, opt);
  const TSequence opg = opg_t_sequence(N, rounding);
  const double opg_value = quad_objective(opg);
  const double gap = best.objective - opg_value;
  return {{"N", N},
          {"optimizer", {{"objective", best.objective}, {"t", best.t.t_values()},
                         {"converged", best.converged}, {"sweeps", best.sweeps}}},
          {"opg", {{"label", opg.label()}, {"objective", opg_value}, {"t", opg.t_values()}}},
          {"gap", gap},
          {"relative_gap", gap / std::abs(opg_value)}};
}

}  // namespace proxpep
