#pragma once

#include <nlohmann/json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "proxpep/algorithms.hpp"
#include "proxpep/bounds.hpp"
#include "proxpep/pep.hpp"
#include "proxpep/problems.hpp"
#include "proxpep/schedules.hpp"

namespace proxpep {

using json = nlohmann::json;

// JSON layouts
//
// problem:  {"kind": "quadratic_l1", "Q": [[..]], "b": [..], "lam": x, "L": x,
//            "x_star"?: [..], "F_star"?: x}
//           {"kind": "box_ls", "A": [[..]], "b": [..], "box": {"lo": [..], "hi": [..]},
//            "L": x, "x_star"?: [..], "F_star"?: x}
//           Matrices are row-major arrays of rows; an infinite box side is null.
// t-seq:    {"label": "...", "kind": "...", "t": [..], "T": [..]}
// schedule: {"N": n, "h": [[h_{1,0}], [h_{2,0}, h_{2,1}], ...]}

namespace io_detail {

inline json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

inline json matrix_to_json(const Matrix& m) {
  json out = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(std::move(row));
  }
  return out;
}

inline Vector vector_from_json(const json& j, const char* what, double null_value = 0.0) {
  if (!j.is_array()) throw std::invalid_argument(std::string(what) + ": expected an array");
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Index>(i)) = j[i].is_null() ? null_value : j[i].get<double>();
  }
  return v;
}

inline Matrix matrix_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.empty()) {
    throw std::invalid_argument(std::string(what) + ": expected a non-empty array of rows");
  }
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].size();
  Matrix m(static_cast<Index>(rows), static_cast<Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) {
      throw std::invalid_argument(std::string(what) + ": ragged matrix");
    }
    for (std::size_t c = 0; c < cols; ++c) m(static_cast<Index>(r), static_cast<Index>(c)) = j[r][c].get<double>();
  }
  return m;
}

inline json bound_side(const Vector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) {
    if (std::isinf(v(i))) out.push_back(nullptr);
    else out.push_back(v(i));
  }
  return out;
}

inline json optional_bound(const std::optional<BoundValue>& b) {
  if (!b) return nullptr;
  json out = {{"value", b->value}, {"formula", b->formula}, {"advisory", b->advisory}};
  if (b->asymptotic) {
    out["asymptotic"] = {{"rate", b->asymptotic->rate}, {"constant", b->asymptotic->constant}};
  }
  return out;
}

}  // namespace io_detail

inline json to_json(const CompositeProblem& p) {
  using namespace io_detail;
  json out;
  if (const auto* q = std::get_if<QuadraticL1>(&p.data())) {
    out = {{"kind", "quadratic_l1"}, {"Q", matrix_to_json(q->Q)}, {"b", vector_to_json(q->b)},
           {"lam", q->lam}};
  } else {
    const auto& bx = std::get<BoxLeastSquares>(p.data());
    out = {{"kind", "box_ls"},
           {"A", matrix_to_json(bx.A)},
           {"b", vector_to_json(bx.b)},
           {"box", {{"lo", bound_side(bx.lo)}, {"hi", bound_side(bx.hi)}}}};
  }
  out["L"] = p.lipschitz();
  if (p.reference()) {
    out["x_star"] = vector_to_json(p.reference()->x);
    out["F_star"] = p.reference()->F;
  }
  return out;
}

/// Rebuilds the problem; a stored L is kept only if it is at least the computed one.
inline CompositeProblem problem_from_json(const json& j) {
  using namespace io_detail;
  const std::string kind = j.at("kind").get<std::string>();
  std::optional<CompositeProblem> p;
  if (kind == "quadratic_l1") {
    p = make_quadratic_l1(matrix_from_json(j.at("Q"), "Q"), vector_from_json(j.at("b"), "b"),
                          j.at("lam").get<double>());
  } else if (kind == "box_ls") {
    const json& box = j.at("box");
    p = make_box_constrained_ls(matrix_from_json(j.at("A"), "A"), vector_from_json(j.at("b"), "b"),
                                vector_from_json(box.at("lo"), "box.lo", -kInfinity),
                                vector_from_json(box.at("hi"), "box.hi", kInfinity));
  } else {
    throw std::invalid_argument("problem_from_json: unknown kind '" + kind + "'");
  }
  if (j.contains("L")) {
    const double L = j.at("L").get<double>();
    if (L < p->lipschitz() * (1.0 - 1e-12)) {
      throw std::invalid_argument("problem_from_json: stored L is below the Lipschitz constant");
    }
    p = p->with_lipschitz(L);
  }
  if (j.contains("x_star")) {
    ReferenceSolution ref;
    ref.x = vector_from_json(j.at("x_star"), "x_star");
    ref.F = j.contains("F_star") ? j.at("F_star").get<double>() : eval_F(*p, ref.x);
    p = p->with_reference(std::move(ref));
  }
  return *p;
}

inline json to_json(const TSequence& t) {
  return {{"label", t.label()}, {"kind", to_string(t.kind())}, {"t", t.t_values()}, {"T", t.T_values()}};
}

inline json to_json(const StepSchedule& h) {
  json rows = json::array();
  for (std::size_t r = 1; r < h.horizon(); ++r) rows.push_back(h.row(r));
  return {{"N", h.horizon()}, {"h", rows}};
}

inline json to_json(const TValidation& v) {
  json out = {{"valid", v.valid()}, {"violations", json::array()}};
  for (const auto& viol : v.violations) {
    out["violations"].push_back({{"index", viol.index}, {"kind", to_string(viol.kind)}, {"value", viol.value}});
  }
  return out;
}

inline json to_json(const FeasibilityReport& r) {
  return {{"min_eigenvalue", r.min_eigenvalue},
          {"scale", r.scale},
          {"membership_residual", r.membership_residual},
          {"most_negative_multiplier", r.most_negative_multiplier},
          {"feasible", r.feasible}};
}

inline json to_json(const CostCertificate& c) {
  return {{"kind", "cost"}, {"N", c.N}, {"lambda", c.lambda}, {"tau", c.tau}, {"gamma", c.gamma}};
}

inline json to_json(const MappingCertificate& c) {
  return {{"kind", "mapping"}, {"N", c.N},     {"lambda", c.lambda}, {"tau", c.tau},
          {"eta", c.eta},      {"beta", c.beta}, {"gamma", c.gamma}};
}

inline json to_json(const BoundReport& b) {
  using namespace io_detail;
  return {{"algorithm", b.algorithm},
          {"N", b.N},
          {"L", b.L},
          {"R", b.R},
          {"cost", optional_bound(b.cost)},
          {"mapping", optional_bound(b.mapping)},
          {"final_mapping", optional_bound(b.final_mapping)}};
}

inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

/// CSV with columns iter, F_gap, map_norm_y, map_norm_xN, omega_min.
///
/// Row i < N carries ||mapping(y_i)|| and the running minimum over y_0..y_i;
/// row N carries ||mapping(x_N)|| and the full minimum over {y_0..y_{N-1}, x_N}.
inline std::string trace_csv(const RunTrace& tr, double F_star) {
  std::ostringstream os;
  os << "iter,F_gap,map_norm_y,map_norm_xN,omega_min\n";
  const std::size_t N = tr.iterations();
  double running = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i <= N; ++i) {
    os << i << ',' << format_number(tr.F[i] - F_star) << ',';
    if (i < N) {
      running = std::min(running, tr.map_norm_y[i]);
      os << format_number(tr.map_norm_y[i]) << ",," << format_number(running) << '\n';
    } else {
      running = std::min(running, tr.map_norm_xN());
      os << ',' << format_number(tr.map_norm_xN()) << ',' << format_number(running) << '\n';
    }
  }
  return os.str();
}

/// Writes through a temporary sibling and renames it into place.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << content;
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return json::parse(in);
}

}  // namespace proxpep
