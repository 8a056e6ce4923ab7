#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "proxpep/problems.hpp"
#include "proxpep/proxgrad.hpp"
#include "proxpep/schedules.hpp"

namespace proxpep {

/// Starting point plus the distance bound R >= ||x0 - x*|| used by the bounds.
struct InitialCondition {
  Vector x0;
  double R = 0.0;
};

/// R = ||x0 - x*|| from the problem's reference solution.
inline InitialCondition make_initial_condition(const CompositeProblem& p, Vector x0) {
  require_dimension(x0, p.dimension(), "make_initial_condition");
  if (!p.reference()) {
    throw std::invalid_argument("make_initial_condition: problem has no reference solution");
  }
  const double R = (x0 - p.reference()->x).norm();
  if (!(R > 0.0)) throw std::invalid_argument("make_initial_condition: x0 coincides with x*");
  return InitialCondition{std::move(x0), R};
}

/// With an explicit R, which must cover the true distance when x* is known.
inline InitialCondition make_initial_condition(const CompositeProblem& p, Vector x0, double R) {
  require_dimension(x0, p.dimension(), "make_initial_condition");
  if (!(R > 0.0)) throw std::invalid_argument("make_initial_condition: R must be positive");
  if (p.reference() && (x0 - p.reference()->x).norm() > R + 1e-12) {
    throw std::invalid_argument("make_initial_condition: R is smaller than ||x0 - x*||");
  }
  return InitialCondition{std::move(x0), R};
}

/// Iterates and mapping norms of one run.
///
/// Mapping norms for y_i are taken from the update itself, c * ||y_i - x_{i+1}||,
/// where c is the prox constant (L except for FPGM-sigma).
struct RunTrace {
  std::string label;
  std::map<std::string, double> parameters;
  double prox_constant = 0.0;
  std::vector<Vector> x;  // x_0..x_N
  std::vector<Vector> y;  // y_0..y_{N-1}
  std::vector<Vector> z;  // z_1..z_N, GFPGM' only
  std::vector<double> F;  // F(x_i)
  std::vector<double> map_norm_y;  // i < N
  std::vector<double> map_norm_x;  // i <= N, x_0 included for monotonicity checks

  std::size_t iterations() const { return y.size(); }

  double map_norm_xN() const { return map_norm_x.back(); }

  /// min over {y_0..y_{N-1}, x_N}.
  double omega_min() const {
    double best = map_norm_x.back();
    for (double v : map_norm_y) best = std::min(best, v);
    return best;
  }
};

namespace detail {

template <CompositeObjective P>
RunTrace begin_trace(const P& p, const Vector& x0, std::size_t N, double c, std::string label) {
  require_dimension(x0, p.dimension(), "run");
  if (N == 0) throw std::invalid_argument("run: N must be >= 1");
  RunTrace tr;
  tr.label = std::move(label);
  tr.prox_constant = c;
  tr.x.reserve(N + 1);
  tr.y.reserve(N);
  tr.x.push_back(x0);
  tr.y.push_back(x0);
  return tr;
}

/// x_{i+1} = prox step from y_i; records the mapping norm at y_i.
template <CompositeObjective P>
const Vector& advance(RunTrace& tr, const P& p) {
  const Vector& y = tr.y.back();
  Vector next = prox_grad_step(p, y, tr.prox_constant);
  tr.map_norm_y.push_back(tr.prox_constant * (y - next).norm());
  tr.x.push_back(std::move(next));
  return tr.x.back();
}

template <CompositeObjective P>
void finish_trace(RunTrace& tr, const P& p) {
  tr.F.reserve(tr.x.size());
  tr.map_norm_x.reserve(tr.x.size());
  for (const Vector& xi : tr.x) {
    tr.F.push_back(eval_F(p, xi));
    tr.map_norm_x.push_back(tr.prox_constant * (xi - prox_grad_step(p, xi, tr.prox_constant)).norm());
  }
}

}  // namespace detail

/// Algorithm class FO: y_{i+1} = y_i + sum_{k<=i} h_{i+1,k} (x_{k+1} - y_k).
template <CompositeObjective P>
RunTrace run_fo(const P& p, const StepSchedule& h, const Vector& x0, std::size_t N) {
  if (h.horizon() < N) throw std::invalid_argument("run_fo: schedule horizon is shorter than N");
  RunTrace tr = detail::begin_trace(p, x0, N, p.lipschitz(), "fo");
  tr.parameters["N"] = static_cast<double>(N);
  std::vector<Vector> steps;  // x_{k+1} - y_k
  steps.reserve(N);
  for (std::size_t i = 0; i < N; ++i) {
    const Vector& x_next = detail::advance(tr, p);
    steps.push_back(x_next - tr.y[i]);
    if (i + 1 == N) break;
    Vector y_next = tr.y[i];
    const auto& row = h.row(i + 1);
    for (std::size_t k = 0; k <= i; ++k) y_next += row[k] * steps[k];
    tr.y.push_back(std::move(y_next));
  }
  detail::finish_trace(tr, p);
  return tr;
}

template <CompositeObjective P>
RunTrace run_pgm(const P& p, const Vector& x0, std::size_t N) {
  RunTrace tr = detail::begin_trace(p, x0, N, p.lipschitz(), "PGM");
  tr.parameters["N"] = static_cast<double>(N);
  for (std::size_t i = 0; i < N; ++i) {
    const Vector& x_next = detail::advance(tr, p);
    if (i + 1 < N) tr.y.push_back(x_next);
  }
  detail::finish_trace(tr, p);
  return tr;
}

/// Generalized FPGM driven by any valid t-sequence; N = t.horizon().
template <CompositeObjective P>
RunTrace run_gfpgm(const P& p, const TSequence& t, const Vector& x0) {
  require_valid(t, "run_gfpgm");
  const std::size_t N = t.horizon();
  RunTrace tr = detail::begin_trace(p, x0, N, p.lipschitz(), "GFPGM[" + t.label() + "]");
  tr.parameters["N"] = static_cast<double>(N);
  for (std::size_t i = 0; i < N; ++i) {
    const Vector& x_next = detail::advance(tr, p);
    if (i + 1 == N) break;
    const double ti = t.t(i);
    const double Ti = t.T(i);
    const double ratio = t.t(i + 1) / (ti * t.T(i + 1));
    const double c_prev = (Ti - ti) * ratio;
    const double c_y = (ti * ti - Ti) * ratio;
    tr.y.push_back(x_next + c_prev * (x_next - tr.x[i]) + c_y * (x_next - tr.y[i]));
  }
  detail::finish_trace(tr, p);
  return tr;
}

/// GFPGM in the z-accumulation form.
template <CompositeObjective P>
RunTrace run_gfpgm_prime(const P& p, const TSequence& t, const Vector& x0) {
  require_valid(t, "run_gfpgm_prime");
  const std::size_t N = t.horizon();
  const double L = p.lipschitz();
  RunTrace tr = detail::begin_trace(p, x0, N, L, "GFPGM'[" + t.label() + "]");
  tr.parameters["N"] = static_cast<double>(N);
  tr.z.reserve(N);
  Vector z = x0;
  for (std::size_t i = 0; i < N; ++i) {
    const Vector& x_next = detail::advance(tr, p);
    const Vector mapping = L * (tr.y[i] - x_next);
    z -= (t.t(i) / L) * mapping;
    tr.z.push_back(z);
    if (i + 1 == N) break;
    const double w = t.t(i + 1) / t.T(i + 1);
    tr.y.push_back((1.0 - w) * x_next + w * z);
  }
  detail::finish_trace(tr, p);
  return tr;
}

namespace detail {

/// FISTA momentum for iterations i < momentum_iters, then y_{i+1} = x_{i+1}.
template <CompositeObjective P>
RunTrace run_fista_like(const P& p, const Vector& x0, std::size_t N, std::size_t momentum_iters,
                        double c, std::string label) {
  RunTrace tr = begin_trace(p, x0, N, c, std::move(label));
  tr.parameters["N"] = static_cast<double>(N);
  double t = 1.0;
  for (std::size_t i = 0; i < N; ++i) {
    const Vector& x_next = advance(tr, p);
    if (i + 1 == N) break;
    if (i < momentum_iters) {
      const double t_next = fista_next(t);
      tr.y.push_back(x_next + ((t - 1.0) / t_next) * (x_next - tr.x[i]));
      t = t_next;
    } else {
      tr.y.push_back(x_next);
    }
  }
  finish_trace(tr, p);
  return tr;
}

}  // namespace detail

template <CompositeObjective P>
RunTrace run_fpgm(const P& p, const Vector& x0, std::size_t N) {
  return detail::run_fista_like(p, x0, N, N, p.lipschitz(), "FPGM");
}

template <CompositeObjective P>
RunTrace run_fpgm_m(const P& p, const Vector& x0, std::size_t m, std::size_t N) {
  if (m < 1 || m > N) throw std::invalid_argument("run_fpgm_m: m must lie in [1, N]");
  RunTrace tr = detail::run_fista_like(p, x0, N, m, p.lipschitz(), "FPGM-m");
  tr.parameters["m"] = static_cast<double>(m);
  return tr;
}

/// Which prox constant FPGM-sigma uses in place of L.
enum class SigmaConstant { L_over_sigma, sigma_L };

inline std::string to_string(SigmaConstant s) {
  return s == SigmaConstant::L_over_sigma ? "L_over_sigma" : "sigma_L";
}

template <CompositeObjective P>
RunTrace run_fpgm_sigma(const P& p, const Vector& x0, double sigma, std::size_t N,
                        SigmaConstant constant = SigmaConstant::L_over_sigma) {
  if (!(sigma > 0.0 && sigma < 1.0)) {
    throw std::invalid_argument("run_fpgm_sigma: sigma must lie in (0, 1)");
  }
  const double L = p.lipschitz();
  const double c = constant == SigmaConstant::L_over_sigma ? L / sigma : sigma * L;
  RunTrace tr = detail::run_fista_like(p, x0, N, N, c, "FPGM-sigma");
  tr.parameters["sigma"] = sigma;
  return tr;
}

/// GFPGM with the OPG sequence. y_N is never formed.
template <CompositeObjective P>
RunTrace run_fpgm_opg(const P& p, const Vector& x0, std::size_t N,
                      MRounding rounding = MRounding::floor) {
  RunTrace tr = run_gfpgm(p, opg_t_sequence(N, rounding), x0);
  tr.label = "FPGM-OPG";
  tr.parameters["m"] = static_cast<double>(opg_split(N, rounding));
  return tr;
}

/// GFPGM with t_i = (i + a)/a.
template <CompositeObjective P>
RunTrace run_fpgm_a(const P& p, const Vector& x0, double a, std::size_t N) {
  RunTrace tr = run_gfpgm(p, linear_t_sequence(N, a), x0);
  tr.label = "FPGM-a";
  tr.parameters["a"] = a;
  return tr;
}

}  // namespace proxpep
