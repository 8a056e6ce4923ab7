#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "proxpep/pep.hpp"
#include "proxpep/rng.hpp"
#include "proxpep/schedules.hpp"

namespace proxpep {

struct QuadOptions {
  std::size_t restarts = 20;
  std::size_t max_sweeps = 10'000;
  double improvement_tol = 1e-12;
  std::uint64_t seed = 0x5eed;
};

struct QuadResult {
  TSequence t;
  double objective = 0.0;
  bool converged = false;  // every restart stopped on the improvement threshold
  std::size_t sweeps = 0;  // total over restarts
};

namespace detail {

inline double quad_value(const std::vector<double>& t) {
  double T = 0.0;
  double acc = 0.0;
  for (double v : t) {
    T += v;
    acc += T - v * v;
  }
  return acc + T;
}

inline double largest_feasible(double T_prev) { return 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * T_prev)); }

/// One coordinate step on t_j: the objective is -t_j^2 + (N - j + 1) t_j + const,
/// maximized over [lo, hi] where hi keeps t_j^2 <= T_j and lo keeps every later
/// t_k^2 <= T_k.
inline void coordinate_step(std::vector<double>& t, std::size_t j) {
  const std::size_t N = t.size();
  double T_prev = 0.0;
  for (std::size_t k = 0; k < j; ++k) T_prev += t[k];
  const double hi = largest_feasible(T_prev);
  double lo = 1e-12;
  double T = T_prev + t[j];
  for (std::size_t k = j + 1; k < N; ++k) {
    T += t[k];
    lo = std::max(lo, t[j] - (T - t[k] * t[k]));
  }
  const double target = 0.5 * static_cast<double>(N - j + 1);
  if (lo <= hi) t[j] = std::clamp(target, lo, hi);
}

}  // namespace detail

/// Maximizes sum_{k<N}(T_k - t_k^2) + T_{N-1} over t_0 = 1, t_i > 0, t_i^2 <= T_i
/// by projected coordinate ascent with alternating sweep directions and
/// random feasible restarts. Restart 0 is the greedy sequential start.
inline QuadResult maximize_quad(std::size_t N, const QuadOptions& opt = {}) {
  if (N == 0) throw std::invalid_argument("maximize_quad: N must be >= 1");
  SplitMix64 rng(opt.seed);
  std::vector<double> best(N, 1.0);
  double best_value = -std::numeric_limits<double>::infinity();
  bool all_converged = true;
  std::size_t total_sweeps = 0;
  const std::size_t restarts = std::max<std::size_t>(opt.restarts, 1);

  for (std::size_t r = 0; r < restarts; ++r) {
    std::vector<double> t(N, 1.0);
    double T = 1.0;
    for (std::size_t j = 1; j < N; ++j) {
      const double hi = detail::largest_feasible(T);
      const double target = 0.5 * static_cast<double>(N - j + 1);
      t[j] = r == 0 ? std::min(target, hi) : std::max(1e-6, rng.uniform()) * hi;
      T += t[j];
    }
    double value = detail::quad_value(t);
    bool converged = N == 1;
    for (std::size_t sweep = 0; sweep < opt.max_sweeps && N > 1; ++sweep) {
      ++total_sweeps;
      if (sweep % 2 == 0) {
        for (std::size_t j = 1; j < N; ++j) detail::coordinate_step(t, j);
      } else {
        for (std::size_t j = N - 1; j >= 1; --j) detail::coordinate_step(t, j);
      }
      const double next = detail::quad_value(t);
      const double gain = next - value;
      value = next;
      if (gain <= opt.improvement_tol) {
        converged = true;
        break;
      }
    }
    all_converged = all_converged && converged;
    if (value > best_value) {
      best_value = value;
      best = t;
    }
  }
  return QuadResult{custom_t_sequence(best), best_value, all_converged, total_sweeps};
}

}  // namespace proxpep
