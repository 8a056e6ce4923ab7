#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "proxpep/algorithms.hpp"
#include "proxpep/pep.hpp"
#include "proxpep/schedules.hpp"

namespace proxpep {

// Closed-form worst-case bounds. Each throws std::domain_error below its
// validity threshold in N.

namespace bound {

inline void require_n(std::size_t N, std::size_t min_n, const char* formula) {
  if (N < min_n) {
    throw std::domain_error(std::string(formula) + ": requires N >= " + std::to_string(min_n));
  }
}

/// PGM cost: L R^2 / (2N).
inline double pgm_cost(std::size_t N, double L, double R) {
  require_n(N, 1, "pgm_cost");
  return L * R * R / (2.0 * N);
}

/// PGM mapping norm: 2 L R / sqrt((N-1)(N+2)).
inline double pgm_mapping(std::size_t N, double L, double R) {
  require_n(N, 2, "pgm_mapping");
  const double n = static_cast<double>(N);
  return 2.0 * L * R / std::sqrt((n - 1.0) * (n + 2.0));
}

/// FPGM cost: 2 L R^2 / (N+1)^2.
inline double fpgm_cost(std::size_t N, double L, double R) {
  require_n(N, 1, "fpgm_cost");
  const double n = static_cast<double>(N);
  return 2.0 * L * R * R / ((n + 1.0) * (n + 1.0));
}

/// FPGM-m cost after the momentum phase: 2 L R^2 / (m+1)^2; PGM descent keeps it valid at x_N.
inline double fpgm_m_cost(std::size_t m, double L, double R) {
  require_n(m, 1, "fpgm_m_cost");
  const double mm = static_cast<double>(m);
  return 2.0 * L * R * R / ((mm + 1.0) * (mm + 1.0));
}

/// FPGM-m mapping norm: 2 L R / ((m+1) sqrt(N-m+1)).
inline double fpgm_m_mapping(std::size_t N, std::size_t m, double L, double R) {
  require_n(N, 1, "fpgm_m_mapping");
  if (m < 1 || m > N) throw std::domain_error("fpgm_m_mapping: m must lie in [1, N]");
  const double mm = static_cast<double>(m);
  return 2.0 * L * R / ((mm + 1.0) * std::sqrt(static_cast<double>(N - m + 1)));
}

/// FPGM-sigma cost: 2 L R^2 / (sigma^2 N^2).
inline double fpgm_sigma_cost(std::size_t N, double sigma, double L, double R) {
  require_n(N, 1, "fpgm_sigma_cost");
  const double n = static_cast<double>(N);
  return 2.0 * L * R * R / (sigma * sigma * n * n);
}

/// FPGM-sigma sigma-mapping norm with the 2 sqrt(3)/sigma^2 constant (advisory).
inline double fpgm_sigma_mapping(std::size_t N, double sigma, double L, double R) {
  require_n(N, 1, "fpgm_sigma_mapping");
  const double n = static_cast<double>(N);
  return 2.0 * std::sqrt(3.0) / (sigma * sigma) * std::sqrt((1.0 + sigma) / (1.0 - sigma)) * L *
         R / std::pow(n, 1.5);
}

/// GFPGM cost: L R^2 / (2 T_{N-1}).
inline double gfpgm_cost(const TSequence& t, double L, double R) {
  return L * R * R / (2.0 * t.T(t.horizon() - 1));
}

/// GFPGM smallest mapping norm over {y_0..y_{N-1}, x_N}:
/// L R / sqrt(sum (T_k - t_k^2) + T_{N-1}).
inline double gfpgm_mapping(const TSequence& t, double L, double R) {
  return L * R / std::sqrt(quad_objective(t));
}

/// Loose final-iterate mapping bound for GFPGM: L R / sqrt(T_{N-1}).
inline double gfpgm_final_mapping(const TSequence& t, double L, double R) {
  return L * R / std::sqrt(t.T(t.horizon() - 1));
}

/// FPGM-a cost: a L R^2 / (N (N + 2a - 1)).
inline double fpgm_a_cost(std::size_t N, double a, double L, double R) {
  require_n(N, 1, "fpgm_a_cost");
  const double n = static_cast<double>(N);
  return a * L * R * R / (n * (n + 2.0 * a - 1.0));
}

/// FPGM-a mapping: a sqrt(6) L R / sqrt(N ((a-2)N^2 + 3(a^2-a+1)N + 3a^2+2a-1)).
inline double fpgm_a_mapping(std::size_t N, double a, double L, double R) {
  require_n(N, 1, "fpgm_a_mapping");
  const double n = static_cast<double>(N);
  const double inner = (a - 2.0) * n * n + 3.0 * (a * a - a + 1.0) * n + (3.0 * a * a + 2.0 * a - 1.0);
  return a * std::sqrt(6.0) * L * R / std::sqrt(n * inner);
}

/// FPGM-OPG cost: 4 L R^2 / (N (N+4)).
inline double fpgm_opg_cost(std::size_t N, double L, double R) {
  require_n(N, 1, "fpgm_opg_cost");
  const double n = static_cast<double>(N);
  return 4.0 * L * R * R / (n * (n + 4.0));
}

/// FPGM-OPG mapping: 2 sqrt(6) L R / (N sqrt(N-2)).
inline double fpgm_opg_mapping(std::size_t N, double L, double R) {
  require_n(N, 3, "fpgm_opg_mapping");
  const double n = static_cast<double>(N);
  return 2.0 * std::sqrt(6.0) * L * R / (n * std::sqrt(n - 2.0));
}

}  // namespace bound

enum class AlgorithmKind { pgm, fpgm, fpgm_m, fpgm_sigma, fpgm_opg, fpgm_a, gfpgm };

/// How FPGM-m picks m when no explicit value is given.
enum class MChoice { explicit_value, two_thirds, ceil_third };

/// t-sequence recipe that can be instantiated for any horizon.
struct TSequenceSpec {
  SequenceKind kind = SequenceKind::fista;
  double a = 4.0;
  MRounding rounding = MRounding::floor;
  std::vector<double> values;  // custom only

  TSequence make(std::size_t N) const {
    switch (kind) {
      case SequenceKind::fista: return fista_t_sequence(N);
      case SequenceKind::linear: return linear_t_sequence(N, a);
      case SequenceKind::opg: return opg_t_sequence(N, rounding);
      case SequenceKind::custom:
        if (values.size() != N) {
          throw std::invalid_argument("TSequenceSpec: custom sequence has horizon " +
                                      std::to_string(values.size()) + ", requested " +
                                      std::to_string(N));
        }
        return custom_t_sequence(values);
    }
    throw std::invalid_argument("TSequenceSpec: unknown kind");
  }
};

struct AlgorithmSpec {
  AlgorithmKind kind = AlgorithmKind::pgm;
  MChoice m_choice = MChoice::two_thirds;
  std::size_t m = 1;
  double sigma = 0.78;
  SigmaConstant sigma_constant = SigmaConstant::L_over_sigma;
  double a = 4.0;
  MRounding rounding = MRounding::floor;
  TSequenceSpec t;  // gfpgm only

  std::size_t m_for(std::size_t N) const {
    std::size_t v = m;
    if (m_choice == MChoice::two_thirds) v = (2 * N) / 3;
    if (m_choice == MChoice::ceil_third) v = (N + 2) / 3;
    return std::clamp<std::size_t>(v, 1, std::max<std::size_t>(N, 1));
  }

  std::string label() const {
    switch (kind) {
      case AlgorithmKind::pgm: return "PGM";
      case AlgorithmKind::fpgm: return "FPGM";
      case AlgorithmKind::fpgm_m:
        switch (m_choice) {
          case MChoice::two_thirds: return "FPGM-m(m=floor(2N/3))";
          case MChoice::ceil_third: return "FPGM-m(m=ceil(N/3))";
          default: return "FPGM-m(m=" + std::to_string(m) + ")";
        }
      case AlgorithmKind::fpgm_sigma: return "FPGM-sigma(" + short_number(sigma) + ")";
      case AlgorithmKind::fpgm_opg: return "FPGM-OPG";
      case AlgorithmKind::fpgm_a: return "FPGM-a(" + short_number(a) + ")";
      case AlgorithmKind::gfpgm: return "GFPGM[" + to_string(t.kind) + "]";
    }
    return "unknown";
  }

  /// File-name friendly label.
  std::string slug() const {
    std::string s;
    for (char c : label()) {
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '.') s += c;
      else if (!s.empty() && s.back() != '_') s += '_';
    }
    while (!s.empty() && s.back() == '_') s.pop_back();
    return s;
  }

 private:
  static std::string short_number(double v) {
    std::string s = std::to_string(v);
    s.erase(s.find_last_not_of('0') + 1);
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
  }
};

template <CompositeObjective P>
RunTrace run_algorithm(const P& p, const AlgorithmSpec& spec, const Vector& x0, std::size_t N) {
  RunTrace tr;
  switch (spec.kind) {
    case AlgorithmKind::pgm: tr = run_pgm(p, x0, N); break;
    case AlgorithmKind::fpgm: tr = run_fpgm(p, x0, N); break;
    case AlgorithmKind::fpgm_m: tr = run_fpgm_m(p, x0, spec.m_for(N), N); break;
    case AlgorithmKind::fpgm_sigma:
      tr = run_fpgm_sigma(p, x0, spec.sigma, N, spec.sigma_constant);
      break;
    case AlgorithmKind::fpgm_opg: tr = run_fpgm_opg(p, x0, N, spec.rounding); break;
    case AlgorithmKind::fpgm_a: tr = run_fpgm_a(p, x0, spec.a, N); break;
    case AlgorithmKind::gfpgm: tr = run_gfpgm(p, spec.t.make(N), x0); break;
  }
  tr.label = spec.label();
  return tr;
}

struct Asymptotic {
  double rate = 0.0;      // exponent of N
  double constant = 0.0;  // bound(N) * N^rate at N = 1e6, L = R = 1
};

struct BoundValue {
  double value = 0.0;
  std::string formula;
  bool advisory = false;
  std::optional<Asymptotic> asymptotic;
};

struct BoundReport {
  std::string algorithm;
  std::size_t N = 0;
  double L = 0.0;
  double R = 0.0;
  std::optional<BoundValue> cost;
  /// Smallest mapping norm over {y_0..y_{N-1}, x_N}.
  std::optional<BoundValue> mapping;
  /// Mapping norm at x_N alone, where a separate bound exists.
  std::optional<BoundValue> final_mapping;
};

inline constexpr std::size_t kAsymptoticN = 1'000'000;

namespace detail {

struct FormulaSet {
  std::optional<BoundValue> cost;
  std::optional<BoundValue> mapping;
  std::optional<BoundValue> final_mapping;
};

inline FormulaSet evaluate_formulas(const AlgorithmSpec& spec, std::size_t N, double L, double R) {
  FormulaSet out;
  auto gfpgm_tail = [&](const TSequence& t) {
    out.final_mapping = BoundValue{bound::gfpgm_final_mapping(t, L, R), "gfpgm_final_mapping"};
  };
  switch (spec.kind) {
    case AlgorithmKind::pgm:
      out.cost = BoundValue{bound::pgm_cost(N, L, R), "pgm_cost"};
      if (N >= 2) {
        out.mapping = BoundValue{bound::pgm_mapping(N, L, R), "pgm_mapping"};
        out.final_mapping = out.mapping;
      }
      break;
    case AlgorithmKind::fpgm: {
      out.cost = BoundValue{bound::fpgm_cost(N, L, R), "fpgm_cost"};
      const TSequence t = fista_t_sequence(N);
      out.mapping = BoundValue{bound::gfpgm_mapping(t, L, R), "gfpgm_mapping"};
      gfpgm_tail(t);
      break;
    }
    case AlgorithmKind::fpgm_m: {
      const std::size_t m = spec.m_for(N);
      out.cost = BoundValue{bound::fpgm_m_cost(m, L, R), "fpgm_m_cost"};
      out.mapping = BoundValue{bound::fpgm_m_mapping(N, m, L, R), "fpgm_m_mapping"};
      out.final_mapping = out.mapping;
      break;
    }
    case AlgorithmKind::fpgm_sigma:
      out.cost = BoundValue{bound::fpgm_sigma_cost(N, spec.sigma, L, R), "fpgm_sigma_cost", true};
      out.mapping = BoundValue{bound::fpgm_sigma_mapping(N, spec.sigma, L, R), "fpgm_sigma_mapping", true};
      break;
    case AlgorithmKind::fpgm_opg:
      out.cost = BoundValue{bound::fpgm_opg_cost(N, L, R), "fpgm_opg_cost"};
      if (N >= 3) out.mapping = BoundValue{bound::fpgm_opg_mapping(N, L, R), "fpgm_opg_mapping"};
      gfpgm_tail(opg_t_sequence(N, spec.rounding));
      break;
    case AlgorithmKind::fpgm_a:
      out.cost = BoundValue{bound::fpgm_a_cost(N, spec.a, L, R), "fpgm_a_cost"};
      out.mapping = BoundValue{bound::fpgm_a_mapping(N, spec.a, L, R), "fpgm_a_mapping"};
      gfpgm_tail(linear_t_sequence(N, spec.a));
      break;
    case AlgorithmKind::gfpgm: {
      const TSequence t = spec.t.make(N);
      out.cost = BoundValue{bound::gfpgm_cost(t, L, R), "gfpgm_cost"};
      out.mapping = BoundValue{bound::gfpgm_mapping(t, L, R), "gfpgm_mapping"};
      gfpgm_tail(t);
      break;
    }
  }
  return out;
}

inline std::optional<Asymptotic> asymptotic_of(const std::optional<BoundValue>& v, double rate) {
  if (!v) return std::nullopt;
  return Asymptotic{rate, v->value * std::pow(static_cast<double>(kAsymptoticN), rate)};
}

}  // namespace detail

/// Every closed-form bound that applies to `spec` at horizon N, with the
/// asymptotic constants bound * N^rate evaluated at N = 1e6 (L = R = 1).
inline BoundReport analytic_bounds(const AlgorithmSpec& spec, std::size_t N, double L, double R) {
  if (N == 0) throw std::domain_error("analytic_bounds: N must be >= 1");
  if (!(L > 0.0) || !(R >= 0.0)) throw std::domain_error("analytic_bounds: need L > 0, R >= 0");
  BoundReport report;
  report.algorithm = spec.label();
  report.N = N;
  report.L = L;
  report.R = R;
  const detail::FormulaSet now = detail::evaluate_formulas(spec, N, L, R);
  report.cost = now.cost;
  report.mapping = now.mapping;
  report.final_mapping = now.final_mapping;

  if (spec.kind == AlgorithmKind::gfpgm) return report;  // no closed-form rate for custom t
  const detail::FormulaSet far = detail::evaluate_formulas(spec, kAsymptoticN, 1.0, 1.0);
  double cost_rate = 2.0;
  double mapping_rate = 1.5;
  switch (spec.kind) {
    case AlgorithmKind::pgm: cost_rate = 1.0; mapping_rate = 1.0; break;
    case AlgorithmKind::fpgm: mapping_rate = 1.0; break;
    case AlgorithmKind::fpgm_a: if (spec.a == 2.0) mapping_rate = 1.0; break;
    default: break;
  }
  if (report.cost) report.cost->asymptotic = detail::asymptotic_of(far.cost, cost_rate);
  if (report.mapping) report.mapping->asymptotic = detail::asymptotic_of(far.mapping, mapping_rate);
  return report;
}

}  // namespace proxpep
