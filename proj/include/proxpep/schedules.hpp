#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "proxpep/types.hpp"

namespace proxpep {

enum class SequenceKind { fista, linear, opg, custom };

/// Where the FISTA-like head of the OPG sequence stops: m = floor(N/2) or ceil(N/2).
enum class MRounding { floor, ceil };

inline std::string to_string(SequenceKind k) {
  switch (k) {
    case SequenceKind::fista: return "fista";
    case SequenceKind::linear: return "linear";
    case SequenceKind::opg: return "opg";
    case SequenceKind::custom: return "custom";
  }
  return "custom";
}

inline std::string to_string(MRounding r) { return r == MRounding::floor ? "floor" : "ceil"; }

/// Momentum parameters t_0..t_{N-1} and their partial sums T_i.
class TSequence {
 public:
  TSequence(SequenceKind kind, std::vector<double> t, double parameter = 0.0)
      : kind_(kind), parameter_(parameter), t_(std::move(t)), T_(t_.size()) {
    if (t_.empty()) throw std::invalid_argument("TSequence: horizon must be >= 1");
    double acc = 0.0;
    for (std::size_t i = 0; i < t_.size(); ++i) {
      acc += t_[i];
      T_[i] = acc;
    }
  }

  std::size_t horizon() const { return t_.size(); }
  SequenceKind kind() const { return kind_; }
  /// a for linear sequences; 0 or 1 (floor/ceil) for opg; unused otherwise.
  double parameter() const { return parameter_; }
  double t(std::size_t i) const { return t_.at(i); }
  double T(std::size_t i) const { return T_.at(i); }
  const std::vector<double>& t_values() const { return t_; }
  const std::vector<double>& T_values() const { return T_; }

  std::string label() const {
    switch (kind_) {
      case SequenceKind::linear: return "linear(" + format_param(parameter_) + ")";
      case SequenceKind::opg:
        return "opg(" + std::to_string(horizon()) + "," +
               (parameter_ == 0.0 ? std::string("floor") : std::string("ceil")) + ")";
      default: return to_string(kind_);
    }
  }

 private:
  static std::string format_param(double v) {
    std::string s = std::to_string(v);
    s.erase(s.find_last_not_of('0') + 1);
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
  }

  SequenceKind kind_;
  double parameter_;
  std::vector<double> t_;
  std::vector<double> T_;
};

inline double fista_next(double t) { return 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t)); }

inline TSequence fista_t_sequence(std::size_t N) {
  if (N == 0) throw std::invalid_argument("fista_t_sequence: N must be >= 1");
  std::vector<double> t(N);
  t[0] = 1.0;
  for (std::size_t i = 1; i < N; ++i) t[i] = fista_next(t[i - 1]);
  return TSequence(SequenceKind::fista, std::move(t));
}

/// t_i = (i + a) / a, valid for a >= 2.
inline TSequence linear_t_sequence(std::size_t N, double a) {
  if (N == 0) throw std::invalid_argument("linear_t_sequence: N must be >= 1");
  if (!(a >= 2.0)) throw std::invalid_argument("linear_t_sequence: a must be >= 2");
  std::vector<double> t(N);
  for (std::size_t i = 0; i < N; ++i) t[i] = (static_cast<double>(i) + a) / a;
  return TSequence(SequenceKind::linear, std::move(t), a);
}

inline std::size_t opg_split(std::size_t N, MRounding rounding) {
  return rounding == MRounding::floor ? N / 2 : (N + 1) / 2;
}

/// FISTA recursion for i < m, then t_i = (N - i + 1)/2 for i = m..N-1.
inline TSequence opg_t_sequence(std::size_t N, MRounding rounding = MRounding::floor) {
  if (N == 0) throw std::invalid_argument("opg_t_sequence: N must be >= 1");
  const std::size_t m = opg_split(N, rounding);
  std::vector<double> t(N);
  t[0] = 1.0;
  for (std::size_t i = 1; i < N; ++i) {
    t[i] = i + 1 <= m ? fista_next(t[i - 1]) : 0.5 * static_cast<double>(N - i + 1);
  }
  return TSequence(SequenceKind::opg, std::move(t), rounding == MRounding::floor ? 0.0 : 1.0);
}

inline TSequence custom_t_sequence(std::vector<double> t) {
  return TSequence(SequenceKind::custom, std::move(t));
}

struct TViolation {
  enum class Kind { first_not_one, nonpositive, exceeds_partial_sum };
  std::size_t index = 0;
  Kind kind = Kind::nonpositive;
  double value = 0.0;  // t_i, or t_i^2 - T_i for exceeds_partial_sum
};

inline std::string to_string(TViolation::Kind k) {
  switch (k) {
    case TViolation::Kind::first_not_one: return "t0_not_one";
    case TViolation::Kind::nonpositive: return "nonpositive";
    case TViolation::Kind::exceeds_partial_sum: return "t_squared_exceeds_T";
  }
  return "unknown";
}

struct TValidation {
  std::vector<TViolation> violations;
  bool valid() const { return violations.empty(); }
};

/// Checks t_0 = 1, t_i > 0 and t_i^2 <= T_i (relative slack 1e-12).
inline TValidation validate_t_sequence(const TSequence& seq) {
  TValidation report;
  if (seq.t(0) != 1.0) {
    report.violations.push_back({0, TViolation::Kind::first_not_one, seq.t(0)});
  }
  for (std::size_t i = 0; i < seq.horizon(); ++i) {
    const double t = seq.t(i);
    const double T = seq.T(i);
    if (!(t > 0.0)) {
      report.violations.push_back({i, TViolation::Kind::nonpositive, t});
      continue;
    }
    if (t * t > T + 1e-12 * std::max(1.0, std::abs(T))) {
      report.violations.push_back({i, TViolation::Kind::exceeds_partial_sum, t * t - T});
    }
  }
  return report;
}

inline void require_valid(const TSequence& seq, const char* what) {
  const TValidation v = validate_t_sequence(seq);
  if (!v.valid()) {
    const auto& first = v.violations.front();
    throw std::invalid_argument(std::string(what) + ": invalid t-sequence at index " +
                                std::to_string(first.index) + " (" + to_string(first.kind) + ")");
  }
}

/// Lower-triangular step coefficients h_{r,k}, rows r = 1..N-1, columns k < r.
///
/// Row N would need t_N, and y_N is never formed by any runner, so a schedule
/// built from a length-N sequence drives exactly N iterations.
class StepSchedule {
 public:
  explicit StepSchedule(std::size_t horizon) : horizon_(horizon) {
    if (horizon == 0) throw std::invalid_argument("StepSchedule: horizon must be >= 1");
    rows_.resize(horizon - 1);
    for (std::size_t r = 1; r < horizon; ++r) rows_[r - 1].assign(r, 0.0);
  }

  /// Number of iterations this schedule can drive.
  std::size_t horizon() const { return horizon_; }

  double operator()(std::size_t row, std::size_t k) const { return rows_.at(row - 1).at(k); }
  double& operator()(std::size_t row, std::size_t k) { return rows_.at(row - 1).at(k); }

  const std::vector<double>& row(std::size_t r) const { return rows_.at(r - 1); }

 private:
  std::size_t horizon_;
  std::vector<std::vector<double>> rows_;
};

/// h_{i+1,k} = (t_{i+1}/T_{i+1})(t_k - sum_{j=k+1}^{i} h_{j,k}) for k < i and
/// h_{i+1,i} = 1 + (t_i - 1) t_{i+1} / T_{i+1}. Column sums are carried along.
inline StepSchedule step_coefficients(const TSequence& seq) {
  const std::size_t N = seq.horizon();
  StepSchedule h(N);
  std::vector<double> column_sum(N, 0.0);  // sum_{j=k+1}^{i} h_{j,k}
  for (std::size_t i = 0; i + 1 < N; ++i) {
    const double ratio = seq.t(i + 1) / seq.T(i + 1);
    for (std::size_t k = 0; k < i; ++k) h(i + 1, k) = ratio * (seq.t(k) - column_sum[k]);
    h(i + 1, i) = 1.0 + (seq.t(i) - 1.0) * ratio;
    for (std::size_t k = 0; k <= i; ++k) column_sum[k] += h(i + 1, k);
  }
  return h;
}

/// Same coefficients through the two-term recursion in i.
inline StepSchedule step_coefficients_recursive(const TSequence& seq) {
  const std::size_t N = seq.horizon();
  StepSchedule h(N);
  for (std::size_t i = 0; i + 1 < N; ++i) {
    const double ti = seq.t(i);
    const double next = seq.t(i + 1) / seq.T(i + 1);
    const double carry = (seq.T(i) - ti) * next / ti;
    if (i >= 1) {
      for (std::size_t k = 0; k + 2 <= i; ++k) h(i + 1, k) = carry * h(i, k);
      h(i + 1, i - 1) = carry * (h(i, i - 1) - 1.0);
    }
    h(i + 1, i) = 1.0 + (ti - 1.0) * next;
  }
  return h;
}

/// Identity-diagonal schedule (h_{i+1,i} = 1): class FO reduces to PGM.
inline StepSchedule pgm_step_schedule(std::size_t N) {
  StepSchedule h(N);
  for (std::size_t r = 1; r < N; ++r) h(r, r - 1) = 1.0;
  return h;
}

}  // namespace proxpep
