#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "proxpep/linalg.hpp"
#include "proxpep/schedules.hpp"

namespace proxpep {

// Relaxed performance-estimation duals for class FO.
//
// Cost form:    min 1/2 L R^2 gamma  s.t. (lambda, tau) in Lambda,
//               [[S(h, lambda, tau), tau/2], [tau'/2, gamma/2]] >= 0.
// Mapping form: min 1/2 L^2 R^2 gamma s.t. (lambda, tau, eta, beta) in Lambda',
//               [[S'(h, lambda, tau, eta, beta), [tau; 0]/2], [[tau' 0]/2, gamma/2]] >= 0.
// Any feasible point certifies an upper bound on F(x_N) - F* (cost form) or on
// min over {y_0..y_{N-1}, x_N} of the squared mapping norm (mapping form).

/// A_{i-1,i}(h), N x N, for 1 <= i <= N-1.
inline Matrix build_A(const StepSchedule& h, std::size_t i) {
  const std::size_t N = h.horizon();
  if (i < 1 || i >= N) throw std::out_of_range("build_A: index must lie in [1, N-1]");
  Matrix A = Matrix::Zero(N, N);
  A(i, i) += 0.5;
  A(i - 1, i) -= 0.5;
  A(i, i - 1) -= 0.5;
  for (std::size_t k = 0; k < i; ++k) {
    A(i, k) += 0.5 * h(i, k);
    A(k, i) += 0.5 * h(i, k);
  }
  return A;
}

/// D_i(h), N x N, for 0 <= i <= N-1.
inline Matrix build_D(const StepSchedule& h, std::size_t i) {
  const std::size_t N = h.horizon();
  if (i >= N) throw std::out_of_range("build_D: index must lie in [0, N-1]");
  Matrix D = Matrix::Zero(N, N);
  D(i, i) = 0.5;
  for (std::size_t j = 1; j <= i; ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      D(i, k) += 0.5 * h(j, k);
      D(k, i) += 0.5 * h(j, k);
    }
  }
  return D;
}

/// S = sum lambda_i A_{i-1,i} + sum tau_i D_i. `lambda[0]` holds lambda_1.
inline Matrix build_S(const StepSchedule& h, const std::vector<double>& lambda,
                      const std::vector<double>& tau) {
  const std::size_t N = h.horizon();
  if (lambda.size() != N - 1 || tau.size() != N) {
    throw std::invalid_argument("build_S: multiplier lengths must be N-1 and N");
  }
  Matrix S = Matrix::Zero(N, N);
  for (std::size_t i = 1; i < N; ++i) S += lambda[i - 1] * build_A(h, i);
  for (std::size_t i = 0; i < N; ++i) S += tau[i] * build_D(h, i);
  return S;
}

/// S' on (N+1) x (N+1): padded S plus eta/2 e_N e_N' minus diag(beta).
inline Matrix build_S_prime(const StepSchedule& h, const std::vector<double>& lambda,
                            const std::vector<double>& tau, double eta,
                            const std::vector<double>& beta) {
  const std::size_t N = h.horizon();
  if (beta.size() != N + 1) throw std::invalid_argument("build_S_prime: beta must have length N+1");
  Matrix Sp = Matrix::Zero(N + 1, N + 1);
  Sp.topLeftCorner(N, N) = build_S(h, lambda, tau);
  Sp(N, N) += 0.5 * eta;
  for (std::size_t i = 0; i <= N; ++i) Sp(i, i) -= beta[i];
  return Sp;
}

struct CostCertificate {
  std::size_t N = 0;
  std::vector<double> lambda;  // lambda_1..lambda_{N-1}
  std::vector<double> tau;     // tau_0..tau_{N-1}
  double gamma = 0.0;
};

struct MappingCertificate {
  std::size_t N = 0;
  std::vector<double> lambda;
  std::vector<double> tau;
  double eta = 0.0;
  std::vector<double> beta;  // beta_0..beta_N
  double gamma = 0.0;
};

/// [[S, tau/2], [tau'/2, gamma/2]], (N+1) x (N+1).
inline Matrix bordered_matrix(const StepSchedule& h, const CostCertificate& c) {
  const std::size_t N = h.horizon();
  if (c.N != N) throw std::invalid_argument("bordered_matrix: horizon mismatch");
  Matrix M = Matrix::Zero(N + 1, N + 1);
  M.topLeftCorner(N, N) = build_S(h, c.lambda, c.tau);
  for (std::size_t i = 0; i < N; ++i) {
    M(i, N) = 0.5 * c.tau[i];
    M(N, i) = 0.5 * c.tau[i];
  }
  M(N, N) = 0.5 * c.gamma;
  return M;
}

/// [[S', [tau; 0]/2], [[tau' 0]/2, gamma/2]], (N+2) x (N+2).
inline Matrix bordered_matrix(const StepSchedule& h, const MappingCertificate& c) {
  const std::size_t N = h.horizon();
  if (c.N != N) throw std::invalid_argument("bordered_matrix: horizon mismatch");
  Matrix M = Matrix::Zero(N + 2, N + 2);
  M.topLeftCorner(N + 1, N + 1) = build_S_prime(h, c.lambda, c.tau, c.eta, c.beta);
  for (std::size_t i = 0; i < N; ++i) {
    M(i, N + 1) = 0.5 * c.tau[i];
    M(N + 1, i) = 0.5 * c.tau[i];
  }
  M(N + 1, N + 1) = 0.5 * c.gamma;
  return M;
}

/// Largest violation of the linear constraints defining Lambda.
inline double membership_residual(const CostCertificate& c) {
  const std::size_t N = c.N;
  if (N == 1) return std::abs(c.tau[0] - 1.0);
  double r = std::abs(c.tau[0] - c.lambda[0]);
  r = std::max(r, std::abs(c.lambda[N - 2] + c.tau[N - 1] - 1.0));
  for (std::size_t i = 1; i + 1 < N; ++i) {
    r = std::max(r, std::abs(c.lambda[i - 1] - c.lambda[i] + c.tau[i]));
  }
  return r;
}

/// Same for Lambda'.
inline double membership_residual(const MappingCertificate& c) {
  const std::size_t N = c.N;
  double beta_sum = 0.0;
  for (double b : c.beta) beta_sum += b;
  double r = std::abs(beta_sum - 1.0);
  if (N == 1) return std::max(r, std::abs(c.tau[0] - c.eta));
  r = std::max(r, std::abs(c.tau[0] - c.lambda[0]));
  r = std::max(r, std::abs(c.lambda[N - 2] + c.tau[N - 1] - c.eta));
  for (std::size_t i = 1; i + 1 < N; ++i) {
    r = std::max(r, std::abs(c.lambda[i - 1] - c.lambda[i] + c.tau[i]));
  }
  return r;
}

namespace detail {

inline double most_negative(std::initializer_list<const std::vector<double>*> groups,
                            std::initializer_list<double> scalars) {
  double lo = 0.0;
  for (const auto* g : groups)
    for (double v : *g) lo = std::min(lo, v);
  for (double v : scalars) lo = std::min(lo, v);
  return lo;
}

}  // namespace detail

/// lambda_i = T_{i-1}/T_{N-1}, tau_i = t_i/T_{N-1}, gamma = 1/T_{N-1}.
inline CostCertificate lemma2_certificate(const TSequence& t) {
  require_valid(t, "lemma2_certificate");
  const std::size_t N = t.horizon();
  const double TN = t.T(N - 1);
  CostCertificate c;
  c.N = N;
  c.lambda.resize(N - 1);
  c.tau.resize(N);
  for (std::size_t i = 1; i < N; ++i) c.lambda[i - 1] = t.T(i - 1) / TN;
  for (std::size_t i = 0; i < N; ++i) c.tau[i] = t.t(i) / TN;
  c.gamma = 1.0 / TN;
  return c;
}

/// sum_{k<N} (T_k - t_k^2) + T_{N-1}.
inline double quad_objective(const TSequence& t) {
  double acc = 0.0;
  for (std::size_t k = 0; k < t.horizon(); ++k) acc += t.T(k) - t.t(k) * t.t(k);
  return acc + t.T(t.horizon() - 1);
}

inline MappingCertificate lemma4_certificate(const TSequence& t) {
  require_valid(t, "lemma4_certificate");
  const std::size_t N = t.horizon();
  const double denom = 0.5 * quad_objective(t);
  if (!(denom > 0.0)) throw std::invalid_argument("lemma4_certificate: nonpositive denominator");
  const double tau0 = 1.0 / denom;
  MappingCertificate c;
  c.N = N;
  c.lambda.resize(N - 1);
  c.tau.resize(N);
  c.beta.resize(N + 1);
  for (std::size_t i = 1; i < N; ++i) c.lambda[i - 1] = t.T(i - 1) * tau0;
  c.tau[0] = tau0;
  for (std::size_t i = 1; i < N; ++i) c.tau[i] = t.t(i) * tau0;
  c.eta = t.T(N - 1) * tau0;
  for (std::size_t i = 0; i < N; ++i) c.beta[i] = 0.5 * (t.T(i) - t.t(i) * t.t(i)) * tau0;
  c.beta[N] = 0.5 * t.T(N - 1) * tau0;
  c.gamma = tau0;
  return c;
}

struct FeasibilityReport {
  double min_eigenvalue = 0.0;
  double scale = 0.0;  // max |entry| of the bordered matrix
  double membership_residual = 0.0;
  double most_negative_multiplier = 0.0;
  bool feasible = false;
};

namespace detail {

inline FeasibilityReport assess(const Matrix& bordered, double residual, double most_neg) {
  FeasibilityReport r;
  r.scale = max_abs_entry(bordered);
  r.min_eigenvalue = min_eigenvalue(bordered);
  r.membership_residual = residual;
  r.most_negative_multiplier = most_neg;
  r.feasible = r.min_eigenvalue >= -1e-10 * std::max(1.0, r.scale) && residual <= 1e-12 &&
               most_neg >= -1e-14;
  return r;
}

}  // namespace detail

inline FeasibilityReport check_feasibility(const StepSchedule& h, const CostCertificate& c) {
  if (c.N != h.horizon() || c.lambda.size() + 1 != c.N || c.tau.size() != c.N) {
    throw std::invalid_argument("check_feasibility: certificate does not match the schedule");
  }
  return detail::assess(bordered_matrix(h, c), membership_residual(c),
                        detail::most_negative({&c.lambda, &c.tau}, {c.gamma}));
}

inline FeasibilityReport check_feasibility(const StepSchedule& h, const MappingCertificate& c) {
  if (c.N != h.horizon() || c.lambda.size() + 1 != c.N || c.tau.size() != c.N ||
      c.beta.size() != c.N + 1) {
    throw std::invalid_argument("check_feasibility: certificate does not match the schedule");
  }
  return detail::assess(bordered_matrix(h, c), membership_residual(c),
                        detail::most_negative({&c.lambda, &c.tau, &c.beta}, {c.eta, c.gamma}));
}

/// 1/2 L R^2 gamma.
inline double dual_bound_cost(const CostCertificate& c, double L, double R) {
  return 0.5 * L * R * R * c.gamma;
}

/// sqrt(1/2 L^2 R^2 gamma): the dual value bounds the squared mapping norm.
inline double dual_bound_mapping(const MappingCertificate& c, double L, double R) {
  return L * R * std::sqrt(0.5 * c.gamma);
}

/// (diag(T~ - t~^2) + t~ t~') / (2 T_{N-1}) with t~ = (t, 1), T~ = (T, 1).
inline Matrix lemma2_closed_form(const TSequence& t) {
  const std::size_t N = t.horizon();
  Vector tt(N + 1);
  Vector TT(N + 1);
  for (std::size_t i = 0; i < N; ++i) {
    tt(i) = t.t(i);
    TT(i) = t.T(i);
  }
  tt(N) = 1.0;
  TT(N) = 1.0;
  Matrix M = tt * tt.transpose();
  M.diagonal() += TT - tt.cwiseProduct(tt);
  return M / (2.0 * t.T(N - 1));
}

/// 1/2 tau_0 t~ t~' with t~ = (t, 0, 1).
inline Matrix lemma4_closed_form(const TSequence& t) {
  const std::size_t N = t.horizon();
  Vector tt = Vector::Zero(N + 2);
  for (std::size_t i = 0; i < N; ++i) tt(i) = t.t(i);
  tt(N + 1) = 1.0;
  const double tau0 = 2.0 / quad_objective(t);
  return 0.5 * tau0 * tt * tt.transpose();
}

}  // namespace proxpep
