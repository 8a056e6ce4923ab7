#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "proxpep/bounds.hpp"
#include "proxpep/linalg.hpp"
#include "proxpep/pep.hpp"
#include "proxpep/rng.hpp"

using namespace proxpep;

namespace {

Matrix unit_outer(std::size_t n, std::size_t a, std::size_t b) {
  Matrix m = Matrix::Zero(n, n);
  m(a, b) = 1.0;
  return m;
}

// A_{i-1,i} and D_i accumulated term by term from unit-vector outer products
Matrix oracle_A(const StepSchedule& h, std::size_t i) {
  const std::size_t N = h.horizon();
  Matrix A = 0.5 * unit_outer(N, i, i) - 0.5 * unit_outer(N, i - 1, i) - 0.5 * unit_outer(N, i, i - 1);
  for (std::size_t k = 0; k < i; ++k) A += 0.5 * h(i, k) * (unit_outer(N, i, k) + unit_outer(N, k, i));
  return A;
}

Matrix oracle_D(const StepSchedule& h, std::size_t i) {
  const std::size_t N = h.horizon();
  Matrix D = 0.5 * unit_outer(N, i, i);
  for (std::size_t j = 1; j <= i; ++j)
    for (std::size_t k = 0; k < j; ++k) D += 0.5 * h(j, k) * (unit_outer(N, i, k) + unit_outer(N, k, i));
  return D;
}

std::vector<TSequence> sweep_sequences(std::size_t N) {
  std::vector<TSequence> out{fista_t_sequence(N), opg_t_sequence(N, MRounding::floor),
                             opg_t_sequence(N, MRounding::ceil)};
  for (int a = 2; a <= 10; ++a) out.push_back(linear_t_sequence(N, a));
  return out;
}

}  // namespace

TEST(BuildA, TwoByTwo) {
  StepSchedule h(2);
  h(1, 0) = 1.0;
  const Matrix A = build_A(h, 1);
  EXPECT_DOUBLE_EQ(A(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(A(1, 1), 0.5);
  EXPECT_DOUBLE_EQ(A(0, 1), 0.0);
  EXPECT_DOUBLE_EQ(A(1, 0), 0.0);
  EXPECT_THROW(build_A(h, 0), std::out_of_range);
  EXPECT_THROW(build_A(h, 2), std::out_of_range);
}

TEST(BuildA, SymmetricTraceHalfAndOracle) {
  for (const TSequence& t : {fista_t_sequence(3), linear_t_sequence(7, 3.0), opg_t_sequence(9)}) {
    const StepSchedule h = step_coefficients(t);
    for (std::size_t i = 1; i < t.horizon(); ++i) {
      const Matrix A = build_A(h, i);
      EXPECT_TRUE(is_symmetric(A, 0.0));
      EXPECT_NEAR(A.trace(), 0.5, 1e-15);
      EXPECT_LT((A - oracle_A(h, i)).cwiseAbs().maxCoeff(), 1e-15);
    }
  }
}

TEST(BuildD, FirstIsUnitCornerAndOracle) {
  const StepSchedule h = step_coefficients(fista_t_sequence(3));
  Matrix D0 = Matrix::Zero(3, 3);
  D0(0, 0) = 0.5;
  EXPECT_EQ(build_D(h, 0), D0);
  EXPECT_LT((build_D(h, 2) - oracle_D(h, 2)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_THROW(build_D(h, 3), std::out_of_range);
  for (const TSequence& t : {linear_t_sequence(8, 2.0), opg_t_sequence(8)}) {
    const StepSchedule hh = step_coefficients(t);
    for (std::size_t i = 0; i < 8; ++i) {
      const Matrix D = build_D(hh, i);
      EXPECT_TRUE(is_symmetric(D, 0.0));
      EXPECT_LT((D - oracle_D(hh, i)).cwiseAbs().maxCoeff(), 1e-14);
    }
  }
}

TEST(BuildS, ZeroMultipliers) {
  const StepSchedule h = step_coefficients(opg_t_sequence(5));
  EXPECT_EQ(build_S(h, std::vector<double>(4, 0.0), std::vector<double>(5, 0.0)), Matrix::Zero(5, 5));
  EXPECT_THROW(build_S(h, std::vector<double>(3, 0.0), std::vector<double>(5, 0.0)), std::invalid_argument);
}

TEST(BuildS, FistaTwoStepEntries) {
  const TSequence t = fista_t_sequence(2);
  const CostCertificate c = lemma2_certificate(t);
  const Matrix S = build_S(step_coefficients(t), c.lambda, c.tau);
  const double TN = t.T(1);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t k = 0; k < 2; ++k) {
      const double expected = i == k ? t.T(i) / (2 * TN) : t.t(i) * t.t(k) / (2 * TN);
      EXPECT_NEAR(S(i, k), expected, 1e-15);
    }
}

TEST(BuildS, Lemma2ClosedFormSweep) {
  for (std::size_t N = 1; N <= 100; N += (N < 10 ? 1 : 9)) {
    for (const TSequence& t : sweep_sequences(N)) {
      const Matrix M = bordered_matrix(step_coefficients(t), lemma2_certificate(t));
      const Matrix C = lemma2_closed_form(t);
      EXPECT_LE((M - C).cwiseAbs().maxCoeff(), 1e-12 * max_abs_entry(C)) << t.label();
    }
  }
}

TEST(BuildSPrime, Lemma4ClosedFormRankOne) {
  for (std::size_t N = 1; N <= 100; N += (N < 10 ? 1 : 9)) {
    for (const TSequence& t : sweep_sequences(N)) {
      const Matrix M = bordered_matrix(step_coefficients(t), lemma4_certificate(t));
      const Matrix C = lemma4_closed_form(t);
      EXPECT_LE((M - C).cwiseAbs().maxCoeff(), 1e-12) << t.label();
      const Vector ev = Eigen::SelfAdjointEigenSolver<Matrix>(C).eigenvalues();
      for (Index k = 0; k + 1 < ev.size(); ++k) EXPECT_NEAR(ev(k), 0.0, 1e-12);
    }
  }
}

TEST(BuildSPrime, OnlyBetaSurvivesAndPaddingIsZero) {
  const StepSchedule h = step_coefficients(linear_t_sequence(4, 4.0));
  const std::vector<double> beta{0.1, 0.2, 0.3, 0.15, 0.25};
  const Matrix Sp = build_S_prime(h, std::vector<double>(3, 0.0), std::vector<double>(4, 0.0), 0.0, beta);
  Matrix expected = Matrix::Zero(5, 5);
  for (std::size_t i = 0; i < 5; ++i) expected(i, i) = -beta[i];
  EXPECT_EQ(Sp, expected);

  const std::vector<double> lambda{0.3, 0.7, 1.1};
  const std::vector<double> tau{0.3, 0.4, 0.4, 0.2};
  const Matrix P = build_S_prime(h, lambda, tau, 0.0, std::vector<double>(5, 0.0));
  EXPECT_EQ(P.row(4).norm(), 0.0);
  EXPECT_EQ(P.col(4).norm(), 0.0);
  EXPECT_THROW(build_S_prime(h, lambda, tau, 0.0, std::vector<double>(4, 0.0)), std::invalid_argument);
}

TEST(Lemma2Certificate, FistaTwoStep) {
  const CostCertificate c = lemma2_certificate(fista_t_sequence(2));
  ASSERT_EQ(c.lambda.size(), 1u);
  EXPECT_NEAR(c.lambda[0], 0.3819660, 1e-7);
  EXPECT_NEAR(c.tau[0], 0.3819660, 1e-7);
  EXPECT_NEAR(c.tau[1], 0.6180340, 1e-7);
  EXPECT_NEAR(c.gamma, 0.3819660, 1e-7);
  EXPECT_DOUBLE_EQ(c.tau[0], c.lambda[0]);
  EXPECT_NEAR(c.lambda[0] + c.tau[1], 1.0, 1e-15);
}

TEST(Lemma2Certificate, SingleStep) {
  const CostCertificate c = lemma2_certificate(fista_t_sequence(1));
  EXPECT_TRUE(c.lambda.empty());
  EXPECT_DOUBLE_EQ(c.tau[0], 1.0);
  EXPECT_DOUBLE_EQ(c.gamma, 1.0);
  EXPECT_DOUBLE_EQ(dual_bound_cost(c, 1.0, 1.0), 0.5);
  EXPECT_TRUE(check_feasibility(step_coefficients(fista_t_sequence(1)), c).feasible);
}

TEST(Lemma2Certificate, TelescopingLinear) {
  const CostCertificate c = lemma2_certificate(linear_t_sequence(5, 4.0));
  EXPECT_LE(membership_residual(c), 1e-15);
  EXPECT_THROW(lemma2_certificate(custom_t_sequence({1.0, 3.0})), std::invalid_argument);
}

TEST(Lemma4Certificate, FistaTwoStep) {
  const MappingCertificate c = lemma4_certificate(fista_t_sequence(2));
  EXPECT_NEAR(c.tau[0], 0.7639320, 1e-7);
  EXPECT_NEAR(c.eta, 2.0, 1e-14);
  ASSERT_EQ(c.beta.size(), 3u);
  EXPECT_NEAR(c.beta[0], 0.0, 1e-15);
  EXPECT_NEAR(c.beta[1], 0.0, 1e-15);
  EXPECT_NEAR(c.beta[2], 1.0, 1e-15);
  EXPECT_DOUBLE_EQ(c.gamma, c.tau[0]);
}

TEST(Lemma4Certificate, OpgBetaSimplex) {
  const MappingCertificate c = lemma4_certificate(opg_t_sequence(4));
  double sum = 0.0;
  for (double b : c.beta) {
    EXPECT_GE(b, 0.0);
    sum += b;
  }
  EXPECT_NEAR(sum, 1.0, 1e-15);
}

TEST(Lemma4Certificate, MappingBoundFormula) {
  for (const TSequence& t : sweep_sequences(13)) {
    const MappingCertificate c = lemma4_certificate(t);
    EXPECT_DOUBLE_EQ(c.gamma, c.tau[0]);
    EXPECT_NEAR(dual_bound_mapping(c, 2.0, 3.0), 6.0 / std::sqrt(quad_objective(t)), 1e-14);
  }
}

TEST(CheckFeasibility, SweepUpToHundred) {
  for (std::size_t N = 1; N <= 100; N += (N < 20 ? 1 : 8)) {
    for (const TSequence& t : sweep_sequences(N)) {
      const StepSchedule h = step_coefficients(t);
      const FeasibilityReport a = check_feasibility(h, lemma2_certificate(t));
      const FeasibilityReport b = check_feasibility(h, lemma4_certificate(t));
      EXPECT_TRUE(a.feasible) << t.label() << " N=" << N << " eig " << a.min_eigenvalue;
      EXPECT_TRUE(b.feasible) << t.label() << " N=" << N << " eig " << b.min_eigenvalue;
    }
  }
}

TEST(CheckFeasibility, ShrunkGammaIsInfeasible) {
  for (const TSequence& t : {fista_t_sequence(10), opg_t_sequence(10), linear_t_sequence(10, 4.0)}) {
    CostCertificate c = lemma2_certificate(t);
    c.gamma *= 0.9;
    const FeasibilityReport r = check_feasibility(step_coefficients(t), c);
    EXPECT_FALSE(r.feasible);
    EXPECT_LT(r.min_eigenvalue, 0.0);
  }
}

TEST(CheckFeasibility, ResidualAndSignFailures) {
  const TSequence t = fista_t_sequence(6);
  CostCertificate c = lemma2_certificate(t);
  c.tau[2] += 1e-6;
  EXPECT_FALSE(check_feasibility(step_coefficients(t), c).feasible);
  MappingCertificate m = lemma4_certificate(t);
  m.beta.pop_back();
  EXPECT_THROW(check_feasibility(step_coefficients(t), m), std::invalid_argument);
}

TEST(DualBoundCost, Values) {
  const TSequence f10 = fista_t_sequence(10);
  double tt = 1.0;
  double T = 1.0;
  for (int i = 1; i < 10; ++i) {
    tt = (1.0 + std::sqrt(1.0 + 4.0 * tt * tt)) / 2.0;
    T += tt;
  }
  const double v = dual_bound_cost(lemma2_certificate(f10), 1.0, 1.0);
  EXPECT_NEAR(v, 1.0 / (2.0 * T), 1e-14);
  EXPECT_LE(v, 2.0 / 121.0);
  EXPECT_NEAR(dual_bound_cost(lemma2_certificate(linear_t_sequence(10, 4.0)), 1.0, 1.0), 4.0 / 170.0, 1e-12);
  EXPECT_NEAR(4.0 / 170.0, 0.0235294, 1e-7);
}

TEST(DualBoundCost, FistaBelowClosedForm) {
  for (std::size_t N = 1; N <= 200; ++N) {
    const double v = dual_bound_cost(lemma2_certificate(fista_t_sequence(N)), 1.0, 1.0);
    EXPECT_LE(v, bound::fpgm_cost(N, 1.0, 1.0) * (1 + 1e-12));
  }
}

TEST(DualBoundMapping, Values) {
  EXPECT_NEAR(dual_bound_mapping(lemma4_certificate(fista_t_sequence(2)), 1.0, 1.0), 0.6180340, 1e-7);
  const double opg = dual_bound_mapping(lemma4_certificate(opg_t_sequence(10)), 1.0, 1.0);
  EXPECT_LE(opg, 0.1732051);
  EXPECT_NEAR(dual_bound_mapping(lemma4_certificate(linear_t_sequence(10, 4.0)), 1.0, 1.0),
              4.0 * std::sqrt(6.0) / std::sqrt(6450.0), 1e-12);
  EXPECT_NEAR(4.0 * std::sqrt(6.0) / std::sqrt(6450.0), 0.1219989, 1e-7);
}

TEST(QuadObjective, Values) {
  EXPECT_DOUBLE_EQ(quad_objective(custom_t_sequence({1.0, 1.0})), 3.0);
  for (std::size_t N : {1u, 5u, 40u}) {
    const TSequence t = fista_t_sequence(N);
    EXPECT_NEAR(quad_objective(t), t.T(N - 1), 1e-9 * t.T(N - 1));
  }
  EXPECT_GE(quad_objective(opg_t_sequence(10)), 8.0 * 100.0 / 24.0);
}

TEST(MinEigenvalue, Basics) {
  EXPECT_NEAR(min_eigenvalue(Matrix::Identity(5, 5)), 1.0, 1e-15);
  Matrix d = Matrix::Zero(3, 3);
  d.diagonal() << 1.0, -2.0, 3.0;
  EXPECT_NEAR(min_eigenvalue(d), -2.0, 1e-15);
  SplitMix64 rng(3);
  for (int k = 0; k < 10; ++k) {
    const Vector t = rng.normal_vector(20);
    EXPECT_NEAR(min_eigenvalue(t * t.transpose()), 0.0, 1e-10 * t.squaredNorm());
  }
  Matrix asym = Matrix::Identity(3, 3);
  asym(0, 2) = 0.1;
  EXPECT_THROW(min_eigenvalue(asym), std::invalid_argument);
}

TEST(AnalyticBounds, SpotValues) {
  AlgorithmSpec pgm;
  const BoundReport r = analytic_bounds(pgm, 10, 1.0, 1.0);
  EXPECT_NEAR(r.cost->value, 0.05, 1e-12);
  EXPECT_NEAR(r.mapping->value, 0.1924501, 1e-7);

  AlgorithmSpec fpgm;
  fpgm.kind = AlgorithmKind::fpgm;
  EXPECT_NEAR(analytic_bounds(fpgm, 10, 1.0, 1.0).cost->value, 2.0 / 121.0, 1e-12);
  EXPECT_NEAR(2.0 / 121.0, 0.0165289, 1e-7);

  AlgorithmSpec opg;
  opg.kind = AlgorithmKind::fpgm_opg;
  const BoundReport o = analytic_bounds(opg, 10, 1.0, 1.0);
  EXPECT_NEAR(o.cost->value, 4.0 / 140.0, 1e-12);
  EXPECT_NEAR(o.cost->value, 0.0285714, 1e-7);
  EXPECT_NEAR(o.mapping->value, 0.1732051, 1e-7);

  AlgorithmSpec fa;
  fa.kind = AlgorithmKind::fpgm_a;
  EXPECT_NEAR(analytic_bounds(fa, 10, 1.0, 1.0).mapping->value, 4.0 * std::sqrt(6.0) / std::sqrt(6450.0), 1e-12);

  // scaling in L and R
  EXPECT_NEAR(analytic_bounds(pgm, 10, 3.0, 2.0).cost->value, 3.0 * 4.0 / 20.0, 1e-12);
  EXPECT_NEAR(analytic_bounds(opg, 10, 3.0, 2.0).mapping->value, 6.0 * 0.17320508075688773, 1e-12);
}

TEST(AnalyticBounds, DomainErrors) {
  EXPECT_THROW(bound::pgm_mapping(1, 1.0, 1.0), std::domain_error);
  EXPECT_THROW(bound::fpgm_opg_mapping(2, 1.0, 1.0), std::domain_error);
  EXPECT_THROW(bound::pgm_cost(0, 1.0, 1.0), std::domain_error);
  AlgorithmSpec pgm;
  EXPECT_THROW(analytic_bounds(pgm, 0, 1.0, 1.0), std::domain_error);
  EXPECT_FALSE(analytic_bounds(pgm, 1, 1.0, 1.0).mapping.has_value());
}

TEST(AnalyticBounds, AsymptoticConstants) {
  auto constant = [](const AlgorithmSpec& s, bool mapping) {
    const BoundReport r = analytic_bounds(s, 10, 1.0, 1.0);
    return mapping ? r.mapping->asymptotic->constant : r.cost->asymptotic->constant;
  };
  AlgorithmSpec s;
  EXPECT_NEAR(constant(s, false), 0.5, 0.005);
  EXPECT_NEAR(constant(s, true), 2.0, 0.02);
  s.kind = AlgorithmKind::fpgm;
  EXPECT_NEAR(constant(s, false), 2.0, 0.02);
  s.kind = AlgorithmKind::fpgm_opg;
  EXPECT_NEAR(constant(s, false), 4.0, 0.04);
  EXPECT_NEAR(constant(s, true), 2.0 * std::sqrt(6.0), 0.02 * 4.899);
  s.kind = AlgorithmKind::fpgm_a;
  for (double a : {3.0, 4.0, 10.0}) {
    s.a = a;
    EXPECT_NEAR(constant(s, false), a, 0.01 * a);
    const double m = a * std::sqrt(6.0) / std::sqrt(a - 2.0);
    EXPECT_NEAR(constant(s, true), m, 0.02 * m);
  }
  s.a = 4.0;
  EXPECT_NEAR(constant(s, true), 6.928, 0.02 * 6.928);
  s.kind = AlgorithmKind::fpgm_m;
  s.m_choice = MChoice::two_thirds;
  EXPECT_NEAR(constant(s, false), 4.5, 0.045);
  EXPECT_NEAR(constant(s, true), 3.0 * std::sqrt(3.0), 0.02 * 5.196);
}
