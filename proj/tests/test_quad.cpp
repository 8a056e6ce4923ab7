#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "proxpep/pep.hpp"
#include "proxpep/quad.hpp"

using namespace proxpep;

namespace {

double objective_of(const std::vector<double>& t) { return quad_objective(custom_t_sequence(t)); }

}  // namespace

TEST(MaximizeQuad, TwoStepGridSearch) {
  const QuadResult r = maximize_quad(2);
  EXPECT_NEAR(r.t.t(1), 1.0, 1e-9);
  EXPECT_NEAR(r.objective, 3.0, 1e-12);
  double best = -INFINITY;
  for (int k = 0; k <= 100000; ++k) {
    const double t1 = 0.01 + (1.618 - 0.01) * k / 100000.0;
    best = std::max(best, objective_of({1.0, t1}));
  }
  EXPECT_NEAR(r.objective, best, 1e-8);
}

TEST(MaximizeQuad, ThreeStepGridSearch) {
  // feasible (t1, t2): t1^2 <= 1 + t1, t2^2 <= 1 + t1 + t2
  double best = -INFINITY;
  const int n = 1500;
  const double t1_max = (1.0 + std::sqrt(5.0)) / 2.0;
  for (int a = 1; a <= n; ++a) {
    const double t1 = t1_max * a / n;
    const double t2_max = (1.0 + std::sqrt(1.0 + 4.0 * (1.0 + t1))) / 2.0;
    for (int b = 1; b <= n; ++b) best = std::max(best, objective_of({1.0, t1, t2_max * b / n}));
  }
  const QuadResult r = maximize_quad(3);
  EXPECT_GE(r.objective, best - 1e-9);
  EXPECT_NEAR(r.objective, best, 1e-4 * best);
  EXPECT_TRUE(validate_t_sequence(r.t).valid());
}

TEST(MaximizeQuad, MatchesOpgSequence) {
  for (std::size_t N = 2; N <= 8; ++N) {
    const QuadResult r = maximize_quad(N);
    const double opg = quad_objective(opg_t_sequence(N));
    EXPECT_NEAR(r.objective, opg, 1e-4 * opg) << N;
    EXPECT_GE(r.objective, opg - 1e-6) << N;
    EXPECT_TRUE(r.converged);
    EXPECT_TRUE(validate_t_sequence(r.t).valid());
  }
}

TEST(MaximizeQuad, SingleStepAndZero) {
  const QuadResult r = maximize_quad(1);
  EXPECT_DOUBLE_EQ(r.objective, 1.0);
  EXPECT_THROW(maximize_quad(0), std::invalid_argument);
}

TEST(MaximizeQuad, UnconstrainedStationaryPoint) {
  // gradient of the objective in t_1..t_{N-1} vanishes at t_i = (N - i + 1)/2
  for (std::size_t N : {4u, 7u, 12u}) {
    std::vector<double> t(N, 1.0);
    for (std::size_t i = 1; i < N; ++i) t[i] = (N - i + 1.0) / 2.0;
    for (std::size_t j = 1; j < N; ++j) {
      const double h = 1e-5;
      std::vector<double> up = t;
      std::vector<double> dn = t;
      up[j] += h;
      dn[j] -= h;
      const double g = (objective_of(up) - objective_of(dn)) / (2 * h);
      EXPECT_NEAR(g, 0.0, 1e-6) << "N=" << N << " j=" << j;
    }
  }
}

TEST(MaximizeQuad, Deterministic) {
  const QuadResult a = maximize_quad(6);
  const QuadResult b = maximize_quad(6);
  EXPECT_EQ(a.t.t_values(), b.t.t_values());
  EXPECT_EQ(a.objective, b.objective);
}
