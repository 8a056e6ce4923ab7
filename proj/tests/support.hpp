#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <vector>

#include "proxpep/algorithms.hpp"
#include "proxpep/problems.hpp"
#include "proxpep/rng.hpp"

namespace testing_support {

using proxpep::Index;
using proxpep::Matrix;
using proxpep::Vector;

inline Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

inline Matrix mat1(double v) { return Matrix::Constant(1, 1, v); }

/// f = q/2 x^2 + lam |x| in one dimension.
inline proxpep::CompositeProblem scalar_lasso(double q, double b, double lam) {
  return proxpep::make_quadratic_l1(mat1(q), vec({b}), lam);
}

/// Max over coordinates of |a - b| / max(1, |a|, |b|).
inline double max_rel_diff(const Vector& a, const Vector& b) {
  double worst = 0.0;
  for (Index i = 0; i < a.size(); ++i) {
    const double s = std::max({1.0, std::abs(a(i)), std::abs(b(i))});
    worst = std::max(worst, std::abs(a(i) - b(i)) / s);
  }
  return worst;
}

inline double max_rel_diff(const std::vector<Vector>& a, const std::vector<Vector>& b) {
  if (a.size() != b.size()) return INFINITY;
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, max_rel_diff(a[i], b[i]));
  return worst;
}

/// Seeded lasso or box instance with x* attached.
inline proxpep::CompositeProblem solved_instance(proxpep::SplitMix64& rng, Index d, bool box) {
  auto p = box ? proxpep::random_box_ls(rng, d) : proxpep::random_lasso(rng, d);
  return p.with_reference(proxpep::solve_reference(p));
}

}  // namespace testing_support
