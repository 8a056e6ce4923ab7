#pragma once

#include <concepts>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include "proxpep/linalg.hpp"
#include "proxpep/rng.hpp"
#include "proxpep/types.hpp"

namespace proxpep {

/// F = f + phi with f convex and L-smooth, phi convex with a cheap prox.
///
/// `prox(v, c)` returns argmin_x { (c/2)||x - v||^2 + phi(x) } and
/// `is_subgradient(p, g, tol)` tests g in the subdifferential of phi at p.
template <class P>
concept CompositeObjective = requires(const P& p, const Vector& x, double c) {
  { p.dimension() } -> std::convertible_to<Index>;
  { p.lipschitz() } -> std::convertible_to<double>;
  { p.smooth(x) } -> std::convertible_to<double>;
  { p.gradient(x) } -> std::convertible_to<Vector>;
  { p.nonsmooth(x) } -> std::convertible_to<double>;
  { p.prox(x, c) } -> std::convertible_to<Vector>;
  { p.is_subgradient(x, x, c) } -> std::convertible_to<bool>;
};

/// f(x) = 1/2 x'Qx - b'x, phi(x) = lam ||x||_1.
struct QuadraticL1 {
  Matrix Q;
  Vector b;
  double lam = 0.0;
};

/// f(x) = 1/2 ||Ax - b||^2, phi = indicator of [lo, hi].
struct BoxLeastSquares {
  Matrix A;
  Vector b;
  Vector lo;
  Vector hi;
  Matrix AtA;
  Vector Atb;
};

struct ReferenceSolution {
  Vector x;
  double F = 0.0;
  std::size_t iterations = 0;
};

class CompositeProblem {
 public:
  using Data = std::variant<QuadraticL1, BoxLeastSquares>;

  CompositeProblem(Data data, double lipschitz)
      : data_(std::move(data)), lipschitz_(lipschitz) {
    if (!(lipschitz_ > 0.0) || !is_finite(lipschitz_)) {
      throw std::invalid_argument("CompositeProblem: Lipschitz constant must be positive");
    }
  }

  Index dimension() const {
    return std::visit([](const auto& d) -> Index { return dim_of(d); }, data_);
  }

  double lipschitz() const { return lipschitz_; }

  std::string_view kind() const {
    return std::holds_alternative<QuadraticL1>(data_) ? "quadratic_l1" : "box_ls";
  }

  const Data& data() const { return data_; }

  double smooth(const Vector& x) const {
    require_dimension(x, dimension(), "smooth");
    if (const auto* q = std::get_if<QuadraticL1>(&data_)) {
      return 0.5 * x.dot(q->Q * x) - q->b.dot(x);
    }
    const auto& bx = std::get<BoxLeastSquares>(data_);
    return 0.5 * (bx.A * x - bx.b).squaredNorm();
  }

  Vector gradient(const Vector& x) const {
    require_dimension(x, dimension(), "gradient");
    if (const auto* q = std::get_if<QuadraticL1>(&data_)) return q->Q * x - q->b;
    const auto& bx = std::get<BoxLeastSquares>(data_);
    return bx.AtA * x - bx.Atb;
  }

  double nonsmooth(const Vector& x) const {
    require_dimension(x, dimension(), "nonsmooth");
    if (const auto* q = std::get_if<QuadraticL1>(&data_)) return q->lam * x.lpNorm<1>();
    const auto& bx = std::get<BoxLeastSquares>(data_);
    for (Index i = 0; i < x.size(); ++i) {
      if (x(i) < bx.lo(i) || x(i) > bx.hi(i)) return kInfinity;
    }
    return 0.0;
  }

  Vector prox(const Vector& v, double c) const {
    require_dimension(v, dimension(), "prox");
    if (!(c > 0.0)) throw std::invalid_argument("prox: constant must be positive");
    if (const auto* q = std::get_if<QuadraticL1>(&data_)) {
      const double thr = q->lam / c;
      Vector out(v.size());
      for (Index i = 0; i < v.size(); ++i) {
        const double a = std::abs(v(i)) - thr;
        out(i) = a > 0.0 ? std::copysign(a, v(i)) : 0.0;
      }
      return out;
    }
    const auto& bx = std::get<BoxLeastSquares>(data_);
    return v.cwiseMax(bx.lo).cwiseMin(bx.hi);
  }

  /// Subdifferential membership: interval test for l1, normal cone for boxes.
  bool is_subgradient(const Vector& point, const Vector& g, double tol) const {
    require_dimension(point, dimension(), "is_subgradient");
    require_dimension(g, dimension(), "is_subgradient");
    if (const auto* q = std::get_if<QuadraticL1>(&data_)) {
      for (Index i = 0; i < point.size(); ++i) {
        if (point(i) != 0.0) {
          if (std::abs(g(i) - std::copysign(q->lam, point(i))) > tol) return false;
        } else if (std::abs(g(i)) > q->lam + tol) {
          return false;
        }
      }
      return true;
    }
    const auto& bx = std::get<BoxLeastSquares>(data_);
    for (Index i = 0; i < point.size(); ++i) {
      const double p = point(i);
      if (p < bx.lo(i) || p > bx.hi(i)) return false;
      const bool at_lo = p == bx.lo(i);
      const bool at_hi = p == bx.hi(i);
      if (at_lo && at_hi) continue;  // degenerate box: whole line
      if (at_hi) {
        if (g(i) < -tol) return false;
      } else if (at_lo) {
        if (g(i) > tol) return false;
      } else if (std::abs(g(i)) > tol) {
        return false;
      }
    }
    return true;
  }

  const std::optional<ReferenceSolution>& reference() const { return reference_; }

  CompositeProblem with_reference(ReferenceSolution ref) const {
    require_dimension(ref.x, dimension(), "with_reference");
    CompositeProblem copy = *this;
    copy.reference_ = std::move(ref);
    return copy;
  }

  /// Same problem with a declared constant; it must over-estimate the true one.
  CompositeProblem with_lipschitz(double lipschitz) const {
    CompositeProblem copy(data_, lipschitz);
    copy.reference_ = reference_;
    return copy;
  }

 private:
  static Index dim_of(const QuadraticL1& q) { return q.Q.cols(); }
  static Index dim_of(const BoxLeastSquares& bx) { return bx.A.cols(); }

  Data data_;
  double lipschitz_;
  std::optional<ReferenceSolution> reference_;
};

static_assert(CompositeObjective<CompositeProblem>);

template <CompositeObjective P>
double eval_F(const P& p, const Vector& x) {
  require_dimension(x, p.dimension(), "eval_F");
  const double phi = p.nonsmooth(x);
  if (!is_finite(phi)) return kInfinity;
  return p.smooth(x) + phi;
}

inline CompositeProblem make_quadratic_l1(const Matrix& Q, const Vector& b, double lam) {
  if (Q.rows() != Q.cols() || Q.rows() == 0) {
    throw std::invalid_argument("make_quadratic_l1: Q must be square and non-empty");
  }
  if (b.size() != Q.rows()) throw std::invalid_argument("make_quadratic_l1: b has wrong size");
  if (!(lam >= 0.0)) throw std::invalid_argument("make_quadratic_l1: lam must be >= 0");
  if (!is_symmetric(Q)) throw std::invalid_argument("make_quadratic_l1: Q is not symmetric");
  const Matrix sym = 0.5 * (Q + Q.transpose());
  const double lo = min_eigenvalue(sym);
  const double hi = max_eigenvalue(sym);
  if (lo < -1e-12 * std::max(1.0, std::abs(hi))) {
    throw std::invalid_argument("make_quadratic_l1: Q is not positive semidefinite");
  }
  if (!(hi > 0.0)) throw std::invalid_argument("make_quadratic_l1: Q must be nonzero");
  return CompositeProblem(QuadraticL1{sym, b, lam}, hi);
}

inline CompositeProblem make_box_constrained_ls(const Matrix& A, const Vector& b,
                                                const Vector& lo, const Vector& hi) {
  const Index d = A.cols();
  if (A.rows() == 0 || d == 0) throw std::invalid_argument("make_box_constrained_ls: empty A");
  if (b.size() != A.rows()) throw std::invalid_argument("make_box_constrained_ls: b has wrong size");
  if (lo.size() != d || hi.size() != d) {
    throw std::invalid_argument("make_box_constrained_ls: box has wrong size");
  }
  for (Index i = 0; i < d; ++i) {
    if (!(lo(i) <= hi(i))) {
      throw std::invalid_argument("make_box_constrained_ls: lo > hi at index " +
                                  std::to_string(i));
    }
  }
  Matrix AtA = A.transpose() * A;
  Vector Atb = A.transpose() * b;
  const double L = max_eigenvalue(AtA);
  return CompositeProblem(BoxLeastSquares{A, b, lo, hi, std::move(AtA), std::move(Atb)}, L);
}

/// Runs the proximal gradient method until ||x - p_L(x)|| <= tol.
template <CompositeObjective P>
ReferenceSolution solve_reference(const P& p, double tol = 1e-12,
                                  std::size_t max_iterations = 1'000'000,
                                  std::optional<Vector> start = std::nullopt) {
  const double L = p.lipschitz();
  Vector x = start ? *start : Vector::Zero(p.dimension());
  require_dimension(x, p.dimension(), "solve_reference");
  x = p.prox(x, L);  // land in dom(phi)
  for (std::size_t it = 0; it < max_iterations; ++it) {
    Vector next = p.prox(x - p.gradient(x) / L, L);
    const double residual = (x - next).norm();
    // mapping norms are monotone along PGM, so `next` inherits the residual bound
    if (residual <= tol) {
      const double F = eval_F(p, next);
      return ReferenceSolution{std::move(next), F, it + 1};
    }
    x = std::move(next);
  }
  throw std::runtime_error("solve_reference: iteration cap exceeded before tolerance");
}

/// Dense random lasso: Q = M'M/m with m = 2d, lam scaled to ||b||_inf.
inline CompositeProblem random_lasso(SplitMix64& rng, Index d) {
  const Index m = 2 * d;
  const Matrix M = rng.normal_matrix(m, d);
  const Matrix Q = (M.transpose() * M) / static_cast<double>(m);
  const Vector b = rng.normal_vector(d);
  const double lam = rng.uniform(0.05, 0.5) * b.cwiseAbs().maxCoeff();
  return make_quadratic_l1(Q, b, lam);
}

/// Random box-constrained least squares with an unconstrained optimum that
/// typically leaves several coordinates clamped.
inline CompositeProblem random_box_ls(SplitMix64& rng, Index d) {
  const Index m = 2 * d;
  const Matrix A = rng.normal_matrix(m, d) / std::sqrt(static_cast<double>(m));
  const Vector b = 2.0 * rng.normal_vector(m);
  const Vector lo = Vector::Constant(d, -0.5);
  const Vector hi = Vector::Constant(d, 0.5);
  return make_box_constrained_ls(A, b, lo, hi);
}

}  // namespace proxpep
