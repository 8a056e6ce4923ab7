#pragma once

#include <Eigen/Eigenvalues>

#include <stdexcept>

#include "proxpep/types.hpp"

namespace proxpep {

inline double max_abs_entry(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/// True when |M - M^T| <= tol * max(1, max|M_ij|) entrywise.
inline bool is_symmetric(const Matrix& m, double tol = 1e-12) {
  if (m.rows() != m.cols()) return false;
  const double bound = tol * std::max(1.0, max_abs_entry(m));
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= bound;
}

namespace detail {

inline Vector symmetric_eigenvalues(const Matrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw std::invalid_argument(std::string(what) + ": matrix must be square and non-empty");
  }
  if (!is_symmetric(m)) {
    throw std::invalid_argument(std::string(what) + ": matrix is not symmetric");
  }
  const Matrix sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error(std::string(what) + ": eigen-decomposition failed");
  }
  return solver.eigenvalues();  // ascending
}

}  // namespace detail

/// Smallest eigenvalue of a symmetric matrix.
inline double min_eigenvalue(const Matrix& m) {
  return detail::symmetric_eigenvalues(m, "min_eigenvalue")(0);
}

/// Largest eigenvalue of a symmetric matrix.
inline double max_eigenvalue(const Matrix& m) {
  const Vector ev = detail::symmetric_eigenvalues(m, "max_eigenvalue");
  return ev(ev.size() - 1);
}

}  // namespace proxpep
