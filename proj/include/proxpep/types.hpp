#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace proxpep {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Extended-real values are plain doubles; +inf marks points outside dom(phi).
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

inline bool is_finite(double v) { return std::isfinite(v); }

/// Slack of the form `rel * max(1, |magnitude|)` used by all inequality checks.
inline double scaled_slack(double rel, double magnitude) {
  return rel * std::max(1.0, std::abs(magnitude));
}

inline void require_dimension(const Vector& x, Index d, const char* what) {
  if (x.size() != d) {
    throw std::invalid_argument(std::string(what) + ": expected dimension " +
                                std::to_string(d) + ", got " +
                                std::to_string(x.size()));
  }
}

}  // namespace proxpep
