#pragma once

#include <stdexcept>

#include "proxpep/problems.hpp"

namespace proxpep {

/// prox_{phi/c}(y - grad f(y) / c). With c = L this is the update p_L(y).
template <CompositeObjective P>
Vector prox_grad_step(const P& p, const Vector& y, double c) {
  require_dimension(y, p.dimension(), "prox_grad_step");
  if (!(c > 0.0)) throw std::invalid_argument("prox_grad_step: c must be positive");
  return p.prox(y - p.gradient(y) / c, c);
}

/// Composite gradient mapping at `x`: L (x - p_L(x)).
struct MappingEval {
  Vector x;
  Vector prox_point;
  Vector mapping;
  double norm = 0.0;
};

template <CompositeObjective P>
MappingEval composite_gradient_mapping(const P& p, const Vector& x) {
  require_dimension(x, p.dimension(), "composite_gradient_mapping");
  const double L = p.lipschitz();
  MappingEval out;
  out.x = x;
  out.prox_point = prox_grad_step(p, x, L);
  out.mapping = L * (x - out.prox_point);
  out.norm = out.mapping.norm();
  return out;
}

/// F'(p_L(x)) = grad f(p_L(x)) + phi'(p_L(x)) with phi'(p_L(x)) = mapping(x) - grad f(x).
///
/// Throws std::logic_error if the extracted phi' is not a subgradient of phi at
/// p_L(x); that can only happen if the prox or the mapping is wrong.
template <CompositeObjective P>
Vector subgradient_at_prox(const P& p, const Vector& x) {
  const MappingEval me = composite_gradient_mapping(p, x);
  const Vector grad_x = p.gradient(x);
  const Vector phi_sub = me.mapping - grad_x;
  const double scale = p.lipschitz() * (x.cwiseAbs().maxCoeff() + me.prox_point.cwiseAbs().maxCoeff()) +
                       grad_x.cwiseAbs().maxCoeff();
  if (!p.is_subgradient(me.prox_point, phi_sub, scaled_slack(1e-10, scale))) {
    throw std::logic_error("subgradient_at_prox: extracted vector is not a subgradient of phi");
  }
  return p.gradient(me.prox_point) + phi_sub;
}

struct DescentCheck {
  double lhs = 0.0;  // F(x) - F(p_L(x))
  double rhs = 0.0;  // ||mapping(x)||^2 / (2L)

  bool holds(double magnitude) const { return lhs >= rhs - scaled_slack(1e-10, magnitude); }
};

template <CompositeObjective P>
DescentCheck check_descent(const P& p, const Vector& x) {
  const MappingEval me = composite_gradient_mapping(p, x);
  return DescentCheck{eval_F(p, x) - eval_F(p, me.prox_point),
                      me.norm * me.norm / (2.0 * p.lipschitz())};
}

}  // namespace proxpep
