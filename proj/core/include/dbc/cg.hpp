#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "dbc/spaces.hpp"

namespace dbc {

class CgBreakdown : public std::runtime_error {
 public:
  CgBreakdown(const std::string& what, int iterations)
      : std::runtime_error(what), iterations_(iterations) {}
  int iterations() const { return iterations_; }

 private:
  int iterations_;
};

struct CgResult {
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

/// Preconditioned CG for a symmetric positive definite operator given only
/// through its action. Stops once ||r|| <= tolerance * ||b - A x0||.
template <class Apply, class Precondition>
CgResult conjugate_gradient(Apply&& apply, Precondition&& precondition, const Vector& b, Vector& x,
                            double tolerance, int max_iterations) {
  Vector r = b - apply(x);
  const double r0 = r.norm();
  CgResult result;
  if (r0 == 0.0) {
    result.converged = true;
    return result;
  }
  Vector z = precondition(r);
  Vector p = z;
  double rz = r.dot(z);
  for (int it = 1; it <= max_iterations; ++it) {
    const Vector ap = apply(p);
    const double curvature = p.dot(ap);
    if (!(curvature > 0.0))
      throw CgBreakdown("CG breakdown: non-positive curvature at iteration " + std::to_string(it), it);
    const double alpha = rz / curvature;
    x += alpha * p;
    r -= alpha * ap;
    result.iterations = it;
    result.relative_residual = r.norm() / r0;
    if (result.relative_residual <= tolerance) {
      result.converged = true;
      return result;
    }
    z = precondition(r);
    const double rz_next = r.dot(z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
  }
  return result;
}

}  // namespace dbc
