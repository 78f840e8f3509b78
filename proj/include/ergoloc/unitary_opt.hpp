#pragma once

// Minimization of f(U) = <<U|C|U>> over the unitary group, |U>> = vec(U)
// column-major. Updates are U <- exp(i t G) U with a Hermitian generator G,
// so f(exp(i t G) U) = f(U) + t Tr[A G] + O(t^2) where A is the gradient
// returned by unitary_gradient().

#include "ergoloc/qmat.hpp"

namespace ergoloc {

enum class StepRule { fixed, backtracking };

struct DescentSettings {
  int max_iterations = 5000;
  double gradient_tolerance = 1e-9;
  StepRule step_rule = StepRule::backtracking;
  double fixed_step = 0.1;  // in units of 1/||C||_op
};

struct DescentRun {
  ComplexMatrix u;
  double value = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  bool stalled = false;  // line search could not decrease f any further
};

double quadratic_value(const ComplexMatrix& c, const ComplexMatrix& u);
ComplexMatrix unitary_gradient(const ComplexMatrix& c, const ComplexMatrix& u);

DescentRun minimize_unitary_quadratic(const ComplexMatrix& c, ComplexMatrix u0, const DescentSettings& s);

/// Nearest unitary (polar factor).
ComplexMatrix nearest_unitary(const ComplexMatrix& a);

}  // namespace ergoloc
