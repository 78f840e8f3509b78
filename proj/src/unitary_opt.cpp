#include "ergoloc/unitary_opt.hpp"

#include <algorithm>
#include <cmath>

namespace ergoloc {

namespace {

Eigen::Map<const ComplexVector> as_vec(const ComplexMatrix& u) {
  return Eigen::Map<const ComplexVector>(u.data(), u.size());
}

}  // namespace

double quadratic_value(const ComplexMatrix& c, const ComplexMatrix& u) {
  const auto w = as_vec(u);
  return w.dot(c * w).real();
}

ComplexMatrix unitary_gradient(const ComplexMatrix& c, const ComplexMatrix& u) {
  const ComplexVector cw = c * as_vec(u);
  const Eigen::Map<const ComplexMatrix> y(cw.data(), u.rows(), u.cols());
  const ComplexMatrix b = u * y.adjoint();
  return kI * (b - b.adjoint());
}

ComplexMatrix nearest_unitary(const ComplexMatrix& a) {
  Eigen::JacobiSVD<ComplexMatrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

DescentRun minimize_unitary_quadratic(const ComplexMatrix& c, ComplexMatrix u0, const DescentSettings& s) {
  require(c.rows() == u0.size() && c.cols() == u0.size(), "minimize_unitary_quadratic: cost dimension");
  const double cnorm = std::max(operator_norm(c), 1e-300);
  const double t_min = 1e-14 / cnorm, t_max = 1e4 / cnorm;

  DescentRun run;
  run.u = std::move(u0);
  run.value = quadratic_value(c, run.u);
  ComplexMatrix a = unitary_gradient(c, run.u);
  double t = 0.5 / cnorm;
  for (run.iterations = 0; run.iterations < s.max_iterations; ++run.iterations) {
    const double g2 = a.squaredNorm();
    run.gradient_norm = std::sqrt(g2);
    if (run.gradient_norm <= s.gradient_tolerance) {
      run.converged = true;
      break;
    }
    ComplexMatrix trial;
    double f_trial = 0.0;
    if (s.step_rule == StepRule::fixed) {
      t = s.fixed_step / cnorm;
      trial = expi_hermitian(-t * a) * run.u;
      f_trial = quadratic_value(c, trial);
    } else {
      bool accepted = false;
      while (t >= t_min) {
        trial = expi_hermitian(-t * a) * run.u;
        f_trial = quadratic_value(c, trial);
        if (f_trial <= run.value - 1e-4 * t * g2) {
          accepted = true;
          break;
        }
        t *= 0.5;
      }
      if (!accepted) {
        run.stalled = true;
        run.converged = true;
        break;
      }
    }
    if ((run.iterations + 1) % 100 == 0) {
      trial = nearest_unitary(trial);
      f_trial = quadratic_value(c, trial);
    }
    const ComplexMatrix a_new = unitary_gradient(c, trial);
    if (s.step_rule == StepRule::backtracking) {
      // Barzilai-Borwein step on the shared Lie algebra.
      const ComplexMatrix step = -t * a;
      const double sy = trace_product(step, a_new - a);
      const double ss = step.squaredNorm();
      t = sy > 0 ? std::clamp(ss / sy, t_min, t_max) : std::min(2.0 * t, t_max);
    }
    run.u = std::move(trial);
    run.value = f_trial;
    a = a_new;
  }
  if (!run.converged) run.gradient_norm = a.norm();
  return run;
}

}  // namespace ergoloc
