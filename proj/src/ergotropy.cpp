#include "ergoloc/ergotropy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "ergoloc/assignment.hpp"

namespace ergoloc {

namespace {

void check_state(const ComplexMatrix& rho) {
  if (rho.rows() != rho.cols()) throw DimensionError("state must be square");
  const ComplexMatrix r = hermitize(rho);
  if (std::abs(r.trace().real() - 1.0) > 1e-10) throw InvalidInput("state trace differs from 1");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(r, Eigen::EigenvaluesOnly);
  if (es.eigenvalues()(0) < -1e-10) throw InvalidInput("state is not positive semidefinite");
}

void check_distribution(const double* p, std::size_t n) {
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (p[i] < -1e-12) throw InvalidInput("probabilities must be non-negative");
    total += p[i];
  }
  if (std::abs(total - 1.0) > 1e-10) throw InvalidInput("probabilities must sum to 1");
}

// Tr_E[|a><b|] for vectors on S x E.
ComplexMatrix reduced_transition(const ComplexVector& a, const ComplexVector& b, Dims dims) {
  const Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> am(
      a.data(), dims.s, dims.e);
  const Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> bm(
      b.data(), dims.s, dims.e);
  return am * bm.adjoint();
}

double trace_norm_expression(const ComplexMatrix& rho, const ComplexMatrix& h, Dims dims,
                             bool shift_to_nonnegative) {
  require(rho.rows() == dims.total() && h.rows() == dims.total(), "trace-norm bound: dimension mismatch");
  check_state(rho);
  const EigenSystem eh = hermitian_eig(h);
  const EigenSystem er = hermitian_eig(rho);
  const double shift = shift_to_nonnegative ? eh.values.minCoeff() : eh.values.maxCoeff();
  const double energy = trace_product(rho, h) - shift;
  double acc = 0.0;
  for (Eigen::Index j = 0; j < er.values.size(); ++j) {
    const double p = er.values(j);
    if (std::abs(p) < 1e-15) continue;
    for (Eigen::Index k = 0; k < eh.values.size(); ++k) {
      const double e = eh.values(k) - shift;
      if (e == 0.0) continue;
      const double n1 = trace_norm(reduced_transition(er.vectors.col(j), eh.vectors.col(k), dims));
      acc += p * e * n1 * n1;
    }
  }
  return energy - acc;
}

}  // namespace

ErgotropyReport global_ergotropy(const ComplexMatrix& rho, const ComplexMatrix& h) {
  if (rho.rows() != h.rows() || rho.cols() != h.cols()) {
    throw DimensionError("global_ergotropy: state and Hamiltonian dimensions differ");
  }
  check_state(rho);
  const EigenSystem eh = hermitian_eig(h);
  const EigenSystem er = hermitian_eig(rho);
  const Eigen::Index n = rho.rows();
  ErgotropyReport rep;
  ComplexMatrix u = ComplexMatrix::Zero(n, n);
  ComplexMatrix passive = ComplexMatrix::Zero(n, n);
  double passive_energy = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    // Eigen's solver returns ascending values; walk rho from the top.
    const Eigen::Index src = n - 1 - i;
    const double p = std::max(0.0, er.values(src));
    passive_energy += p * eh.values(i);
    u += eh.vectors.col(i) * er.vectors.col(src).adjoint();
    passive += p * eh.vectors.col(i) * eh.vectors.col(i).adjoint();
  }
  const double energy = trace_product(rho, h);
  rep.value = energy - passive_energy;
  rep.optimal_unitary = u;
  rep.passive_state = passive;
  rep.branch = "rearrangement";
  rep.diagnostics["energy"] = energy;
  rep.diagnostics["passive_energy"] = passive_energy;
  return rep;
}

double classical_ergotropy(const std::vector<double>& p, const std::vector<double>& eps) {
  if (p.size() != eps.size()) throw DimensionError("classical_ergotropy: length mismatch");
  check_distribution(p.data(), p.size());
  std::vector<double> pd(p), ea(eps);
  std::stable_sort(pd.begin(), pd.end(), std::greater<>());
  std::stable_sort(ea.begin(), ea.end());
  double initial = 0.0, final_energy = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    initial += p[i] * eps[i];
    final_energy += pd[i] * ea[i];
  }
  return initial - final_energy;
}

ClassicalLocalResult classical_local_ergotropy(const RealMatrix& p, const RealMatrix& e) {
  if (p.rows() != e.rows() || p.cols() != e.cols()) {
    throw DimensionError("classical_local_ergotropy: shape mismatch");
  }
  const RealMatrix pc = p;  // contiguous copy for the distribution check
  check_distribution(pc.data(), static_cast<std::size_t>(pc.size()));
  // cost(i, m) = energy of placing population row m onto energy row i
  const RealMatrix cost = e * p.transpose();
  const Assignment a = solve_assignment(cost);
  ClassicalLocalResult out;
  out.permutation = a.column;
  out.initial_energy = p.cwiseProduct(e).sum();
  out.final_energy = a.cost;
  out.value = out.initial_energy - out.final_energy;
  return out;
}

double delta_off(const BipartiteSystem& system) { return -trace_product(system.rho(), system.v()); }

double switch_off_ergotropy(const BipartiteSystem& system) {
  return global_ergotropy(system.rho_s(), system.h_s()).value - delta_off(system);
}

double effective_local_ergotropy_product(const ComplexMatrix& rho_s, const ComplexMatrix& rho_e,
                                         const ComplexMatrix& h_s, const ComplexMatrix& v) {
  const Dims dims{static_cast<int>(rho_s.rows()), static_cast<int>(rho_e.rows())};
  require(h_s.rows() == dims.s && v.rows() == dims.total(), "effective_local_ergotropy_product: dimension mismatch");
  const ComplexMatrix contracted = partial_trace(v * lift_e(dims.s, rho_e), dims, Side::E);
  return global_ergotropy(rho_s, hermitize(h_s + contracted, 1e-8)).value;
}

HsGapBounds hs_gap_bounds(const BipartiteSystem& system) {
  const double p = system.rho().norm() * system.v().norm();
  return {2.0 * p, p};
}

double two_level_exact(const ComplexVector& psi, const ComplexMatrix& h, Dims dims) {
  require(psi.size() == dims.total() && h.rows() == dims.total(), "two_level_exact: dimension mismatch");
  if (std::abs(psi.norm() - 1.0) > 1e-10) throw InvalidInput("two_level_exact: state is not normalized");
  const EigenSystem eh = hermitian_eig(h);
  const double lo = eh.values(0), hi = eh.values(eh.values.size() - 1);
  const double tol = 1e-9 * std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
  if (hi - lo <= tol) throw InvalidInput("two_level_exact: operator has a single level");
  for (Eigen::Index k = 1; k < eh.values.size(); ++k) {
    const double x = eh.values(k);
    if (std::abs(x - lo) <= tol) throw InvalidInput("two_level_exact: lower level is degenerate");
    if (std::abs(x - hi) > tol) throw InvalidInput("two_level_exact: operator has more than two levels");
  }
  const double gap = hi - lo;
  const double energy = (psi.adjoint() * h * psi)(0, 0).real() - hi;
  const double n1 = trace_norm(reduced_transition(psi, eh.vectors.col(0), dims));
  return energy + gap * n1 * n1;
}

double two_level_lower_bound(const ComplexMatrix& rho, const ComplexMatrix& h, Dims dims) {
  return trace_norm_expression(rho, h, dims, true);
}

double two_level_lower_bound(const BipartiteSystem& system) {
  return two_level_lower_bound(system.rho(), system.local_hamiltonian(), system.dims());
}

double trace_norm_upper_bound(const ComplexMatrix& rho, const ComplexMatrix& h, Dims dims) {
  return trace_norm_expression(rho, h, dims, false);
}

}  // namespace ergoloc
