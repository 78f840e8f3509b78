#include "ergoloc/local.hpp"

#include <cmath>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>

#include "ergoloc/parallel.hpp"
#include "ergoloc/random.hpp"
#include "ergoloc/sdp.hpp"

namespace ergoloc {

namespace {

// Unit quaternion (w, x, y, z) of a proper rotation.
Eigen::Vector4d quaternion_of(const Eigen::Matrix3d& r) {
  Eigen::Vector4d q;
  const double tr = r.trace();
  if (tr > 0) {
    const double s = 2.0 * std::sqrt(1.0 + tr);
    q << s / 4, (r(2, 1) - r(1, 2)) / s, (r(0, 2) - r(2, 0)) / s, (r(1, 0) - r(0, 1)) / s;
  } else if (r(0, 0) > r(1, 1) && r(0, 0) > r(2, 2)) {
    const double s = 2.0 * std::sqrt(1.0 + r(0, 0) - r(1, 1) - r(2, 2));
    q << (r(2, 1) - r(1, 2)) / s, s / 4, (r(0, 1) + r(1, 0)) / s, (r(0, 2) + r(2, 0)) / s;
  } else if (r(1, 1) > r(2, 2)) {
    const double s = 2.0 * std::sqrt(1.0 + r(1, 1) - r(0, 0) - r(2, 2));
    q << (r(0, 2) - r(2, 0)) / s, (r(0, 1) + r(1, 0)) / s, s / 4, (r(1, 2) + r(2, 1)) / s;
  } else {
    const double s = 2.0 * std::sqrt(1.0 + r(2, 2) - r(0, 0) - r(1, 1));
    q << (r(1, 0) - r(0, 1)) / s, (r(0, 2) + r(2, 0)) / s, (r(1, 2) + r(2, 1)) / s, s / 4;
  }
  return q / q.norm();
}

// SU(2) element whose orthogonal image is o. The GPO triple for d = 2 has
// sigma^z = -Z, so the rotation is first expressed in the (X, Y, Z) frame.
ComplexMatrix lift_rotation(const RealMatrix& o) {
  const Eigen::Matrix3d p = Eigen::Vector3d(1.0, 1.0, -1.0).asDiagonal();
  const Eigen::Matrix3d r = p * Eigen::Matrix3d(o) * p;
  const Eigen::Vector4d q = quaternion_of(r);
  ComplexMatrix u(2, 2);
  // w I - i (x X + y Y + z Z)
  u(0, 0) = cplx(q(0), -q(3));
  u(1, 1) = cplx(q(0), q(3));
  u(0, 1) = cplx(-q(2), -q(1));
  u(1, 0) = cplx(q(2), -q(1));
  return u;
}


ErgotropyReport optimize_impl(const BipartiteSystem& system, const OptimizerConfig& cfg, bool parallel) {
  if (cfg.restarts < 1) throw InvalidInput("optimizer needs at least one restart");
  if (!(cfg.gradient_tolerance > 0) || cfg.max_iterations < 1) {
    throw InvalidInput("optimizer tolerances must be positive");
  }
  const Dims dims = system.dims();
  const int ds = dims.s;
  const ComplexMatrix c = choi_cost(system.rho(), system.local_hamiltonian(), dims).c;
  const ComplexMatrix id = ComplexMatrix::Identity(ds, ds);
  const ComplexMatrix free_start = *global_ergotropy(system.rho_s(), system.h_s()).optimal_unitary;

  DescentSettings ds_settings;
  ds_settings.max_iterations = cfg.max_iterations;
  ds_settings.gradient_tolerance = cfg.gradient_tolerance;
  ds_settings.step_rule = cfg.step_rule;

  const int total = cfg.restarts + 2;
  std::vector<DescentRun> runs(total);
  const auto run_one = [&](int r) {
    ComplexMatrix start;
    if (r == 0) {
      start = id;
    } else if (r == 1) {
      start = free_start;
    } else {
      Rng rng(stream_seed(cfg.seed, static_cast<std::uint64_t>(r)));
      start = haar_unitary(ds, rng);
    }
    runs[r] = minimize_unitary_quadratic(c, start, ds_settings);
  };
  if (parallel) {
#pragma omp parallel for schedule(dynamic) num_threads(worker_count())
    for (int r = 0; r < total; ++r) run_one(r);
  } else {
    for (int r = 0; r < total; ++r) run_one(r);
  }

  double f_min = runs[0].value;
  for (const auto& run : runs) f_min = std::min(f_min, run.value);
  int best = 0;
  while (runs[best].value > f_min + 1e-10) ++best;

  long iterations = 0;
  for (const auto& run : runs) iterations += run.iterations;

  ErgotropyReport rep;
  const DescentRun& b = runs[best];
  rep.value = local_objective(system, b.u);
  rep.optimal_unitary = b.u;
  rep.branch = "descent";
  rep.diagnostics["restarts"] = total;
  rep.diagnostics["best_restart"] = best;
  rep.diagnostics["iterations"] = static_cast<double>(iterations);
  rep.diagnostics["gradient_norm"] = b.gradient_norm;
  rep.diagnostics["converged"] = b.converged ? 1.0 : 0.0;
  rep.diagnostics["stalled"] = b.stalled ? 1.0 : 0.0;
  rep.diagnostics["quadratic_value"] = b.value;
  return rep;
}

// Tr_S[(a x I) x] = sum_{jk} a_jk x_{(k,.),(j,.)}
ComplexMatrix contract_s(const ComplexMatrix& a, const ComplexMatrix& x, Dims dims) {
  const int de = dims.e;
  ComplexMatrix out = ComplexMatrix::Zero(de, de);
  for (int j = 0; j < dims.s; ++j) {
    for (int k = 0; k < dims.s; ++k) {
      if (a(j, k) != cplx(0.0)) out += a(j, k) * x.block(k * de, j * de, de, de);
    }
  }
  return out;
}

}  // namespace

MMatrix build_m_matrix(const BipartiteSystem& system) {
  const Dims dims = system.dims();
  const GpoBasis bs = gpo_basis(dims.s);
  const int n = bs.size();
  const RealVector r = bloch_vector(system.rho_s(), bs);
  RealVector h(n);
  std::vector<ComplexMatrix> rho_e(n), v_e(n);
  for (int i = 0; i < n; ++i) {
    h(i) = trace_product(bs[i], system.h_s()) / 2.0;
    rho_e[i] = contract_s(bs[i], system.rho(), dims);
    v_e[i] = contract_s(bs[i], system.v(), dims);
  }
  MMatrix m{RealMatrix(n, n), dims.s};
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      m.m(i, k) = -(r(i) * h(k) + 0.5 * (rho_e[i] * v_e[k]).trace().real());
    }
  }
  return m;
}

SparseMatrix SparseSplit::total() const {
  SparseMatrix id_s(dims.s, dims.s), id_e(dims.e, dims.e);
  id_s.setIdentity();
  id_e.setIdentity();
  const SparseMatrix hs = h_s.sparseView();
  SparseMatrix out = Eigen::kroneckerProduct(hs, id_e).eval();
  out += Eigen::kroneckerProduct(id_s, h_e).eval();
  out += v;
  return out;
}

PureStateQuantities pure_state_quantities(const SparseSplit& h, const ComplexVector& psi) {
  const Dims dims = h.dims;
  const int ds = dims.s, de = dims.e;
  require(psi.size() == dims.total(), "pure_state_quantities: state dimension mismatch");
  require(h.h_s.rows() == ds && h.h_s.cols() == ds, "pure_state_quantities: H_S dimension mismatch");
  require(h.h_e.rows() == de && h.h_e.cols() == de, "pure_state_quantities: H_E dimension mismatch");
  require(h.v.rows() == dims.total() && h.v.cols() == dims.total(), "pure_state_quantities: V dimension mismatch");
  if (std::abs(psi.norm() - 1.0) > 1e-10) throw InvalidInput("state vector is not normalized");

  // Psi(a, e) = psi(a * de + e)
  const ComplexMatrix big_psi = Eigen::Map<const ComplexMatrix>(psi.data(), de, ds).transpose();
  PureStateQuantities out;
  out.rho_s = big_psi * big_psi.adjoint();

  // G(b, a, c, d) = <psi_c| V_block(b, a) |psi_d>, plus Tr_S V on the fly.
  std::vector<cplx> g(std::size_t(ds) * ds * ds * ds, cplx(0.0));
  const auto gi = [ds](int b, int a, int c, int d) { return ((std::size_t(b) * ds + a) * ds + c) * ds + d; };
  std::vector<Eigen::Triplet<cplx>> diag_blocks;
  cplx vexp = 0.0;
  for (int col = 0; col < h.v.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(h.v, col); it; ++it) {
      const long row = it.row();
      const int b = int(row / de), e = int(row % de), a = col / de, f = col % de;
      vexp += std::conj(psi(row)) * it.value() * psi(col);
      if (a == b) diag_blocks.emplace_back(e, f, it.value());
      for (int c = 0; c < ds; ++c) {
        const cplx left = std::conj(big_psi(c, e)) * it.value();
        if (left == cplx(0.0)) continue;
        for (int d = 0; d < ds; ++d) g[gi(b, a, c, d)] += left * big_psi(d, f);
      }
    }
  }
  SparseMatrix trs_v(de, de);
  trs_v.setFromTriplets(diag_blocks.begin(), diag_blocks.end());
  double vmax = 0.0, tmax = 0.0;
  for (int k = 0; k < h.v.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(h.v, k); it; ++it) vmax = std::max(vmax, std::abs(it.value()));
  for (int k = 0; k < trs_v.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(trs_v, k); it; ++it) tmax = std::max(tmax, std::abs(it.value()));
  if (tmax > 1e-10 * std::max(1.0, vmax)) {
    throw InvalidInput("coupling has nonzero partial trace over S; use normalize_coupling");
  }

  const GpoBasis bs = gpo_basis(ds);
  const int n = bs.size();
  const RealVector r = bloch_vector(out.rho_s, bs);
  out.m = MMatrix{RealMatrix(n, n), ds};
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      // <psi| s_i (x) V_E^(k) |psi> with V_E^(k) = sum_ab (s_k)_ab V_block(b, a)
      cplx q = 0.0;
      for (int a = 0; a < ds; ++a)
        for (int b = 0; b < ds; ++b) {
          if (bs[k](a, b) == cplx(0.0)) continue;
          for (int c = 0; c < ds; ++c)
            for (int d = 0; d < ds; ++d) q += bs[k](a, b) * bs[i](c, d) * g[gi(b, a, c, d)];
        }
      out.m.m(i, k) = -(r(i) * trace_product(bs[k], h.h_s) / 2.0 + 0.5 * q.real());
    }
  }

  out.energy = (psi.adjoint() * (h.total() * psi))(0).real();
  out.delta_off = -vexp.real();
  out.switch_off = global_ergotropy(out.rho_s, h.h_s).value - out.delta_off;
  return out;
}

MMatrix build_m_matrix_bloch(const BlochDecomposition& b, int d_s) {
  const Eigen::Index n = b.r.size();
  require(n == d_s * d_s - 1, "build_m_matrix_bloch: coefficient count mismatch");
  MMatrix m{RealMatrix(n, n), d_s};
  const RealMatrix tv = b.t * b.v.transpose();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = 0; k < n; ++k) m.m(i, k) = -(b.r(i) * (b.h(k) + b.w(k)) + tv(i, k));
  }
  return m;
}

double bloch_objective(const MMatrix& m, const RealMatrix& o) {
  require(o.rows() == m.m.rows() && o.cols() == m.m.cols(), "bloch_objective: dimension mismatch");
  return (o * m.m).trace() - m.m.trace();
}

double local_objective(const BipartiteSystem& system, const ComplexMatrix& u) {
  const ComplexMatrix h = system.local_hamiltonian();
  const ComplexMatrix moved = apply_local_unitary(system.rho(), u, system.dims());
  return trace_product(h, system.rho()) - trace_product(h, moved);
}

double polar_upper_bound(const MMatrix& m) {
  if (m.m.size() == 0) return 0.0;
  const RealVector sv = Eigen::JacobiSVD<RealMatrix>(m.m).singularValues();
  double value = sv.sum() - m.m.trace();
  if (m.m.determinant() < 0) value -= 2.0 * sv(sv.size() - 1);
  return value;
}

ErgotropyReport qubit_local_ergotropy(const MMatrix& m) {
  if (m.d_s != 2 || m.m.rows() != 3 || m.m.cols() != 3) {
    throw DimensionError("qubit_local_ergotropy requires d_S = 2");
  }
  Eigen::JacobiSVD<RealMatrix> svd(m.m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RealMatrix w = svd.matrixU(), v = svd.matrixV();
  const RealVector sv = svd.singularValues();
  const double det = m.m.determinant();
  Eigen::Vector3d diag(1.0, 1.0, (v * w.transpose()).determinant() < 0 ? -1.0 : 1.0);
  const RealMatrix o = v * diag.asDiagonal() * w.transpose();

  ErgotropyReport rep;
  rep.value = polar_upper_bound(m);
  rep.branch = det >= 0 ? "det>=0" : "det<0";
  rep.bloch_rotation = o;
  const ComplexMatrix u = lift_rotation(o);
  rep.optimal_unitary = u;
  const double lifted = bloch_objective(m, orthogonal_image(u, gpo_basis(2)));
  rep.diagnostics["det"] = det;
  rep.diagnostics["sigma_min"] = sv(2);
  rep.diagnostics["lift_residual"] = std::abs(lifted - rep.value);
  return rep;
}

ErgotropyReport optimize_local_unitary(const BipartiteSystem& system, const OptimizerConfig& cfg) {
  return optimize_impl(system, cfg, true);
}

ErgotropyReport optimize_local_unitary_serial(const BipartiteSystem& system, const OptimizerConfig& cfg) {
  return optimize_impl(system, cfg, false);
}

}  // namespace ergoloc
