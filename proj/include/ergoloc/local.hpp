#pragma once

// Local ergotropy: maximal energy extracted by unitaries acting on S alone,
// with the full interacting Hamiltonian kept on.
//
// In Bloch coordinates the extracted energy of U is Tr[O_U M - M], where O_U
// is the orthogonal image of U and M is built from the state and H_S + V.

#include <cstdint>

#include <Eigen/Sparse>

#include "ergoloc/ergotropy.hpp"
#include "ergoloc/gpo.hpp"
#include "ergoloc/unitary_opt.hpp"

namespace ergoloc {

struct MMatrix {
  RealMatrix m;
  int d_s = 0;
};

struct OptimizerConfig {
  int restarts = 32;  // Haar-random starts, on top of the identity and the free-case optimum
  int max_iterations = 5000;
  double gradient_tolerance = 1e-9;
  StepRule step_rule = StepRule::backtracking;
  std::uint64_t seed = 20240607;
};

/// M_ik = -(r_i h_k + Tr[rho_E^(i) V_E^(k)] / 2) with
/// rho_E^(i) = Tr_S[(s_i x I) rho] and V_E^(k) = Tr_S[(s_k x I) V].
MMatrix build_m_matrix(const BipartiteSystem& system);

/// Same matrix from Bloch coefficients: M_ik = -(r_i (h_k + w_k) + sum_j t_ij v_kj).
MMatrix build_m_matrix_bloch(const BlochDecomposition& b, int d_s);

using SparseMatrix = Eigen::SparseMatrix<cplx>;

/// Hamiltonian split with sparse H_E and V, for registers too large for dense
/// density matrices. Same normalization as BipartiteSystem (Tr_S V = 0).
struct SparseSplit {
  Dims dims;
  ComplexMatrix h_s;
  SparseMatrix h_e, v;
  SparseMatrix total() const;
};

struct PureStateQuantities {
  MMatrix m;
  ComplexMatrix rho_s;
  double energy = 0.0;
  double delta_off = 0.0;
  double switch_off = 0.0;
};

/// M-matrix, reduced state and switch-off values of a pure state, using
/// only sparse products with the coupling. Cost is O(nnz(V) d_S^2).
PureStateQuantities pure_state_quantities(const SparseSplit& h, const ComplexVector& psi);

/// Tr[O M - M].
double bloch_objective(const MMatrix& m, const RealMatrix& o);

/// Tr[(H_S x I + V)(rho - (U x I) rho (U x I)^dagger)].
double local_objective(const BipartiteSystem& system, const ComplexMatrix& u);

/// max over SO(n) of Tr[O M - M] from the singular values of M:
/// sum(sigma) - Tr M, minus 2 sigma_min when det M < 0.
double polar_upper_bound(const MMatrix& m);

/// Exact value for a qubit S, with the maximizing rotation and a unitary
/// realizing it.
ErgotropyReport qubit_local_ergotropy(const MMatrix& m);

/// Restarted Riemannian descent over U(d_S). Restarts run on the OpenMP pool;
/// the result depends only on (system, cfg).
ErgotropyReport optimize_local_unitary(const BipartiteSystem& system, const OptimizerConfig& cfg = {});

/// Single-threaded reference with identical output.
ErgotropyReport optimize_local_unitary_serial(const BipartiteSystem& system, const OptimizerConfig& cfg = {});

}  // namespace ergoloc
