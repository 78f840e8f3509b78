#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ergoloc/qmat.hpp"

namespace ergoloc {

struct ErgotropyReport {
  double value = 0.0;
  std::optional<ComplexMatrix> optimal_unitary;
  std::optional<ComplexMatrix> passive_state;
  std::optional<RealMatrix> bloch_rotation;
  std::string branch;
  std::map<std::string, double> diagnostics;
};

/// Tr[rho H] - sum_i p_i(desc) e_i(asc). The unitary maps the i-th most
/// populated eigenvector of rho to the i-th lowest level of H.
ErgotropyReport global_ergotropy(const ComplexMatrix& rho, const ComplexMatrix& h);

/// Rearrangement value sum p_i e_i - sum p_i(desc) e_i(asc).
double classical_ergotropy(const std::vector<double>& p, const std::vector<double>& eps);

struct ClassicalLocalResult {
  double value = 0.0;
  std::vector<int> permutation;  // row i of E receives the populations of row permutation[i] of P
  double initial_energy = 0.0;
  double final_energy = 0.0;
};

/// Local rearrangement of the S index of a joint distribution P (d_S x d_E)
/// under energies E: sum P E - min_pi sum_ij P[pi(i), j] E[i, j].
ClassicalLocalResult classical_local_ergotropy(const RealMatrix& p, const RealMatrix& e);

/// -Tr[rho V].
double delta_off(const BipartiteSystem& system);

/// Ergotropy of rho_S under H_S minus delta_off. Lamb shifts are ignored.
double switch_off_ergotropy(const BipartiteSystem& system);

/// Global ergotropy of rho_S under H_S + Tr_E[V (I x rho_E)].
double effective_local_ergotropy_product(const ComplexMatrix& rho_s, const ComplexMatrix& rho_e,
                                         const ComplexMatrix& h_s, const ComplexMatrix& v);

struct HsGapBounds {
  double bound_vs_free = 0.0;  // 2 ||rho||_2 ||V||_2
  double bound_vs_off = 0.0;   // ||rho||_2 ||V||_2
};

HsGapBounds hs_gap_bounds(const BipartiteSystem& system);

/// Local ergotropy of a pure state under a two-level operator H on S x E
/// (any I x H_E part drops out). Requires exactly two distinct eigenvalues
/// and a non-degenerate lower one; throws InvalidInput otherwise.
double two_level_exact(const ComplexVector& psi, const ComplexMatrix& h, Dims dims);

/// Lower bound on the local ergotropy from trace norms of the reduced
/// transition operators Tr_E[|e_k><j|], with the spectrum of H shifted to be
/// non-negative.
double two_level_lower_bound(const ComplexMatrix& rho, const ComplexMatrix& h, Dims dims);
double two_level_lower_bound(const BipartiteSystem& system);

/// Same expression with the spectrum shifted to be non-positive. This is an
/// upper bound, tight for pure states of two-level operators.
double trace_norm_upper_bound(const ComplexMatrix& rho, const ComplexMatrix& h, Dims dims);

}  // namespace ergoloc
