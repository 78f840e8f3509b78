#pragma once

// Unital-channel relaxation of local work extraction.
//
// A channel Phi on S is represented by its Choi matrix
//   E = sum_ij |i><j| (x) Phi(|i><j|)        (input copy first)
// and the energy after applying Phi to the S part of rho is Tr[C E] with
//   C = Tr_E[rho^{T_S} H_{S'E}].
// Unitary channels give E = |U>><<U|, so Tr[C E] = <<U|C|U>> with
// |U>> = vec(U) in column-major order.

#include <string>
#include <vector>

#include "json.hpp"

#include "ergoloc/qmat.hpp"

namespace ergoloc {

struct ChoiCost {
  ComplexMatrix c;
  int d_s = 0;
};

ChoiCost choi_cost(const ComplexMatrix& rho, const ComplexMatrix& h, Dims dims);
ChoiCost choi_cost(const BipartiteSystem& system);

ComplexMatrix choi_matrix(const std::vector<ComplexMatrix>& kraus);
/// (Phi (x) id)(rho) for Phi given by Kraus operators on S.
ComplexMatrix apply_channel_s(const std::vector<ComplexMatrix>& kraus, const ComplexMatrix& rho, Dims dims);

struct SdpOptions {
  double tol = 1e-7;
  long max_iterations = 200000;
  double relaxation = 1.6;
  double penalty = 1.0;
  bool adaptive_penalty = true;
};

struct SdpSolution {
  ComplexMatrix e;
  double objective = 0.0;       // Tr[C E]
  double dual_objective = 0.0;  // certified lower bound on the minimum
  double gap = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  long iterations = 0;
  bool converged = false;
};

struct SdpBound {
  double bound = 0.0;  // rho_energy - min Tr[C E]
  SdpSolution solution;
};

/// Minimizes Tr[C E] over Choi matrices of unital channels (E >= 0,
/// Tr_S E = I, Tr_S' E = I) by over-relaxed ADMM. Non-convergence is reported
/// through solution.converged, not thrown.
SdpBound sdp_upper_bound(const ChoiCost& cost, double rho_energy, const SdpOptions& opts = {});

/// Largest entry of |Tr_S E - I| and |Tr_S' E - I|.
double bimarginal_defect(const ComplexMatrix& e, int d_s);

/// {"d_s": n, "cost": <matrix>, "constraints": "unital-bimarginal", "rho_energy": x}
nlohmann::json export_sdp(const ChoiCost& cost, double rho_energy);
/// Returns the cost and rho_energy (0 when absent). Throws InvalidInput on a
/// malformed instance.
std::pair<ChoiCost, double> import_sdp(const nlohmann::json& j);

}  // namespace ergoloc
