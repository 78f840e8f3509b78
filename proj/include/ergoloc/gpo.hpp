#pragma once

// Generalized Pauli operators and Bloch coordinates.
//
// Basis order: x-type pairs (j < j' lexicographic), y-type pairs, then the
// d-1 diagonal operators. Every element is traceless with Tr[s_i s_j] = 2 d_ij.
// For d = 2 this is (sigma^x, sigma^y, sigma^z) with sigma^z = diag(-1, 1):
// |0> is the lower (ground) level.

#include <vector>

#include "ergoloc/qmat.hpp"

namespace ergoloc {

struct GpoBasis {
  int d = 0;
  std::vector<ComplexMatrix> sigmas;
  int size() const { return static_cast<int>(sigmas.size()); }
  const ComplexMatrix& operator[](int i) const { return sigmas[i]; }
};

GpoBasis gpo_basis(int d);

/// Coefficients of a system in the product GPO basis.
///   r_i = Tr[s_i rho_S], q_j = Tr[s_j rho_E], t_ij = Tr[rho (s_i x s_j)]
///   H_S = c I + sum_i h_i s_i
///   V = sum_ij v_ij s_i x s_j + sum_k w_k s_k x I
struct BlochDecomposition {
  RealVector r, q;
  RealMatrix t;
  RealVector h;
  double c = 0.0;
  RealMatrix v;
  RealVector w;
};

BlochDecomposition decompose(const BipartiteSystem& system);

/// r_i = Tr[s_i rho].
RealVector bloch_vector(const ComplexMatrix& rho, const GpoBasis& basis);
/// I/d + (1/2) sum r_i s_i.
ComplexMatrix state_from_bloch(const RealVector& r, const GpoBasis& basis);

ComplexMatrix reconstruct_state(const BlochDecomposition& b, Dims dims);
ComplexMatrix reconstruct_h_s(const BlochDecomposition& b, int ds);
ComplexMatrix reconstruct_coupling(const BlochDecomposition& b, Dims dims);

/// (O_U)_ij = Tr[s_i U s_j U^dagger] / 2. Throws InvalidInput if U is not
/// unitary within 1e-10.
RealMatrix orthogonal_image(const ComplexMatrix& u, const GpoBasis& basis);

}  // namespace ergoloc
