#pragma once

// Dense complex linear algebra on finite bipartite spaces.
//
// Index convention (used everywhere in ergoloc): for an operator on S (x) E the
// row/column index of |i_S>|i_E> is i_S * d_E + i_E, i.e. S is the
// most-significant factor.

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace ergoloc {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr cplx kI{0.0, 1.0};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

class NotConverged : public Error {
 public:
  using Error::Error;
};

/// Dimensions of a bipartite space S (x) E.
struct Dims {
  int s = 0;
  int e = 0;
  int total() const { return s * e; }
  bool operator==(const Dims&) const = default;
};

/// Which subsystem a partial trace removes.
enum class Side { S, E };

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b);

/// Traces out `traced`; the result lives on the other factor.
ComplexMatrix partial_trace(const ComplexMatrix& a, Dims dims, Side traced);

/// Transposes the S index pair only. Involution, trace preserving.
ComplexMatrix partial_transpose_s(const ComplexMatrix& a, Dims dims);

struct EigenSystem {
  RealVector values;      // ascending
  ComplexMatrix vectors;  // orthonormal columns
};

/// Spectral decomposition of a Hermitian matrix. Throws InvalidInput if `a`
/// is not Hermitian within the hermitize() tolerance.
EigenSystem hermitian_eig(const ComplexMatrix& a);

struct Norms {
  double hilbert_schmidt = 0.0;
  double trace = 0.0;
  double op = 0.0;
};

Norms norms(const ComplexMatrix& a);
double hs_norm(const ComplexMatrix& a);
double trace_norm(const ComplexMatrix& a);
double operator_norm(const ComplexMatrix& a);

/// Largest |A_ij - conj(A_ji)|.
double hermiticity_defect(const ComplexMatrix& a);
bool is_hermitian(const ComplexMatrix& a, double tol = 1e-12);

/// Returns (A + A^dagger)/2. Drift above tol * max(1, max|A_ij|) is treated
/// as a modelling error and throws InvalidInput.
ComplexMatrix hermitize(const ComplexMatrix& a, double tol = 1e-10);

/// exp(iA) for Hermitian A, through its eigendecomposition.
ComplexMatrix expi_hermitian(const ComplexMatrix& a);

ComplexMatrix projector(const ComplexVector& psi);

/// Re Tr[a b]; both arguments are expected Hermitian.
double trace_product(const ComplexMatrix& a, const ComplexMatrix& b);

/// Identity of the S or E factor lifted to S (x) E: a (x) I_E.
ComplexMatrix lift_s(const ComplexMatrix& a, int de);
/// I_S (x) b.
ComplexMatrix lift_e(int ds, const ComplexMatrix& b);

/// (U (x) I) rho (U (x) I)^dagger without forming the Kronecker product.
ComplexMatrix apply_local_unitary(const ComplexMatrix& rho, const ComplexMatrix& u, Dims dims);

inline void require(bool cond, const std::string& what) {
  if (!cond) throw DimensionError(what);
}

/// State and Hamiltonian split H = H_S (x) I + I (x) H_E + V with Tr_S V = 0.
class BipartiteSystem {
 public:
  /// Validates and symmetrizes all operators. Throws InvalidInput when rho is
  /// not a density matrix or Tr_S V is nonzero, DimensionError on shape
  /// mismatch.
  BipartiteSystem(Dims dims, ComplexMatrix rho, ComplexMatrix h_s, ComplexMatrix h_e,
                  ComplexMatrix v);

  /// Splits an arbitrary Hermitian H on S (x) E into the normalized form.
  static BipartiteSystem from_total_hamiltonian(Dims dims, ComplexMatrix rho,
                                                const ComplexMatrix& h_total);

  /// Moves Tr_S[V]/d_S into H_E so that the coupling has zero S partial
  /// trace. Returns the adjusted (H_E, V).
  static std::pair<ComplexMatrix, ComplexMatrix> normalize_coupling(Dims dims,
                                                                    const ComplexMatrix& h_e,
                                                                    const ComplexMatrix& v);

  Dims dims() const { return dims_; }
  const ComplexMatrix& rho() const { return rho_; }
  const ComplexMatrix& h_s() const { return h_s_; }
  const ComplexMatrix& h_e() const { return h_e_; }
  const ComplexMatrix& v() const { return v_; }

  ComplexMatrix total_hamiltonian() const;
  /// H_S (x) I + V: the part of H that local unitaries on S can act against.
  ComplexMatrix local_hamiltonian() const;
  ComplexMatrix rho_s() const { return partial_trace(rho_, dims_, Side::E); }
  ComplexMatrix rho_e() const { return partial_trace(rho_, dims_, Side::S); }
  double energy() const { return trace_product(rho_, total_hamiltonian()); }

  BipartiteSystem with_state(ComplexMatrix rho) const;

 private:
  Dims dims_;
  ComplexMatrix rho_, h_s_, h_e_, v_;
};

}  // namespace ergoloc
