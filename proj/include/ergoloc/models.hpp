#pragma once

// Jaynes-Cummings atom-cavity and XXZ ring builders with closed-form values.
//
// Qubit convention: |0> = down/ground, |1> = up, sigma^z = diag(-1, 1).
// JC basis index: s * (n_max + 1) + n for atom level s and photon number n.
// XXZ basis index: bit (N - m) holds site m (site 1 is the most significant
// bit and is the subsystem S); bit value 1 means up.

#include <optional>
#include <vector>

#include "ergoloc/local.hpp"
#include "ergoloc/qmat.hpp"

namespace ergoloc {

struct SystemPieces {
  Dims dims;
  ComplexMatrix h_s, h_e, v;
  ComplexMatrix total() const;
  BipartiteSystem with_state(const ComplexMatrix& rho) const;
  BipartiteSystem with_state(const ComplexVector& psi) const;
};

enum class Branch { plus, minus };

struct JcParams {
  double omega_s = 1.0;
  double omega_e = 1.2;
  double rabi = 0.1;
  int n_max = 15;
};

/// Cutoff used when callers only fix the dressed level.
inline int default_cutoff(int n) { return n + 5; }

/// H_S = (w_S/2) sigma^z, H_E = w_E a^dag a, V = (Omega/2)(sigma^+ a + sigma^- a^dag).
SystemPieces jc_system(const JcParams& p);

/// Mixing angle with tan(2 theta) = Omega sqrt(n+1) / (w_S - w_E); pi/4 sign(Omega) at resonance.
double jc_theta(const JcParams& p, int n);

/// |n,+> = cos(t)|1,n> + sin(t)|0,n+1>,  |n,-> = sin(t)|1,n> - cos(t)|0,n+1>.
ComplexVector jc_dressed_state(const JcParams& p, int n, Branch b);

/// Eigenvalue of the dressed state, including the w_E/2 offset of the block.
double jc_dressed_energy(const JcParams& p, int n, Branch b);

struct ModelValues {
  double delta_off = 0.0;
  double switch_off = 0.0;
  std::optional<double> local;  // withheld outside the closed formula's regime
};

/// Closed forms as usually quoted for the dressed states.
ModelValues jc_analytic(const JcParams& p, int n, Branch b);

/// Closed forms evaluated from the exact M-matrix of the dressed states
/// M_+ = -diag(s, s, w), M_- = -M_+, s = Omega sqrt(n+1) sin(2t)/4, w = (w_S/2) cos(2t).
ModelValues jc_exact(const JcParams& p, int n, Branch b);
MMatrix jc_m_matrix(const JcParams& p, int n, Branch b);

/// cos(alpha)|n,+> + e^{i phi} sin(alpha)|n,->.
ComplexVector jc_phase_family_vector(const JcParams& p, int n, double alpha, double phi);
ComplexMatrix jc_phase_family_state(const JcParams& p, int n, double alpha, double phi);

/// Relative phase reached after time phi/Omega under the JC dynamics.
double jc_dynamical_phase(const JcParams& p, int n, double phi);

struct SweepRow {
  double phi = 0.0;
  double local = 0.0;
  double switch_off = 0.0;
  double delta_off = 0.0;
};

/// Qubit closed formula along the phase family, one row per phi.
std::vector<SweepRow> jc_sweep(const JcParams& p, int n, double alpha, const std::vector<double>& phis,
                               bool dynamical_phase);
std::vector<SweepRow> jc_sweep_serial(const JcParams& p, int n, double alpha, const std::vector<double>& phis,
                                      bool dynamical_phase);

struct XxzParams {
  int n_sites = 4;
  double epsilon = 1.0;
  double j = 0.1;
  double j_z = 0.1;
};

inline constexpr int kXxzDenseLimit = 10;
inline constexpr int kXxzSparseLimit = 14;

/// H = sum_m [eps sigma^z_m - J (x_m x_{m+1} + y_m y_{m+1}) - J_z z_m z_{m+1}] on
/// a ring, split with S = site 1. Throws InvalidInput for N < 3 or N above
/// the dense limit (2^N x 2^N matrices).
SystemPieces xxz_system(const XxzParams& p);

/// Same Hamiltonian with sparse H_E and V, up to kXxzSparseLimit sites.
SparseSplit xxz_system_sparse(const XxzParams& p);

/// Range check for the magnon momentum: -floor(N/2) < k <= floor(N/2).
bool xxz_k_valid(int n_sites, int k);
std::vector<int> xxz_k_values(int n_sites);

ComplexVector xxz_bethe_state(const XxzParams& p, int k);
double xxz_bethe_energy(const XxzParams& p, int k);

struct XxzAnalytic {
  ModelValues values;
  double m33_quoted = 0.0;  // (N-1) eps/N + (N-4) J_z/N
  double m33_exact = 0.0;      // ((N-2) eps + (2N-8) J_z)/N
  bool text_condition = false;  // (N-1) eps/N + (2N-8) J_z/N >= 0
  bool regime = false;          // m33_exact >= 0, the operative condition
};

/// Closed forms as usually quoted for single-magnon states.
XxzAnalytic xxz_analytic(const XxzParams& p, int k);

/// Exact M-matrix diag(4Jc/N, 4Jc/N, m33_exact), c = cos(2 pi k/N), and the
/// values that follow from it.
MMatrix xxz_m_matrix(const XxzParams& p, int k);
ModelValues xxz_exact(const XxzParams& p, int k);

}  // namespace ergoloc
