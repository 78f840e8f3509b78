#include "ergoloc/models.hpp"

#include <cmath>
#include <numbers>

#include "ergoloc/ergotropy.hpp"
#include "ergoloc/parallel.hpp"

namespace ergoloc {

namespace {

using std::numbers::pi;

ComplexMatrix pauli_z() {
  ComplexMatrix z = ComplexMatrix::Zero(2, 2);
  z(0, 0) = -1.0;
  z(1, 1) = 1.0;
  return z;
}

void check_jc(const JcParams& p) {
  if (p.n_max < 2) throw InvalidInput("JC cutoff n_max must be at least 2");
  if (!std::isfinite(p.omega_s) || !std::isfinite(p.omega_e) || !std::isfinite(p.rabi)) {
    throw InvalidInput("JC frequencies must be finite");
  }
}

void check_level(const JcParams& p, int n) {
  check_jc(p);
  if (n < 0 || n + 1 >= p.n_max) throw InvalidInput("dressed level needs n + 1 < n_max");
}

// Diagonal energies and hopping on a register of nq qubits; position 0 is
// the most significant bit.
SparseMatrix xxz_terms(int nq, const std::vector<int>& z_sites, double eps,
                       const std::vector<std::pair<int, int>>& bonds, double j, double jz) {
  const long dim = 1L << nq;
  std::vector<Eigen::Triplet<cplx>> entries;
  entries.reserve(dim * (1 + bonds.size()));
  const auto bit = [nq](long idx, int pos) { return (idx >> (nq - 1 - pos)) & 1L; };
  for (long idx = 0; idx < dim; ++idx) {
    double diag = 0.0;
    for (int s : z_sites) diag += eps * (2.0 * bit(idx, s) - 1.0);
    for (auto [a, b] : bonds) {
      const double za = 2.0 * bit(idx, a) - 1.0, zb = 2.0 * bit(idx, b) - 1.0;
      diag -= jz * za * zb;
      if (bit(idx, a) != bit(idx, b) && j != 0.0) {
        const long flipped = idx ^ (1L << (nq - 1 - a)) ^ (1L << (nq - 1 - b));
        entries.emplace_back(flipped, idx, -2.0 * j);
      }
    }
    if (diag != 0.0) entries.emplace_back(idx, idx, diag);
  }
  SparseMatrix h(dim, dim);
  h.setFromTriplets(entries.begin(), entries.end());
  return h;
}

void check_xxz(const XxzParams& p, int limit, const char* what) {
  const int n = p.n_sites;
  if (n < 3) throw InvalidInput("XXZ ring needs at least 3 sites");
  if (n > limit) {
    throw InvalidInput("XXZ ring with " + std::to_string(n) + " sites exceeds the " + what + " limit of " +
                       std::to_string(limit) + " sites");
  }
}

double dressed_sign(Branch b) { return b == Branch::plus ? 1.0 : -1.0; }

}  // namespace

ComplexMatrix SystemPieces::total() const {
  return lift_s(h_s, dims.e) + lift_e(dims.s, h_e) + v;
}

BipartiteSystem SystemPieces::with_state(const ComplexMatrix& rho) const {
  return BipartiteSystem(dims, rho, h_s, h_e, v);
}

BipartiteSystem SystemPieces::with_state(const ComplexVector& psi) const {
  return with_state(projector(psi));
}

SystemPieces jc_system(const JcParams& p) {
  check_jc(p);
  const int de = p.n_max + 1;
  ComplexMatrix a = ComplexMatrix::Zero(de, de);
  ComplexMatrix num = ComplexMatrix::Zero(de, de);
  for (int n = 1; n < de; ++n) a(n - 1, n) = std::sqrt(double(n));
  for (int n = 0; n < de; ++n) num(n, n) = double(n);
  ComplexMatrix sp = ComplexMatrix::Zero(2, 2);
  sp(1, 0) = 1.0;
  SystemPieces out;
  out.dims = {2, de};
  out.h_s = p.omega_s / 2.0 * pauli_z();
  out.h_e = p.omega_e * num;
  out.v = p.rabi / 2.0 * (tensor_product(sp, a) + tensor_product(sp.adjoint(), a.adjoint()));
  return out;
}

double jc_theta(const JcParams& p, int n) {
  const double delta = p.omega_s - p.omega_e;
  const double x = p.rabi * std::sqrt(n + 1.0);
  if (delta == 0.0) return x == 0.0 ? 0.0 : std::copysign(pi / 4, x);
  return 0.5 * std::atan(x / delta);
}

ComplexVector jc_dressed_state(const JcParams& p, int n, Branch b) {
  check_level(p, n);
  const int de = p.n_max + 1;
  const double t = jc_theta(p, n);
  ComplexVector psi = ComplexVector::Zero(2 * de);
  const int up_n = 1 * de + n, down_n1 = n + 1;
  if (b == Branch::plus) {
    psi(up_n) = std::cos(t);
    psi(down_n1) = std::sin(t);
  } else {
    psi(up_n) = std::sin(t);
    psi(down_n1) = -std::cos(t);
  }
  return psi;
}

double jc_dressed_energy(const JcParams& p, int n, Branch b) {
  const double t = jc_theta(p, n);
  const double delta = p.omega_s - p.omega_e;
  const double g = p.rabi * std::sqrt(n + 1.0) / 2.0;
  return p.omega_e * (n + 0.5) + dressed_sign(b) * (delta / 2.0 * std::cos(2 * t) + g * std::sin(2 * t));
}

ModelValues jc_analytic(const JcParams& p, int n, Branch b) {
  const double t = jc_theta(p, n);
  const double w = p.omega_s * std::cos(2 * t);
  const double s = std::sqrt(n + 1.0) / 2.0 * std::abs(p.rabi * std::sin(2 * t));
  ModelValues out;
  out.delta_off = 0.0;
  if (b == Branch::plus) {
    out.switch_off = w;
    out.local = w + s;
  } else {
    out.switch_off = 0.0;
    out.local = s - std::min(w, s);
  }
  return out;
}

MMatrix jc_m_matrix(const JcParams& p, int n, Branch b) {
  const double t = jc_theta(p, n);
  const double s = p.rabi * std::sqrt(n + 1.0) * std::sin(2 * t) / 4.0;
  const double w = p.omega_s / 2.0 * std::cos(2 * t);
  MMatrix m{-dressed_sign(b) * Eigen::Vector3d(s, s, w).asDiagonal().toDenseMatrix(), 2};
  return m;
}

ModelValues jc_exact(const JcParams& p, int n, Branch b) {
  const double t = jc_theta(p, n);
  const double big_s = p.rabi * std::sqrt(n + 1.0) * std::sin(2 * t) / 2.0;  // <n,+|V|n,+>
  const double c2 = std::cos(t) * std::cos(t), s2 = std::sin(t) * std::sin(t);
  // Reduced atom populations (down, up).
  const std::vector<double> pops = b == Branch::plus ? std::vector<double>{s2, c2} : std::vector<double>{c2, s2};
  const std::vector<double> levels{-p.omega_s / 2.0, p.omega_s / 2.0};
  ModelValues out;
  out.delta_off = -dressed_sign(b) * big_s;
  out.switch_off = classical_ergotropy(pops, levels) - out.delta_off;
  out.local = polar_upper_bound(jc_m_matrix(p, n, b));
  return out;
}

ComplexVector jc_phase_family_vector(const JcParams& p, int n, double alpha, double phi) {
  return std::cos(alpha) * jc_dressed_state(p, n, Branch::plus) +
         std::exp(kI * phi) * std::sin(alpha) * jc_dressed_state(p, n, Branch::minus);
}

ComplexMatrix jc_phase_family_state(const JcParams& p, int n, double alpha, double phi) {
  return projector(jc_phase_family_vector(p, n, alpha, phi));
}

double jc_dynamical_phase(const JcParams& p, int n, double phi) {
  if (p.rabi == 0.0) throw InvalidInput("dynamical phase needs a nonzero Rabi frequency");
  return (jc_dressed_energy(p, n, Branch::plus) - jc_dressed_energy(p, n, Branch::minus)) * phi / p.rabi;
}

namespace {

SweepRow sweep_point(const SystemPieces& pieces, const JcParams& p, int n, double alpha, double phi,
                     bool dynamical_phase) {
  const double phase = dynamical_phase ? jc_dynamical_phase(p, n, phi) : phi;
  const BipartiteSystem sys = pieces.with_state(jc_phase_family_vector(p, n, alpha, phase));
  SweepRow row;
  row.phi = phi;
  row.local = qubit_local_ergotropy(build_m_matrix(sys)).value;
  row.delta_off = delta_off(sys);
  row.switch_off = switch_off_ergotropy(sys);
  return row;
}

}  // namespace

std::vector<SweepRow> jc_sweep(const JcParams& p, int n, double alpha, const std::vector<double>& phis,
                               bool dynamical_phase) {
  check_level(p, n);
  const SystemPieces pieces = jc_system(p);
  std::vector<SweepRow> rows(phis.size());
  const long count = static_cast<long>(phis.size());
#pragma omp parallel for schedule(static) num_threads(worker_count())
  for (long i = 0; i < count; ++i) rows[i] = sweep_point(pieces, p, n, alpha, phis[i], dynamical_phase);
  return rows;
}

std::vector<SweepRow> jc_sweep_serial(const JcParams& p, int n, double alpha, const std::vector<double>& phis,
                                      bool dynamical_phase) {
  check_level(p, n);
  const SystemPieces pieces = jc_system(p);
  std::vector<SweepRow> rows;
  rows.reserve(phis.size());
  for (double phi : phis) rows.push_back(sweep_point(pieces, p, n, alpha, phi, dynamical_phase));
  return rows;
}

SparseSplit xxz_system_sparse(const XxzParams& p) {
  check_xxz(p, kXxzSparseLimit, "sparse");
  const int n = p.n_sites;
  // Positions on the full register: site m sits at position m-1.
  std::vector<std::pair<int, int>> env_bonds;
  for (int m = 1; m + 1 < n; ++m) env_bonds.push_back({m - 1, m});  // sites (m+1, m+2) on E
  std::vector<int> env_sites;
  for (int m = 0; m < n - 1; ++m) env_sites.push_back(m);
  SparseSplit out;
  out.dims = {2, 1 << (n - 1)};
  out.h_s = p.epsilon * pauli_z();
  out.h_e = xxz_terms(n - 1, env_sites, p.epsilon, env_bonds, p.j, p.j_z);
  out.v = xxz_terms(n, {}, 0.0, {{0, 1}, {0, n - 1}}, p.j, p.j_z);
  return out;
}

SystemPieces xxz_system(const XxzParams& p) {
  check_xxz(p, kXxzDenseLimit, "dense");
  const SparseSplit sp = xxz_system_sparse(p);
  return {sp.dims, sp.h_s, ComplexMatrix(sp.h_e), ComplexMatrix(sp.v)};
}

bool xxz_k_valid(int n_sites, int k) { return k > -(n_sites / 2) && k <= n_sites / 2; }

std::vector<int> xxz_k_values(int n_sites) {
  std::vector<int> ks;
  for (int k = -(n_sites / 2) + 1; k <= n_sites / 2; ++k) ks.push_back(k);
  return ks;
}

ComplexVector xxz_bethe_state(const XxzParams& p, int k) {
  const int n = p.n_sites;
  if (n < 3 || n > 30) throw InvalidInput("XXZ ring size out of range");
  if (!xxz_k_valid(n, k)) throw InvalidInput("magnon momentum k out of range");
  ComplexVector psi = ComplexVector::Zero(1L << n);
  for (int m = 1; m <= n; ++m) {
    psi(1L << (n - m)) = std::exp(kI * (2.0 * pi * k * m / n)) / std::sqrt(double(n));
  }
  return psi;
}

double xxz_bethe_energy(const XxzParams& p, int k) {
  const double n = p.n_sites;
  return -((n - 2) * p.epsilon + (n - 4) * p.j_z + 4 * p.j * std::cos(2 * pi * k / n));
}

XxzAnalytic xxz_analytic(const XxzParams& p, int k) {
  if (!xxz_k_valid(p.n_sites, k)) throw InvalidInput("magnon momentum k out of range");
  const double n = p.n_sites;
  const double c = std::cos(2 * pi * k / n);
  XxzAnalytic out;
  out.values.delta_off = 8 * p.j / n * c + (2 * n - 8) * p.j_z / n;
  out.values.switch_off = -out.values.delta_off;
  out.m33_quoted = (n - 1) * p.epsilon / n + (n - 4) * p.j_z / n;
  out.m33_exact = ((n - 2) * p.epsilon + (2 * n - 8) * p.j_z) / n;
  out.text_condition = (n - 1) * p.epsilon / n + (2 * n - 8) * p.j_z / n >= 0;
  out.regime = out.m33_exact >= 0;
  if (out.regime) {
    out.values.local = 4.0 * std::abs(k) <= n ? 0.0 : 8 * p.j / n * std::abs(c);
  }
  return out;
}

MMatrix xxz_m_matrix(const XxzParams& p, int k) {
  const double n = p.n_sites;
  const double a = 4 * p.j * std::cos(2 * pi * k / n) / n;
  const double b = ((n - 2) * p.epsilon + (2 * n - 8) * p.j_z) / n;
  return {Eigen::Vector3d(a, a, b).asDiagonal().toDenseMatrix(), 2};
}

ModelValues xxz_exact(const XxzParams& p, int k) {
  if (!xxz_k_valid(p.n_sites, k)) throw InvalidInput("magnon momentum k out of range");
  const double n = p.n_sites;
  ModelValues out;
  out.delta_off = 8 * p.j / n * std::cos(2 * pi * k / n) + (2 * n - 8) * p.j_z / n;
  out.switch_off = classical_ergotropy({(n - 1) / n, 1 / n}, {-p.epsilon, p.epsilon}) - out.delta_off;
  out.local = polar_upper_bound(xxz_m_matrix(p, k));
  return out;
}

}  // namespace ergoloc
