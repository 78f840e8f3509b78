#include "ergoloc/random.hpp"

#include <cmath>

namespace ergoloc {

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

ComplexMatrix ginibre(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> n01(0.0, 1.0);
  ComplexMatrix g(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) {
      const double re = n01(rng);
      const double im = n01(rng);
      g(i, j) = cplx(re, im) / std::sqrt(2.0);
    }
  }
  return g;
}

ComplexMatrix haar_unitary(int d, Rng& rng) {
  const ComplexMatrix g = ginibre(d, d, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(d, d);
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < d; ++k) {
    const double a = std::abs(r(k, k));
    if (a > 0) q.col(k) *= r(k, k) / a;
  }
  return q;
}

ComplexVector random_pure_state(int d, Rng& rng) {
  ComplexVector v = ginibre(d, 1, rng).col(0);
  return v / v.norm();
}

ComplexMatrix random_density(int d, Rng& rng, int rank) {
  const int k = rank <= 0 ? d : rank;
  const ComplexMatrix g = ginibre(d, k, rng);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return (rho + rho.adjoint()) / 2.0;
}

ComplexMatrix random_hermitian(int d, Rng& rng, double scale) {
  const ComplexMatrix g = ginibre(d, d, rng);
  return scale * (g + g.adjoint()) / 2.0;
}

BipartiteSystem random_system(Dims dims, Rng& rng, double coupling, int rank) {
  const ComplexMatrix rho = random_density(dims.total(), rng, rank);
  const ComplexMatrix h_s = random_hermitian(dims.s, rng);
  const ComplexMatrix h_e = random_hermitian(dims.e, rng);
  ComplexMatrix v = random_hermitian(dims.total(), rng);
  auto [he, vn] = BipartiteSystem::normalize_coupling(dims, h_e, v);
  const double nv = vn.norm();
  if (nv > 0) vn *= coupling * std::sqrt(double(dims.s)) / nv;
  return BipartiteSystem(dims, rho, h_s, he, vn);
}

}  // namespace ergoloc
