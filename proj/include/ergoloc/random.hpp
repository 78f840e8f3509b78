#pragma once

#include <cstdint>
#include <random>

#include "ergoloc/qmat.hpp"

namespace ergoloc {

using Rng = std::mt19937_64;

/// Seed for stream `index` derived from a base seed (splitmix64 mixing), so
/// that per-restart or per-point generators do not depend on scheduling.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index);

ComplexMatrix ginibre(int rows, int cols, Rng& rng);
ComplexMatrix haar_unitary(int d, Rng& rng);
ComplexVector random_pure_state(int d, Rng& rng);
/// rank <= 0 means full rank.
ComplexMatrix random_density(int d, Rng& rng, int rank = 0);
ComplexMatrix random_hermitian(int d, Rng& rng, double scale = 1.0);

/// Random state, local Hamiltonians and a coupling with zero S partial trace
/// and ||V||_2 = coupling * sqrt(d_S).
BipartiteSystem random_system(Dims dims, Rng& rng, double coupling = 0.5, int rank = 0);

}  // namespace ergoloc
