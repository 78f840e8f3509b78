#include <cmath>

#include <gtest/gtest.h>

#include "ergoloc/assignment.hpp"
#include "ergoloc/ergotropy.hpp"
#include "ergoloc/local.hpp"
#include "ergoloc/models.hpp"
#include "ergoloc/random.hpp"
#include "test_util.hpp"

using namespace ergoloc;
using namespace ergoloc::testing;

namespace {

ComplexMatrix diag(std::initializer_list<double> v) {
  ComplexMatrix m = ComplexMatrix::Zero(v.size(), v.size());
  int i = 0;
  for (double x : v) m(i, i) = x, ++i;
  return m;
}

OptimizerConfig quick() {
  OptimizerConfig c;
  c.restarts = 8;
  return c;
}

}  // namespace

TEST(GlobalErgotropy, QubitExample) {
  const ErgotropyReport r = global_ergotropy(diag({0.3, 0.7}), diag({0.0, 1.0}));
  EXPECT_NEAR(r.value, 0.4, 1e-14);
  const ComplexMatrix u = *r.optimal_unitary;
  EXPECT_NEAR(trace_product(diag({0.0, 1.0}), u * diag({0.3, 0.7}) * u.adjoint()), 0.3, 1e-14);
}

TEST(GlobalErgotropy, PassiveStatesGiveZero) {
  Rng rng(20);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 2 + trial % 5;
    const EigenSystem eh = hermitian_eig(random_hermitian(d, rng));
    std::vector<double> p(d);
    std::uniform_real_distribution<double> u01;
    for (auto& x : p) x = u01(rng);
    std::sort(p.begin(), p.end(), std::greater<>());
    const double s = std::accumulate(p.begin(), p.end(), 0.0);
    ComplexMatrix rho = ComplexMatrix::Zero(d, d);
    for (int i = 0; i < d; ++i) rho += p[i] / s * eh.vectors.col(i) * eh.vectors.col(i).adjoint();
    const ComplexMatrix h = eh.vectors * eh.values.asDiagonal() * eh.vectors.adjoint();
    EXPECT_LE(std::abs(global_ergotropy(rho, h).value), 1e-9);
    // Reverse the populations: strictly active.
    ComplexMatrix active = ComplexMatrix::Zero(d, d);
    for (int i = 0; i < d; ++i) active += p[d - 1 - i] / s * eh.vectors.col(i) * eh.vectors.col(i).adjoint();
    EXPECT_GT(global_ergotropy(active, h).value, 0.0);
  }
}

TEST(GlobalErgotropy, PassiveStateAndUnitaryInvariance) {
  Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + trial % 6;
    const ComplexMatrix rho = random_density(d, rng), h = random_hermitian(d, rng);
    const ErgotropyReport r = global_ergotropy(rho, h);
    EXPECT_GE(r.value, -1e-9);
    const ComplexMatrix& p = *r.passive_state;
    EXPECT_LT(max_abs(p * h - h * p), 1e-9);
    const ComplexMatrix u = *r.optimal_unitary;
    EXPECT_LT(max_abs(u * rho * u.adjoint() - p), 1e-9);
    const ComplexMatrix w = haar_unitary(d, rng);
    const ErgotropyReport r2 = global_ergotropy(w * rho * w.adjoint(), h);
    EXPECT_NEAR(r.diagnostics.at("passive_energy"), r2.diagnostics.at("passive_energy"), 1e-9);
  }
}

TEST(GlobalErgotropy, DegenerateSpectrumTieOrder) {
  // Value is independent of how degenerate levels are paired.
  const ComplexMatrix h = diag({0.0, 0.0, 1.0});
  const ComplexMatrix rho = diag({0.2, 0.2, 0.6});
  EXPECT_NEAR(global_ergotropy(rho, h).value, 0.6 - 0.2, 1e-14);
}

TEST(GlobalErgotropy, JcDressedStateReachesGround) {
  JcParams p{1.0, 1.2, 0.1, 6};
  const SystemPieces pieces = jc_system(p);
  const ComplexVector psi = jc_dressed_state(p, 1, Branch::plus);
  const ComplexMatrix h = pieces.total();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  const double expect = (psi.adjoint() * h * psi)(0, 0).real() - es.eigenvalues()(0);
  EXPECT_NEAR(global_ergotropy(projector(psi), h).value, expect, 1e-10);
}

TEST(GlobalErgotropy, Errors) {
  EXPECT_THROW(global_ergotropy(eye(2) / 2.0, eye(3)), DimensionError);
  EXPECT_THROW(global_ergotropy(eye(2), eye(2)), InvalidInput);
}

TEST(ClassicalErgotropy, Examples) {
  EXPECT_NEAR(classical_ergotropy({0.7, 0.3}, {1.0, 0.0}), 0.4, 1e-15);
  EXPECT_NEAR(classical_ergotropy({0.7, 0.3}, {0.0, 1.0}), 0.0, 1e-15);
  EXPECT_NEAR(classical_ergotropy({0.25, 0.25, 0.25, 0.25}, {3.0, -1.0, 2.0, 0.5}), 0.0, 1e-15);
  EXPECT_THROW(classical_ergotropy({0.5, 0.6}, {0.0, 1.0}), InvalidInput);
  EXPECT_THROW(classical_ergotropy({1.0}, {0.0, 1.0}), DimensionError);
}

TEST(Assignment, MatchesBruteForce) {
  Rng rng(22);
  std::normal_distribution<double> n01;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 7;
    RealMatrix c(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) c(i, j) = n01(rng);
    const Assignment a = solve_assignment(c);
    EXPECT_NEAR(a.cost, brute_force_assignment(c), 1e-12);
    std::vector<int> seen(a.column);
    std::sort(seen.begin(), seen.end());
    for (int i = 0; i < n; ++i) EXPECT_EQ(seen[i], i);
  }
}

TEST(ClassicalLocal, SingleColumnReducesToClassical) {
  RealMatrix p(3, 1), e(3, 1);
  p << 0.2, 0.5, 0.3;
  e << 1.0, -0.5, 2.0;
  EXPECT_NEAR(classical_local_ergotropy(p, e).value, classical_ergotropy({0.2, 0.5, 0.3}, {1.0, -0.5, 2.0}), 1e-14);
}

TEST(ClassicalLocal, RandomMatchesExhaustive) {
  Rng rng(23);
  std::uniform_real_distribution<double> u01;
  for (int trial = 0; trial < 100; ++trial) {
    const int ds = 2 + trial % 4, de = 1 + trial % 3;
    RealMatrix p(ds, de), e(ds, de);
    for (int i = 0; i < ds; ++i)
      for (int j = 0; j < de; ++j) p(i, j) = u01(rng), e(i, j) = u01(rng) * 2 - 1;
    p /= p.sum();
    const ClassicalLocalResult r = classical_local_ergotropy(p, e);
    EXPECT_NEAR(r.value, p.cwiseProduct(e).sum() - brute_force_assignment(e * p.transpose()), 1e-12);
    EXPECT_GE(r.value, -1e-14);
    double check = 0.0;
    for (int i = 0; i < ds; ++i)
      for (int j = 0; j < de; ++j) check += p(r.permutation[i], j) * e(i, j);
    EXPECT_NEAR(check, r.final_energy, 1e-12);
  }
}

TEST(ClassicalLocal, FourByThreeInstance) {
  RealMatrix p(4, 3), e(4, 3);
  p << 0.10, 0.05, 0.02, 0.20, 0.01, 0.07, 0.03, 0.15, 0.09, 0.08, 0.12, 0.08;
  e << 0.3, -1.0, 0.7, 1.1, 0.2, -0.4, -0.6, 0.9, 0.5, 0.0, 1.4, -0.8;
  EXPECT_NEAR(classical_local_ergotropy(p, e).value, p.cwiseProduct(e).sum() - brute_force_assignment(e * p.transpose()),
              1e-14);
}

TEST(SwitchOff, UncoupledAndProduct) {
  Rng rng(24);
  const Dims d{2, 3};
  const ComplexMatrix rho = random_density(6, rng), hs = random_hermitian(2, rng), he = random_hermitian(3, rng);
  const BipartiteSystem sys(d, rho, hs, he, ComplexMatrix::Zero(6, 6));
  EXPECT_EQ(delta_off(sys), 0.0);
  EXPECT_NEAR(switch_off_ergotropy(sys), global_ergotropy(sys.rho_s(), hs).value, 1e-14);
}

TEST(SwitchOff, DefinitionOnRandomSystem) {
  Rng rng(25);
  const BipartiteSystem sys = random_system({3, 2}, rng);
  const double doff = -(sys.rho() * sys.v()).trace().real();
  EXPECT_NEAR(delta_off(sys), doff, 1e-13);
  EXPECT_NEAR(switch_off_ergotropy(sys), global_ergotropy(sys.rho_s(), sys.h_s()).value - doff, 1e-13);
}

TEST(EffectiveProduct, Reductions) {
  Rng rng(26);
  const ComplexMatrix rs = random_density(2, rng), re = random_density(3, rng), hs = random_hermitian(2, rng);
  EXPECT_NEAR(effective_local_ergotropy_product(rs, re, hs, ComplexMatrix::Zero(6, 6)),
              global_ergotropy(rs, hs).value, 1e-14);
  const ComplexMatrix v = tensor_product(px(), px()) + 0.4 * tensor_product(py(), px());
  EXPECT_NEAR(effective_local_ergotropy_product(rs, eye(2) / 2.0, hs, v), global_ergotropy(rs, hs).value, 1e-14);
}

TEST(EffectiveProduct, MatchesOptimizerOnProductStates) {
  Rng rng(27);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix rs = random_density(2, rng), re = random_density(2, rng);
    const BipartiteSystem base = random_system({2, 2}, rng, 0.8);
    const BipartiteSystem sys = base.with_state(tensor_product(rs, re));
    EXPECT_NEAR(effective_local_ergotropy_product(rs, re, sys.h_s(), sys.v()),
                optimize_local_unitary(sys, quick()).value, 1e-6);
  }
}

TEST(HsGapBounds, Examples) {
  Rng rng(28);
  const BipartiteSystem free(Dims{2, 2}, random_density(4, rng), random_hermitian(2, rng), random_hermitian(2, rng),
                             ComplexMatrix::Zero(4, 4));
  EXPECT_EQ(hs_gap_bounds(free).bound_vs_free, 0.0);
  EXPECT_EQ(hs_gap_bounds(free).bound_vs_off, 0.0);
  const BipartiteSystem pure = random_system({2, 3}, rng, 0.5, 1);
  const double v = pure.v().norm();
  EXPECT_NEAR(hs_gap_bounds(pure).bound_vs_free, 2 * v, 1e-12);
  EXPECT_NEAR(hs_gap_bounds(pure).bound_vs_off, v, 1e-12);
}

TEST(HsGapBounds, JcDressedState) {
  JcParams p{1.0, 1.2, 0.1, 6};
  const BipartiteSystem sys = jc_system(p).with_state(jc_dressed_state(p, 1, Branch::plus));
  const HsGapBounds b = hs_gap_bounds(sys);
  const double local = qubit_local_ergotropy(build_m_matrix(sys)).value;
  const double free = global_ergotropy(sys.rho_s(), sys.h_s()).value;
  EXPECT_TRUE(std::isfinite(b.bound_vs_free));
  EXPECT_LE(std::abs(local - free), b.bound_vs_free + 1e-12);
  EXPECT_LE(std::abs(local - switch_off_ergotropy(sys)), b.bound_vs_off + 1e-12);
}

TEST(HsGapBounds, HoldOnRandomSystems) {
  Rng rng(29);
  for (int trial = 0; trial < 40; ++trial) {
    const Dims d{2, 2 + trial % 3};
    const BipartiteSystem sys = random_system(d, rng, 0.3 + 0.1 * (trial % 5), 1 + trial % 3);
    const double local = qubit_local_ergotropy(build_m_matrix(sys)).value;
    const HsGapBounds b = hs_gap_bounds(sys);
    EXPECT_LE(std::abs(local - global_ergotropy(sys.rho_s(), sys.h_s()).value), b.bound_vs_free + 1e-9);
    EXPECT_LE(std::abs(local - switch_off_ergotropy(sys)), b.bound_vs_off + 1e-9);
  }
}

namespace {

// -E |g><g| with a random or product ground vector.
ComplexMatrix two_level_operator(const ComplexVector& g, double e) { return -e * projector(g); }

}  // namespace

TEST(TwoLevel, GroundProductStateGivesZero) {
  Rng rng(30);
  const Dims d{2, 3};
  const ComplexVector g = tensor_product(ComplexMatrix(random_pure_state(2, rng)), ComplexMatrix(random_pure_state(3, rng))).col(0);
  EXPECT_NEAR(two_level_exact(g, two_level_operator(g, 0.7), d), 0.0, 1e-12);
}

TEST(TwoLevel, ExactMatchesOptimizerAndBounds) {
  Rng rng(31);
  for (int trial = 0; trial < 15; ++trial) {
    const Dims d{2 + trial % 2, 2 + trial % 3};
    const ComplexVector g = random_pure_state(d.total(), rng);
    const ComplexVector psi = random_pure_state(d.total(), rng);
    const ComplexMatrix h = two_level_operator(g, 0.5 + trial * 0.1);
    const double exact = two_level_exact(psi, h, d);
    const BipartiteSystem sys = BipartiteSystem::from_total_hamiltonian(d, projector(psi), h);
    const double opt = optimize_local_unitary(sys, quick()).value;
    EXPECT_NEAR(exact, opt, 1e-6);
    EXPECT_NEAR(trace_norm_upper_bound(projector(psi), h, d), exact, 1e-10);
    EXPECT_LE(two_level_lower_bound(projector(psi), h, d), exact + 1e-9);
  }
}

TEST(TwoLevel, ExcitedStateWithProductGround) {
  Rng rng(32);
  const Dims d{2, 2};
  const ComplexVector a = random_pure_state(2, rng), b = random_pure_state(2, rng);
  const ComplexVector g = tensor_product(ComplexMatrix(a), ComplexMatrix(b)).col(0);
  // A state orthogonal to g: an excited eigenvector.
  ComplexVector psi = random_pure_state(4, rng);
  psi -= g * g.dot(psi);
  psi /= psi.norm();
  const ComplexMatrix h = two_level_operator(g, 1.0);
  const BipartiteSystem sys = BipartiteSystem::from_total_hamiltonian(d, projector(psi), h);
  EXPECT_NEAR(two_level_exact(psi, h, d), optimize_local_unitary(sys, quick()).value, 1e-6);
}

TEST(TwoLevel, RejectsOtherSpectra) {
  ComplexVector psi = ComplexVector::Zero(4);
  psi(0) = 1.0;
  EXPECT_THROW(two_level_exact(psi, diag({0.0, 1.0, 2.0, 2.0}), {2, 2}), InvalidInput);
  EXPECT_THROW(two_level_exact(psi, diag({0.0, 0.0, 1.0, 1.0}), {2, 2}), InvalidInput);
  EXPECT_THROW(two_level_exact(psi, eye(4), {2, 2}), InvalidInput);
}

TEST(TwoLevel, LowerBoundOnCommutingProduct) {
  // rho_S (x) rho_E diagonal, V = 0: every reduced transition operator has
  // unit trace norm, and the bound collapses to Tr[rho_S H_S] - e_max.
  const ComplexMatrix rs = diag({0.2, 0.8}), re = diag({0.6, 0.3, 0.1});
  const ComplexMatrix hs = diag({-0.4, 0.9});
  const BipartiteSystem sys({2, 3}, tensor_product(rs, re), hs, ComplexMatrix::Zero(3, 3), ComplexMatrix::Zero(6, 6));
  const double lb = two_level_lower_bound(sys);
  EXPECT_NEAR(lb, 0.2 * -0.4 + 0.8 * 0.9 - 0.9, 1e-12);
  EXPECT_LE(lb, global_ergotropy(rs, hs).value + 1e-12);
}

TEST(TwoLevel, LowerBoundBelowOptimizer) {
  Rng rng(33);
  for (int trial = 0; trial < 15; ++trial) {
    const BipartiteSystem sys = random_system({2 + trial % 2, 2}, rng, 0.6, 1 + trial % 4);
    EXPECT_LE(two_level_lower_bound(sys), optimize_local_unitary(sys, quick()).value + 1e-6);
  }
}
