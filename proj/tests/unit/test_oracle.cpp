#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "dense_oracle.hpp"
#include "htnqmc/models.hpp"
#include "htnqmc/oracle.hpp"

using namespace htnqmc;
namespace ht = htnqmc::testing;

TEST(GroundState, SingleQubitZ) {
  const auto r = ground_state(PauliSum(1, {{1.0, parse_pauli_string("Z", 1)}}));
  EXPECT_DOUBLE_EQ(r.energy, -1.0);
  EXPECT_NEAR(r.state[1].real(), 1.0, 1e-14);
}

TEST(GroundState, MatchesDenseAndPowerIteration) {
  const auto h = build_heisenberg_chain(1, 1.0);
  const auto m = ht::kron_hamiltonian(h);
  const auto r = ground_state(h);
  EXPECT_NEAR(r.energy, ht::lowest_eigenvalue(m), 1e-10);
  // Power iteration on (c I - H).
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(16);
  for (int i = 0; i < 16; ++i) v(i) = 1.0 + 0.1 * i * i;
  v.normalize();
  const Eigen::MatrixXcd shifted = 20.0 * Eigen::MatrixXcd::Identity(16, 16) - m;
  for (int i = 0; i < 2000; ++i) v = (shifted * v).normalized();
  EXPECT_NEAR(v.dot(m * v).real(), r.energy, 1e-9);
  EXPECT_NEAR(expectation(r.state, h), r.energy, 1e-10);
  EXPECT_NEAR(r.state.norm(), 1.0, 1e-12);
}

TEST(GroundState, SectorRestriction) {
  const auto h = build_graphite_hubbard();
  const auto full = ground_state(h);
  const auto s4 = ground_state(h, 4);
  EXPECT_EQ(s4.sector, std::optional<std::size_t>(4));
  EXPECT_GE(s4.energy, full.energy - 1e-12);
  for (BasisIndex b = 0; b < 256; ++b) {
    if (std::popcount(b) != 4) EXPECT_EQ(s4.state[b], Amplitude(0));
  }
  EXPECT_NEAR(expectation(s4.state, h), s4.energy, 1e-10);
  EXPECT_THROW(ground_state(h, 9), std::invalid_argument);
}

TEST(Fidelity, Basics) {
  EXPECT_DOUBLE_EQ(fidelity(basis_state(2, 1), basis_state(2, 1)), 1.0);
  EXPECT_DOUBLE_EQ(fidelity(basis_state(2, 1), basis_state(2, 2)), 0.0);
  EXPECT_THROW(fidelity(basis_state(2, 1), basis_state(3, 1)), std::invalid_argument);
}

TEST(Entropy, ProductBellAndSymmetry) {
  EXPECT_NEAR(bipartite_entropy(basis_state(4, 5), 0b0011), 0.0, 1e-12);
  const double r = 1 / std::sqrt(2.0);
  const Statevector bell(2, {r, 0, 0, r});
  EXPECT_NEAR(bipartite_entropy(bell, 0b01), 1.0, 1e-12);
  const std::size_t part[] = {1};
  EXPECT_NEAR(bipartite_entropy(bell, part), 1.0, 1e-12);
  const auto gs = ground_state(build_heisenberg_chain(2, 1.0));
  EXPECT_NEAR(bipartite_entropy(gs.state, 0x0F), bipartite_entropy(gs.state, 0xF0), 1e-10);
  EXPECT_THROW(bipartite_entropy(bell, 0), std::invalid_argument);
  EXPECT_THROW(bipartite_entropy(bell, 0b11), std::invalid_argument);
}

TEST(SingleReference, AllOnesForSumZ) {
  std::vector<PauliTerm> terms;
  for (std::size_t q = 0; q < 5; ++q) terms.push_back({1.0, PauliString::single(5, q, PauliLetter::Z)});
  EXPECT_EQ(single_reference_state(PauliSum(5, terms)), 31u);
}

TEST(SingleReference, HeisenbergIsNeelLike) {
  const auto h = build_heisenberg_chain(2, 1.0);
  const auto ref = single_reference_state(h);
  EXPECT_EQ(std::popcount(ref), 4);
  const auto gs = ground_state(h);
  for (BasisIndex b = 0; b < 256; ++b) EXPECT_LE(std::abs(gs.state[b]), std::abs(gs.state[ref]) + 1e-12);
}

TEST(Distribution, SpikeAndPermutation) {
  const auto d = wavefunction_distribution(basis_state(8, 130));
  ASSERT_EQ(d.size(), 256u);
  for (const auto& e : d) EXPECT_EQ(e.abs_coefficient, e.basis_index == 130 ? 1.0 : 0.0);

  std::vector<Amplitude> flat(16, 0.25);
  for (const auto& e : wavefunction_distribution(Statevector(4, flat))) {
    EXPECT_NEAR(e.abs_coefficient, 0.25, 1e-15);
  }

  // Even-odd relabeling: sites 8,7,...,1 become 8,6,4,2,7,5,3,1.
  const auto perm = decomposition_permutation(heisenberg_decomposition("even_odd", 2));
  EXPECT_EQ(perm, (std::vector<std::size_t>{0, 4, 1, 5, 2, 6, 3, 7}));
  const auto moved = wavefunction_distribution(basis_state(8, 0b00000010), perm);
  for (const auto& e : moved) EXPECT_EQ(e.abs_coefficient, e.basis_index == 0b00010000 ? 1.0 : 0.0);
  const std::size_t bad[] = {0, 0, 1, 2, 3, 4, 5, 6};
  EXPECT_THROW(wavefunction_distribution(basis_state(8, 1), bad), std::invalid_argument);

  std::ostringstream csv;
  write_distribution_csv(csv, d);
  EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')), "basis_index,abs_coefficient");
}

TEST(EnergyStats, ConstantAndAlternating) {
  RunTrace t;
  for (std::size_t i = 1; i <= 10; ++i) {
    TraceRecord r;
    r.iteration = i;
    r.e_mix = -3.5;
    r.e_mix_valid = true;
    t.records.push_back(r);
  }
  const auto c = energy_stats(t, 1, 10, -3.5);
  EXPECT_DOUBLE_EQ(c.mean, -3.5);
  EXPECT_DOUBLE_EQ(c.std, 0.0);
  EXPECT_DOUBLE_EQ(c.abs_error, 0.0);
  EXPECT_EQ(c.samples, 10u);

  for (std::size_t i = 0; i < 10; ++i) t.records[i].e_mix = (i % 2) ? 1.0 : -1.0;
  t.records[4].e_mix_valid = false;
  t.records[5].e_mix_valid = false;
  const auto a = energy_stats(t, 1, 10, 0.5);
  EXPECT_DOUBLE_EQ(a.mean, 0.0);
  EXPECT_DOUBLE_EQ(a.std, 1.0);
  EXPECT_DOUBLE_EQ(a.abs_error, 0.5);
  EXPECT_EQ(a.samples, 8u);
  EXPECT_EQ(a.invalid, 2u);

  EXPECT_THROW(energy_stats(t, 5, 6, 0.0), std::domain_error);
}

TEST(DenseMatrix, SizeLimit) {
  EXPECT_THROW(dense_matrix(PauliSum::identity(kMaxOracleQubits + 1)), std::length_error);
  const auto m = dense_matrix(build_heisenberg_chain(1, 1.0));
  const auto k = ht::kron_hamiltonian(build_heisenberg_chain(1, 1.0));
  for (int r = 0; r < 16; ++r)
    for (int c = 0; c < 16; ++c) EXPECT_NEAR(m[16 * r + c], k(r, c).real(), 1e-14);
}
