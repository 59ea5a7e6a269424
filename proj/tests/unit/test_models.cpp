#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "dense_oracle.hpp"
#include "htnqmc/hamiltonian_io.hpp"
#include "htnqmc/models.hpp"
#include "htnqmc/oracle.hpp"

using namespace htnqmc;

TEST(Heisenberg, TermStructure) {
  const auto h1 = build_heisenberg_chain(1, 1.0);
  EXPECT_EQ(h1.n_qubits(), 4u);
  EXPECT_EQ(h1.size(), 9u);
  const auto h2 = build_heisenberg_chain(2, 0.4);
  EXPECT_EQ(h2.n_qubits(), 8u);
  EXPECT_EQ(h2.size(), 21u);
  EXPECT_DOUBLE_EQ(h2.coefficient(parse_pauli_string("IIIXXIII", 8)), 0.4);
  EXPECT_DOUBLE_EQ(h2.coefficient(parse_pauli_string("IIIIIIZZ", 8)), 1.0);
  EXPECT_DOUBLE_EQ(h2.coefficient(parse_pauli_string("IIZZIIII", 8)), 1.0);
  EXPECT_DOUBLE_EQ(h2.coefficient(parse_pauli_string("IIIIZZII", 8)), 1.0);
  EXPECT_THROW(build_heisenberg_chain(0, 1.0), std::invalid_argument);
}

TEST(Heisenberg, FourSiteClusterEnergy) {
  // Open 4-site chain with XX+YY+ZZ = 2(S+S- + S-S+) + ZZ bonds: lowest
  // eigenvalue of the dense Kronecker matrix.
  const auto h = build_heisenberg_chain(1, 1.0);
  const double e = htnqmc::testing::lowest_eigenvalue(htnqmc::testing::kron_hamiltonian(h));
  EXPECT_NEAR(ground_state(h).energy, e, 1e-10);
  // 4 * E of the S=1/2 open chain, E = -(3 + 2 sqrt(3)) / 4 for J=1 in spin units.
  EXPECT_NEAR(e, -(3.0 + 2.0 * std::sqrt(3.0)), 1e-10);
}

TEST(Graphite, DecoupledLayersAreHubbardDimers) {
  const GraphiteParameters p;
  const auto h = build_graphite_hubbard(p.t1, 0.0, p.u);
  const double t = 3.0 * p.t1;
  const double dimer = p.u / 2.0 - std::sqrt(p.u * p.u / 4.0 + 4.0 * t * t);
  EXPECT_NEAR(ground_state(h).energy, 2.0 * dimer, 1e-10);
  EXPECT_NEAR(ground_state(h, 4).energy, 2.0 * dimer, 1e-10);
}

TEST(Graphite, TermsAndHermiticity) {
  const auto h = build_graphite_hubbard();
  EXPECT_EQ(h.n_qubits(), 8u);
  const auto m = htnqmc::testing::kron_hamiltonian(h);
  EXPECT_LT((m - m.adjoint()).norm(), 1e-12);
  EXPECT_LT(m.imag().norm(), 1e-12);
  // U n1 n2 contributes U/4 ZZ on qubits 0,1; 3 t1 hop 1<->3 contributes 3 t1/2 XZX.
  EXPECT_NEAR(h.coefficient(parse_pauli_string("ZZIIIIII", 8)), 0.3 / 4, 1e-15);
  EXPECT_NEAR(h.coefficient(parse_pauli_string("XZXIIIII", 8)), 3 * -0.105 / 2, 1e-15);
  EXPECT_NEAR(h.coefficient(parse_pauli_string("YZZZYIII", 8)), 2 * 0.0103 / 2, 1e-15);
}

TEST(Decompositions, Named) {
  EXPECT_EQ(heisenberg_decomposition("cluster", 2).group(1), (std::vector<std::size_t>{4, 5, 6, 7}));
  EXPECT_EQ(heisenberg_decomposition("even-odd", 2).group(0), (std::vector<std::size_t>{0, 2, 4, 6}));
  EXPECT_EQ(graphite_decomposition("vertical").group(1), (std::vector<std::size_t>{2, 3, 6, 7}));
  EXPECT_THROW(graphite_decomposition("diagonal"), std::invalid_argument);
  const auto d = parse_decomposition_groups("0,1|2,3");
  EXPECT_EQ(format_decomposition_groups(d), "0,1|2,3");
}

TEST(HamiltonianIo, RoundTripIsExact) {
  const auto h = build_graphite_hubbard();
  std::stringstream ss;
  write_hamiltonian(ss, h);
  const auto back = read_hamiltonian(ss);
  EXPECT_TRUE(back.same_terms(h));
}

TEST(HamiltonianIo, ParsesCommentsAndSigns) {
  std::istringstream in("# two qubits\n2\n+0.5 XX # bond\n\n-1.25 ZI\n1e-3 IY\n");
  const auto h = read_hamiltonian(in);
  EXPECT_EQ(h.size(), 3u);
  EXPECT_DOUBLE_EQ(h.coefficient(parse_pauli_string("ZI", 2)), -1.25);
}

TEST(HamiltonianIo, ReportsLineNumbers) {
  auto line_of = [](const std::string& text) -> std::size_t {
    std::istringstream in(text);
    try {
      read_hamiltonian(in);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  EXPECT_EQ(line_of("2\n1.0 XX\n0.5 XQ\n"), 3u);
  EXPECT_EQ(line_of("2\n1.0 XXX\n"), 2u);
  EXPECT_EQ(line_of("# c\n2\n(1+2j) XX\n"), 3u);
  EXPECT_EQ(line_of("2\nabc XX\n"), 2u);
  EXPECT_EQ(line_of("two\n"), 1u);
}
