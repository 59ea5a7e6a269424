#include <gtest/gtest.h>

#include "dense_oracle.hpp"
#include "htnqmc/models.hpp"
#include "htnqmc/pauli.hpp"

using namespace htnqmc;
using htnqmc::testing::kron_hamiltonian;
using htnqmc::testing::kron_string;

TEST(PauliString, ParsesLettersLeftToRightAsQubits) {
  const auto id = parse_pauli_string("IIII", 4);
  EXPECT_TRUE(id.is_identity());
  EXPECT_EQ(id.size(), 4u);

  const auto xx = parse_pauli_string("XXII", 4);
  EXPECT_EQ(xx.x_mask(), 0b0011u);
  EXPECT_EQ(xx.z_mask(), 0u);
  EXPECT_EQ(xx.to_string(), "XXII");

  const auto y = parse_pauli_string("IYZ", 3);
  EXPECT_EQ(y.at(1), PauliLetter::Y);
  EXPECT_EQ(y.y_count(), 1u);
  EXPECT_EQ(y.weight(), 2u);
}

TEST(PauliString, RejectsBadInput) {
  EXPECT_THROW(parse_pauli_string("XYZQ", 4), std::invalid_argument);
  EXPECT_THROW(parse_pauli_string("XYZ", 4), std::invalid_argument);
  EXPECT_THROW(parse_pauli_string("xyz", 3), std::invalid_argument);
}

TEST(PauliString, ApplyMatchesKroneckerColumns) {
  for (const char* text : {"XYZI", "YYXZ", "ZIZY", "IXIY"}) {
    const auto p = parse_pauli_string(text, 4);
    const auto m = kron_string(p);
    for (BasisIndex h = 0; h < 16; ++h) {
      const auto [target, phase] = p.apply(h);
      for (BasisIndex r = 0; r < 16; ++r) {
        const auto expected = m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(h));
        const auto got = r == target ? phase : std::complex<double>(0.0);
        EXPECT_NEAR(std::abs(expected - got), 0.0, 1e-14) << text << " h=" << h << " r=" << r;
      }
    }
  }
}

TEST(PauliString, ProductMatchesMatrixProduct) {
  const char* strings[] = {"XYZI", "YYXZ", "ZIZY", "IXIY", "XXXX", "ZYXI"};
  for (const char* a : strings) {
    for (const char* b : strings) {
      const auto pa = parse_pauli_string(a, 4);
      const auto pb = parse_pauli_string(b, 4);
      const auto [prod, phase] = multiply(pa, pb);
      const Eigen::MatrixXcd expected = kron_string(pa) * kron_string(pb);
      const Eigen::MatrixXcd got = phase * kron_string(prod);
      EXPECT_LT((expected - got).norm(), 1e-12) << a << " * " << b;
    }
  }
  const auto [z, phase] = multiply(parse_pauli_string("X", 1), parse_pauli_string("Y", 1));
  EXPECT_EQ(z.to_string(), "Z");
  EXPECT_NEAR(std::abs(phase - std::complex<double>(0, 1)), 0.0, 1e-15);
}

TEST(PauliSum, MergesDuplicatesAndDropsSmallTerms) {
  const auto xx = parse_pauli_string("XX", 2);
  const auto zz = parse_pauli_string("ZZ", 2);
  const PauliSum s(2, {{1.0, xx}, {0.5, zz}, {2.0, xx}, {1e-13, parse_pauli_string("YY", 2)}});
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s.terms()[0].string, xx);
  EXPECT_DOUBLE_EQ(s.terms()[0].coefficient, 3.0);
  EXPECT_DOUBLE_EQ(s.coefficient(zz), 0.5);

  const PauliSum cancel(2, {{1.0, xx}, {-1.0, xx}});
  EXPECT_TRUE(cancel.empty());
}

TEST(PauliSum, ProductOfSums) {
  const auto h = build_heisenberg_chain(1, 1.0);
  const auto h2 = multiply(h, h);
  const Eigen::MatrixXcd dense = kron_hamiltonian(h);
  EXPECT_LT((kron_hamiltonian(h2) - dense * dense).norm(), 1e-10);
}

TEST(PauliSum, ProductWithImaginaryResidueThrows) {
  const PauliSum x(1, {{1.0, parse_pauli_string("X", 1)}});
  const PauliSum z(1, {{1.0, parse_pauli_string("Z", 1)}});
  EXPECT_THROW(multiply(x, z), std::domain_error);
}

TEST(MatrixElement, FollowsTheBitConvention) {
  const PauliSum xi(2, {{1.0, parse_pauli_string("XI", 2)}});
  // X on qubit 0 flips the least significant bit.
  EXPECT_DOUBLE_EQ(matrix_element(xi, 0b01, 0b00), 1.0);
  EXPECT_DOUBLE_EQ(matrix_element(xi, 0b10, 0b00), 0.0);

  const PauliSum zz(2, {{1.0, parse_pauli_string("ZZ", 2)}});
  EXPECT_DOUBLE_EQ(matrix_element(zz, 0b01, 0b01), -1.0);
  EXPECT_DOUBLE_EQ(matrix_element(zz, 0b11, 0b11), 1.0);

  EXPECT_THROW(matrix_element(zz, 4, 0), std::out_of_range);
}

TEST(MatrixElement, MatchesDenseHamiltonian) {
  for (const auto& h : {build_heisenberg_chain(1, 1.0), build_graphite_hubbard()}) {
    const auto dense = kron_hamiltonian(h);
    const BasisIndex dim = BasisIndex{1} << h.n_qubits();
    for (BasisIndex r = 0; r < dim; r += 3) {
      for (BasisIndex c = 0; c < dim; ++c) {
        EXPECT_NEAR(matrix_element(h, r, c),
                    dense(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)).real(), 1e-12);
      }
    }
  }
}

TEST(MatrixElement, ImaginaryElementThrows) {
  const PauliSum y(1, {{1.0, parse_pauli_string("Y", 1)}});
  EXPECT_THROW(matrix_element(y, 1, 0), std::domain_error);
}

TEST(ConnectedStates, AreTheNonzeroOffDiagonalColumnEntries) {
  const auto h = build_graphite_hubbard();
  const auto dense = kron_hamiltonian(h);
  const FlipGroupedHamiltonian fh(h);
  for (BasisIndex c = 0; c < 256; ++c) {
    std::vector<Connection> expected;
    for (BasisIndex r = 0; r < 256; ++r) {
      const double v = dense(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)).real();
      if (r != c && std::abs(v) > 1e-14) expected.push_back({r, v});
    }
    const auto got = connected_states(h, c);
    ASSERT_EQ(got.size(), expected.size()) << "column " << c;
    for (std::size_t i = 0; i < got.size(); ++i) {
      EXPECT_EQ(got[i].state, expected[i].state);
      EXPECT_NEAR(got[i].element, expected[i].element, 1e-12);
    }
    EXPECT_NEAR(fh.diagonal(c), dense(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(c)).real(),
                1e-12);
  }
}

TEST(ConnectedStates, DiagonalHamiltonianHasNone) {
  const PauliSum z(2, {{1.0, parse_pauli_string("ZI", 2)}, {0.5, parse_pauli_string("ZZ", 2)}});
  for (BasisIndex h = 0; h < 4; ++h) EXPECT_TRUE(connected_states(z, h).empty());
}

namespace {

// a_p with occupied = |1>: Z string on qubits below p, |0><1| on p.
Eigen::MatrixXcd annihilator(std::size_t p, std::size_t n) {
  Eigen::Matrix2cd lower;
  lower << 0, 1, 0, 0;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
  for (std::size_t q = 0; q < n; ++q) {
    Eigen::Matrix2cd f = q < p ? htnqmc::testing::pauli_matrix(PauliLetter::Z)
                               : (q == p ? lower : Eigen::Matrix2cd::Identity().eval());
    Eigen::MatrixXcd next = Eigen::kroneckerProduct(f, m).eval();
    m = std::move(next);
  }
  return m;
}

}  // namespace

TEST(JordanWigner, AnnihilatorsAnticommute) {
  const std::size_t n = 4;
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      const auto a = annihilator(p, n);
      const auto b = annihilator(q, n);
      const Eigen::MatrixXcd anti = a * b.adjoint() + b.adjoint() * a;
      const Eigen::MatrixXcd expected =
          (p == q ? 1.0 : 0.0) * Eigen::MatrixXcd::Identity(16, 16);
      EXPECT_LT((anti - expected).norm(), 1e-12);
    }
  }
}

TEST(JordanWigner, TermsMatchSecondQuantizedMatrices) {
  const std::size_t n = 5;
  const double t = -0.7, u = 0.3, e = 1.1;
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      if (p == q) continue;
      const auto ap = annihilator(p, n);
      const auto aq = annihilator(q, n);
      const Eigen::MatrixXcd hop = t * (ap.adjoint() * aq + aq.adjoint() * ap);
      EXPECT_LT((kron_hamiltonian(jordan_wigner(FermionTerm::hopping(p, q, t), n)) - hop).norm(),
                1e-12);
      const Eigen::MatrixXcd nn = u * (ap.adjoint() * ap) * (aq.adjoint() * aq);
      EXPECT_LT(
          (kron_hamiltonian(jordan_wigner(FermionTerm::number_number(p, q, u), n)) - nn).norm(),
          1e-12);
    }
    const auto ap = annihilator(p, n);
    EXPECT_LT((kron_hamiltonian(jordan_wigner(FermionTerm::number(p, e), n)) -
               e * ap.adjoint() * ap)
                  .norm(),
              1e-12);
  }
}

TEST(JordanWigner, Errors) {
  EXPECT_THROW(jordan_wigner(FermionTerm::hopping(0, 4, 1.0), 4), std::out_of_range);
  EXPECT_THROW(jordan_wigner(FermionTerm::hopping(2, 2, 1.0), 4), std::invalid_argument);
  EXPECT_THROW(jordan_wigner(FermionTerm::number_number(1, 1, 1.0), 4), std::invalid_argument);
}

TEST(Decomposition, ValidatesPartition) {
  EXPECT_THROW(Decomposition({{0, 1}, {1, 2}}), std::invalid_argument);
  EXPECT_THROW(Decomposition({{0, 1}, {2}}), std::invalid_argument);
  EXPECT_THROW(Decomposition({{0, 1}, {3, 4}}), std::invalid_argument);
  EXPECT_NO_THROW(Decomposition({{3, 0}, {1, 2}}));
}

TEST(Decomposition, LocalIndexAndScatterRoundTrip) {
  const auto d = Decomposition::strided(8, 2);
  EXPECT_EQ(d.group(0), (std::vector<std::size_t>{0, 2, 4, 6}));
  for (BasisIndex g = 0; g < 256; ++g) {
    BasisIndex rebuilt = 0;
    for (std::size_t m = 0; m < 2; ++m) rebuilt |= d.scatter(m, d.local_index(m, g));
    EXPECT_EQ(rebuilt, g);
  }
  EXPECT_EQ(d.local_index(1, 0b10000010), 0b1001u);
}

TEST(Gmr, HeisenbergAndGraphiteTableValues) {
  const auto h = build_heisenberg_chain(2, 1.0);
  EXPECT_NEAR(interaction_strength_gmr(h, heisenberg_decomposition("cluster", 2)), 1.5, 1e-12);
  EXPECT_NEAR(interaction_strength_gmr(h, heisenberg_decomposition("even_odd", 2)), 10.5, 1e-12);
  const auto g = build_graphite_hubbard();
  EXPECT_NEAR(interaction_strength_gmr(g, graphite_decomposition("horizontal")), 0.0206, 1e-12);
  EXPECT_NEAR(interaction_strength_gmr(g, graphite_decomposition("vertical")), 0.6506, 1e-12);
}

TEST(Gmr, SizeMismatchThrows) {
  EXPECT_THROW(interaction_strength_gmr(build_heisenberg_chain(1, 1.0),
                                        heisenberg_decomposition("cluster", 2)),
               std::invalid_argument);
}
