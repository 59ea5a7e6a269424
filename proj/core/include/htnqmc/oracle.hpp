#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "htnqmc/fciqmc.hpp"
#include "htnqmc/pauli.hpp"
#include "htnqmc/statevector.hpp"

namespace htnqmc {

inline constexpr std::size_t kMaxOracleQubits = 14;

/// Row-major dense matrix of a real Hamiltonian (2^n x 2^n).
/// Throws std::length_error above kMaxOracleQubits qubits.
std::vector<double> dense_matrix(const PauliSum& h);

struct SpectrumResult {
  double energy = 0.0;
  Statevector state;
  /// Electron count (Hamming weight) when the search was restricted.
  std::optional<std::size_t> sector;
};

/// Lowest eigenpair, optionally restricted to a fixed Hamming weight.
/// A Hamiltonian that conserves Hamming weight is diagonalized block by
/// block. In a degenerate ground space the returned state is the projection
/// of e_j for the lowest j with non-negligible weight; in every case the
/// largest-magnitude amplitude (lowest index on ties) is made positive.
SpectrumResult ground_state(const PauliSum& h, std::optional<std::size_t> sector = {});

/// |<a|b>|^2. Throws std::invalid_argument on a size mismatch.
double fidelity(const Statevector& a, const Statevector& b);

/// Base-2 von Neumann entropy of the reduced state on the qubits in `part`
/// (bit q of the mask selects qubit q), from the Schmidt spectrum. Throws
/// std::invalid_argument for an empty or full subset.
double bipartite_entropy(const Statevector& psi, std::uint64_t part);
double bipartite_entropy(const Statevector& psi, std::span<const std::size_t> part);

/// argmax_h |psi_h|, lowest index on ties.
BasisIndex dominant_basis_state(const Statevector& psi);

/// Largest-amplitude basis state of the exact (sector) ground state.
BasisIndex single_reference_state(const PauliSum& h, std::optional<std::size_t> sector = {});

struct DistributionEntry {
  BasisIndex basis_index = 0;
  double abs_coefficient = 0.0;
};

/// (index, |amplitude|) for every basis state, ascending by index. With a
/// permutation, qubit q is relabeled as permutation[q] before indexing.
/// Throws std::invalid_argument if the permutation is not a bijection.
std::vector<DistributionEntry> wavefunction_distribution(
    const Statevector& psi, std::span<const std::size_t> permutation = {});

/// Relabeling that lists the decomposition's groups one after another:
/// qubit group(m)[r] goes to position m * n + r.
std::vector<std::size_t> decomposition_permutation(const Decomposition& dec);

/// Header `basis_index,abs_coefficient`.
void write_distribution_csv(std::ostream& out, const std::vector<DistributionEntry>& entries);

struct EnergyStats {
  double mean = 0.0;
  /// Population standard deviation (divides by the sample count).
  double std = 0.0;
  double abs_error = 0.0;
  std::size_t samples = 0;
  std::size_t invalid = 0;
};

/// Statistics of valid E_mix rows with start <= iteration <= end. Invalid rows
/// are counted, not used. Throws std::domain_error if no valid row remains.
EnergyStats energy_stats(const RunTrace& trace, std::size_t start, std::size_t end,
                         double e_exact);

}  // namespace htnqmc
