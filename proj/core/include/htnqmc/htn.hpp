#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "htnqmc/pauli.hpp"
#include "htnqmc/statevector.hpp"

namespace htnqmc {

/// Row-major complex 2x2 matrix; element (r, c) is m[2 * r + c].
struct Matrix2 {
  std::array<Amplitude, 4> m{};

  Amplitude& operator()(std::size_t r, std::size_t c) { return m[2 * r + c]; }
  Amplitude operator()(std::size_t r, std::size_t c) const { return m[2 * r + c]; }

  static Matrix2 identity() { return {{Amplitude(1), Amplitude(0), Amplitude(0), Amplitude(1)}}; }
  Matrix2 adjoint() const {
    return {{std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])}};
  }
  friend Matrix2 operator*(const Matrix2& a, const Matrix2& b);
};

/// Lower-tensor transition matrix N_m with N(i', i) = <phi^{i'}(bra)|O_m|phi^{i}(ket)>.
using TransitionMatrix = Matrix2;

/// N = u^dagger * diag(d) * v with u, v unitary and d[0] >= d[1] >= 0.
struct Svd2 {
  Matrix2 u;
  std::array<double, 2> d{};
  Matrix2 v;

  Matrix2 reconstruct() const;
};

/// Closed 2x2 SVD. The zero matrix yields u = v = identity; other
/// rank-deficient inputs complete the null direction deterministically.
Svd2 svd_2x2(const Matrix2& n);

/// Two-layer quantum-quantum tree tensor network with one leg per subsystem.
///
///   |psi_HTN> = sum_i psi_i (x)_m |phi_m^{i_m}>
///   |phi_m^{i}> = X^{mask_m} U_Lm |i>|0>^{n-1}     (leg = first qubit of group m)
///   |psi>       = U_U |0>^k
///
/// U_Lm and U_U are real-amplitude ansatz circuits of the same depth. The
/// optional basis mask is the X layer used to start from a chosen basis
/// state: with all angles zero the network equals |mask>.
class HtnState {
 public:
  HtnState() = default;
  /// All angles zero.
  HtnState(Decomposition dec, std::size_t depth, BasisIndex basis_mask = 0);

  /// Flat parameters: lower tensors m = 0..k-1 in order, then the upper tensor.
  static HtnState from_parameters(Decomposition dec, std::size_t depth,
                                  std::span<const double> flat, BasisIndex basis_mask = 0);

  /// Identity upper tensor and X-string lower tensors: the network equals |h>.
  static HtnState basis_encoding(Decomposition dec, BasisIndex h);

  static std::size_t parameter_count(std::size_t n, std::size_t k, std::size_t depth) {
    return n * k * (depth + 1) + k * (depth + 1);
  }

  const Decomposition& decomposition() const { return dec_; }
  std::size_t depth() const { return depth_; }
  std::size_t subsystem_count() const { return dec_.subsystem_count(); }
  std::size_t subsystem_size() const { return dec_.subsystem_size(); }
  std::size_t n_qubits() const { return dec_.n_qubits(); }
  BasisIndex basis_mask() const { return basis_mask_; }

  const ParameterVector& lower(std::size_t m) const { return lower_.at(m); }
  const ParameterVector& upper() const { return upper_; }

  std::size_t parameter_count() const {
    return parameter_count(subsystem_size(), subsystem_count(), depth_);
  }
  std::vector<double> flat_parameters() const;
  void set_flat_parameters(std::span<const double> flat);

 private:
  Decomposition dec_;
  std::size_t depth_ = 0;
  BasisIndex basis_mask_ = 0;
  std::vector<ParameterVector> lower_;
  ParameterVector upper_;
};

/// |phi_m^{i}> on the n local qubits of subsystem m (local qubit r is global
/// qubit group(m)[r]).
Statevector lower_state(const HtnState& s, std::size_t m, unsigned i);

/// U_U|0>^k.
Statevector upper_state(const HtnState& s);

/// Controls how the contraction evaluates each lower-tensor entry and the
/// upper-tensor expectation.
struct ContractionOptions {
  /// 0 evaluates by exact statevector contraction. Otherwise every
  /// Hadamard-test measurement is emulated with this many shots.
  std::size_t shots = 0;
  /// Skip the imaginary-part measurements (valid for real states and
  /// observables). Imaginary parts are then reported as zero.
  bool real_only = false;
  std::uint64_t seed = 0;
};

/// Throws std::invalid_argument when bra and ket use different decompositions
/// or the operator does not act on the subsystem's n qubits.
TransitionMatrix transition_matrix(const HtnState& bra, const HtnState& ket, std::size_t m,
                                   const PauliString& local_op,
                                   const ContractionOptions& options = {});

/// <psi_HTN(bra)|O|psi_HTN(ket)>, evaluated term by term through the lower
/// transition matrices, their SVDs and the upper-tensor expectation.
Amplitude transition_amplitude(const HtnState& bra, const HtnState& ket, const PauliSum& o,
                               const ContractionOptions& options = {});

/// transition_amplitude(s, s, H). In exact mode throws std::domain_error if
/// the imaginary part exceeds 1e-10.
double htn_energy(const HtnState& s, const PauliSum& h, const ContractionOptions& options = {});

/// <psi_HTN|phi_h>, computed against basis_encoding(h) with O = identity.
double htn_overlap_basis(const HtnState& s, BasisIndex h);

/// Full 2^{nk} statevector. Throws std::length_error above 24 qubits.
Statevector expand_dense(const HtnState& s);

/// Distinct Hadamard-test measurement settings per observable term:
/// 2 * 4^L * k + 2 in general, halved for real states and observables
/// (4k + 1 at L = 1). Throws std::invalid_argument for L < 1.
std::size_t measurement_count(std::size_t k, std::size_t legs, bool real_valued);

}  // namespace htnqmc
