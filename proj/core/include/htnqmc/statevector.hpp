#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "htnqmc/pauli.hpp"

namespace htnqmc {

using Amplitude = std::complex<double>;

/// Rotation angles in radians, in circuit slot order.
using ParameterVector = std::vector<double>;

inline constexpr std::size_t kMaxDenseQubits = 24;

/// Dense 2^n amplitude vector under the global bit convention.
class Statevector {
 public:
  Statevector() = default;
  /// |0...0> on n qubits.
  explicit Statevector(std::size_t n_qubits);
  Statevector(std::size_t n_qubits, std::vector<Amplitude> amplitudes);

  std::size_t n_qubits() const { return n_qubits_; }
  std::size_t dimension() const { return amplitudes_.size(); }
  const std::vector<Amplitude>& amplitudes() const { return amplitudes_; }
  std::vector<Amplitude>& amplitudes() { return amplitudes_; }
  Amplitude operator[](BasisIndex h) const { return amplitudes_[h]; }
  Amplitude& operator[](BasisIndex h) { return amplitudes_[h]; }

  double norm() const;
  void normalize();

 private:
  std::size_t n_qubits_ = 0;
  std::vector<Amplitude> amplitudes_;
};

/// <a|b>
Amplitude inner_product(const Statevector& a, const Statevector& b);

/// Throws std::out_of_range when h >= 2^n.
Statevector basis_state(std::size_t n_qubits, BasisIndex h);

/// P|psi>.
Statevector apply_pauli(const PauliString& p, const Statevector& psi);

/// <bra|P|ket>.
Amplitude pauli_matrix_element(const Statevector& bra, const PauliString& p,
                               const Statevector& ket);

enum class GateKind : std::uint8_t { RY, X, H, S, Sdg, Unitary };

/// One gate, optionally conditioned on every qubit in `controls` being |1>.
struct Gate {
  GateKind kind = GateKind::X;
  std::size_t target = 0;
  std::uint64_t controls = 0;
  /// RY angle: params[slot] * slot_scale when slot >= 0, else `angle`.
  int slot = -1;
  double slot_scale = 1.0;
  double angle = 0.0;
  /// Row-major 2x2 matrix for GateKind::Unitary.
  std::array<Amplitude, 4> matrix{};
};

/// Ordered gate list over n qubits with a declared number of parameter slots.
class Circuit {
 public:
  Circuit() = default;
  Circuit(std::size_t n_qubits, std::size_t n_params = 0);

  std::size_t n_qubits() const { return n_qubits_; }
  std::size_t n_params() const { return n_params_; }
  const std::vector<Gate>& gates() const { return gates_; }

  Circuit& ry(std::size_t q, int slot);
  Circuit& ry_fixed(std::size_t q, double angle);
  Circuit& x(std::size_t q);
  Circuit& cnot(std::size_t control, std::size_t target);
  Circuit& h(std::size_t q);
  Circuit& s(std::size_t q);
  Circuit& sdg(std::size_t q);
  /// Arbitrary single-qubit unitary, row-major.
  Circuit& unitary(std::size_t q, const std::array<Amplitude, 4>& m);
  Circuit& add(Gate g);

  /// Appends `other` acting on qubits `qubit_map[q]`, shifting its parameter
  /// slots by `slot_offset`. Grows the declared parameter count as needed.
  Circuit& append(const Circuit& other, std::span<const std::size_t> qubit_map,
                  std::size_t slot_offset = 0);

  /// Every gate additionally conditioned on `control` being |1>.
  Circuit controlled(std::size_t control) const;
  /// Reverse order, inverted gates. Same parameter slots.
  Circuit adjoint() const;

 private:
  void check_qubit(std::size_t q) const;

  std::size_t n_qubits_ = 0;
  std::size_t n_params_ = 0;
  std::vector<Gate> gates_;
};

/// In-place gate application. Throws std::invalid_argument on size mismatch.
void apply_gate(const Gate& g, std::span<const double> params, Statevector& psi);
void apply_circuit_inplace(const Circuit& c, std::span<const double> params, Statevector& psi);

/// Returns c(params)|input>; the input is left unmodified.
Statevector apply_circuit(const Circuit& c, std::span<const double> params,
                          const Statevector& input);

/// Hardware-efficient real-amplitude ansatz with linear connectivity:
/// an RY layer on all qubits, then `depth` repetitions of
/// [CNOT q -> q+1 for q = 0..n-2, RY layer]. Slot of layer l, qubit q is
/// l * n + q, so the parameter count is (depth + 1) * n.
Circuit real_amplitude_ansatz(std::size_t n_qubits, std::size_t depth);

inline std::size_t real_amplitude_parameter_count(std::size_t n_qubits, std::size_t depth) {
  return (depth + 1) * n_qubits;
}

/// sum_a c_a <psi|P_a|psi>. Throws std::domain_error if the imaginary
/// residue exceeds 1e-10.
double expectation(const Statevector& psi, const PauliSum& o);

/// Dense H|psi> without building the matrix.
Statevector apply_pauli_sum(const PauliSum& o, const Statevector& psi);

}  // namespace htnqmc
