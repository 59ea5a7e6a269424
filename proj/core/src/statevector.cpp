#include "htnqmc/statevector.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace htnqmc {

namespace {

constexpr double kImagTolerance = 1e-10;

std::array<Amplitude, 4> gate_matrix(const Gate& g, std::span<const double> params) {
  switch (g.kind) {
    case GateKind::RY: {
      double theta = g.angle;
      if (g.slot >= 0) theta = params[static_cast<std::size_t>(g.slot)] * g.slot_scale;
      const double c = std::cos(0.5 * theta);
      const double s = std::sin(0.5 * theta);
      return {Amplitude(c), Amplitude(-s), Amplitude(s), Amplitude(c)};
    }
    case GateKind::X:
      return {Amplitude(0), Amplitude(1), Amplitude(1), Amplitude(0)};
    case GateKind::H: {
      const double r = 1.0 / std::sqrt(2.0);
      return {Amplitude(r), Amplitude(r), Amplitude(r), Amplitude(-r)};
    }
    case GateKind::S:
      return {Amplitude(1), Amplitude(0), Amplitude(0), Amplitude(0, 1)};
    case GateKind::Sdg:
      return {Amplitude(1), Amplitude(0), Amplitude(0), Amplitude(0, -1)};
    case GateKind::Unitary:
      return g.matrix;
  }
  throw std::logic_error("unknown gate kind");
}

}  // namespace

// ---------------------------------------------------------------------------
// Statevector

Statevector::Statevector(std::size_t n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits > kMaxDenseQubits) {
    throw std::length_error("dense statevector limited to " + std::to_string(kMaxDenseQubits) +
                            " qubits");
  }
  amplitudes_.assign(std::size_t{1} << n_qubits, Amplitude(0.0));
  amplitudes_[0] = 1.0;
}

Statevector::Statevector(std::size_t n_qubits, std::vector<Amplitude> amplitudes)
    : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {
  if (n_qubits > kMaxDenseQubits) throw std::length_error("dense statevector too large");
  if (amplitudes_.size() != (std::size_t{1} << n_qubits)) {
    throw std::invalid_argument("amplitude count must be 2^n");
  }
}

double Statevector::norm() const {
  double acc = 0.0;
  for (const auto& a : amplitudes_) acc += std::norm(a);
  return std::sqrt(acc);
}

void Statevector::normalize() {
  const double n = norm();
  if (n == 0.0) throw std::domain_error("cannot normalize the zero vector");
  for (auto& a : amplitudes_) a /= n;
}

Amplitude inner_product(const Statevector& a, const Statevector& b) {
  if (a.dimension() != b.dimension()) throw std::invalid_argument("statevector size mismatch");
  Amplitude acc = 0.0;
  const auto& x = a.amplitudes();
  const auto& y = b.amplitudes();
  for (std::size_t i = 0; i < x.size(); ++i) acc += std::conj(x[i]) * y[i];
  return acc;
}

Statevector basis_state(std::size_t n_qubits, BasisIndex h) {
  if (n_qubits < 64 && h >= (BasisIndex{1} << n_qubits)) {
    throw std::out_of_range("basis index " + std::to_string(h) + " out of range for " +
                            std::to_string(n_qubits) + " qubits");
  }
  Statevector psi(n_qubits);
  psi[0] = 0.0;
  psi[h] = 1.0;
  return psi;
}

Statevector apply_pauli(const PauliString& p, const Statevector& psi) {
  if (p.size() != psi.n_qubits()) throw std::invalid_argument("Pauli string size mismatch");
  Statevector out(psi.n_qubits(), std::vector<Amplitude>(psi.dimension()));
  for (BasisIndex h = 0; h < psi.dimension(); ++h) {
    const auto [target, phase] = p.apply(h);
    out[target] = phase * psi[h];
  }
  return out;
}

Amplitude pauli_matrix_element(const Statevector& bra, const PauliString& p,
                               const Statevector& ket) {
  if (p.size() != ket.n_qubits() || bra.dimension() != ket.dimension()) {
    throw std::invalid_argument("Pauli matrix element size mismatch");
  }
  const Amplitude base = [&] {
    switch (p.y_count() & 3u) {
      case 0: return Amplitude(1, 0);
      case 1: return Amplitude(0, 1);
      case 2: return Amplitude(-1, 0);
      default: return Amplitude(0, -1);
    }
  }();
  const std::uint64_t x = p.x_mask();
  const std::uint64_t z = p.z_mask();
  Amplitude acc = 0.0;
  for (BasisIndex h = 0; h < ket.dimension(); ++h) {
    const Amplitude term = std::conj(bra[h ^ x]) * ket[h];
    if (std::popcount(h & z) & 1) {
      acc -= term;
    } else {
      acc += term;
    }
  }
  return base * acc;
}

// ---------------------------------------------------------------------------
// Circuit

Circuit::Circuit(std::size_t n_qubits, std::size_t n_params)
    : n_qubits_(n_qubits), n_params_(n_params) {
  if (n_qubits > kMaxQubits) throw std::invalid_argument("too many qubits");
}

void Circuit::check_qubit(std::size_t q) const {
  if (q >= n_qubits_) {
    throw std::out_of_range("gate qubit " + std::to_string(q) + " outside a " +
                            std::to_string(n_qubits_) + "-qubit circuit");
  }
}

Circuit& Circuit::add(Gate g) {
  check_qubit(g.target);
  if (n_qubits_ < 64 && (g.controls >> n_qubits_) != 0) {
    throw std::out_of_range("control qubit outside circuit");
  }
  if ((g.controls >> g.target) & 1u) throw std::invalid_argument("gate controls its own target");
  if (g.slot >= 0 && static_cast<std::size_t>(g.slot) >= n_params_) {
    throw std::out_of_range("parameter slot " + std::to_string(g.slot) + " beyond declared " +
                            std::to_string(n_params_));
  }
  gates_.push_back(g);
  return *this;
}

Circuit& Circuit::ry(std::size_t q, int slot) {
  Gate g;
  g.kind = GateKind::RY;
  g.target = q;
  g.slot = slot;
  return add(g);
}

Circuit& Circuit::ry_fixed(std::size_t q, double angle) {
  Gate g;
  g.kind = GateKind::RY;
  g.target = q;
  g.angle = angle;
  return add(g);
}

Circuit& Circuit::x(std::size_t q) { return add(Gate{GateKind::X, q}); }

Circuit& Circuit::cnot(std::size_t control, std::size_t target) {
  check_qubit(control);
  Gate g{GateKind::X, target};
  g.controls = std::uint64_t{1} << control;
  return add(g);
}

Circuit& Circuit::h(std::size_t q) { return add(Gate{GateKind::H, q}); }
Circuit& Circuit::s(std::size_t q) { return add(Gate{GateKind::S, q}); }
Circuit& Circuit::sdg(std::size_t q) { return add(Gate{GateKind::Sdg, q}); }

Circuit& Circuit::unitary(std::size_t q, const std::array<Amplitude, 4>& m) {
  Gate g{GateKind::Unitary, q};
  g.matrix = m;
  return add(g);
}

Circuit& Circuit::append(const Circuit& other, std::span<const std::size_t> qubit_map,
                         std::size_t slot_offset) {
  if (qubit_map.size() != other.n_qubits()) {
    throw std::invalid_argument("qubit map size does not match appended circuit");
  }
  n_params_ = std::max(n_params_, slot_offset + other.n_params());
  for (Gate g : other.gates()) {
    g.target = qubit_map[g.target];
    std::uint64_t controls = 0;
    for (std::size_t q = 0; q < other.n_qubits(); ++q) {
      if ((g.controls >> q) & 1u) controls |= std::uint64_t{1} << qubit_map[q];
    }
    g.controls = controls;
    if (g.slot >= 0) g.slot += static_cast<int>(slot_offset);
    add(g);
  }
  return *this;
}

Circuit Circuit::controlled(std::size_t control) const {
  check_qubit(control);
  Circuit out(n_qubits_, n_params_);
  for (Gate g : gates_) {
    g.controls |= std::uint64_t{1} << control;
    out.add(g);
  }
  return out;
}

Circuit Circuit::adjoint() const {
  Circuit out(n_qubits_, n_params_);
  for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) {
    Gate g = *it;
    switch (g.kind) {
      case GateKind::RY:
        g.angle = -g.angle;
        g.slot_scale = -g.slot_scale;
        break;
      case GateKind::S: g.kind = GateKind::Sdg; break;
      case GateKind::Sdg: g.kind = GateKind::S; break;
      case GateKind::Unitary:
        g.matrix = {std::conj(it->matrix[0]), std::conj(it->matrix[2]),
                    std::conj(it->matrix[1]), std::conj(it->matrix[3])};
        break;
      case GateKind::X:
      case GateKind::H:
        break;
    }
    out.add(g);
  }
  return out;
}

void apply_gate(const Gate& g, std::span<const double> params, Statevector& psi) {
  const auto m = gate_matrix(g, params);
  const std::uint64_t bit = std::uint64_t{1} << g.target;
  auto& a = psi.amplitudes();
  const std::size_t dim = a.size();
  for (std::size_t i = 0; i < dim; ++i) {
    if ((i & bit) || (i & g.controls) != g.controls) continue;
    const Amplitude a0 = a[i];
    const Amplitude a1 = a[i | bit];
    a[i] = m[0] * a0 + m[1] * a1;
    a[i | bit] = m[2] * a0 + m[3] * a1;
  }
}

void apply_circuit_inplace(const Circuit& c, std::span<const double> params, Statevector& psi) {
  if (c.n_qubits() != psi.n_qubits()) {
    throw std::invalid_argument("circuit acts on " + std::to_string(c.n_qubits()) +
                                " qubits, state has " + std::to_string(psi.n_qubits()));
  }
  if (params.size() != c.n_params()) {
    throw std::invalid_argument("circuit expects " + std::to_string(c.n_params()) +
                                " parameters, got " + std::to_string(params.size()));
  }
  for (const auto& g : c.gates()) apply_gate(g, params, psi);
}

Statevector apply_circuit(const Circuit& c, std::span<const double> params,
                          const Statevector& input) {
  Statevector out = input;
  apply_circuit_inplace(c, params, out);
  return out;
}

Circuit real_amplitude_ansatz(std::size_t n_qubits, std::size_t depth) {
  if (n_qubits == 0) throw std::invalid_argument("ansatz needs at least one qubit");
  Circuit c(n_qubits, real_amplitude_parameter_count(n_qubits, depth));
  int slot = 0;
  for (std::size_t q = 0; q < n_qubits; ++q) c.ry(q, slot++);
  for (std::size_t layer = 0; layer < depth; ++layer) {
    for (std::size_t q = 0; q + 1 < n_qubits; ++q) c.cnot(q, q + 1);
    for (std::size_t q = 0; q < n_qubits; ++q) c.ry(q, slot++);
  }
  return c;
}

double expectation(const Statevector& psi, const PauliSum& o) {
  if (o.n_qubits() != psi.n_qubits()) {
    throw std::invalid_argument("observable size does not match the state");
  }
  Amplitude acc = 0.0;
  for (const auto& t : o.terms()) acc += t.coefficient * pauli_matrix_element(psi, t.string, psi);
  if (std::abs(acc.imag()) > kImagTolerance) {
    throw std::domain_error("expectation value has imaginary residue " +
                            std::to_string(acc.imag()));
  }
  return acc.real();
}

Statevector apply_pauli_sum(const PauliSum& o, const Statevector& psi) {
  if (o.n_qubits() != psi.n_qubits()) {
    throw std::invalid_argument("observable size does not match the state");
  }
  Statevector out(psi.n_qubits(), std::vector<Amplitude>(psi.dimension()));
  for (const auto& t : o.terms()) {
    for (BasisIndex h = 0; h < psi.dimension(); ++h) {
      const auto [target, phase] = t.string.apply(h);
      out[target] += t.coefficient * phase * psi[h];
    }
  }
  return out;
}

}  // namespace htnqmc
