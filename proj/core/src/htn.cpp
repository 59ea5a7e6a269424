#include "htnqmc/htn.hpp"

#include <Eigen/Dense>

#include <bit>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "htnqmc/rng.hpp"

namespace htnqmc {

namespace {

constexpr double kImagTolerance = 1e-10;

void check_compatible(const HtnState& bra, const HtnState& ket) {
  if (!(bra.decomposition() == ket.decomposition())) {
    throw std::invalid_argument("HTN states use different decompositions");
  }
}

std::vector<std::size_t> identity_map(std::size_t n) {
  std::vector<std::size_t> map(n);
  std::iota(map.begin(), map.end(), std::size_t{0});
  return map;
}

// |i>|0...> -> ansatz -> X mask, on the n local qubits of subsystem m.
Circuit lower_circuit(const HtnState& s, std::size_t m, unsigned i) {
  const std::size_t n = s.subsystem_size();
  Circuit c(n, real_amplitude_parameter_count(n, s.depth()));
  if (i != 0) c.x(0);
  c.append(real_amplitude_ansatz(n, s.depth()), identity_map(n));
  const BasisIndex local_mask = s.decomposition().local_index(m, s.basis_mask());
  for (std::size_t r = 0; r < n; ++r) {
    if ((local_mask >> r) & 1u) c.x(r);
  }
  return c;
}

PauliString restrict_to(const PauliString& p, const Decomposition& dec, std::size_t m) {
  return PauliString(dec.subsystem_size(), dec.local_index(m, p.x_mask()),
                     dec.local_index(m, p.z_mask()));
}

std::array<Amplitude, 4> as_array(const Matrix2& m) { return m.m; }

// Everything the exact contraction needs from one HTN state.
struct Tensors {
  std::vector<std::array<Statevector, 2>> phi;
  Statevector psi;
};

Tensors build_tensors(const HtnState& s) {
  Tensors t;
  t.phi.reserve(s.subsystem_count());
  for (std::size_t m = 0; m < s.subsystem_count(); ++m) {
    t.phi.push_back({lower_state(s, m, 0), lower_state(s, m, 1)});
  }
  t.psi = upper_state(s);
  return t;
}

// Samples `shots` bitstrings from |psi|^2 and averages f(bitstring).
template <typename F>
double sample_mean(const Statevector& psi, std::size_t shots, CounterRng& rng, F&& f) {
  std::vector<double> probs(psi.dimension());
  for (std::size_t h = 0; h < probs.size(); ++h) probs[h] = std::norm(psi[h]);
  std::discrete_distribution<std::size_t> dist(probs.begin(), probs.end());
  double acc = 0.0;
  for (std::size_t s = 0; s < shots; ++s) acc += f(static_cast<BasisIndex>(dist(rng)));
  return acc / static_cast<double>(shots);
}

enum class Part { Real, Imag };

// Rotates `qubit` so that a Z-basis readout measures `letter`.
void rotate_to_z(Circuit& c, std::size_t qubit, PauliLetter letter) {
  if (letter == PauliLetter::X) {
    c.h(qubit);
  } else if (letter == PauliLetter::Y) {
    c.sdg(qubit).h(qubit);
  }
}

// Ancilla-controlled preparation of (|0>|ket> + |1>|bra>)/sqrt(2) with the
// ancilla on the last qubit.
Circuit hadamard_test_circuit(const Circuit& bra_prep, const Circuit& ket_prep) {
  const std::size_t n = bra_prep.n_qubits();
  const std::size_t a = n;
  const auto map = identity_map(n);
  Circuit bra_branch(n + 1, bra_prep.n_params());
  bra_branch.append(bra_prep, map);
  Circuit ket_branch(n + 1, ket_prep.n_params());
  ket_branch.append(ket_prep, map);

  Circuit c(n + 1, bra_prep.n_params() + ket_prep.n_params());
  const auto full = identity_map(n + 1);
  c.h(a);
  c.append(bra_branch.controlled(a), full, 0);
  c.x(a);
  c.append(ket_branch.controlled(a), full, bra_prep.n_params());
  c.x(a);
  return c;
}

// Re or Im of <bra|O|ket> from the ancilla readout. Re = <X_a O>, Im = -<Y_a O>.
double hadamard_lower(const Circuit& bra_prep, std::span<const double> bra_params,
                      const Circuit& ket_prep, std::span<const double> ket_params,
                      const PauliString& op, Part part, std::size_t shots, CounterRng& rng) {
  const std::size_t n = op.size();
  Circuit c = hadamard_test_circuit(bra_prep, ket_prep);
  rotate_to_z(c, n, part == Part::Real ? PauliLetter::X : PauliLetter::Y);
  for (std::size_t q = 0; q < n; ++q) rotate_to_z(c, q, op.at(q));

  std::vector<double> params(bra_params.begin(), bra_params.end());
  params.insert(params.end(), ket_params.begin(), ket_params.end());
  const Statevector out = apply_circuit(c, params, Statevector(n + 1));

  const std::uint64_t parity_mask = op.support() | (std::uint64_t{1} << n);
  const double mean = sample_mean(out, shots, rng, [&](BasisIndex b) {
    return (std::popcount(b & parity_mask) & 1) ? -1.0 : 1.0;
  });
  return part == Part::Real ? mean : -mean;
}

// Re or Im of <psi1| (x)_m U_m^dag D_m V_m |psi2>.
double hadamard_upper(const HtnState& bra, const HtnState& ket, const std::vector<Svd2>& svds,
                      Part part, std::size_t shots, CounterRng& rng) {
  const std::size_t k = bra.subsystem_count();
  const std::size_t depth_bra = bra.depth();
  const std::size_t depth_ket = ket.depth();
  Circuit bra_prep = real_amplitude_ansatz(k, depth_bra);
  Circuit ket_prep = real_amplitude_ansatz(k, depth_ket);
  for (std::size_t m = 0; m < k; ++m) {
    bra_prep.unitary(m, as_array(svds[m].u));
    ket_prep.unitary(m, as_array(svds[m].v));
  }
  Circuit c = hadamard_test_circuit(bra_prep, ket_prep);
  rotate_to_z(c, k, part == Part::Real ? PauliLetter::X : PauliLetter::Y);

  std::vector<double> params(bra.upper().begin(), bra.upper().end());
  params.insert(params.end(), ket.upper().begin(), ket.upper().end());
  const Statevector out = apply_circuit(c, params, Statevector(k + 1));

  const double mean = sample_mean(out, shots, rng, [&](BasisIndex b) {
    double v = ((b >> k) & 1u) ? -1.0 : 1.0;
    for (std::size_t m = 0; m < k; ++m) v *= svds[m].d[(b >> m) & 1u];
    return v;
  });
  return part == Part::Real ? mean : -mean;
}

std::uint64_t stream_id(std::size_t term, std::size_t slot, std::size_t entry, Part part) {
  return (((static_cast<std::uint64_t>(term) << 16) | slot) << 3 | entry) << 1 |
         (part == Part::Imag ? 1u : 0u);
}

TransitionMatrix exact_transition(const Tensors& bra, const Tensors& ket, std::size_t m,
                                  const PauliString& local_op) {
  TransitionMatrix n;
  for (unsigned r = 0; r < 2; ++r) {
    for (unsigned c = 0; c < 2; ++c) {
      n(r, c) = pauli_matrix_element(bra.phi[m][r], local_op, ket.phi[m][c]);
    }
  }
  return n;
}

TransitionMatrix sampled_transition(const HtnState& bra, const HtnState& ket, std::size_t m,
                                    const PauliString& local_op,
                                    const ContractionOptions& options, std::size_t term) {
  TransitionMatrix n;
  for (unsigned r = 0; r < 2; ++r) {
    for (unsigned c = 0; c < 2; ++c) {
      const Circuit bra_prep = lower_circuit(bra, m, r);
      const Circuit ket_prep = lower_circuit(ket, m, c);
      const std::size_t entry = 2 * r + c;
      CounterRng re_rng(options.seed, stream_id(term, m, entry, Part::Real));
      const double re = hadamard_lower(bra_prep, bra.lower(m), ket_prep, ket.lower(m), local_op,
                                       Part::Real, options.shots, re_rng);
      double im = 0.0;
      if (!options.real_only) {
        CounterRng im_rng(options.seed, stream_id(term, m, entry, Part::Imag));
        im = hadamard_lower(bra_prep, bra.lower(m), ket_prep, ket.lower(m), local_op,
                            Part::Imag, options.shots, im_rng);
      }
      n(r, c) = Amplitude(re, im);
    }
  }
  return n;
}

Amplitude exact_upper(const Tensors& bra, const Tensors& ket, const std::vector<Svd2>& svds) {
  Statevector v = ket.psi;
  for (std::size_t m = 0; m < svds.size(); ++m) {
    const Matrix2& mv = svds[m].v;
    const Matrix2 du = svds[m].u.adjoint();
    Matrix2 d;
    d(0, 0) = svds[m].d[0];
    d(1, 1) = svds[m].d[1];
    for (const Matrix2& g : {mv, d, du}) {
      Gate gate{GateKind::Unitary, m};
      gate.matrix = g.m;
      apply_gate(gate, {}, v);
    }
  }
  return inner_product(bra.psi, v);
}

Amplitude contract(const HtnState& bra, const HtnState& ket, const PauliSum& o,
                   const ContractionOptions& options) {
  check_compatible(bra, ket);
  const Decomposition& dec = bra.decomposition();
  if (o.n_qubits() != dec.n_qubits()) {
    throw std::invalid_argument("observable acts on " + std::to_string(o.n_qubits()) +
                                " qubits, HTN has " + std::to_string(dec.n_qubits()));
  }
  const std::size_t k = dec.subsystem_count();
  const bool exact = options.shots == 0;
  Tensors tb, tk;
  if (exact) {
    tb = build_tensors(bra);
    tk = build_tensors(ket);
  }

  Amplitude total = 0.0;
  std::vector<Svd2> svds(k);
  for (std::size_t t = 0; t < o.terms().size(); ++t) {
    const PauliTerm& term = o.terms()[t];
    for (std::size_t m = 0; m < k; ++m) {
      const PauliString local = restrict_to(term.string, dec, m);
      const TransitionMatrix n = exact ? exact_transition(tb, tk, m, local)
                                       : sampled_transition(bra, ket, m, local, options, t);
      svds[m] = svd_2x2(n);
    }
    Amplitude value;
    if (exact) {
      value = exact_upper(tb, tk, svds);
    } else {
      CounterRng re_rng(options.seed, stream_id(t, k, 0, Part::Real));
      const double re = hadamard_upper(bra, ket, svds, Part::Real, options.shots, re_rng);
      double im = 0.0;
      if (!options.real_only) {
        CounterRng im_rng(options.seed, stream_id(t, k, 0, Part::Imag));
        im = hadamard_upper(bra, ket, svds, Part::Imag, options.shots, im_rng);
      }
      value = Amplitude(re, im);
    }
    total += term.coefficient * value;
  }
  return total;
}

}  // namespace

// ---------------------------------------------------------------------------
// Matrix2 / SVD

Matrix2 operator*(const Matrix2& a, const Matrix2& b) {
  Matrix2 out;
  for (std::size_t r = 0; r < 2; ++r) {
    for (std::size_t c = 0; c < 2; ++c) out(r, c) = a(r, 0) * b(0, c) + a(r, 1) * b(1, c);
  }
  return out;
}

Matrix2 Svd2::reconstruct() const {
  Matrix2 d_mat;
  d_mat(0, 0) = d[0];
  d_mat(1, 1) = d[1];
  return u.adjoint() * d_mat * v;
}

Svd2 svd_2x2(const Matrix2& n) {
  Eigen::Matrix2cd a;
  a << n(0, 0), n(0, 1), n(1, 0), n(1, 1);
  Svd2 out;
  if (a.cwiseAbs().maxCoeff() == 0.0) {
    out.u = Matrix2::identity();
    out.v = Matrix2::identity();
    return out;
  }
  // a = W S Y^dag, so u = W^dag and v = Y^dag.
  Eigen::JacobiSVD<Eigen::Matrix2cd> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Matrix2cd w = svd.matrixU().adjoint();
  const Eigen::Matrix2cd y = svd.matrixV().adjoint();
  for (std::size_t r = 0; r < 2; ++r) {
    for (std::size_t c = 0; c < 2; ++c) {
      out.u(r, c) = w(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
      out.v(r, c) = y(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
  }
  out.d = {svd.singularValues()(0), svd.singularValues()(1)};
  return out;
}

// ---------------------------------------------------------------------------
// HtnState

HtnState::HtnState(Decomposition dec, std::size_t depth, BasisIndex basis_mask)
    : dec_(std::move(dec)), depth_(depth), basis_mask_(basis_mask) {
  if (dec_.subsystem_count() == 0) throw std::invalid_argument("HTN needs at least one subsystem");
  const std::size_t nq = dec_.n_qubits();
  if (nq < 64 && (basis_mask >> nq) != 0) {
    throw std::out_of_range("basis mask has bits beyond " + std::to_string(nq) + " qubits");
  }
  lower_.assign(dec_.subsystem_count(),
                ParameterVector(real_amplitude_parameter_count(dec_.subsystem_size(), depth), 0.0));
  upper_.assign(real_amplitude_parameter_count(dec_.subsystem_count(), depth), 0.0);
}

HtnState HtnState::from_parameters(Decomposition dec, std::size_t depth,
                                   std::span<const double> flat, BasisIndex basis_mask) {
  HtnState s(std::move(dec), depth, basis_mask);
  s.set_flat_parameters(flat);
  return s;
}

HtnState HtnState::basis_encoding(Decomposition dec, BasisIndex h) {
  return HtnState(std::move(dec), 0, h);
}

std::vector<double> HtnState::flat_parameters() const {
  std::vector<double> flat;
  flat.reserve(parameter_count());
  for (const auto& p : lower_) flat.insert(flat.end(), p.begin(), p.end());
  flat.insert(flat.end(), upper_.begin(), upper_.end());
  return flat;
}

void HtnState::set_flat_parameters(std::span<const double> flat) {
  if (flat.size() != parameter_count()) {
    throw std::invalid_argument("HTN expects " + std::to_string(parameter_count()) +
                                " parameters, got " + std::to_string(flat.size()));
  }
  auto it = flat.begin();
  for (auto& p : lower_) {
    std::copy(it, it + static_cast<std::ptrdiff_t>(p.size()), p.begin());
    it += static_cast<std::ptrdiff_t>(p.size());
  }
  std::copy(it, flat.end(), upper_.begin());
}

// ---------------------------------------------------------------------------
// Contraction

Statevector lower_state(const HtnState& s, std::size_t m, unsigned i) {
  if (m >= s.subsystem_count()) throw std::out_of_range("subsystem index out of range");
  if (i > 1) throw std::out_of_range("leg index must be 0 or 1");
  return apply_circuit(lower_circuit(s, m, i), s.lower(m), Statevector(s.subsystem_size()));
}

Statevector upper_state(const HtnState& s) {
  const std::size_t k = s.subsystem_count();
  return apply_circuit(real_amplitude_ansatz(k, s.depth()), s.upper(), Statevector(k));
}

TransitionMatrix transition_matrix(const HtnState& bra, const HtnState& ket, std::size_t m,
                                   const PauliString& local_op,
                                   const ContractionOptions& options) {
  check_compatible(bra, ket);
  if (m >= bra.subsystem_count()) throw std::out_of_range("subsystem index out of range");
  if (local_op.size() != bra.subsystem_size()) {
    throw std::invalid_argument("local operator must act on the subsystem's " +
                                std::to_string(bra.subsystem_size()) + " qubits");
  }
  if (options.shots > 0) return sampled_transition(bra, ket, m, local_op, options, 0);
  Tensors tb, tk;
  tb.phi.resize(bra.subsystem_count());
  tk.phi.resize(ket.subsystem_count());
  tb.phi[m] = {lower_state(bra, m, 0), lower_state(bra, m, 1)};
  tk.phi[m] = {lower_state(ket, m, 0), lower_state(ket, m, 1)};
  return exact_transition(tb, tk, m, local_op);
}

Amplitude transition_amplitude(const HtnState& bra, const HtnState& ket, const PauliSum& o,
                               const ContractionOptions& options) {
  return contract(bra, ket, o, options);
}

double htn_energy(const HtnState& s, const PauliSum& h, const ContractionOptions& options) {
  const Amplitude e = contract(s, s, h, options);
  if (options.shots == 0 && std::abs(e.imag()) > kImagTolerance) {
    throw std::domain_error("HTN energy has imaginary residue " + std::to_string(e.imag()));
  }
  return e.real();
}

double htn_overlap_basis(const HtnState& s, BasisIndex h) {
  const std::size_t nq = s.n_qubits();
  if (nq < 64 && (h >> nq) != 0) throw std::out_of_range("basis index out of range");
  const HtnState ket = HtnState::basis_encoding(s.decomposition(), h);
  const Amplitude v = contract(s, ket, PauliSum::identity(nq), {});
  if (std::abs(v.imag()) > kImagTolerance) {
    throw std::domain_error("HTN overlap has imaginary residue " + std::to_string(v.imag()));
  }
  return v.real();
}

Statevector expand_dense(const HtnState& s) {
  const std::size_t nq = s.n_qubits();
  Statevector out(nq);
  out[0] = 0.0;
  const Tensors t = build_tensors(s);
  const Decomposition& dec = s.decomposition();
  const std::size_t k = dec.subsystem_count();
  std::vector<BasisIndex> local(k);
  for (BasisIndex g = 0; g < out.dimension(); ++g) {
    for (std::size_t m = 0; m < k; ++m) local[m] = dec.local_index(m, g);
    Amplitude acc = 0.0;
    for (BasisIndex i = 0; i < t.psi.dimension(); ++i) {
      Amplitude prod = t.psi[i];
      for (std::size_t m = 0; m < k && prod != Amplitude(0.0); ++m) {
        prod *= t.phi[m][(i >> m) & 1u][local[m]];
      }
      acc += prod;
    }
    out[g] = acc;
  }
  return out;
}

std::size_t measurement_count(std::size_t k, std::size_t legs, bool real_valued) {
  if (legs < 1) throw std::invalid_argument("each subsystem needs at least one leg");
  if (legs > 30) throw std::overflow_error("leg count too large");
  const std::size_t full = 2 * (std::size_t{1} << (2 * legs)) * k + 2;
  return real_valued ? full / 2 : full;
}

}  // namespace htnqmc
