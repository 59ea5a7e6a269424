#include "htnqmc/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <stdexcept>
#include <unordered_map>

namespace htnqmc {

namespace {

constexpr double kImagTolerance = 1e-10;

std::uint64_t low_mask(std::size_t n) {
  return n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
}

void check_size(std::size_t n_qubits) {
  if (n_qubits > kMaxQubits) {
    throw std::invalid_argument("at most 64 qubits are supported, got " +
                                std::to_string(n_qubits));
  }
}

// i^k for k mod 4.
std::complex<double> i_power(unsigned k) {
  switch (k & 3u) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

struct MaskKey {
  std::uint64_t x;
  std::uint64_t z;
  friend bool operator==(const MaskKey&, const MaskKey&) = default;
};

struct MaskKeyHash {
  std::size_t operator()(const MaskKey& k) const noexcept {
    return std::hash<std::uint64_t>{}(k.x * 0x9E3779B97F4A7C15ull ^ k.z);
  }
};

}  // namespace

char to_char(PauliLetter letter) {
  static constexpr char kChars[] = {'I', 'X', 'Y', 'Z'};
  return kChars[static_cast<int>(letter)];
}

// ---------------------------------------------------------------------------
// PauliString

PauliString::PauliString(std::size_t n_qubits) : n_qubits_(n_qubits) { check_size(n_qubits); }

PauliString::PauliString(std::size_t n_qubits, std::uint64_t x_mask, std::uint64_t z_mask)
    : n_qubits_(n_qubits), x_(x_mask), z_(z_mask) {
  check_size(n_qubits);
  if (((x_mask | z_mask) & ~low_mask(n_qubits)) != 0) {
    throw std::invalid_argument("Pauli string acts beyond its declared qubit count");
  }
}

PauliString PauliString::single(std::size_t n_qubits, std::size_t qubit, PauliLetter letter) {
  PauliString p(n_qubits);
  p.set(qubit, letter);
  return p;
}

std::size_t PauliString::weight() const { return std::popcount(x_ | z_); }

std::size_t PauliString::y_count() const { return std::popcount(x_ & z_); }

PauliLetter PauliString::at(std::size_t qubit) const {
  if (qubit >= n_qubits_) throw std::out_of_range("qubit index out of range");
  const bool x = (x_ >> qubit) & 1u;
  const bool z = (z_ >> qubit) & 1u;
  if (x && z) return PauliLetter::Y;
  if (x) return PauliLetter::X;
  if (z) return PauliLetter::Z;
  return PauliLetter::I;
}

void PauliString::set(std::size_t qubit, PauliLetter letter) {
  if (qubit >= n_qubits_) throw std::out_of_range("qubit index out of range");
  const std::uint64_t bit = std::uint64_t{1} << qubit;
  x_ &= ~bit;
  z_ &= ~bit;
  if (letter == PauliLetter::X || letter == PauliLetter::Y) x_ |= bit;
  if (letter == PauliLetter::Z || letter == PauliLetter::Y) z_ |= bit;
}

std::string PauliString::to_string() const {
  std::string out(n_qubits_, 'I');
  for (std::size_t q = 0; q < n_qubits_; ++q) out[q] = to_char(at(q));
  return out;
}

std::pair<BasisIndex, std::complex<double>> PauliString::apply(BasisIndex h) const {
  std::complex<double> phase = i_power(static_cast<unsigned>(y_count()));
  if (std::popcount(h & z_) & 1) phase = -phase;
  return {h ^ x_, phase};
}

std::pair<PauliString, std::complex<double>> multiply(const PauliString& a,
                                                      const PauliString& b) {
  if (a.size() != b.size()) throw std::invalid_argument("Pauli string size mismatch");
  // Single-qubit products: row = left letter, column = right letter.
  // Entry = (result letter, power of i).
  static constexpr std::pair<PauliLetter, unsigned> kTable[4][4] = {
      {{PauliLetter::I, 0}, {PauliLetter::X, 0}, {PauliLetter::Y, 0}, {PauliLetter::Z, 0}},
      {{PauliLetter::X, 0}, {PauliLetter::I, 0}, {PauliLetter::Z, 1}, {PauliLetter::Y, 3}},
      {{PauliLetter::Y, 0}, {PauliLetter::Z, 3}, {PauliLetter::I, 0}, {PauliLetter::X, 1}},
      {{PauliLetter::Z, 0}, {PauliLetter::Y, 1}, {PauliLetter::X, 3}, {PauliLetter::I, 0}},
  };
  PauliString out(a.size());
  unsigned power = 0;
  const std::uint64_t touched = a.support() | b.support();
  for (std::size_t q = 0; q < a.size(); ++q) {
    if (((touched >> q) & 1u) == 0) continue;
    const auto [letter, p] = kTable[static_cast<int>(a.at(q))][static_cast<int>(b.at(q))];
    out.set(q, letter);
    power += p;
  }
  return {out, i_power(power)};
}

PauliString parse_pauli_string(std::string_view text, std::size_t n_qubits) {
  PauliString out(n_qubits);
  for (std::size_t q = 0; q < text.size(); ++q) {
    switch (text[q]) {
      case 'I': break;
      case 'X': if (q < n_qubits) out.set(q, PauliLetter::X); break;
      case 'Y': if (q < n_qubits) out.set(q, PauliLetter::Y); break;
      case 'Z': if (q < n_qubits) out.set(q, PauliLetter::Z); break;
      default:
        throw std::invalid_argument("illegal Pauli letter '" + std::string(1, text[q]) +
                                    "' at position " + std::to_string(q));
    }
  }
  if (text.size() != n_qubits) {
    throw std::invalid_argument("Pauli string '" + std::string(text) + "' has length " +
                                std::to_string(text.size()) + ", expected " +
                                std::to_string(n_qubits));
  }
  return out;
}

// ---------------------------------------------------------------------------
// PauliSum

PauliSum::PauliSum(std::size_t n_qubits, std::vector<PauliTerm> terms, double drop_tolerance)
    : n_qubits_(n_qubits) {
  check_size(n_qubits);
  std::unordered_map<MaskKey, std::size_t, MaskKeyHash> index;
  std::vector<PauliTerm> merged;
  merged.reserve(terms.size());
  for (auto& t : terms) {
    if (t.string.size() != n_qubits) {
      throw std::invalid_argument("term '" + t.string.to_string() + "' does not act on " +
                                  std::to_string(n_qubits) + " qubits");
    }
    if (!std::isfinite(t.coefficient)) throw std::invalid_argument("non-finite coefficient");
    const MaskKey key{t.string.x_mask(), t.string.z_mask()};
    auto [it, inserted] = index.try_emplace(key, merged.size());
    if (inserted) {
      merged.push_back(std::move(t));
    } else {
      merged[it->second].coefficient += t.coefficient;
    }
  }
  terms_.reserve(merged.size());
  for (auto& t : merged) {
    if (std::abs(t.coefficient) >= drop_tolerance) terms_.push_back(std::move(t));
  }
}

PauliSum PauliSum::identity(std::size_t n_qubits, double coefficient) {
  return PauliSum(n_qubits, {PauliTerm{coefficient, PauliString::identity(n_qubits)}});
}

double PauliSum::coefficient(const PauliString& string) const {
  for (const auto& t : terms_) {
    if (t.string == string) return t.coefficient;
  }
  return 0.0;
}

PauliSum PauliSum::operator+(const PauliSum& other) const {
  if (other.n_qubits_ != n_qubits_) throw std::invalid_argument("PauliSum size mismatch");
  std::vector<PauliTerm> all = terms_;
  all.insert(all.end(), other.terms_.begin(), other.terms_.end());
  return PauliSum(n_qubits_, std::move(all));
}

PauliSum PauliSum::operator-(const PauliSum& other) const { return *this + other * -1.0; }

PauliSum PauliSum::operator*(double scale) const {
  std::vector<PauliTerm> all = terms_;
  for (auto& t : all) t.coefficient *= scale;
  return PauliSum(n_qubits_, std::move(all));
}

bool PauliSum::same_terms(const PauliSum& other, double tolerance) const {
  if (n_qubits_ != other.n_qubits_ || terms_.size() != other.terms_.size()) return false;
  for (const auto& t : terms_) {
    const double c = other.coefficient(t.string);
    if (c == 0.0 || std::abs(c - t.coefficient) > tolerance) return false;
  }
  return true;
}

PauliSum multiply(const PauliSum& a, const PauliSum& b) {
  if (a.n_qubits() != b.n_qubits()) throw std::invalid_argument("PauliSum size mismatch");
  std::map<std::pair<std::uint64_t, std::uint64_t>, std::complex<double>> acc;
  std::vector<PauliString> order;
  for (const auto& ta : a.terms()) {
    for (const auto& tb : b.terms()) {
      auto [s, phase] = multiply(ta.string, tb.string);
      auto [it, inserted] = acc.try_emplace({s.x_mask(), s.z_mask()}, 0.0);
      if (inserted) order.push_back(s);
      it->second += ta.coefficient * tb.coefficient * phase;
    }
  }
  std::vector<PauliTerm> terms;
  terms.reserve(order.size());
  for (const auto& s : order) {
    const auto c = acc.at({s.x_mask(), s.z_mask()});
    if (std::abs(c.imag()) > kImagTolerance) {
      throw std::domain_error("operator product has an imaginary coefficient on " +
                              s.to_string());
    }
    terms.push_back({c.real(), s});
  }
  return PauliSum(a.n_qubits(), std::move(terms));
}

// ---------------------------------------------------------------------------
// Decomposition

Decomposition::Decomposition(std::vector<std::vector<std::size_t>> groups, std::string name)
    : groups_(std::move(groups)), name_(std::move(name)) {
  if (groups_.empty()) throw std::invalid_argument("decomposition needs at least one group");
  const std::size_t n = groups_.front().size();
  if (n == 0) throw std::invalid_argument("decomposition groups must be non-empty");
  const std::size_t total = n * groups_.size();
  check_size(total);
  std::vector<bool> seen(total, false);
  for (const auto& g : groups_) {
    if (g.size() != n) throw std::invalid_argument("decomposition groups must have equal size");
    for (std::size_t q : g) {
      if (q >= total) {
        throw std::invalid_argument("qubit " + std::to_string(q) + " outside 0.." +
                                    std::to_string(total - 1));
      }
      if (seen[q]) throw std::invalid_argument("qubit " + std::to_string(q) + " appears twice");
      seen[q] = true;
    }
  }
}

Decomposition Decomposition::contiguous(std::size_t n_qubits, std::size_t k, std::string name) {
  if (k == 0 || n_qubits % k != 0) {
    throw std::invalid_argument("cannot split " + std::to_string(n_qubits) + " qubits into " +
                                std::to_string(k) + " equal groups");
  }
  const std::size_t n = n_qubits / k;
  std::vector<std::vector<std::size_t>> groups(k);
  for (std::size_t m = 0; m < k; ++m) {
    for (std::size_t r = 0; r < n; ++r) groups[m].push_back(m * n + r);
  }
  return Decomposition(std::move(groups), std::move(name));
}

Decomposition Decomposition::strided(std::size_t n_qubits, std::size_t k, std::string name) {
  if (k == 0 || n_qubits % k != 0) {
    throw std::invalid_argument("cannot split " + std::to_string(n_qubits) + " qubits into " +
                                std::to_string(k) + " equal groups");
  }
  std::vector<std::vector<std::size_t>> groups(k);
  for (std::size_t q = 0; q < n_qubits; ++q) groups[q % k].push_back(q);
  return Decomposition(std::move(groups), std::move(name));
}

std::uint64_t Decomposition::group_mask(std::size_t m) const {
  std::uint64_t mask = 0;
  for (std::size_t q : groups_.at(m)) mask |= std::uint64_t{1} << q;
  return mask;
}

BasisIndex Decomposition::local_index(std::size_t m, BasisIndex global) const {
  const auto& g = groups_[m];
  BasisIndex local = 0;
  for (std::size_t r = 0; r < g.size(); ++r) local |= ((global >> g[r]) & 1u) << r;
  return local;
}

BasisIndex Decomposition::scatter(std::size_t m, BasisIndex local) const {
  const auto& g = groups_[m];
  BasisIndex global = 0;
  for (std::size_t r = 0; r < g.size(); ++r) global |= ((local >> r) & 1u) << g[r];
  return global;
}

// ---------------------------------------------------------------------------
// Jordan-Wigner

PauliSum jordan_wigner(const FermionTerm& term, std::size_t n_qubits) {
  const auto check = [n_qubits](std::size_t idx) {
    if (idx >= n_qubits) {
      throw std::out_of_range("spin-orbital index " + std::to_string(idx) +
                              " out of range for " + std::to_string(n_qubits) + " qubits");
    }
  };
  check(term.p);
  const double c = term.coefficient;
  switch (term.kind) {
    case FermionTermKind::Number: {
      // n_p = (I - Z_p) / 2
      return PauliSum(n_qubits, {{0.5 * c, PauliString::identity(n_qubits)},
                                 {-0.5 * c, PauliString::single(n_qubits, term.p, PauliLetter::Z)}});
    }
    case FermionTermKind::NumberNumber: {
      check(term.q);
      if (term.p == term.q) throw std::invalid_argument("n_p n_q needs distinct indices");
      PauliString zp = PauliString::single(n_qubits, term.p, PauliLetter::Z);
      PauliString zq = PauliString::single(n_qubits, term.q, PauliLetter::Z);
      PauliString zz = zp;
      zz.set(term.q, PauliLetter::Z);
      return PauliSum(n_qubits, {{0.25 * c, PauliString::identity(n_qubits)},
                                 {-0.25 * c, zp},
                                 {-0.25 * c, zq},
                                 {0.25 * c, zz}});
    }
    case FermionTermKind::Hopping: {
      check(term.q);
      if (term.p == term.q) throw std::invalid_argument("hopping needs distinct indices");
      const std::size_t lo = std::min(term.p, term.q);
      const std::size_t hi = std::max(term.p, term.q);
      PauliString xx(n_qubits);
      PauliString yy(n_qubits);
      for (std::size_t r = lo + 1; r < hi; ++r) {
        xx.set(r, PauliLetter::Z);
        yy.set(r, PauliLetter::Z);
      }
      xx.set(lo, PauliLetter::X);
      xx.set(hi, PauliLetter::X);
      yy.set(lo, PauliLetter::Y);
      yy.set(hi, PauliLetter::Y);
      return PauliSum(n_qubits, {{0.5 * c, xx}, {0.5 * c, yy}});
    }
  }
  throw std::logic_error("unknown fermion term kind");
}

PauliSum jordan_wigner(const std::vector<FermionTerm>& terms, std::size_t n_qubits) {
  std::vector<PauliTerm> all;
  for (const auto& t : terms) {
    const PauliSum mapped = jordan_wigner(t, n_qubits);
    all.insert(all.end(), mapped.terms().begin(), mapped.terms().end());
  }
  return PauliSum(n_qubits, std::move(all));
}

// ---------------------------------------------------------------------------
// Interaction strength

double interaction_strength_gmr(const PauliSum& h, const Decomposition& dec) {
  if (dec.n_qubits() != h.n_qubits()) {
    throw std::invalid_argument("decomposition covers " + std::to_string(dec.n_qubits()) +
                                " qubits but the Hamiltonian has " +
                                std::to_string(h.n_qubits()));
  }
  std::vector<std::uint64_t> masks(dec.subsystem_count());
  for (std::size_t m = 0; m < masks.size(); ++m) masks[m] = dec.group_mask(m);
  double total = 0.0;
  for (const auto& t : h.terms()) {
    const std::uint64_t support = t.string.support();
    std::size_t touched = 0;
    for (std::uint64_t mask : masks) touched += (support & mask) != 0;
    if (touched >= 2) total += std::abs(t.coefficient);
  }
  return total / static_cast<double>(dec.subsystem_count());
}

// ---------------------------------------------------------------------------
// Matrix elements

double matrix_element(const PauliSum& h, BasisIndex row, BasisIndex col) {
  const std::uint64_t limit = low_mask(h.n_qubits());
  if ((row & ~limit) != 0 || (col & ~limit) != 0) {
    throw std::out_of_range("basis index beyond 2^" + std::to_string(h.n_qubits()));
  }
  std::complex<double> acc = 0.0;
  for (const auto& t : h.terms()) {
    if ((col ^ t.string.x_mask()) != row) continue;
    acc += t.coefficient * t.string.apply(col).second;
  }
  if (std::abs(acc.imag()) > kImagTolerance) {
    throw std::domain_error("matrix element has imaginary part " + std::to_string(acc.imag()));
  }
  return acc.real();
}

std::vector<Connection> connected_states(const PauliSum& h, BasisIndex col) {
  return FlipGroupedHamiltonian(h).column(col);
}

FlipGroupedHamiltonian::FlipGroupedHamiltonian(const PauliSum& h) : n_qubits_(h.n_qubits()) {
  diagonal_.flip = 0;
  std::map<std::uint64_t, std::vector<Entry>> groups;
  for (const auto& t : h.terms()) {
    const Entry e{t.string.z_mask(),
                  t.coefficient * i_power(static_cast<unsigned>(t.string.y_count()))};
    if (t.string.x_mask() == 0) {
      diagonal_.entries.push_back(e);
    } else {
      groups[t.string.x_mask()].push_back(e);
    }
  }
  off_diagonal_.reserve(groups.size());
  for (auto& [flip, entries] : groups) off_diagonal_.push_back({flip, std::move(entries)});
}

std::complex<double> FlipGroupedHamiltonian::evaluate(const Group& group, BasisIndex h) {
  std::complex<double> acc = 0.0;
  for (const auto& e : group.entries) {
    if (std::popcount(h & e.z_mask) & 1) {
      acc -= e.weight;
    } else {
      acc += e.weight;
    }
  }
  return acc;
}

double FlipGroupedHamiltonian::diagonal(BasisIndex h) const {
  const auto v = evaluate(diagonal_, h);
  if (std::abs(v.imag()) > kImagTolerance) {
    throw std::domain_error("diagonal element has an imaginary part");
  }
  return v.real();
}

std::vector<Connection> FlipGroupedHamiltonian::column(BasisIndex h) const {
  std::vector<Connection> out;
  for (const auto& g : off_diagonal_) {
    const auto v = evaluate(g, h);
    if (std::abs(v.imag()) > kImagTolerance) {
      throw std::domain_error("matrix element has an imaginary part");
    }
    // Exact cancellations (e.g. XX + YY on aligned spins) land on zero; the
    // threshold only absorbs rounding from merged coefficients.
    if (std::abs(v.real()) > 1e-14) out.push_back({h ^ g.flip, v.real()});
  }
  std::sort(out.begin(), out.end(),
            [](const Connection& a, const Connection& b) { return a.state < b.state; });
  return out;
}

}  // namespace htnqmc
