#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace htnqmc {

/// Index of a computational basis state. Bit b of the index is the state of
/// qubit b, so qubit 0 is the least significant bit. Site 1 of a model
/// written with 1-based site labels is qubit 0.
using BasisIndex = std::uint64_t;

inline constexpr std::size_t kMaxQubits = 64;

enum class PauliLetter : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char to_char(PauliLetter letter);

/// Fixed-length Pauli string stored in symplectic form.
///
/// A qubit carries X when only its x bit is set, Z when only its z bit is
/// set, and Y when both are set. Acting on a basis state |h> the string
/// produces phase * |h ^ x_mask()> with
///   phase = i^{#Y} * (-1)^{popcount(h & z_mask())}
/// because Y = i X Z.
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(std::size_t n_qubits);
  PauliString(std::size_t n_qubits, std::uint64_t x_mask, std::uint64_t z_mask);

  static PauliString identity(std::size_t n_qubits) { return PauliString(n_qubits); }
  static PauliString single(std::size_t n_qubits, std::size_t qubit, PauliLetter letter);

  std::size_t size() const { return n_qubits_; }
  std::uint64_t x_mask() const { return x_; }
  std::uint64_t z_mask() const { return z_; }
  /// Qubits acted on non-trivially.
  std::uint64_t support() const { return x_ | z_; }
  std::size_t weight() const;
  std::size_t y_count() const;
  bool is_identity() const { return (x_ | z_) == 0; }
  bool is_diagonal() const { return x_ == 0; }

  PauliLetter at(std::size_t qubit) const;
  void set(std::size_t qubit, PauliLetter letter);

  /// Letters for qubit 0..n-1, left to right.
  std::string to_string() const;

  /// P|h> = phase * |target>.
  std::pair<BasisIndex, std::complex<double>> apply(BasisIndex h) const;

  friend bool operator==(const PauliString&, const PauliString&) = default;

 private:
  std::size_t n_qubits_ = 0;
  std::uint64_t x_ = 0;
  std::uint64_t z_ = 0;
};

/// Product of two Pauli strings: a * b = phase * result.
std::pair<PauliString, std::complex<double>> multiply(const PauliString& a,
                                                      const PauliString& b);

/// Parses letters left to right as qubits 0..n-1.
/// Throws std::invalid_argument on wrong length or a letter outside IXYZ.
PauliString parse_pauli_string(std::string_view text, std::size_t n_qubits);

struct PauliTerm {
  double coefficient = 0.0;
  PauliString string;
};

inline constexpr double kDefaultDropTolerance = 1e-12;

/// Real-weighted sum of Pauli strings.
///
/// Construction canonicalizes: identical strings are merged by adding their
/// coefficients (first occurrence keeps its position) and terms whose
/// magnitude falls below the drop tolerance are removed.
class PauliSum {
 public:
  PauliSum() = default;
  explicit PauliSum(std::size_t n_qubits) : n_qubits_(n_qubits) {}
  PauliSum(std::size_t n_qubits, std::vector<PauliTerm> terms,
           double drop_tolerance = kDefaultDropTolerance);

  static PauliSum identity(std::size_t n_qubits, double coefficient = 1.0);

  std::size_t n_qubits() const { return n_qubits_; }
  const std::vector<PauliTerm>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  /// Coefficient of `string`, zero when absent.
  double coefficient(const PauliString& string) const;

  PauliSum operator+(const PauliSum& other) const;
  PauliSum operator-(const PauliSum& other) const;
  PauliSum operator*(double scale) const;

  /// Same term set with the same coefficients, order ignored.
  bool same_terms(const PauliSum& other, double tolerance = 0.0) const;

 private:
  std::size_t n_qubits_ = 0;
  std::vector<PauliTerm> terms_;
};

/// Operator product. Throws std::domain_error if the product is not a real
/// combination of Pauli strings (imaginary residue above 1e-10).
PauliSum multiply(const PauliSum& a, const PauliSum& b);

/// Partition of the qubits into k ordered subsystems of equal size n.
/// The first qubit of each group is the subsystem's leg qubit.
class Decomposition {
 public:
  Decomposition() = default;
  /// Throws std::invalid_argument unless the groups are disjoint, cover
  /// 0..nk-1 and all have the same non-zero size.
  Decomposition(std::vector<std::vector<std::size_t>> groups, std::string name = "custom");

  /// k groups of consecutive qubits.
  static Decomposition contiguous(std::size_t n_qubits, std::size_t k,
                                  std::string name = "cluster");
  /// Qubit q goes to group q mod k.
  static Decomposition strided(std::size_t n_qubits, std::size_t k,
                               std::string name = "even_odd");

  const std::vector<std::vector<std::size_t>>& groups() const { return groups_; }
  const std::vector<std::size_t>& group(std::size_t m) const { return groups_.at(m); }
  std::size_t subsystem_count() const { return groups_.size(); }
  std::size_t subsystem_size() const { return groups_.empty() ? 0 : groups_.front().size(); }
  std::size_t n_qubits() const { return subsystem_count() * subsystem_size(); }
  const std::string& name() const { return name_; }

  /// Mask over global qubits for group m.
  std::uint64_t group_mask(std::size_t m) const;
  /// Global basis bits of group m packed into a local n-qubit index.
  BasisIndex local_index(std::size_t m, BasisIndex global) const;
  /// Inverse of local_index for one group (other bits zero).
  BasisIndex scatter(std::size_t m, BasisIndex local) const;

  friend bool operator==(const Decomposition& a, const Decomposition& b) {
    return a.groups_ == b.groups_;
  }

 private:
  std::vector<std::vector<std::size_t>> groups_;
  std::string name_;
};

enum class FermionTermKind { Hopping, NumberNumber, Number };

/// One fermionic term in spin-orbital indices (qubit q = spin orbital q).
///   Hopping(p,q):      coefficient * (a_p^dag a_q + a_q^dag a_p)
///   NumberNumber(p,q): coefficient * n_p n_q
///   Number(p):         coefficient * n_p          (q ignored)
struct FermionTerm {
  FermionTermKind kind = FermionTermKind::Number;
  std::size_t p = 0;
  std::size_t q = 0;
  double coefficient = 0.0;

  static FermionTerm hopping(std::size_t p, std::size_t q, double coefficient) {
    return {FermionTermKind::Hopping, p, q, coefficient};
  }
  static FermionTerm number_number(std::size_t p, std::size_t q, double coefficient) {
    return {FermionTermKind::NumberNumber, p, q, coefficient};
  }
  static FermionTerm number(std::size_t p, double coefficient) {
    return {FermionTermKind::Number, p, p, coefficient};
  }
};

/// Jordan-Wigner image of a fermionic term, with occupied = |1>.
/// Throws std::out_of_range for an index >= n_qubits and
/// std::invalid_argument for p == q in a two-index term.
PauliSum jordan_wigner(const FermionTerm& term, std::size_t n_qubits);
PauliSum jordan_wigner(const std::vector<FermionTerm>& terms, std::size_t n_qubits);

/// Average inter-subsystem interaction strength
///   G = (1/k) sum_a |c_a| delta_a,
/// where delta_a = 1 when the non-identity support of term a intersects two
/// or more groups. Throws std::invalid_argument on a size mismatch.
double interaction_strength_gmr(const PauliSum& h, const Decomposition& dec);

/// <row|H|col>. Throws std::domain_error when the accumulated imaginary part
/// exceeds 1e-10, and std::out_of_range for indices beyond 2^n.
double matrix_element(const PauliSum& h, BasisIndex row, BasisIndex col);

struct Connection {
  BasisIndex state = 0;
  double element = 0.0;

  friend bool operator==(const Connection&, const Connection&) = default;
};

/// All h' != h with <h'|H|h> != 0, ascending by h'.
std::vector<Connection> connected_states(const PauliSum& h, BasisIndex col);

/// Terms of a PauliSum regrouped by flip mask, for repeated column queries.
///
/// Every string with the same x mask connects h to the same h ^ x, so one
/// column entry is a short signed sum over that group.
class FlipGroupedHamiltonian {
 public:
  explicit FlipGroupedHamiltonian(const PauliSum& h);

  std::size_t n_qubits() const { return n_qubits_; }
  double diagonal(BasisIndex h) const;
  /// Same contract as connected_states().
  std::vector<Connection> column(BasisIndex h) const;

 private:
  struct Entry {
    std::uint64_t z_mask;
    std::complex<double> weight;  // coefficient * i^{#Y}
  };
  struct Group {
    std::uint64_t flip;
    std::vector<Entry> entries;
  };

  static std::complex<double> evaluate(const Group& group, BasisIndex h);

  std::size_t n_qubits_ = 0;
  Group diagonal_;
  std::vector<Group> off_diagonal_;  // sorted by flip mask
};

}  // namespace htnqmc
