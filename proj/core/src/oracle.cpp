#include "htnqmc/oracle.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace htnqmc {

namespace {

constexpr double kDegeneracyTolerance = 1e-9;
constexpr double kProjectionWeight = 1e-8;
constexpr double kSchmidtCutoff = 1e-14;

void check_size(std::size_t n) {
  if (n > kMaxOracleQubits) {
    throw std::length_error("exact diagonalization limited to " +
                            std::to_string(kMaxOracleQubits) + " qubits, got " +
                            std::to_string(n));
  }
}

bool conserves_weight(const FlipGroupedHamiltonian& fh, std::size_t n) {
  for (BasisIndex h = 0; h < (BasisIndex{1} << n); ++h) {
    for (const auto& c : fh.column(h)) {
      if (std::popcount(c.state) != std::popcount(h)) return false;
    }
  }
  return true;
}

struct Eigenpairs {
  std::vector<BasisIndex> basis;  // block basis states
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

Eigenpairs diagonalize_block(const FlipGroupedHamiltonian& fh, std::vector<BasisIndex> basis) {
  const auto dim = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index c = 0; c < dim; ++c) {
    const BasisIndex h = basis[static_cast<std::size_t>(c)];
    m(c, c) = fh.diagonal(h);
    for (const auto& conn : fh.column(h)) {
      const auto it = std::lower_bound(basis.begin(), basis.end(), conn.state);
      if (it != basis.end() && *it == conn.state) m(it - basis.begin(), c) = conn.element;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
  return {std::move(basis), solver.eigenvalues(), solver.eigenvectors()};
}

// Deterministic representative of the span of `space` (columns, full basis).
Eigen::VectorXd canonical_vector(const Eigen::MatrixXd& space) {
  Eigen::VectorXd v;
  if (space.cols() == 1) {
    v = space.col(0);
  } else {
    for (Eigen::Index j = 0; j < space.rows(); ++j) {
      Eigen::VectorXd p = space * space.row(j).transpose();
      if (p.squaredNorm() > kProjectionWeight) {
        v = p.normalized();
        break;
      }
    }
  }
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (std::abs(v(i)) > std::abs(v(best)) + 1e-12) best = i;
  }
  if (v(best) < 0) v = -v;
  return v;
}

}  // namespace

std::vector<double> dense_matrix(const PauliSum& h) {
  const std::size_t n = h.n_qubits();
  check_size(n);
  const std::size_t dim = std::size_t{1} << n;
  const FlipGroupedHamiltonian fh(h);
  std::vector<double> m(dim * dim, 0.0);
  for (BasisIndex c = 0; c < dim; ++c) {
    m[c * dim + c] = fh.diagonal(c);
    for (const auto& conn : fh.column(c)) m[conn.state * dim + c] = conn.element;
  }
  return m;
}

SpectrumResult ground_state(const PauliSum& h, std::optional<std::size_t> sector) {
  const std::size_t n = h.n_qubits();
  check_size(n);
  if (sector && *sector > n) throw std::invalid_argument("sector exceeds the qubit count");
  const FlipGroupedHamiltonian fh(h);
  const BasisIndex dim = BasisIndex{1} << n;

  std::vector<std::vector<BasisIndex>> blocks;
  if (sector || conserves_weight(fh, n)) {
    blocks.assign(n + 1, {});
    for (BasisIndex b = 0; b < dim; ++b) blocks[static_cast<std::size_t>(std::popcount(b))].push_back(b);
    if (sector) blocks = {blocks[*sector]};
  } else {
    blocks.emplace_back(dim);
    for (BasisIndex b = 0; b < dim; ++b) blocks.back()[b] = b;
  }

  std::vector<Eigenpairs> solved;
  double e_min = std::numeric_limits<double>::infinity();
  for (auto& basis : blocks) {
    if (basis.empty()) continue;
    solved.push_back(diagonalize_block(fh, std::move(basis)));
    e_min = std::min(e_min, solved.back().values(0));
  }

  // Gather the ground space across blocks in the full basis.
  std::vector<Eigen::VectorXd> columns;
  const double tol = kDegeneracyTolerance * std::max(1.0, std::abs(e_min));
  for (const auto& block : solved) {
    for (Eigen::Index j = 0; j < block.values.size() && block.values(j) - e_min <= tol; ++j) {
      Eigen::VectorXd full = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
      for (std::size_t r = 0; r < block.basis.size(); ++r) {
        full(static_cast<Eigen::Index>(block.basis[r])) =
            block.vectors(static_cast<Eigen::Index>(r), j);
      }
      columns.push_back(std::move(full));
    }
  }
  Eigen::MatrixXd space(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(columns.size()));
  for (std::size_t j = 0; j < columns.size(); ++j) space.col(static_cast<Eigen::Index>(j)) = columns[j];
  const Eigen::VectorXd v = canonical_vector(space);

  SpectrumResult out;
  out.energy = e_min;
  out.sector = sector;
  std::vector<Amplitude> amps(dim);
  for (BasisIndex b = 0; b < dim; ++b) amps[b] = v(static_cast<Eigen::Index>(b));
  out.state = Statevector(n, std::move(amps));
  return out;
}

double fidelity(const Statevector& a, const Statevector& b) {
  if (a.dimension() != b.dimension()) throw std::invalid_argument("fidelity size mismatch");
  return std::norm(inner_product(a, b));
}

double bipartite_entropy(const Statevector& psi, std::uint64_t part) {
  const std::size_t n = psi.n_qubits();
  const std::uint64_t all = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  if ((part & ~all) != 0) throw std::invalid_argument("subset contains qubits outside the state");
  if (part == 0 || part == all) throw std::invalid_argument("subset must be proper and non-empty");

  std::vector<std::size_t> in, out;
  for (std::size_t q = 0; q < n; ++q) ((part >> q) & 1u ? in : out).push_back(q);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(Eigen::Index{1} << in.size(),
                                              Eigen::Index{1} << out.size());
  for (BasisIndex h = 0; h < psi.dimension(); ++h) {
    Eigen::Index r = 0, c = 0;
    for (std::size_t i = 0; i < in.size(); ++i) r |= static_cast<Eigen::Index>((h >> in[i]) & 1u) << i;
    for (std::size_t i = 0; i < out.size(); ++i) c |= static_cast<Eigen::Index>((h >> out[i]) & 1u) << i;
    m(r, c) = psi[h];
  }
  const Eigen::VectorXd s = Eigen::BDCSVD<Eigen::MatrixXcd>(m).singularValues();
  double entropy = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const double p = s(i) * s(i);
    if (p > kSchmidtCutoff) entropy -= p * std::log2(p);
  }
  return entropy;
}

double bipartite_entropy(const Statevector& psi, std::span<const std::size_t> part) {
  std::uint64_t mask = 0;
  for (const std::size_t q : part) {
    if (q >= psi.n_qubits()) throw std::invalid_argument("subset qubit out of range");
    mask |= std::uint64_t{1} << q;
  }
  return bipartite_entropy(psi, mask);
}

BasisIndex dominant_basis_state(const Statevector& psi) {
  BasisIndex best = 0;
  for (BasisIndex h = 1; h < psi.dimension(); ++h) {
    if (std::abs(psi[h]) > std::abs(psi[best]) + 1e-12) best = h;
  }
  return best;
}

BasisIndex single_reference_state(const PauliSum& h, std::optional<std::size_t> sector) {
  return dominant_basis_state(ground_state(h, sector).state);
}

std::vector<DistributionEntry> wavefunction_distribution(const Statevector& psi,
                                                         std::span<const std::size_t> permutation) {
  const std::size_t n = psi.n_qubits();
  if (!permutation.empty()) {
    if (permutation.size() != n) throw std::invalid_argument("permutation size mismatch");
    std::vector<bool> seen(n, false);
    for (const std::size_t p : permutation) {
      if (p >= n || seen[p]) throw std::invalid_argument("permutation is not a bijection");
      seen[p] = true;
    }
  }
  std::vector<DistributionEntry> out(psi.dimension());
  for (BasisIndex h = 0; h < psi.dimension(); ++h) {
    BasisIndex idx = h;
    if (!permutation.empty()) {
      idx = 0;
      for (std::size_t q = 0; q < n; ++q) idx |= ((h >> q) & 1u) << permutation[q];
    }
    out[idx] = {idx, std::abs(psi[h])};
  }
  return out;
}

std::vector<std::size_t> decomposition_permutation(const Decomposition& dec) {
  std::vector<std::size_t> perm(dec.n_qubits());
  const std::size_t n = dec.subsystem_size();
  for (std::size_t m = 0; m < dec.subsystem_count(); ++m) {
    for (std::size_t r = 0; r < n; ++r) perm[dec.group(m)[r]] = m * n + r;
  }
  return perm;
}

void write_distribution_csv(std::ostream& out, const std::vector<DistributionEntry>& entries) {
  out << "basis_index,abs_coefficient\n";
  char buf[32];
  for (const auto& e : entries) {
    std::snprintf(buf, sizeof buf, "%.17g", e.abs_coefficient);
    out << e.basis_index << ',' << buf << '\n';
  }
}

EnergyStats energy_stats(const RunTrace& trace, std::size_t start, std::size_t end,
                         double e_exact) {
  EnergyStats s;
  double sum = 0.0;
  for (const auto& r : trace.records) {
    if (r.iteration < start || r.iteration > end) continue;
    if (!r.e_mix_valid) {
      ++s.invalid;
      continue;
    }
    sum += r.e_mix;
    ++s.samples;
  }
  if (s.samples == 0) throw std::domain_error("no valid E_mix rows in the statistics window");
  s.mean = sum / static_cast<double>(s.samples);
  double sq = 0.0;
  for (const auto& r : trace.records) {
    if (r.iteration < start || r.iteration > end || !r.e_mix_valid) continue;
    sq += (r.e_mix - s.mean) * (r.e_mix - s.mean);
  }
  s.std = std::sqrt(sq / static_cast<double>(s.samples));
  s.abs_error = std::abs(s.mean - e_exact);
  return s;
}

}  // namespace htnqmc
