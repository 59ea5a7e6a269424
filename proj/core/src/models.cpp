#include "htnqmc/models.hpp"

#include <charconv>
#include <sstream>
#include <stdexcept>

namespace htnqmc {

namespace {

void add_bond(std::vector<PauliTerm>& terms, std::size_t n_qubits, std::size_t a,
              std::size_t b, double coupling) {
  for (PauliLetter letter : {PauliLetter::X, PauliLetter::Y, PauliLetter::Z}) {
    PauliString s(n_qubits);
    s.set(a, letter);
    s.set(b, letter);
    terms.push_back({coupling, s});
  }
}

}  // namespace

PauliSum build_heisenberg_chain(std::size_t k, double j_inter) {
  if (k < 1) throw std::invalid_argument("Heisenberg chain needs at least one cluster");
  const std::size_t n_qubits = 4 * k;
  std::vector<PauliTerm> terms;
  for (std::size_t p = 0; p < k; ++p) {
    for (std::size_t f = 0; f < 3; ++f) add_bond(terms, n_qubits, 4 * p + f, 4 * p + f + 1, 1.0);
  }
  for (std::size_t p = 0; p + 1 < k; ++p) {
    add_bond(terms, n_qubits, 4 * p + 3, 4 * p + 4, j_inter);
  }
  return PauliSum(n_qubits, std::move(terms));
}

PauliSum build_graphite_hubbard(double t1, double t2, double u) {
  constexpr std::size_t kQubits = 8;
  std::vector<FermionTerm> terms;
  // 1-based orbital labels, shifted on insertion.
  for (std::size_t q : {1, 2, 5, 6}) terms.push_back(FermionTerm::hopping(q - 1, q + 1, 3.0 * t1));
  for (std::size_t q : {1, 2}) terms.push_back(FermionTerm::hopping(q - 1, q + 3, 2.0 * t2));
  for (std::size_t q : {1, 3, 5, 7}) terms.push_back(FermionTerm::number_number(q - 1, q, u));
  return jordan_wigner(terms, kQubits);
}

Decomposition heisenberg_decomposition(const std::string& name, std::size_t k) {
  if (name == "cluster") return Decomposition::contiguous(4 * k, k, "cluster");
  if (name == "even_odd" || name == "even-odd") return Decomposition::strided(4 * k, k, "even_odd");
  throw std::invalid_argument("unknown Heisenberg decomposition '" + name + "'");
}

Decomposition graphite_decomposition(const std::string& name) {
  if (name == "horizontal") return Decomposition({{0, 1, 2, 3}, {4, 5, 6, 7}}, "horizontal");
  if (name == "vertical") return Decomposition({{0, 1, 4, 5}, {2, 3, 6, 7}}, "vertical");
  throw std::invalid_argument("unknown graphite decomposition '" + name + "'");
}

Decomposition parse_decomposition_groups(const std::string& text, std::string name) {
  std::vector<std::vector<std::size_t>> groups;
  std::stringstream outer(text);
  std::string group_text;
  while (std::getline(outer, group_text, '|')) {
    std::vector<std::size_t> group;
    std::stringstream inner(group_text);
    std::string item;
    while (std::getline(inner, item, ',')) {
      std::size_t q = 0;
      const auto* first = item.data();
      const auto* last = item.data() + item.size();
      while (first != last && *first == ' ') ++first;
      while (last != first && *(last - 1) == ' ') --last;
      auto [ptr, ec] = std::from_chars(first, last, q);
      if (ec != std::errc() || ptr != last) {
        throw std::invalid_argument("bad qubit index '" + item + "' in groups '" + text + "'");
      }
      group.push_back(q);
    }
    groups.push_back(std::move(group));
  }
  return Decomposition(std::move(groups), std::move(name));
}

std::string format_decomposition_groups(const Decomposition& dec) {
  std::string out;
  for (std::size_t m = 0; m < dec.subsystem_count(); ++m) {
    if (m) out += '|';
    const auto& g = dec.group(m);
    for (std::size_t r = 0; r < g.size(); ++r) {
      if (r) out += ',';
      out += std::to_string(g[r]);
    }
  }
  return out;
}

}  // namespace htnqmc
