#include "htnqmc/hamiltonian_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace htnqmc {

namespace {

std::string strip(const std::string& line) {
  std::string s = line.substr(0, line.find('#'));
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

bool looks_complex(const std::string& token) {
  if (token.find_first_of("ijJ(") != std::string::npos) return true;
  // "0.5+0.1" style: a sign after the first character that is not an exponent sign.
  for (std::size_t i = 1; i < token.size(); ++i) {
    if ((token[i] == '+' || token[i] == '-') && token[i - 1] != 'e' && token[i - 1] != 'E') {
      return true;
    }
  }
  return false;
}

}  // namespace

PauliSum read_hamiltonian(std::istream& in) {
  std::string raw;
  std::size_t line_no = 0;
  std::size_t n_qubits = 0;
  bool have_header = false;
  std::vector<PauliTerm> terms;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = strip(raw);
    if (line.empty()) continue;
    if (!have_header) {
      auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), n_qubits);
      if (ec != std::errc() || ptr != line.data() + line.size()) {
        throw ParseError(line_no, "expected qubit count, got '" + line + "'");
      }
      if (n_qubits == 0 || n_qubits > kMaxQubits) {
        throw ParseError(line_no, "qubit count must be in 1..64");
      }
      have_header = true;
      continue;
    }
    std::istringstream fields(line);
    std::string coeff_text;
    std::string letters;
    std::string extra;
    fields >> coeff_text >> letters;
    if (letters.empty()) throw ParseError(line_no, "expected '<coefficient> <pauli letters>'");
    if (fields >> extra) throw ParseError(line_no, "unexpected trailing field '" + extra + "'");

    double coefficient = 0.0;
    const char* begin = coeff_text.data();
    const char* end = begin + coeff_text.size();
    if (*begin == '+') ++begin;
    auto [ptr, ec] = std::from_chars(begin, end, coefficient);
    if (ec != std::errc() || ptr != end) {
      if (looks_complex(coeff_text)) {
        throw ParseError(line_no, "non-real coefficient '" + coeff_text + "'");
      }
      throw ParseError(line_no, "malformed coefficient '" + coeff_text + "'");
    }
    try {
      terms.push_back({coefficient, parse_pauli_string(letters, n_qubits)});
    } catch (const std::invalid_argument& e) {
      throw ParseError(line_no, e.what());
    }
  }
  if (!have_header) throw ParseError(line_no, "missing qubit count header");
  return PauliSum(n_qubits, std::move(terms));
}

PauliSum load_hamiltonian_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open Hamiltonian file " + path.string());
  return read_hamiltonian(in);
}

void write_hamiltonian(std::ostream& out, const PauliSum& h) {
  out << h.n_qubits() << '\n';
  char buf[64];
  for (const auto& t : h.terms()) {
    std::snprintf(buf, sizeof buf, "%.17g", t.coefficient);
    out << buf << ' ' << t.string.to_string() << '\n';
  }
}

void save_hamiltonian_file(const std::filesystem::path& path, const PauliSum& h) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write Hamiltonian file " + path.string());
  write_hamiltonian(out, h);
}

}  // namespace htnqmc
