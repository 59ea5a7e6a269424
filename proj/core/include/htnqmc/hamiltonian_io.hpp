#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "htnqmc/pauli.hpp"

namespace htnqmc {

/// Hamiltonian text format:
///
///     # comment
///     <qubit count>
///     <coefficient> <letters for qubit 0..n-1>
///     ...
///
/// '#' starts a comment anywhere on a line; blank lines are ignored.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

PauliSum read_hamiltonian(std::istream& in);
PauliSum load_hamiltonian_file(const std::filesystem::path& path);

/// Coefficients are written with 17 significant digits so that reading the
/// output back reproduces the sum exactly.
void write_hamiltonian(std::ostream& out, const PauliSum& h);
void save_hamiltonian_file(const std::filesystem::path& path, const PauliSum& h);

}  // namespace htnqmc
