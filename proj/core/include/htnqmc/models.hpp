#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "htnqmc/pauli.hpp"

namespace htnqmc {

/// Heisenberg chain of k four-site clusters on 4k qubits.
///
/// Each cluster p contributes XX + YY + ZZ with coefficient 1 on its three
/// internal bonds; neighbouring clusters are joined by one XX + YY + ZZ bond
/// of strength j_inter between the last site of cluster p and the first site
/// of cluster p + 1. Site s (1-based) sits on qubit s - 1.
/// Throws std::invalid_argument for k < 1.
PauliSum build_heisenberg_chain(std::size_t k, double j_inter);

/// Published graphite hopping and interaction parameters, in Hartree.
struct GraphiteParameters {
  double t1 = -1.05e-1;
  double t2 = 1.03e-2;
  double u = 3.00e-1;
};

/// Eight-spin-orbital Hubbard model of the graphite unit cell, mapped
/// through Jordan-Wigner:
///   3 t1 hops q <-> q+2 for q in {1,2,5,6},
///   2 t2 hops q <-> q+4 for q in {1,2},
///   U n_q n_{q+1}        for q in {1,3,5,7},
/// with 1-based spin-orbital q on qubit q - 1. Qubits 0..3 form the first
/// layer and 4..7 the second.
PauliSum build_graphite_hubbard(double t1, double t2, double u);
inline PauliSum build_graphite_hubbard(const GraphiteParameters& p = {}) {
  return build_graphite_hubbard(p.t1, p.t2, p.u);
}

/// Named decompositions used by the built-in models.
///
///   heisenberg: "cluster" (consecutive 4-site clusters), "even_odd"
///               (qubit q in group q mod k)
///   graphite:   "horizontal" (one layer per group: {0,1,2,3},{4,5,6,7}),
///               "vertical" ({0,1,4,5},{2,3,6,7})
///
/// Throws std::invalid_argument for an unknown name.
Decomposition heisenberg_decomposition(const std::string& name, std::size_t k);
Decomposition graphite_decomposition(const std::string& name);

/// Parses "0,1,2,3|4,5,6,7" into explicit groups.
Decomposition parse_decomposition_groups(const std::string& text, std::string name = "custom");
std::string format_decomposition_groups(const Decomposition& dec);

}  // namespace htnqmc
