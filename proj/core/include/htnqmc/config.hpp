#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "htnqmc/fciqmc.hpp"
#include "htnqmc/models.hpp"
#include "htnqmc/vqe.hpp"

namespace htnqmc {

enum class ModelKind { Heisenberg, Graphite, File };

enum class ExperimentMode {
  Vqe,     // plain real-amplitude VQE
  HtnVqe,  // HTN ansatz VQE
  Qmc,     // FCIQMC with a single-basis-state (or deviated dense) reference
  QcQmc,   // FCIQMC with the VQE state as reference
  HtnQmc,  // FCIQMC with the HTN state as reference
};

std::string to_string(ModelKind k);
std::string to_string(ExperimentMode m);
ModelKind parse_model_kind(const std::string& text);
ExperimentMode parse_experiment_mode(const std::string& text);
bool uses_htn(ExperimentMode m);
bool uses_qmc(ExperimentMode m);
bool uses_variational(ExperimentMode m);

struct ModelSpec {
  ModelKind kind = ModelKind::Heisenberg;
  std::size_t k = 2;
  double j_inter = 1.0;
  GraphiteParameters graphite;
  std::string path;
  /// Electron count: restricts the exact oracle to that sector and adds the
  /// number penalty to variational runs.
  std::optional<std::size_t> electrons;
};

/// Error raised for an invalid config; the message starts with the key.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(const std::string& key, const std::string& what)
      : std::invalid_argument(key + ": " + what), key_(key) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

/// Flat typed key = value experiment description.
///
///   model                       heisenberg | graphite | file
///   model.k, model.j_inter      Heisenberg cluster count and bond strength
///   model.t1, model.t2, model.u graphite parameters (Hartree)
///   model.path                  Hamiltonian file for model = file
///   model.electrons             sector for the oracle and the penalty
///   mode                        vqe | htn_vqe | qmc | qc_qmc | htn_qmc
///   decomposition               named decomposition or groups "0,1|2,3"
///   depth                       ansatz depth (d_H or d_N)
///   init_state                  zero | reference (X mask onto the single
///                               reference state after the ansatz; pair
///                               with optimizer.init_high = 0.01)
///   shots                       Hadamard-test shots for the reported HTN
///                               energy (0 = exact)
///   optimizer.*                 method, mode, max_iterations,
///                               max_evaluations, tolerance, init_low,
///                               init_high, fd_step, alternating_sweeps
///   penalty.lambda              number-penalty weight
///   qmc.*                       dtau, max_iterations, shift_threshold,
///                               shift_interval, damping, window_start,
///                               window_end, max_invalid_streak, spawn_mode
///   reference.deviation_weight  F of the deviated reference (mode = qmc)
///   seeds                       comma-separated seed list
///   workers                     concurrent seeds (0 = hardware threads)
///   output                      output directory
struct ExperimentConfig {
  ModelSpec model;
  ExperimentMode mode = ExperimentMode::HtnQmc;
  std::string decomposition = "cluster";
  std::size_t depth = 4;
  bool reference_init = false;
  std::size_t shots = 0;
  OptimizerConfig optimizer;
  double penalty_lambda = 10.0;
  QmcConfig qmc;
  std::optional<double> deviation_weight;
  std::vector<std::uint64_t> seeds{1};
  std::size_t workers = 0;
  std::string output = "results";

  /// Throws ConfigError.
  void validate() const;
};

/// Sets one key from its text form. Throws ConfigError for an unknown key or
/// a malformed value.
void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// Parses key = value lines; '#' starts a comment. Later keys override
/// earlier ones. Throws ConfigError (message prefixed with the line number).
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config_file(const std::filesystem::path& path);

/// Canonical text: every key in a fixed order, doubles with 17 digits.
std::string serialize_config(const ExperimentConfig& cfg);

}  // namespace htnqmc
