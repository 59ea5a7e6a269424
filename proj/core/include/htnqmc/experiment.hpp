#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "htnqmc/config.hpp"
#include "htnqmc/fciqmc.hpp"
#include "htnqmc/oracle.hpp"

namespace htnqmc {

inline constexpr const char* kVersion = "0.1.0";

/// Model Hamiltonian described by the config.
PauliSum build_model(const ModelSpec& spec);

/// Resolves cfg.decomposition for the configured model. Explicit groups
/// ("0,1|2,3") work for every model; file models also accept
/// "contiguous:K" and "strided:K".
Decomposition resolve_decomposition(const ExperimentConfig& cfg, std::size_t n_qubits);

/// The standard decompositions of each built-in model (empty for file models).
std::vector<Decomposition> default_decompositions(const ModelSpec& spec);

/// Everything shared by the seeds of one experiment.
struct ExperimentContext {
  PauliSum h;
  /// H plus the number penalty when model.electrons is set.
  PauliSum h_variational;
  std::optional<Decomposition> dec;
  SpectrumResult exact;
  BasisIndex single_reference = 0;
};

ExperimentContext build_context(const ExperimentConfig& cfg);

struct SeedResult {
  std::uint64_t seed = 0;
  double e_variational = std::numeric_limits<double>::quiet_NaN();
  double variational_error = std::numeric_limits<double>::quiet_NaN();
  double fidelity = std::numeric_limits<double>::quiet_NaN();
  double entropy_reference = std::numeric_limits<double>::quiet_NaN();
  /// HTN energy from the Hadamard-test emulation (shots > 0 only).
  double energy_shots = std::numeric_limits<double>::quiet_NaN();
  std::string optimizer_status;
  std::size_t evaluations = 0;
  ParameterVector params;
  std::vector<DistributionEntry> distribution;
  std::optional<RunTrace> trace;
  std::optional<EnergyStats> qmc;
  /// Non-empty when the seed failed; the rest holds whatever completed.
  std::string error;
};

struct ExperimentResult {
  ExperimentConfig config;
  double e_exact = 0.0;
  BasisIndex single_reference = 0;
  double gmr = std::numeric_limits<double>::quiet_NaN();
  double entropy_exact = std::numeric_limits<double>::quiet_NaN();
  std::vector<DistributionEntry> exact_distribution;
  std::vector<SeedResult> seeds;

  bool ok() const;
};

/// One seed of the pipeline. Errors are recorded in SeedResult::error.
SeedResult run_seed(const ExperimentConfig& cfg, const ExperimentContext& ctx, std::uint64_t seed);

/// Validates, runs every seed on a bounded worker pool and, when
/// `write_outputs`, writes summary.csv, manifest.txt and per-seed
/// trace/distribution CSVs under cfg.output. Throws ConfigError on an invalid
/// config.
ExperimentResult run_experiment(const ExperimentConfig& cfg, bool write_outputs = true);

std::vector<std::string> summary_header();
std::vector<std::vector<std::string>> summary_rows(const ExperimentResult& r);
void write_summary_csv(std::ostream& out, const ExperimentResult& r);
void write_manifest(std::ostream& out, const ExperimentResult& r);

enum class SweepAxis { JInter, Depth, Decomposition, DeviationWeight };

SweepAxis parse_sweep_axis(const std::string& text);
std::string to_string(SweepAxis axis);
/// The config key an axis overrides.
std::string sweep_key(SweepAxis axis);

struct SweepPoint {
  std::string value;
  ExperimentResult result;
};

/// One experiment per axis value (output in cfg.output/<key>=<value>), plus
/// sweep.csv (one row per point and seed) and sweep_aggregate.csv (mean and
/// standard deviation over seeds) when `write_outputs`.
std::vector<SweepPoint> run_sweep(const ExperimentConfig& base, SweepAxis axis,
                                  const std::vector<std::string>& values,
                                  bool write_outputs = true);

/// (name, G_mr) per decomposition.
std::vector<std::pair<std::string, double>> gmr_table(const PauliSum& h,
                                                      const std::vector<Decomposition>& decs);

}  // namespace htnqmc
