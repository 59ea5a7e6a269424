#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "htnqmc/htn.hpp"
#include "htnqmc/pauli.hpp"
#include "htnqmc/statevector.hpp"

namespace htnqmc {

enum class OptimizerMethod {
  /// Quasi-Newton (GSL vector_bfgs2) on central finite-difference gradients.
  Bfgs,
  /// Derivative-free Nelder-Mead (GSL nmsimplex2).
  Simplex,
};

enum class OptimizationMode {
  /// One parameter vector for all tensors.
  Joint,
  /// Block-coordinate sweeps: each lower tensor, then the upper tensor.
  Alternating,
};

struct OptimizerConfig {
  OptimizerMethod method = OptimizerMethod::Bfgs;
  OptimizationMode mode = OptimizationMode::Joint;
  std::size_t max_iterations = 10000;
  /// Objective queries issued by the optimizer (a value, a gradient or both
  /// count as one query).
  /// Checked between iterations, so a final line search may overrun it.
  std::size_t max_evaluations = 10000;
  /// Energy change below which an iteration counts as stationary (Hartree).
  double tolerance = 1e-8;
  std::uint64_t seed = 0;
  double init_low = 0.0;
  double init_high = 1.0;
  double fd_step = 1e-6;
  std::size_t alternating_sweeps = 50;

  /// Throws std::invalid_argument with the offending field name.
  void validate() const;
};

enum class OptimizerStatus { Converged, Stalled, IterationLimit, EvaluationLimit };

std::string to_string(OptimizerMethod m);
std::string to_string(OptimizationMode m);
std::string to_string(OptimizerStatus s);
OptimizerMethod parse_optimizer_method(const std::string& text);
OptimizationMode parse_optimization_mode(const std::string& text);

struct VqeResult {
  ParameterVector params;
  double energy = 0.0;
  /// Best-seen energy after each optimizer iteration.
  std::vector<double> trace;
  std::size_t evaluations = 0;
  std::size_t iterations = 0;
  OptimizerStatus status = OptimizerStatus::Converged;
};

/// `count` values uniform in [low, high) from stream (seed, 0) of CounterRng.
ParameterVector init_params(std::size_t count, std::uint64_t seed, double low, double high);

using CostFunction = std::function<double(std::span<const double>)>;

/// Minimizes `cost` from `x0`. `blocks` lists the parameter ranges that the
/// alternating mode optimizes in turn; joint mode ignores it. Never throws on
/// optimizer trouble: the best-seen point is returned with a status.
VqeResult minimize(const CostFunction& cost, ParameterVector x0, const OptimizerConfig& cfg,
                   const std::vector<std::pair<std::size_t, std::size_t>>& blocks = {});

/// <0|C(theta)^dag H C(theta)|0> minimized from init_params(cfg).
VqeResult vqe_minimize(const PauliSum& h, const Circuit& circuit, const OptimizerConfig& cfg);

/// Minimizes htn_energy over every lower and upper angle. `s0` fixes the
/// decomposition, depth and basis mask; starting angles come from
/// init_params(cfg). The result's params are in HtnState flat order.
VqeResult htn_vqe_minimize(const PauliSum& h, const HtnState& s0, const OptimizerConfig& cfg);

/// H + lambda (N - n_target)^2 with N = sum_q (I - Z_q)/2.
/// Throws std::invalid_argument for lambda <= 0.
PauliSum number_penalty(const PauliSum& h, std::size_t n_target, double lambda = 10.0);

}  // namespace htnqmc
