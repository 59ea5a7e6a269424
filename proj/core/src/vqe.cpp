#include "htnqmc/vqe.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

#include "htnqmc/rng.hpp"

namespace htnqmc {

namespace {

constexpr std::size_t kStationaryIterations = 3;
constexpr double kGradientTolerance = 1e-7;
constexpr double kSimplexSizeTolerance = 1e-7;

// Objective state shared with the GSL callbacks. Tracks the best point seen.
struct Objective {
  const CostFunction* cost;
  std::vector<double> base;  // full parameter vector
  std::size_t offset = 0;    // block start inside `base`
  std::size_t dim = 0;
  double fd_step = 1e-6;
  std::size_t queries = 0;
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> best_x;

  double value(const gsl_vector* v) {
    for (std::size_t i = 0; i < dim; ++i) base[offset + i] = gsl_vector_get(v, i);
    const double e = (*cost)(base);
    if (e < best) {
      best = e;
      best_x = base;
    }
    return e;
  }

  void gradient(const gsl_vector* v, gsl_vector* g) {
    for (std::size_t i = 0; i < dim; ++i) base[offset + i] = gsl_vector_get(v, i);
    for (std::size_t i = 0; i < dim; ++i) {
      const double x = base[offset + i];
      base[offset + i] = x + fd_step;
      const double up = (*cost)(base);
      base[offset + i] = x - fd_step;
      const double down = (*cost)(base);
      base[offset + i] = x;
      gsl_vector_set(g, i, (up - down) / (2.0 * fd_step));
    }
  }
};

double gsl_f(const gsl_vector* v, void* p) {
  auto* o = static_cast<Objective*>(p);
  ++o->queries;
  return o->value(v);
}

void gsl_df(const gsl_vector* v, void* p, gsl_vector* g) {
  auto* o = static_cast<Objective*>(p);
  ++o->queries;
  o->gradient(v, g);
}

void gsl_fdf(const gsl_vector* v, void* p, double* f, gsl_vector* g) {
  auto* o = static_cast<Objective*>(p);
  ++o->queries;
  *f = o->value(v);
  o->gradient(v, g);
}

struct VectorDeleter {
  void operator()(gsl_vector* v) const { gsl_vector_free(v); }
};
using VectorPtr = std::unique_ptr<gsl_vector, VectorDeleter>;

VectorPtr make_vector(std::span<const double> x) {
  VectorPtr v(gsl_vector_alloc(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) gsl_vector_set(v.get(), i, x[i]);
  return v;
}

struct RunBudget {
  std::size_t iterations;
  std::size_t evaluations;
};

OptimizerStatus run_bfgs(Objective& obj, const OptimizerConfig& cfg, RunBudget budget,
                         std::vector<double>& trace, std::size_t& iterations) {
  gsl_multimin_function_fdf fn{&gsl_f, &gsl_df, &gsl_fdf, obj.dim, &obj};
  auto* s = gsl_multimin_fdfminimizer_alloc(gsl_multimin_fdfminimizer_vector_bfgs2, obj.dim);
  std::unique_ptr<gsl_multimin_fdfminimizer, void (*)(gsl_multimin_fdfminimizer*)> guard(
      s, &gsl_multimin_fdfminimizer_free);
  const auto x0 = make_vector(std::span<const double>(obj.base).subspan(obj.offset, obj.dim));
  gsl_multimin_fdfminimizer_set(s, &fn, x0.get(), 0.01, 0.1);

  double previous = s->f;
  std::size_t stationary = 0;
  for (std::size_t it = 0; it < budget.iterations; ++it) {
    if (obj.queries >= budget.evaluations) return OptimizerStatus::EvaluationLimit;
    const int rc = gsl_multimin_fdfminimizer_iterate(s);
    ++iterations;
    trace.push_back(obj.best);
    if (rc == GSL_ENOPROG || rc == GSL_ENOPROGJ) {
      return gsl_multimin_test_gradient(s->gradient, kGradientTolerance) == GSL_SUCCESS
                 ? OptimizerStatus::Converged
                 : OptimizerStatus::Stalled;
    }
    if (rc != GSL_SUCCESS) return OptimizerStatus::Stalled;
    if (gsl_multimin_test_gradient(s->gradient, kGradientTolerance) == GSL_SUCCESS) {
      return OptimizerStatus::Converged;
    }
    stationary = std::abs(previous - s->f) < cfg.tolerance ? stationary + 1 : 0;
    if (stationary >= kStationaryIterations) return OptimizerStatus::Converged;
    previous = s->f;
  }
  return OptimizerStatus::IterationLimit;
}

OptimizerStatus run_simplex(Objective& obj, const OptimizerConfig& cfg, RunBudget budget,
                            std::vector<double>& trace, std::size_t& iterations) {
  (void)cfg;
  gsl_multimin_function fn{&gsl_f, obj.dim, &obj};
  auto* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, obj.dim);
  std::unique_ptr<gsl_multimin_fminimizer, void (*)(gsl_multimin_fminimizer*)> guard(
      s, &gsl_multimin_fminimizer_free);
  const auto x0 = make_vector(std::span<const double>(obj.base).subspan(obj.offset, obj.dim));
  VectorPtr steps(gsl_vector_alloc(obj.dim));
  gsl_vector_set_all(steps.get(), 0.1);
  gsl_multimin_fminimizer_set(s, &fn, x0.get(), steps.get());

  for (std::size_t it = 0; it < budget.iterations; ++it) {
    if (obj.queries >= budget.evaluations) return OptimizerStatus::EvaluationLimit;
    const int rc = gsl_multimin_fminimizer_iterate(s);
    ++iterations;
    trace.push_back(obj.best);
    if (rc != GSL_SUCCESS) return OptimizerStatus::Stalled;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), kSimplexSizeTolerance) ==
        GSL_SUCCESS) {
      return OptimizerStatus::Converged;
    }
  }
  return OptimizerStatus::IterationLimit;
}

OptimizerStatus run_block(Objective& obj, const OptimizerConfig& cfg, RunBudget budget,
                          std::vector<double>& trace, std::size_t& iterations) {
  if (obj.dim == 0) return OptimizerStatus::Converged;
  return cfg.method == OptimizerMethod::Bfgs ? run_bfgs(obj, cfg, budget, trace, iterations)
                                             : run_simplex(obj, cfg, budget, trace, iterations);
}

}  // namespace

void OptimizerConfig::validate() const {
  if (!(init_low <= init_high)) throw std::invalid_argument("optimizer.init_low > init_high");
  if (max_iterations < 1) throw std::invalid_argument("optimizer.max_iterations must be >= 1");
  if (max_evaluations < 1) throw std::invalid_argument("optimizer.max_evaluations must be >= 1");
  if (!(tolerance > 0.0)) throw std::invalid_argument("optimizer.tolerance must be positive");
  if (!(fd_step > 0.0)) throw std::invalid_argument("optimizer.fd_step must be positive");
}

std::string to_string(OptimizerMethod m) {
  return m == OptimizerMethod::Bfgs ? "bfgs" : "simplex";
}

std::string to_string(OptimizationMode m) {
  return m == OptimizationMode::Joint ? "joint" : "alternating";
}

std::string to_string(OptimizerStatus s) {
  switch (s) {
    case OptimizerStatus::Converged: return "converged";
    case OptimizerStatus::Stalled: return "stalled";
    case OptimizerStatus::IterationLimit: return "iteration_limit";
    case OptimizerStatus::EvaluationLimit: return "evaluation_limit";
  }
  return "unknown";
}

OptimizerMethod parse_optimizer_method(const std::string& text) {
  if (text == "bfgs") return OptimizerMethod::Bfgs;
  if (text == "simplex" || text == "nelder_mead") return OptimizerMethod::Simplex;
  throw std::invalid_argument("unknown optimizer method '" + text + "'");
}

OptimizationMode parse_optimization_mode(const std::string& text) {
  if (text == "joint") return OptimizationMode::Joint;
  if (text == "alternating") return OptimizationMode::Alternating;
  throw std::invalid_argument("unknown optimization mode '" + text + "'");
}

ParameterVector init_params(std::size_t count, std::uint64_t seed, double low, double high) {
  CounterRng rng(seed, 0);
  ParameterVector p(count);
  for (auto& v : p) v = low + (high - low) * rng.uniform();
  return p;
}

VqeResult minimize(const CostFunction& cost, ParameterVector x0, const OptimizerConfig& cfg,
                   const std::vector<std::pair<std::size_t, std::size_t>>& blocks) {
  cfg.validate();
  gsl_set_error_handler_off();

  Objective obj;
  obj.cost = &cost;
  obj.base = std::move(x0);
  obj.fd_step = cfg.fd_step;
  obj.best = cost(obj.base);
  obj.best_x = obj.base;

  VqeResult result;
  std::size_t iterations = 0;
  OptimizerStatus status = OptimizerStatus::Converged;

  if (cfg.mode == OptimizationMode::Joint || blocks.empty()) {
    obj.dim = obj.base.size();
    status = run_block(obj, cfg, {cfg.max_iterations, cfg.max_evaluations}, result.trace,
                       iterations);
  } else {
    double sweep_start = obj.best;
    for (std::size_t sweep = 0; sweep < cfg.alternating_sweeps; ++sweep) {
      for (const auto& [offset, size] : blocks) {
        obj.base = obj.best_x;
        obj.offset = offset;
        obj.dim = size;
        if (iterations >= cfg.max_iterations) break;
        status = run_block(obj, cfg, {cfg.max_iterations - iterations, cfg.max_evaluations},
                           result.trace, iterations);
        if (status == OptimizerStatus::EvaluationLimit) break;
      }
      if (status == OptimizerStatus::EvaluationLimit || iterations >= cfg.max_iterations) {
        if (status != OptimizerStatus::EvaluationLimit) status = OptimizerStatus::IterationLimit;
        break;
      }
      if (std::abs(sweep_start - obj.best) < cfg.tolerance) {
        status = OptimizerStatus::Converged;
        break;
      }
      sweep_start = obj.best;
      status = OptimizerStatus::IterationLimit;
    }
  }

  result.params = obj.best_x;
  result.energy = obj.best;
  result.evaluations = obj.queries;
  result.iterations = iterations;
  result.status = status;
  return result;
}

VqeResult vqe_minimize(const PauliSum& h, const Circuit& circuit, const OptimizerConfig& cfg) {
  if (h.n_qubits() != circuit.n_qubits()) {
    throw std::invalid_argument("Hamiltonian and circuit act on different qubit counts");
  }
  const Statevector zero(circuit.n_qubits());
  const CostFunction cost = [&](std::span<const double> x) {
    return expectation(apply_circuit(circuit, x, zero), h);
  };
  return minimize(cost, init_params(circuit.n_params(), cfg.seed, cfg.init_low, cfg.init_high),
                  cfg);
}

VqeResult htn_vqe_minimize(const PauliSum& h, const HtnState& s0, const OptimizerConfig& cfg) {
  if (h.n_qubits() != s0.n_qubits()) {
    throw std::invalid_argument("Hamiltonian and HTN act on different qubit counts");
  }
  HtnState work = s0;
  const CostFunction cost = [&](std::span<const double> x) {
    work.set_flat_parameters(x);
    return htn_energy(work, h);
  };
  std::vector<std::pair<std::size_t, std::size_t>> blocks;
  const std::size_t lower = s0.lower(0).size();
  for (std::size_t m = 0; m < s0.subsystem_count(); ++m) blocks.emplace_back(m * lower, lower);
  blocks.emplace_back(s0.subsystem_count() * lower, s0.upper().size());
  return minimize(cost, init_params(s0.parameter_count(), cfg.seed, cfg.init_low, cfg.init_high),
                  cfg, blocks);
}

PauliSum number_penalty(const PauliSum& h, std::size_t n_target, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("penalty weight must be positive");
  const std::size_t n = h.n_qubits();
  std::vector<PauliTerm> terms;
  terms.push_back({0.5 * static_cast<double>(n) - static_cast<double>(n_target),
                   PauliString::identity(n)});
  for (std::size_t q = 0; q < n; ++q) {
    terms.push_back({-0.5, PauliString::single(n, q, PauliLetter::Z)});
  }
  const PauliSum shifted(n, std::move(terms));
  return h + multiply(shifted, shifted) * lambda;
}

}  // namespace htnqmc
