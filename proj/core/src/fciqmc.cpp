#include "htnqmc/fciqmc.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <sstream>

namespace htnqmc {

namespace {

std::int64_t sign_of(std::int64_t w) { return w > 0 ? 1 : -1; }

// |w| floor(p) + Binomial(|w|, p - floor(p)).
std::int64_t stochastic_count(std::uint64_t attempts, double p, CounterRng& rng) {
  const double whole = std::floor(p);
  const double frac = p - whole;
  auto count = static_cast<std::int64_t>(attempts) * static_cast<std::int64_t>(whole);
  if (frac > 0.0 && attempts > 0) {
    std::binomial_distribution<std::int64_t> extra(static_cast<std::int64_t>(attempts), frac);
    count += extra(rng);
  }
  return count;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

// ---------------------------------------------------------------------------
// Population

void WalkerPopulation::add(BasisIndex h, std::int64_t count) {
  if (count == 0) return;
  auto [it, inserted] = walkers_.try_emplace(h, 0);
  const std::int64_t before = it->second;
  const std::int64_t after = before + count;
  total_ = total_ - static_cast<std::uint64_t>(std::llabs(before)) +
           static_cast<std::uint64_t>(std::llabs(after));
  if (after == 0) {
    walkers_.erase(it);
  } else {
    it->second = after;
  }
}

std::int64_t WalkerPopulation::at(BasisIndex h) const {
  const auto it = walkers_.find(h);
  return it == walkers_.end() ? 0 : it->second;
}

WalkerPopulation annihilate(WalkerPopulation main, const WalkerPopulation& spawned) {
  for (const auto& [h, w] : spawned.entries()) main.add(h, w);
  return main;
}

// ---------------------------------------------------------------------------
// Elementary steps

WalkerPopulation spawn_step(const WalkerPopulation& pop, const FlipGroupedHamiltonian& h,
                            double dtau, CounterRng& rng, SpawnMode mode) {
  WalkerPopulation children;
  for (const auto& [parent, w] : pop.entries()) {
    const auto conns = h.column(parent);
    if (conns.empty()) continue;
    const auto walkers = static_cast<std::uint64_t>(std::llabs(w));
    if (mode == SpawnMode::AllConnections) {
      for (const auto& c : conns) {
        const std::int64_t n = stochastic_count(walkers, std::abs(c.element) * dtau, rng);
        if (n != 0) children.add(c.state, sign_of(w) * (c.element > 0 ? -n : n));
      }
    } else {
      const double scale = static_cast<double>(conns.size()) * dtau;
      std::uniform_int_distribution<std::size_t> pick(0, conns.size() - 1);
      for (std::uint64_t a = 0; a < walkers; ++a) {
        const auto& c = conns[pick(rng)];
        const std::int64_t n = stochastic_count(1, std::abs(c.element) * scale, rng);
        if (n != 0) children.add(c.state, sign_of(w) * (c.element > 0 ? -n : n));
      }
    }
  }
  return children;
}

WalkerPopulation death_clone_step(const WalkerPopulation& pop, const FlipGroupedHamiltonian& h,
                                  double shift, double dtau, CounterRng& rng) {
  WalkerPopulation out;
  for (const auto& [state, w] : pop.entries()) {
    const double rate = h.diagonal(state) - shift;
    const auto walkers = static_cast<std::uint64_t>(std::llabs(w));
    const std::int64_t n = stochastic_count(walkers, std::abs(rate) * dtau, rng);
    out.add(state, rate > 0 ? w - sign_of(w) * n : w + sign_of(w) * n);
  }
  return out;
}

double update_shift(double shift, std::uint64_t n_now, std::uint64_t n_prev,
                    std::size_t interval, double dtau, double damping) {
  if (n_now == 0 || n_prev == 0) {
    throw std::domain_error("shift update with zero walkers (population extinct)");
  }
  return shift - damping / (static_cast<double>(interval) * dtau) *
                     std::log(static_cast<double>(n_now) / static_cast<double>(n_prev));
}

// ---------------------------------------------------------------------------
// References

std::string SingleReference::describe() const { return "single(" + std::to_string(h_) + ")"; }

double DenseReference::overlap(BasisIndex h) const {
  return h < xi_.dimension() ? xi_[h].real() : 0.0;
}

std::string HtnReference::describe() const {
  return "htn(" + s_.decomposition().name() + ",d=" + std::to_string(s_.depth()) + ")";
}

DenseReference build_deviated_reference(const Statevector& psi_g, double f, std::uint64_t seed) {
  if (!(f >= 0.0 && f <= 1.0)) throw std::invalid_argument("deviation weight F must lie in [0, 1]");
  const std::size_t dim = psi_g.dimension();
  CounterRng rng(seed, 0xD5A1ull);
  std::normal_distribution<double> gauss;
  std::vector<Amplitude> chi(dim);
  for (auto& a : chi) a = gauss(rng);

  Statevector g = psi_g;
  g.normalize();
  Amplitude proj = 0.0;
  for (std::size_t i = 0; i < dim; ++i) proj += std::conj(g[i]) * chi[i];
  for (std::size_t i = 0; i < dim; ++i) chi[i] -= proj * g[i];
  Statevector chi_state(psi_g.n_qubits(), std::move(chi));
  chi_state.normalize();

  std::vector<Amplitude> xi(dim);
  for (std::size_t i = 0; i < dim; ++i) xi[i] = f * g[i] + (1.0 - f) * chi_state[i];
  Statevector out(psi_g.n_qubits(), std::move(xi));
  out.normalize();
  return DenseReference(std::move(out), "deviated(F=" + format_double(f) + ")");
}

// ---------------------------------------------------------------------------
// Mixed energy

double MixedEnergyEvaluator::overlap(BasisIndex h) {
  const auto it = overlaps_.find(h);
  if (it != overlaps_.end()) return it->second;
  const double v = ref_.overlap(h);
  overlaps_.emplace(h, v);
  return v;
}

const std::vector<Connection>& MixedEnergyEvaluator::column(BasisIndex h) {
  auto it = columns_.find(h);
  if (it == columns_.end()) it = columns_.emplace(h, h_.column(h)).first;
  return it->second;
}

std::pair<double, double> MixedEnergyEvaluator::terms(const WalkerPopulation& pop) {
  double num = 0.0;
  double den = 0.0;
  for (const auto& [state, w] : pop.entries()) {
    auto it = h_xi_.find(state);
    if (it == h_xi_.end()) {
      // (H xi)_h' = xi_h' H_h'h' + sum_h xi_h H_hh'
      double v = overlap(state) * h_.diagonal(state);
      for (const auto& c : column(state)) v += overlap(c.state) * c.element;
      it = h_xi_.emplace(state, v).first;
    }
    const auto wd = static_cast<double>(w);
    num += wd * it->second;
    den += wd * overlap(state);
  }
  return {num, den};
}

std::optional<double> mixed_energy(const ReferenceWavefunction& ref, const WalkerPopulation& pop,
                                   const PauliSum& h, double floor) {
  const FlipGroupedHamiltonian fh(h);
  MixedEnergyEvaluator eval(fh, ref);
  const auto [num, den] = eval.terms(pop);
  if (std::abs(den) < floor) return std::nullopt;
  return num / den;
}

// ---------------------------------------------------------------------------
// Driver

void QmcConfig::validate() const {
  if (!(dtau > 0.0)) throw std::invalid_argument("qmc.dtau must be positive");
  if (max_iterations < 1) throw std::invalid_argument("qmc.max_iterations must be >= 1");
  if (shift_interval < 1) throw std::invalid_argument("qmc.shift_interval must be >= 1");
  if (!(damping >= 0.0)) throw std::invalid_argument("qmc.damping must be non-negative");
  if (!(window_start < window_end && window_end <= max_iterations)) {
    throw std::invalid_argument("qmc.window must satisfy start < end <= max_iterations");
  }
  if (!(overlap_floor > 0.0)) throw std::invalid_argument("qmc.overlap_floor must be positive");
}

RunTrace run_fciqmc(const PauliSum& h, const ReferenceWavefunction& ref, const QmcConfig& cfg) {
  cfg.validate();
  if (h.n_qubits() < 64 && (cfg.initial_state >> h.n_qubits()) != 0) {
    throw std::invalid_argument("qmc.initial_state outside the Hilbert space");
  }
  const FlipGroupedHamiltonian fh(h);
  MixedEnergyEvaluator eval(fh, ref);

  WalkerPopulation pop;
  pop.add(cfg.initial_state, 1);
  double shift = cfg.initial_shift.value_or(fh.diagonal(cfg.initial_state));
  std::uint64_t n_prev = 0;
  std::size_t invalid_streak = 0;

  RunTrace trace;
  trace.records.reserve(cfg.max_iterations);
  for (std::size_t it = 1; it <= cfg.max_iterations; ++it) {
    CounterRng rng(cfg.seed, it);
    const WalkerPopulation children = spawn_step(pop, fh, cfg.dtau, rng, cfg.spawn_mode);
    pop = annihilate(death_clone_step(pop, fh, shift, cfg.dtau, rng), children);

    const std::uint64_t n_now = pop.total();
    if (n_now == 0) {
      throw QmcAborted("walker population extinct at iteration " + std::to_string(it),
                       std::move(trace));
    }
    if (n_now > cfg.max_walkers) {
      throw QmcAborted("walker population exceeded " + std::to_string(cfg.max_walkers) +
                           " at iteration " + std::to_string(it),
                       std::move(trace));
    }

    if (!trace.shift_activation && n_now > cfg.shift_threshold) {
      trace.shift_activation = it;
      n_prev = n_now;
    } else if (trace.shift_activation && (it - *trace.shift_activation) % cfg.shift_interval == 0) {
      shift = update_shift(shift, n_now, n_prev, cfg.shift_interval, cfg.dtau, cfg.damping);
      n_prev = n_now;
    }

    TraceRecord rec;
    rec.iteration = it;
    rec.tau = static_cast<double>(it) * cfg.dtau;
    rec.n_walkers = n_now;
    rec.shift = shift;
    const auto [num, den] = eval.terms(pop);
    if (std::abs(den) >= cfg.overlap_floor) {
      rec.e_mix = num / den;
      rec.e_mix_valid = true;
      invalid_streak = 0;
    } else {
      rec.e_mix = std::numeric_limits<double>::quiet_NaN();
      ++trace.invalid_count;
      ++invalid_streak;
    }
    trace.records.push_back(rec);
    if (invalid_streak > cfg.max_invalid_streak) {
      throw QmcAborted("reference overlap below floor for " + std::to_string(invalid_streak) +
                           " consecutive iterations",
                       std::move(trace));
    }
  }
  return trace;
}

void write_trace_csv(std::ostream& out, const RunTrace& trace) {
  out << "iteration,tau,n_walkers,shift,e_mix,e_mix_valid\n";
  for (const auto& r : trace.records) {
    out << r.iteration << ',' << format_double(r.tau) << ',' << r.n_walkers << ','
        << format_double(r.shift) << ',' << (r.e_mix_valid ? format_double(r.e_mix) : "nan")
        << ',' << (r.e_mix_valid ? 1 : 0) << '\n';
  }
}

}  // namespace htnqmc
