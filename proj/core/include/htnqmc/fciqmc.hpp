#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "htnqmc/htn.hpp"
#include "htnqmc/pauli.hpp"
#include "htnqmc/rng.hpp"
#include "htnqmc/statevector.hpp"

namespace htnqmc {

/// Signed integer walker counts per basis state. Zero entries are never
/// stored; total() is the cached sum of |w_h|.
class WalkerPopulation {
 public:
  using Map = std::map<BasisIndex, std::int64_t>;

  WalkerPopulation() = default;

  /// Adds `count` signed walkers on h, cancelling opposite signs.
  void add(BasisIndex h, std::int64_t count);
  std::int64_t at(BasisIndex h) const;
  std::uint64_t total() const { return total_; }
  std::size_t occupied() const { return walkers_.size(); }
  bool empty() const { return walkers_.empty(); }
  const Map& entries() const { return walkers_; }

  friend bool operator==(const WalkerPopulation&, const WalkerPopulation&) = default;

 private:
  Map walkers_;
  std::uint64_t total_ = 0;
};

/// Sums `spawned` into `main` per basis index.
WalkerPopulation annihilate(WalkerPopulation main, const WalkerPopulation& spawned);

enum class SpawnMode {
  /// Every connected h' is attempted for every parent walker.
  AllConnections,
  /// One uniformly chosen connection per walker, rate rescaled by the
  /// connection count.
  UniformConnection,
};

/// Spawned children of one iteration. For parent h with w_h walkers and
/// connection h' with p = |H_h'h| dtau, the child count is
/// |w_h| floor(p) + Binomial(|w_h|, p - floor(p)), i.e. per-walker
/// floor(p) certain children plus one more with probability p - floor(p).
/// Children carry sign(w_h) * sgn(-H_h'h).
WalkerPopulation spawn_step(const WalkerPopulation& pop, const FlipGroupedHamiltonian& h,
                            double dtau, CounterRng& rng,
                            SpawnMode mode = SpawnMode::AllConnections);

/// Parents after death (H_hh > S) or cloning (H_hh < S) with per-walker
/// probability q = |H_hh - S| dtau, floor(q) applied with certainty.
/// Removing more walkers than present flips the sign of the remainder.
WalkerPopulation death_clone_step(const WalkerPopulation& pop, const FlipGroupedHamiltonian& h,
                                  double shift, double dtau, CounterRng& rng);

/// S - zeta / (A dtau) * ln(N_now / N_prev). Throws std::domain_error when
/// either count is zero.
double update_shift(double shift, std::uint64_t n_now, std::uint64_t n_prev,
                    std::size_t interval, double dtau, double damping);

/// Overlap provider <xi|phi_h> for the mixed-energy estimator.
class ReferenceWavefunction {
 public:
  virtual ~ReferenceWavefunction() = default;
  virtual double overlap(BasisIndex h) const = 0;
  virtual std::string describe() const = 0;
};

class SingleReference final : public ReferenceWavefunction {
 public:
  explicit SingleReference(BasisIndex h) : h_(h) {}
  double overlap(BasisIndex h) const override { return h == h_ ? 1.0 : 0.0; }
  std::string describe() const override;
  BasisIndex state() const { return h_; }

 private:
  BasisIndex h_;
};

/// Dense reference; overlaps are the real parts of the amplitudes.
class DenseReference final : public ReferenceWavefunction {
 public:
  explicit DenseReference(Statevector xi, std::string label = "dense")
      : xi_(std::move(xi)), label_(std::move(label)) {}
  double overlap(BasisIndex h) const override;
  std::string describe() const override { return label_; }
  const Statevector& state() const { return xi_; }

 private:
  Statevector xi_;
  std::string label_;
};

/// Overlaps evaluated through the network contraction against basis
/// encodings, never through the dense expansion.
class HtnReference final : public ReferenceWavefunction {
 public:
  explicit HtnReference(HtnState s) : s_(std::move(s)) {}
  double overlap(BasisIndex h) const override { return htn_overlap_basis(s_, h); }
  std::string describe() const override;
  const HtnState& state() const { return s_; }

 private:
  HtnState s_;
};

/// xi(F) = F psi_g + (1 - F) chi, normalized, where chi is a seeded Gaussian
/// vector with psi_g projected out and normalized. Real amplitudes.
/// Throws std::invalid_argument unless 0 <= F <= 1.
DenseReference build_deviated_reference(const Statevector& psi_g, double f, std::uint64_t seed);

struct QmcConfig {
  double dtau = 1e-3;
  std::size_t max_iterations = 10000;
  /// Variable-shift mode switches on, permanently, once N_W exceeds this.
  std::uint64_t shift_threshold = 1000;
  /// A: iterations between shift updates.
  std::size_t shift_interval = 5;
  /// zeta.
  double damping = 0.1;
  /// Defaults to H_hh of the initial state.
  std::optional<double> initial_shift;
  std::size_t window_start = 5000;
  std::size_t window_end = 10000;
  std::uint64_t seed = 0;
  /// Site of the single initial walker.
  BasisIndex initial_state = 0;
  /// Denominators below this mark the iteration's E_mix invalid.
  double overlap_floor = 1e-12;
  /// Consecutive invalid iterations that abort the run.
  std::size_t max_invalid_streak = 1000;
  /// Population that aborts the run as divergent.
  std::uint64_t max_walkers = 100'000'000;
  SpawnMode spawn_mode = SpawnMode::AllConnections;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

struct TraceRecord {
  std::size_t iteration = 0;
  double tau = 0.0;
  std::uint64_t n_walkers = 0;
  double shift = 0.0;
  double e_mix = 0.0;  // NaN when invalid
  bool e_mix_valid = false;
};

struct RunTrace {
  std::vector<TraceRecord> records;
  /// Iteration at which variable-shift mode started, if it did.
  std::optional<std::size_t> shift_activation;
  std::size_t invalid_count = 0;
};

/// Thrown on extinction, divergence or a denominator-floor streak. Carries
/// the trace up to the failing iteration.
class QmcAborted : public std::runtime_error {
 public:
  QmcAborted(const std::string& what, RunTrace partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const RunTrace& partial() const { return partial_; }

 private:
  RunTrace partial_;
};

/// Overlaps and Hamiltonian columns memoized for the lifetime of one run.
class MixedEnergyEvaluator {
 public:
  MixedEnergyEvaluator(const FlipGroupedHamiltonian& h, const ReferenceWavefunction& ref)
      : h_(h), ref_(ref) {}

  /// (numerator, denominator) of
  ///   E_mix = sum_h' w_h' (H xi)_h' / sum_h w_h xi_h.
  std::pair<double, double> terms(const WalkerPopulation& pop);

  double overlap(BasisIndex h);
  const std::vector<Connection>& column(BasisIndex h);

 private:
  const FlipGroupedHamiltonian& h_;
  const ReferenceWavefunction& ref_;
  std::map<BasisIndex, double> overlaps_;
  std::map<BasisIndex, double> h_xi_;
  std::map<BasisIndex, std::vector<Connection>> columns_;
};

/// E_mix, or std::nullopt when |denominator| < floor.
std::optional<double> mixed_energy(const ReferenceWavefunction& ref, const WalkerPopulation& pop,
                                   const PauliSum& h, double floor = 1e-12);

/// Spawn, death/clone, annihilate, then (in shift mode, every A iterations)
/// update the shift. One record per iteration 1..max_iterations.
/// Throws QmcAborted (see above) and std::invalid_argument on bad config.
RunTrace run_fciqmc(const PauliSum& h, const ReferenceWavefunction& ref, const QmcConfig& cfg);

/// Header `iteration,tau,n_walkers,shift,e_mix,e_mix_valid`.
void write_trace_csv(std::ostream& out, const RunTrace& trace);

}  // namespace htnqmc
