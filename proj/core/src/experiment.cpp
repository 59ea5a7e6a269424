#include "htnqmc/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "htnqmc/hamiltonian_io.hpp"

namespace htnqmc {

namespace {

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string join(const std::vector<std::string>& cells, char sep = ',') {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += sep;
    out += cells[i];
  }
  return out;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

std::optional<Decomposition> parse_counted(const std::string& name, std::size_t n_qubits) {
  for (const char* prefix : {"contiguous:", "strided:"}) {
    const std::string p(prefix);
    if (name.rfind(p, 0) != 0) continue;
    std::size_t k = 0;
    try {
      k = std::stoul(name.substr(p.size()));
    } catch (const std::exception&) {
      throw std::invalid_argument("bad subsystem count in '" + name + "'");
    }
    if (k == 0 || n_qubits % k != 0) {
      throw std::invalid_argument("'" + name + "' does not divide " + std::to_string(n_qubits) +
                                  " qubits");
    }
    return p == "contiguous:" ? Decomposition::contiguous(n_qubits, k, name)
                              : Decomposition::strided(n_qubits, k, name);
  }
  return std::nullopt;
}

double cut_entropy(const Statevector& psi, const std::optional<Decomposition>& dec) {
  if (!dec || dec->subsystem_count() < 2) return std::numeric_limits<double>::quiet_NaN();
  return bipartite_entropy(psi, dec->group_mask(0));
}

// Variational stage shared by every mode except qmc. Returns the dense
// reference state and, for HTN modes, the network.
struct Variational {
  Statevector dense;
  std::optional<HtnState> htn;
};

Variational run_variational(const ExperimentConfig& cfg, const ExperimentContext& ctx,
                            std::uint64_t seed, SeedResult& out) {
  OptimizerConfig opt = cfg.optimizer;
  opt.seed = seed;
  const BasisIndex mask = cfg.reference_init ? ctx.single_reference : 0;
  Variational v;
  VqeResult res;
  if (uses_htn(cfg.mode)) {
    const HtnState s0(*ctx.dec, cfg.depth, mask);
    res = htn_vqe_minimize(ctx.h_variational, s0, opt);
    HtnState s = HtnState::from_parameters(*ctx.dec, cfg.depth, res.params, mask);
    out.e_variational = htn_energy(s, ctx.h);
    v.dense = expand_dense(s);
    if (cfg.shots > 0) {
      ContractionOptions shots;
      shots.shots = cfg.shots;
      shots.real_only = true;
      shots.seed = seed;
      out.energy_shots = htn_energy(s, ctx.h, shots);
    }
    v.htn = std::move(s);
  } else {
    const std::size_t n = ctx.h.n_qubits();
    Circuit c = real_amplitude_ansatz(n, cfg.depth);
    for (std::size_t q = 0; q < n; ++q) {
      if ((mask >> q) & 1u) c.x(q);
    }
    res = vqe_minimize(ctx.h_variational, c, opt);
    v.dense = apply_circuit(c, res.params, Statevector(n));
    out.e_variational = expectation(v.dense, ctx.h);
  }
  out.params = res.params;
  out.optimizer_status = to_string(res.status);
  out.evaluations = res.evaluations;
  out.variational_error = std::abs(out.e_variational - ctx.exact.energy);
  out.fidelity = fidelity(v.dense, ctx.exact.state);
  out.entropy_reference = cut_entropy(v.dense, ctx.dec);
  out.distribution = wavefunction_distribution(v.dense);
  return v;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

void write_outputs_for(const ExperimentResult& r) {
  const std::filesystem::path dir(r.config.output);
  std::filesystem::create_directories(dir);
  {
    std::ostringstream s;
    write_summary_csv(s, r);
    write_file(dir / "summary.csv", s.str());
  }
  {
    std::ostringstream s;
    write_manifest(s, r);
    write_file(dir / "manifest.txt", s.str());
  }
  {
    std::ostringstream s;
    write_distribution_csv(s, r.exact_distribution);
    write_file(dir / "distribution_exact.csv", s.str());
  }
  for (const auto& sr : r.seeds) {
    const std::string tag = "seed" + std::to_string(sr.seed);
    if (sr.trace) {
      std::ostringstream s;
      write_trace_csv(s, *sr.trace);
      write_file(dir / ("trace_" + tag + ".csv"), s.str());
    }
    if (!sr.distribution.empty()) {
      std::ostringstream s;
      write_distribution_csv(s, sr.distribution);
      write_file(dir / ("distribution_" + tag + ".csv"), s.str());
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Context

PauliSum build_model(const ModelSpec& spec) {
  switch (spec.kind) {
    case ModelKind::Heisenberg: return build_heisenberg_chain(spec.k, spec.j_inter);
    case ModelKind::Graphite: return build_graphite_hubbard(spec.graphite);
    case ModelKind::File: return load_hamiltonian_file(spec.path);
  }
  throw std::logic_error("unknown model kind");
}

Decomposition resolve_decomposition(const ExperimentConfig& cfg, std::size_t n_qubits) {
  const std::string& name = cfg.decomposition;
  if (name.find_first_of("0123456789") == 0 || name.find('|') != std::string::npos) {
    return parse_decomposition_groups(name);
  }
  if (auto counted = parse_counted(name, n_qubits)) return *counted;
  switch (cfg.model.kind) {
    case ModelKind::Heisenberg: return heisenberg_decomposition(name, cfg.model.k);
    case ModelKind::Graphite: return graphite_decomposition(name);
    case ModelKind::File: break;
  }
  throw std::invalid_argument("file models need explicit groups or contiguous:K / strided:K");
}

std::vector<Decomposition> default_decompositions(const ModelSpec& spec) {
  switch (spec.kind) {
    case ModelKind::Heisenberg:
      return {heisenberg_decomposition("cluster", spec.k),
              heisenberg_decomposition("even_odd", spec.k)};
    case ModelKind::Graphite:
      return {graphite_decomposition("horizontal"), graphite_decomposition("vertical")};
    case ModelKind::File: break;
  }
  return {};
}

ExperimentContext build_context(const ExperimentConfig& cfg) {
  ExperimentContext ctx;
  ctx.h = build_model(cfg.model);
  ctx.h_variational = cfg.model.electrons
                          ? number_penalty(ctx.h, *cfg.model.electrons, cfg.penalty_lambda)
                          : ctx.h;
  try {
    ctx.dec = resolve_decomposition(cfg, ctx.h.n_qubits());
  } catch (const std::invalid_argument& e) {
    if (uses_htn(cfg.mode)) throw ConfigError("decomposition", e.what());
  }
  if (ctx.dec && ctx.dec->n_qubits() != ctx.h.n_qubits()) {
    if (uses_htn(cfg.mode)) {
      throw ConfigError("decomposition", "covers " + std::to_string(ctx.dec->n_qubits()) +
                                             " qubits, model has " +
                                             std::to_string(ctx.h.n_qubits()));
    }
    ctx.dec.reset();
  }
  ctx.exact = ground_state(ctx.h, cfg.model.electrons);
  ctx.single_reference = dominant_basis_state(ctx.exact.state);
  return ctx;
}

// ---------------------------------------------------------------------------
// Runs

bool ExperimentResult::ok() const {
  return std::all_of(seeds.begin(), seeds.end(), [](const SeedResult& s) { return s.error.empty(); });
}

SeedResult run_seed(const ExperimentConfig& cfg, const ExperimentContext& ctx, std::uint64_t seed) {
  SeedResult out;
  out.seed = seed;
  try {
    std::unique_ptr<ReferenceWavefunction> ref;
    if (uses_variational(cfg.mode)) {
      Variational v = run_variational(cfg, ctx, seed, out);
      if (cfg.mode == ExperimentMode::QcQmc) {
        ref = std::make_unique<DenseReference>(std::move(v.dense), "vqe");
      } else if (cfg.mode == ExperimentMode::HtnQmc) {
        ref = std::make_unique<HtnReference>(std::move(*v.htn));
      }
    } else if (cfg.deviation_weight) {
      auto dev = build_deviated_reference(ctx.exact.state, *cfg.deviation_weight, seed);
      out.fidelity = fidelity(dev.state(), ctx.exact.state);
      ref = std::make_unique<DenseReference>(std::move(dev));
    } else {
      ref = std::make_unique<SingleReference>(ctx.single_reference);
    }

    if (ref) {
      QmcConfig q = cfg.qmc;
      q.seed = seed;
      q.initial_state = ctx.single_reference;
      try {
        out.trace = run_fciqmc(ctx.h, *ref, q);
      } catch (const QmcAborted& e) {
        out.trace = e.partial();
        throw;
      }
      out.qmc = energy_stats(*out.trace, q.window_start, q.window_end, ctx.exact.energy);
    }
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, bool write_outputs) {
  cfg.validate();
  const ExperimentContext ctx = build_context(cfg);

  ExperimentResult r;
  r.config = cfg;
  r.e_exact = ctx.exact.energy;
  r.single_reference = ctx.single_reference;
  if (ctx.dec) {
    r.gmr = interaction_strength_gmr(ctx.h, *ctx.dec);
    r.entropy_exact = cut_entropy(ctx.exact.state, ctx.dec);
  }
  r.exact_distribution = wavefunction_distribution(ctx.exact.state);

  r.seeds.resize(cfg.seeds.size());
  const std::size_t hw = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  const std::size_t workers = std::min(cfg.workers ? cfg.workers : hw, cfg.seeds.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cfg.seeds.size(); i = next++) {
      r.seeds[i] = run_seed(cfg, ctx, cfg.seeds[i]);
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  if (write_outputs) write_outputs_for(r);
  return r;
}

// ---------------------------------------------------------------------------
// Reports

std::vector<std::string> summary_header() {
  return {"mode",          "seed",         "model",          "decomposition",
          "depth",         "j_inter",      "deviation_weight", "e_exact",
          "gmr",           "entropy_exact", "e_variational", "variational_error",
          "fidelity",      "entropy_reference", "energy_shots", "optimizer_status",
          "evaluations",   "e_qmc_mean",   "e_qmc_std",      "qmc_error",
          "qmc_samples",   "qmc_invalid",  "error"};
}

std::vector<std::vector<std::string>> summary_rows(const ExperimentResult& r) {
  const auto& c = r.config;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::vector<std::string>> rows;
  for (const auto& s : r.seeds) {
    const bool has_qmc = s.qmc.has_value();
    rows.push_back({to_string(c.mode),
                    std::to_string(s.seed),
                    to_string(c.model.kind),
                    csv_escape(c.decomposition),
                    std::to_string(c.depth),
                    fmt(c.model.kind == ModelKind::Heisenberg ? c.model.j_inter : nan),
                    fmt(c.deviation_weight.value_or(nan)),
                    fmt(r.e_exact),
                    fmt(r.gmr),
                    fmt(r.entropy_exact),
                    fmt(s.e_variational),
                    fmt(s.variational_error),
                    fmt(s.fidelity),
                    fmt(s.entropy_reference),
                    fmt(s.energy_shots),
                    s.optimizer_status,
                    std::to_string(s.evaluations),
                    fmt(has_qmc ? s.qmc->mean : nan),
                    fmt(has_qmc ? s.qmc->std : nan),
                    fmt(has_qmc ? s.qmc->abs_error : nan),
                    has_qmc ? std::to_string(s.qmc->samples) : "0",
                    has_qmc ? std::to_string(s.qmc->invalid) : "0",
                    csv_escape(s.error)});
  }
  return rows;
}

void write_summary_csv(std::ostream& out, const ExperimentResult& r) {
  out << join(summary_header()) << '\n';
  for (const auto& row : summary_rows(r)) out << join(row) << '\n';
}

void write_manifest(std::ostream& out, const ExperimentResult& r) {
  out << "# htnqmc " << kVersion << " experiment manifest\n"
      << "version = " << kVersion << '\n'
      << serialize_config(r.config)
      << "result.e_exact = " << fmt(r.e_exact) << '\n'
      << "result.single_reference = " << r.single_reference << '\n'
      << "result.gmr = " << fmt(r.gmr) << '\n'
      << "result.entropy_exact = " << fmt(r.entropy_exact) << '\n';
  for (const auto& s : r.seeds) {
    const std::string p = "seed." + std::to_string(s.seed) + ".";
    std::vector<std::string> params;
    params.reserve(s.params.size());
    for (double v : s.params) params.push_back(fmt(v));
    out << p << "params = " << join(params) << '\n'
        << p << "optimizer_status = " << s.optimizer_status << '\n'
        << p << "error = " << s.error << '\n';
  }
}

SweepAxis parse_sweep_axis(const std::string& text) {
  if (text == "j_inter" || text == "jinter") return SweepAxis::JInter;
  if (text == "depth") return SweepAxis::Depth;
  if (text == "decomposition") return SweepAxis::Decomposition;
  if (text == "deviation_weight" || text == "F") return SweepAxis::DeviationWeight;
  throw std::invalid_argument("unknown sweep axis '" + text + "'");
}

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::JInter: return "j_inter";
    case SweepAxis::Depth: return "depth";
    case SweepAxis::Decomposition: return "decomposition";
    case SweepAxis::DeviationWeight: return "deviation_weight";
  }
  return "unknown";
}

std::string sweep_key(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::JInter: return "model.j_inter";
    case SweepAxis::Depth: return "depth";
    case SweepAxis::Decomposition: return "decomposition";
    case SweepAxis::DeviationWeight: return "reference.deviation_weight";
  }
  return "";
}

std::vector<SweepPoint> run_sweep(const ExperimentConfig& base, SweepAxis axis,
                                  const std::vector<std::string>& values, bool write_outputs) {
  if (values.empty()) throw ConfigError(to_string(axis), "sweep needs at least one value");
  std::vector<SweepPoint> points;
  for (const auto& value : values) {
    ExperimentConfig cfg = base;
    set_config_value(cfg, sweep_key(axis), value);
    std::string dir_value = value;
    std::replace(dir_value.begin(), dir_value.end(), '|', '_');
    std::replace(dir_value.begin(), dir_value.end(), ',', '-');
    cfg.output = (std::filesystem::path(base.output) / (to_string(axis) + "=" + dir_value)).string();
    points.push_back({value, run_experiment(cfg, write_outputs)});
  }
  if (!write_outputs) return points;

  std::filesystem::create_directories(base.output);
  std::ostringstream rows;
  rows << "axis,value," << join(summary_header()) << '\n';
  std::ostringstream agg;
  agg << "axis,value,seeds,variational_error_mean,variational_error_std,fidelity_mean,"
         "fidelity_std,qmc_error_mean,qmc_error_std,qmc_std_mean,qmc_std_std\n";
  for (const auto& pt : points) {
    for (const auto& row : summary_rows(pt.result)) {
      rows << to_string(axis) << ',' << csv_escape(pt.value) << ',' << join(row) << '\n';
    }
    std::map<std::string, std::vector<double>> cols;
    for (const auto& s : pt.result.seeds) {
      cols["verr"].push_back(s.variational_error);
      cols["fid"].push_back(s.fidelity);
      if (s.qmc) {
        cols["qerr"].push_back(s.qmc->abs_error);
        cols["qstd"].push_back(s.qmc->std);
      }
    }
    auto mean_std = [](const std::vector<double>& v) -> std::pair<double, double> {
      std::vector<double> x;
      for (double d : v) {
        if (!std::isnan(d)) x.push_back(d);
      }
      if (x.empty()) return {std::nan(""), std::nan("")};
      double m = 0.0;
      for (double d : x) m += d;
      m /= static_cast<double>(x.size());
      double sq = 0.0;
      for (double d : x) sq += (d - m) * (d - m);
      return {m, std::sqrt(sq / static_cast<double>(x.size()))};
    };
    agg << to_string(axis) << ',' << csv_escape(pt.value) << ',' << pt.result.seeds.size();
    for (const char* key : {"verr", "fid", "qerr", "qstd"}) {
      const auto [m, s] = mean_std(cols[key]);
      agg << ',' << fmt(m) << ',' << fmt(s);
    }
    agg << '\n';
  }
  write_file(std::filesystem::path(base.output) / "sweep.csv", rows.str());
  write_file(std::filesystem::path(base.output) / "sweep_aggregate.csv", agg.str());
  return points;
}

std::vector<std::pair<std::string, double>> gmr_table(const PauliSum& h,
                                                      const std::vector<Decomposition>& decs) {
  std::vector<std::pair<std::string, double>> out;
  out.reserve(decs.size());
  for (const auto& d : decs) out.emplace_back(d.name(), interaction_strength_gmr(h, d));
  return out;
}

}  // namespace htnqmc
