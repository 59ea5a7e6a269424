// htnqmc: run HTN+VQE / FCIQMC experiments from a key = value config.
//
//   htnqmc run    --config exp.cfg [--seed 3] [--mode htn_qmc] [--out dir]
//   htnqmc sweep  --config exp.cfg --axis depth --values 1,2,3,4
//   htnqmc oracle --config exp.cfg
//   htnqmc gmr    --config exp.cfg
#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "htnqmc/experiment.hpp"

namespace {

using namespace htnqmc;

struct Overrides {
  std::string config;
  std::string seeds;
  std::string out;
  std::string mode;
  std::string depth;
  std::string jinter;
  std::string shots;
  std::vector<std::string> sets;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config,-c", config, "key = value experiment file");
    cmd->add_option("--seed", seeds, "seed or comma-separated seed list");
    cmd->add_option("--out,-o", out, "output directory");
    cmd->add_option("--mode", mode, "vqe | htn_vqe | qmc | qc_qmc | htn_qmc");
    cmd->add_option("--depth", depth, "ansatz depth");
    cmd->add_option("--jinter", jinter, "inter-cluster coupling (Heisenberg)");
    cmd->add_option("--shots", shots, "Hadamard-test shots for the reported HTN energy");
    cmd->add_option("--set", sets, "extra key=value override (repeatable)");
  }

  ExperimentConfig resolve() const {
    ExperimentConfig cfg = config.empty() ? ExperimentConfig{} : load_config_file(config);
    const std::pair<const char*, const std::string*> flags[] = {
        {"seeds", &seeds}, {"output", &out},          {"mode", &mode},
        {"depth", &depth}, {"model.j_inter", &jinter}, {"shots", &shots}};
    for (const auto& [key, value] : flags) {
      if (!value->empty()) set_config_value(cfg, key, *value);
    }
    for (const auto& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError(kv, "--set expects key=value");
      set_config_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    return cfg;
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

int report(const ExperimentResult& r) {
  std::cout << "E_exact = " << fmt(r.e_exact) << "  single reference = " << r.single_reference
            << '\n';
  for (const auto& s : r.seeds) {
    std::cout << "seed " << s.seed;
    if (!std::isnan(s.e_variational)) {
      std::cout << "  E_var = " << fmt(s.e_variational) << "  fidelity = " << fmt(s.fidelity);
    }
    if (s.qmc) {
      std::cout << "  E_qmc = " << fmt(s.qmc->mean) << " +- " << fmt(s.qmc->std)
                << "  |err| = " << fmt(s.qmc->abs_error);
    }
    if (!s.error.empty()) std::cout << "  ERROR: " << s.error;
    std::cout << '\n';
  }
  std::cout << "outputs in " << r.config.output << '\n';
  return r.ok() ? 0 : 2;
}

std::vector<std::string> split_values(const std::string& text) {
  const char sep = text.find(';') != std::string::npos ? ';' : ',';
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid tree tensor network reference states for FCIQMC"};
  app.require_subcommand(1);

  Overrides run_opts, sweep_opts, oracle_opts, gmr_opts;
  auto* run = app.add_subcommand("run", "run one experiment for every configured seed");
  run_opts.attach(run);

  auto* sweep = app.add_subcommand("sweep", "repeat an experiment along one axis");
  sweep_opts.attach(sweep);
  std::string axis, values;
  sweep->add_option("--axis", axis, "j_inter | depth | decomposition | deviation_weight")
      ->required();
  sweep->add_option("--values", values, "axis values, ',' or ';' separated")->required();

  auto* oracle = app.add_subcommand("oracle", "exact-diagonalization diagnostics only");
  oracle_opts.attach(oracle);

  auto* gmr = app.add_subcommand("gmr", "print G_mr for the model's decompositions");
  gmr_opts.attach(gmr);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return report(run_experiment(run_opts.resolve()));

    if (*sweep) {
      const auto points =
          run_sweep(sweep_opts.resolve(), parse_sweep_axis(axis), split_values(values));
      int rc = 0;
      for (const auto& p : points) {
        std::cout << "== " << axis << " = " << p.value << '\n';
        rc = std::max(rc, report(p.result));
      }
      return rc;
    }

    if (*oracle) {
      const ExperimentConfig cfg = oracle_opts.resolve();
      const ExperimentContext ctx = build_context(cfg);
      std::cout << "qubits = " << ctx.h.n_qubits() << "\nterms = " << ctx.h.size()
                << "\nE_exact = " << fmt(ctx.exact.energy)
                << "\nsingle_reference = " << ctx.single_reference << '\n';
      if (ctx.dec) {
        std::cout << "decomposition = " << format_decomposition_groups(*ctx.dec)
                  << "\ngmr = " << fmt(interaction_strength_gmr(ctx.h, *ctx.dec))
                  << "\nentropy = " << fmt(bipartite_entropy(ctx.exact.state, ctx.dec->group_mask(0)))
                  << '\n';
      }
      if (!oracle_opts.out.empty()) {
        std::filesystem::create_directories(cfg.output);
        std::ofstream f(std::filesystem::path(cfg.output) / "distribution_exact.csv");
        write_distribution_csv(f, wavefunction_distribution(ctx.exact.state));
      }
      return 0;
    }

    if (*gmr) {
      const ExperimentConfig cfg = gmr_opts.resolve();
      const PauliSum h = build_model(cfg.model);
      std::vector<Decomposition> decs = default_decompositions(cfg.model);
      if (decs.empty() || !gmr_opts.config.empty()) {
        try {
          const Decomposition d = resolve_decomposition(cfg, h.n_qubits());
          if (std::find(decs.begin(), decs.end(), d) == decs.end()) decs.push_back(d);
        } catch (const std::invalid_argument&) {
          if (decs.empty()) throw;
        }
      }
      std::cout << "decomposition,groups,gmr\n";
      for (std::size_t i = 0; i < decs.size(); ++i) {
        std::cout << decs[i].name() << ",\"" << format_decomposition_groups(decs[i]) << "\","
                  << fmt(interaction_strength_gmr(h, decs[i])) << '\n';
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "htnqmc: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
