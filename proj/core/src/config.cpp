#include "htnqmc/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace htnqmc {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const char* begin = v.data();
  const char* end = v.data() + v.size();
  if (!v.empty() && v.front() == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc() || ptr != end) throw ConfigError(key, "expected a number, got '" + v + "'");
  return out;
}

std::uint64_t parse_uint(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError(key, "expected a non-negative integer, got '" + v + "'");
  }
  return out;
}

std::size_t parse_size(const std::string& key, const std::string& v) {
  return static_cast<std::size_t>(parse_uint(key, v));
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename Fn>
auto rethrow_as_config(const std::string& key, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(key, e.what());
  }
}

}  // namespace

std::string to_string(ModelKind k) {
  switch (k) {
    case ModelKind::Heisenberg: return "heisenberg";
    case ModelKind::Graphite: return "graphite";
    case ModelKind::File: return "file";
  }
  return "unknown";
}

std::string to_string(ExperimentMode m) {
  switch (m) {
    case ExperimentMode::Vqe: return "vqe";
    case ExperimentMode::HtnVqe: return "htn_vqe";
    case ExperimentMode::Qmc: return "qmc";
    case ExperimentMode::QcQmc: return "qc_qmc";
    case ExperimentMode::HtnQmc: return "htn_qmc";
  }
  return "unknown";
}

ModelKind parse_model_kind(const std::string& text) {
  if (text == "heisenberg") return ModelKind::Heisenberg;
  if (text == "graphite") return ModelKind::Graphite;
  if (text == "file") return ModelKind::File;
  throw std::invalid_argument("unknown model '" + text + "'");
}

ExperimentMode parse_experiment_mode(const std::string& text) {
  if (text == "vqe") return ExperimentMode::Vqe;
  if (text == "htn_vqe") return ExperimentMode::HtnVqe;
  if (text == "qmc") return ExperimentMode::Qmc;
  if (text == "qc_qmc") return ExperimentMode::QcQmc;
  if (text == "htn_qmc") return ExperimentMode::HtnQmc;
  throw std::invalid_argument("unknown mode '" + text + "'");
}

bool uses_htn(ExperimentMode m) {
  return m == ExperimentMode::HtnVqe || m == ExperimentMode::HtnQmc;
}

bool uses_qmc(ExperimentMode m) {
  return m == ExperimentMode::Qmc || m == ExperimentMode::QcQmc || m == ExperimentMode::HtnQmc;
}

bool uses_variational(ExperimentMode m) { return m != ExperimentMode::Qmc; }

void ExperimentConfig::validate() const {
  if (model.kind == ModelKind::Heisenberg && model.k < 1) throw ConfigError("model.k", "must be >= 1");
  if (model.kind == ModelKind::File && model.path.empty()) {
    throw ConfigError("model.path", "required when model = file");
  }
  if (uses_htn(mode) && decomposition.empty()) {
    throw ConfigError("decomposition", "required for mode " + to_string(mode));
  }
  if (seeds.empty()) throw ConfigError("seeds", "at least one seed is required");
  if (deviation_weight) {
    if (mode != ExperimentMode::Qmc) {
      throw ConfigError("reference.deviation_weight", "only valid with mode = qmc");
    }
    if (!(*deviation_weight >= 0.0 && *deviation_weight <= 1.0)) {
      throw ConfigError("reference.deviation_weight", "must lie in [0, 1]");
    }
  }
  if (!(penalty_lambda > 0.0)) throw ConfigError("penalty.lambda", "must be positive");
  rethrow_as_config("optimizer", [&] { optimizer.validate(); });
  rethrow_as_config("qmc", [&] { qmc.validate(); });
  if (output.empty()) throw ConfigError("output", "must not be empty");
}

void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  const std::string& v = value;
  auto& o = cfg.optimizer;
  auto& q = cfg.qmc;
  if (key == "model") {
    cfg.model.kind = rethrow_as_config(key, [&] { return parse_model_kind(v); });
  } else if (key == "model.k") {
    cfg.model.k = parse_size(key, v);
  } else if (key == "model.j_inter") {
    cfg.model.j_inter = parse_double(key, v);
  } else if (key == "model.t1") {
    cfg.model.graphite.t1 = parse_double(key, v);
  } else if (key == "model.t2") {
    cfg.model.graphite.t2 = parse_double(key, v);
  } else if (key == "model.u") {
    cfg.model.graphite.u = parse_double(key, v);
  } else if (key == "model.path") {
    cfg.model.path = v;
  } else if (key == "model.electrons") {
    if (v == "none") {
      cfg.model.electrons.reset();
    } else {
      cfg.model.electrons = parse_size(key, v);
    }
  } else if (key == "mode") {
    cfg.mode = rethrow_as_config(key, [&] { return parse_experiment_mode(v); });
  } else if (key == "decomposition") {
    cfg.decomposition = v;
  } else if (key == "depth") {
    cfg.depth = parse_size(key, v);
  } else if (key == "init_state") {
    if (v != "zero" && v != "reference") throw ConfigError(key, "expected zero or reference");
    cfg.reference_init = v == "reference";
  } else if (key == "shots") {
    cfg.shots = parse_size(key, v);
  } else if (key == "optimizer.method") {
    o.method = rethrow_as_config(key, [&] { return parse_optimizer_method(v); });
  } else if (key == "optimizer.mode") {
    o.mode = rethrow_as_config(key, [&] { return parse_optimization_mode(v); });
  } else if (key == "optimizer.max_iterations") {
    o.max_iterations = parse_size(key, v);
  } else if (key == "optimizer.max_evaluations") {
    o.max_evaluations = parse_size(key, v);
  } else if (key == "optimizer.tolerance") {
    o.tolerance = parse_double(key, v);
  } else if (key == "optimizer.init_low") {
    o.init_low = parse_double(key, v);
  } else if (key == "optimizer.init_high") {
    o.init_high = parse_double(key, v);
  } else if (key == "optimizer.fd_step") {
    o.fd_step = parse_double(key, v);
  } else if (key == "optimizer.alternating_sweeps") {
    o.alternating_sweeps = parse_size(key, v);
  } else if (key == "penalty.lambda") {
    cfg.penalty_lambda = parse_double(key, v);
  } else if (key == "qmc.dtau") {
    q.dtau = parse_double(key, v);
  } else if (key == "qmc.max_iterations") {
    q.max_iterations = parse_size(key, v);
  } else if (key == "qmc.shift_threshold") {
    q.shift_threshold = parse_uint(key, v);
  } else if (key == "qmc.shift_interval") {
    q.shift_interval = parse_size(key, v);
  } else if (key == "qmc.damping") {
    q.damping = parse_double(key, v);
  } else if (key == "qmc.window_start") {
    q.window_start = parse_size(key, v);
  } else if (key == "qmc.window_end") {
    q.window_end = parse_size(key, v);
  } else if (key == "qmc.max_invalid_streak") {
    q.max_invalid_streak = parse_size(key, v);
  } else if (key == "qmc.spawn_mode") {
    if (v == "all") {
      q.spawn_mode = SpawnMode::AllConnections;
    } else if (v == "uniform") {
      q.spawn_mode = SpawnMode::UniformConnection;
    } else {
      throw ConfigError(key, "expected all or uniform");
    }
  } else if (key == "reference.deviation_weight") {
    if (v == "none") {
      cfg.deviation_weight.reset();
    } else {
      cfg.deviation_weight = parse_double(key, v);
    }
  } else if (key == "seeds") {
    cfg.seeds.clear();
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) cfg.seeds.push_back(parse_uint(key, trim(item)));
  } else if (key == "workers") {
    cfg.workers = parse_size(key, v);
  } else if (key == "output") {
    cfg.output = v;
  } else {
    throw ConfigError(key, "unknown key");
  }
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(number), "expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    try {
      set_config_value(cfg, key, trim(line.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(e.key(), std::string("line ") + std::to_string(number) + ": " +
                                     (e.what() + e.key().size() + 2));
    }
  }
  return cfg;
}

ExperimentConfig parse_config_text(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

ExperimentConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path.string());
  return parse_config(in);
}

std::string serialize_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  const auto& o = cfg.optimizer;
  const auto& q = cfg.qmc;
  out << "model = " << to_string(cfg.model.kind) << '\n'
      << "model.k = " << cfg.model.k << '\n'
      << "model.j_inter = " << format_double(cfg.model.j_inter) << '\n'
      << "model.t1 = " << format_double(cfg.model.graphite.t1) << '\n'
      << "model.t2 = " << format_double(cfg.model.graphite.t2) << '\n'
      << "model.u = " << format_double(cfg.model.graphite.u) << '\n';
  if (!cfg.model.path.empty()) out << "model.path = " << cfg.model.path << '\n';
  out << "model.electrons = "
      << (cfg.model.electrons ? std::to_string(*cfg.model.electrons) : "none") << '\n'
      << "mode = " << to_string(cfg.mode) << '\n'
      << "decomposition = " << cfg.decomposition << '\n'
      << "depth = " << cfg.depth << '\n'
      << "init_state = " << (cfg.reference_init ? "reference" : "zero") << '\n'
      << "shots = " << cfg.shots << '\n'
      << "optimizer.method = " << to_string(o.method) << '\n'
      << "optimizer.mode = " << to_string(o.mode) << '\n'
      << "optimizer.max_iterations = " << o.max_iterations << '\n'
      << "optimizer.max_evaluations = " << o.max_evaluations << '\n'
      << "optimizer.tolerance = " << format_double(o.tolerance) << '\n'
      << "optimizer.init_low = " << format_double(o.init_low) << '\n'
      << "optimizer.init_high = " << format_double(o.init_high) << '\n'
      << "optimizer.fd_step = " << format_double(o.fd_step) << '\n'
      << "optimizer.alternating_sweeps = " << o.alternating_sweeps << '\n'
      << "penalty.lambda = " << format_double(cfg.penalty_lambda) << '\n'
      << "qmc.dtau = " << format_double(q.dtau) << '\n'
      << "qmc.max_iterations = " << q.max_iterations << '\n'
      << "qmc.shift_threshold = " << q.shift_threshold << '\n'
      << "qmc.shift_interval = " << q.shift_interval << '\n'
      << "qmc.damping = " << format_double(q.damping) << '\n'
      << "qmc.window_start = " << q.window_start << '\n'
      << "qmc.window_end = " << q.window_end << '\n'
      << "qmc.max_invalid_streak = " << q.max_invalid_streak << '\n'
      << "qmc.spawn_mode = "
      << (q.spawn_mode == SpawnMode::AllConnections ? "all" : "uniform") << '\n'
      << "reference.deviation_weight = "
      << (cfg.deviation_weight ? format_double(*cfg.deviation_weight) : "none") << '\n'
      << "seeds = ";
  for (std::size_t i = 0; i < cfg.seeds.size(); ++i) out << (i ? "," : "") << cfg.seeds[i];
  out << '\n' << "workers = " << cfg.workers << '\n' << "output = " << cfg.output << '\n';
  return out.str();
}

}  // namespace htnqmc
