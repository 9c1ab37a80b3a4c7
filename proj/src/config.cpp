#include "corebandit/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "corebandit/errors.hpp"

namespace corebandit {

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kMab:
      return "mab";
    case ExperimentKind::kLinear:
      return "linear";
    case ExperimentKind::kRanking:
      return "ranking";
  }
  return "unknown";
}

namespace {

const std::set<std::string>& kinds_for(ExperimentKind experiment) {
  static const std::set<std::string> mab{"core", "ucb1", "ucbv", "ber-ts", "gauss-ts", "ber-phe", "gauss-phe"};
  static const std::set<std::string> linear{"lincore", "linucb", "lints", "ber-linphe", "gauss-linphe"};
  static const std::set<std::string> ranking{"core", "klucb", "ber-ts", "ber-phe"};
  switch (experiment) {
    case ExperimentKind::kMab:
      return mab;
    case ExperimentKind::kLinear:
      return linear;
    case ExperimentKind::kRanking:
      return ranking;
  }
  return mab;
}

std::string fmt_num(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

template <typename T>
T read_scalar(const YAML::Node& node, const std::string& path) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(path, "invalid value '" + YAML::Dump(node) + "'");
  }
}

std::size_t read_count(const YAML::Node& node, const std::string& path) {
  const auto v = read_scalar<long long>(node, path);
  if (v < 0) throw ConfigError(path, "must be non-negative");
  return static_cast<std::size_t>(v);
}

void check_known_keys(const YAML::Node& node, const std::string& path, const std::set<std::string>& known) {
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!known.contains(key)) throw ConfigError(path.empty() ? key : path + "." + key, "unknown field");
  }
}

std::vector<double> read_list(const YAML::Node& node, const std::string& path) {
  if (!node.IsSequence()) throw ConfigError(path, "expected a list of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < node.size(); ++i) {
    out.push_back(read_scalar<double>(node[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

EnvSpec parse_env(const YAML::Node& node) {
  EnvSpec env;
  if (!node) return env;
  if (!node.IsMap()) throw ConfigError("env", "expected a mapping");
  check_known_keys(node, "env", {"family", "K", "d", "L", "list_length", "v", "sigma", "model_files"});
  if (node["family"]) {
    try {
      env.noise.family = parse_reward_family(read_scalar<std::string>(node["family"], "env.family"));
    } catch (const InvalidInstance& e) {
      throw ConfigError("env.family", e.what());
    }
  }
  if (node["v"]) env.noise.beta_concentration = read_scalar<double>(node["v"], "env.v");
  if (node["sigma"]) env.noise.gaussian_sd = read_scalar<double>(node["sigma"], "env.sigma");
  if (node["K"]) {
    env.num_arms = read_count(node["K"], "env.K");
    env.list_length = env.num_arms;
  }
  if (node["d"]) env.dim = read_count(node["d"], "env.d");
  if (node["L"]) env.num_items = read_count(node["L"], "env.L");
  if (node["list_length"]) env.list_length = read_count(node["list_length"], "env.list_length");
  if (node["model_files"]) {
    const auto files = node["model_files"];
    if (!files.IsSequence()) throw ConfigError("env.model_files", "expected a list of paths");
    for (std::size_t i = 0; i < files.size(); ++i) {
      env.model_files.emplace_back(
          read_scalar<std::string>(files[i], "env.model_files[" + std::to_string(i) + "]"));
    }
  }
  return env;
}

AgentSpec parse_agent(const YAML::Node& node, const std::string& path) {
  if (!node.IsMap()) throw ConfigError(path, "expected a mapping");
  check_known_keys(node, path,
                   {"kind", "name", "alpha", "z", "lambda", "ridge", "a", "sigma", "c", "prior_mean", "pseudo_sd"});
  AgentSpec spec;
  if (!node["kind"]) throw ConfigError(path + ".kind", "missing");
  spec.kind = read_scalar<std::string>(node["kind"], path + ".kind");
  if (node["name"]) spec.name = read_scalar<std::string>(node["name"], path + ".name");
  if (node["alpha"]) spec.alpha = read_scalar<double>(node["alpha"], path + ".alpha");
  if (node["z"]) spec.z = read_scalar<double>(node["z"], path + ".z");
  if (node["lambda"]) spec.lambda = read_scalar<double>(node["lambda"], path + ".lambda");
  if (node["ridge"]) {
    const auto mode = read_scalar<std::string>(node["ridge"], path + ".ridge");
    if (mode == "fixed") {
      spec.ridge_mode = RidgeMode::kFixed;
    } else if (mode == "min-eigen") {
      spec.ridge_mode = RidgeMode::kMinEigenQuarter;
    } else {
      throw ConfigError(path + ".ridge", "expected 'fixed' or 'min-eigen'");
    }
  }
  if (node["a"]) spec.a = read_scalar<double>(node["a"], path + ".a");
  if (node["sigma"]) spec.sigma = read_scalar<double>(node["sigma"], path + ".sigma");
  if (node["c"]) spec.width = read_scalar<double>(node["c"], path + ".c");
  if (node["prior_mean"]) spec.prior_mean = read_scalar<double>(node["prior_mean"], path + ".prior_mean");
  if (node["pseudo_sd"]) spec.pseudo_sd = read_scalar<double>(node["pseudo_sd"], path + ".pseudo_sd");
  return spec;
}

}  // namespace

std::string default_agent_name(const AgentSpec& spec, ExperimentKind experiment) {
  const auto& k = spec.kind;
  if (k == "core" || k == "lincore") {
    const std::string base = k == "lincore" ? "LinCORe" : "CORe";
    return base + "(alpha=" + fmt_num(spec.alpha) + ",z=" + fmt_num(spec.z) + ")";
  }
  if (k == "ucb1") return "UCB1";
  if (k == "ucbv") return "UCB-V";
  if (k == "ber-ts") return "Ber-TS";
  if (k == "gauss-ts") return spec.sigma ? "Gauss-TS(sigma=" + fmt_num(*spec.sigma) + ")" : "Gauss-TS";
  if (k == "ber-phe" || k == "gauss-phe") {
    return std::string(k == "ber-phe" ? "Ber-PHE" : "Gauss-PHE") + "(a=" + fmt_num(spec.a) + ")";
  }
  if (k == "linucb") return "LinUCB(c=" + fmt_num(spec.width) + ")";
  if (k == "lints") return "LinTS(sigma=" + fmt_num(spec.sigma.value_or(1.0)) + ")";
  if (k == "ber-linphe" || k == "gauss-linphe") {
    return std::string(k == "ber-linphe" ? "Ber-LinPHE" : "Gauss-LinPHE") + "(a=" + fmt_num(spec.a) + ")";
  }
  if (k == "klucb" && experiment == ExperimentKind::kRanking) return "CascadeKL-UCB";
  return k;
}

void RunConfig::validate() const {
  if (horizon < 1) throw ConfigError("n", "must be >= 1");
  if (instances < 1) throw ConfigError("instances", "must be >= 1");
  if (runs < 1) throw ConfigError("runs", "must be >= 1");
  if (stride < 1) throw ConfigError("stride", "must be >= 1");
  if (agents.empty()) throw ConfigError("agents", "at least one agent is required");

  switch (experiment) {
    case ExperimentKind::kMab:
      if (env.num_arms < 2) throw ConfigError("env.K", "must be >= 2");
      break;
    case ExperimentKind::kLinear:
      if (env.dim < 1) throw ConfigError("env.d", "must be >= 1");
      if (env.num_arms < env.dim) throw ConfigError("env.K", "must be >= env.d");
      break;
    case ExperimentKind::kRanking:
      if (env.model_files.empty()) {
        if (env.list_length < 1 || env.list_length > env.num_items) {
          throw ConfigError("env.list_length", "must satisfy 1 <= K <= L");
        }
      } else if (env.model_files.size() != instances) {
        throw ConfigError("env.model_files", "need exactly one model file per instance");
      }
      break;
  }
  if (experiment != ExperimentKind::kRanking) {
    if (env.noise.family == RewardFamily::kBeta && !(env.noise.beta_concentration > 0.0)) {
      throw ConfigError("env.v", "must be positive");
    }
    if (env.noise.family == RewardFamily::kGaussian && !(env.noise.gaussian_sd > 0.0)) {
      throw ConfigError("env.sigma", "must be positive");
    }
  }

  std::set<std::string> names;
  const auto& allowed = kinds_for(experiment);
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const auto& a = agents[i];
    const std::string path = "agents[" + std::to_string(i) + "]";
    if (!allowed.contains(a.kind)) {
      throw ConfigError(path + ".kind", "'" + a.kind + "' is not available for " + to_string(experiment) +
                                            " experiments");
    }
    if (a.kind == "core" || a.kind == "lincore") {
      if (!(a.z > 0.0 && a.z < 1.0)) throw ConfigError(path + ".z", "must lie in (0, 1)");
      if (!(a.alpha > 0.0)) throw ConfigError(path + ".alpha", "must be positive");
    }
    if (!(a.lambda > 0.0)) throw ConfigError(path + ".lambda", "must be positive");
    if (!(a.a > 0.0)) throw ConfigError(path + ".a", "must be positive");
    if (a.sigma && !(*a.sigma >= 0.0)) throw ConfigError(path + ".sigma", "must be non-negative");
    if (a.kind == "gauss-ts" && a.sigma && !(*a.sigma > 0.0)) throw ConfigError(path + ".sigma", "must be positive");
    if (a.width < 0.0) throw ConfigError(path + ".c", "must be non-negative");
    const auto label = a.name.empty() ? default_agent_name(a, experiment) : a.name;
    if (label.find(',') != std::string::npos && !a.name.empty()) {
      throw ConfigError(path + ".name", "must not contain commas");
    }
    if (!names.insert(label).second) throw ConfigError(path + ".name", "duplicate agent label '" + label + "'");
  }

  if (sweep) {
    if (sweep->alpha.empty()) throw ConfigError("sweep.alpha", "must be non-empty");
    if (sweep->z.empty()) throw ConfigError("sweep.z", "must be non-empty");
    const auto& base = agents.front().kind;
    if (base != "core" && base != "lincore") throw ConfigError("agents[0].kind", "sweeps need a CORe agent first");
    for (std::size_t i = 0; i < sweep->alpha.size(); ++i) {
      if (!(sweep->alpha[i] > 0.0)) throw ConfigError("sweep.alpha[" + std::to_string(i) + "]", "must be positive");
    }
    for (std::size_t i = 0; i < sweep->z.size(); ++i) {
      if (!(sweep->z[i] > 0.0 && sweep->z[i] < 1.0)) {
        throw ConfigError("sweep.z[" + std::to_string(i) + "]", "must lie in (0, 1)");
      }
    }
  }
}

RunConfig parse_config(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ConfigError("<root>", std::string("YAML parse error: ") + e.what());
  }
  if (!root.IsMap()) throw ConfigError("<root>", "expected a mapping");
  check_known_keys(root, "",
                   {"experiment", "env", "agents", "n", "instances", "runs", "seed", "out_dir", "stride", "workers",
                    "log_realized", "sweep"});

  RunConfig cfg;
  if (!root["experiment"]) throw ConfigError("experiment", "missing");
  const auto kind = read_scalar<std::string>(root["experiment"], "experiment");
  if (kind == "mab") {
    cfg.experiment = ExperimentKind::kMab;
  } else if (kind == "linear") {
    cfg.experiment = ExperimentKind::kLinear;
  } else if (kind == "ranking") {
    cfg.experiment = ExperimentKind::kRanking;
  } else {
    throw ConfigError("experiment", "expected mab, linear or ranking");
  }

  cfg.env = parse_env(root["env"]);
  if (cfg.experiment == ExperimentKind::kRanking && root["env"] && root["env"]["K"] && !root["env"]["list_length"]) {
    cfg.env.list_length = cfg.env.num_arms;
  }
  if (root["n"]) cfg.horizon = read_count(root["n"], "n");
  if (root["instances"]) cfg.instances = read_count(root["instances"], "instances");
  if (root["runs"]) cfg.runs = read_count(root["runs"], "runs");
  if (root["seed"]) cfg.seed = read_scalar<std::uint64_t>(root["seed"], "seed");
  if (root["out_dir"]) cfg.out_dir = read_scalar<std::string>(root["out_dir"], "out_dir");
  if (root["stride"]) cfg.stride = read_count(root["stride"], "stride");
  if (root["workers"]) cfg.workers = read_count(root["workers"], "workers");
  if (root["log_realized"]) cfg.log_realized = read_scalar<bool>(root["log_realized"], "log_realized");
  if (cfg.experiment == ExperimentKind::kRanking && !cfg.env.model_files.empty() && !root["instances"]) {
    cfg.instances = cfg.env.model_files.size();
  }

  if (root["agents"]) {
    const auto agents = root["agents"];
    if (!agents.IsSequence()) throw ConfigError("agents", "expected a list");
    for (std::size_t i = 0; i < agents.size(); ++i) {
      cfg.agents.push_back(parse_agent(agents[i], "agents[" + std::to_string(i) + "]"));
    }
  }
  if (root["sweep"]) {
    const auto sweep = root["sweep"];
    if (!sweep.IsMap()) throw ConfigError("sweep", "expected a mapping");
    check_known_keys(sweep, "sweep", {"alpha", "z"});
    SweepSpec spec;
    if (sweep["alpha"]) spec.alpha = read_list(sweep["alpha"], "sweep.alpha");
    if (sweep["z"]) spec.z = read_list(sweep["z"], "sweep.z");
    cfg.sweep = spec;
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  auto cfg = parse_config(buffer.str());
  // Relative model files resolve against the config's directory.
  for (auto& f : cfg.env.model_files) {
    if (f.is_relative()) f = path.parent_path() / f;
  }
  return cfg;
}

}  // namespace corebandit
