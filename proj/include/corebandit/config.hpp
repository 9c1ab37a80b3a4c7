#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "corebandit/agents.hpp"
#include "corebandit/envs.hpp"

namespace corebandit {

enum class ExperimentKind { kMab, kLinear, kRanking };

std::string to_string(ExperimentKind kind);

struct EnvSpec {
  NoiseModel noise;              // mab, linear
  std::size_t num_arms = 10;     // K for mab / linear
  std::size_t dim = 10;          // d for linear
  std::size_t num_items = 10;    // L for ranking
  std::size_t list_length = 5;   // K for ranking
  // Ranking only: one cascade model file per instance. Empty means synthetic models.
  std::vector<std::filesystem::path> model_files;
};

/// One agent entry. `kind` is one of
///   mab:     core, ucb1, ucbv, ber-ts, gauss-ts, ber-phe, gauss-phe
///   linear:  lincore, linucb, lints, ber-linphe, gauss-linphe
///   ranking: core, klucb, ber-ts, ber-phe
struct AgentSpec {
  std::string kind;
  std::string name;  // label written to the CSVs; defaults from kind and parameters
  double alpha = 0.6;
  double z = 0.6;
  double lambda = 1.0;
  RidgeMode ridge_mode = RidgeMode::kFixed;
  double a = 0.5;                // PHE / LinPHE perturbation scale
  std::optional<double> sigma;   // Gauss-TS / LinTS; Gauss-TS defaults to the env sd, LinTS to 1
  double width = 1.0;            // LinUCB c
  double prior_mean = 0.5;       // Gauss-TS mu0
  double pseudo_sd = 0.5;        // Gauss-PHE pseudo reward sd
};

struct SweepSpec {
  std::vector<double> alpha;
  std::vector<double> z;
};

struct RunConfig {
  ExperimentKind experiment = ExperimentKind::kMab;
  EnvSpec env;
  std::vector<AgentSpec> agents;
  std::size_t horizon = 10000;
  std::size_t instances = 1;
  std::size_t runs = 1;
  std::uint64_t seed = 0;
  std::filesystem::path out_dir = "out";
  std::size_t stride = 10;
  std::size_t workers = 0;  // 0: one per hardware thread
  bool log_realized = false;
  std::optional<SweepSpec> sweep;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

RunConfig parse_config(const std::string& yaml_text);
RunConfig load_config(const std::filesystem::path& path);

/// Default display label, e.g. "CORe(alpha=0.6,z=0.6)" or "LinTS(sigma=0.2)".
std::string default_agent_name(const AgentSpec& spec, ExperimentKind experiment);

}  // namespace corebandit
