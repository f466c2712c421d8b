#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "statlab/adversary.hpp"
#include "statlab/kernels.hpp"
#include "statlab/oracle.hpp"

namespace statlab {

/// One measured claim. claim is an acceptance identifier such as "AC1".
struct Check {
  std::string claim;
  std::string name;
  double measured = 0.0;
  std::string relation;  // "<=", ">=", "<", ">"
  double threshold = 0.0;
  bool pass = false;
  nlohmann::json details = nlohmann::json::object();

  nlohmann::json to_json() const;
};

Check check_le(std::string claim, std::string name, double measured, double threshold);
Check check_ge(std::string claim, std::string name, double measured, double threshold);
Check check_lt(std::string claim, std::string name, double measured, double threshold);
Check check_gt(std::string claim, std::string name, double measured, double threshold);
/// measured 1 or 0 against "== 1".
Check check_true(std::string claim, std::string name, bool ok);

struct ExperimentConfig {
  std::string experiment = "quad_lower_bound";
  int T = 10;
  std::size_t d = 20;
  std::uint64_t seed = 0;
  std::string solver = "subgrad";
  nlohmann::json solver_params = nlohmann::json::object();
  /// mode ("deterministic_orthogonal" | "randomized_sphere"), w_norm, geometry ("auto" | "natural" | "rotation")
  nlohmann::json adversary = nlohmann::json::object();
  std::size_t trials = 100;
  std::string output_path;
  nlohmann::json tolerances = nlohmann::json::object();

  static ExperimentConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  /// Throws ConfigError.
  void validate() const;
  double tolerance(const std::string& key, double fallback) const;
};

const std::vector<std::string>& experiment_names();

/// Reads cfg.adversary; throws ConfigError on unknown modes or geometries.
ChannelAdversaryConfig adversary_config(const ExperimentConfig& cfg, ChannelMode default_mode);

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<Check> verdicts;
  /// Main game, written as the transcript file.
  std::optional<Transcript> transcript;
  /// Further games keyed by a file-name stem.
  std::vector<std::pair<std::string, Transcript>> extra_transcripts;
  nlohmann::json records = nlohmann::json::array();
  nlohmann::json certificates = nlohmann::json::array();
  nlohmann::json instance;
  nlohmann::json diagnostics;
  double seconds = 0.0;

  bool all_pass() const;
  nlohmann::json report() const;
};

ExperimentResult run_experiment(const ExperimentConfig& cfg, Exec exec = Exec::parallel);

}  // namespace statlab
