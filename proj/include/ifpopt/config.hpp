#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ifpopt/gains.hpp"
#include "ifpopt/sim.hpp"

namespace ifpopt {

/// Configuration or validation failure; the CLI maps it to exit code 1.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ObjectiveSpec {
  std::string catalog;            // "example1" | "example2" | "quadratic"
  int index = 0;                  // catalog index for the example sets
  Matrix q;                       // quadratic data
  Vector c;
};

struct ScheduleSpec {
  std::vector<Matrix> modes;      // adjacency per mode
  double dwell = 0.0;
  std::string sequence_kind;      // "random" | "cycle" | "explicit"
  std::uint64_t seed = 0;
  int count = 0;                  // number of dwell slots for "random"
  std::vector<int> sequence;      // for "cycle" (period-expanded) and "explicit"
  std::optional<double> period;
};

struct GainSpec {
  std::string kind;               // "constant" | "shared" | "per_subgraph"
  GainProfile shared;
  std::vector<GainProfile> profiles;
};

struct InitSpec {
  bool x_uniform = false;
  double x_low = 0.0, x_high = 1.0;
  std::uint64_t x_seed = 0;
  Vector x_values;
  Vector lambda_values;           // empty means zero
};

struct ExperimentConfig {
  std::string name;
  std::string description;
  std::vector<ObjectiveSpec> objectives;
  double alpha = 1.0, beta = 1.0, gamma = 1.0;
  Matrix c_matrix = Matrix::Identity(1, 1);
  std::vector<Matrix> j_blocks, k_blocks;   // one per agent; empty means identity
  std::optional<Vector> nu_pinned;
  std::optional<Matrix> graph_adjacency;    // exclusive with schedule
  std::optional<ScheduleSpec> schedule;
  GainSpec gains;
  Algorithm algorithm = Algorithm::alg1;
  SimConfig sim;
  InitSpec init;
  double balance_tol = kBalanceTol;
  double ujsc_window = 0.0;                 // 0 = auto
  bool allow_inadmissible_gain = false;
  std::string reproduces;                   // free-form note carried into the manifest
};

/// Strict parse: unknown keys and type mismatches raise ValidationError with
/// the offending path.
ExperimentConfig config_from_json_text(const std::string& text);
std::string config_to_json_text(const ExperimentConfig& cfg);

/// FNV-1a over the canonical serialized form.
std::string config_hash(const ExperimentConfig& cfg);

/// Fully validated, simulation-ready experiment.
struct ResolvedExperiment {
  ExperimentConfig config;
  AgentNetwork network;
  SwitchingSchedule schedule;
  GainSchedule gains;
  OptimalPoint optimum;
  NetworkState init;
  Vector nu_computed;   // minimax index per agent
  Vector eta;           // minimizing storage parameter per agent
  Vector nu_relaxed;    // norm-relaxed bound per agent
  Vector nu_dynamics;   // pinned when provided, else computed
  ThresholdReport thresholds;
  bool ujsc = false;
  double ujsc_window = 0.0;
  bool gain_admissible = true;
  std::string gain_detail;
};

/// Validates the whole configuration (parameter coupling K_i J_i = C^T,
/// weight balance and nonemptiness of every segment graph, joint
/// connectivity, gain admissibility for the diffusive-coupling flow, the
/// initial multiplier condition) and resolves it into runnable form.
/// Throws ValidationError with the violated condition.
ResolvedExperiment resolve(const ExperimentConfig& cfg);

struct RunArtifacts {
  int exit_code = 0;              // 0 ok, 2 diverged
  Trajectory trajectory;
  std::string summary_json;
  std::string manifest_json;
};

/// Simulates and assembles the CSV/JSON artifacts; when out_dir is nonempty
/// writes trajectory.csv, summary.json and manifest.json there.
RunArtifacts run_experiment(const ResolvedExperiment& exp, const std::string& out_dir);

/// Static analysis only: indices, thresholds, balance/connectivity verdicts
/// and component partitions, as a JSON document.
std::string analyze_experiment(const ResolvedExperiment& exp);

/// JSON document describing the accepted config schema and the stable summary
/// key names.
std::string schema_json();

}  // namespace ifpopt
