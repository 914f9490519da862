#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "swapcast/adversary.hpp"
#include "swapcast/events.hpp"
#include "swapcast/forecaster.hpp"
#include "swapcast/metrics.hpp"
#include "swapcast/swap_regret.hpp"
#include "swapcast/transcript.hpp"

namespace swapcast::harness {

// Failure taxonomy, mapped to process exit codes by the CLI.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
  static constexpr int exit_code = 2;
};
struct SolverFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
  static constexpr int exit_code = 3;
};
struct CapError : std::runtime_error {
  using std::runtime_error::runtime_error;
  static constexpr int exit_code = 4;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
  static constexpr int exit_code = 5;
};

struct FamilySpec {
  std::string kind = "intervals";  // intervals | polygons | br-cover | logistic-cover
  double delta = -1;               // cover resolution; -1 = auto
  int k = 2;                       // cover max actions
  double eta = -1;                 // logistic response sharpness; -1 = auto
  double tau = -1;                 // bucket width; -1 = auto
  agents::TieRule tie_rule = agents::TieRule::HighestIndex;
};

struct AdversarySpec {
  std::string kind = "iid-uniform-corners";
  std::vector<double> y;                      // constant (free coords)
  std::vector<std::vector<double>> sequence;  // periodic
  std::vector<std::vector<double>> outcomes;  // scripted, inline
  std::vector<std::uint32_t> forced;          // scripted forced predictions
  std::string script_file;                    // scripted, CSV
  std::optional<std::uint64_t> seed;
};

struct AgentSpec {
  std::string id;
  std::string mode = "exact";  // exact | snapped | logistic
  double eta = -1;             // logistic; -1 = auto (ln k + 1) sqrt(T)
  double delta = -1;           // snapped cover resolution; -1 = family delta
  agents::TieRule tie_rule = agents::TieRule::HighestIndex;
  std::vector<std::vector<double>> vectors;  // empty with random=true => drawn
  bool random = false;
  int actions = 2;
  std::optional<std::uint64_t> seed;
};

struct Caps {
  std::size_t grid = 10'000;
  std::size_t events = 5'000'000;
  std::int64_t horizon = 1'000'000;
};

struct OutputSpec {
  std::string dir;  // empty = no files
  bool write_transcript = true;
  bool per_event_rows = true;
  bool write_events_matrix = false;
};

struct ExperimentConfig {
  std::int64_t horizon = 0;
  int dim = 1;          // free dimensions, before any lift
  double epsilon = -1;  // -1 = auto (1/sqrt(T); polygons: T^{-3/8})
  double gap_tol = -1;  // -1 = auto (epsilon / 4)
  bool strict = false;
  std::uint64_t master_seed = 1;
  int replications = 1;
  FamilySpec family;
  AdversarySpec adversary;
  std::vector<AgentSpec> agents;
  Caps caps;
  OutputSpec output;

  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig from_json_file(const std::filesystem::path& path);
  nlohmann::json to_json() const;
};

// Concrete parameter values after the auto-rules are applied.
struct ResolvedParams {
  double epsilon = 0;
  double gap_tol = 0;
  bool lifted = false;  // br-cover / logistic-cover grids carry the lift
  int grid_dim = 0;
  double delta = 0;  // cover resolution (br / logistic)
  double eta = 0;    // logistic family eta
  double tau = 0;    // bucket width
  bool delta_clamped = false;
  nlohmann::json to_json() const;
};

ResolvedParams resolve_params(const ExperimentConfig& cfg);

struct AgentOutcome {
  std::string id;
  std::string mode;
  agents::UtilityFunction utility;  // resolved vectors (random draws included)
  double lipschitz = 0;
  int actions = 0;
  agents::SwapRegretResult expected;
  agents::SwapRegretResult realized;
  std::vector<std::string> warnings;
};

struct SolverStats {
  double max_gap = 0;
  double max_value = 0;
  std::int64_t uncertified_rounds = 0;
  double gap_tol = 0;
};

struct BucketCheckRow {
  std::string utility_id;
  int action = 0;
  metrics::WeightedBucketBias check;
};

struct ExperimentResult {
  ExperimentConfig config;
  ResolvedParams params;
  std::shared_ptr<Transcript> transcript;
  events::FamilyPtr family;
  std::shared_ptr<const agents::UtilityCover> cover;  // null unless cover family
  metrics::BiasReport bias;
  std::optional<double> cal_l1, cal_l2;
  std::vector<AgentOutcome> agent_results;
  std::vector<BucketCheckRow> bucket_checks;  // logistic-cover runs
  SolverStats solver;
  double wall_ms = 0;
  std::uint64_t commit_chain = 0;
  std::string transcript_hash;
};

// Test instrumentation: both callbacks receive the 1-based round index.
struct RunHooks {
  std::function<void(std::int64_t)> on_outcome_committed;
  std::function<void(std::int64_t)> on_forecast;
};

// Executes T protocol rounds (outcome committed, then forecast, then reveal),
// computes all metrics, and optionally writes artifacts per config.output.
ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                const RunHooks* hooks = nullptr);

struct RateRow {
  std::int64_t horizon = 0;
  double epsilon = 0;
  double mean_max_bias = 0;   // averaged over seeds
  double mean_max_swap = 0;   // max over agents, averaged over seeds
  double max_gap = 0;
  double max_value = 0;
};

struct RateStudyResult {
  std::vector<RateRow> rows;
  std::optional<double> bias_slope;  // log-log least squares; absent if <2 rows
  std::optional<double> swap_slope;
  nlohmann::json to_json() const;
};

// Runs `base` at each horizon with auto-epsilon scaling, `base.replications`
// seeds per horizon (master_seed + r).
RateStudyResult rate_study(ExperimentConfig base,
                           const std::vector<std::int64_t>& horizons);

nlohmann::json transcript_json(const Transcript& transcript);
Transcript transcript_from_json(const nlohmann::json& j);
std::string transcript_hash_hex(const Transcript& transcript);

nlohmann::json report_json(const ExperimentResult& result);
// Atomic (write-temp-then-rename) emission of report.json, events.csv,
// rounds.csv and optionally transcript.json into dir.
void emit_report(const ExperimentResult& result,
                 const std::filesystem::path& dir);
void emit_rate_study(const RateStudyResult& result,
                     const std::filesystem::path& dir);

// Reproduction of the discontinuity counterexample; asserts nothing, the
// returned result carries the measured quantities.
struct LemmaReport {
  double delta = 0;
  std::int64_t horizon = 0;
  // conditional (per-firing-round) bias for the four best-response events
  double bias_u[2] = {0, 0};
  double bias_u_tilde[2] = {0, 0};
  double payoff_gap_bound = 0;
  double payoff_gap_max_seen = 0;
  double swap_regret_u = 0;
  double swap_regret_u_tilde = 0;
  double wall_ms = 0;
  nlohmann::json to_json() const;
};
LemmaReport reproduce_lemma(double delta, std::int64_t T);

}  // namespace swapcast::harness
