// Command-line front end: run experiments, rate studies, event-family
// enumeration and the counterexample reproduction.
//
// Exit codes: 0 success, 2 config error, 3 solver failure (strict),
// 4 cap exceeded, 5 I/O failure.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "swapcast/harness.hpp"

namespace {

using namespace swapcast;
using nlohmann::json;

int cmd_run(const std::string& config_path, std::optional<std::uint64_t> seed,
            bool strict, const std::string& out_dir) {
  auto cfg = harness::ExperimentConfig::from_json_file(config_path);
  if (seed) cfg.master_seed = *seed;
  if (strict) cfg.strict = true;
  if (!out_dir.empty()) cfg.output.dir = out_dir;

  if (cfg.replications <= 1) {
    const auto result = harness::run_experiment(cfg);
    json summary;
    summary["transcript_hash"] = result.transcript_hash;
    summary["max_bias_inf"] = result.bias.max_bias_inf;
    summary["family_size"] = result.family->size();
    summary["solver_max_gap"] = result.solver.max_gap;
    summary["wall_ms"] = result.wall_ms;
    double max_swap = 0;
    for (const auto& a : result.agent_results)
      max_swap = std::max(max_swap, a.expected.value);
    summary["max_agent_swap_regret"] = max_swap;
    std::cout << summary.dump(2) << "\n";
    return 0;
  }

  const std::string base_dir = cfg.output.dir;
  for (int r = 0; r < cfg.replications; ++r) {
    harness::ExperimentConfig rep = cfg;
    rep.replications = 1;
    rep.master_seed = cfg.master_seed + static_cast<std::uint64_t>(r);
    if (!base_dir.empty())
      rep.output.dir = base_dir + "/rep-" + std::to_string(r);
    const auto result = harness::run_experiment(rep);
    std::cout << "rep " << r << " seed " << rep.master_seed << " max_bias "
              << result.bias.max_bias_inf << " hash "
              << result.transcript_hash << "\n";
  }
  return 0;
}

int cmd_rate_study(const std::string& config_path,
                   const std::string& horizons_csv,
                   const std::string& out_dir) {
  auto cfg = harness::ExperimentConfig::from_json_file(config_path);
  std::vector<std::int64_t> horizons;
  std::stringstream ss(horizons_csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) horizons.push_back(std::stoll(tok));
  if (horizons.empty())
    throw harness::ConfigError("rate-study needs at least one horizon");
  const auto study = harness::rate_study(cfg, horizons);
  if (!out_dir.empty()) harness::emit_rate_study(study, out_dir);
  std::cout << study.to_json().dump(2) << "\n";
  return 0;
}

int cmd_enumerate(const std::string& family, int dim, double epsilon,
                  double delta, double tau, double eta, int k,
                  std::size_t cap, const std::string& matrix_out) {
  const bool lifted = family == "br-cover" || family == "logistic-cover";
  auto grid = std::make_shared<PredictionGrid>(
      PredictionGrid::epsilon_net(dim + (lifted ? 1 : 0), epsilon, lifted));

  std::optional<events::EventFamily> fam;
  if (family == "intervals") {
    fam = events::intervals_1d(grid);
  } else if (family == "polygons") {
    fam = events::convex_polygon_events_2d(grid, cap);
  } else if (family == "br-cover") {
    const auto cover = agents::build_utility_cover(k, grid->dim(), delta);
    fam = events::best_response_events(cover, grid);
  } else if (family == "logistic-cover") {
    const auto cover = agents::build_utility_cover(k, grid->dim(), delta);
    fam = events::logistic_bucket_events(cover, grid, eta,
                                         events::BucketScheme::make(tau));
  } else {
    throw harness::ConfigError("unknown family: " + family);
  }

  json out;
  out["family"] = family;
  out["grid_points"] = grid->size();
  out["raw_count"] = fam->dedup_log().raw;
  out["deduped_count"] = fam->size();
  out["dropped_empty"] = fam->dedup_log().dropped_empty;
  out["merged_duplicates"] = fam->dedup_log().merged_duplicates;
  if (family == "polygons") {
    // degenerate hulls (points, segments) are counted separately so both
    // semantics stay visible
    const std::size_t n = grid->size();
    const std::size_t degenerate = n + n * (n - 1) / 2;
    out["degenerate_count"] = degenerate;
    out["nondegenerate_count"] = fam->size() - degenerate;
  }
  if (!matrix_out.empty()) {
    events::write_membership_matrix(*fam, matrix_out);
    out["matrix"] = matrix_out;
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_reproduce_lemma(double delta, std::int64_t T) {
  const auto rep = harness::reproduce_lemma(delta, T);
  std::cout << rep.to_json().dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"swapcast: forecasts that are unbiased on event families, plus "
               "a harness measuring downstream agents' swap regret"};
  app.require_subcommand(1);

  std::string config_path, out_dir, horizons_csv, matrix_out;
  std::optional<std::uint64_t> seed;
  bool strict = false;

  auto* run = app.add_subcommand("run", "run one experiment from a config");
  run->add_option("--config", config_path, "config JSON path")->required();
  run->add_option("--seed", seed, "master seed override");
  run->add_flag("--strict", strict, "abort on uncertified solver rounds");
  run->add_option("--out", out_dir, "output directory override");

  auto* rate = app.add_subcommand("rate-study", "run a horizon sweep");
  rate->add_option("--config", config_path, "config JSON path")->required();
  rate->add_option("--horizons", horizons_csv, "comma-separated horizons")
      ->required();
  rate->add_option("--out", out_dir, "output directory");

  std::string family = "intervals";
  int dim = 1, k = 2;
  double epsilon = 0.25, delta = 0.25, tau = 0.25, eta = 1.0;
  std::size_t cap = 5'000'000;
  auto* enumerate = app.add_subcommand("enumerate-events",
                                       "build a family and report its size");
  enumerate->add_option("--family", family,
                        "intervals|polygons|br-cover|logistic-cover");
  enumerate->add_option("--dim", dim, "free dimensions");
  enumerate->add_option("--epsilon", epsilon, "grid resolution");
  enumerate->add_option("--delta", delta, "cover resolution");
  enumerate->add_option("--tau", tau, "bucket width");
  enumerate->add_option("--eta", eta, "logistic sharpness");
  enumerate->add_option("--k", k, "cover actions");
  enumerate->add_option("--cap", cap, "event count cap");
  enumerate->add_option("--out-matrix", matrix_out,
                        "write bit-packed membership matrix here");

  double lemma_delta = 0.1;
  std::int64_t lemma_T = 1000;
  auto* lemma = app.add_subcommand("reproduce-lemma",
                                   "scripted discontinuity counterexample");
  lemma->add_option("--delta", lemma_delta, "threshold separation");
  lemma->add_option("--T", lemma_T, "horizon (even)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, seed, strict, out_dir);
    if (rate->parsed()) return cmd_rate_study(config_path, horizons_csv, out_dir);
    if (enumerate->parsed())
      return cmd_enumerate(family, dim, epsilon, delta, tau, eta, k, cap,
                           matrix_out);
    if (lemma->parsed()) return cmd_reproduce_lemma(lemma_delta, lemma_T);
  } catch (const harness::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return harness::ConfigError::exit_code;
  } catch (const harness::SolverFailure& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return harness::SolverFailure::exit_code;
  } catch (const harness::CapError& e) {
    std::cerr << "cap exceeded: " << e.what() << "\n";
    return harness::CapError::exit_code;
  } catch (const events::CapExceeded& e) {
    std::cerr << "cap exceeded: " << e.what() << "\n";
    return harness::CapError::exit_code;
  } catch (const harness::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return harness::IoError::exit_code;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return harness::ConfigError::exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
