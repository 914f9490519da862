#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "swapcast/harness.hpp"

namespace swapcast::harness {

namespace {

using nlohmann::json;

// Atomic file write: temp in the same directory, then rename.
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& contents) {
  std::error_code ec;
  std::filesystem::create_directories(path.parent_path(), ec);
  const auto tmp = path.parent_path() /
                   (".tmp-" + path.filename().string());
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open " + tmp.string());
    os << contents;
    if (!os) throw IoError("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("rename failed: " + path.string() + ": " + ec.message());
}

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

json swap_result_json(const agents::SwapRegretResult& r) {
  return {{"value", r.value},
          {"best_swap", r.best_swap},
          {"per_action_terms", r.per_action_terms}};
}

}  // namespace

json transcript_json(const Transcript& transcript) {
  const auto& grid = transcript.grid();
  json g;
  g["dim"] = grid.dim();
  g["epsilon"] = grid.epsilon();
  g["lifted"] = grid.lifted();
  json points = json::array();
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const auto pt = grid.point(p);
    points.push_back(std::vector<double>(pt.begin(), pt.end()));
  }
  g["points"] = points;

  json rounds = json::array();
  for (const auto& row : transcript.rows()) {
    json r;
    r["forecast"] = {{"support", row.forecast.support},
                     {"weights", row.forecast.weights}};
    r["realized_index"] = row.realized_index;
    r["outcome"] = row.outcome.coords;
    rounds.push_back(std::move(r));
  }
  json sidecar = json::array();
  for (const auto& d : transcript.diagnostics()) {
    std::ostringstream hash;
    hash << std::hex << std::setw(16) << std::setfill('0') << d.commit_hash;
    sidecar.push_back({{"value", d.value},
                       {"gap", d.gap},
                       {"entropy", d.entropy},
                       {"forced", d.forced},
                       {"certified", d.certified},
                       {"commit", hash.str()}});
  }
  return {{"grid", g}, {"rounds", rounds}, {"diagnostics", sidecar}};
}

Transcript transcript_from_json(const json& j) {
  const auto& g = j.at("grid");
  const int dim = g.at("dim").get<int>();
  const bool lifted = g.at("lifted").get<bool>();
  const int free = dim - (lifted ? 1 : 0);
  // reconstruct per-axis values from the point list
  std::vector<std::vector<double>> axes(free);
  for (const auto& pj : g.at("points")) {
    const auto pt = pj.get<std::vector<double>>();
    for (int a = 0; a < free; ++a) {
      auto& ax = axes[a];
      if (std::find(ax.begin(), ax.end(), pt[a]) == ax.end())
        ax.push_back(pt[a]);
    }
  }
  for (auto& ax : axes) std::sort(ax.begin(), ax.end());
  auto grid = std::make_shared<PredictionGrid>(PredictionGrid::from_axis_values(
      axes, lifted, g.at("epsilon").get<double>()));

  Transcript t(grid);
  for (const auto& rj : j.at("rounds")) {
    ForecastDistribution f;
    f.support = rj.at("forecast").at("support").get<std::vector<std::uint32_t>>();
    f.weights = rj.at("forecast").at("weights").get<std::vector<double>>();
    t.append(std::move(f), rj.at("realized_index").get<std::uint32_t>(),
             OutcomePoint(rj.at("outcome").get<std::vector<double>>()));
  }
  return t;
}

std::string transcript_hash_hex(const Transcript& transcript) {
  const std::string dump = transcript_json(transcript).dump();
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0')
     << fnv1a64(dump.data(), dump.size());
  return os.str();
}

json report_json(const ExperimentResult& result) {
  json j;
  j["config"] = result.config.to_json();
  j["resolved"] = result.params.to_json();
  j["rounds"] = result.transcript ? result.transcript->rounds() : 0;
  j["transcript_hash"] = result.transcript_hash;
  {
    std::ostringstream chain;
    chain << std::hex << std::setw(16) << std::setfill('0')
          << result.commit_chain;
    j["commit_chain"] = chain.str();
  }

  const auto& fam = *result.family;
  j["family"] = {{"kind", fam.kind()},
                 {"size", fam.size()},
                 {"raw", fam.dedup_log().raw},
                 {"merged_duplicates", fam.dedup_log().merged_duplicates},
                 {"dropped_empty", fam.dedup_log().dropped_empty}};
  j["grid"] = {{"dim", fam.grid().dim()},
               {"epsilon", fam.grid().epsilon()},
               {"lifted", fam.grid().lifted()},
               {"points", fam.grid().size()}};

  json bias;
  bias["max_inf_expected"] = result.bias.max_bias_inf;
  bias["max_inf_realized"] = result.bias.max_bias_inf_realized;
  if (result.config.output.per_event_rows) {
    json rows = json::array();
    for (std::size_t e = 0; e < fam.size(); ++e) {
      const auto& b = result.bias.events[e];
      rows.push_back({{"label", fam.event(e).labels.front().to_string()},
                      {"n_T", b.n_T},
                      {"bias_inf_expected", b.bias_inf},
                      {"bias_inf_realized", b.bias_inf_realized}});
    }
    bias["events"] = std::move(rows);
  }
  j["bias"] = std::move(bias);

  if (result.cal_l1) j["calibration"] = {{"l1", *result.cal_l1}, {"l2", *result.cal_l2}};

  json agents_json = json::array();
  for (const auto& a : result.agent_results) {
    json aj;
    aj["id"] = a.id;
    aj["mode"] = a.mode;
    aj["actions"] = a.actions;
    aj["lipschitz"] = a.lipschitz;
    aj["vectors"] = a.utility.vectors;  // resolved, so regrets replay
    aj["swap_regret_expected"] = swap_result_json(a.expected);
    aj["swap_regret_realized"] = swap_result_json(a.realized);
    if (!a.warnings.empty()) aj["warnings"] = a.warnings;
    agents_json.push_back(std::move(aj));
  }
  j["agents"] = std::move(agents_json);

  if (!result.bucket_checks.empty()) {
    json checks = json::array();
    for (const auto& row : result.bucket_checks)
      checks.push_back({{"utility", row.utility_id},
                        {"action", row.action},
                        {"weighted_bias_inf", row.check.linf},
                        {"bound", row.check.bound},
                        {"holds", row.check.holds}});
    j["bucket_checks"] = std::move(checks);
  }

  j["solver"] = {{"max_gap", result.solver.max_gap},
                 {"max_value", result.solver.max_value},
                 {"uncertified_rounds", result.solver.uncertified_rounds},
                 {"gap_tol", result.solver.gap_tol}};
  const auto rounds = result.transcript ? result.transcript->rounds() : 0;
  j["timing"] = {{"wall_ms", result.wall_ms},
                 {"per_round_ms", rounds > 0 ? result.wall_ms / rounds : 0.0}};
  if (result.config.adversary.kind == "greedy-bias")
    j["adversary_note"] = "greedy-bias is a heuristic stress adversary";
  return j;
}

void emit_report(const ExperimentResult& result,
                 const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string());

  write_file_atomic(dir / "report.json", report_json(result).dump(2) + "\n");

  {
    std::ostringstream csv;
    csv << "event_label,n_T,bias_inf_expected,bias_inf_realized\n";
    csv << std::setprecision(17);
    const auto& fam = *result.family;
    for (std::size_t e = 0; e < fam.size(); ++e) {
      const auto& b = result.bias.events[e];
      csv << csv_quote(fam.event(e).labels.front().to_string()) << ','
          << b.n_T << ',' << b.bias_inf << ',' << b.bias_inf_realized << '\n';
    }
    write_file_atomic(dir / "events.csv", csv.str());
  }
  {
    std::ostringstream csv;
    csv << "t,value,gap,entropy,forced\n";
    csv << std::setprecision(17);
    const auto& diags = result.transcript->diagnostics();
    for (std::size_t t = 0; t < diags.size(); ++t)
      csv << (t + 1) << ',' << diags[t].value << ',' << diags[t].gap << ','
          << diags[t].entropy << ',' << (diags[t].forced ? 1 : 0) << '\n';
    write_file_atomic(dir / "rounds.csv", csv.str());
  }
  if (result.config.output.write_transcript)
    write_file_atomic(dir / "transcript.json",
                      transcript_json(*result.transcript).dump() + "\n");
  if (result.config.output.write_events_matrix)
    events::write_membership_matrix(*result.family, dir / "events.evfm");
}

json RateStudyResult::to_json() const {
  json rows_json = json::array();
  for (const auto& row : rows)
    rows_json.push_back({{"horizon", row.horizon},
                         {"epsilon", row.epsilon},
                         {"mean_max_bias", row.mean_max_bias},
                         {"mean_max_swap", row.mean_max_swap},
                         {"max_gap", row.max_gap},
                         {"max_value", row.max_value}});
  json j;
  j["rows"] = std::move(rows_json);
  if (bias_slope) j["bias_slope"] = *bias_slope;
  if (swap_slope) j["swap_slope"] = *swap_slope;
  return j;
}

void emit_rate_study(const RateStudyResult& result,
                     const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string());
  write_file_atomic(dir / "rate_study.json", result.to_json().dump(2) + "\n");
  std::ostringstream csv;
  csv << "T,epsilon,mean_max_bias,mean_max_swap,max_gap\n";
  csv << std::setprecision(17);
  for (const auto& row : result.rows)
    csv << row.horizon << ',' << row.epsilon << ',' << row.mean_max_bias << ','
        << row.mean_max_swap << ',' << row.max_gap << '\n';
  write_file_atomic(dir / "rate_study.csv", csv.str());
}

json LemmaReport::to_json() const {
  json j;
  j["delta"] = delta;
  j["horizon"] = horizon;
  j["bias"] = {{"u_action0", bias_u[0]},
               {"u_action1", bias_u[1]},
               {"u_tilde_action0", bias_u_tilde[0]},
               {"u_tilde_action1", bias_u_tilde[1]}};
  j["payoff_gap"] = {{"bound", payoff_gap_bound},
                     {"max_seen", payoff_gap_max_seen},
                     {"samples", 100}};
  j["swap_regret"] = {{"u_agent", swap_regret_u},
                      {"u_tilde_agent", swap_regret_u_tilde}};
  j["wall_ms"] = wall_ms;
  return j;
}

}  // namespace swapcast::harness
