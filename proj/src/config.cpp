#include <cmath>
#include <fstream>

#include "swapcast/harness.hpp"

namespace swapcast::harness {

namespace {

using nlohmann::json;

agents::TieRule tie_from_string(const std::string& s) {
  if (s == "highest") return agents::TieRule::HighestIndex;
  if (s == "lowest") return agents::TieRule::LowestIndex;
  throw ConfigError("unknown tie_rule: " + s);
}

std::string tie_to_string(agents::TieRule tie) {
  return tie == agents::TieRule::HighestIndex ? "highest" : "lowest";
}

// Numeric field that also accepts "auto" (encoded as -1).
double number_or_auto(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (v.is_string()) {
    if (v.get<std::string>() == "auto") return -1;
    throw ConfigError(std::string(key) + " must be a number or \"auto\"");
  }
  return v.get<double>();
}

json auto_or_number(double v) {
  if (v < 0) return "auto";
  return v;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  try {
    ExperimentConfig cfg;
    cfg.horizon = j.at("horizon").get<std::int64_t>();
    cfg.dim = j.value("dim", 1);
    cfg.epsilon = number_or_auto(j, "epsilon", -1);
    cfg.gap_tol = number_or_auto(j, "gap_tol", -1);
    cfg.strict = j.value("strict", false);
    cfg.master_seed = j.value("master_seed", std::uint64_t{1});
    cfg.replications = j.value("replications", 1);

    if (j.contains("family")) {
      const auto& f = j.at("family");
      cfg.family.kind = f.value("kind", std::string("intervals"));
      cfg.family.delta = number_or_auto(f, "delta", -1);
      cfg.family.k = f.value("k", 2);
      cfg.family.eta = number_or_auto(f, "eta", -1);
      cfg.family.tau = number_or_auto(f, "tau", -1);
      cfg.family.tie_rule =
          tie_from_string(f.value("tie_rule", std::string("highest")));
    }

    if (j.contains("adversary")) {
      const auto& a = j.at("adversary");
      cfg.adversary.kind = a.value("kind", std::string("iid-uniform-corners"));
      if (a.contains("y")) cfg.adversary.y = a.at("y").get<std::vector<double>>();
      if (a.contains("sequence"))
        cfg.adversary.sequence =
            a.at("sequence").get<std::vector<std::vector<double>>>();
      if (a.contains("outcomes"))
        cfg.adversary.outcomes =
            a.at("outcomes").get<std::vector<std::vector<double>>>();
      if (a.contains("forced"))
        cfg.adversary.forced =
            a.at("forced").get<std::vector<std::uint32_t>>();
      cfg.adversary.script_file = a.value("script_file", std::string());
      if (a.contains("seed"))
        cfg.adversary.seed = a.at("seed").get<std::uint64_t>();
    }

    for (const auto& aj : j.value("agents", json::array())) {
      AgentSpec spec;
      spec.id = aj.at("id").get<std::string>();
      spec.mode = aj.value("mode", std::string("exact"));
      spec.eta = number_or_auto(aj, "eta", -1);
      spec.delta = number_or_auto(aj, "delta", -1);
      spec.tie_rule = tie_from_string(aj.value("tie_rule", std::string("highest")));
      if (aj.contains("vectors")) {
        const auto& v = aj.at("vectors");
        if (v.is_string()) {
          if (v.get<std::string>() != "random")
            throw ConfigError("agent vectors must be a matrix or \"random\"");
          spec.random = true;
        } else {
          spec.vectors = v.get<std::vector<std::vector<double>>>();
        }
      } else {
        spec.random = true;
      }
      spec.actions = aj.value("actions", 2);
      if (aj.contains("seed")) spec.seed = aj.at("seed").get<std::uint64_t>();
      cfg.agents.push_back(std::move(spec));
    }

    if (j.contains("caps")) {
      const auto& c = j.at("caps");
      cfg.caps.grid = c.value("grid", cfg.caps.grid);
      cfg.caps.events = c.value("events", cfg.caps.events);
      cfg.caps.horizon = c.value("horizon", cfg.caps.horizon);
    }
    if (j.contains("output")) {
      const auto& o = j.at("output");
      cfg.output.dir = o.value("dir", std::string());
      cfg.output.write_transcript = o.value("transcript", true);
      cfg.output.per_event_rows = o.value("per_event_rows", true);
      cfg.output.write_events_matrix = o.value("events_matrix", false);
    }
    return cfg;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
}

ExperimentConfig ExperimentConfig::from_json_file(
    const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open config file " + path.string());
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config is not valid JSON: " + std::string(e.what()));
  }
  return from_json(j);
}

json ExperimentConfig::to_json() const {
  json j;
  j["horizon"] = horizon;
  j["dim"] = dim;
  j["epsilon"] = auto_or_number(epsilon);
  j["gap_tol"] = auto_or_number(gap_tol);
  j["strict"] = strict;
  j["master_seed"] = master_seed;
  j["replications"] = replications;
  json f;
  f["kind"] = family.kind;
  f["delta"] = auto_or_number(family.delta);
  f["k"] = family.k;
  f["eta"] = auto_or_number(family.eta);
  f["tau"] = auto_or_number(family.tau);
  f["tie_rule"] = tie_to_string(family.tie_rule);
  j["family"] = f;
  json a;
  a["kind"] = adversary.kind;
  if (!adversary.y.empty()) a["y"] = adversary.y;
  if (!adversary.sequence.empty()) a["sequence"] = adversary.sequence;
  if (!adversary.outcomes.empty()) a["outcomes"] = adversary.outcomes;
  if (!adversary.forced.empty()) a["forced"] = adversary.forced;
  if (!adversary.script_file.empty()) a["script_file"] = adversary.script_file;
  if (adversary.seed) a["seed"] = *adversary.seed;
  j["adversary"] = a;
  j["agents"] = json::array();
  for (const auto& spec : agents) {
    json aj;
    aj["id"] = spec.id;
    aj["mode"] = spec.mode;
    aj["eta"] = auto_or_number(spec.eta);
    aj["delta"] = auto_or_number(spec.delta);
    aj["tie_rule"] = tie_to_string(spec.tie_rule);
    if (spec.random)
      aj["vectors"] = "random";
    else
      aj["vectors"] = spec.vectors;
    aj["actions"] = spec.actions;
    if (spec.seed) aj["seed"] = *spec.seed;
    j["agents"].push_back(aj);
  }
  j["caps"] = {{"grid", caps.grid}, {"events", caps.events}, {"horizon", caps.horizon}};
  j["output"] = {{"dir", output.dir},
                 {"transcript", output.write_transcript},
                 {"per_event_rows", output.per_event_rows},
                 {"events_matrix", output.write_events_matrix}};
  return j;
}

ResolvedParams resolve_params(const ExperimentConfig& cfg) {
  if (cfg.horizon < 0) throw ConfigError("horizon must be >= 0");
  if (cfg.dim < 1) throw ConfigError("dim must be >= 1");
  if (cfg.horizon > cfg.caps.horizon)
    throw CapError("horizon exceeds cap: " + std::to_string(cfg.horizon));

  const auto& kind = cfg.family.kind;
  const bool cover_family = (kind == "br-cover" || kind == "logistic-cover");
  if (kind == "intervals" && cfg.dim != 1)
    throw ConfigError("intervals family needs dim = 1");
  if (kind == "polygons" && cfg.dim != 2)
    throw ConfigError("polygons family needs dim = 2");
  if (!cover_family && kind != "intervals" && kind != "polygons")
    throw ConfigError("unknown family kind: " + kind);

  auto positive_or_auto = [](double v, const char* what) {
    if (v != -1 && !(v > 0))
      throw ConfigError(std::string(what) + " must be positive or \"auto\"");
  };
  positive_or_auto(cfg.epsilon, "epsilon");
  positive_or_auto(cfg.gap_tol, "gap_tol");
  positive_or_auto(cfg.family.delta, "family.delta");
  positive_or_auto(cfg.family.eta, "family.eta");
  positive_or_auto(cfg.family.tau, "family.tau");

  ResolvedParams p;
  p.lifted = cover_family;
  p.grid_dim = cfg.dim + (p.lifted ? 1 : 0);

  const double T = std::max<double>(1.0, static_cast<double>(cfg.horizon));
  if (cfg.epsilon > 0) {
    p.epsilon = cfg.epsilon;
  } else {
    // rate-matched defaults: 1/sqrt(T), and T^{-3/8} for polygon runs
    p.epsilon = kind == "polygons" ? std::pow(T, -3.0 / 8.0)
                                   : 1.0 / std::sqrt(T);
    p.epsilon = std::min(1.0, std::max(p.epsilon, 1e-6));
  }
  p.gap_tol = cfg.gap_tol > 0 ? cfg.gap_tol : p.epsilon / 4.0;

  if (cover_family) {
    const int k = cfg.family.k;
    if (k < 1) throw ConfigError("family k must be >= 1");
    const double d = static_cast<double>(cfg.dim);
    if (cfg.family.delta > 0) {
      p.delta = cfg.family.delta;
    } else if (kind == "br-cover") {
      p.delta = 1.0 / ((d + 1.0) * std::sqrt(T));
    } else {
      // ln(1/(k sqrt(T)) + 1) / ((d+1) sqrt(T)); clamped below
      p.delta = std::log(1.0 / (k * std::sqrt(T)) + 1.0) /
                ((d + 1.0) * std::sqrt(T));
    }
    const double clamped = std::min(0.5, std::max(p.delta, 1e-3));
    p.delta_clamped = clamped != p.delta;
    p.delta = clamped;
    if (kind == "logistic-cover") {
      p.eta = cfg.family.eta > 0
                  ? cfg.family.eta
                  : (std::log(static_cast<double>(k)) + 1.0) * std::sqrt(T);
      if (cfg.family.tau > 0) {
        p.tau = cfg.family.tau;
      } else {
        // tau = 1/(k L T^{1/3}) with L = d+1, the cover's Lipschitz bound
        p.tau = 1.0 / (k * (d + 1.0) * std::cbrt(T));
        p.tau = std::min(1.0, std::max(p.tau, 1e-3));
      }
    }
  }
  return p;
}

json ResolvedParams::to_json() const {
  json j;
  j["epsilon"] = epsilon;
  j["gap_tol"] = gap_tol;
  j["lifted"] = lifted;
  j["grid_dim"] = grid_dim;
  if (delta > 0) {
    j["delta"] = delta;
    j["delta_clamped"] = delta_clamped;
  }
  if (eta > 0) j["eta"] = eta;
  if (tau > 0) j["tau"] = tau;
  return j;
}

}  // namespace swapcast::harness
