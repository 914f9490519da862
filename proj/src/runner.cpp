#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "swapcast/harness.hpp"

namespace swapcast::harness {

namespace {

OutcomePoint box_point(const std::vector<double>& free_coords,
                       const PredictionGrid& grid) {
  if (static_cast<int>(free_coords.size()) != grid.free_dims())
    throw ConfigError("outcome has wrong dimension");
  OutcomePoint y;
  y.coords = free_coords;
  for (double c : y.coords)
    if (c < 0.0 || c > 1.0) throw ConfigError("outcome outside [0,1]");
  if (grid.lifted()) y.coords.push_back(1.0);
  return y;
}

std::vector<std::vector<double>> parse_script_rows(
    const std::filesystem::path& path, std::vector<std::uint32_t>* forced,
    int free_dims) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open script file " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(std::stod(cell));
    if (static_cast<int>(cells.size()) == free_dims + 1) {
      forced->push_back(static_cast<std::uint32_t>(cells.back()));
      cells.pop_back();
    } else if (static_cast<int>(cells.size()) != free_dims) {
      throw ConfigError("script row has wrong column count in " + path.string());
    }
    rows.push_back(std::move(cells));
  }
  return rows;
}

std::unique_ptr<adv::Adversary> build_adversary(const ExperimentConfig& cfg,
                                                GridPtr grid,
                                                events::FamilyPtr family) {
  const auto& spec = cfg.adversary;
  const std::uint64_t seed = spec.seed.value_or(
      CounterRng::derive(cfg.master_seed, "adversary").next_u64());
  if (spec.kind == "constant") {
    if (spec.y.empty()) throw ConfigError("constant adversary needs y");
    return adv::make_constant(box_point(spec.y, *grid));
  }
  if (spec.kind == "iid-uniform-corners")
    return adv::make_iid_uniform_corners(grid, CounterRng(seed));
  if (spec.kind == "periodic") {
    if (spec.sequence.empty())
      throw ConfigError("periodic adversary needs a sequence");
    std::vector<OutcomePoint> seq;
    for (const auto& row : spec.sequence) seq.push_back(box_point(row, *grid));
    return adv::make_periodic(std::move(seq));
  }
  if (spec.kind == "scripted") {
    std::vector<std::vector<double>> rows = spec.outcomes;
    std::vector<std::uint32_t> forced = spec.forced;
    if (!spec.script_file.empty())
      rows = parse_script_rows(spec.script_file, &forced, grid->free_dims());
    if (static_cast<std::int64_t>(rows.size()) < cfg.horizon)
      throw ConfigError("script shorter than horizon");
    std::vector<OutcomePoint> outcomes;
    for (const auto& row : rows) outcomes.push_back(box_point(row, *grid));
    for (auto idx : forced)
      if (idx >= grid->size())
        throw ConfigError("forced prediction index outside grid");
    return adv::make_scripted(std::move(outcomes), std::move(forced));
  }
  if (spec.kind == "greedy-bias")
    return adv::make_greedy_bias(grid, family);
  throw ConfigError("unknown adversary kind: " + spec.kind);
}

struct BuiltAgent {
  AgentSpec spec;
  agents::AgentModel model;
  std::shared_ptr<const agents::UtilityCover> cover;  // for snapped agents
};

std::vector<BuiltAgent> build_agents(
    const ExperimentConfig& cfg, const ResolvedParams& params,
    const PredictionGrid& grid,
    const std::shared_ptr<const agents::UtilityCover>& family_cover) {
  const int udim = grid.lifted() ? grid.dim() : grid.dim() + 1;
  const double T = std::max<double>(1.0, static_cast<double>(cfg.horizon));
  std::vector<BuiltAgent> out;
  for (const auto& spec : cfg.agents) {
    BuiltAgent b;
    b.spec = spec;
    agents::UtilityFunction u;
    u.id = spec.id;
    u.dim = udim;
    if (spec.random) {
      auto rng = CounterRng::derive(spec.seed.value_or(cfg.master_seed),
                                    "agent:" + spec.id);
      u.vectors.assign(spec.actions, std::vector<double>(udim));
      for (auto& v : u.vectors)
        for (auto& x : v) x = rng.next_unit();
    } else {
      u.vectors = spec.vectors;
      for (const auto& v : u.vectors)
        if (static_cast<int>(v.size()) != udim)
          throw ConfigError("agent " + spec.id + " vector dimension != " +
                            std::to_string(udim));
      if (u.vectors.empty())
        throw ConfigError("agent " + spec.id + " has no actions");
    }
    b.model.utility = std::move(u);
    b.model.tie_rule = spec.tie_rule;
    if (spec.mode == "exact") {
      b.model.mode = agents::AgentModel::Mode::Exact;
    } else if (spec.mode == "logistic") {
      b.model.mode = agents::AgentModel::Mode::Logistic;
      const double k = b.model.utility.action_count();
      b.model.eta = spec.eta > 0 ? spec.eta : (std::log(k) + 1.0) * std::sqrt(T);
    } else if (spec.mode == "snapped") {
      b.model.mode = agents::AgentModel::Mode::Snapped;
      const double want_delta = spec.delta > 0 ? spec.delta : params.delta;
      if (!(want_delta > 0))
        throw ConfigError("agent " + spec.id + " needs a snap delta");
      b.model.snap_delta = want_delta;
      if (family_cover && family_cover->delta == want_delta &&
          family_cover->dim == udim &&
          family_cover->k >= b.model.utility.action_count()) {
        b.cover = family_cover;
      } else {
        b.cover = std::make_shared<agents::UtilityCover>(
            agents::build_utility_cover(b.model.utility.action_count(), udim,
                                        want_delta));
      }
    } else {
      throw ConfigError("unknown agent mode: " + spec.mode);
    }
    out.push_back(std::move(b));
  }
  return out;
}

std::uint64_t commit_outcome(std::uint64_t chain, std::int64_t t,
                             const OutcomePoint& y) {
  chain = fnv1a64(&t, sizeof(t), chain);
  for (double c : y.coords) chain = fnv1a64(&c, sizeof(c), chain);
  return chain;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                const RunHooks* hooks) {
  const auto t_start = std::chrono::steady_clock::now();
  ExperimentResult result;
  result.config = cfg;
  result.params = resolve_params(cfg);
  const auto& params = result.params;

  auto grid = std::make_shared<PredictionGrid>(PredictionGrid::epsilon_net(
      params.grid_dim, params.epsilon, params.lifted));
  if (grid->size() > cfg.caps.grid)
    throw CapError("grid has " + std::to_string(grid->size()) +
                   " points, above cap " + std::to_string(cfg.caps.grid));

  std::shared_ptr<const agents::UtilityCover> cover;
  events::FamilyPtr family;
  try {
    if (cfg.family.kind == "intervals") {
      family = std::make_shared<events::EventFamily>(events::intervals_1d(grid));
    } else if (cfg.family.kind == "polygons") {
      family = std::make_shared<events::EventFamily>(
          events::convex_polygon_events_2d(grid, cfg.caps.events));
    } else {
      cover = std::make_shared<agents::UtilityCover>(agents::build_utility_cover(
          cfg.family.k, params.grid_dim, params.delta));
      if (cfg.family.kind == "br-cover") {
        family = std::make_shared<events::EventFamily>(events::best_response_events(
            *cover, grid, cfg.family.tie_rule));
      } else {
        family = std::make_shared<events::EventFamily>(events::logistic_bucket_events(
            *cover, grid, params.eta, events::BucketScheme::make(params.tau)));
      }
    }
  } catch (const events::CapExceeded& e) {
    throw CapError(std::string(e.what()) + " (partial count " +
                   std::to_string(e.partial_count) + ")");
  } catch (const std::length_error& e) {
    throw CapError(e.what());
  }
  if (family->size() > cfg.caps.events)
    throw CapError("family has " + std::to_string(family->size()) +
                   " events, above cap " + std::to_string(cfg.caps.events));
  result.family = family;
  result.cover = cover;

  auto adversary = build_adversary(cfg, grid, family);
  auto fstate = forecast::ForecasterState::init(
      grid, family, cfg.horizon,
      CounterRng::derive(cfg.master_seed, "forecaster"));
  auto transcript = std::make_shared<Transcript>(grid);
  result.solver.gap_tol = params.gap_tol;
  std::uint64_t chain = fnv1a64("swapcast-commit");

  for (std::int64_t t = 1; t <= cfg.horizon; ++t) {
    // protocol order: outcome committed before the forecast exists
    OutcomePoint y = adversary->next_outcome(*transcript, t);
    if (y.dim() != grid->dim())
      throw ConfigError("adversary outcome dimension mismatch");
    chain = commit_outcome(chain, t, y);
    if (hooks && hooks->on_outcome_committed) hooks->on_outcome_committed(t);

    RoundDiagnostics diag;
    diag.commit_hash = chain;
    ForecastDistribution p;
    std::uint32_t realized = 0;
    if (const auto forced = adversary->forced_prediction(t)) {
      p = ForecastDistribution::point_mass(*forced);
      realized = *forced;
      diag.forced = true;
      diag.certified = true;
    } else {
      auto round = forecast::forecast_round(fstate, params.gap_tol);
      p = std::move(round.p);
      realized = round.realized;
      diag.value = round.diag.value;
      diag.gap = round.diag.gap;
      diag.certified = round.diag.certified;
      result.solver.max_gap = std::max(result.solver.max_gap, diag.gap);
      result.solver.max_value = std::max(result.solver.max_value, diag.value);
      if (!diag.certified) {
        ++result.solver.uncertified_rounds;
        if (cfg.strict)
          throw SolverFailure("solver gap " + std::to_string(diag.gap) +
                              " above tolerance at round " + std::to_string(t));
      }
    }
    diag.entropy = p.entropy();
    if (hooks && hooks->on_forecast) hooks->on_forecast(t);

    transcript->append(p, realized, y, diag);
    forecast::update_state(fstate, p, y);
  }
  result.commit_chain = chain;
  result.transcript = transcript;

  // cross-module consistency: the ledger must equal the recomputed bias
  result.bias = metrics::conditional_bias(*transcript, *family);
  if (cfg.horizon > 0) {
    const int d = grid->dim();
    for (std::size_t e = 0; e < family->size(); ++e)
      for (int i = 0; i < d; ++i) {
        const double ledger =
            fstate.cum_bias[e * d + i] / static_cast<double>(cfg.horizon);
        if (std::abs(ledger - result.bias.events[e].bias_vec[i]) > 1e-9)
          throw std::logic_error("bias ledger diverged from metrics");
      }
  }

  if (grid->free_dims() == 1) {
    result.cal_l1 = metrics::l1_calibration(*transcript);
    result.cal_l2 = metrics::l2_calibration(*transcript);
  }

  const auto built = build_agents(cfg, params, *grid, cover);
  for (const auto& b : built) {
    AgentOutcome out;
    out.id = b.spec.id;
    out.mode = b.spec.mode;
    out.utility = b.model.utility;
    out.actions = b.model.utility.action_count();
    out.lipschitz = b.model.utility.lipschitz();
    out.warnings = b.model.utility.validate_on(*grid);
    const agents::UtilityCover* c = b.cover ? b.cover.get() : cover.get();
    out.expected = agents::expected_swap_regret(*transcript, b.model, c);
    out.realized = agents::realized_swap_regret(*transcript, b.model, c);
    result.agent_results.push_back(std::move(out));
  }

  if (cfg.family.kind == "logistic-cover" && cfg.horizon > 0) {
    const auto scheme = events::BucketScheme::make(params.tau);
    for (const auto& b : built) {
      if (b.model.mode != agents::AgentModel::Mode::Logistic) continue;
      const auto& snapped = cover->snap(b.model.utility);
      for (int a = 0; a < b.model.utility.action_count(); ++a) {
        BucketCheckRow row;
        row.utility_id = snapped.id;
        row.action = a;
        row.check = metrics::weighted_bucket_bias(
            *transcript, *family, result.bias, snapped, a, params.eta, scheme);
        result.bucket_checks.push_back(std::move(row));
      }
    }
  }

  result.transcript_hash = transcript_hash_hex(*transcript);
  result.wall_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - t_start)
                       .count();

  if (!cfg.output.dir.empty()) emit_report(result, cfg.output.dir);
  return result;
}

RateStudyResult rate_study(ExperimentConfig base,
                           const std::vector<std::int64_t>& horizons) {
  for (std::size_t i = 1; i < horizons.size(); ++i)
    if (horizons[i] <= horizons[i - 1])
      throw ConfigError("horizons must be strictly increasing");
  if (base.epsilon > 0)
    throw ConfigError("rate study requires auto epsilon");

  RateStudyResult study;
  const int seeds = std::max(1, base.replications);
  base.output.dir.clear();  // individual runs stay in memory
  for (const auto T : horizons) {
    ExperimentConfig cfg = base;
    cfg.horizon = T;
    cfg.replications = 1;
    RateRow row;
    row.horizon = T;
    for (int r = 0; r < seeds; ++r) {
      cfg.master_seed = base.master_seed + static_cast<std::uint64_t>(r);
      const auto result = run_experiment(cfg);
      row.epsilon = result.params.epsilon;
      row.mean_max_bias += result.bias.max_bias_inf;
      double max_swap = 0;
      for (const auto& a : result.agent_results)
        max_swap = std::max(max_swap, a.expected.value);
      row.mean_max_swap += max_swap;
      row.max_gap = std::max(row.max_gap, result.solver.max_gap);
      row.max_value = std::max(row.max_value, result.solver.max_value);
    }
    row.mean_max_bias /= seeds;
    row.mean_max_swap /= seeds;
    study.rows.push_back(row);
  }

  // least-squares slope of ln(value) against ln(T)
  auto slope = [&](auto value_of) -> std::optional<double> {
    std::vector<std::pair<double, double>> pts;
    for (const auto& row : study.rows) {
      const double v = value_of(row);
      if (v > 0) pts.push_back({std::log(static_cast<double>(row.horizon)),
                                std::log(v)});
    }
    if (pts.size() < 2) return std::nullopt;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, yv] : pts) {
      sx += x;
      sy += yv;
      sxx += x * x;
      sxy += x * yv;
    }
    const double n = static_cast<double>(pts.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
  };
  study.bias_slope = slope([](const RateRow& r) { return r.mean_max_bias; });
  study.swap_slope = slope([](const RateRow& r) { return r.mean_max_swap; });
  return study;
}

LemmaReport reproduce_lemma(double delta, std::int64_t T) {
  const auto t_start = std::chrono::steady_clock::now();
  const auto sc = adv::lemma_counterexample_scenario(delta, T);

  auto family = std::make_shared<events::EventFamily>(
      events::best_response_events({sc.u, sc.u_tilde}, sc.grid,
                                   agents::TieRule::HighestIndex));
  auto adversary = adv::make_scripted(sc.outcomes, sc.forced_predictions);

  Transcript transcript(sc.grid);
  for (std::int64_t t = 1; t <= T; ++t) {
    const OutcomePoint y = adversary->next_outcome(transcript, t);
    const auto forced = *adversary->forced_prediction(t);
    transcript.append(ForecastDistribution::point_mass(forced), forced, y);
  }

  const auto bias = metrics::conditional_bias(transcript, *family);
  LemmaReport rep;
  rep.delta = delta;
  rep.horizon = T;
  rep.payoff_gap_bound = sc.payoff_gap_bound;
  auto bias_of = [&](const agents::UtilityFunction& u, int a) {
    const auto e = family->find(events::EventLabel::best_response(u.id, a));
    return e == events::EventFamily::npos
               ? 0.0
               : bias.events[e].conditional_inf(T);
  };
  for (int a = 0; a < 2; ++a) {
    rep.bias_u[a] = bias_of(sc.u, a);
    rep.bias_u_tilde[a] = bias_of(sc.u_tilde, a);
  }

  // payoff gap |u(a,y) - u~(a,y)| on sampled (a, y)
  auto rng = CounterRng::derive(20240521, "lemma-gap");
  for (int s = 0; s < 100; ++s) {
    const int a = static_cast<int>(rng.next_below(2));
    const OutcomePoint y({rng.next_unit(), 1.0});
    const double gap = std::abs(agents::utility_eval(sc.u, a, y) -
                                agents::utility_eval(sc.u_tilde, a, y));
    rep.payoff_gap_max_seen = std::max(rep.payoff_gap_max_seen, gap);
  }

  agents::AgentModel u_agent{sc.u, agents::AgentModel::Mode::Exact,
                             agents::TieRule::HighestIndex, 0, 0};
  agents::AgentModel ut_agent{sc.u_tilde, agents::AgentModel::Mode::Exact,
                              agents::TieRule::HighestIndex, 0, 0};
  rep.swap_regret_u = agents::expected_swap_regret(transcript, u_agent).value;
  rep.swap_regret_u_tilde =
      agents::expected_swap_regret(transcript, ut_agent).value;
  rep.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t_start)
                    .count();
  return rep;
}

}  // namespace swapcast::harness
