// Acceptance suite. Each criterion prints exactly one PASS/FAIL line; the
// process exits with the number of failed criteria. Thresholds are pinned
// in code; runtime budgets are checked with wall clocks.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "swapcast/harness.hpp"

using namespace swapcast;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
  void note(const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

int failures = 0;

void run_criterion(int id, const std::string& name,
                   const std::function<void(Outcome&)>& body) {
  Outcome out;
  const auto t0 = Clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.pass = false;
    out.note(std::string("exception: ") + e.what());
  }
  const double secs =
      std::chrono::duration<double>(Clock::now() - t0).count();
  if (!out.pass) ++failures;
  std::printf("[%s] criterion %d: %s (%.2fs)%s%s\n",
              out.pass ? "PASS" : "FAIL", id, name.c_str(), secs,
              out.detail.empty() ? "" : " -- ", out.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", x);
  return buf;
}

std::vector<harness::AgentSpec> ten_random_agents() {
  std::vector<harness::AgentSpec> agents;
  for (int i = 0; i < 10; ++i) {
    harness::AgentSpec a;
    a.id = "rand" + std::to_string(i);
    a.mode = "exact";
    a.random = true;
    a.actions = 2 + (i % 2);
    a.seed = 1000 + i;
    agents.push_back(a);
  }
  return agents;
}

struct SolverAudit {
  std::string run;
  double max_gap = 0, max_value = 0, gap_tol = 0, epsilon = 0;
  std::int64_t uncertified = 0;
};
std::vector<SolverAudit> solver_audits;

void audit(const std::string& run_name, const harness::ExperimentResult& r) {
  solver_audits.push_back({run_name, r.solver.max_gap, r.solver.max_value,
                           r.solver.gap_tol, r.params.epsilon,
                           r.solver.uncertified_rounds});
}

// ---------------------------------------------------------------------------
// criterion bodies

void c1_lemma(Outcome& out) {
  const auto rep = harness::reproduce_lemma(0.1, 1000);
  out.require(std::abs(rep.bias_u[0]) <= 1e-9 &&
                  std::abs(rep.bias_u[1]) <= 1e-9,
              "bias on E_u events not 0");
  out.require(std::abs(rep.bias_u_tilde[0] - 0.6) <= 1e-9 &&
                  std::abs(rep.bias_u_tilde[1] - 0.6) <= 1e-9,
              "bias on E_u~ events not 0.6");
  out.require(std::abs(rep.payoff_gap_bound - 1.0 / 6.0) <= 1e-12,
              "payoff gap bound is not 1/6");
  out.require(rep.payoff_gap_max_seen <= rep.payoff_gap_bound + 1e-12,
              "payoff gap exceeded the bound");
  out.require(std::abs(rep.swap_regret_u_tilde - 1.0) <= 1e-9,
              "u~ agent swap regret is not 1");
  out.require(rep.wall_ms < 1000.0, "runtime above 1s");
  out.note("u~ bias " + fmt(rep.bias_u_tilde[0]) + ", swap regret " +
           fmt(rep.swap_regret_u_tilde));
}

harness::ExperimentConfig c2_base() {
  harness::ExperimentConfig cfg;
  cfg.horizon = 4096;
  cfg.dim = 1;
  cfg.epsilon = 1.0 / 64.0;
  cfg.family.kind = "intervals";
  cfg.strict = true;
  cfg.master_seed = 1;
  cfg.agents = ten_random_agents();
  return cfg;
}

void c2_one_dim(Outcome& out) {
  const auto t0 = Clock::now();
  const char* adversaries[] = {"constant", "periodic", "iid-uniform-corners",
                               "greedy-bias"};
  double worst_bias_slack = std::numeric_limits<double>::infinity();
  double worst_swap = 0;
  for (const auto* adv : adversaries) {
    auto cfg = c2_base();
    cfg.adversary.kind = adv;
    if (std::string(adv) == "constant") cfg.adversary.y = {0.3};
    if (std::string(adv) == "periodic") cfg.adversary.sequence = {{0.0}, {1.0}};
    const auto r = harness::run_experiment(cfg);
    audit(std::string("c2/") + adv, r);
    out.require(r.family->size() == 2145,
                "family size is " + std::to_string(r.family->size()));

    const double T = 4096, eps = 1.0 / 64.0;
    const double logterm =
        std::log(1.0 * static_cast<double>(r.family->size()) * T);
    for (const auto& e : r.bias.events) {
      const double bound =
          5.0 * (logterm + std::sqrt(logterm * e.n_T)) / T + eps;
      worst_bias_slack = std::min(worst_bias_slack, bound - e.bias_inf);
      if (e.bias_inf > bound) {
        out.require(false, std::string(adv) + ": event bias " +
                               fmt(e.bias_inf) + " above bound " + fmt(bound));
        break;
      }
    }
    for (const auto& a : r.agent_results) {
      const double bound =
          10.0 * a.lipschitz * a.actions * std::sqrt(std::log(T) / T);
      worst_swap = std::max(worst_swap, a.expected.value);
      out.require(a.expected.value <= bound,
                  std::string(adv) + "/" + a.id + ": swap regret " +
                      fmt(a.expected.value) + " above bound " + fmt(bound));
    }
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  out.require(secs < 300.0, "runtime above 5 minutes");
  out.note("min bias slack " + fmt(worst_bias_slack) + ", max agent regret " +
           fmt(worst_swap));
}

void c3_rate(Outcome& out) {
  auto cfg = c2_base();
  cfg.epsilon = -1;  // auto: epsilon = 1/sqrt(T)
  cfg.strict = true;
  cfg.adversary.kind = "iid-uniform-corners";
  cfg.replications = 5;
  const auto study = harness::rate_study(cfg, {1024, 4096});
  for (const auto& row : study.rows)
    solver_audits.push_back({"c3/T" + std::to_string(row.horizon),
                             row.max_gap, row.max_value, row.epsilon / 4.0,
                             row.epsilon, 0});
  out.require(study.rows.size() == 2, "expected two horizons");
  const double lo = study.rows[0].mean_max_swap;
  const double hi = study.rows[1].mean_max_swap;
  out.require(lo > 1e-12, "degenerate regret at T=1024");
  const double ratio = hi / lo;
  out.require(ratio <= 0.65,
              "swap regret ratio " + fmt(ratio) + " above 0.65");
  out.note("regret " + fmt(lo) + " -> " + fmt(hi) + ", ratio " + fmt(ratio));
}

void c4_two_dim(Outcome& out) {
  const auto t0 = Clock::now();
  harness::ExperimentConfig cfg;
  cfg.horizon = 1024;
  cfg.dim = 2;
  cfg.epsilon = 0.2;  // 6x6 grid
  cfg.family.kind = "polygons";
  cfg.strict = true;
  cfg.master_seed = 1;
  cfg.adversary.kind = "iid-uniform-corners";
  for (int i = 0; i < 5; ++i) {
    harness::AgentSpec a;
    a.id = "agent" + std::to_string(i);
    a.mode = "exact";
    a.random = true;
    a.actions = 3;
    a.seed = 2000 + i;
    cfg.agents.push_back(a);
  }
  const auto r = harness::run_experiment(cfg);
  audit("c4", r);
  out.note("family size " + std::to_string(r.family->size()));

  const double T = 1024, eps = 0.2;
  const double logterm =
      std::log(2.0 * static_cast<double>(r.family->size()) * T);
  const double bias_bound = 5.0 * std::sqrt(logterm / T) + eps;
  out.require(r.bias.max_bias_inf <= bias_bound,
              "max bias " + fmt(r.bias.max_bias_inf) + " above bound " +
                  fmt(bias_bound));
  for (const auto& a : r.agent_results) {
    const double bound = 10.0 * a.lipschitz * a.actions *
                             std::sqrt(logterm / T) +
                         2.0 * a.lipschitz * a.actions * eps;
    out.require(a.expected.value <= bound,
                a.id + ": swap regret " + fmt(a.expected.value) +
                    " above bound " + fmt(bound));
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  out.require(secs < 600.0, "runtime above 10 minutes");
  out.note("max bias " + fmt(r.bias.max_bias_inf) + " vs bound " +
           fmt(bias_bound));
}

void c5_polygons(Outcome& out) {
  auto grid_m = [](int m) {
    return std::make_shared<PredictionGrid>(
        PredictionGrid::epsilon_net(2, 1.0 / (m - 1), false));
  };
  out.require(events::count_convex_closed_2d(*grid_m(2)) == 15,
              "m=2 count is not 15");
  const auto g3 = grid_m(3);
  out.require(events::count_convex_closed_2d(*g3) ==
                  events::polygon_subset_oracle(*g3),
              "m=3 enumerator != oracle");
  const auto g23 = std::make_shared<PredictionGrid>(
      PredictionGrid::from_axis_values({{0.0, 1.0}, {0.0, 0.5, 1.0}}, false,
                                       0.5));
  out.require(events::count_convex_closed_2d(*g23) ==
                  events::polygon_subset_oracle(*g23),
              "2x3 enumerator != oracle");

  const auto t0 = Clock::now();
  const auto m8 = events::count_convex_closed_2d(*grid_m(8), 100'000'000);
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  out.require(secs < 60.0, "m=8 enumeration took " + fmt(secs) + "s");
  out.note("m=8 count " + std::to_string(m8) + " in " + fmt(secs) + "s");
}

void c6_certificates(Outcome& out) {
  out.require(!solver_audits.empty(), "no solver audits collected");
  for (const auto& a : solver_audits) {
    out.require(a.max_gap <= a.gap_tol,
                a.run + ": gap " + fmt(a.max_gap) + " above tol " +
                    fmt(a.gap_tol));
    out.require(a.max_value <= a.epsilon + a.gap_tol,
                a.run + ": value " + fmt(a.max_value) + " above eps+tol");
    out.require(a.uncertified == 0, a.run + ": uncertified rounds");
  }
  double worst_gap = 0;
  for (const auto& a : solver_audits) worst_gap = std::max(worst_gap, a.max_gap);
  out.note(std::to_string(solver_audits.size()) + " audited runs, worst gap " +
           fmt(worst_gap));
}

// --- criterion 7 helpers ---------------------------------------------------

struct IPt {
  long long x, y;
};
long long icross(IPt o, IPt a, IPt b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// strict hull, counterclockwise; degenerate results have size 1 or 2
std::vector<IPt> ihull(std::vector<IPt> pts) {
  std::sort(pts.begin(), pts.end(), [](IPt a, IPt b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](IPt a, IPt b) { return a.x == b.x && a.y == b.y; }),
            pts.end());
  if (pts.size() <= 2) return pts;
  std::vector<IPt> h(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && icross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  const std::size_t lower = k + 1;
  for (std::size_t i = pts.size() - 1; i-- > 0;) {
    while (k >= lower && icross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

bool in_hull(const std::vector<IPt>& hull, IPt p) {
  if (hull.size() == 1) return hull[0].x == p.x && hull[0].y == p.y;
  if (hull.size() == 2) {
    const IPt d{hull[1].x - hull[0].x, hull[1].y - hull[0].y};
    const IPt r{p.x - hull[0].x, p.y - hull[0].y};
    if (d.x * r.y - d.y * r.x != 0) return false;
    const long long dot = d.x * r.x + d.y * r.y;
    return dot >= 0 && dot <= d.x * d.x + d.y * d.y;
  }
  for (std::size_t i = 0; i < hull.size(); ++i)
    if (icross(hull[i], hull[(i + 1) % hull.size()], p) < 0) return false;
  return true;
}

void c7_properties(Outcome& out) {
  auto rng = CounterRng::derive(777, "acceptance-properties");

  // logistic Lipschitz: |q_a(u1) - q_a(u2)| <= e^{2 eta delta} - 1
  for (int trial = 0; trial < 10'000; ++trial) {
    const int k = 2 + static_cast<int>(rng.next_below(3));
    agents::UtilityFunction u1, u2;
    u1.dim = u2.dim = 3;
    u1.vectors.assign(k, std::vector<double>(3));
    for (auto& v : u1.vectors)
      for (auto& x : v) x = rng.next_unit();
    u2 = u1;
    const double perturb = 0.2 * rng.next_unit();
    for (auto& v : u2.vectors)
      for (auto& x : v)
        x = std::clamp(x + perturb * (rng.next_unit() - 0.5), 0.0, 1.0);
    const OutcomePoint y({rng.next_unit(), rng.next_unit(), 1.0});
    const double eta = 0.1 + 5.0 * rng.next_unit();
    double delta = 0;
    for (int a = 0; a < k; ++a)
      delta = std::max(delta, std::abs(agents::utility_eval(u1, a, y) -
                                       agents::utility_eval(u2, a, y)));
    const auto q1 = agents::logistic_response(u1, y, eta);
    const auto q2 = agents::logistic_response(u2, y, eta);
    const double bound = std::exp(2.0 * eta * delta) - 1.0;
    for (int a = 0; a < k; ++a) {
      if (std::abs(q1[a] - q2[a]) > bound + 1e-9) {
        out.require(false, "logistic Lipschitz violated at trial " +
                               std::to_string(trial));
        return;
      }
    }
  }

  // logistic near-optimality: E_q[u] >= u(a*) - (ln|A|+1)/eta
  for (int trial = 0; trial < 10'000; ++trial) {
    const int k = 2 + static_cast<int>(rng.next_below(4));
    agents::UtilityFunction u;
    u.dim = 3;
    u.vectors.assign(k, std::vector<double>(3));
    for (auto& v : u.vectors)
      for (auto& x : v) x = rng.next_unit();
    const OutcomePoint y({rng.next_unit(), rng.next_unit(), 1.0});
    const double eta = 0.2 + 30.0 * rng.next_unit();
    const auto q = agents::logistic_response(u, y, eta);
    double expected = 0, best = -1e300;
    for (int a = 0; a < k; ++a) {
      const double ua = agents::utility_eval(u, a, y);
      expected += q[a] * ua;
      best = std::max(best, ua);
    }
    if (expected < best - (std::log(static_cast<double>(k)) + 1.0) / eta - 1e-9) {
      out.require(false, "logistic near-optimality violated at trial " +
                             std::to_string(trial));
      return;
    }
  }

  // snap quality: |u - snap(u)| <= delta (d+1) on the lifted box
  {
    const double deltas[] = {0.5, 0.25, 0.2};
    const auto cover_a = agents::build_utility_cover(2, 2, 0.5);
    const auto cover_b = agents::build_utility_cover(2, 2, 0.25);
    const auto cover_c = agents::build_utility_cover(2, 2, 0.2);
    const agents::UtilityCover* covers[] = {&cover_a, &cover_b, &cover_c};
    for (int trial = 0; trial < 10'000; ++trial) {
      const int ci = static_cast<int>(rng.next_below(3));
      agents::UtilityFunction u;
      u.dim = 2;
      u.vectors.assign(2, std::vector<double>(2));
      for (auto& v : u.vectors)
        for (auto& x : v) x = rng.next_unit();
      const auto& snapped = covers[ci]->snap(u);
      const OutcomePoint y({rng.next_unit(), 1.0});
      for (int a = 0; a < 2; ++a) {
        const double gap = std::abs(agents::utility_eval(u, a, y) -
                                    agents::utility_eval(snapped, a, y));
        if (gap > deltas[ci] * 2.0 + 1e-9) {
          out.require(false, "snap quality violated at trial " +
                                 std::to_string(trial));
          return;
        }
      }
    }
  }

  // best-response level sets are convex-closed on 1D and 2D grids
  for (int trial = 0; trial < 10'000; ++trial) {
    const bool two_d = (trial % 2) == 1;
    const int m0 = 3 + static_cast<int>(rng.next_below(4));
    const int m1 = two_d ? 3 + static_cast<int>(rng.next_below(3)) : 1;
    std::vector<std::vector<double>> axes;
    axes.push_back(PredictionGrid::net_axis_values(1.0 / (m0 - 1)));
    if (two_d) axes.push_back(PredictionGrid::net_axis_values(1.0 / (m1 - 1)));
    const auto grid = std::make_shared<PredictionGrid>(
        PredictionGrid::from_axis_values(axes, true, 1.0 / (m0 - 1)));
    const int k = 2 + static_cast<int>(rng.next_below(3));
    agents::UtilityFunction u;
    u.dim = grid->dim();
    u.vectors.assign(k, std::vector<double>(u.dim));
    for (auto& v : u.vectors)
      for (auto& x : v) x = 2.0 * rng.next_unit() - 1.0;

    std::vector<std::vector<IPt>> members(k);
    std::vector<std::size_t> ax(grid->free_dims());
    for (std::size_t p = 0; p < grid->size(); ++p) {
      grid->index_to_axes(p, ax);
      const int a = agents::best_response(u, grid->outcome_at(p));
      members[a].push_back({static_cast<long long>(ax[0]),
                            two_d ? static_cast<long long>(ax[1]) : 0});
    }
    for (int a = 0; a < k; ++a) {
      if (members[a].empty()) continue;
      const auto hull = ihull(members[a]);
      for (std::size_t p = 0; p < grid->size(); ++p) {
        grid->index_to_axes(p, ax);
        const IPt q{static_cast<long long>(ax[0]),
                    two_d ? static_cast<long long>(ax[1]) : 0};
        const bool inside = in_hull(hull, q);
        const bool member = agents::best_response(u, grid->outcome_at(p)) == a;
        if (inside && !member) {
          out.require(false, "best-response set not convex-closed at trial " +
                                 std::to_string(trial));
          return;
        }
      }
    }
  }

  // swap-regret maximizer equals brute force (covered again here with the
  // acceptance instance sizes |A| = 3, T = 8, 100 instances)
  {
    auto grid = std::make_shared<PredictionGrid>(
        PredictionGrid::epsilon_net(1, 0.25, false));
    for (int instance = 0; instance < 100; ++instance) {
      Transcript t(grid);
      for (int i = 0; i < 8; ++i) {
        const auto idx = static_cast<std::uint32_t>(rng.next_below(grid->size()));
        t.append(ForecastDistribution::point_mass(idx), idx,
                 OutcomePoint({rng.next_unit()}));
      }
      agents::UtilityFunction u;
      u.dim = 2;
      u.vectors.assign(3, std::vector<double>(2));
      for (auto& v : u.vectors)
        for (auto& x : v) x = rng.next_unit();
      agents::AgentModel model{u, agents::AgentModel::Mode::Exact,
                               agents::TieRule::HighestIndex, 0, 0};
      const auto fast = agents::expected_swap_regret(t, model);
      const auto brute = agents::brute_force_swap_regret(t, model);
      if (std::abs(fast.value - brute.value) > 1e-12) {
        out.require(false, "swap maximizer mismatch at instance " +
                               std::to_string(instance));
        return;
      }
    }
  }
  out.note("4 property suites at 10k cases plus 100 brute-force instances");
}

void c8_snapped(Outcome& out) {
  harness::ExperimentConfig cfg;
  cfg.horizon = 4096;
  cfg.dim = 1;
  cfg.epsilon = 1.0 / 64.0;
  cfg.family.kind = "br-cover";
  cfg.family.delta = 0.25;
  cfg.family.k = 2;
  cfg.strict = true;
  cfg.master_seed = 2;
  cfg.adversary.kind = "iid-uniform-corners";
  for (int i = 0; i < 5; ++i) {
    harness::AgentSpec a;
    a.id = "snap" + std::to_string(i);
    a.mode = "snapped";
    a.delta = 0.25;
    a.random = true;
    a.actions = 2;
    a.seed = 3000 + i;
    cfg.agents.push_back(a);
  }
  const auto r = harness::run_experiment(cfg);
  audit("c8", r);
  out.require(r.cover->utilities.size() <= 625,
              "cover larger than 625 utilities");
  const double T = 4096, d = 1, k = 2, delta = 0.25;
  double worst = 0;
  for (const auto& a : r.agent_results) {
    const double bound =
        10.0 * a.lipschitz *
            std::sqrt(a.actions * d * k * std::log(T * d * k) / T) +
        2.0 * delta * (d + 1);
    worst = std::max(worst, a.expected.value);
    out.require(a.expected.value <= bound,
                a.id + ": swap regret " + fmt(a.expected.value) +
                    " above bound " + fmt(bound));
  }
  out.note("cover " + std::to_string(r.cover->utilities.size()) +
           ", max snapped regret " + fmt(worst));
}

void c9_logistic(Outcome& out) {
  harness::ExperimentConfig cfg;
  cfg.horizon = 4096;
  cfg.dim = 1;
  cfg.epsilon = 1.0 / 64.0;
  cfg.family.kind = "logistic-cover";
  cfg.family.delta = 0.25;
  cfg.family.k = 2;
  cfg.family.eta = 32.0;
  cfg.family.tau = 0.25;
  cfg.strict = true;
  cfg.master_seed = 3;
  cfg.adversary.kind = "iid-uniform-corners";
  // three agents on the delta-grid (inside the cover), two off it
  const std::vector<std::vector<std::vector<double>>> inside = {
      {{0.25, 0.5}, {0.75, 0.0}},
      {{1.0, 0.0}, {0.0, 1.0}},
      {{0.5, 0.25}, {0.25, 0.25}}};
  for (std::size_t i = 0; i < inside.size(); ++i) {
    harness::AgentSpec a;
    a.id = "in" + std::to_string(i);
    a.mode = "logistic";
    a.eta = 32.0;
    a.vectors = inside[i];
    cfg.agents.push_back(a);
  }
  for (int i = 0; i < 2; ++i) {
    harness::AgentSpec a;
    a.id = "out" + std::to_string(i);
    a.mode = "logistic";
    a.eta = 32.0;
    a.random = true;
    a.actions = 2;
    a.seed = 4000 + i;
    cfg.agents.push_back(a);
  }
  const auto r = harness::run_experiment(cfg);
  audit("c9", r);

  const auto scheme = events::BucketScheme::make(0.25);
  const double eta = 32.0, tau = 0.25, dprime = 0.25 * 2.0;  // delta (d+1)
  double worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < r.agent_results.size(); ++i) {
    const auto& a = r.agent_results[i];
    const bool is_inside = i < inside.size();
    // alpha_max over the snapped utility's bucket events
    const auto& snapped = r.cover->snap(a.utility);
    double alpha_max = 0;
    for (int act = 0; act < 2; ++act)
      for (int b = 0; b < scheme.count; ++b) {
        const auto e = r.family->find(
            events::EventLabel::bucket(snapped.id, act, b));
        if (e != events::EventFamily::npos)
          alpha_max = std::max(alpha_max, r.bias.events[e].bias_inf);
      }
    double bound = (std::log(2.0) + 1.0) / eta +
                   2.0 * 2.0 * a.lipschitz * scheme.count * alpha_max +
                   2.0 * 2.0 * a.lipschitz * tau;
    if (!is_inside)
      bound += 2.0 * (std::exp(2.0 * eta * dprime) - 1.0) + 2.0 * dprime;
    worst_margin = std::min(worst_margin, bound - a.expected.value);
    out.require(a.expected.value <= bound,
                a.id + ": regret " + fmt(a.expected.value) + " above chain " +
                    fmt(bound));
  }

  // weighted bucket-bias inequality holds on every completed run
  out.require(!r.bucket_checks.empty(), "no bucket checks recorded");
  for (const auto& row : r.bucket_checks)
    out.require(row.check.holds,
                "weighted bucket bias bound failed for " + row.utility_id);
  out.note(std::to_string(r.bucket_checks.size()) +
           " bucket checks, min chain slack " + fmt(worst_margin));
}

void c10_metrics_units(Outcome& out) {
  auto grid = std::make_shared<PredictionGrid>(
      PredictionGrid::epsilon_net(1, 0.25, false));
  Transcript t(grid);
  for (int i = 0; i < 100; ++i)
    t.append(ForecastDistribution::point_mass(2), 2, OutcomePoint({1.0}));
  const double l1 = metrics::l1_calibration(t);
  const double l2 = metrics::l2_calibration(t);
  out.require(l1 == 50.0, "l1 calibration " + fmt(l1) + " != 50");
  out.require(l2 == 25.0, "l2 calibration " + fmt(l2) + " != 25");

  // identity modification rule scores exactly zero on any transcript
  auto rng = CounterRng::derive(55, "c10");
  Transcript t2(grid);
  for (int i = 0; i < 64; ++i) {
    const auto idx = static_cast<std::uint32_t>(rng.next_below(grid->size()));
    t2.append(ForecastDistribution::point_mass(idx), idx,
              OutcomePoint({rng.next_unit()}));
  }
  agents::UtilityFunction u;
  u.dim = 2;
  u.vectors = {{0.3, 0.2}, {0.6, 0.1}, {0.1, 0.4}};
  agents::AgentModel model{u, agents::AgentModel::Mode::Exact,
                           agents::TieRule::HighestIndex, 0, 0};
  for (const Transcript* tr : {&t, &t2}) {
    double identity_regret = 0;
    for (const auto& row : tr->rows()) {
      const auto y = agents::lift_to(row.outcome, 2);
      const auto q = agents::respond(model, agents::lift_to(
                                                tr->grid().outcome_at(
                                                    row.realized_index),
                                                2));
      for (int a = 0; a < 3; ++a)
        identity_regret += q[a] * (agents::utility_eval(u, a, y) -
                                   agents::utility_eval(u, a, y));
    }
    out.require(identity_regret == 0.0, "identity swap regret not zero");
  }
  // and the maximized swap regret is always >= the identity's zero
  out.require(agents::expected_swap_regret(t2, model).value >= 0.0,
              "maximized regret below zero");
}

}  // namespace

int main() {
  std::printf("swapcast acceptance suite\n");
  run_criterion(1, "counterexample reproduction", c1_lemma);
  run_criterion(2, "1d interval family at T=4096", c2_one_dim);
  run_criterion(3, "sqrt-rate check 1024 vs 4096", c3_rate);
  run_criterion(4, "2d convex-closed smoke at 6x6", c4_two_dim);
  run_criterion(5, "polygon enumeration counts", c5_polygons);
  run_criterion(6, "solver certificates", c6_certificates);
  run_criterion(7, "property suites", c7_properties);
  run_criterion(8, "snapped-utility cover run", c8_snapped);
  run_criterion(9, "logistic bucket run", c9_logistic);
  run_criterion(10, "metrics unit values", c10_metrics_units);
  std::printf("%d of 10 criteria passed\n", 10 - failures);
  return failures;
}
