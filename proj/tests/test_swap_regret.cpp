#include <doctest.h>

#include <cmath>

#include "swapcast/rng.hpp"
#include "swapcast/swap_regret.hpp"

using namespace swapcast;
using namespace swapcast::agents;

namespace {

UtilityFunction u_tilde() {
  UtilityFunction u;
  u.id = "ut";
  u.dim = 2;
  u.vectors = {{-1.0, 1.0}, {1.0, 0.0}};
  return u;
}

AgentModel exact_agent(UtilityFunction u) {
  return {std::move(u), AgentModel::Mode::Exact, TieRule::HighestIndex, 0, 0};
}

// Direct evaluation of Reg(u, phi) for one modification rule; the test-side
// oracle for the identity-map property.
double regret_of(const Transcript& t, const AgentModel& model,
                 const std::vector<int>& phi) {
  double total = 0;
  for (const auto& row : t.rows()) {
    const auto y = lift_to(row.outcome, model.utility.dim);
    for (std::size_t s = 0; s < row.forecast.support.size(); ++s) {
      const auto y_hat = lift_to(
          t.grid().outcome_at(row.forecast.support[s]), model.utility.dim);
      const auto q = respond(model, y_hat);
      for (int a = 0; a < model.utility.action_count(); ++a)
        total += row.forecast.weights[s] * q[a] *
                 (utility_eval(model.utility, phi[a], y) -
                  utility_eval(model.utility, a, y));
    }
  }
  return t.rounds() > 0 ? total / static_cast<double>(t.rounds()) : 0.0;
}

Transcript random_transcript(const GridPtr& grid, std::int64_t T,
                             CounterRng& rng) {
  Transcript t(grid);
  for (std::int64_t i = 0; i < T; ++i) {
    // random sparse forecast over 1-3 support points
    const int k = 1 + static_cast<int>(rng.next_below(3));
    std::vector<std::uint32_t> support;
    while (static_cast<int>(support.size()) < k) {
      const auto idx = static_cast<std::uint32_t>(rng.next_below(grid->size()));
      if (std::find(support.begin(), support.end(), idx) == support.end())
        support.push_back(idx);
    }
    std::sort(support.begin(), support.end());
    std::vector<double> w(support.size());
    double z = 0;
    for (auto& x : w) {
      x = 0.05 + rng.next_unit();
      z += x;
    }
    for (auto& x : w) x /= z;
    ForecastDistribution f{support, w};
    const auto realized = f.sample(rng.next_unit());
    OutcomePoint y({rng.next_unit()});
    t.append(std::move(f), realized, std::move(y));
  }
  return t;
}

}  // namespace

TEST_CASE("two-round hand example has swap regret one") {
  auto grid = std::make_shared<PredictionGrid>(
      PredictionGrid::epsilon_net(1, 1.0, false));
  Transcript t(grid);
  // forecast 0 then 1, outcomes 1 then 0: the u~ agent plays 0 then 1 and
  // earns nothing; swapping both actions earns 1 every round
  t.append(ForecastDistribution::point_mass(0), 0, OutcomePoint({1.0}));
  t.append(ForecastDistribution::point_mass(1), 1, OutcomePoint({0.0}));
  const auto res = expected_swap_regret(t, exact_agent(u_tilde()));
  CHECK(res.value == doctest::Approx(1.0));
  CHECK(res.best_swap == std::vector<int>{1, 0});

  const auto brute = brute_force_swap_regret(t, exact_agent(u_tilde()));
  CHECK(brute.value == doctest::Approx(res.value));
  CHECK(brute.best_swap == res.best_swap);
}

TEST_CASE("identity modification rule has zero regret") {
  auto grid = std::make_shared<PredictionGrid>(
      PredictionGrid::epsilon_net(1, 0.25, false));
  auto rng = CounterRng::derive(5, "identity");
  const auto t = random_transcript(grid, 40, rng);
  const auto model = exact_agent(u_tilde());
  CHECK(regret_of(t, model, {0, 1}) == 0.0);
  const auto res = expected_swap_regret(t, model);
  CHECK(res.value >= 0.0);
}

TEST_CASE("single-action agents have zero swap regret") {
  auto grid = std::make_shared<PredictionGrid>(
      PredictionGrid::epsilon_net(1, 0.5, false));
  Transcript t(grid);
  t.append(ForecastDistribution::point_mass(1), 1, OutcomePoint({0.0}));
  UtilityFunction u;
  u.dim = 2;
  u.vectors = {{0.5, 0.5}};
  const auto res = brute_force_swap_regret(t, exact_agent(u));
  CHECK(res.value == 0.0);
}

TEST_CASE("expected maximization matches the brute-force oracle") {
  auto grid = std::make_shared<PredictionGrid>(
      PredictionGrid::epsilon_net(1, 0.25, false));
  auto rng = CounterRng::derive(7, "brute");
  for (int instance = 0; instance < 100; ++instance) {
    const auto t = random_transcript(grid, 8, rng);
    UtilityFunction u;
    u.dim = 2;
    u.vectors.assign(3, std::vector<double>(2));
    for (auto& v : u.vectors)
      for (auto& x : v) x = rng.next_unit();
    AgentModel model = exact_agent(u);
    if (instance % 3 == 0) {
      model.mode = AgentModel::Mode::Logistic;
      model.eta = 0.5 + 8 * rng.next_unit();
    }
    const auto fast = expected_swap_regret(t, model);
    const auto brute = brute_force_swap_regret(t, model);
    CHECK(std::abs(fast.value - brute.value) <= 1e-12);
    // the maximizer itself may differ under ties; its value may not
    CHECK(std::abs(regret_of(t, model, fast.best_swap) - fast.value) <= 1e-12);
  }
}

TEST_CASE("brute force enforces its size limits") {
  auto grid = std::make_shared<PredictionGrid>(
      PredictionGrid::epsilon_net(1, 0.5, false));
  Transcript t(grid);
  UtilityFunction u;
  u.dim = 2;
  u.vectors.assign(6, std::vector<double>{0.1, 0.1});
  CHECK_THROWS_AS(brute_force_swap_regret(t, exact_agent(u)),
                  std::invalid_argument);
}

TEST_CASE("realized and expected regret agree on point-mass forecasts") {
  auto grid = std::make_shared<PredictionGrid>(
      PredictionGrid::epsilon_net(1, 0.25, false));
  Transcript t(grid);
  auto rng = CounterRng::derive(11, "pm");
  for (int i = 0; i < 20; ++i) {
    const auto idx = static_cast<std::uint32_t>(rng.next_below(grid->size()));
    t.append(ForecastDistribution::point_mass(idx), idx,
             OutcomePoint({rng.next_unit()}));
  }
  const auto model = exact_agent(u_tilde());
  CHECK(expected_swap_regret(t, model).value ==
        doctest::Approx(realized_swap_regret(t, model).value));
}
