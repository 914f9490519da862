#include <doctest.h>

#include <cmath>

#include "swapcast/forecaster.hpp"

using namespace swapcast;
using namespace swapcast::forecast;

namespace {

GridPtr net(int dim, double eps, bool lifted = false) {
  return std::make_shared<PredictionGrid>(
      PredictionGrid::epsilon_net(dim, eps, lifted));
}

events::FamilyPtr always_on_family(const GridPtr& grid) {
  auto fam = std::make_shared<events::EventFamily>("test", grid);
  FixedBitset bits(grid->size());
  for (std::size_t p = 0; p < grid->size(); ++p) bits.set(p);
  fam->add(std::move(bits), events::EventLabel::interval(0, 1));
  fam->finalize();
  return fam;
}

// Brute-force min of f over a coarse simplex mesh, for cross-checking the
// exact solve on tiny instances.
double brute_force_value(const ExpertWeights& q, const PredictionGrid& grid,
                         const events::EventFamily& family, int steps) {
  const std::size_t n = grid.size();
  REQUIRE(n == 3);
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= steps; ++i) {
    for (int j = 0; i + j <= steps; ++j) {
      const double p0 = static_cast<double>(i) / steps;
      const double p1 = static_cast<double>(j) / steps;
      const double p2 = 1.0 - p0 - p1;
      // f(p) = sum p A + max(0, -sum p s) per free coordinate
      double f = 0;
      for (int c = 0; c < grid.free_dims(); ++c) {
        double margin = 0, a = 0;
        const double p[3] = {p0, p1, p2};
        for (std::size_t y = 0; y < n; ++y) {
          double s = 0;
          for (std::size_t e = 0; e < family.size(); ++e)
            if (family.event(e).bits.test(y)) s += q.net(e, c);
          margin -= p[y] * s;
          a += p[y] * s * grid.point(y)[c];
        }
        f += a + std::max(0.0, margin);
      }
      best = std::min(best, f);
    }
  }
  return best;
}

}  // namespace

TEST_CASE("expert weights start uniform and follow the closed form") {
  const auto grid = net(1, 0.5);
  const auto fam = always_on_family(grid);
  auto st = ForecasterState::init(grid, fam, 16,
                                  CounterRng::derive(1, "f"));
  const auto q0 = compute_expert_weights(st);
  REQUIRE(q0.w.size() == 2);
  CHECK(q0.w[0] == doctest::Approx(0.5));
  CHECK(q0.w[1] == doctest::Approx(0.5));

  // single event, d = 1, cum_bias = -0.5, eta = 1:
  // weight(sigma=-1) = e^{0.25} / (e^{0.25} + e^{-0.25})
  st.learning_rate = 1.0;
  st.cum_bias[0] = -0.5;
  const auto q1 = compute_expert_weights(st);
  const double expect = std::exp(0.25) / (std::exp(0.25) + std::exp(-0.25));
  CHECK(q1.at(0, 0, 1) == doctest::Approx(expect));
  CHECK(q1.at(0, 0, 0) == doctest::Approx(1.0 - expect));

  st.cum_bias[0] = 0.0;
  const auto q2 = compute_expert_weights(st);
  CHECK(q2.w[0] == doctest::Approx(0.5));
}

TEST_CASE("update_state accumulates expected residuals") {
  const auto grid = net(1, 0.5);
  const auto fam = always_on_family(grid);
  auto st = ForecasterState::init(grid, fam, 8, CounterRng::derive(2, "f"));

  // point mass on the outcome: no residual
  update_state(st, ForecastDistribution::point_mass(1), OutcomePoint({0.5}));
  CHECK(st.cum_bias[0] == 0.0);
  CHECK(st.round == 1);

  // point mass on 0.5 against outcome 1
  update_state(st, ForecastDistribution::point_mass(1), OutcomePoint({1.0}));
  CHECK(st.cum_bias[0] == doctest::Approx(-0.5));

  // uniform on the endpoints against outcome 0.5: symmetric, cancels
  update_state(st, ForecastDistribution{{0, 2}, {0.5, 0.5}},
               OutcomePoint({0.5}));
  CHECK(st.cum_bias[0] == doctest::Approx(-0.5));
  CHECK(st.round == 3);
}

TEST_CASE("minmax solve on the single always-on event") {
  const auto grid = net(1, 0.5);
  const auto fam = always_on_family(grid);
  ExpertWeights q;
  q.event_count = 1;
  q.dim = 1;
  q.w = {1.0, 0.0};  // all mass on (E, i=0, sigma=+1)
  const auto sol = solve_round_minmax(q, *grid, *fam, 1e-6);
  CHECK(sol.certified);
  CHECK(sol.gap <= 1e-6);
  // optimal play is the point mass on grid point 0, value 0
  CHECK(sol.value == doctest::Approx(0.0));
  REQUIRE(sol.p.support.size() == 1);
  CHECK(sol.p.support[0] == 0);

  const double brute = brute_force_value(q, *grid, *fam, 40);
  CHECK(sol.value <= brute + 1e-9);
}

TEST_CASE("opposite signs cancel to a flat objective") {
  const auto grid = net(1, 0.5);
  const auto fam = always_on_family(grid);
  ExpertWeights q;
  q.event_count = 1;
  q.dim = 1;
  q.w = {0.5, 0.5};
  const auto sol = solve_round_minmax(q, *grid, *fam, 1e-9);
  CHECK(sol.value == doctest::Approx(0.0));
  CHECK(sol.gap <= 1e-9);
}

TEST_CASE("solver certificates hold on random states") {
  const auto grid = net(2, 0.25, true);
  auto fam = std::make_shared<events::EventFamily>(
      events::intervals_1d(grid));
  auto rng = CounterRng::derive(17, "solver");
  for (int trial = 0; trial < 50; ++trial) {
    auto st = ForecasterState::init(grid, fam, 128, CounterRng::derive(3, "f"));
    for (auto& c : st.cum_bias) c = (rng.next_unit() - 0.5) * 20.0;
    st.learning_rate = 0.05 + rng.next_unit();
    const auto q = compute_expert_weights(st);
    const double tol = grid->epsilon() / 4.0;

    const auto exact = solve_round_minmax(q, *grid, *fam, tol);
    CHECK(exact.certified);
    CHECK(exact.gap <= tol);
    CHECK(exact.value <= grid->epsilon() + tol);
    CHECK(exact.p.valid(grid->size()));

    // the no-regret route agrees within the two certificates
    const auto dyn = solve_round_minmax_dynamics(q, *grid, *fam, tol);
    CHECK(dyn.gap <= tol);
    CHECK(std::abs(dyn.value - exact.value) <= dyn.gap + exact.gap + 1e-12);
  }
}

TEST_CASE("forecast_round replays bit-for-bit under one seed") {
  const auto grid = net(1, 0.25);
  auto fam = std::make_shared<events::EventFamily>(events::intervals_1d(grid));
  auto run = [&](std::uint64_t seed) {
    auto st = ForecasterState::init(grid, fam, 32,
                                    CounterRng::derive(seed, "sample"));
    std::vector<std::pair<std::vector<double>, std::uint32_t>> trace;
    auto adv_rng = CounterRng::derive(99, "adv");
    for (int t = 0; t < 32; ++t) {
      auto round = forecast_round(st, grid->epsilon() / 4);
      trace.push_back({round.p.weights, round.realized});
      update_state(st, round.p, OutcomePoint({adv_rng.next_unit()}));
    }
    return trace;
  };
  const auto a = run(42), b = run(42), c = run(43);
  CHECK(a == b);
  // same outcomes, different sampling seed: identical p_t, realizations may
  // differ (updates use expected bias only)
  REQUIRE(c.size() == a.size());
  for (std::size_t t = 0; t < a.size(); ++t) CHECK(a[t].first == c[t].first);
}
