#include "swapcast/forecaster.hpp"

#include <cmath>
#include <stdexcept>

namespace swapcast::forecast {

double ForecasterState::default_learning_rate(std::size_t expert_count,
                                              std::int64_t horizon) {
  if (horizon <= 0) return 1.0;
  const double n = std::max<std::size_t>(expert_count, 2);
  return std::sqrt(8.0 * std::log(n) / static_cast<double>(horizon));
}

ForecasterState ForecasterState::init(GridPtr grid, events::FamilyPtr family,
                                      std::int64_t horizon,
                                      CounterRng sampling_rng,
                                      double learning_rate_override) {
  ForecasterState st;
  st.grid = std::move(grid);
  st.family = std::move(family);
  if (st.family->size() == 0)
    throw std::invalid_argument("forecaster needs a nonempty event family");
  const std::size_t experts =
      2 * static_cast<std::size_t>(st.grid->dim()) * st.family->size();
  st.learning_rate = learning_rate_override > 0
                         ? learning_rate_override
                         : default_learning_rate(experts, horizon);
  st.cum_bias.assign(st.family->size() * st.grid->dim(), 0.0);
  st.rng = sampling_rng;
  return st;
}

ExpertWeights compute_expert_weights(const ForecasterState& state) {
  const int d = state.grid->dim();
  const std::size_t m = state.family->size();
  ExpertWeights q;
  q.event_count = m;
  q.dim = d;
  q.w.resize(2 * m * static_cast<std::size_t>(d));

  // exponent (eta/2) * sigma * cum_bias; max subtraction keeps exps bounded.
  const double half_eta = 0.5 * state.learning_rate;
  double amax = 0;
  for (double c : state.cum_bias) amax = std::max(amax, std::abs(c));
  const double shift = half_eta * amax;

  double total = 0;
  for (std::size_t e = 0; e < m; ++e) {
    for (int i = 0; i < d; ++i) {
      const double x = half_eta * state.cum_bias[e * d + i];
      const double wp = std::exp(x - shift);
      const double wm = std::exp(-x - shift);
      q.w[e * 2 * d + i * 2] = wp;
      q.w[e * 2 * d + i * 2 + 1] = wm;
      total += wp + wm;
    }
  }
  for (double& x : q.w) x /= total;
  return q;
}

RoundForecast forecast_round(ForecasterState& state, double gap_tol) {
  RoundForecast out;
  const ExpertWeights q = compute_expert_weights(state);
  out.diag = solve_round_minmax(q, *state.grid, *state.family, gap_tol);
  out.p = out.diag.p;
  out.realized = out.p.sample(state.rng.next_unit());
  return out;
}

void update_state(ForecasterState& state, const ForecastDistribution& p,
                  const OutcomePoint& y) {
  const int d = state.grid->dim();
  if (y.dim() != d)
    throw std::invalid_argument("outcome dimension does not match grid");
  const auto& fam = *state.family;
  for (std::size_t e = 0; e < fam.size(); ++e) {
    const auto& bits = fam.event(e).bits;
    for (std::size_t s = 0; s < p.support.size(); ++s) {
      const std::uint32_t idx = p.support[s];
      if (!bits.test(idx)) continue;
      const double pw = p.weights[s];
      const auto pt = state.grid->point(idx);
      for (int i = 0; i < d; ++i)
        state.cum_bias[e * d + i] += pw * (pt[i] - y[i]);
    }
  }
  ++state.round;
}

}  // namespace swapcast::forecast
