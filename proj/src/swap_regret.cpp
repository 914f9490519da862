#include "swapcast/swap_regret.hpp"

#include <cmath>
#include <stdexcept>

namespace swapcast::agents {

namespace {

// Best response among the first `limit` actions of u.
int restricted_best_response(const UtilityFunction& u, int limit,
                             const OutcomePoint& y, TieRule tie) {
  double vmax = -std::numeric_limits<double>::infinity();
  std::vector<double> vals(limit);
  for (int a = 0; a < limit; ++a) {
    vals[a] = utility_eval(u, a, y);
    vmax = std::max(vmax, vals[a]);
  }
  if (tie == TieRule::HighestIndex) {
    for (int a = limit - 1; a >= 0; --a)
      if (vmax - vals[a] <= 1e-12) return a;
  } else {
    for (int a = 0; a < limit; ++a)
      if (vmax - vals[a] <= 1e-12) return a;
  }
  return 0;
}

// Response matrix R[a][grid index] for a model over a grid. Evaluating once
// per grid point keeps regret passes linear in the transcript.
std::vector<std::vector<double>> response_matrix(const AgentModel& model,
                                                 const PredictionGrid& grid,
                                                 const UtilityCover* cover) {
  const int k = model.utility.action_count();
  std::vector<std::vector<double>> R(k, std::vector<double>(grid.size(), 0.0));
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const OutcomePoint y = lift_to(grid.outcome_at(p), model.utility.dim);
    const auto q = respond(model, y, cover);
    for (int a = 0; a < k; ++a) R[a][p] = q[a];
  }
  return R;
}

SwapRegretResult swap_regret_pass(const Transcript& transcript,
                                  const AgentModel& model,
                                  const UtilityCover* cover, bool expected) {
  const auto& grid = transcript.grid();
  const int k = model.utility.action_count();
  const auto R = response_matrix(model, grid, cover);
  const std::int64_t T = transcript.rounds();

  // M[a][a'] = sum_t w_t(a) * u(a', y_t)
  std::vector<std::vector<double>> M(k, std::vector<double>(k, 0.0));
  std::vector<double> w(k);
  for (std::int64_t t = 0; t < T; ++t) {
    const auto& row = transcript.round(t);
    if (expected) {
      std::fill(w.begin(), w.end(), 0.0);
      for (std::size_t s = 0; s < row.forecast.support.size(); ++s) {
        const auto idx = row.forecast.support[s];
        const double pw = row.forecast.weights[s];
        for (int a = 0; a < k; ++a) w[a] += pw * R[a][idx];
      }
    } else {
      for (int a = 0; a < k; ++a) w[a] = R[a][row.realized_index];
    }
    const OutcomePoint y = lift_to(row.outcome, model.utility.dim);
    for (int ap = 0; ap < k; ++ap) {
      const double u_ap = utility_eval(model.utility, ap, y);
      for (int a = 0; a < k; ++a) M[a][ap] += w[a] * u_ap;
    }
  }

  SwapRegretResult res;
  res.best_swap.resize(k);
  res.per_action_terms.resize(k);
  double total = 0;
  for (int a = 0; a < k; ++a) {
    int best = a;
    double gain = 0;  // phi(a) = a gives 0
    for (int ap = 0; ap < k; ++ap) {
      const double g = M[a][ap] - M[a][a];
      if (g > gain) {
        gain = g;
        best = ap;
      }
    }
    res.best_swap[a] = best;
    res.per_action_terms[a] = gain;
    total += gain;
  }
  res.value = T > 0 ? total / static_cast<double>(T) : 0.0;
  return res;
}

}  // namespace

std::vector<double> respond(const AgentModel& model, const OutcomePoint& y_hat,
                            const UtilityCover* cover) {
  const int k = model.utility.action_count();
  std::vector<double> q(k, 0.0);
  switch (model.mode) {
    case AgentModel::Mode::Exact:
      q[best_response(model.utility, y_hat, model.tie_rule)] = 1.0;
      break;
    case AgentModel::Mode::Snapped: {
      if (!cover)
        throw std::invalid_argument("snapped agent requires a utility cover");
      const UtilityFunction& snapped = cover->snap(model.utility);
      q[restricted_best_response(snapped, k, y_hat, model.tie_rule)] = 1.0;
      break;
    }
    case AgentModel::Mode::Logistic:
      q = logistic_response(model.utility, y_hat, model.eta);
      break;
  }
  return q;
}

SwapRegretResult expected_swap_regret(const Transcript& transcript,
                                      const AgentModel& model,
                                      const UtilityCover* cover) {
  return swap_regret_pass(transcript, model, cover, /*expected=*/true);
}

SwapRegretResult realized_swap_regret(const Transcript& transcript,
                                      const AgentModel& model,
                                      const UtilityCover* cover) {
  return swap_regret_pass(transcript, model, cover, /*expected=*/false);
}

SwapRegretResult brute_force_swap_regret(const Transcript& transcript,
                                         const AgentModel& model,
                                         const UtilityCover* cover) {
  const int k = model.utility.action_count();
  const std::int64_t T = transcript.rounds();
  if (k > 5) throw std::invalid_argument("brute force limited to |A| <= 5");
  if (T > 1000) throw std::invalid_argument("brute force limited to T <= 1000");

  std::size_t maps = 1;
  for (int a = 0; a < k; ++a) maps *= static_cast<std::size_t>(k);

  SwapRegretResult best;
  best.best_swap.assign(k, 0);
  best.per_action_terms.assign(k, 0.0);
  best.value = -std::numeric_limits<double>::infinity();
  std::vector<int> phi(k, 0);
  for (std::size_t m = 0; m < maps; ++m) {
    std::size_t code = m;
    for (int a = 0; a < k; ++a) {
      phi[a] = static_cast<int>(code % k);
      code /= k;
    }
    std::vector<double> terms(k, 0.0);
    for (std::int64_t t = 0; t < T; ++t) {
      const auto& row = transcript.round(t);
      const OutcomePoint y = lift_to(row.outcome, model.utility.dim);
      for (std::size_t s = 0; s < row.forecast.support.size(); ++s) {
        const OutcomePoint y_hat =
            lift_to(transcript.grid().outcome_at(row.forecast.support[s]),
                    model.utility.dim);
        const auto q = respond(model, y_hat, cover);
        const double pw = row.forecast.weights[s];
        for (int a = 0; a < k; ++a)
          terms[a] += pw * q[a] *
                      (utility_eval(model.utility, phi[a], y) -
                       utility_eval(model.utility, a, y));
      }
    }
    double total = 0;
    for (double x : terms) total += x;
    const double value = T > 0 ? total / static_cast<double>(T) : 0.0;
    if (value > best.value) {
      best.value = value;
      best.best_swap = phi;
      best.per_action_terms = terms;
    }
  }
  if (T == 0) best.value = 0;
  return best;
}

}  // namespace swapcast::agents
