#pragma once

#include <cstdint>
#include <vector>

#include "swapcast/events.hpp"
#include "swapcast/grid.hpp"
#include "swapcast/rng.hpp"
#include "swapcast/transcript.hpp"

namespace swapcast::forecast {

// Distribution over (event, coordinate, sign) experts. Layout:
// [e * 2d + i * 2 + s] with s = 0 for sigma=+1 and s = 1 for sigma=-1.
struct ExpertWeights {
  std::size_t event_count = 0;
  int dim = 0;
  std::vector<double> w;

  double at(std::size_t e, int i, int sign_idx) const {
    return w[e * 2 * dim + static_cast<std::size_t>(i) * 2 + sign_idx];
  }
  // q(e,i,+1) - q(e,i,-1), the net signed mass on a ledger cell.
  double net(std::size_t e, int i) const {
    const std::size_t base = e * 2 * dim + static_cast<std::size_t>(i) * 2;
    return w[base] - w[base + 1];
  }
};

// Ledger state of the unbiased-prediction algorithm: cumulative expected
// bias per (event, coordinate), exponential-weights learning rate, and the
// sampling stream. Identical seeds and inputs replay bit-for-bit.
struct ForecasterState {
  GridPtr grid;
  events::FamilyPtr family;
  double learning_rate = 0;
  std::int64_t round = 0;                // completed rounds
  std::vector<double> cum_bias;          // [e * dim + i]
  CounterRng rng;

  static double default_learning_rate(std::size_t expert_count,
                                      std::int64_t horizon);
  static ForecasterState init(GridPtr grid, events::FamilyPtr family,
                              std::int64_t horizon, CounterRng sampling_rng,
                              double learning_rate_override = 0);
};

ExpertWeights compute_expert_weights(const ForecasterState& state);

struct MinmaxSolution {
  ForecastDistribution p;
  double value = 0;   // objective f(p) of the returned distribution
  double gap = 0;     // certified duality gap
  int iterations = 0;
  bool certified = false;  // gap <= gap_tol
};

// Solves p_t = argmin_p max_y E[sum q(E,i,sigma) sigma E(y_hat)(y_hat_i-y_i)]
// over the grid simplex. The inner max decomposes per free coordinate into
// max(0, .) terms; the resulting piecewise-linear program is solved exactly
// (see minmax_solver.cpp), with no-regret dynamics as fallback. The returned
// gap is always a valid weak-duality certificate.
MinmaxSolution solve_round_minmax(const ExpertWeights& q,
                                  const PredictionGrid& grid,
                                  const events::EventFamily& family,
                                  double gap_tol);

// No-regret route: exponential weights for the p player against a
// best-responding box player, averaged iterates, computable duality gap.
// Used as fallback and as an independent cross-check of the exact solver.
MinmaxSolution solve_round_minmax_dynamics(const ExpertWeights& q,
                                           const PredictionGrid& grid,
                                           const events::EventFamily& family,
                                           double gap_tol);

struct RoundForecast {
  ForecastDistribution p;
  std::uint32_t realized = 0;
  MinmaxSolution diag;
};

RoundForecast forecast_round(ForecasterState& state, double gap_tol);

// cum_bias[E][i] += sum_{y_hat in supp p} p(y_hat) E(y_hat) (y_hat_i - y_i),
// round += 1. Expected over the forecast support, never the realized sample.
void update_state(ForecasterState& state, const ForecastDistribution& p,
                  const OutcomePoint& y);

}  // namespace swapcast::forecast
