#pragma once

#include <optional>
#include <vector>

#include "swapcast/transcript.hpp"
#include "swapcast/utility.hpp"

namespace swapcast::agents {

// Behavioral model: exact best response, best response to the snapped
// utility, or logistic (quantal) response.
struct AgentModel {
  enum class Mode { Exact, Snapped, Logistic };
  UtilityFunction utility;
  Mode mode = Mode::Exact;
  TieRule tie_rule = TieRule::HighestIndex;
  double snap_delta = 0;  // Snapped
  double eta = 0;         // Logistic
};

// Distribution over the agent's actions given a realized prediction.
// Snapped mode needs the cover the utility snaps into; the best response is
// restricted to the agent's own actions.
std::vector<double> respond(const AgentModel& model, const OutcomePoint& y_hat,
                            const UtilityCover* cover = nullptr);

struct SwapRegretResult {
  double value = 0;                      // average per-round regret of phi*
  std::vector<int> best_swap;            // maximizing action modification rule
  std::vector<double> per_action_terms;  // unnormalized; value = sum / T
};

// Exact maximization over modification rules via independent per-source-action
// argmax. Action distributions are taken in expectation over each round's
// forecast support.
SwapRegretResult expected_swap_regret(const Transcript& transcript,
                                      const AgentModel& model,
                                      const UtilityCover* cover = nullptr);

// Same maximization, but the agent responds to the realized prediction.
SwapRegretResult realized_swap_regret(const Transcript& transcript,
                                      const AgentModel& model,
                                      const UtilityCover* cover = nullptr);

// Oracle: enumerates all |A|^|A| modification rules. |A| <= 5, T <= 1000.
SwapRegretResult brute_force_swap_regret(const Transcript& transcript,
                                         const AgentModel& model,
                                         const UtilityCover* cover = nullptr);

}  // namespace swapcast::agents
