#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "swapcast/events.hpp"
#include "swapcast/grid.hpp"
#include "swapcast/rng.hpp"
#include "swapcast/transcript.hpp"
#include "swapcast/utility.hpp"

namespace swapcast::adv {

// Outcome generators. The protocol guarantee is structural: next_outcome is
// called with the history through round t-1 and never sees p_t or the
// learner's round-t randomness.
class Adversary {
 public:
  virtual ~Adversary() = default;
  // t is 1-based; history holds rounds 1..t-1.
  virtual OutcomePoint next_outcome(const Transcript& history, std::int64_t t) = 0;
  // Scripted scenarios may also force the prediction (bypassing the
  // forecaster); everyone else returns nullopt.
  virtual std::optional<std::uint32_t> forced_prediction(std::int64_t t) const {
    (void)t;
    return std::nullopt;
  }
  virtual const char* kind() const = 0;
};

std::unique_ptr<Adversary> make_constant(OutcomePoint y);
std::unique_ptr<Adversary> make_iid_uniform_corners(GridPtr grid, CounterRng rng);
std::unique_ptr<Adversary> make_periodic(std::vector<OutcomePoint> sequence);
std::unique_ptr<Adversary> make_scripted(
    std::vector<OutcomePoint> outcomes,
    std::vector<std::uint32_t> forced_predictions = {});
// Heuristic stress adversary (not from the protocol analysis): picks the box
// corner that pushes the historically accumulated bias further.
std::unique_ptr<Adversary> make_greedy_bias(GridPtr grid, events::FamilyPtr family);

// The discontinuity counterexample: forced predictions alternating
// 0.5-delta / 0.5+delta, outcomes alternating 1 / 0, and the two threshold
// utilities whose best-response events disagree by a constant.
struct LemmaScenario {
  double delta = 0;
  std::int64_t horizon = 0;
  GridPtr grid;  // lifted 2-dim grid over {0.5-delta, 0.5+delta}
  std::vector<std::uint32_t> forced_predictions;
  std::vector<OutcomePoint> outcomes;
  agents::UtilityFunction u;        // threshold at 0.5 - delta
  agents::UtilityFunction u_tilde;  // threshold at 0.5
  double payoff_gap_bound = 0;      // 2*delta / (1 + 2*delta)
};

LemmaScenario lemma_counterexample_scenario(double delta, std::int64_t T);

}  // namespace swapcast::adv
