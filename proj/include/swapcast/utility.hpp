#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "swapcast/grid.hpp"

namespace swapcast::agents {

enum class TieRule { HighestIndex, LowestIndex };

// Linear utility on the lifted space: u(a, y) = <v_a, y> with the affine
// constant stored in the lift coordinate. Entries are expected in [0,1];
// out-of-range entries or payoffs are reported as warnings, not errors, so
// the counterexample utilities stay representable.
struct UtilityFunction {
  std::string id;
  int dim = 0;                               // lifted dimension (d+1)
  std::vector<std::vector<double>> vectors;  // [action][dim]

  int action_count() const { return static_cast<int>(vectors.size()); }
  // max_a ||v_a||_1; an upper bound on the l-inf Lipschitz constant.
  double lipschitz() const;
  std::vector<std::string> validate_on(const PredictionGrid& grid) const;
};

double utility_eval(const UtilityFunction& u, int action, const OutcomePoint& y);
int best_response(const UtilityFunction& u, const OutcomePoint& y,
                  TieRule tie = TieRule::HighestIndex);
// Softmax weights exp(eta*u(a,y)) / sum, computed with max subtraction.
std::vector<double> logistic_response(const UtilityFunction& u,
                                      const OutcomePoint& y, double eta);

// Full enumeration of k-tuples of vectors over the delta-grid {0, delta, ...,
// 1} per coordinate, in canonical odometer order with stable ids.
struct UtilityCover {
  double delta = 0;
  int k = 0;
  int dim = 0;  // lifted dimension
  std::vector<UtilityFunction> utilities;

  std::size_t per_axis() const;
  // Cover element nearest to u (per-coordinate rounding, ties round up).
  const UtilityFunction& snap(const UtilityFunction& u) const;
};

UtilityCover build_utility_cover(int k, int lifted_dim, double delta,
                                 std::size_t cap = 10'000'000);

inline const UtilityFunction& snap_utility(const UtilityFunction& u,
                                           const UtilityCover& cover) {
  return cover.snap(u);
}

// Extends y with the lift coordinate when the utility lives one dimension up.
OutcomePoint lift_to(const OutcomePoint& y, int target_dim);

}  // namespace swapcast::agents
