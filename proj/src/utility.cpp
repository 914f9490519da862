#include "swapcast/utility.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace swapcast::agents {

namespace {
constexpr double kTieTol = 1e-12;
}

double UtilityFunction::lipschitz() const {
  double best = 0;
  for (const auto& v : vectors) {
    double l1 = 0;
    for (double x : v) l1 += std::abs(x);
    best = std::max(best, l1);
  }
  return best;
}

std::vector<std::string> UtilityFunction::validate_on(
    const PredictionGrid& grid) const {
  std::vector<std::string> warnings;
  for (int a = 0; a < action_count(); ++a)
    for (double x : vectors[a])
      if (x < 0.0 || x > 1.0) {
        warnings.push_back(id + ": vector entry outside [0,1] for action " +
                           std::to_string(a));
        break;
      }
  if (grid.dim() == dim) {
    for (int a = 0; a < action_count(); ++a) {
      for (std::size_t p = 0; p < grid.size(); ++p) {
        const double val = utility_eval(*this, a, grid.outcome_at(p));
        if (val < -kTieTol || val > 1.0 + kTieTol) {
          warnings.push_back(id + ": payoff outside [0,1] on grid for action " +
                             std::to_string(a));
          break;
        }
      }
    }
  }
  return warnings;
}

double utility_eval(const UtilityFunction& u, int action,
                    const OutcomePoint& y) {
  if (action < 0 || action >= u.action_count())
    throw std::out_of_range("action out of range");
  if (y.dim() != u.dim)
    throw std::invalid_argument("outcome dimension does not match utility");
  const auto& v = u.vectors[action];
  double s = 0;
  for (int i = 0; i < u.dim; ++i) s += v[i] * y[i];
  return s;
}

int best_response(const UtilityFunction& u, const OutcomePoint& y,
                  TieRule tie) {
  const int k = u.action_count();
  if (k == 0) throw std::invalid_argument("utility has no actions");
  std::vector<double> vals(k);
  double vmax = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < k; ++a) {
    vals[a] = utility_eval(u, a, y);
    vmax = std::max(vmax, vals[a]);
  }
  if (tie == TieRule::HighestIndex) {
    for (int a = k - 1; a >= 0; --a)
      if (vmax - vals[a] <= kTieTol) return a;
  } else {
    for (int a = 0; a < k; ++a)
      if (vmax - vals[a] <= kTieTol) return a;
  }
  return 0;  // unreachable
}

std::vector<double> logistic_response(const UtilityFunction& u,
                                      const OutcomePoint& y, double eta) {
  if (!(eta > 0)) throw std::invalid_argument("eta must be positive");
  const int k = u.action_count();
  std::vector<double> w(k);
  double m = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < k; ++a) {
    w[a] = eta * utility_eval(u, a, y);
    m = std::max(m, w[a]);
  }
  double z = 0;
  for (int a = 0; a < k; ++a) {
    w[a] = std::exp(w[a] - m);
    z += w[a];
  }
  for (int a = 0; a < k; ++a) w[a] /= z;
  return w;
}

std::size_t UtilityCover::per_axis() const {
  return static_cast<std::size_t>(std::floor(1.0 / delta + 1e-9)) + 1;
}

UtilityCover build_utility_cover(int k, int lifted_dim, double delta,
                                 std::size_t cap) {
  if (k < 1 || lifted_dim < 1) throw std::invalid_argument("k and dim >= 1");
  if (!(delta > 0.0) || delta > 1.0)
    throw std::invalid_argument("delta must lie in (0,1]");
  UtilityCover cover;
  cover.delta = delta;
  cover.k = k;
  cover.dim = lifted_dim;
  const std::vector<double> axis = PredictionGrid::net_axis_values(delta);
  const std::size_t P = axis.size();
  const std::size_t slots = static_cast<std::size_t>(k) * lifted_dim;
  double log_size = slots * std::log(static_cast<double>(P));
  if (log_size > std::log(static_cast<double>(cap)) + 1e-12) {
    throw std::length_error("utility cover would have " +
                            std::to_string(std::exp(log_size)) +
                            " elements, above cap " + std::to_string(cap));
  }
  std::size_t total = 1;
  for (std::size_t s = 0; s < slots; ++s) total *= P;

  cover.utilities.reserve(total);
  std::vector<std::size_t> digit(slots, 0);
  for (std::size_t n = 0; n < total; ++n) {
    UtilityFunction u;
    u.id = "u" + std::to_string(n);
    u.dim = lifted_dim;
    u.vectors.assign(k, std::vector<double>(lifted_dim));
    for (int a = 0; a < k; ++a)
      for (int c = 0; c < lifted_dim; ++c)
        u.vectors[a][c] = axis[digit[a * lifted_dim + c]];
    cover.utilities.push_back(std::move(u));
    for (auto s = slots; s-- > 0;) {  // odometer, slot 0 slowest
      if (++digit[s] < P) break;
      digit[s] = 0;
    }
  }
  return cover;
}

const UtilityFunction& UtilityCover::snap(const UtilityFunction& u) const {
  if (u.dim != dim || u.action_count() > k)
    throw std::invalid_argument("utility does not match cover parameters");
  const std::size_t P = per_axis();
  std::size_t full = 1;
  for (int s = 0; s < k * dim; ++s) full *= P;
  if (utilities.size() != full)
    throw std::invalid_argument("snap requires a fully enumerated cover");
  std::size_t idx = 0;
  for (int a = 0; a < k; ++a) {
    for (int c = 0; c < dim; ++c) {
      double v = 0.0;
      if (a < u.action_count()) v = u.vectors[a][c];
      // nearest multiple of delta, ties round up
      auto r = static_cast<long long>(std::floor(v / delta + 0.5 + 1e-12));
      r = std::max(0ll, std::min(r, static_cast<long long>(P) - 1));
      idx = idx * P + static_cast<std::size_t>(r);
    }
  }
  return utilities[idx];
}

OutcomePoint lift_to(const OutcomePoint& y, int target_dim) {
  if (y.dim() == target_dim) return y;
  if (y.dim() + 1 != target_dim)
    throw std::invalid_argument("cannot lift outcome to target dimension");
  OutcomePoint out = y;
  out.coords.push_back(1.0);
  return out;
}

}  // namespace swapcast::agents
