#include "swapcast/adversary.hpp"

#include <cmath>
#include <stdexcept>

namespace swapcast::adv {

namespace {

class ConstantAdversary final : public Adversary {
 public:
  explicit ConstantAdversary(OutcomePoint y) : y_(std::move(y)) {}
  OutcomePoint next_outcome(const Transcript&, std::int64_t) override {
    return y_;
  }
  const char* kind() const override { return "constant"; }

 private:
  OutcomePoint y_;
};

class IidUniformCorners final : public Adversary {
 public:
  IidUniformCorners(GridPtr grid, CounterRng rng)
      : grid_(std::move(grid)), rng_(rng) {}
  OutcomePoint next_outcome(const Transcript&, std::int64_t) override {
    OutcomePoint y;
    y.coords.assign(grid_->dim(), 1.0);
    for (int i = 0; i < grid_->free_dims(); ++i)
      y.coords[i] = (rng_.next_u64() & 1ull) ? 1.0 : 0.0;
    return y;
  }
  const char* kind() const override { return "iid-uniform-corners"; }

 private:
  GridPtr grid_;
  CounterRng rng_;
};

class PeriodicAdversary final : public Adversary {
 public:
  explicit PeriodicAdversary(std::vector<OutcomePoint> seq)
      : seq_(std::move(seq)) {
    if (seq_.empty()) throw std::invalid_argument("periodic sequence empty");
  }
  OutcomePoint next_outcome(const Transcript&, std::int64_t t) override {
    return seq_[static_cast<std::size_t>((t - 1) % static_cast<std::int64_t>(seq_.size()))];
  }
  const char* kind() const override { return "periodic"; }

 private:
  std::vector<OutcomePoint> seq_;
};

class ScriptedAdversary final : public Adversary {
 public:
  ScriptedAdversary(std::vector<OutcomePoint> outcomes,
                    std::vector<std::uint32_t> forced)
      : outcomes_(std::move(outcomes)), forced_(std::move(forced)) {}
  OutcomePoint next_outcome(const Transcript&, std::int64_t t) override {
    if (t < 1 || t > static_cast<std::int64_t>(outcomes_.size()))
      throw std::out_of_range("script exhausted");
    return outcomes_[static_cast<std::size_t>(t - 1)];
  }
  std::optional<std::uint32_t> forced_prediction(std::int64_t t) const override {
    if (forced_.empty()) return std::nullopt;
    if (t < 1 || t > static_cast<std::int64_t>(forced_.size()))
      throw std::out_of_range("forced prediction script exhausted");
    return forced_[static_cast<std::size_t>(t - 1)];
  }
  const char* kind() const override { return "scripted"; }

 private:
  std::vector<OutcomePoint> outcomes_;
  std::vector<std::uint32_t> forced_;
};

class GreedyBiasAdversary final : public Adversary {
 public:
  GreedyBiasAdversary(GridPtr grid, events::FamilyPtr family)
      : grid_(std::move(grid)), family_(std::move(family)) {
    proxy_.assign(family_->size() * grid_->dim(), 0.0);
  }

  OutcomePoint next_outcome(const Transcript& history, std::int64_t) override {
    absorb(history);
    // Corner maximizing sum_{E,i} sign(proxy[E][i]) * (-y_i): per free
    // coordinate, play 0 when the accumulated bias sign is positive.
    const int d = grid_->dim();
    OutcomePoint y;
    y.coords.assign(d, 1.0);
    for (int i = 0; i < grid_->free_dims(); ++i) {
      double c = 0;
      for (std::size_t e = 0; e < family_->size(); ++e) {
        const double v = proxy_[e * d + i];
        if (v > 0)
          c += 1;
        else if (v < 0)
          c -= 1;
      }
      y.coords[i] = c > 0 ? 0.0 : 1.0;
    }
    return y;
  }
  const char* kind() const override { return "greedy-bias"; }

 private:
  // Replays rounds observed since the last call into the bias proxy.
  void absorb(const Transcript& history) {
    const int d = grid_->dim();
    for (; seen_ < history.rounds(); ++seen_) {
      const auto& row = history.round(static_cast<std::size_t>(seen_));
      for (std::size_t e = 0; e < family_->size(); ++e) {
        const auto& bits = family_->event(e).bits;
        for (std::size_t s = 0; s < row.forecast.support.size(); ++s) {
          const auto idx = row.forecast.support[s];
          if (!bits.test(idx)) continue;
          const double pw = row.forecast.weights[s];
          const auto pt = grid_->point(idx);
          for (int i = 0; i < d; ++i)
            proxy_[e * d + i] += pw * (pt[i] - row.outcome[i]);
        }
      }
    }
  }

  GridPtr grid_;
  events::FamilyPtr family_;
  std::vector<double> proxy_;
  std::int64_t seen_ = 0;
};

}  // namespace

std::unique_ptr<Adversary> make_constant(OutcomePoint y) {
  return std::make_unique<ConstantAdversary>(std::move(y));
}

std::unique_ptr<Adversary> make_iid_uniform_corners(GridPtr grid,
                                                    CounterRng rng) {
  return std::make_unique<IidUniformCorners>(std::move(grid), rng);
}

std::unique_ptr<Adversary> make_periodic(std::vector<OutcomePoint> sequence) {
  return std::make_unique<PeriodicAdversary>(std::move(sequence));
}

std::unique_ptr<Adversary> make_scripted(
    std::vector<OutcomePoint> outcomes,
    std::vector<std::uint32_t> forced_predictions) {
  return std::make_unique<ScriptedAdversary>(std::move(outcomes),
                                             std::move(forced_predictions));
}

std::unique_ptr<Adversary> make_greedy_bias(GridPtr grid,
                                            events::FamilyPtr family) {
  return std::make_unique<GreedyBiasAdversary>(std::move(grid),
                                               std::move(family));
}

LemmaScenario lemma_counterexample_scenario(double delta, std::int64_t T) {
  if (!(delta > 0.0) || !(delta < 0.5))
    throw std::invalid_argument("delta must lie in (0, 0.5)");
  if (T < 0 || T % 2 != 0)
    throw std::invalid_argument("horizon must be even");

  LemmaScenario sc;
  sc.delta = delta;
  sc.horizon = T;
  sc.payoff_gap_bound = 2.0 * delta / (1.0 + 2.0 * delta);
  // Covering radius of {0.5-delta, 0.5+delta} over [0,1] is 0.5-delta.
  sc.grid = std::make_shared<PredictionGrid>(PredictionGrid::from_axis_values(
      {{0.5 - delta, 0.5 + delta}}, /*lifted=*/true, /*epsilon=*/0.5 - delta));

  sc.forced_predictions.reserve(static_cast<std::size_t>(T));
  sc.outcomes.reserve(static_cast<std::size_t>(T));
  for (std::int64_t t = 1; t <= T; ++t) {
    const bool odd = (t % 2) == 1;
    sc.forced_predictions.push_back(odd ? 0u : 1u);  // 0.5-delta / 0.5+delta
    sc.outcomes.push_back(OutcomePoint({odd ? 1.0 : 0.0, 1.0}));
  }

  // u(a, y) = (a(y+delta) + (1-a)(1-y-delta) + delta) / (1+2delta):
  // best response thresholds at y = 0.5 - delta (ties to action 1).
  const double z = 1.0 / (1.0 + 2.0 * delta);
  sc.u.id = "u";
  sc.u.dim = 2;
  sc.u.vectors = {{-z, (1.0) * z}, {z, 2.0 * delta * z}};
  // u~(a, y) = a*y + (1-a)(1-y): thresholds at y = 0.5.
  sc.u_tilde.id = "u_tilde";
  sc.u_tilde.dim = 2;
  sc.u_tilde.vectors = {{-1.0, 1.0}, {1.0, 0.0}};
  return sc;
}

}  // namespace swapcast::adv
