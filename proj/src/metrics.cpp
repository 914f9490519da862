#include "swapcast/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace swapcast::metrics {

BiasReport conditional_bias(const Transcript& transcript,
                            const events::EventFamily& family) {
  if (family.grid_ptr().get() != &transcript.grid())
    throw std::invalid_argument("family grid does not match transcript grid");
  const int d = transcript.grid().dim();
  const std::int64_t T = transcript.rounds();
  BiasReport report;
  report.horizon = T;
  report.events.resize(family.size());
  for (auto& e : report.events) {
    e.bias_vec.assign(d, 0.0);
    e.bias_vec_realized.assign(d, 0.0);
  }

  for (std::int64_t t = 0; t < T; ++t) {
    const auto& row = transcript.round(static_cast<std::size_t>(t));
    for (std::size_t e = 0; e < family.size(); ++e) {
      const auto& bits = family.event(e).bits;
      auto& acc = report.events[e];
      for (std::size_t s = 0; s < row.forecast.support.size(); ++s) {
        const auto idx = row.forecast.support[s];
        if (!bits.test(idx)) continue;
        const double pw = row.forecast.weights[s];
        acc.n_T += pw;
        const auto pt = transcript.grid().point(idx);
        for (int i = 0; i < d; ++i)
          acc.bias_vec[i] += pw * (pt[i] - row.outcome[i]);
      }
      if (bits.test(row.realized_index)) {
        acc.n_T_realized += 1.0;
        const auto pt = transcript.grid().point(row.realized_index);
        for (int i = 0; i < d; ++i)
          acc.bias_vec_realized[i] += pt[i] - row.outcome[i];
      }
    }
  }

  for (auto& e : report.events) {
    for (int i = 0; i < d; ++i) {
      if (T > 0) {
        e.bias_vec[i] /= static_cast<double>(T);
        e.bias_vec_realized[i] /= static_cast<double>(T);
      }
      e.bias_inf = std::max(e.bias_inf, std::abs(e.bias_vec[i]));
      e.bias_inf_realized =
          std::max(e.bias_inf_realized, std::abs(e.bias_vec_realized[i]));
    }
    report.max_bias_inf = std::max(report.max_bias_inf, e.bias_inf);
    report.max_bias_inf_realized =
        std::max(report.max_bias_inf_realized, e.bias_inf_realized);
  }
  return report;
}

namespace {

double calibration(const Transcript& transcript, bool squared) {
  const auto& grid = transcript.grid();
  if (grid.free_dims() != 1)
    throw std::invalid_argument("calibration needs a one-free-dim transcript");
  // group rounds by the realized predicted value
  std::map<double, std::pair<double, double>> groups;  // value -> (count, sum y)
  for (const auto& row : transcript.rows()) {
    const double pred = grid.point(row.realized_index)[0];
    auto& g = groups[pred];
    g.first += 1.0;
    g.second += row.outcome[0];
  }
  double err = 0;
  for (const auto& [pred, g] : groups) {
    const double avg = g.second / g.first;
    const double gap = std::abs(pred - avg);
    err += g.first * (squared ? gap * gap : gap);
  }
  return err;
}

}  // namespace

double l1_calibration(const Transcript& transcript) {
  return calibration(transcript, /*squared=*/false);
}

double l2_calibration(const Transcript& transcript) {
  return calibration(transcript, /*squared=*/true);
}

WeightedBucketBias weighted_bucket_bias(const Transcript& transcript,
                                        const events::EventFamily& family,
                                        const agents::UtilityFunction& u,
                                        int action, double eta,
                                        const events::BucketScheme& scheme) {
  return weighted_bucket_bias(transcript, family,
                              conditional_bias(transcript, family), u, action,
                              eta, scheme);
}

WeightedBucketBias weighted_bucket_bias(const Transcript& transcript,
                                        const events::EventFamily& family,
                                        const BiasReport& report,
                                        const agents::UtilityFunction& u,
                                        int action, double eta,
                                        const events::BucketScheme& scheme) {
  const auto& grid = transcript.grid();
  if (u.dim != grid.dim())
    throw std::invalid_argument("utility dimension does not match grid");
  if (action < 0 || action >= u.action_count())
    throw std::out_of_range("action out of range");
  const int d = grid.dim();
  const std::int64_t T = transcript.rounds();

  // q_a(u, y_hat) per grid point; the bucket events partition the grid, so
  // the i-sum collapses and the weighted bias is a single expected sum.
  std::vector<double> qa(grid.size());
  for (std::size_t p = 0; p < grid.size(); ++p)
    qa[p] = agents::logistic_response(u, grid.outcome_at(p), eta)[action];

  WeightedBucketBias out;
  out.bias_vec.assign(d, 0.0);
  for (const auto& row : transcript.rows()) {
    for (std::size_t s = 0; s < row.forecast.support.size(); ++s) {
      const auto idx = row.forecast.support[s];
      const double w = row.forecast.weights[s] * qa[idx];
      const auto pt = grid.point(idx);
      for (int i = 0; i < d; ++i)
        out.bias_vec[i] += w * (pt[i] - row.outcome[i]);
    }
  }
  for (int i = 0; i < d; ++i) {
    if (T > 0) out.bias_vec[i] /= static_cast<double>(T);
    out.linf = std::max(out.linf, std::abs(out.bias_vec[i]));
  }

  // measured alpha_max over this utility's bucket events (dropped empties
  // have zero bias and do not contribute)
  double alpha_max = 0;
  for (int i = 0; i < scheme.count; ++i) {
    const auto e = family.find(events::EventLabel::bucket(u.id, action, i));
    if (e != events::EventFamily::npos)
      alpha_max = std::max(alpha_max, report.events[e].bias_inf);
  }
  out.bound = scheme.count * alpha_max + scheme.tau;
  out.holds = out.linf <= out.bound + 1e-9;
  return out;
}

}  // namespace swapcast::metrics
