#pragma once

#include <cstdint>
#include <vector>

#include "swapcast/events.hpp"
#include "swapcast/transcript.hpp"
#include "swapcast/utility.hpp"

namespace swapcast::metrics {

struct EventBias {
  double n_T = 0;  // expected frequency sum_t E_{y_hat ~ p_t}[E(y_hat)]
  std::vector<double> bias_vec;  // (1/T) sum_t E[E(y_hat)(y_hat - y_t)]
  double bias_inf = 0;
  double n_T_realized = 0;
  std::vector<double> bias_vec_realized;
  double bias_inf_realized = 0;

  // Bias averaged over the rounds the event fires (the counterexample
  // lemma's normalization), bias_inf * T / n_T.
  double conditional_inf(std::int64_t T) const {
    return n_T > 0 ? bias_inf * static_cast<double>(T) / n_T : 0.0;
  }
};

struct BiasReport {
  std::int64_t horizon = 0;
  std::vector<EventBias> events;  // parallel to the family
  double max_bias_inf = 0;
  double max_bias_inf_realized = 0;
};

// Exact expected-form computation by summing over each round's forecast
// support; the realized form uses the sampled indices.
BiasReport conditional_bias(const Transcript& transcript,
                            const events::EventFamily& family);

// Appendix-style calibration errors over realized predictions of a
// one-free-dimension transcript: groups rounds by predicted value and
// aggregates |y_bar - y_hat| (l1) or squared gaps (l2), weighted by counts.
double l1_calibration(const Transcript& transcript);
double l2_calibration(const Transcript& transcript);

struct WeightedBucketBias {
  std::vector<double> bias_vec;  // (1/T) sum_t sum_i E[E_{u,a,i} q_a (y_hat - y)]
  double linf = 0;
  double bound = 0;  // floor(1/tau) * alpha_max + tau, measured alpha_max
  bool holds = false;
};

// The probability-weighted bucket bias for one (utility, action) pair and
// its measured-lemma bound over the family's bucket events.
WeightedBucketBias weighted_bucket_bias(const Transcript& transcript,
                                        const events::EventFamily& family,
                                        const agents::UtilityFunction& u,
                                        int action, double eta,
                                        const events::BucketScheme& scheme);

// Same, reusing an already computed bias report for the family.
WeightedBucketBias weighted_bucket_bias(const Transcript& transcript,
                                        const events::EventFamily& family,
                                        const BiasReport& report,
                                        const agents::UtilityFunction& u,
                                        int action, double eta,
                                        const events::BucketScheme& scheme);

}  // namespace swapcast::metrics
