#include "swapcast/transcript.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace swapcast {

double ForecastDistribution::total() const {
  double s = 0;
  for (double w : weights) s += w;
  return s;
}

bool ForecastDistribution::contains(std::uint32_t idx) const {
  return std::binary_search(support.begin(), support.end(), idx);
}

double ForecastDistribution::entropy() const {
  double h = 0;
  for (double w : weights)
    if (w > 0) h -= w * std::log(w);
  return h;
}

bool ForecastDistribution::valid(std::size_t grid_size, double tol) const {
  if (support.size() != weights.size() || support.empty()) return false;
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (support[i] >= grid_size) return false;
    if (i && support[i] <= support[i - 1]) return false;
    if (!(weights[i] > 0)) return false;
  }
  return std::abs(total() - 1.0) <= tol;
}

std::uint32_t ForecastDistribution::sample(double unit) const {
  double acc = 0;
  for (std::size_t i = 0; i < support.size(); ++i) {
    acc += weights[i];
    if (unit < acc) return support[i];
  }
  return support.back();
}

void Transcript::append(ForecastDistribution forecast, std::uint32_t realized,
                        OutcomePoint outcome,
                        std::optional<RoundDiagnostics> diag) {
  if (!forecast.valid(grid_->size()))
    throw std::invalid_argument("forecast distribution invalid for grid");
  if (!forecast.contains(realized))
    throw std::invalid_argument("realized index outside forecast support");
  if (outcome.dim() != grid_->dim())
    throw std::invalid_argument("outcome dimension does not match grid");
  rows_.push_back({std::move(forecast), realized, std::move(outcome)});
  if (diag) diag_.push_back(*diag);
}

}  // namespace swapcast
