#include "swapcast/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace swapcast {

namespace {
constexpr double kCoordTol = 1e-12;
}

std::vector<double> PredictionGrid::net_axis_values(double epsilon) {
  if (!(epsilon > 0.0) || epsilon > 1.0)
    throw std::invalid_argument("epsilon must lie in (0,1]");
  const auto steps = static_cast<std::size_t>(std::floor(1.0 / epsilon + 1e-9));
  std::vector<double> v(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) v[i] = std::min(i * epsilon, 1.0);
  // Non-integral 1/eps leaves the top short of 1; pin the endpoint so the
  // closed box stays covered without changing the count.
  if (v.back() < 1.0 - kCoordTol) v.back() = 1.0;
  return v;
}

PredictionGrid PredictionGrid::epsilon_net(int dim, double epsilon,
                                           bool lifted) {
  if (dim < 1) throw std::invalid_argument("dim must be >= 1");
  if (!(epsilon > 0.0) || epsilon > 1.0)
    throw std::invalid_argument("epsilon must lie in (0,1]");
  PredictionGrid g;
  g.dim_ = dim;
  g.epsilon_ = epsilon;
  g.lifted_ = lifted;
  const int free = g.free_dims();
  if (free < 0 || (lifted && dim < 2))
    throw std::invalid_argument("lifted grid needs dim >= 2");
  g.axes_.assign(free, net_axis_values(epsilon));
  g.materialize();
  return g;
}

PredictionGrid PredictionGrid::from_axis_values(
    std::vector<std::vector<double>> free_axis_values, bool lifted,
    double epsilon) {
  PredictionGrid g;
  g.dim_ = static_cast<int>(free_axis_values.size()) + (lifted ? 1 : 0);
  g.epsilon_ = epsilon;
  g.lifted_ = lifted;
  if (g.dim_ < 1) throw std::invalid_argument("grid needs at least one axis");
  for (const auto& ax : free_axis_values) {
    if (ax.empty()) throw std::invalid_argument("empty axis");
    for (std::size_t i = 0; i < ax.size(); ++i) {
      if (ax[i] < -kCoordTol || ax[i] > 1.0 + kCoordTol)
        throw std::invalid_argument("axis value outside [0,1]");
      if (i && ax[i] <= ax[i - 1] + kCoordTol)
        throw std::invalid_argument("axis values must be strictly ascending");
    }
  }
  g.axes_ = std::move(free_axis_values);
  g.materialize();
  return g;
}

void PredictionGrid::materialize() {
  count_ = 1;
  for (const auto& ax : axes_) count_ *= ax.size();
  flat_.assign(count_ * dim_, 1.0);  // lift coordinate prefilled with 1
  const int free = free_dims();
  std::vector<std::size_t> ix(free, 0);
  for (std::size_t p = 0; p < count_; ++p) {
    for (int a = 0; a < free; ++a) flat_[p * dim_ + a] = axes_[a][ix[a]];
    for (int a = free - 1; a >= 0; --a) {  // odometer, axis 0 slowest
      if (++ix[a] < axes_[a].size()) break;
      ix[a] = 0;
    }
  }
}

OutcomePoint PredictionGrid::outcome_at(std::size_t idx) const {
  auto s = point(idx);
  return OutcomePoint(std::vector<double>(s.begin(), s.end()));
}

bool PredictionGrid::uniform_axes() const {
  for (const auto& ax : axes_) {
    if (ax.size() < 2) continue;
    const double step = ax[1] - ax[0];
    for (std::size_t i = 1; i < ax.size(); ++i)
      if (std::abs(ax[i] - ax[i - 1] - step) > kCoordTol) return false;
  }
  return true;
}

void PredictionGrid::index_to_axes(std::size_t idx,
                                   std::span<std::size_t> out) const {
  const int free = free_dims();
  for (int a = free - 1; a >= 0; --a) {
    out[a] = idx % axes_[a].size();
    idx /= axes_[a].size();
  }
}

std::size_t PredictionGrid::axes_to_index(
    std::span<const std::size_t> ax) const {
  std::size_t idx = 0;
  for (int a = 0; a < free_dims(); ++a) idx = idx * axes_[a].size() + ax[a];
  return idx;
}

std::size_t PredictionGrid::nearest_index(const OutcomePoint& y) const {
  if (y.dim() != dim_)
    throw std::invalid_argument("outcome dimension does not match grid");
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < count_; ++p) {
    double d = 0;
    const double* q = flat_.data() + p * dim_;
    for (int i = 0; i < dim_; ++i) d = std::max(d, std::abs(q[i] - y[i]));
    if (d < best_d) {
      best_d = d;
      best = p;
    }
  }
  return best;
}

}  // namespace swapcast
