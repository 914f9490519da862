#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace swapcast {

// A point of the outcome box [0,1]^d. When the grid is lifted the last
// coordinate is the affine-lift coordinate and is pinned to 1.
struct OutcomePoint {
  std::vector<double> coords;

  OutcomePoint() = default;
  explicit OutcomePoint(std::vector<double> c) : coords(std::move(c)) {}
  int dim() const { return static_cast<int>(coords.size()); }
  double operator[](std::size_t i) const { return coords[i]; }
};

// Finite prediction net over the outcome box. Points are the Cartesian
// product of per-axis value lists, stored in lexicographic order (axis 0
// slowest). A lifted grid has one extra trailing coordinate fixed at 1.
class PredictionGrid {
 public:
  // Standard net: free coordinates take the floor(1/eps)+1 values
  // {0, eps, 2*eps, ...} with the last value replaced by 1 when 1/eps is not
  // integral, so both endpoints are always present.
  static PredictionGrid epsilon_net(int dim, double epsilon, bool lifted);

  // Custom product grid from explicit free-axis values (ascending, in [0,1]).
  // epsilon must be an upper bound on the covering radius the caller needs.
  static PredictionGrid from_axis_values(
      std::vector<std::vector<double>> free_axis_values, bool lifted,
      double epsilon);

  int dim() const { return dim_; }
  double epsilon() const { return epsilon_; }
  bool lifted() const { return lifted_; }
  int free_dims() const { return dim_ - (lifted_ ? 1 : 0); }

  std::size_t size() const { return count_; }
  std::span<const double> point(std::size_t idx) const {
    return {flat_.data() + idx * dim_, static_cast<std::size_t>(dim_)};
  }
  OutcomePoint outcome_at(std::size_t idx) const;

  std::size_t axis_size(int free_axis) const { return axes_[free_axis].size(); }
  const std::vector<double>& axis_values(int free_axis) const {
    return axes_[free_axis];
  }
  // True when every free axis is an arithmetic progression (tolerance 1e-12);
  // required by the integer-lattice polygon machinery.
  bool uniform_axes() const;

  // Index <-> per-free-axis integer coordinates, axis 0 slowest.
  void index_to_axes(std::size_t idx, std::span<std::size_t> out) const;
  std::size_t axes_to_index(std::span<const std::size_t> ax) const;

  // Index of the grid point minimizing the l-inf distance to y; ties go to
  // the smaller canonical index.
  std::size_t nearest_index(const OutcomePoint& y) const;

  // Per-axis value list for a resolution parameter, shared with the utility
  // cover so nets and covers agree on endpoint handling.
  static std::vector<double> net_axis_values(double epsilon);

 private:
  int dim_ = 0;
  double epsilon_ = 0;
  bool lifted_ = false;
  std::size_t count_ = 0;
  std::vector<std::vector<double>> axes_;  // free axes only
  std::vector<double> flat_;               // count_ * dim_

  void materialize();
};

using GridPtr = std::shared_ptr<const PredictionGrid>;

}  // namespace swapcast
