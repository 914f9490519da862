#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "swapcast/grid.hpp"

namespace swapcast {

// Sparse distribution over grid indices. Support indices are ascending and
// weights are strictly positive, summing to 1 within 1e-9.
struct ForecastDistribution {
  std::vector<std::uint32_t> support;
  std::vector<double> weights;

  static ForecastDistribution point_mass(std::uint32_t idx) {
    return {{idx}, {1.0}};
  }

  double total() const;
  bool contains(std::uint32_t idx) const;
  double entropy() const;
  bool valid(std::size_t grid_size, double tol = 1e-9) const;

  // Inverse-CDF sample over the canonical (ascending-index) ordering.
  std::uint32_t sample(double unit) const;
};

// Per-round solver telemetry persisted as the transcript's sidecar.
struct RoundDiagnostics {
  double value = 0;      // minmax objective of the returned p
  double gap = 0;        // certified duality gap
  double entropy = 0;    // entropy of p_t
  bool forced = false;   // prediction forced by a scripted scenario
  bool certified = true; // gap <= gap_tol
  std::uint64_t commit_hash = 0;  // chained outcome commitment
};

struct RoundRecord {
  ForecastDistribution forecast;
  std::uint32_t realized_index = 0;
  OutcomePoint outcome;
};

// Append-only record of a run: one writer, arbitrarily many readers after
// completion. Everything the metrics consume lives here.
class Transcript {
 public:
  explicit Transcript(GridPtr grid) : grid_(std::move(grid)) {}

  const PredictionGrid& grid() const { return *grid_; }
  GridPtr grid_ptr() const { return grid_; }

  void append(ForecastDistribution forecast, std::uint32_t realized,
              OutcomePoint outcome,
              std::optional<RoundDiagnostics> diag = std::nullopt);

  std::int64_t rounds() const { return static_cast<std::int64_t>(rows_.size()); }
  const RoundRecord& round(std::size_t t) const { return rows_[t]; }
  const std::vector<RoundRecord>& rows() const { return rows_; }
  const std::vector<RoundDiagnostics>& diagnostics() const { return diag_; }

 private:
  GridPtr grid_;
  std::vector<RoundRecord> rows_;
  std::vector<RoundDiagnostics> diag_;
};

}  // namespace swapcast
