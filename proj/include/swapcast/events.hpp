#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "swapcast/bitset.hpp"
#include "swapcast/grid.hpp"
#include "swapcast/utility.hpp"

namespace swapcast::events {

// Thrown when an enumeration or configuration exceeds a desk-scale cap.
struct CapExceeded : std::runtime_error {
  std::size_t partial_count;
  CapExceeded(std::string msg, std::size_t partial)
      : std::runtime_error(std::move(msg)), partial_count(partial) {}
};

enum class LabelKind { Interval, Polygon, BestResponse, Bucket };

struct EventLabel {
  LabelKind kind = LabelKind::Interval;
  double lo = 0, hi = 0;                 // Interval
  std::vector<std::uint32_t> vertices;   // Polygon: hull vertex grid indices,
                                         // CCW from the canonical start
  std::string utility_id;                // BestResponse / Bucket
  int action = -1;                       // BestResponse / Bucket
  int bucket_index = -1;                 // Bucket

  std::string to_string() const;

  static EventLabel interval(double lo, double hi);
  static EventLabel polygon(std::vector<std::uint32_t> vertices);
  static EventLabel best_response(std::string utility_id, int action);
  static EventLabel bucket(std::string utility_id, int action, int bucket);
};

struct Event {
  FixedBitset bits;
  std::vector<std::uint32_t> members;  // ascending grid indices
  std::vector<EventLabel> labels;      // [0] primary, rest merged aliases
};

struct DedupLog {
  std::size_t raw = 0;
  std::size_t merged_duplicates = 0;
  std::size_t dropped_empty = 0;
};

class EventFamily {
 public:
  EventFamily(std::string kind, GridPtr grid)
      : kind_(std::move(kind)), grid_(std::move(grid)) {}

  // Dedups identical membership vectors and drops empty events.
  void add(FixedBitset bits, EventLabel label);
  void finalize();  // builds member lists

  const std::string& kind() const { return kind_; }
  const PredictionGrid& grid() const { return *grid_; }
  GridPtr grid_ptr() const { return grid_; }
  std::size_t size() const { return events_.size(); }
  const Event& event(std::size_t e) const { return events_[e]; }
  const std::vector<Event>& events() const { return events_; }
  const DedupLog& dedup_log() const { return dedup_; }

  // Event index for a label, or npos when the label's event was empty.
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t find(const EventLabel& label) const;

 private:
  std::string kind_;
  GridPtr grid_;
  std::vector<Event> events_;
  DedupLog dedup_;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> by_hash_;
  std::unique_ptr<std::mutex> label_mutex_ = std::make_unique<std::mutex>();
  mutable std::unordered_map<std::string, std::size_t> label_index_;
};

using FamilyPtr = std::shared_ptr<const EventFamily>;

// Width-tau bucketing of [0,1]: B_i = [i*tau, (i+1)*tau) with the last bucket
// closed; values above the last edge clamp into the last bucket.
struct BucketScheme {
  double tau = 1;
  int count = 1;

  static BucketScheme make(double tau);
  int bucket_of(double q) const;
  double lo(int i) const { return i * tau; }
  double hi(int i) const { return (i + 1) * tau; }
};

// One event per ordered pair y1 <= y2 of grid values on the free axis.
EventFamily intervals_1d(GridPtr grid);

// One event per convex-closed subset of a 2-free-dimension grid (singletons
// and collinear segments included). Throws CapExceeded above the cap.
EventFamily convex_polygon_events_2d(GridPtr grid, std::size_t cap = 5'000'000);

// Count-only variant of the enumerator (no membership materialization).
std::size_t count_convex_closed_2d(const PredictionGrid& grid,
                                   std::size_t cap = 5'000'000);

// Brute-force validator: checks S = hull(S) ∩ grid over every nonempty
// subset. Rejects grids with more than 16 points.
std::size_t polygon_subset_oracle(const PredictionGrid& grid);

EventFamily best_response_events(const std::vector<agents::UtilityFunction>& utilities,
                                 GridPtr grid,
                                 agents::TieRule tie = agents::TieRule::HighestIndex);
EventFamily best_response_events(const agents::UtilityCover& cover, GridPtr grid,
                                 agents::TieRule tie = agents::TieRule::HighestIndex);

EventFamily logistic_bucket_events(const agents::UtilityCover& cover, GridPtr grid,
                                   double eta, const BucketScheme& scheme);

// Bit-packed membership matrix: magic "EVFM", u32 event count, u32 grid
// count, then one row per event of ceil(n/64) little-endian 64-bit words.
void write_membership_matrix(const EventFamily& family,
                             const std::filesystem::path& path);
struct MembershipMatrix {
  std::uint32_t event_count = 0;
  std::uint32_t grid_count = 0;
  std::vector<std::uint64_t> words;  // row-major
};
MembershipMatrix read_membership_matrix(const std::filesystem::path& path);

}  // namespace swapcast::events
