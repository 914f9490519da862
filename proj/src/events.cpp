#include "swapcast/events.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace swapcast::events {

EventLabel EventLabel::interval(double lo, double hi) {
  EventLabel l;
  l.kind = LabelKind::Interval;
  l.lo = lo;
  l.hi = hi;
  return l;
}

EventLabel EventLabel::polygon(std::vector<std::uint32_t> vertices) {
  EventLabel l;
  l.kind = LabelKind::Polygon;
  l.vertices = std::move(vertices);
  return l;
}

EventLabel EventLabel::best_response(std::string utility_id, int action) {
  EventLabel l;
  l.kind = LabelKind::BestResponse;
  l.utility_id = std::move(utility_id);
  l.action = action;
  return l;
}

EventLabel EventLabel::bucket(std::string utility_id, int action, int bucket) {
  EventLabel l;
  l.kind = LabelKind::Bucket;
  l.utility_id = std::move(utility_id);
  l.action = action;
  l.bucket_index = bucket;
  return l;
}

std::string EventLabel::to_string() const {
  std::ostringstream os;
  switch (kind) {
    case LabelKind::Interval:
      os << "interval[" << lo << "," << hi << "]";
      break;
    case LabelKind::Polygon:
      os << "polygon{";
      for (std::size_t i = 0; i < vertices.size(); ++i)
        os << (i ? "," : "") << vertices[i];
      os << "}";
      break;
    case LabelKind::BestResponse:
      os << "br(" << utility_id << "," << action << ")";
      break;
    case LabelKind::Bucket:
      os << "bucket(" << utility_id << "," << action << "," << bucket_index
         << ")";
      break;
  }
  return os.str();
}

void EventFamily::add(FixedBitset bits, EventLabel label) {
  ++dedup_.raw;
  if (bits.empty_bits()) {
    ++dedup_.dropped_empty;
    return;
  }
  const std::uint64_t h = bits.hash();
  auto& bucket = by_hash_[h];
  for (std::size_t idx : bucket) {
    if (events_[idx].bits == bits) {
      events_[idx].labels.push_back(std::move(label));
      ++dedup_.merged_duplicates;
      return;
    }
  }
  bucket.push_back(events_.size());
  Event e;
  e.bits = std::move(bits);
  e.labels.push_back(std::move(label));
  events_.push_back(std::move(e));
}

void EventFamily::finalize() {
  for (auto& e : events_)
    if (e.members.empty()) e.members = e.bits.members();
}

std::size_t EventFamily::find(const EventLabel& label) const {
  std::lock_guard<std::mutex> lock(*label_mutex_);
  if (label_index_.empty()) {
    for (std::size_t e = 0; e < events_.size(); ++e)
      for (const auto& l : events_[e].labels) label_index_[l.to_string()] = e;
  }
  auto it = label_index_.find(label.to_string());
  return it == label_index_.end() ? npos : it->second;
}

BucketScheme BucketScheme::make(double tau) {
  if (!(tau > 0.0) || tau > 1.0)
    throw std::invalid_argument("tau must lie in (0,1]");
  BucketScheme s;
  s.tau = tau;
  s.count = static_cast<int>(std::floor(1.0 / tau + 1e-9));
  return s;
}

int BucketScheme::bucket_of(double q) const {
  if (q <= 0) return 0;
  auto i = static_cast<int>(std::floor(q / tau));
  return std::min(i, count - 1);
}

EventFamily intervals_1d(GridPtr grid) {
  if (grid->free_dims() != 1)
    throw std::invalid_argument("intervals need exactly one free dimension");
  EventFamily fam("intervals", grid);
  const auto& axis = grid->axis_values(0);
  const std::size_t n = axis.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      FixedBitset bits(n);
      for (std::size_t p = i; p <= j; ++p) bits.set(p);
      fam.add(std::move(bits), EventLabel::interval(axis[i], axis[j]));
    }
  }
  fam.finalize();
  return fam;
}

EventFamily best_response_events(
    const std::vector<agents::UtilityFunction>& utilities, GridPtr grid,
    agents::TieRule tie) {
  EventFamily fam("best-response", grid);
  const std::size_t n = grid->size();
  for (const auto& u : utilities) {
    if (u.dim != grid->dim())
      throw std::invalid_argument("utility dimension does not match grid");
    std::vector<FixedBitset> per_action(u.action_count(), FixedBitset(n));
    for (std::size_t p = 0; p < n; ++p)
      per_action[agents::best_response(u, grid->outcome_at(p), tie)].set(p);
    for (int a = 0; a < u.action_count(); ++a)
      fam.add(std::move(per_action[a]), EventLabel::best_response(u.id, a));
  }
  fam.finalize();
  return fam;
}

EventFamily best_response_events(const agents::UtilityCover& cover,
                                 GridPtr grid, agents::TieRule tie) {
  return best_response_events(cover.utilities, grid, tie);
}

EventFamily logistic_bucket_events(const agents::UtilityCover& cover,
                                   GridPtr grid, double eta,
                                   const BucketScheme& scheme) {
  if (!(eta > 0)) throw std::invalid_argument("eta must be positive");
  EventFamily fam("logistic-bucket", grid);
  const std::size_t n = grid->size();
  for (const auto& u : cover.utilities) {
    if (u.dim != grid->dim())
      throw std::invalid_argument("utility dimension does not match grid");
    std::vector<std::vector<FixedBitset>> buckets(
        u.action_count(),
        std::vector<FixedBitset>(scheme.count, FixedBitset(n)));
    for (std::size_t p = 0; p < n; ++p) {
      const auto q = agents::logistic_response(u, grid->outcome_at(p), eta);
      for (int a = 0; a < u.action_count(); ++a)
        buckets[a][scheme.bucket_of(q[a])].set(p);
    }
    for (int a = 0; a < u.action_count(); ++a)
      for (int i = 0; i < scheme.count; ++i)
        fam.add(std::move(buckets[a][i]), EventLabel::bucket(u.id, a, i));
  }
  fam.finalize();
  return fam;
}

namespace {

void put_u32_le(std::ofstream& os, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                        static_cast<unsigned char>((v >> 8) & 0xff),
                        static_cast<unsigned char>((v >> 16) & 0xff),
                        static_cast<unsigned char>((v >> 24) & 0xff)};
  os.write(reinterpret_cast<const char*>(b), 4);
}

void put_u64_le(std::ofstream& os, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint32_t get_u32_le(std::ifstream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

std::uint64_t get_u64_le(std::ifstream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

}  // namespace

void write_membership_matrix(const EventFamily& family,
                             const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string());
  os.write("EVFM", 4);
  put_u32_le(os, static_cast<std::uint32_t>(family.size()));
  put_u32_le(os, static_cast<std::uint32_t>(family.grid().size()));
  const std::size_t stride = (family.grid().size() + 63) / 64;
  for (const auto& e : family.events()) {
    const auto& w = e.bits.words();
    for (std::size_t i = 0; i < stride; ++i)
      put_u64_le(os, i < w.size() ? w[i] : 0);
  }
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

MembershipMatrix read_membership_matrix(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  char magic[4];
  is.read(magic, 4);
  if (!is || std::string_view(magic, 4) != "EVFM")
    throw std::runtime_error("bad magic in " + path.string());
  MembershipMatrix m;
  m.event_count = get_u32_le(is);
  m.grid_count = get_u32_le(is);
  const std::size_t stride = (m.grid_count + 63) / 64;
  m.words.resize(static_cast<std::size_t>(m.event_count) * stride);
  for (auto& w : m.words) w = get_u64_le(is);
  if (!is) throw std::runtime_error("truncated matrix in " + path.string());
  return m;
}

}  // namespace swapcast::events
