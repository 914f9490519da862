#include <algorithm>
#include <atomic>
#include <cstdint>
#include <numeric>
#include <thread>
#include <vector>

#include "swapcast/events.hpp"

// Enumeration of convex-closed subsets S = hull(S) ∩ grid of a grid with two
// free dimensions. Sets decompose by hull dimension:
//   - singletons (one per grid point),
//   - lattice-filled segments (one per unordered pair of endpoints, since the
//     extreme points of the filled set recover the pair),
//   - strictly convex polygons with >= 3 vertices.
// Polygons are enumerated by depth-first growth of vertex chains whose edge
// directions strictly increase in angle within one turn, starting from the
// lowest-then-leftmost vertex and walking counterclockwise. All geometry is
// exact integer arithmetic on lattice indices.
//
// The DFS walks a precomputed angle-sorted table of all feasible edge
// vectors; for each vector the table stores the index range of admissible
// successors (strictly larger angle, left turn), so the inner loop is just
// bounds checks. Starts are processed independently and may run on several
// threads; results merge in start order, so the family is deterministic.

namespace swapcast::events {

namespace {

struct Pt {
  int x = 0, y = 0;
};

inline std::int64_t cross(Pt u, Pt v) {
  return static_cast<std::int64_t>(u.x) * v.y -
         static_cast<std::int64_t>(u.y) * v.x;
}
inline Pt sub(Pt a, Pt b) { return {a.x - b.x, a.y - b.y}; }

// 0 for angle in [0, pi), 1 for [pi, 2*pi). v must be nonzero.
inline int half(Pt v) { return (v.y > 0 || (v.y == 0 && v.x > 0)) ? 0 : 1; }

inline bool angle_less(Pt a, Pt b) {
  const int ha = half(a), hb = half(b);
  if (ha != hb) return ha < hb;
  const auto c = cross(a, b);
  if (c != 0) return c > 0;
  return a.x != b.x ? a.x < b.x : a.y < b.y;  // parallel: fixed tiebreak
}

// (y, x) lexicographic order; the DFS start vertex is the minimum.
inline bool below(Pt a, Pt b) { return a.y < b.y || (a.y == b.y && a.x < b.x); }

struct Lattice {
  int mx = 0, my = 0;  // axis sizes (axis 0 = x, axis 1 = y)

  std::size_t grid_index(Pt p) const {
    return static_cast<std::size_t>(p.x) * static_cast<std::size_t>(my) +
           static_cast<std::size_t>(p.y);
  }
};

struct EdgeTable {
  std::vector<Pt> vec;          // all nonzero vectors, sorted by angle
  std::vector<int> win_begin;   // first index with strictly larger angle
  std::vector<int> win_end;     // first index with cross(v, .) <= 0 after that
  std::vector<int> index_of;    // (dx, dy) -> sorted index
  int mx = 0, my = 0;
  int half0_end = 0;            // vectors [0, half0_end) have angle in [0, pi)

  int lookup(Pt v) const {
    return index_of[(v.x + mx - 1) * (2 * my - 1) + (v.y + my - 1)];
  }

  static EdgeTable build(const Lattice& lat) {
    EdgeTable t;
    t.mx = lat.mx;
    t.my = lat.my;
    for (int dx = -(lat.mx - 1); dx <= lat.mx - 1; ++dx)
      for (int dy = -(lat.my - 1); dy <= lat.my - 1; ++dy)
        if (dx || dy) t.vec.push_back({dx, dy});
    std::sort(t.vec.begin(), t.vec.end(), angle_less);
    const int n = static_cast<int>(t.vec.size());
    t.index_of.assign((2 * lat.mx - 1) * (2 * lat.my - 1), -1);
    for (int i = 0; i < n; ++i)
      t.index_of[(t.vec[i].x + lat.mx - 1) * (2 * lat.my - 1) +
                 (t.vec[i].y + lat.my - 1)] = i;
    t.win_begin.resize(n);
    t.win_end.resize(n);
    for (int i = 0; i < n; ++i) {
      int j = i + 1;
      while (j < n && cross(t.vec[i], t.vec[j]) == 0 &&
             half(t.vec[i]) == half(t.vec[j]))
        ++j;  // skip parallel same-direction group
      t.win_begin[i] = j;
      while (j < n && cross(t.vec[i], t.vec[j]) > 0) ++j;
      t.win_end[i] = j;
    }
    t.half0_end = 0;
    while (t.half0_end < n && half(t.vec[t.half0_end]) == 0) ++t.half0_end;
    return t;
  }
};

// DFS over one start vertex. Emit receives the CCW vertex chain.
template <class Emit>
class StartWalk {
 public:
  StartWalk(const Lattice& lat, const EdgeTable& table, Pt start, Emit& emit)
      : lat_(lat), t_(table), s_(start), emit_(emit) {
    chain_.reserve(64);
  }

  void run() {
    chain_.push_back(s_);
    for (int ei = 0; ei < t_.half0_end; ++ei) {
      const Pt e = t_.vec[ei];
      const Pt q{s_.x + e.x, s_.y + e.y};
      if (!inside(q)) continue;  // q > s_ holds for every half-0 vector
      chain_.push_back(q);
      grow(q, ei, ei);
      chain_.pop_back();
    }
    chain_.pop_back();
  }

 private:
  bool inside(Pt p) const {
    return p.x >= 0 && p.x < lat_.mx && p.y >= 0 && p.y < lat_.my;
  }

  void grow(Pt cur, int prev, int first) {
    const int lo = t_.win_begin[prev];
    const int hi = t_.win_end[prev];
    if (chain_.size() >= 3) {
      const Pt c = sub(s_, cur);
      const int ci = t_.lookup(c);
      if (ci >= lo && ci < hi && cross(c, t_.vec[first]) > 0) emit_(chain_);
    }
    for (int ei = lo; ei < hi; ++ei) {
      const Pt e = t_.vec[ei];
      const Pt q{cur.x + e.x, cur.y + e.y};
      if (!inside(q) || !below(s_, q)) continue;
      chain_.push_back(q);
      grow(q, ei, first);
      chain_.pop_back();
    }
  }

  const Lattice& lat_;
  const EdgeTable& t_;
  const Pt s_;
  Emit& emit_;
  std::vector<Pt> chain_;
};

// Runs per-start DFS jobs on `threads` workers; every worker gets its own
// emit callable from `make_emit(start_index)`. CapExceeded is raised once the
// shared emission tally passes `cap`.
template <class MakeEmit>
void run_polygon_walks(const Lattice& lat, std::size_t budget_used,
                       std::size_t cap, unsigned threads, MakeEmit&& make_emit) {
  const EdgeTable table = EdgeTable::build(lat);
  std::vector<Pt> starts;
  for (int y = 0; y < lat.my; ++y)
    for (int x = 0; x < lat.mx; ++x) starts.push_back({x, y});

  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> emitted{budget_used};
  std::atomic<bool> over{false};

  auto worker = [&] {
    while (true) {
      const std::size_t si = next.fetch_add(1);
      if (si >= starts.size() || over.load(std::memory_order_relaxed)) break;
      auto sink = make_emit(si);
      auto emit = [&](const std::vector<Pt>& chain) {
        sink(chain);
        if (emitted.fetch_add(1, std::memory_order_relaxed) + 1 > cap)
          over.store(true, std::memory_order_relaxed);
      };
      StartWalk walk(lat, table, starts[si], emit);
      walk.run();
    }
  };

  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (over.load())
    throw CapExceeded("convex-closed enumeration exceeded cap", cap);
}

// Buffered variant: collects chains per start and replays them in canonical
// start order, so materialized families are deterministic.
template <class PerChain>
void enumerate_polygons(const Lattice& lat, std::size_t budget_used,
                        std::size_t cap, unsigned threads, PerChain&& per_chain) {
  std::vector<std::vector<std::vector<Pt>>> buffers(
      static_cast<std::size_t>(lat.mx) * lat.my);
  run_polygon_walks(lat, budget_used, cap, threads, [&](std::size_t si) {
    return [&buffers, si](const std::vector<Pt>& chain) {
      buffers[si].push_back(chain);
    };
  });
  for (auto& chains : buffers)
    for (auto& chain : chains) per_chain(chain);
}

// Membership of the closed polygon (CCW vertex chain) on the lattice.
FixedBitset polygon_membership(const std::vector<Pt>& verts,
                               const Lattice& lat, std::size_t grid_size) {
  int x0 = verts[0].x, x1 = verts[0].x, y0 = verts[0].y, y1 = verts[0].y;
  for (const Pt v : verts) {
    x0 = std::min(x0, v.x);
    x1 = std::max(x1, v.x);
    y0 = std::min(y0, v.y);
    y1 = std::max(y1, v.y);
  }
  FixedBitset bits(grid_size);
  const std::size_t k = verts.size();
  for (int x = x0; x <= x1; ++x) {
    for (int y = y0; y <= y1; ++y) {
      const Pt p{x, y};
      bool in = true;
      for (std::size_t i = 0; i < k && in; ++i) {
        const Pt a = verts[i];
        const Pt b = verts[(i + 1) % k];
        in = cross(sub(b, a), sub(p, a)) >= 0;
      }
      if (in) bits.set(lat.grid_index(p));
    }
  }
  return bits;
}

FixedBitset segment_membership(Pt a, Pt b, const Lattice& lat,
                               std::size_t grid_size) {
  FixedBitset bits(grid_size);
  const int g = std::gcd(std::abs(b.x - a.x), std::abs(b.y - a.y));
  const Pt step{(b.x - a.x) / g, (b.y - a.y) / g};
  for (int t = 0; t <= g; ++t)
    bits.set(lat.grid_index({a.x + t * step.x, a.y + t * step.y}));
  return bits;
}

Lattice lattice_of(const PredictionGrid& grid) {
  if (grid.free_dims() != 2)
    throw std::invalid_argument(
        "convex-closed enumeration needs exactly two free dimensions");
  if (!grid.uniform_axes())
    throw std::invalid_argument(
        "convex-closed enumeration needs uniformly spaced axes");
  return {static_cast<int>(grid.axis_size(0)),
          static_cast<int>(grid.axis_size(1))};
}

unsigned enum_threads() {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc ? hc : 1;
}

}  // namespace

EventFamily convex_polygon_events_2d(GridPtr grid, std::size_t cap) {
  const Lattice lat = lattice_of(*grid);
  const std::size_t n = grid->size();
  const std::size_t degenerate = n + n * (n - 1) / 2;
  if (degenerate > cap)
    throw CapExceeded("convex-closed enumeration exceeded cap", degenerate);

  EventFamily fam("convex-closed", grid);
  for (int x = 0; x < lat.mx; ++x) {
    for (int y = 0; y < lat.my; ++y) {
      FixedBitset bits(n);
      const Pt p{x, y};
      bits.set(lat.grid_index(p));
      fam.add(std::move(bits), EventLabel::polygon({static_cast<std::uint32_t>(
                                   lat.grid_index(p))}));
    }
  }
  std::vector<Pt> pts;
  for (int y = 0; y < lat.my; ++y)
    for (int x = 0; x < lat.mx; ++x) pts.push_back({x, y});
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      fam.add(segment_membership(pts[i], pts[j], lat, n),
              EventLabel::polygon(
                  {static_cast<std::uint32_t>(lat.grid_index(pts[i])),
                   static_cast<std::uint32_t>(lat.grid_index(pts[j]))}));
    }
  }

  enumerate_polygons(lat, degenerate, cap, enum_threads(),
                     [&](const std::vector<Pt>& chain) {
                       std::vector<std::uint32_t> label;
                       label.reserve(chain.size());
                       for (const Pt v : chain)
                         label.push_back(
                             static_cast<std::uint32_t>(lat.grid_index(v)));
                       fam.add(polygon_membership(chain, lat, n),
                               EventLabel::polygon(std::move(label)));
                     });
  fam.finalize();
  return fam;
}

std::size_t count_convex_closed_2d(const PredictionGrid& grid,
                                   std::size_t cap) {
  const Lattice lat = lattice_of(grid);
  const std::size_t n = grid.size();
  const std::size_t degenerate = n + n * (n - 1) / 2;
  if (degenerate > cap)
    throw CapExceeded("convex-closed enumeration exceeded cap", degenerate);
  std::vector<std::size_t> per_start(n, 0);
  run_polygon_walks(lat, degenerate, cap, enum_threads(), [&](std::size_t si) {
    return [&per_start, si](const std::vector<Pt>&) { ++per_start[si]; };
  });
  std::size_t count = degenerate;
  for (auto c : per_start) count += c;
  return count;
}

namespace {

// Strict convex hull (collinear points removed), CCW. Size 1 and 2 results
// stand for degenerate hulls.
std::vector<Pt> convex_hull(std::vector<Pt> pts) {
  std::sort(pts.begin(), pts.end(), [](Pt a, Pt b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](Pt a, Pt b) { return a.x == b.x && a.y == b.y; }),
            pts.end());
  const std::size_t n = pts.size();
  if (n <= 2) return pts;
  std::vector<Pt> h(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {  // lower chain
    while (k >= 2 && cross(sub(h[k - 1], h[k - 2]), sub(pts[i], h[k - 2])) <= 0)
      --k;
    h[k++] = pts[i];
  }
  const std::size_t lower = k + 1;
  for (std::size_t i = n - 1; i-- > 0;) {  // upper chain
    while (k >= lower &&
           cross(sub(h[k - 1], h[k - 2]), sub(pts[i], h[k - 2])) <= 0)
      --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

bool hull_contains(const std::vector<Pt>& hull, Pt p) {
  if (hull.size() == 1) return hull[0].x == p.x && hull[0].y == p.y;
  if (hull.size() == 2) {
    const Pt d = sub(hull[1], hull[0]);
    const Pt r = sub(p, hull[0]);
    if (cross(d, r) != 0) return false;
    const std::int64_t dot =
        static_cast<std::int64_t>(d.x) * r.x + static_cast<std::int64_t>(d.y) * r.y;
    return dot >= 0 &&
           dot <= static_cast<std::int64_t>(d.x) * d.x +
                      static_cast<std::int64_t>(d.y) * d.y;
  }
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Pt a = hull[i];
    const Pt b = hull[(i + 1) % hull.size()];
    if (cross(sub(b, a), sub(p, a)) < 0) return false;
  }
  return true;
}

}  // namespace

std::size_t polygon_subset_oracle(const PredictionGrid& grid) {
  const std::size_t n = grid.size();
  if (n > 16)
    throw std::invalid_argument("subset oracle rejects grids with > 16 points");
  if (grid.free_dims() < 1 || grid.free_dims() > 2)
    throw std::invalid_argument("subset oracle needs one or two free dimensions");
  if (!grid.uniform_axes())
    throw std::invalid_argument("subset oracle needs uniformly spaced axes");

  std::vector<Pt> lattice(n);
  std::vector<std::size_t> ax(grid.free_dims());
  for (std::size_t p = 0; p < n; ++p) {
    grid.index_to_axes(p, {ax.data(), ax.size()});
    lattice[p] = {static_cast<int>(ax[0]),
                  grid.free_dims() == 2 ? static_cast<int>(ax[1]) : 0};
  }

  std::size_t count = 0;
  const std::uint32_t full = (1u << n) - 1u;
  for (std::uint32_t mask = 1; mask && mask <= full; ++mask) {
    std::vector<Pt> pts;
    for (std::size_t p = 0; p < n; ++p)
      if (mask & (1u << p)) pts.push_back(lattice[p]);
    const auto hull = convex_hull(pts);
    bool closed = true;
    for (std::size_t p = 0; p < n && closed; ++p)
      if (!(mask & (1u << p)) && hull_contains(hull, lattice[p])) closed = false;
    if (closed) ++count;
  }
  return count;
}

}  // namespace swapcast::events
