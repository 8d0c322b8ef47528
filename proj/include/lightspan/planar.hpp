#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include <absl/container/flat_hash_map.h>
#include <absl/container/flat_hash_set.h>

#include "lightspan/error.hpp"
#include "lightspan/geometry.hpp"
#include "lightspan/graph.hpp"
#include "lightspan/mst.hpp"
#include "lightspan/nets.hpp"
#include "lightspan/steiner_trees.hpp"

namespace lightspan {

// pairs whose distance lies in [2^(i-1), 2^i) units; the top class is closed
struct PairClass {
  int level = 1;
  std::vector<std::pair<int, int>> pairs;
  double L(double unit = 1) const { return std::ldexp(unit, level); }
};

struct Partition {
  double unit = 1;  // min pairwise distance; all lengths below are measured in this unit
  std::vector<PairClass> classes;  // levels 1..m, possibly empty
};

inline int pair_level(double d_units, int top) {
  int i = d_units >= 1 ? std::ilogb(d_units) + 1 : 1;
  return std::clamp(i, 1, top);
}

inline Partition normalize_and_partition(const PointSet& P) {
  require(P.size() >= 2, "partition: need at least two points");
  const int n = static_cast<int>(P.size());
  auto ex = extreme_pair_distances(P);
  Partition out;
  out.unit = ex.min;
  double delta = ex.max / ex.min;
  int m = std::max(1, static_cast<int>(std::ceil(std::log2(delta) - 1e-12)));
  out.classes.resize(m);
  for (int i = 0; i < m; ++i) out.classes[i].level = i + 1;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) out.classes[pair_level(dist(P[u], P[v]) / out.unit, m) - 1].pairs.push_back({u, v});
  return out;
}

// every pair of length at most w(MST)/n^2 becomes a direct edge and leaves its class
inline std::vector<std::pair<int, int>> prefilter_light_pairs(const PointSet& P, Partition& part, double mst_w) {
  const double n = static_cast<double>(P.size());
  const double thr = mst_w / (n * n);
  std::vector<std::pair<int, int>> seed;
  for (auto& c : part.classes) {
    auto keep = c.pairs.begin();
    for (auto& pr : c.pairs) {
      if (dist(P[pr.first], P[pr.second]) <= thr)
        seed.push_back(pr);
      else
        *keep++ = pr;
    }
    c.pairs.erase(keep, c.pairs.end());
  }
  return seed;
}

// -- subsquares and bands --

// Core cells of side 5L anchored at the bounding-square origin; each square extends its core by 2L.
struct Subsquare {
  std::int64_t cx = 0, cy = 0;
  Point origin;  // lower-left corner of the extended square
  double side = 0;
  bool contains(const Point& p) const {
    return p[0] >= origin[0] && p[0] <= origin[0] + side && p[1] >= origin[1] && p[1] <= origin[1] + side;
  }
};

inline Subsquare core_square(const Point& x, const Point& anchor, double L) {
  Subsquare s;
  s.cx = static_cast<std::int64_t>(std::floor((x[0] - anchor[0]) / (5 * L)));
  s.cy = static_cast<std::int64_t>(std::floor((x[1] - anchor[1]) / (5 * L)));
  s.origin = Point{anchor[0] + s.cx * 5 * L - 2 * L, anchor[1] + s.cy * 5 * L - 2 * L};
  s.side = 9 * L;
  return s;
}

struct Bisector {
  int axis = 1;       // 1: horizontal bands (split in y), 0: vertical bands
  int lo = 0, hi = 0;  // band indices of the two net points
  double coord = 0;    // bisector position along `axis`
};

inline constexpr int bands_per_side = 72;

inline int band_of(const Subsquare& B, const Point& p, int axis, double L) {
  return static_cast<int>(std::floor((p[axis] - B.origin[axis]) / (L / 8)));
}

// bands of the two covering net points; picks the direction with the larger index gap
inline Bisector choose_bisector(const Subsquare& B, const Point& a, const Point& b, double L) {
  Bisector best;
  int best_gap = -1;
  for (int axis : {1, 0}) {
    int ia = band_of(B, a, axis, L), ib = band_of(B, b, axis, L);
    int gap = std::abs(ia - ib);
    if (gap > best_gap) {
      best_gap = gap;
      best.axis = axis;
      best.lo = std::min(ia, ib);
      best.hi = std::max(ia, ib);
    }
  }
  best.coord = B.origin[best.axis] + (L / 8) * (best.lo + 1 + best.hi) / 2.0;
  return best;
}

// offsets of the Steiner points along a bisector of length 9L, spacing sqrt(eps)*L from the low end
inline std::vector<double> bisector_offsets(double L, double eps) {
  double s = std::sqrt(eps) * L, len = 9 * L;
  std::vector<double> out;
  int K = static_cast<int>(std::floor(len / s + 1e-9));
  for (int k = 0; k <= K; ++k) out.push_back(std::min(len, k * s));
  if (len - out.back() > 1e-12 * len) out.push_back(len);
  return out;
}

struct SubsquareSet {
  int level = 1;
  std::vector<Subsquare> squares;
  std::vector<std::vector<int>> net_points;  // per square, net points inside it
  std::vector<std::vector<int>> pairs;       // per square, indices into the class's pair list
};

inline SubsquareSet build_subsquares(const std::vector<Point>& pts, const NetAssignment& net, const PairClass& cls,
                                     const Point& anchor, double L) {
  SubsquareSet out;
  out.level = cls.level;
  absl::flat_hash_map<std::uint64_t, int> index;
  auto key = [](std::int64_t a, std::int64_t b) { return (static_cast<std::uint64_t>(a) << 32) ^ static_cast<std::uint64_t>(b & 0xffffffff); };
  for (std::size_t k = 0; k < cls.pairs.size(); ++k) {
    auto s = core_square(pts[cls.pairs[k].first], anchor, L);
    auto [it, fresh] = index.try_emplace(key(s.cx, s.cy), static_cast<int>(out.squares.size()));
    if (fresh) {
      out.squares.push_back(s);
      out.pairs.emplace_back();
      out.net_points.emplace_back();
    }
    out.pairs[it->second].push_back(static_cast<int>(k));
  }
  for (std::size_t q = 0; q < out.squares.size(); ++q)
    for (int p : net.net)
      if (out.squares[q].contains(pts[p])) out.net_points[q].push_back(p);
  return out;
}

// -- one level of the construction --

struct LevelStats {
  std::size_t pairs = 0, net_size = 0, squares = 0, sss_built = 0, sss_reused = 0;
};

// Builds the bisector Steiner points and single-source spanners for a set of level-L pairs.
// Shared by the quadratic and the near-linear constructions.
class LevelBuilder {
 public:
  LevelBuilder(const std::vector<Point>& pts, const std::vector<int>& endpoints, double L, double eps, Point anchor,
               sss_mode mode = sss_mode::pruned)
      : pts_(pts), L_(L), eps_(eps), rad_(std::sqrt(eps) * L), anchor_(std::move(anchor)), mode_(mode),
        net_(grid_net(pts, endpoints, rad_)), disc_(pts[endpoints.empty() ? 0 : endpoints[0]], rad_) {
    for (int e : endpoints) disc_.insert(e, pts[e]);
    stats_.net_size = net_.net.size();
  }

  const NetAssignment& net() const { return net_; }
  const LevelStats& stats() const { return stats_; }

  template <class Sink>
  void add_pair(int x, int y, Sink&& sink) {
    ++stats_.pairs;
    int nx = net_.cover_of[x], ny = net_.cover_of[y];
    ensure(nx >= 0 && ny >= 0, "level: pair endpoint missing from the net");
    ensure(nx != ny, "level: both endpoints covered by one net point");
    auto B = core_square(pts_[x], anchor_, L_);
    squares_.insert({B.cx, B.cy});
    stats_.squares = squares_.size();
    auto bis = choose_bisector(B, pts_[nx], pts_[ny], L_);
    ensure(bis.hi - bis.lo >= 2, "level: covering net points in adjacent bands");

    // where segment xy meets the bisector line, then the nearest Steiner point on it
    const int A = bis.axis, O = 1 - A;
    const Point &px = pts_[x], &py = pts_[y];
    double t = (bis.coord - px[A]) / (py[A] - px[A]);
    double along = px[O] + t * (py[O] - px[O]) - B.origin[O];
    double s = rad_, len = 9 * L_;
    int K = static_cast<int>(std::floor(len / s + 1e-9));
    double k = std::clamp(std::round(along / s), 0.0, static_cast<double>(K));
    double off = std::min(len, k * s);
    if (along > K * s && len - K * s > 1e-12 * len && len - along < along - K * s) off = len;
    Point r = B.origin;
    r[A] = bis.coord;
    r[O] = B.origin[O] + off;

    emit_(r, nx, sink);
    emit_(r, ny, sink);
  }

 private:
  struct key {
    Point r;
    int p;
    bool operator==(const key& o) const { return p == o.p && r == o.r; }
  };
  struct key_hash {
    std::size_t operator()(const key& k) const { return point_hash{}(k.r) * 31 + static_cast<std::size_t>(k.p); }
  };

  const std::vector<Point>& targets_(int p) {
    auto [it, fresh] = targets_of_.try_emplace(p);
    if (fresh) {
      disc_.for_each_near(disc_.cell_of(pts_[p]), 1, [&](const std::vector<int>& b) {
        for (int q : b)
          if (dist(pts_[q], pts_[p]) <= rad_) it->second.push_back(pts_[q]);
      });
    }
    return it->second;
  }

  template <class Sink>
  void emit_(const Point& r, int p, Sink& sink) {
    if (!done_.insert({r, p}).second) {
      ++stats_.sss_reused;
      return;
    }
    ++stats_.sss_built;
    detail::emit_sss_scaled(r, pts_[p], rad_, targets_(p), eps_, mode_, sink);
  }

  const std::vector<Point>& pts_;
  double L_, eps_, rad_;
  Point anchor_;
  sss_mode mode_;
  NetAssignment net_;
  GridIndex disc_;
  absl::flat_hash_map<int, std::vector<Point>> targets_of_;
  absl::flat_hash_set<key, key_hash> done_;
  absl::flat_hash_set<std::pair<std::int64_t, std::int64_t>> squares_;
  LevelStats stats_;
};

inline std::vector<int> endpoints_of(const std::vector<std::pair<int, int>>& pairs) {
  std::vector<int> out;
  out.reserve(pairs.size() * 2);
  for (auto [u, v] : pairs) out.push_back(u), out.push_back(v);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// H_i for one class; pts are in units where the class's L is cls.L(unit).
// The host S_prev is only consulted by the stretch argument, never by the construction.
inline GeometricGraph build_level(const PointSet& P, const PairClass& cls, const GeometricGraph& S_prev, double eps,
                                  double unit = 1) {
  require(P.dim() == 2, "build_level: planar input required");
  require(S_prev.num_original() == static_cast<int>(P.size()), "build_level: host graph must span the same points");
  GraphBuilder b(P);
  if (cls.pairs.empty()) return b.take();
  LevelBuilder lb(P.points(), endpoints_of(cls.pairs), cls.L(unit), eps, bounding_square(P).origin);
  auto sink = [&](const Point& x, const Point& y) { b.edge(x, y); };
  for (auto [u, v] : cls.pairs) lb.add_pair(u, v, sink);
  return b.take();
}

// -- full construction --

// Shortest first. With sub > 0, lengths are only bucketed (sub buckets per doubling) and ties go
// by lower endpoint id, which keeps consecutive searches close when ids follow a spatial order.
inline void sort_by_length(const PointSet& P, std::vector<std::pair<int, int>>& pairs, int sub = 0) {
  if (sub <= 0) {
    std::vector<std::pair<double, std::pair<int, int>>> tmp;
    tmp.reserve(pairs.size());
    for (auto pr : pairs) tmp.push_back({dist(P[pr.first], P[pr.second]), pr});
    std::sort(tmp.begin(), tmp.end());
    for (std::size_t k = 0; k < tmp.size(); ++k) pairs[k] = tmp[k].second;
    return;
  }
  // bucketed: order by (bucket, pair). Buckets span few values, so a stable counting pass over
  // pairs already in order does it in linear time.
  for (auto& pr : pairs)
    if (pr.first > pr.second) std::swap(pr.first, pr.second);
  if (!std::is_sorted(pairs.begin(), pairs.end())) std::sort(pairs.begin(), pairs.end());
  std::vector<long long> key(pairs.size());
  long long lo = 0, hi = 0;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    key[k] = static_cast<long long>(std::floor(std::log2(dist(P[pairs[k].first], P[pairs[k].second])) * sub));
    lo = k ? std::min(lo, key[k]) : key[k], hi = k ? std::max(hi, key[k]) : key[k];
  }
  if (pairs.empty()) return;
  if (hi - lo > static_cast<long long>(4 * pairs.size() + 64)) {
    std::vector<std::size_t> idx(pairs.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return key[a] < key[b]; });
    std::vector<std::pair<int, int>> out(pairs.size());
    for (std::size_t k = 0; k < idx.size(); ++k) out[k] = pairs[idx[k]];
    pairs.swap(out);
    return;
  }
  std::vector<std::size_t> at(static_cast<std::size_t>(hi - lo) + 2, 0);
  for (long long x : key) ++at[static_cast<std::size_t>(x - lo) + 1];
  for (std::size_t b = 1; b < at.size(); ++b) at[b] += at[b - 1];
  std::vector<std::pair<int, int>> out(pairs.size());
  for (std::size_t k = 0; k < pairs.size(); ++k) out[at[static_cast<std::size_t>(key[k] - lo)]++] = pairs[k];
  pairs.swap(out);
}

// a hair under 1+eps so path sums rounded differently by the verifier cannot tip a pair over
inline double skip_bound(double eps) { return 1 + eps * (1 - 1e-9); }

struct PlanarOptions {
  double c_cal = 4;               // internal eps = min(eps / c_cal, eps_cap)
  double eps_cap = 1.0 / 512;     // keeps bands non-adjacent and discs clear of the bisector
  bool prefilter_logn = false;
  bool skip_satisfied = true;     // pairs the graph already serves within 1+eps get no new structure
  bool simplify = true;
  verify_mode verify = verify_mode::automatic;
  std::uint64_t seed = 1;
};

struct SpannerResult {
  GeometricGraph graph;
  SpannerReport report;
};

inline double planar_internal_eps(double eps, const PlanarOptions& o) { return std::min(eps / o.c_cal, o.eps_cap); }

inline SpannerResult trivial_spanner(const PointSet& P, verify_mode mode, double t, std::uint64_t seed) {
  SpannerResult r{GeometricGraph::from_points(P), {}};
  if (P.size() == 2) r.graph.add_edge(0, 1);
  fill_basic_report(r.graph, P.size() == 2 ? dist(P[0], P[1]) : 0.0, r.report);
  check_stretch(r.graph, mode, t, seed, r.report);
  return r;
}

// P in Hilbert order; builders work on this copy so graph searches touch nearby memory
struct SpatialOrder {
  std::vector<int> order;
  PointSet points;
};

inline SpatialOrder spatial_order(const PointSet& input) {
  SpatialOrder s{hilbert_order(input), {}};
  std::vector<Point> pts;
  pts.reserve(input.size());
  for (int i : s.order) pts.push_back(input[i]);
  s.points = PointSet(std::move(pts));
  return s;
}

inline SpannerResult build_planar_spanner(const PointSet& input, double eps, const PlanarOptions& opt = {}) {
  require(input.dim() == 2, "planar spanner: input must be 2-dimensional");
  require(eps > 0 && eps < 1, "planar spanner: eps must be in (0, 1)");
  if (input.size() <= 2) return trivial_spanner(input, opt.verify, 1 + eps, opt.seed);
  auto t0 = std::chrono::steady_clock::now();
  const auto so = spatial_order(input);
  const PointSet& P = so.points;

  const double ei = planar_internal_eps(eps, opt);
  auto part = normalize_and_partition(P);
  auto T = mst(P);
  const double mst_w = T.total_weight();
  GraphBuilder b(P);
  std::size_t seeded = 0;
  if (opt.prefilter_logn) {
    for (auto [u, v] : prefilter_light_pairs(P, part, mst_w)) b.edge(u, v), ++seeded;
  }
  const Point anchor = bounding_square(P).origin;
  auto sink = [&](const Point& x, const Point& y) { b.edge(x, y); };
  SpannerReport rep;
  std::size_t levels = 0, skipped = 0;
  for (const auto& cls : part.classes) {
    if (cls.pairs.empty()) continue;
    ++levels;
    double w0 = b.graph().total_weight();
    LevelBuilder lb(P.points(), endpoints_of(cls.pairs), cls.L(part.unit), ei, anchor);
    auto pairs = cls.pairs;
    if (opt.skip_satisfied) sort_by_length(P, pairs, 8);
    for (auto [u, v] : pairs) {
      if (opt.skip_satisfied && b.within(u, v, skip_bound(eps) * dist(P[u], P[v]))) {
        ++skipped;
        continue;
      }
      lb.add_pair(u, v, sink);
    }
    rep.stats["level_" + std::to_string(cls.level) + "_weight"] = b.graph().total_weight() - w0;
    rep.stats["sss_built"] += static_cast<double>(lb.stats().sss_built);
    rep.stats["sss_reused"] += static_cast<double>(lb.stats().sss_reused);
  }
  GeometricGraph g = b.take();
  rep.stats["steiner_before_simplify"] = g.num_steiner();
  if (opt.simplify) g = simplify_steiner(g);
  g = unpermute_originals(g, input, so.order);
  rep.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  rep.stats["eps_internal"] = ei;
  rep.stats["levels"] = static_cast<double>(levels);
  rep.stats["prefilter_edges"] = static_cast<double>(seeded);
  rep.stats["pairs_skipped"] = static_cast<double>(skipped);
  fill_basic_report(g, mst_w, rep);
  check_stretch(g, opt.verify, 1 + eps, opt.seed, rep);
  return {std::move(g), std::move(rep)};
}

}  // namespace lightspan
