#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <functional>
#include <initializer_list>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <absl/container/flat_hash_map.h>
#include <absl/container/flat_hash_set.h>

#include "lightspan/error.hpp"

namespace lightspan {

inline constexpr int max_dim = 8;

class Point {
 public:
  Point() = default;
  explicit Point(int dim) : dim_(dim) {
    require(dim >= 1 && dim <= max_dim, "point dimension must be in [1, 8]");
  }
  Point(std::initializer_list<double> xs) : Point(std::span<const double>(xs.begin(), xs.size())) {}
  explicit Point(std::span<const double> xs) : dim_(static_cast<int>(xs.size())) {
    require(dim_ >= 1 && dim_ <= max_dim, "point dimension must be in [1, 8]");
    for (int i = 0; i < dim_; ++i) {
      require(std::isfinite(xs[i]), "point coordinates must be finite");
      c_[i] = xs[i];
    }
  }

  int dim() const { return dim_; }
  double operator[](int i) const { return c_[i]; }
  double& operator[](int i) { return c_[i]; }
  std::span<const double> coords() const { return {c_.data(), static_cast<std::size_t>(dim_)}; }

  friend bool operator==(const Point& a, const Point& b) {
    if (a.dim_ != b.dim_) return false;
    for (int i = 0; i < a.dim_; ++i)
      if (a.c_[i] != b.c_[i]) return false;
    return true;
  }

  Point& operator+=(const Point& o) { for (int i = 0; i < dim_; ++i) c_[i] += o.c_[i]; return *this; }
  Point& operator-=(const Point& o) { for (int i = 0; i < dim_; ++i) c_[i] -= o.c_[i]; return *this; }
  Point& operator*=(double s) { for (int i = 0; i < dim_; ++i) c_[i] *= s; return *this; }
  friend Point operator+(Point a, const Point& b) { return a += b; }
  friend Point operator-(Point a, const Point& b) { return a -= b; }
  friend Point operator*(Point a, double s) { return a *= s; }
  friend Point operator*(double s, Point a) { return a *= s; }

 private:
  std::array<double, max_dim> c_{};
  int dim_ = 0;
};

struct point_hash {
  std::size_t operator()(const Point& p) const {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ static_cast<std::uint64_t>(p.dim());
    for (int i = 0; i < p.dim(); ++i) {
      double x = p[i] == 0.0 ? 0.0 : p[i];  // fold -0 into +0
      std::uint64_t b;
      std::memcpy(&b, &x, sizeof b);
      h ^= b + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      h *= 0xff51afd7ed558ccdULL;
    }
    return static_cast<std::size_t>(h ^ (h >> 33));
  }
};

inline double dot(const Point& a, const Point& b) {
  double s = 0;
  for (int i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(const Point& a) { return std::sqrt(dot(a, a)); }

inline double dist_sq(const Point& p, const Point& q) {
  double s = 0;
  for (int i = 0; i < p.dim(); ++i) {
    double t = p[i] - q[i];
    s += t * t;
  }
  return s;
}

inline double dist(const Point& p, const Point& q) {
  require(p.dim() == q.dim(), "dist: dimension mismatch");
  return std::sqrt(dist_sq(p, q));
}

// point on segment a->b at parameter t
inline Point lerp(const Point& a, const Point& b, double t) {
  Point r = a;
  for (int i = 0; i < a.dim(); ++i) r[i] = a[i] + (b[i] - a[i]) * t;
  return r;
}

class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(std::vector<Point> pts) : pts_(std::move(pts)) {
    dim_ = pts_.empty() ? 0 : pts_[0].dim();
    absl::flat_hash_set<Point, point_hash> seen;
    seen.reserve(pts_.size() * 2);
    for (const auto& p : pts_) {
      require(p.dim() == dim_, "point set: mixed dimensions");
      require(p.dim() >= 1, "point set: empty point");
      require(seen.insert(p).second, "point set: duplicate point");
    }
  }

  std::size_t size() const { return pts_.size(); }
  bool empty() const { return pts_.empty(); }
  int dim() const { return dim_; }
  const Point& operator[](std::size_t i) const { return pts_[i]; }
  const std::vector<Point>& points() const { return pts_; }
  auto begin() const { return pts_.begin(); }
  auto end() const { return pts_.end(); }

 private:
  std::vector<Point> pts_;
  int dim_ = 0;
};

struct Hypercube {
  Point origin;
  double side = 0;
  bool contains(const Point& p) const {
    for (int i = 0; i < p.dim(); ++i)
      if (p[i] < origin[i] || p[i] > origin[i] + side) return false;
    return true;
  }
};

inline Hypercube bounding_square(const PointSet& P) {
  require(!P.empty(), "bounding_square: empty point set");
  Point lo = P[0], hi = P[0];
  for (const auto& p : P)
    for (int i = 0; i < P.dim(); ++i) {
      lo[i] = std::min(lo[i], p[i]);
      hi[i] = std::max(hi[i], p[i]);
    }
  double side = 0;
  for (int i = 0; i < P.dim(); ++i) side = std::max(side, hi[i] - lo[i]);
  return {lo, side};
}

// -- grid indexing --

struct CellKey {
  std::array<std::int64_t, max_dim> c{};
  int dim = 0;
  friend bool operator==(const CellKey& a, const CellKey& b) {
    if (a.dim != b.dim) return false;
    for (int i = 0; i < a.dim; ++i)
      if (a.c[i] != b.c[i]) return false;
    return true;
  }
};

struct cell_hash {
  std::size_t operator()(const CellKey& k) const {
    std::uint64_t h = 0x84222325cbf29ce4ULL;
    for (int i = 0; i < k.dim; ++i) {
      h ^= static_cast<std::uint64_t>(k.c[i]) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      h *= 0xff51afd7ed558ccdULL;
    }
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

class GridIndex {
 public:
  GridIndex(Point origin, double cell_size) : origin_(std::move(origin)), cell_(cell_size) {
    require(cell_size > 0 && std::isfinite(cell_size), "grid: cell size must be positive");
  }

  const Point& origin() const { return origin_; }
  double cell_size() const { return cell_; }

  CellKey cell_of(const Point& p) const {
    require(p.dim() == origin_.dim(), "grid: dimension mismatch");
    CellKey k;
    k.dim = p.dim();
    for (int i = 0; i < p.dim(); ++i) k.c[i] = static_cast<std::int64_t>(std::floor((p[i] - origin_[i]) / cell_));
    return k;
  }

  void insert(int id, const Point& p) { buckets_[cell_of(p)].push_back(id); }

  const std::vector<int>* bucket(const CellKey& k) const {
    auto it = buckets_.find(k);
    return it == buckets_.end() ? nullptr : &it->second;
  }

  const absl::flat_hash_map<CellKey, std::vector<int>, cell_hash>& buckets() const { return buckets_; }

  // visit every nonempty bucket whose cell is within Chebyshev distance `radius` of k
  template <class F>
  void for_each_near(const CellKey& k, int radius, F&& f) const {
    CellKey q = k;
    visit_(q, k, 0, radius, f);
  }

 private:
  template <class F>
  void visit_(CellKey& q, const CellKey& k, int axis, int radius, F& f) const {
    if (axis == k.dim) {
      if (auto* b = bucket(q)) f(*b);
      return;
    }
    for (std::int64_t d = -radius; d <= radius; ++d) {
      q.c[axis] = k.c[axis] + d;
      visit_(q, k, axis + 1, radius, f);
    }
    q.c[axis] = k.c[axis];
  }

  Point origin_;
  double cell_;
  absl::flat_hash_map<CellKey, std::vector<int>, cell_hash> buckets_;
};

inline CellKey grid_cell(const Point& p, const GridIndex& g) { return g.cell_of(p); }

// Order of the points along a Hilbert curve over their bounding box (first two axes);
// used internally to keep memory access local.
inline std::vector<int> hilbert_order(const PointSet& P) {
  const int n = static_cast<int>(P.size());
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  if (n < 2 || P.dim() < 2) return order;
  auto box = bounding_square(P);
  const double side = box.side > 0 ? box.side : 1;
  constexpr std::uint32_t grid = 1u << 16;
  std::vector<std::uint64_t> key(n);
  for (int i = 0; i < n; ++i) {
    auto cell = [&](int a) {
      double t = (P[i][a] - box.origin[a]) / side * (grid - 1);
      return static_cast<std::uint32_t>(std::clamp(t, 0.0, static_cast<double>(grid - 1)));
    };
    std::uint32_t x = cell(0), y = cell(1);
    std::uint64_t d = 0;
    for (std::uint32_t s = grid / 2; s > 0; s /= 2) {
      std::uint32_t rx = (x & s) ? 1 : 0, ry = (y & s) ? 1 : 0;
      d += static_cast<std::uint64_t>(s) * s * ((3 * rx) ^ ry);
      if (ry == 0) {
        if (rx == 1) x = grid - 1 - x, y = grid - 1 - y;
        std::swap(x, y);
      }
    }
    key[i] = d;
  }
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return key[a] < key[b]; });
  return order;
}

// -- spread --

struct extreme_distances {
  double min = std::numeric_limits<double>::infinity();
  double max = 0;
};

inline extreme_distances extreme_distances_brute(const PointSet& P) {
  extreme_distances r;
  for (std::size_t i = 0; i < P.size(); ++i)
    for (std::size_t j = i + 1; j < P.size(); ++j) {
      double d = dist(P[i], P[j]);
      r.min = std::min(r.min, d);
      r.max = std::max(r.max, d);
    }
  return r;
}

// closest pair by grid doubling, diameter by pruning against bounding-box corners
inline extreme_distances extreme_distances_fast(const PointSet& P) {
  const std::size_t n = P.size();
  const int d = P.dim();
  auto box = bounding_square(P);
  extreme_distances r;

  double h = box.side / std::pow(static_cast<double>(n), 1.0 / d);
  if (!(h > 0)) h = 1;
  for (;;) {
    GridIndex g(box.origin, h);
    for (std::size_t i = 0; i < n; ++i) g.insert(static_cast<int>(i), P[i]);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i)
      g.for_each_near(g.cell_of(P[i]), 1, [&](const std::vector<int>& b) {
        for (int j : b)
          if (static_cast<std::size_t>(j) > i) best = std::min(best, dist(P[i], P[j]));
      });
    if (best <= h) {
      r.min = best;
      break;
    }
    h *= 2;
  }

  Point hi = box.origin;
  {
    Point lo = P[0];
    for (int a = 0; a < d; ++a) hi[a] = lo[a] = P[0][a];
    for (const auto& p : P)
      for (int a = 0; a < d; ++a) {
        lo[a] = std::min(lo[a], p[a]);
        hi[a] = std::max(hi[a], p[a]);
      }
    box.origin = lo;
  }
  auto far_reach = [&](const Point& p) {
    double s = 0;
    for (int a = 0; a < d; ++a) {
      double t = std::max(p[a] - box.origin[a], hi[a] - p[a]);
      s += t * t;
    }
    return std::sqrt(s);
  };
  // lower bound from a few farthest-point sweeps
  double lb = 0;
  std::size_t cur = 0;
  for (int sweep = 0; sweep < 4; ++sweep) {
    std::size_t arg = cur;
    double best = -1;
    for (std::size_t j = 0; j < n; ++j) {
      double t = dist_sq(P[cur], P[j]);
      if (t > best) best = t, arg = j;
    }
    lb = std::max(lb, std::sqrt(best));
    cur = arg;
  }
  std::vector<std::size_t> cand;
  for (std::size_t i = 0; i < n; ++i)
    if (far_reach(P[i]) >= lb) cand.push_back(i);
  double best = 0;
  for (std::size_t a = 0; a < cand.size(); ++a)
    for (std::size_t b = a + 1; b < cand.size(); ++b) best = std::max(best, dist_sq(P[cand[a]], P[cand[b]]));
  r.max = std::max(lb, std::sqrt(best));
  return r;
}

inline extreme_distances extreme_pair_distances(const PointSet& P) {
  require(P.size() >= 2, "spread: need at least two points");
  return P.size() <= 500 ? extreme_distances_brute(P) : extreme_distances_fast(P);
}

inline double spread(const PointSet& P) {
  auto e = extreme_pair_distances(P);
  return e.max / e.min;
}

}  // namespace lightspan
