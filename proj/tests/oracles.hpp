#pragma once

// Slow, obviously-correct reference computations. Nothing here calls into the library's
// own search or MST code, so tests compare two independent implementations.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "lightspan/geometry.hpp"
#include "lightspan/graph.hpp"
#include "lightspan/nets.hpp"

namespace oracle {

using lightspan::GeometricGraph;
using lightspan::Point;
using lightspan::PointSet;

inline constexpr double inf = std::numeric_limits<double>::infinity();

inline double euclid(const Point& a, const Point& b) {
  double s = 0;
  for (int i = 0; i < a.dim(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

inline std::vector<std::vector<std::pair<int, double>>> adjacency(const GeometricGraph& g) {
  std::vector<std::vector<std::pair<int, double>>> adj(g.num_vertices());
  for (const auto& e : g.edges()) {
    double w = euclid(g.point(e.u), g.point(e.v));
    adj[e.u].push_back({e.v, w});
    adj[e.v].push_back({e.u, w});
  }
  return adj;
}

// ordered-set Dijkstra, weights recomputed from coordinates
inline std::vector<double> sssp(const std::vector<std::vector<std::pair<int, double>>>& adj, int s) {
  std::vector<double> d(adj.size(), inf);
  std::set<std::pair<double, int>> q;
  d[s] = 0;
  q.insert({0, s});
  while (!q.empty()) {
    auto [du, u] = *q.begin();
    q.erase(q.begin());
    for (auto [v, w] : adj[u]) {
      if (du + w < d[v]) {
        q.erase({d[v], v});
        d[v] = du + w;
        q.insert({d[v], v});
      }
    }
  }
  return d;
}

inline std::vector<double> sssp(const GeometricGraph& g, int s) { return sssp(adjacency(g), s); }

inline std::vector<std::vector<double>> floyd_warshall(const GeometricGraph& g) {
  const int n = g.num_vertices();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, inf));
  for (int v = 0; v < n; ++v) d[v][v] = 0;
  for (const auto& e : g.edges()) {
    double w = euclid(g.point(e.u), g.point(e.v));
    d[e.u][e.v] = std::min(d[e.u][e.v], w);
    d[e.v][e.u] = std::min(d[e.v][e.u], w);
  }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

struct Stretch {
  double max = 1;
  int u = -1, v = -1;
};

// max d_G(u,v)/|uv| over all pairs of original vertices
inline Stretch all_pairs_stretch(const GeometricGraph& g) {
  auto adj = adjacency(g);
  Stretch r;
  const int n = g.num_original();
  for (int u = 0; u < n; ++u) {
    auto d = sssp(adj, u);
    for (int v = u + 1; v < n; ++v) {
      double s = d[v] / euclid(g.point(u), g.point(v));
      if (s > r.max) r = {s, u, v};
    }
  }
  return r;
}

// Kruskal over the complete graph
inline double complete_kruskal_weight(const PointSet& P) {
  const int n = static_cast<int>(P.size());
  std::vector<std::tuple<double, int, int>> es;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) es.push_back({euclid(P[u], P[v]), u, v});
  std::sort(es.begin(), es.end());
  std::vector<int> root(n);
  std::iota(root.begin(), root.end(), 0);
  auto find = [&](int x) {
    while (root[x] != x) x = root[x] = root[root[x]];
    return x;
  };
  double w = 0;
  for (auto [d, u, v] : es) {
    int a = find(u), b = find(v);
    if (a != b) root[a] = b, w += d;
  }
  return w;
}

inline std::pair<double, double> min_max_distance(const PointSet& P) {
  double lo = inf, hi = 0;
  for (std::size_t u = 0; u < P.size(); ++u)
    for (std::size_t v = u + 1; v < P.size(); ++v) {
      double d = euclid(P[u], P[v]);
      lo = std::min(lo, d), hi = std::max(hi, d);
    }
  return {lo, hi};
}

// packing: net points pairwise > r; cover: every point within r of its assigned net point,
// and the assigned point is in the net
inline bool valid_net(const PointSet& P, const lightspan::NetAssignment& a, double r, bool packing = true) {
  std::vector<char> in(P.size(), 0);
  for (int p : a.net) {
    if (p < 0 || p >= static_cast<int>(P.size()) || in[p]) return false;
    in[p] = 1;
  }
  if (packing)
    for (std::size_t i = 0; i < a.net.size(); ++i)
      for (std::size_t j = i + 1; j < a.net.size(); ++j)
        if (euclid(P[a.net[i]], P[a.net[j]]) <= r) return false;
  if (a.cover_of.size() != P.size()) return false;
  for (std::size_t x = 0; x < P.size(); ++x) {
    int c = a.cover_of[x];
    if (c < 0 || !in[c] || euclid(P[x], P[c]) > r) return false;
  }
  return true;
}

inline PointSet random_points(int n, int d, std::uint64_t seed, double side = 1) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0, side);
  std::vector<Point> pts;
  std::set<std::vector<double>> seen;
  while (static_cast<int>(pts.size()) < n) {
    std::vector<double> xs(d);
    for (auto& x : xs) x = u(rng);
    if (seen.insert(xs).second) pts.push_back(Point(std::span<const double>(xs)));
  }
  return PointSet(std::move(pts));
}

// vertex id holding exactly this point, or -1
inline int find_vertex(const GeometricGraph& g, const Point& p) {
  for (int v = 0; v < g.num_vertices(); ++v)
    if (g.point(v) == p) return v;
  return -1;
}

}  // namespace oracle
