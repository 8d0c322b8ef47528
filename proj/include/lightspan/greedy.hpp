#pragma once

#include <algorithm>
#include <queue>
#include <utility>
#include <vector>

#include "lightspan/error.hpp"
#include "lightspan/graph.hpp"

namespace lightspan {

// Path-greedy t-spanner: pairs by increasing distance, add an edge iff the current graph
// distance exceeds t times the Euclidean one.
inline GeometricGraph greedy_spanner(const PointSet& P, double t) {
  require(t > 1, "greedy_spanner: stretch must exceed 1");
  const int n = static_cast<int>(P.size());
  struct cand {
    double d;
    int u, v;
  };
  std::vector<cand> pairs;
  pairs.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) pairs.push_back({dist(P[u], P[v]), u, v});
  std::sort(pairs.begin(), pairs.end(), [](const cand& a, const cand& b) {
    return a.d < b.d || (a.d == b.d && (a.u < b.u || (a.u == b.u && a.v < b.v)));
  });

  std::vector<std::vector<std::pair<int, double>>> adj(n);
  std::vector<double> dist_to(n, infinity);
  std::vector<int> touched;
  using item = std::pair<double, int>;
  std::priority_queue<item, std::vector<item>, std::greater<>> pq;

  // bounded search: is there a u-v path of length <= bound?
  auto reachable = [&](int s, int target, double bound) {
    for (int x : touched) dist_to[x] = infinity;
    touched.clear();
    while (!pq.empty()) pq.pop();
    dist_to[s] = 0;
    touched.push_back(s);
    pq.push({0, s});
    while (!pq.empty()) {
      auto [d, x] = pq.top();
      pq.pop();
      if (d > dist_to[x]) continue;
      if (x == target) return true;
      for (auto [y, w] : adj[x]) {
        double nd = d + w;
        if (nd <= bound && nd < dist_to[y]) {
          if (dist_to[y] == infinity) touched.push_back(y);
          dist_to[y] = nd;
          pq.push({nd, y});
        }
      }
    }
    return false;
  };

  auto g = GeometricGraph::from_points(P);
  for (const auto& c : pairs) {
    if (reachable(c.u, c.v, t * c.d)) continue;
    g.add_edge(c.u, c.v);
    adj[c.u].push_back({c.v, c.d});
    adj[c.v].push_back({c.u, c.d});
  }
  return g;
}

}  // namespace lightspan
