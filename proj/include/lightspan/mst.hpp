#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

#include "lightspan/error.hpp"
#include "lightspan/geometry.hpp"
#include "lightspan/graph.hpp"

namespace lightspan {

struct union_find {
  std::vector<int> parent, rank;
  explicit union_find(int n) : parent(n), rank(n, 0) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a), b = find(b);
    if (a == b) return false;
    if (rank[a] < rank[b]) std::swap(a, b);
    parent[b] = a;
    if (rank[a] == rank[b]) ++rank[a];
    return true;
  }
};

// Planar Yao graph: every point keeps its nearest neighbour in each of k equal cones
// (ties to the lower id). Stretch 1/(1 - 2 sin(pi/k)) for k > 6; contains a Euclidean MST for k >= 7.
inline std::vector<std::pair<int, int>> yao_graph(const PointSet& P, int k) {
  require(P.dim() == 2, "yao graph: planar input required");
  require(k >= 3, "yao graph: need at least 3 cones");
  const int n = static_cast<int>(P.size());
  std::vector<std::pair<int, int>> out;
  if (n < 2) return out;

  // flat copy of the coordinates; Point is wide and the scans below touch many neighbours
  std::vector<double> xy(2 * static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) xy[2 * i] = P[i][0], xy[2 * i + 1] = P[i][1];
  double x0 = xy[0], y0 = xy[1], x1 = x0, y1 = y0;
  for (int i = 0; i < n; ++i) {
    x0 = std::min(x0, xy[2 * i]), x1 = std::max(x1, xy[2 * i]);
    y0 = std::min(y0, xy[2 * i + 1]), y1 = std::max(y1, xy[2 * i + 1]);
  }
  double w = x1 - x0, h = y1 - y0;
  double s = std::sqrt(std::max(w * h, 1e-300) * 2.0 / n);
  s = std::max({s, w / (4.0 * n), h / (4.0 * n), 1e-300});
  const int nx = static_cast<int>(std::min<double>(w / s, 4.0 * n)) + 1;
  const int ny = static_cast<int>(std::min<double>(h / s, 4.0 * n)) + 1;
  const double sx = w > 0 ? w / nx : 1, sy = h > 0 ? h / ny : 1;
  const double cs = std::min(sx, sy);  // ring lower bound uses the smaller side
  auto cx = [&](double x) { return std::min(nx - 1, static_cast<int>((x - x0) / sx)); };
  auto cy = [&](double y) { return std::min(ny - 1, static_cast<int>((y - y0) / sy)); };

  std::vector<int> start(static_cast<std::size_t>(nx) * ny + 1, 0), items(n);
  for (int i = 0; i < n; ++i) ++start[static_cast<std::size_t>(cy(xy[2 * i + 1])) * nx + cx(xy[2 * i]) + 1];
  for (std::size_t i = 1; i < start.size(); ++i) start[i] += start[i - 1];
  {
    std::vector<int> pos(start.begin(), start.end() - 1);
    for (int i = 0; i < n; ++i) items[pos[static_cast<std::size_t>(cy(xy[2 * i + 1])) * nx + cx(xy[2 * i])]++] = i;
  }
  // cell-ordered coordinates, so a cell scan reads one contiguous run
  std::vector<double> cxy(2 * static_cast<std::size_t>(n));
  for (int t = 0; t < n; ++t) cxy[2 * t] = xy[2 * items[t]], cxy[2 * t + 1] = xy[2 * items[t] + 1];

  const double two_pi = 2 * M_PI, width = two_pi / k;
  std::vector<double> cdir_x(k + 1), cdir_y(k + 1);
  for (int c = 0; c <= k; ++c) cdir_x[c] = std::cos(-M_PI + c * width), cdir_y[c] = std::sin(-M_PI + c * width);

  // farthest reach of cone c from (ux,uy) inside the bounding box
  // a box clipped by two half-planes has at most 6 corners
  auto reach = [&](double ux, double uy, int c) {
    std::array<std::pair<double, double>, 8> poly{{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}}, nxt;
    int np = 4;
    auto clip = [&](double ax, double ay, double sign) {
      int nn = 0;
      for (int i = 0; i < np; ++i) {
        auto [px, py] = poly[i];
        auto [qx, qy] = poly[(i + 1) % np];
        double fp = sign * (ax * (py - uy) - ay * (px - ux));
        double fq = sign * (ax * (qy - uy) - ay * (qx - ux));
        if (fp >= 0) nxt[nn++] = {px, py};
        if ((fp >= 0) != (fq >= 0)) {
          double t = fp / (fp - fq);
          nxt[nn++] = {px + t * (qx - px), py + t * (qy - py)};
        }
      }
      poly = nxt, np = nn;
    };
    clip(cdir_x[c], cdir_y[c], 1);
    if (np > 0) clip(cdir_x[c + 1], cdir_y[c + 1], -1);
    double r = 0;
    for (int i = 0; i < np; ++i) r = std::max(r, std::hypot(poly[i].first - ux, poly[i].second - uy));
    return r;
  };

  // Cone of a direction by pseudo-angle: diamond angle of -d grows with atan2(d) + pi, so comparing it
  // against the boundary rays gives the same sectors as the angle itself, without atan2.
  auto pseudo = [](double x, double y) {
    double s = std::abs(x) + std::abs(y);
    if (y >= 0) return x >= 0 ? y / s : 1 - x / s;
    return x < 0 ? 2 - y / s : 3 + x / s;
  };
  std::vector<double> bound(k);
  for (int c = 0; c < k; ++c) bound[c] = c == 0 ? 0.0 : pseudo(-cdir_x[c], -cdir_y[c]);
  const int bins = 4 * k;
  std::vector<int> first(bins + 1);  // lowest cone that can contain a pseudo-angle in each bin
  for (int b = 0, c = 0; b <= bins; ++b) {
    double lo = 4.0 * b / bins;
    while (c + 1 < k && bound[c + 1] <= lo) ++c;
    first[b] = c;
  }
  auto cone_of = [&](double dx, double dy) {
    double a = pseudo(-dx, -dy);
    int c = first[std::min(bins, static_cast<int>(a * (bins / 4.0)))];
    while (c + 1 < k && bound[c + 1] <= a) ++c;
    return c;
  };

  std::vector<double> best(k), lim(k);
  std::vector<int> arg(k);
  std::vector<int> sel_start(n + 1, 0), sel;  // chosen neighbours per point
  sel.reserve(static_cast<std::size_t>(n) * std::min(k, 48));
  for (int u = 0; u < n; ++u) {
    const double ux = xy[2 * u], uy = xy[2 * u + 1];
    const int ix = cx(ux), iy = cy(uy);
    // every cone reaches at least as far as the nearest side of the box; exact reach only when needed
    const double side = std::min({ux - x0, x1 - ux, uy - y0, y1 - uy});
    for (int c = 0; c < k; ++c) best[c] = infinity, arg[c] = -1, lim[c] = -1;
    auto scan_cell = [&](int gx, int gy) {
      if (gx < 0 || gy < 0 || gx >= nx || gy >= ny) return;
      std::size_t cell = static_cast<std::size_t>(gy) * nx + gx;
      for (int t = start[cell]; t < start[cell + 1]; ++t) {
        int v = items[t];
        if (v == u) continue;
        double dx = cxy[2 * t] - ux, dy = cxy[2 * t + 1] - uy;
        int c = cone_of(dx, dy);
        double d = std::sqrt(dx * dx + dy * dy);
        if (d < best[c] || (d == best[c] && v < arg[c])) best[c] = d, arg[c] = v;
      }
    };
    const int max_ring = std::max(nx, ny);
    for (int ring = 0; ring <= max_ring; ++ring) {
      if (ring == 0) {
        scan_cell(ix, iy);
      } else {
        for (int d = -ring; d <= ring; ++d) {
          scan_cell(ix + d, iy - ring), scan_cell(ix + d, iy + ring);
          if (d != -ring && d != ring) scan_cell(ix - ring, iy + d), scan_cell(ix + ring, iy + d);
        }
      }
      // anything not yet seen is at least ring*cs away
      double floor_d = ring * cs;
      bool done = true;
      for (int c = 0; c < k && done; ++c) {
        if (best[c] <= floor_d) continue;
        if (floor_d <= side) {
          done = false;
        } else {
          if (lim[c] < 0) lim[c] = reach(ux, uy, c);
          if (lim[c] >= floor_d) done = false;
        }
      }
      if (done) break;
    }
    for (int c = 0; c < k; ++c)
      if (arg[c] >= 0) sel.push_back(arg[c]);
    sel_start[u + 1] = static_cast<int>(sel.size());
  }

  // undirected, deduplicated and sorted: pair (a, b), a < b, if a picked b or b picked a
  std::vector<int> back_start(n + 1, 0), back;
  for (int u = 0; u < n; ++u)
    for (int t = sel_start[u]; t < sel_start[u + 1]; ++t)
      if (sel[t] < u) ++back_start[sel[t] + 1];
  for (int a = 0; a < n; ++a) back_start[a + 1] += back_start[a];
  back.resize(back_start[n]);
  {
    std::vector<int> pos(back_start.begin(), back_start.end() - 1);
    for (int u = 0; u < n; ++u)
      for (int t = sel_start[u]; t < sel_start[u + 1]; ++t)
        if (sel[t] < u) back[pos[sel[t]]++] = u;
  }
  out.reserve(sel.size());
  std::vector<int> nb;
  for (int a = 0; a < n; ++a) {
    nb.clear();
    for (int t = sel_start[a]; t < sel_start[a + 1]; ++t)
      if (sel[t] > a) nb.push_back(sel[t]);
    nb.insert(nb.end(), back.begin() + back_start[a], back.begin() + back_start[a + 1]);
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    for (int b : nb) out.push_back({a, b});
  }
  return out;
}

inline std::vector<std::pair<int, int>> prim_mst_edges(const PointSet& P) {
  const int n = static_cast<int>(P.size());
  std::vector<std::pair<int, int>> out;
  std::vector<double> key(n, infinity);
  std::vector<int> from(n, -1);
  std::vector<char> in(n, 0);
  key[0] = 0;
  for (int it = 0; it < n; ++it) {
    int u = -1;
    for (int v = 0; v < n; ++v)
      if (!in[v] && (u < 0 || key[v] < key[u])) u = v;
    in[u] = 1;
    if (from[u] >= 0) out.push_back({from[u], u});
    for (int v = 0; v < n; ++v)
      if (!in[v]) {
        double d = dist(P[u], P[v]);
        if (d < key[v]) key[v] = d, from[v] = u;
      }
  }
  return out;
}

inline std::vector<std::pair<int, int>> kruskal(const PointSet& P, std::vector<std::pair<int, int>> cand) {
  std::vector<double> w(cand.size());
  std::vector<std::size_t> order(cand.size());
  for (std::size_t i = 0; i < cand.size(); ++i) w[i] = dist(P[cand[i].first], P[cand[i].second]), order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return w[a] < w[b] || (w[a] == w[b] && a < b); });
  union_find uf(static_cast<int>(P.size()));
  std::vector<std::pair<int, int>> out;
  for (std::size_t i : order)
    if (uf.unite(cand[i].first, cand[i].second)) out.push_back(cand[i]);
  return out;
}

inline GeometricGraph mst(const PointSet& P) {
  require(!P.empty(), "mst: empty point set");
  auto edges = (P.size() > 2000 && P.dim() == 2) ? kruskal(P, yao_graph(P, 8)) : prim_mst_edges(P);
  ensure(edges.size() + 1 == P.size(), "mst: candidate graph not connected");
  auto g = GeometricGraph::from_points(P);
  g.reserve_edges(edges.size());
  for (auto [u, v] : edges) g.add_edge(u, v);
  return g;
}

inline double mst_weight(const PointSet& P) { return P.size() < 2 ? 0.0 : mst(P).total_weight(); }

struct Subdivision {
  GeometricGraph graph;
  std::vector<int> steiner;  // ids of the inserted points, K
};

// Split every edge longer than 1 into k = ceil(w) equal collinear pieces.
inline Subdivision subdivide_mst(const GeometricGraph& T) {
  const int n = T.num_vertices();
  require(n >= 1 && T.num_edges() + 1 == static_cast<std::size_t>(n), "subdivide_mst: input is not a tree");
  union_find uf(n);
  for (const auto& e : T.edges()) require(uf.unite(e.u, e.v), "subdivide_mst: input is not a tree");

  Subdivision out;
  auto& g = out.graph;
  g = GeometricGraph(T.dim());
  for (int v = 0; v < n; ++v)
    if (!T.is_steiner(v)) g.add_vertex(T.point(v), vertex_kind::original);
  std::vector<int> id(n, -1);
  for (int v = 0, o = 0; v < n; ++v)
    if (!T.is_steiner(v)) id[v] = o++;
  for (int v = 0; v < n; ++v)
    if (T.is_steiner(v)) id[v] = g.add_vertex(T.point(v), vertex_kind::steiner);

  for (const auto& e : T.edges()) {
    if (e.weight <= 1) {
      g.add_edge(id[e.u], id[e.v]);
      continue;
    }
    int k = static_cast<int>(std::ceil(e.weight));
    if (e.weight / k > 1 - 1e-9) ++k;  // integral lengths: rounding could push a piece past 1
    const Point& a = T.point(e.u);
    const Point& b = T.point(e.v);
    int prev = id[e.u];
    for (int j = 1; j < k; ++j) {
      int s = g.add_vertex(lerp(a, b, static_cast<double>(j) / k), vertex_kind::steiner);
      out.steiner.push_back(s);
      g.add_edge(prev, s);
      prev = s;
    }
    g.add_edge(prev, id[e.v]);
  }
  return out;
}

}  // namespace lightspan
