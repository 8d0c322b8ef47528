#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "lightspan/error.hpp"
#include "lightspan/geometry.hpp"
#include "lightspan/graph.hpp"
#include "lightspan/greedy.hpp"
#include "lightspan/mst.hpp"
#include "lightspan/planar.hpp"

namespace lightspan {

// -- distance classes --

// k with 2^(k-1) < w <= 2^k
inline int pow2_ceil_exponent(double w) {
  int e = 0;
  double m = std::frexp(w, &e);
  return m == 0.5 ? e - 1 : e;
}

// 1/eps as a power of two, eps = 2^-J
inline int inverse_log2(double eps) {
  require(eps > 0 && eps <= 0.5, "eps must be in (0, 1/2]");
  int J = pow2_ceil_exponent(1 / eps);
  require(std::ldexp(1.0, -J) == eps, "eps must be a power of 1/2");
  return J;
}

struct EdgeClass {
  double delta = 1;
  int level = 1;
  double L = 0;  // delta / eps^level
  std::vector<std::pair<int, int>> pairs;
};

// All pairs of P whose class uses this delta, by level i >= 1 (weight in (L_i/2, L_i]).
// P must already be scaled so that every pair is longer than 1/(2 eps).
inline std::vector<EdgeClass> partition_edge_classes(const PointSet& P, double eps, double delta) {
  const int J = inverse_log2(eps);
  const int j = pow2_ceil_exponent(delta);
  require(j >= 0 && j < J && std::ldexp(1.0, j) == delta, "delta must be 2^j with 0 <= j < log2(1/eps)");
  std::vector<EdgeClass> out;
  const int n = static_cast<int>(P.size());
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      int k = pow2_ceil_exponent(dist(P[u], P[v]));
      require(k >= J, "edge classes: pair shorter than 1/(2 eps); rescale first");
      if (k % J != j) continue;
      int i = k / J;
      while (static_cast<int>(out.size()) < i) {
        int lvl = static_cast<int>(out.size()) + 1;
        out.push_back({delta, lvl, std::ldexp(1.0, j + lvl * J), {}});
      }
      out[i - 1].pairs.push_back({u, v});
    }
  return out;
}

// -- charging cover tree --

struct CoverTreeConfig {
  double c = 20;                 // cover constant
  double degree_threshold = 0;   // 0: 4c/eps
};

struct CoverLevel {
  double L = 0;                        // L_i; 0 at level 0
  std::vector<int> nodes;              // point ids, ascending
  std::vector<int> parent;             // index into the next level, -1 at the top
  std::vector<int> desc_off, desc;     // descendants (level-0 ids) per node
  std::vector<double> diameter;        // D(desc)
  std::vector<int> uncharged;          // uncharged descendants before this level's charging
  std::vector<char> high;              // high degree in H_i
  std::vector<char> made_by;           // '1' level one, 'A', 'B', 'C' (how the node was formed)

  int size() const { return static_cast<int>(nodes.size()); }
  std::span<const int> members(int a) const { return {desc.data() + desc_off[a], desc.data() + desc_off[a + 1]}; }
};

struct LevelGraph {
  int level = 0;
  double threshold = 0;
  std::vector<std::pair<int, int>> edges;  // node indices, a < b
  std::vector<int> degree;
  std::vector<char> high;
};

struct ChargingCoverTree {
  double eps = 0, delta = 1, c = 20;
  std::vector<CoverLevel> levels;      // 0..m
  std::vector<LevelGraph> graphs;      // graphs[i] = H_i, i >= 1 (graphs[0] unused)
  std::vector<int> charged_at;         // per level-0 point, level it was charged at or -1
  std::vector<double> charge;          // amount charged to each point
  std::vector<int> times_charged;
  std::vector<std::vector<int>> stp_nodes;         // per level: node indices of Q
  std::vector<std::vector<std::pair<int, int>>> stp_edges;  // per level: STP(Q) edges as point ids
  std::vector<Point> stp_steiner;                  // extra points a plugin introduced
  std::vector<std::vector<std::pair<int, int>>> stp_steiner_edges;  // ids >= |V| refer to stp_steiner

  int height() const { return static_cast<int>(levels.size()) - 1; }
};

enum class stp_plugin { greedy, complete };

inline stp_plugin parse_stp_plugin(const std::string& s) {
  if (s == "greedy") return stp_plugin::greedy;
  if (s == "complete") return stp_plugin::complete;
  throw invalid_input("unknown stp plugin: " + s);
}

inline std::string to_string(stp_plugin p) { return p == stp_plugin::greedy ? "greedy" : "complete"; }

// A (1+eps)-spanner of Q; originals first, in Q's order.
inline GeometricGraph blackbox_stp(const PointSet& Q, double eps, stp_plugin plugin = stp_plugin::greedy) {
  require(!Q.empty(), "stp: empty point set");
  require(eps > 0, "stp: eps must be positive");
  if (Q.size() == 1) return GeometricGraph::from_points(Q);
  if (plugin == stp_plugin::greedy) return greedy_spanner(Q, 1 + eps);
  auto g = GeometricGraph::from_points(Q);
  const int n = static_cast<int>(Q.size());
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) g.add_edge(u, v);
  return g;
}

namespace detail {

// Split a tree into connected clusters. Heights run over vertex weights plus edge weights;
// a vertex whose open height reaches thr closes a cluster. A leftover top part of
// diameter below thr joins an adjacent cluster. Returns a cluster label per vertex.
inline void greedy_split(int root, const std::vector<std::vector<std::pair<int, double>>>& adj,
                         const std::vector<double>& vw, double thr, std::vector<int>& label) {
  // iterative DFS order
  std::vector<int> order;
  std::vector<int> stack{root};
  std::unordered_map<int, int> parent;
  parent[root] = -1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    order.push_back(v);
    for (auto [y, w] : adj[v])
      if (!parent.count(y)) parent[y] = v, stack.push_back(y);
  }
  std::unordered_map<int, double> h, best1, best2;
  std::unordered_map<int, char> cut;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    int v = *it;
    double b1 = 0, b2 = 0;
    for (auto [y, w] : adj[v]) {
      if (y == parent[v] || cut[y]) continue;
      double t = h[y] + w;
      if (t > b1) b2 = b1, b1 = t;
      else if (t > b2) b2 = t;
    }
    h[v] = vw[v] + b1;
    best1[v] = b1, best2[v] = b2;
    if (h[v] >= thr) cut[v] = 1;
  }
  // labels top-down: a cut vertex starts its own cluster
  for (int v : order) {
    if (cut[v]) {
      label[v] = v;
    } else {
      label[v] = parent[v] < 0 ? v : label[parent[v]];
    }
  }
  if (!cut[root]) {
    // leftover around the root; its diameter decides whether it stands alone
    double vd = 0;
    for (int v : order)
      if (label[v] == root) vd = std::max(vd, vw[v] + best1[v] + best2[v]);
    if (vd < thr) {
      int target = -1;
      for (int v : order)
        if (cut[v] && parent[v] >= 0 && label[parent[v]] == root) {
          target = v;
          break;
        }
      if (target >= 0)
        for (int v : order)
          if (label[v] == root) label[v] = target;
    }
  }
}

}  // namespace detail

// Exact Euclidean diameter of one node's descendants. A subdivision point whose two chain
// neighbours are also descendants lies strictly inside a collinear run and cannot be extreme.
inline double descendant_diameter(const GeometricGraph& S, std::span<const int> members, const std::vector<int>& owner,
                                  int node) {
  const auto& adj = S.adjacency();
  std::vector<int> cand;
  for (int v : members) {
    bool inner = S.is_steiner(v) && adj.degree(v) == 2 && owner[adj.target[adj.offset[v]]] == node &&
                 owner[adj.target[adj.offset[v] + 1]] == node;
    if (!inner) cand.push_back(v);
  }
  double d2 = 0;
  for (std::size_t a = 0; a < cand.size(); ++a)
    for (std::size_t b = a + 1; b < cand.size(); ++b) d2 = std::max(d2, dist_sq(S.point(cand[a]), S.point(cand[b])));
  return std::sqrt(d2);
}

// H_i: an edge between two level-i nodes whenever some class pair joins their descendants.
inline LevelGraph build_level_graph(const ChargingCoverTree& T, int i, const std::vector<std::pair<int, int>>& pairs,
                                    double threshold) {
  require(i >= 1 && i <= T.height(), "level graph: level out of range");
  const auto& lv = T.levels[i];
  std::vector<int> owner(T.levels[0].size(), -1);
  for (int a = 0; a < lv.size(); ++a)
    for (int v : lv.members(a)) owner[v] = a;
  LevelGraph H;
  H.level = i;
  H.threshold = threshold;
  for (auto [u, v] : pairs) {
    int a = owner[u], b = owner[v];
    if (a != b) H.edges.push_back({std::min(a, b), std::max(a, b)});
  }
  std::sort(H.edges.begin(), H.edges.end());
  H.edges.erase(std::unique(H.edges.begin(), H.edges.end()), H.edges.end());
  H.degree.assign(lv.size(), 0);
  for (auto [a, b] : H.edges) ++H.degree[a], ++H.degree[b];
  H.high.assign(lv.size(), 0);
  for (int a = 0; a < lv.size(); ++a) H.high[a] = H.degree[a] >= threshold;
  return H;
}

namespace detail {

inline void fill_desc(CoverLevel& next, const CoverLevel& prev) {
  const int m = next.size();
  next.desc_off.assign(m + 1, 0);
  for (int a = 0; a < prev.size(); ++a) next.desc_off[prev.parent[a] + 1] += prev.desc_off[a + 1] - prev.desc_off[a];
  for (int b = 0; b < m; ++b) next.desc_off[b + 1] += next.desc_off[b];
  next.desc.resize(next.desc_off[m]);
  std::vector<int> pos(next.desc_off.begin(), next.desc_off.end() - 1);
  for (int a = 0; a < prev.size(); ++a)
    for (int v : prev.members(a)) next.desc[pos[prev.parent[a]]++] = v;
  for (int b = 0; b < m; ++b) std::sort(next.desc.begin() + next.desc_off[b], next.desc.begin() + next.desc_off[b + 1]);
}

// turn a per-node cluster label (a node index of `prev`) into the next level
inline CoverLevel make_level(CoverLevel& prev, const std::vector<int>& label, const std::vector<char>& how, double L) {
  CoverLevel next;
  next.L = L;
  // cluster root: the Step-A centre if there is one, else the lowest point id among the members
  std::unordered_map<int, int> root_of;
  for (int a = 0; a < prev.size(); ++a) {
    auto [it, fresh] = root_of.try_emplace(label[a], a);
    if (!fresh && prev.nodes[a] < prev.nodes[it->second]) it->second = a;
  }
  for (auto& [lab, a] : root_of)
    if (how[lab] == 'A') a = lab;
  std::vector<std::pair<int, int>> roots;  // (point id, cluster label)
  for (auto [lab, a] : root_of) roots.push_back({prev.nodes[a], lab});
  std::sort(roots.begin(), roots.end());
  std::unordered_map<int, int> index;
  for (int b = 0; b < static_cast<int>(roots.size()); ++b) {
    next.nodes.push_back(roots[b].first);
    index[roots[b].second] = b;
  }
  next.made_by.assign(next.nodes.size(), '?');
  prev.parent.assign(prev.size(), -1);
  for (int a = 0; a < prev.size(); ++a) prev.parent[a] = index[label[a]];
  for (auto [lab, a] : root_of) next.made_by[index[lab]] = how[lab];
  fill_desc(next, prev);
  return next;
}

}  // namespace detail

struct CoverTreeInput {
  const GeometricGraph* S = nullptr;        // subdivided MST over P u K, originals first
  double eps = 0;
  double delta = 1;
  const std::vector<EdgeClass>* classes = nullptr;  // levels 1..m for this delta
  stp_plugin plugin = stp_plugin::greedy;
  double stp_eps = 0;                        // defaults to eps
};

// Builds levels 0..m, H_i per level, runs STP on the high-degree nodes and charges its weight.
inline ChargingCoverTree build_charging_cover_tree(const CoverTreeInput& in, const CoverTreeConfig& cfg = {}) {
  require(in.S && in.classes, "cover tree: missing input");
  const GeometricGraph& S = *in.S;
  const double eps = in.eps, delta = in.delta;
  inverse_log2(eps);
  require(delta >= 1 && delta <= 1 / eps, "cover tree: delta must be in [1, 1/eps]");
  require(S.num_edges() + 1 == static_cast<std::size_t>(S.num_vertices()), "cover tree: S must be a tree");
  for (const auto& e : S.edges()) require(e.weight <= 1 + 1e-12, "cover tree: tree edges must be at most 1");

  const int nv = S.num_vertices();
  const int m = static_cast<int>(in.classes->size());
  const double thr = cfg.degree_threshold > 0 ? cfg.degree_threshold : 4 * cfg.c / eps;
  ChargingCoverTree T;
  T.eps = eps, T.delta = delta, T.c = cfg.c;
  T.charged_at.assign(nv, -1);
  T.charge.assign(nv, 0);
  T.times_charged.assign(nv, 0);
  T.graphs.resize(m + 1);
  T.stp_nodes.resize(m + 1);
  T.stp_edges.resize(m + 1);
  T.stp_steiner_edges.resize(m + 1);

  // level 0: every point is its own node
  CoverLevel base;
  base.nodes.resize(nv);
  std::iota(base.nodes.begin(), base.nodes.end(), 0);
  base.desc_off.resize(nv + 1);
  std::iota(base.desc_off.begin(), base.desc_off.end(), 0);
  base.desc = base.nodes;
  base.diameter.assign(nv, 0);
  base.uncharged.assign(nv, 1);
  base.high.assign(nv, 0);
  base.made_by.assign(nv, '0');
  T.levels.push_back(std::move(base));
  if (m == 0 || nv == 0) return T;

  std::vector<std::vector<std::pair<int, double>>> tree_adj(nv);
  for (const auto& e : S.edges()) tree_adj[e.u].push_back({e.v, e.weight}), tree_adj[e.v].push_back({e.u, e.weight});

  // level 1: clusters of tree diameter in [delta, 3 delta + 2]
  {
    std::vector<int> label(nv, -1);
    std::vector<double> zero(nv, 0);
    detail::greedy_split(0, tree_adj, zero, delta, label);
    T.levels.push_back(detail::make_level(T.levels[0], label, std::vector<char>(nv, '1'), delta / eps));
  }

  std::vector<int> owner(nv);
  for (int i = 1; i <= m; ++i) {
    CoverLevel& lv = T.levels[i];
    const int N = lv.size();
    for (int a = 0; a < N; ++a)
      for (int v : lv.members(a)) owner[v] = a;

    // strong charging invariant, checked before this level's charging
    lv.diameter.resize(N);
    lv.uncharged.assign(N, 0);
    for (int a = 0; a < N; ++a) {
      lv.diameter[a] = descendant_diameter(S, lv.members(a), owner, a);
      for (int v : lv.members(a)) lv.uncharged[a] += T.charged_at[v] < 0;
      double need = std::max(eps * lv.L, lv.diameter[a] + 1);
      ensure(lv.uncharged[a] >= need - 1e-9, "cover tree: charging invariant broken at level " + std::to_string(i) +
                                                 ", node " + std::to_string(lv.nodes[a]) + " (" +
                                                 std::to_string(lv.uncharged[a]) + " uncharged, need " +
                                                 std::to_string(need) + ")");
    }

    auto& H = T.graphs[i];
    H = build_level_graph(T, i, (*in.classes)[i - 1].pairs, thr);
    lv.high = H.high;

    // Step 2: STP over the high-degree nodes, charged to ceil(eps L_i / 2) uncharged descendants of each
    std::vector<int> Q;
    for (int a = 0; a < N; ++a)
      if (H.high[a]) Q.push_back(a);
    T.stp_nodes[i] = Q;
    if (!Q.empty()) {
      std::vector<Point> qs;
      for (int a : Q) qs.push_back(S.point(lv.nodes[a]));
      auto G = blackbox_stp(PointSet(qs), in.stp_eps > 0 ? in.stp_eps : eps, in.plugin);
      std::vector<int> id(G.num_vertices());
      for (int k = 0; k < G.num_vertices(); ++k) {
        if (k < static_cast<int>(Q.size())) {
          id[k] = lv.nodes[Q[k]];
        } else {
          id[k] = nv + static_cast<int>(T.stp_steiner.size());
          T.stp_steiner.push_back(G.point(k));
        }
      }
      for (const auto& e : G.edges()) {
        if (id[e.u] < nv && id[e.v] < nv)
          T.stp_edges[i].push_back({id[e.u], id[e.v]});
        else
          T.stp_steiner_edges[i].push_back({id[e.u], id[e.v]});
      }
      const int take = static_cast<int>(std::ceil(eps * lv.L / 2 - 1e-9));
      std::vector<int> X;
      for (int a : Q) {
        int got = 0;
        for (int v : lv.members(a)) {
          if (got == take) break;
          if (T.charged_at[v] < 0) T.charged_at[v] = i, X.push_back(v), ++got;
        }
        ensure(got == take, "cover tree: node " + std::to_string(lv.nodes[a]) + " has too few uncharged descendants");
      }
      const double share = G.total_weight() / static_cast<double>(X.size());
      for (int v : X) T.charge[v] += share, ++T.times_charged[v];
    }
    if (i == m) break;

    // level i+1
    std::vector<int> label(N, -1);
    std::vector<char> how(N, '?');
    std::vector<char> marked(N, 0);
    std::vector<std::vector<int>> hn(N);
    for (auto [a, b] : H.edges) hn[a].push_back(b), hn[b].push_back(a);
    // Step A
    for (int p = 0; p < N; ++p) {
      if (!H.high[p] || marked[p]) continue;
      int free = 0;
      for (int q : hn[p]) free += !marked[q];
      if (free < thr) continue;
      label[p] = p, how[p] = 'A', marked[p] = 1;
      for (int q : hn[p])
        if (!marked[q]) label[q] = p, marked[q] = 1;
    }
    bool any_a = false;
    for (int p = 0; p < N; ++p) any_a |= how[p] == 'A';
    for (int x = 0; x < N; ++x) {
      if (!H.high[x] || marked[x]) continue;
      int q = -1;
      for (int y : hn[x])
        if (marked[y] && (q < 0 || y < q)) q = y;
      ensure(q >= 0, "cover tree: high-degree node without a marked neighbour");
      label[x] = label[q];
    }
    for (int x = 0; x < N; ++x)
      if (H.high[x]) marked[x] = 1;

    // forest F over the unmarked nodes, edges from tree edges between their descendants
    union_find uf(N);
    std::vector<std::vector<std::pair<int, double>>> fadj(N);
    for (const auto& e : S.edges()) {
      int a = owner[e.u], b = owner[e.v];
      if (a == b || marked[a] || marked[b]) continue;
      if (uf.unite(a, b)) fadj[a].push_back({b, 0.0}), fadj[b].push_back({a, 0.0});
    }
    std::vector<std::vector<int>> comps;
    {
      std::vector<int> seen(N, 0);
      for (int a = 0; a < N; ++a) {
        if (marked[a] || seen[a]) continue;
        comps.push_back({});
        std::vector<int> st{a};
        seen[a] = 1;
        while (!st.empty()) {
          int x = st.back();
          st.pop_back();
          comps.back().push_back(x);
          for (auto [y, w] : fadj[x])
            if (!seen[y]) seen[y] = 1, st.push_back(y);
        }
      }
    }
    const double L = lv.L;
    std::vector<const std::vector<int>*> small;
    for (auto& C : comps) {
      std::sort(C.begin(), C.end());
      // vertex-diameter of C
      std::unordered_map<int, double> down;
      std::vector<int> order, stk{C[0]};
      std::unordered_map<int, int> par;
      par[C[0]] = -1;
      while (!stk.empty()) {
        int x = stk.back();
        stk.pop_back();
        order.push_back(x);
        for (auto [y, w] : fadj[x])
          if (y != par[x]) par[y] = x, stk.push_back(y);
      }
      double vd = 0;
      for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int x = *it;
        double b1 = 0, b2 = 0;
        for (auto [y, w] : fadj[x]) {
          if (y == par[x]) continue;
          double t = down[y];
          if (t > b1) b2 = b1, b1 = t;
          else if (t > b2) b2 = t;
        }
        down[x] = lv.diameter[x] + b1;
        vd = std::max(vd, lv.diameter[x] + b1 + b2);
      }
      if (vd >= L || !any_a) {
        // Step B (also the fallback when nothing was marked: F is one tree)
        std::vector<int> lab(N, -1);
        detail::greedy_split(C[0], fadj, lv.diameter, vd >= L ? L : infinity, lab);
        for (int x : C) label[x] = lab[x], how[x] = 'B';
        continue;
      }
      small.push_back(&C);
    }
    // Step C: a small component joins the level-(i+1) node of a marked node it reaches by a tree edge
    if (!small.empty()) {
      std::vector<int> comp(N, -1), target(small.size(), -1);
      for (std::size_t k = 0; k < small.size(); ++k)
        for (int x : *small[k]) comp[x] = static_cast<int>(k);
      for (const auto& e : S.edges()) {
        int a = owner[e.u], b = owner[e.v];
        if (comp[a] >= 0 && marked[b] && target[comp[a]] < 0) target[comp[a]] = label[b];
        if (comp[b] >= 0 && marked[a] && target[comp[b]] < 0) target[comp[b]] = label[a];
      }
      for (std::size_t k = 0; k < small.size(); ++k) {
        ensure(target[k] >= 0, "cover tree: small component without a tree edge to a marked node");
        for (int x : *small[k]) label[x] = target[k], how[x] = 'C';
      }
    }
    T.levels.push_back(detail::make_level(T.levels[i], label, how, L / eps));
  }
  T.levels.back().parent.assign(T.levels.back().size(), -1);
  return T;
}

// -- validators --

struct CheckResult {
  bool ok = true;
  std::string detail;
  double worst = 0;  // largest observed ratio to the bound
  void fail(const std::string& s) {
    if (ok) detail = s;
    ok = false;
  }
};

// (a) every level-i node covers its descendants within c eps L_i
inline CheckResult check_cover_radius(const ChargingCoverTree& T, const GeometricGraph& S) {
  CheckResult r;
  for (int i = 1; i <= T.height(); ++i) {
    const auto& lv = T.levels[i];
    const double bound = T.c * T.eps * lv.L;
    for (int a = 0; a < lv.size(); ++a) {
      double far = 0;
      for (int v : lv.members(a)) far = std::max(far, dist(S.point(lv.nodes[a]), S.point(v)));
      r.worst = std::max(r.worst, far / bound);
      if (far > bound) r.fail("level " + std::to_string(i) + " node " + std::to_string(lv.nodes[a]) + " radius " + std::to_string(far));
    }
  }
  return r;
}

// (b) strong charging invariant recomputed from the final charge ledger
inline CheckResult check_sci(const ChargingCoverTree& T, const GeometricGraph& S) {
  CheckResult r;
  std::vector<int> owner(S.num_vertices(), -1);
  for (int i = 1; i <= T.height(); ++i) {
    const auto& lv = T.levels[i];
    if (T.graphs[i].degree.empty()) continue;  // levels above the last class are not charged
    for (int a = 0; a < lv.size(); ++a)
      for (int v : lv.members(a)) owner[v] = a;
    for (int a = 0; a < lv.size(); ++a) {
      int unc = 0;
      for (int v : lv.members(a)) unc += T.charged_at[v] < 0 || T.charged_at[v] >= i;
      double need = std::max(T.eps * lv.L, descendant_diameter(S, lv.members(a), owner, a) + 1);
      r.worst = std::max(r.worst, need / unc);
      if (unc < need - 1e-9)
        r.fail("level " + std::to_string(i) + " node " + std::to_string(lv.nodes[a]) + ": " + std::to_string(unc) +
               " uncharged, need " + std::to_string(need));
    }
  }
  return r;
}

// (c) each point charged at most once; high-degree nodes charge exactly ceil(eps L_i / 2), others none
inline CheckResult check_charging(const ChargingCoverTree& T) {
  CheckResult r;
  for (int i = 1; i <= T.height(); ++i) {
    const auto& lv = T.levels[i];
    if (T.graphs[i].degree.empty()) continue;
    const int take = static_cast<int>(std::ceil(T.eps * lv.L / 2 - 1e-9));
    for (int a = 0; a < lv.size(); ++a) {
      int here = 0;
      for (int v : lv.members(a)) here += T.charged_at[v] == i;
      int want = T.graphs[i].high[a] ? take : 0;
      if (here != want)
        r.fail("level " + std::to_string(i) + " node " + std::to_string(lv.nodes[a]) + " charged " + std::to_string(here) +
               ", expected " + std::to_string(want));
    }
  }
  for (std::size_t v = 0; v < T.times_charged.size(); ++v)
    if (T.times_charged[v] > 1) r.fail("point " + std::to_string(v) + " charged " + std::to_string(T.times_charged[v]) + " times");
  return r;
}

// (d) E_T distance between sampled descendant pairs of a node is at most 4 c eps L_i
inline CheckResult check_tree_distances(const ChargingCoverTree& T, const GeometricGraph& S, int samples, std::uint64_t seed) {
  CheckResult r;
  const int top = T.height();
  if (top < 1) return r;
  std::mt19937_64 rng(seed);
  // ancestor chain of a level-0 point: node index per level
  auto chain = [&](int v, int upto) {
    std::vector<int> c{v};
    for (int i = 0; i < upto; ++i) c.push_back(T.levels[i].parent[c.back()]);
    return c;
  };
  for (int s = 0; s < samples; ++s) {
    int i = 1 + static_cast<int>(rng() % top);
    const auto& lv = T.levels[i];
    int a = static_cast<int>(rng() % lv.size());
    auto mem = lv.members(a);
    if (mem.size() < 2) continue;
    int x = mem[rng() % mem.size()], y = mem[rng() % mem.size()];
    if (x == y) continue;
    auto cx = chain(x, i), cy = chain(y, i);
    // first level where the chains meet
    int meet = i;
    while (meet > 0 && cx[meet - 1] == cy[meet - 1]) --meet;
    auto walk = [&](const std::vector<int>& c) {
      double d = 0;
      for (int l = 0; l < meet; ++l) d += dist(S.point(T.levels[l].nodes[c[l]]), S.point(T.levels[l + 1].nodes[c[l + 1]]));
      return d;
    };
    double d = walk(cx) + walk(cy);
    double bound = 4 * T.c * T.eps * lv.L;
    r.worst = std::max(r.worst, d / bound);
    if (d > bound) r.fail("level " + std::to_string(i) + " pair " + std::to_string(x) + "," + std::to_string(y) + " tree distance " + std::to_string(d));
  }
  return r;
}

// -- the spanner --

struct HighdimOptions {
  double c_hd = 8;  // internal eps = largest power of 1/2 not above eps / c_hd
  CoverTreeConfig tree{};
  stp_plugin plugin = stp_plugin::greedy;
  bool prefilter_logn = false;
  bool simplify = true;
  verify_mode verify = verify_mode::automatic;
  std::uint64_t seed = 1;
};

inline double highdim_internal_eps(double eps, const HighdimOptions& o) {
  double e = std::ldexp(1.0, -pow2_ceil_exponent(o.c_hd / eps));
  return std::min(e, 0.5);
}

struct HighdimDetail {
  double scale = 1;                 // coordinates were multiplied by this
  GeometricGraph subdivided;        // scaled subdivided MST
  std::vector<ChargingCoverTree> trees;  // one per delta with nonempty classes
};

inline SpannerResult build_highdim_spanner(const PointSet& P, double eps, const HighdimOptions& opt = {},
                                           HighdimDetail* keep = nullptr) {
  require(P.dim() >= 2, "highdim spanner: dimension must be at least 2");
  require(eps > 0 && eps <= 0.5, "highdim spanner: eps must be in (0, 1/2]");
  if (P.size() <= 2) return trivial_spanner(P, opt.verify, 1 + eps, opt.seed);
  auto t0 = std::chrono::steady_clock::now();
  const double ei = highdim_internal_eps(eps, opt);
  const int J = inverse_log2(ei);

  // scale so the closest pair is exactly 1/ei
  const double dmin = extreme_pair_distances(P).min;
  const double s = (1 / ei) / dmin;
  std::vector<Point> scaled;
  for (const auto& p : P) scaled.push_back(p * s);
  const PointSet Ps(std::move(scaled));
  const int n = static_cast<int>(P.size());

  auto sub = subdivide_mst(mst(Ps));
  GeometricGraph& S = sub.graph;
  const int nv = S.num_vertices();
  GeometricGraph g = S;  // E_sp starts as the subdivided MST, E_T follows per delta

  std::vector<std::vector<EdgeClass>> per_delta(J);
  for (int j = 0; j < J; ++j) per_delta[j] = partition_edge_classes(Ps, ei, std::ldexp(1.0, j));
  std::size_t seeded = 0;
  if (opt.prefilter_logn) {
    const double thr = S.total_weight() / (static_cast<double>(n) * n);
    for (auto& cls : per_delta)
      for (auto& c : cls) {
        auto keep_it = c.pairs.begin();
        for (auto pr : c.pairs) {
          if (dist(Ps[pr.first], Ps[pr.second]) <= thr)
            g.add_edge(pr.first, pr.second), ++seeded;
          else
            *keep_it++ = pr;
        }
        c.pairs.erase(keep_it, c.pairs.end());
      }
  }

  SpannerReport rep;
  double w_et = 0, w_step1 = 0, w_step2 = 0, max_charge = 0;
  std::size_t high_nodes = 0, charged = 0, levels = 0;
  std::vector<int> extra;  // ids of STP Steiner points in g
  HighdimDetail local;
  for (int j = 0; j < J; ++j) {
    const auto& classes = per_delta[j];
    if (classes.empty()) continue;
    CoverTreeInput in{&S, ei, std::ldexp(1.0, j), &classes, opt.plugin, ei};
    auto T = build_charging_cover_tree(in, opt.tree);
    levels += T.height();
    for (int i = 1; i <= T.height(); ++i) {
      const auto& up = T.levels[i];
      const auto& lo = T.levels[i - 1];
      for (int a = 0; a < lo.size(); ++a) {
        int p = lo.nodes[a], q = up.nodes[lo.parent[a]];
        if (p != q && g.add_edge(p, q)) w_et += dist(S.point(p), S.point(q));
      }
    }
    for (int i = 1; i <= T.height(); ++i) {
      const auto& H = T.graphs[i];
      const auto& lv = T.levels[i];
      for (auto [a, b] : H.edges)
        if (!H.high[a] || !H.high[b]) {
          int p = lv.nodes[a], q = lv.nodes[b];
          if (g.add_edge(p, q)) w_step1 += dist(S.point(p), S.point(q));
        }
      high_nodes += T.stp_nodes[i].size();
      for (auto [p, q] : T.stp_edges[i])
        if (g.add_edge(p, q)) w_step2 += dist(S.point(p), S.point(q));
      if (!T.stp_steiner_edges[i].empty()) {
        auto id = [&](int x) {
          if (x < nv) return x;
          int k = x - nv;
          while (static_cast<int>(extra.size()) <= k) extra.push_back(-1);
          if (extra[k] < 0) extra[k] = g.add_vertex(T.stp_steiner[k], vertex_kind::steiner);
          return extra[k];
        };
        for (auto [p, q] : T.stp_steiner_edges[i]) {
          int a = id(p), b = id(q);
          if (g.add_edge(a, b)) w_step2 += dist(g.point(a), g.point(b));
        }
        extra.clear();
      }
    }
    for (int v = 0; v < nv; ++v) {
      max_charge = std::max(max_charge, T.charge[v]);
      charged += T.charged_at[v] >= 0;
    }
    if (keep) local.trees.push_back(std::move(T));
  }

  const int before = g.num_steiner();
  if (opt.simplify) g = simplify_steiner(g);
  // back to input coordinates: originals exactly, Steiner points scaled down
  GeometricGraph out = GeometricGraph::from_points(P);
  {
    std::vector<int> id(g.num_vertices());
    for (int v = 0; v < g.num_vertices(); ++v) id[v] = v < n ? v : out.add_vertex(g.point(v) * (1 / s), vertex_kind::steiner);
    out.reserve_edges(g.num_edges());
    for (const auto& e : g.edges()) out.add_edge(id[e.u], id[e.v]);
  }
  rep.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  rep.stats["eps_internal"] = ei;
  rep.stats["deltas"] = J;
  rep.stats["levels"] = static_cast<double>(levels);
  rep.stats["subdivision_points"] = static_cast<double>(sub.steiner.size());
  rep.stats["steiner_before_simplify"] = before;
  rep.stats["w_tree_edges"] = w_et / s;
  rep.stats["w_step1"] = w_step1 / s;
  rep.stats["w_step2"] = w_step2 / s;
  rep.stats["high_degree_nodes"] = static_cast<double>(high_nodes);
  rep.stats["charged_points"] = static_cast<double>(charged);
  rep.stats["max_point_charge"] = max_charge / s;
  rep.stats["prefilter_edges"] = static_cast<double>(seeded);
  fill_basic_report(out, mst_weight(P), rep);
  check_stretch(out, opt.verify, 1 + eps, opt.seed, rep);
  if (keep) {
    local.scale = s;
    local.subdivided = std::move(S);
    *keep = std::move(local);
  }
  return {std::move(out), std::move(rep)};
}

}  // namespace lightspan
