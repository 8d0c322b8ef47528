#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <random>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <absl/container/flat_hash_map.h>
#include <absl/container/flat_hash_set.h>

#include "lightspan/error.hpp"
#include "lightspan/geometry.hpp"

namespace lightspan {

inline constexpr double infinity = std::numeric_limits<double>::infinity();

enum class vertex_kind : std::uint8_t { original, steiner };

struct Vertex {
  int id = 0;
  Point point;
  vertex_kind kind = vertex_kind::original;
};

struct Edge {
  int u = 0, v = 0;
  double weight = 0;
};

inline std::uint64_t edge_key(int u, int v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) | static_cast<std::uint32_t>(v);
}

// compressed adjacency, built on demand
struct Adjacency {
  std::vector<int> offset, target;
  std::vector<double> weight;
  int degree(int v) const { return offset[v + 1] - offset[v]; }
};

class GeometricGraph {
 public:
  GeometricGraph() = default;
  explicit GeometricGraph(int dim) : dim_(dim) {}

  // original vertices must come first, in point-set order
  static GeometricGraph from_points(const PointSet& P) {
    GeometricGraph g(P.dim());
    g.vertices_.reserve(P.size());
    for (const auto& p : P) g.add_vertex(p, vertex_kind::original);
    return g;
  }

  int dim() const { return dim_; }
  int add_vertex(const Point& p, vertex_kind kind) {
    require(dim_ == 0 || p.dim() == dim_, "graph: dimension mismatch");
    if (dim_ == 0) dim_ = p.dim();
    if (kind == vertex_kind::original) {
      require(n_steiner_ == 0, "graph: original vertices must precede Steiner vertices");
      ++n_original_;
    } else {
      ++n_steiner_;
    }
    int id = static_cast<int>(vertices_.size());
    vertices_.push_back({id, p, kind});
    adj_.reset();
    return id;
  }

  // false if the edge already existed
  bool add_edge(int u, int v) {
    require(u >= 0 && v >= 0 && u < num_vertices() && v < num_vertices(), "graph: unknown vertex");
    require(u != v, "graph: self-loop");
    if (!keys_.insert(edge_key(u, v)).second) return false;
    edges_.push_back({std::min(u, v), std::max(u, v), dist(vertices_[u].point, vertices_[v].point)});
    adj_.reset();
    return true;
  }

  bool has_edge(int u, int v) const { return keys_.count(edge_key(u, v)) != 0; }

  void reserve_edges(std::size_t m) {
    edges_.reserve(m);
    keys_.reserve(m);
  }

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_original() const { return n_original_; }
  int num_steiner() const { return n_steiner_; }
  std::size_t num_edges() const { return edges_.size(); }
  const std::vector<Vertex>& vertices() const { return vertices_; }
  const Vertex& vertex(int v) const { return vertices_[v]; }
  const Point& point(int v) const { return vertices_[v].point; }
  bool is_steiner(int v) const { return vertices_[v].kind == vertex_kind::steiner; }
  const std::vector<Edge>& edges() const { return edges_; }

  double total_weight() const {
    double s = 0;
    for (const auto& e : edges_) s += e.weight;
    return s;
  }

  const Adjacency& adjacency() const {
    if (!adj_) {
      Adjacency a;
      int n = num_vertices();
      a.offset.assign(n + 1, 0);
      for (const auto& e : edges_) ++a.offset[e.u + 1], ++a.offset[e.v + 1];
      for (int i = 0; i < n; ++i) a.offset[i + 1] += a.offset[i];
      a.target.resize(2 * edges_.size());
      a.weight.resize(2 * edges_.size());
      std::vector<int> pos(a.offset.begin(), a.offset.end() - 1);
      for (const auto& e : edges_) {
        a.target[pos[e.u]] = e.v, a.weight[pos[e.u]++] = e.weight;
        a.target[pos[e.v]] = e.u, a.weight[pos[e.v]++] = e.weight;
      }
      adj_ = std::move(a);
    }
    return *adj_;
  }

 private:
  int dim_ = 0;
  int n_original_ = 0, n_steiner_ = 0;
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  absl::flat_hash_set<std::uint64_t> keys_;
  mutable std::optional<Adjacency> adj_;
};

// Accumulates a geometric graph; Steiner points with identical coordinates are merged,
// and a Steiner point landing on an original point becomes that original point.
class GraphBuilder {
 public:
  explicit GraphBuilder(const PointSet& P) : g_(GeometricGraph::from_points(P)) {
    at_.reserve(P.size() * 4);
    for (int i = 0; i < static_cast<int>(P.size()); ++i) at_.emplace(P[i], i);
  }

  int vertex_at(const Point& p) {
    auto [it, fresh] = at_.try_emplace(p, 0);
    if (fresh) it->second = g_.add_vertex(p, vertex_kind::steiner);
    return it->second;
  }

  void edge(int u, int v) {
    if (u != v) g_.add_edge(u, v);
  }
  void edge(const Point& a, const Point& b) { edge(vertex_at(a), vertex_at(b)); }

  // merge another graph whose original vertices coincide with ours
  void absorb(const GeometricGraph& h) {
    std::vector<int> map(h.num_vertices());
    for (int v = 0; v < h.num_vertices(); ++v)
      map[v] = h.is_steiner(v) ? vertex_at(h.point(v)) : v;
    for (const auto& e : h.edges()) edge(map[e.u], map[e.v]);
  }

  GeometricGraph& graph() { return g_; }
  GeometricGraph take() { return std::move(g_); }

  // Is there a u-v path of length <= bound in the graph so far? A* with the Euclidean heuristic,
  // so only the ellipse {z : |uz| + |zv| <= bound} is explored.
  bool within(int u, int v, double bound) {
    sync_();
    ++epoch_;
    const double gx0 = node_[v].x, gy0 = node_[v].y;
    auto h = [&](double x, double y) { return std::sqrt((x - gx0) * (x - gx0) + (y - gy0) * (y - gy0)); };
    auto later = [](const Item& a, const Item& b) { return a.f > b.f; };
    heap_.clear();
    node_[u].g = 0, node_[u].epoch = epoch_;
    heap_.push_back({h(node_[u].x, node_[u].y), 0, u});
    while (!heap_.empty()) {
      std::pop_heap(heap_.begin(), heap_.end(), later);
      const Item it = heap_.back();
      heap_.pop_back();
      if (it.x == v) return true;
      const Node& nx = node_[it.x];
      if (it.g > nx.g) continue;  // superseded by a shorter route
      for (int bk = nx.head; bk >= 0; bk = block_[bk].next) {
        // the neighbours are independent loads; start them together
        for (int j = 0; j < block_size && block_[bk].to[j] >= 0; ++j) __builtin_prefetch(&node_[block_[bk].to[j]]);
        for (int j = 0; j < block_size; ++j) {
          const int to = block_[bk].to[j];
          if (to < 0) break;
          Node& ny = node_[to];
          double gy = it.g + block_[bk].w[j];
          if (ny.epoch == epoch_ && gy >= ny.g) continue;
          double fy = gy + h(ny.x, ny.y);
          if (fy > bound) continue;
          ny.g = gy, ny.epoch = epoch_;
          if (ny.head >= 0) __builtin_prefetch(&block_[ny.head]);
          heap_.push_back({fy, gy, to});
          std::push_heap(heap_.begin(), heap_.end(), later);
        }
      }
    }
    return false;
  }

 private:
  // per-vertex search record and small neighbour blocks, so a search stays in cache
  struct Node {
    double x, y, g;
    unsigned epoch;
    int head;
  };
  static constexpr int block_size = 4;
  struct Block {
    int to[block_size];
    int next;
    double w[block_size];
  };
  struct Item {
    double f, g;
    int x;
  };

  void link_(int a, int b, double w) {
    int bk = node_[a].head;
    if (bk < 0 || block_[bk].to[block_size - 1] >= 0) {
      Block nb{};
      std::fill(std::begin(nb.to), std::end(nb.to), -1);
      nb.next = bk;
      block_.push_back(nb);
      bk = node_[a].head = static_cast<int>(block_.size()) - 1;
    }
    for (int j = 0; j < block_size; ++j)
      if (block_[bk].to[j] < 0) {
        block_[bk].to[j] = b, block_[bk].w[j] = w;
        return;
      }
  }

  void sync_() {
    require(g_.dim() <= 2, "graph builder: path search is planar only");
    for (int v = static_cast<int>(node_.size()); v < g_.num_vertices(); ++v) {
      const Point& p = g_.point(v);
      node_.push_back({p[0], g_.dim() > 1 ? p[1] : 0, infinity, 0, -1});
    }
    const auto& es = g_.edges();
    for (; synced_ < es.size(); ++synced_) {
      const auto& e = es[synced_];
      link_(e.u, e.v, e.weight), link_(e.v, e.u, e.weight);
    }
  }

  GeometricGraph g_;
  absl::flat_hash_map<Point, int, point_hash> at_;
  std::vector<Node> node_;
  std::vector<Block> block_;
  std::size_t synced_ = 0;
  unsigned epoch_ = 0;
  std::vector<Item> heap_;
};

// -- shortest paths --

class Dijkstra {
 public:
  explicit Dijkstra(const GeometricGraph& g) : adj_(g.adjacency()), dist_(g.num_vertices(), infinity), n_(g.num_vertices()) {}

  // distances from s; stops early once every vertex in `until` is settled (if nonempty)
  const std::vector<double>& run(int s, const std::vector<int>& until = {}) {
    require(s >= 0 && s < n_, "shortest path: unknown vertex");
    for (int v : touched_) dist_[v] = infinity;
    touched_.clear();
    std::size_t pending = until.size();
    if (pending) {
      if (want_.size() != static_cast<std::size_t>(n_)) want_.assign(n_, 0);
      for (int t : until) want_[t] = 1;
    }
    using item = std::pair<double, int>;
    std::priority_queue<item, std::vector<item>, std::greater<>> pq;
    dist_[s] = 0;
    touched_.push_back(s);
    pq.push({0, s});
    while (!pq.empty()) {
      auto [d, v] = pq.top();
      pq.pop();
      if (d > dist_[v]) continue;
      if (pending && want_[v]) {
        want_[v] = 0;
        if (--pending == 0) break;
      }
      for (int k = adj_.offset[v]; k < adj_.offset[v + 1]; ++k) {
        int w = adj_.target[k];
        double nd = d + adj_.weight[k];
        if (nd < dist_[w]) {
          if (dist_[w] == infinity) touched_.push_back(w);
          dist_[w] = nd;
          pq.push({nd, w});
        }
      }
    }
    for (int t : until) want_[t] = 0;
    return dist_;
  }

  double distance(int s, int t) {
    require(t >= 0 && t < n_, "shortest path: unknown vertex");
    return run(s, {t})[t];
  }

 private:
  const Adjacency& adj_;
  std::vector<double> dist_;
  std::vector<int> touched_;
  std::vector<char> want_;
  int n_;
};

inline double shortest_path_dist(const GeometricGraph& g, int u, int v) {
  Dijkstra d(g);
  return d.distance(u, v);
}

// worker count for verification fan-out
inline int worker_count() {
  if (const char* s = std::getenv("LIGHTSPAN_WORKERS")) {
    int w = std::atoi(s);
    if (w >= 1) return w;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

struct StretchResult {
  double max_stretch = 1;
  std::pair<int, int> worst{-1, -1};
  bool ok = true;
  std::size_t pairs_checked = 0;
};

inline StretchResult verify_stretch(const GeometricGraph& g, const std::vector<std::pair<int, int>>& pairs, double t,
                                    int workers = 0) {
  std::map<int, std::vector<int>> by_source;
  for (auto [u, v] : pairs) {
    require(u >= 0 && v >= 0 && u < g.num_original() && v < g.num_original(), "verify_stretch: pair endpoint is not an original vertex");
    require(dist(g.point(u), g.point(v)) > 0, "verify_stretch: zero-distance pair");
    by_source[u].push_back(v);
  }
  std::vector<std::pair<int, std::vector<int>>> jobs(by_source.begin(), by_source.end());
  g.adjacency();  // build once before threads share it
  if (workers <= 0) workers = worker_count();
  workers = std::max(1, std::min<int>(workers, static_cast<int>(jobs.size())));

  std::vector<StretchResult> part(workers);
  auto work = [&](int w) {
    Dijkstra dj(g);
    auto& r = part[w];
    for (std::size_t j = w; j < jobs.size(); j += workers) {
      int s = jobs[j].first;
      const auto& dist_s = dj.run(s, jobs[j].second);
      for (int v : jobs[j].second) {
        double st = dist_s[v] / dist(g.point(s), g.point(v));
        ++r.pairs_checked;
        if (r.worst.first < 0 || st > r.max_stretch) r.max_stretch = st, r.worst = {s, v};
      }
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> th;
    for (int w = 0; w < workers; ++w) th.emplace_back(work, w);
    for (auto& x : th) x.join();
  }
  StretchResult out;
  double worst = 0;
  for (auto& r : part) {
    out.pairs_checked += r.pairs_checked;
    if (r.worst.first >= 0 && (out.worst.first < 0 || r.max_stretch > worst)) worst = r.max_stretch, out.worst = r.worst;
  }
  out.max_stretch = out.worst.first < 0 ? 1 : worst;
  out.ok = out.max_stretch <= t;
  return out;
}

inline std::vector<std::pair<int, int>> all_original_pairs(int n) {
  std::vector<std::pair<int, int>> out;
  out.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) out.push_back({u, v});
  return out;
}

// reproducible sample: a few sources, many targets each, so the Dijkstra count stays small
inline std::vector<std::pair<int, int>> sampled_pairs(int n, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, n - 1);
  std::size_t sources = std::min<std::size_t>(n, 100);
  std::size_t per = (count + sources - 1) / sources;
  std::vector<std::pair<int, int>> out;
  out.reserve(sources * per);
  for (std::size_t s = 0; s < sources; ++s) {
    int u = pick(rng);
    for (std::size_t k = 0; k < per; ++k) {
      int v = pick(rng);
      if (v != u) out.push_back({u, v});
    }
  }
  return out;
}

enum class verify_mode { none, exact, sampled, automatic };

struct SpannerReport {
  double max_stretch = 1;
  std::pair<int, int> worst_pair{-1, -1};
  double total_weight = 0;
  double mst_weight = 0;
  double lightness = 1;
  std::size_t n_edges = 0;
  std::size_t n_steiner = 0;
  double elapsed = 0;
  std::string verification = "none";
  std::size_t pairs_checked = 0;
  std::map<std::string, double> stats;
};

inline void check_stretch(const GeometricGraph& g, verify_mode mode, double t, std::uint64_t seed, SpannerReport& rep) {
  int n = g.num_original();
  if (mode == verify_mode::none || n < 2) return;
  if (mode == verify_mode::automatic) mode = n <= 2000 ? verify_mode::exact : verify_mode::sampled;
  auto pairs = mode == verify_mode::exact ? all_original_pairs(n) : sampled_pairs(n, 100000, seed);
  auto r = verify_stretch(g, pairs, t);
  rep.max_stretch = r.max_stretch;
  rep.worst_pair = r.worst;
  rep.pairs_checked = r.pairs_checked;
  rep.verification = mode == verify_mode::exact ? "exact" : "sampled";
}

// g was built over points reordered as P'[k] = P[order[k]]; return it over the original order
inline GeometricGraph unpermute_originals(const GeometricGraph& g, const PointSet& P, const std::vector<int>& order) {
  GeometricGraph out = GeometricGraph::from_points(P);
  std::vector<int> id(g.num_vertices());
  for (int k = 0; k < g.num_original(); ++k) id[k] = order[k];
  for (int v = g.num_original(); v < g.num_vertices(); ++v) id[v] = out.add_vertex(g.point(v), vertex_kind::steiner);
  out.reserve_edges(g.num_edges());
  for (const auto& e : g.edges()) out.add_edge(id[e.u], id[e.v]);
  return out;
}

// -- Steiner cleanup --

// Drop Steiner leaves and replace Steiner vertices of degree 2 by a straight edge between
// their neighbours. Neither step lengthens any path between surviving vertices (triangle
// inequality) and neither adds weight.
inline GeometricGraph simplify_steiner(const GeometricGraph& g) {
  const int n = g.num_vertices();
  std::vector<std::vector<int>> nb(n);
  for (const auto& e : g.edges()) nb[e.u].push_back(e.v), nb[e.v].push_back(e.u);
  std::vector<char> dead(n, 0);
  std::deque<int> q;
  for (int v = 0; v < n; ++v)
    if (g.is_steiner(v) && nb[v].size() <= 2) q.push_back(v);
  auto unlink = [&](int a, int b) {
    auto& l = nb[a];
    l.erase(std::find(l.begin(), l.end(), b));
  };
  auto linked = [&](int a, int b) {
    const auto& l = nb[a].size() < nb[b].size() ? nb[a] : nb[b];
    int o = nb[a].size() < nb[b].size() ? b : a;
    return std::find(l.begin(), l.end(), o) != l.end();
  };
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    if (dead[v] || nb[v].size() > 2) continue;
    std::vector<int> ns = nb[v];
    for (int w : ns) unlink(w, v);
    nb[v].clear();
    dead[v] = 1;
    if (ns.size() == 2 && !linked(ns[0], ns[1])) {
      nb[ns[0]].push_back(ns[1]);
      nb[ns[1]].push_back(ns[0]);
    }
    for (int w : ns)
      if (g.is_steiner(w) && !dead[w] && nb[w].size() <= 2) q.push_back(w);
  }
  GeometricGraph out(g.dim());
  std::vector<int> id(n, -1);
  for (int v = 0; v < n; ++v)
    if (!dead[v]) id[v] = out.add_vertex(g.point(v), g.vertex(v).kind);
  std::size_t m = 0;
  for (int v = 0; v < n; ++v) m += nb[v].size();
  out.reserve_edges(m / 2);
  for (int v = 0; v < n; ++v)
    for (int w : nb[v])
      if (v < w) out.add_edge(id[v], id[w]);
  return out;
}

// the original vertices as a point set, in id order
inline PointSet originals_of(const GeometricGraph& g) {
  std::vector<Point> pts;
  pts.reserve(g.num_original());
  for (int v = 0; v < g.num_original(); ++v) pts.push_back(g.point(v));
  return PointSet(std::move(pts));
}

inline void fill_basic_report(const GeometricGraph& g, double mst_weight, SpannerReport& rep) {
  rep.total_weight = g.total_weight();
  rep.mst_weight = mst_weight;
  rep.lightness = mst_weight > 0 ? rep.total_weight / mst_weight : 1;
  rep.n_edges = g.num_edges();
  rep.n_steiner = static_cast<std::size_t>(g.num_steiner());
}

}  // namespace lightspan
