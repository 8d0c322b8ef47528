#pragma once

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lightspan/error.hpp"
#include "lightspan/geometry.hpp"
#include "lightspan/graph.hpp"

namespace lightspan {

// Point file: "d n" then n lines of d coordinates.
inline PointSet read_points(std::istream& in) {
  long long d = 0, n = 0;
  require(static_cast<bool>(in >> d >> n), "point file: missing header 'd n'");
  require(d >= 1 && d <= max_dim, "point file: dimension must be in [1, 8]");
  require(n >= 0, "point file: negative point count");
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(n));
  std::vector<double> xs(d);
  for (long long i = 0; i < n; ++i) {
    for (long long a = 0; a < d; ++a)
      require(static_cast<bool>(in >> xs[a]), "point file: expected " + std::to_string(n) + " points of dimension " +
                                                   std::to_string(d) + ", input ends at point " + std::to_string(i));
    pts.push_back(Point(std::span<const double>(xs)));
  }
  std::string rest;
  require(!(in >> rest), "point file: trailing data after the last point");
  return PointSet(std::move(pts));
}

inline PointSet read_points_file(const std::string& path) {
  std::ifstream f(path);
  require(static_cast<bool>(f), "cannot open point file: " + path);
  return read_points(f);
}

inline void write_points(std::ostream& out, const PointSet& P) {
  out << P.dim() << ' ' << P.size() << '\n';
  out << std::setprecision(17);
  for (const auto& p : P) {
    for (int a = 0; a < p.dim(); ++a) out << (a ? " " : "") << p[a];
    out << '\n';
  }
}

inline void write_points_file(const std::string& path, const PointSet& P) {
  std::ofstream f(path);
  require(static_cast<bool>(f), "cannot write point file: " + path);
  write_points(f, P);
}

inline nlohmann::ordered_json graph_to_json(const GeometricGraph& g) {
  nlohmann::ordered_json j;
  j["dim"] = g.dim();
  auto& vs = j["vertices"] = nlohmann::ordered_json::array();
  for (const auto& v : g.vertices()) {
    nlohmann::ordered_json x;
    x["id"] = v.id;
    auto& c = x["coords"] = nlohmann::ordered_json::array();
    for (int a = 0; a < v.point.dim(); ++a) c.push_back(v.point[a]);
    x["steiner"] = v.kind == vertex_kind::steiner;
    vs.push_back(std::move(x));
  }
  auto& es = j["edges"] = nlohmann::ordered_json::array();
  for (const auto& e : g.edges()) es.push_back({{"u", e.u}, {"v", e.v}, {"w", e.weight}});
  return j;
}

inline void write_graph(std::ostream& out, const GeometricGraph& g) {
  // nlohmann prints doubles with the shortest round-tripping form (at most 17 digits)
  out << graph_to_json(g).dump(1) << '\n';
}

inline void write_graph_file(const std::string& path, const GeometricGraph& g) {
  std::ofstream f(path);
  require(static_cast<bool>(f), "cannot write graph file: " + path);
  write_graph(f, g);
}

inline GeometricGraph graph_from_json(const nlohmann::json& j) {
  require(j.is_object() && j.contains("vertices") && j.contains("edges"), "graph file: needs 'vertices' and 'edges'");
  const auto& vs = j["vertices"];
  require(vs.is_array(), "graph file: 'vertices' must be an array");
  GeometricGraph g(j.contains("dim") ? j["dim"].get<int>() : 0);
  for (std::size_t k = 0; k < vs.size(); ++k) {
    const auto& v = vs[k];
    require(v.contains("coords") && v["coords"].is_array(), "graph file: vertex without coords");
    require(!v.contains("id") || v["id"].get<long long>() == static_cast<long long>(k), "graph file: vertex ids must be 0..V-1 in order");
    std::vector<double> xs = v["coords"].get<std::vector<double>>();
    bool st = v.contains("steiner") && v["steiner"].get<bool>();
    g.add_vertex(Point(std::span<const double>(xs)), st ? vertex_kind::steiner : vertex_kind::original);
  }
  const auto& es = j["edges"];
  require(es.is_array(), "graph file: 'edges' must be an array");
  g.reserve_edges(es.size());
  for (const auto& e : es) {
    require(e.contains("u") && e.contains("v"), "graph file: edge without endpoints");
    int u = e["u"].get<int>(), v = e["v"].get<int>();
    require(u >= 0 && v >= 0 && u < g.num_vertices() && v < g.num_vertices() && u != v, "graph file: bad edge endpoints");
    require(g.add_edge(u, v), "graph file: duplicate edge");
    if (e.contains("w")) {
      double w = e["w"].get<double>(), d = g.edges().back().weight;
      require(std::abs(w - d) <= 1e-9 * std::max(1.0, d), "graph file: edge weight disagrees with its endpoints");
    }
  }
  return g;
}

inline GeometricGraph read_graph(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw invalid_input(std::string("graph file: ") + e.what());
  }
  try {
    return graph_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw invalid_input(std::string("graph file: ") + e.what());
  }
}

inline GeometricGraph read_graph_file(const std::string& path) {
  std::ifstream f(path);
  require(static_cast<bool>(f), "cannot open graph file: " + path);
  return read_graph(f);
}

inline nlohmann::ordered_json report_to_json(const SpannerReport& r) {
  nlohmann::ordered_json j;
  j["max_stretch"] = r.max_stretch;
  j["worst_pair"] = {r.worst_pair.first, r.worst_pair.second};
  j["total_weight"] = r.total_weight;
  j["mst_weight"] = r.mst_weight;
  j["lightness"] = r.lightness;
  j["edges"] = r.n_edges;
  j["steiner_points"] = r.n_steiner;
  j["elapsed_s"] = r.elapsed;
  j["verification"] = r.verification;
  j["pairs_checked"] = r.pairs_checked;
  auto& s = j["stats"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.stats) s[k] = v;
  return j;
}

}  // namespace lightspan
