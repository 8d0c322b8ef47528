#pragma once

#include <chrono>
#include <string>
#include <utility>

#include "lightspan/error.hpp"
#include "lightspan/fast_planar.hpp"
#include "lightspan/graph.hpp"
#include "lightspan/greedy.hpp"
#include "lightspan/highdim.hpp"
#include "lightspan/io.hpp"
#include "lightspan/mst.hpp"
#include "lightspan/planar.hpp"

namespace lightspan {

enum class algorithm { planar, fast_planar, highdim, greedy };

inline algorithm parse_algorithm(const std::string& s) {
  if (s == "planar") return algorithm::planar;
  if (s == "fast-planar" || s == "fast") return algorithm::fast_planar;
  if (s == "highdim") return algorithm::highdim;
  if (s == "greedy") return algorithm::greedy;
  throw invalid_input("unknown algorithm: " + s);
}

inline std::string to_string(algorithm a) {
  switch (a) {
    case algorithm::planar: return "planar";
    case algorithm::fast_planar: return "fast-planar";
    case algorithm::highdim: return "highdim";
    case algorithm::greedy: return "greedy";
  }
  return "?";
}

// the greedy baseline keeps every pair in memory
inline constexpr std::size_t greedy_max_n = 5000;

struct RunConfig {
  algorithm algo = algorithm::planar;
  double eps = 0.25;
  bool prefilter_logn = false;
  stp_plugin plugin = stp_plugin::greedy;
  verify_mode verify = verify_mode::automatic;
  std::uint64_t seed = 1;
  std::string graph_out;   // empty: not written
  std::string report_out;
};

inline void check_config(const RunConfig& c, const PointSet& P) {
  require(P.size() >= 1, "run: empty point set");
  switch (c.algo) {
    case algorithm::planar:
    case algorithm::fast_planar:
      require(P.dim() == 2, to_string(c.algo) + " needs 2-dimensional points, got d=" + std::to_string(P.dim()));
      require(c.eps > 0 && c.eps < 1, to_string(c.algo) + ": eps must be in (0, 1)");
      break;
    case algorithm::highdim:
      require(P.dim() >= 2, "highdim needs d >= 2");
      require(c.eps > 0 && c.eps <= 0.5, "highdim: eps must be in (0, 1/2]");
      break;
    case algorithm::greedy:
      require(c.eps > 0, "greedy: eps must be positive");
      require(P.size() <= greedy_max_n, "greedy: n above " + std::to_string(greedy_max_n) + " is not supported");
      break;
  }
}

inline SpannerResult greedy_result(const PointSet& P, double eps, verify_mode mode, std::uint64_t seed) {
  auto t0 = std::chrono::steady_clock::now();
  SpannerResult r{P.size() < 2 ? GeometricGraph::from_points(P) : greedy_spanner(P, 1 + eps), {}};
  r.report.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  fill_basic_report(r.graph, mst_weight(P), r.report);
  check_stretch(r.graph, mode, 1 + eps, seed, r.report);
  return r;
}

struct RunOutput {
  GeometricGraph graph;
  SpannerReport report;
  bool ok = true;  // verified stretch within 1+eps (true when verification is off)
};

inline RunOutput run(const RunConfig& c, const PointSet& P) {
  check_config(c, P);
  SpannerResult r;
  switch (c.algo) {
    case algorithm::planar: {
      PlanarOptions o;
      o.prefilter_logn = c.prefilter_logn;
      o.verify = c.verify;
      o.seed = c.seed;
      r = build_planar_spanner(P, c.eps, o);
      break;
    }
    case algorithm::fast_planar: {
      FastOptions o;
      o.verify = c.verify;
      o.seed = c.seed;
      r = fast_build(P, c.eps, o);
      break;
    }
    case algorithm::highdim: {
      HighdimOptions o;
      o.prefilter_logn = c.prefilter_logn;
      o.plugin = c.plugin;
      o.verify = c.verify;
      o.seed = c.seed;
      r = build_highdim_spanner(P, c.eps, o);
      break;
    }
    case algorithm::greedy: r = greedy_result(P, c.eps, c.verify, c.seed); break;
  }
  RunOutput out{std::move(r.graph), std::move(r.report), true};
  out.ok = out.report.verification == "none" || out.report.max_stretch <= 1 + c.eps;
  out.report.stats["eps"] = c.eps;
  if (!c.graph_out.empty()) write_graph_file(c.graph_out, out.graph);
  if (!c.report_out.empty()) {
    std::ofstream f(c.report_out);
    require(static_cast<bool>(f), "cannot write report file: " + c.report_out);
    auto j = report_to_json(out.report);
    j["algorithm"] = to_string(c.algo);
    j["ok"] = out.ok;
    f << j.dump(1) << '\n';
  }
  return out;
}

}  // namespace lightspan
