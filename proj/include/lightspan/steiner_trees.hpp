#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include "lightspan/error.hpp"
#include "lightspan/geometry.hpp"
#include "lightspan/graph.hpp"

namespace lightspan {

// Shallow-light tree from p to targets on segment [a,b].
struct SltInstance {
  Point source;
  Point a, b;
  std::vector<Point> targets;
  double eps = 0.25;
};

enum class sss_mode {
  full,    // whole grid W over the bounding square, SLT to every grid point of the near side
  pruned,  // only grid columns under used corners, SLT to their feet
};

// Single-source spanner from source to the targets inside disc(center, radius).
struct SssInstance {
  Point source;
  Point center;
  double radius = 0;
  std::vector<Point> targets;
  double eps = 1.0 / 16;
  double g = 1;        // quality of the host spanner among the targets: (1 + g eps)
  double h = 1;        // d(source, disc) = l_scale / h
  double l_scale = 1;  // radius = sqrt(eps) * l_scale
  sss_mode mode = sss_mode::full;
};

struct SssStats {
  double w_grid = 0, w_w1 = 0, w_slt = 0;
  std::vector<Point> used_corners;
  int discs = 0;
};

namespace detail {

// SLT shape: node heights beta*H*2^(-3j/2), branching depth ceil(log2(1/eps)/2)
inline constexpr double slt_beta = 0.25;

inline int slt_depth(double eps) {
  double k = std::log2(1.0 / eps);
  return std::max(0, static_cast<int>(std::ceil(k / 2 - 1e-12)));
}

// balanced binary tree over a segment of length at most sqrt(eps)*H
template <class Sink>
void slt_piece(const Point& p, const Point& a, const Point& eu, const Point& et, double sp, double H, double lo,
               double hi, std::vector<std::pair<double, Point>>& xs, std::size_t i0, std::size_t i1, double eps,
               Sink& sink) {
  const int J = slt_depth(eps);
  auto node = [&](int j, double c) {
    double y = H * slt_beta * std::pow(2.0, -1.5 * j);
    double u = sp + (c - sp) * (1 - y / H);
    return a + eu * u + et * y;
  };
  auto rec = [&](auto&& self, int j, double l, double r, const Point& parent, std::size_t b, std::size_t e) -> void {
    if (b == e) return;
    if (e - b == 1) {
      sink(parent, xs[b].second);
      return;
    }
    Point v = node(j, (l + r) / 2);
    sink(parent, v);
    if (j >= J) {
      for (std::size_t k = b; k < e; ++k) sink(v, xs[k].second);
      return;
    }
    double mid = (l + r) / 2;
    std::size_t m = b;
    while (m < e && xs[m].first < mid) ++m;
    self(self, j + 1, l, mid, v, b, m);
    self(self, j + 1, mid, r, v, m, e);
  };
  rec(rec, 0, lo, hi, p, i0, i1);
}

template <class Sink>
void emit_slt(const Point& p, const Point& a, const Point& b, const std::vector<Point>& targets, double eps, Sink&& sink) {
  if (targets.empty()) return;
  double len = dist(a, b);
  if (len == 0) {
    sink(p, targets[0]);
    return;
  }
  Point eu = (b - a) * (1 / len);
  double sp = dot(p - a, eu);
  Point nv = p - a - eu * sp;
  double H = norm(nv);
  ensure(H > 0, "slt: source lies on the segment line");
  Point et = nv * (1 / H);
  std::vector<std::pair<double, Point>> xs;
  xs.reserve(targets.size());
  for (const auto& x : targets) xs.push_back({std::clamp(dot(x - a, eu), 0.0, len), x});
  std::sort(xs.begin(), xs.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
  // pieces no longer than sqrt(eps)*H, each with its own tree
  int pieces = std::max(1, static_cast<int>(std::ceil(len / (std::sqrt(eps) * H) - 1e-9)));
  std::size_t i = 0;
  for (int k = 0; k < pieces; ++k) {
    double lo = len * k / pieces, hi = len * (k + 1) / pieces;
    std::size_t j = i;
    while (j < xs.size() && (k == pieces - 1 || xs[j].first < hi)) ++j;
    slt_piece(p, a, eu, et, sp, H, lo, hi, xs, i, j, eps, sink);
    i = j;
  }
}

template <class Sink>
void emit_sss_unit(const Point& p, const Point& c, double rho, const std::vector<Point>& targets, double eps, sss_mode mode,
                   Sink&& sink, SssStats* st = nullptr) {
  double pc = dist(p, c);
  double D = pc - rho;
  ensure(D > 0, "sss: source inside the disc");
  Point et = (c - p) * (1 / pc);
  Point eu = et;
  eu[0] = -et[1], eu[1] = et[0];
  Point o = c - eu * rho - et * rho;  // near-left corner of the bounding square
  const double side = 2 * rho;
  const int m = rho > 0 ? std::max(1, static_cast<int>(std::ceil(side / (eps * D) - 1e-9))) : 1;
  const double cw = side / m;
  auto grid = [&](int iu, int it) { return o + eu * (iu * cw) + et * (it * cw); };
  auto measure = [&](double& acc) {
    return [&acc, &sink](const Point& x, const Point& y) {
      acc += dist(x, y);
      sink(x, y);
    };
  };
  double dummy = 0;
  double& w_grid = st ? st->w_grid : dummy;
  double& w_w1 = st ? st->w_w1 : dummy;
  double& w_slt = st ? st->w_slt : dummy;

  // W1: one edge per nonempty cell, lowest-index target to the near-left corner
  std::map<std::pair<int, int>, int> rep;
  for (int k = 0; k < static_cast<int>(targets.size()); ++k) {
    const Point& x = targets[k];
    int iu = 0, it = 0;
    if (cw > 0) {
      iu = std::clamp(static_cast<int>(std::floor(dot(x - o, eu) / cw)), 0, m - 1);
      it = std::clamp(static_cast<int>(std::floor(dot(x - o, et) / cw)), 0, m - 1);
    }
    rep.try_emplace({iu, it}, k);
  }
  std::map<int, std::vector<int>> columns;
  {
    auto s = measure(w_w1);
    for (auto [cell, k] : rep) {
      Point z = grid(cell.first, cell.second);
      if (st) st->used_corners.push_back(z);
      if (!(z == targets[k])) s(targets[k], z);
      columns[cell.first].push_back(cell.second);
    }
  }
  std::vector<Point> feet;
  {
    auto s = measure(w_grid);
    if (mode == sss_mode::full && !targets.empty()) {
      // cell by cell, so every grid corner is a vertex on its lines
      for (int k = 0; k <= m && cw > 0; ++k)
        for (int l = 0; l < m; ++l) {
          s(grid(k, l), grid(k, l + 1));
          s(grid(l, k), grid(l + 1, k));
        }
    } else {
      for (auto& [iu, its] : columns) {
        std::sort(its.begin(), its.end());
        int prev = 0;
        for (int it : its) {
          if (it > prev) s(grid(iu, prev), grid(iu, it));
          prev = it;
        }
      }
    }
  }
  if (mode == sss_mode::full) {
    for (int k = 0; k <= m; ++k) {
      feet.push_back(grid(k, 0));
      if (cw == 0) break;
    }
  } else {
    for (auto& [iu, its] : columns) feet.push_back(grid(iu, 0));
  }
  emit_slt(p, o, o + eu * side, feet, eps, measure(w_slt));
  if (st) ++st->discs;
}

// Cover the disc by unit-recipe discs on a square lattice of pitch sqrt(eps)*D; empty ones are skipped.
template <class Sink>
void emit_sss_scaled(const Point& p, const Point& c, double rho, const std::vector<Point>& targets, double eps,
                     sss_mode mode, Sink&& sink, SssStats* st = nullptr) {
  double D = dist(p, c) - rho;
  ensure(D > 0, "sss: source inside the disc");
  const double pitch = std::sqrt(eps) * D;
  if (rho <= pitch * (1 + 1e-12)) {
    emit_sss_unit(p, c, rho, targets, eps, mode, sink, st);
    return;
  }
  std::map<std::pair<long long, long long>, std::vector<Point>> groups;
  for (const auto& x : targets)
    groups[{std::llround((x[0] - c[0]) / pitch), std::llround((x[1] - c[1]) / pitch)}].push_back(x);
  for (auto& [key, xs] : groups) {
    Point g = c;
    g[0] += key.first * pitch, g[1] += key.second * pitch;
    double r = 0;
    for (const auto& x : xs) r = std::max(r, dist(x, g));
    emit_sss_unit(p, g, r, xs, eps, mode, sink, st);
  }
}

inline GeometricGraph collect(const Point& p, const std::vector<Point>& targets, auto&& emit) {
  std::vector<Point> pts{p};
  pts.insert(pts.end(), targets.begin(), targets.end());
  GraphBuilder b{PointSet(pts)};
  emit([&](const Point& x, const Point& y) { b.edge(x, y); });
  return b.take();
}

inline void check_2d(const Point& p, const std::vector<Point>& xs) {
  require(p.dim() == 2, "steiner trees are planar only");
  for (const auto& x : xs) require(x.dim() == 2, "steiner trees are planar only");
}

inline void check_sss(const SssInstance& in) {
  check_2d(in.source, in.targets);
  require(in.eps > 0 && in.eps <= 0.25, "sss: eps must be in (0, 1/4]");
  require(in.radius >= 0, "sss: negative radius");
  double D = dist(in.source, in.center) - in.radius;
  require(D > 0, "sss: source must lie outside the disc");
  for (const auto& x : in.targets)
    require(dist(x, in.center) <= in.radius * (1 + 1e-9) + 1e-12 * D, "sss: target outside the disc");
}

}  // namespace detail

// Graph on [source, targets...] (originals) plus Steiner points.
inline GeometricGraph build_slt(const SltInstance& in) {
  detail::check_2d(in.source, in.targets);
  require(in.a.dim() == 2 && in.b.dim() == 2, "slt: planar segment required");
  require(in.eps > 0 && in.eps <= 0.25, "slt: eps must be in (0, 1/4]");
  double len = dist(in.a, in.b);
  double scale = std::max(len, dist(in.source, in.a));
  for (const auto& x : in.targets) {
    // distance from x to the segment
    double t = len > 0 ? std::clamp(dot(x - in.a, in.b - in.a) / (len * len), 0.0, 1.0) : 0.0;
    require(dist(x, lerp(in.a, in.b, t)) <= 1e-9 * scale, "slt: target off the segment");
  }
  return detail::collect(in.source, in.targets, [&](auto&& sink) { detail::emit_slt(in.source, in.a, in.b, in.targets, in.eps, sink); });
}

inline GeometricGraph build_sss_unit(const SssInstance& in, SssStats* st = nullptr) {
  detail::check_sss(in);
  require(in.g > 0 && in.g * in.eps <= 1.0 / 16, "sss: host spanner quality g must satisfy g*eps <= 1/16");
  double D = dist(in.source, in.center) - in.radius;
  require(in.radius <= std::sqrt(in.eps) * D * (1 + 1e-9), "sss: disc radius exceeds sqrt(eps) times its distance");
  return detail::collect(in.source, in.targets,
                         [&](auto&& sink) { detail::emit_sss_unit(in.source, in.center, in.radius, in.targets, in.eps, in.mode, sink, st); });
}

inline GeometricGraph build_sss_scaled(const SssInstance& in, SssStats* st = nullptr) {
  detail::check_sss(in);
  require(in.g > 0 && in.g * in.eps <= 1.0 / 16, "sss: host spanner quality g must satisfy g*eps <= 1/16");
  require(in.h >= 1 && in.l_scale > 0, "sss: need h >= 1 and a positive scale");
  double D = dist(in.source, in.center) - in.radius;
  require(std::abs(D - in.l_scale / in.h) <= 1e-9 * in.l_scale, "sss: source distance must equal l_scale / h");
  require(in.radius <= std::sqrt(in.eps) * in.l_scale * (1 + 1e-9), "sss: disc radius exceeds sqrt(eps) * l_scale");
  return detail::collect(in.source, in.targets,
                         [&](auto&& sink) { detail::emit_sss_scaled(in.source, in.center, in.radius, in.targets, in.eps, in.mode, sink, st); });
}

}  // namespace lightspan
