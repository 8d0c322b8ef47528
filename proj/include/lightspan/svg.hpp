#pragma once

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <string>

#include "lightspan/error.hpp"
#include "lightspan/graph.hpp"

namespace lightspan {

// Planar drawing: edges as lines, originals filled, Steiner points hollow.
// y grows upward in the input, so it is flipped for the canvas.
inline void render_svg(const GeometricGraph& g, std::ostream& out, double size = 800) {
  require(g.num_vertices() == 0 || g.dim() == 2, "render: only planar graphs can be drawn");
  double x0 = 0, y0 = 0, x1 = 1, y1 = 1;
  if (g.num_vertices() > 0) {
    x0 = x1 = g.point(0)[0], y0 = y1 = g.point(0)[1];
    for (const auto& v : g.vertices()) {
      x0 = std::min(x0, v.point[0]), x1 = std::max(x1, v.point[0]);
      y0 = std::min(y0, v.point[1]), y1 = std::max(y1, v.point[1]);
    }
  }
  const double span = std::max({x1 - x0, y1 - y0, 1e-300});
  const double pad = 20, k = (size - 2 * pad) / span;
  const double r = 3;
  auto X = [&](double x) { return pad + (x - x0) * k; };
  auto Y = [&](double y) { return size - pad - (y - y0) * k; };
  out << std::setprecision(15);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size << "\" viewBox=\"0 0 "
      << size << ' ' << size << "\">\n";
  // original data-space frame, so coordinates can be recovered from the drawing
  out << "<desc>x0=" << std::setprecision(17) << x0 << " y0=" << y0 << " scale=" << k << " pad=" << pad
      << " size=" << size << "</desc>\n"
      << std::setprecision(15);
  out << "<g stroke=\"#345\" stroke-width=\"1\">\n";
  for (const auto& e : g.edges()) {
    const auto &a = g.point(e.u), &b = g.point(e.v);
    out << "<line x1=\"" << X(a[0]) << "\" y1=\"" << Y(a[1]) << "\" x2=\"" << X(b[0]) << "\" y2=\"" << Y(b[1]) << "\"/>\n";
  }
  out << "</g>\n";
  for (const auto& v : g.vertices()) {
    bool st = v.kind == vertex_kind::steiner;
    out << "<circle cx=\"" << X(v.point[0]) << "\" cy=\"" << Y(v.point[1]) << "\" r=\"" << r << "\" fill=\""
        << (st ? "none" : "#c22") << "\" stroke=\"#c22\"/>\n";
  }
  out << "</svg>\n";
}

inline void render_svg(const GeometricGraph& g, const std::string& path) {
  std::ofstream f(path);
  require(static_cast<bool>(f), "cannot write svg: " + path);
  render_svg(g, f);
}

}  // namespace lightspan
