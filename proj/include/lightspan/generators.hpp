#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <absl/container/flat_hash_set.h>

#include "lightspan/error.hpp"
#include "lightspan/geometry.hpp"

namespace lightspan {

enum class generator_kind { uniform, grid, boundary_spaced, clustered };

struct GeneratorSpec {
  generator_kind kind = generator_kind::uniform;
  int n = 100;
  int d = 2;
  std::uint64_t seed = 1;
  double eps = 1.0 / 16;  // boundary-spaced only
};

inline generator_kind parse_generator_kind(const std::string& s) {
  if (s == "uniform") return generator_kind::uniform;
  if (s == "grid") return generator_kind::grid;
  if (s == "boundary-spaced" || s == "boundary") return generator_kind::boundary_spaced;
  if (s == "clustered") return generator_kind::clustered;
  throw invalid_input("unknown generator kind: " + s);
}

inline std::string to_string(generator_kind k) {
  switch (k) {
    case generator_kind::uniform: return "uniform";
    case generator_kind::grid: return "grid";
    case generator_kind::boundary_spaced: return "boundary-spaced";
    case generator_kind::clustered: return "clustered";
  }
  return "?";
}

// uniform in [0,1) from the top 53 bits, so output does not depend on the standard library's distributions
inline double unit_double(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline PointSet generate(const GeneratorSpec& g) {
  require(g.d >= 1 && g.d <= max_dim, "generate: dimension must be in [1, 8]");
  std::mt19937_64 rng(g.seed);
  std::vector<Point> pts;
  absl::flat_hash_set<Point, point_hash> seen;
  auto push = [&](const Point& p) {
    if (seen.insert(p).second) pts.push_back(p);
  };
  switch (g.kind) {
    case generator_kind::uniform: {
      require(g.n >= 1, "generate: n must be positive");
      while (static_cast<int>(pts.size()) < g.n) {
        Point p(g.d);
        for (int a = 0; a < g.d; ++a) p[a] = unit_double(rng);
        push(p);
      }
      break;
    }
    case generator_kind::grid: {
      require(g.n >= 1, "generate: n must be positive");
      int side = 1;
      while (std::pow(side, g.d) < g.n) ++side;
      for (int k = 0; k < g.n; ++k) {
        Point p(g.d);
        int r = k;
        for (int a = 0; a < g.d; ++a) p[a] = static_cast<double>(r % side) / side, r /= side;
        push(p);
      }
      break;
    }
    case generator_kind::boundary_spaced: {
      require(g.d == 2, "generate: boundary-spaced instances are planar");
      require(g.eps > 0 && g.eps < 1, "generate: eps must be in (0, 1)");
      int k = static_cast<int>(std::ceil(1 / std::sqrt(g.eps) - 1e-9));
      int count = 4 * k;
      for (int j = 0; j < count; ++j) {
        int side = j / k;
        double t = static_cast<double>(j % k) / k;
        switch (side) {
          case 0: push(Point{t, 0.0}); break;
          case 1: push(Point{1.0, t}); break;
          case 2: push(Point{1.0 - t, 1.0}); break;
          default: push(Point{0.0, 1.0 - t}); break;
        }
      }
      break;
    }
    case generator_kind::clustered: {
      require(g.n >= 1, "generate: n must be positive");
      int clusters = std::max(1, g.n / 50);
      std::vector<Point> centers;
      for (int c = 0; c < clusters; ++c) {
        Point p(g.d);
        for (int a = 0; a < g.d; ++a) p[a] = unit_double(rng);
        centers.push_back(p);
      }
      while (static_cast<int>(pts.size()) < g.n) {
        const Point& c = centers[rng() % clusters];
        Point p(g.d);
        for (int a = 0; a < g.d; ++a) {
          // Box-Muller, sigma 0.02
          double u1 = unit_double(rng), u2 = unit_double(rng);
          double z = std::sqrt(-2 * std::log(1 - u1)) * std::cos(2 * M_PI * u2);
          p[a] = c[a] + 0.02 * z;
        }
        push(p);
      }
      break;
    }
  }
  return PointSet(std::move(pts));
}

}  // namespace lightspan
