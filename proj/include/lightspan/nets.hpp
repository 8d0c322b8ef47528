#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "lightspan/error.hpp"
#include "lightspan/geometry.hpp"

namespace lightspan {

struct NetAssignment {
  double radius = 0;
  std::vector<int> net;       // point ids, in order of discovery
  std::vector<int> cover_of;  // point id -> covering net point id
};

// Scan in input order; a point joins the net iff it is farther than r from every net point so far.
inline NetAssignment greedy_net(const PointSet& P, double r) {
  require(r > 0, "greedy_net: radius must be positive");
  NetAssignment a{r, {}, std::vector<int>(P.size(), -1)};
  for (int i = 0; i < static_cast<int>(P.size()); ++i) {
    for (int q : a.net)
      if (dist(P[i], P[q]) <= r) {
        a.cover_of[i] = q;
        break;
      }
    if (a.cover_of[i] < 0) a.net.push_back(i), a.cover_of[i] = i;
  }
  return a;
}

// Same rule, but net points live in a grid of cell size r so only the 3^d neighbouring cells are scanned.
// Works on a subset of ids of a point array; cover_of is indexed by the full array (-1 outside the subset).
inline NetAssignment grid_net(const std::vector<Point>& pts, const std::vector<int>& ids, double r) {
  require(r > 0 && std::isfinite(r), "grid_net: radius must be positive");
  NetAssignment a{r, {}, std::vector<int>(pts.size(), -1)};
  if (ids.empty()) return a;
  GridIndex g(pts[ids[0]], r);
  for (int i : ids) {
    auto key = g.cell_of(pts[i]);
    int found = -1;
    g.for_each_near(key, 1, [&](const std::vector<int>& b) {
      if (found >= 0) return;
      for (int q : b)
        if (dist(pts[i], pts[q]) <= r) {
          found = q;
          return;
        }
    });
    if (found < 0) {
      g.insert(i, pts[i]);
      a.net.push_back(i);
      found = i;
    }
    a.cover_of[i] = found;
  }
  return a;
}

inline NetAssignment grid_net(const PointSet& P, double r) {
  std::vector<int> ids(P.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i);
  return grid_net(P.points(), ids, r);
}

// Covering only: each point goes to the first center within r.
inline NetAssignment cover_only(const PointSet& P, const std::vector<int>& centers, double r) {
  require(r >= 0, "cover_only: negative radius");
  NetAssignment a{r, centers, std::vector<int>(P.size(), -1)};
  for (int c : centers) {
    require(c >= 0 && c < static_cast<int>(P.size()), "cover_only: unknown center");
    a.cover_of[c] = c;
  }
  for (int i = 0; i < static_cast<int>(P.size()); ++i) {
    if (a.cover_of[i] >= 0) continue;
    for (int c : centers)
      if (dist(P[i], P[c]) <= r) {
        a.cover_of[i] = c;
        break;
      }
    require(a.cover_of[i] >= 0, "cover_only: point " + std::to_string(i) + " is not covered");
  }
  return a;
}

}  // namespace lightspan
