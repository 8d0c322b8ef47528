#include <gtest/gtest.h>

#include "lightspan/generators.hpp"
#include "lightspan/highdim.hpp"
#include "lightspan/nets.hpp"
#include "oracles.hpp"

using namespace lightspan;

namespace {

// uniform points scaled so the closest pair sits at 1/eps
PointSet scaled_uniform(int n, int d, std::uint64_t seed, double eps) {
  auto P0 = generate({generator_kind::uniform, n, d, seed});
  auto [lo, hi] = oracle::min_max_distance(P0);
  std::vector<Point> v;
  for (const auto& p : P0) v.push_back(p * ((1 / eps) / lo));
  return PointSet(v);
}

struct Built {
  Subdivision sub;
  std::vector<EdgeClass> classes;
  ChargingCoverTree tree;
};

Built build_tree(const PointSet& P, double eps, double delta, CoverTreeConfig cfg = {}) {
  Built b{subdivide_mst(mst(P)), partition_edge_classes(P, eps, delta), {}};
  b.tree = build_charging_cover_tree({&b.sub.graph, eps, delta, &b.classes}, cfg);
  return b;
}

// trivial tree over n isolated points with every point its own node on levels 0 and 1
ChargingCoverTree flat_tree(int n) {
  ChargingCoverTree T;
  T.eps = 0.25;
  CoverLevel lv;
  lv.nodes.resize(n);
  std::iota(lv.nodes.begin(), lv.nodes.end(), 0);
  lv.desc_off.resize(n + 1);
  std::iota(lv.desc_off.begin(), lv.desc_off.end(), 0);
  lv.desc = lv.nodes;
  lv.parent = lv.nodes;
  T.levels = {lv, lv};
  T.levels[1].L = 8;
  return T;
}

}  // namespace

TEST(EdgeClasses, WeightThreeIsClassOne) {
  PointSet P({Point{0, 0, 0}, Point{3, 0, 0}});
  auto cls = partition_edge_classes(P, 0.25, 1);
  ASSERT_EQ(cls.size(), 1u);
  EXPECT_EQ(cls[0].level, 1);
  EXPECT_EQ(cls[0].L, 4);
  EXPECT_EQ(cls[0].pairs.size(), 1u);
  EXPECT_TRUE(partition_edge_classes(P, 0.25, 2).empty());
}

TEST(EdgeClasses, UpperEndIsClosed) {
  PointSet P({Point{0, 0, 0}, Point{4, 0, 0}});
  auto cls = partition_edge_classes(P, 0.25, 1);
  ASSERT_EQ(cls.size(), 1u);
  EXPECT_EQ(cls[0].pairs.size(), 1u);
  EXPECT_EQ(pow2_ceil_exponent(4), 2);
  EXPECT_EQ(pow2_ceil_exponent(4.000001), 3);
}

TEST(EdgeClasses, DisjointUnionOfAllPairs) {
  for (double eps : {0.25, 0.125}) {
    auto P = scaled_uniform(200, 3, 3, eps);
    std::set<std::pair<int, int>> seen;
    for (double delta = 1; delta < 1 / eps; delta *= 2)
      for (const auto& c : partition_edge_classes(P, eps, delta))
        for (auto pr : c.pairs) {
          EXPECT_TRUE(seen.insert(pr).second);
          double w = dist(P[pr.first], P[pr.second]);
          EXPECT_GT(w, c.L / 2);
          EXPECT_LE(w, c.L);
        }
    EXPECT_EQ(seen.size(), 200u * 199 / 2);
  }
}

TEST(EdgeClasses, RejectsUnscaledInput) {
  EXPECT_THROW(partition_edge_classes(PointSet({Point{0, 0}, Point{1, 0}}), 0.25, 1), invalid_input);
  EXPECT_THROW(partition_edge_classes(PointSet({Point{0, 0}, Point{9, 0}}), 0.3, 1), invalid_input);
}

TEST(CoverTree, UnitPath) {
  std::vector<Point> pts;
  for (int k = 0; k < 10; ++k) pts.push_back(Point{static_cast<double>(k), 0, 0});
  PointSet P(pts);
  auto S = subdivide_mst(mst(P)).graph;
  EXPECT_EQ(S.num_steiner(), 0);
  // one class at delta 2: L_1 = delta / eps = 8, pairs in (4, 8]
  EdgeClass c{2, 1, 8, {}};
  for (int u = 0; u < 10; ++u)
    for (int v = u + 5; v < 10 && v <= u + 8; ++v) c.pairs.push_back({u, v});
  std::vector<EdgeClass> classes{c};
  auto T = build_charging_cover_tree({&S, 0.25, 2, &classes});
  ASSERT_EQ(T.height(), 1);
  const auto& lv = T.levels[1];
  for (int a = 0; a < lv.size(); ++a) {
    EXPECT_GE(lv.members(a).size(), 2u);
    EXPECT_LE(lv.diameter[a], 8);
  }
  EXPECT_TRUE(check_sci(T, S).ok);
  EXPECT_TRUE(check_cover_radius(T, S).ok);
}

TEST(CoverTree, SinglePoint) {
  PointSet P({Point{0, 0, 0}});
  GeometricGraph S = GeometricGraph::from_points(P);
  std::vector<EdgeClass> classes{EdgeClass{1, 1, 4, {}}};
  auto T = build_charging_cover_tree({&S, 0.25, 1, &classes});
  for (const auto& lv : T.levels) EXPECT_EQ(lv.size(), 1);
}

TEST(CoverTree, ValidatorsOnUniformCube) {
  auto P = scaled_uniform(200, 3, 1, 0.25);
  auto b = build_tree(P, 0.25, 1);
  const auto& S = b.sub.graph;
  auto r = check_cover_radius(b.tree, S);
  EXPECT_TRUE(r.ok) << r.detail;
  auto s = check_sci(b.tree, S);
  EXPECT_TRUE(s.ok) << s.detail;
  auto c = check_charging(b.tree);
  EXPECT_TRUE(c.ok) << c.detail;
  auto d = check_tree_distances(b.tree, S, 5000, 3);
  EXPECT_TRUE(d.ok) << d.detail;

  // cross-check each level against the generic cover validator
  std::vector<Point> all;
  for (int v = 0; v < S.num_vertices(); ++v) all.push_back(S.point(v));
  PointSet PK(all);
  for (int i = 1; i <= b.tree.height(); ++i) {
    double rad = 20 * 0.25 * b.tree.levels[i].L;
    auto a = cover_only(PK, b.tree.levels[i].nodes, rad);
    EXPECT_TRUE(oracle::valid_net(PK, a, rad, false)) << "level " << i;
  }
}

TEST(CoverTree, NestedLevelsAndParents) {
  auto P = scaled_uniform(150, 3, 2, 0.25);
  auto b = build_tree(P, 0.25, 2);
  const auto& T = b.tree;
  for (int i = 1; i <= T.height(); ++i) {
    std::set<int> below(T.levels[i - 1].nodes.begin(), T.levels[i - 1].nodes.end());
    for (int a = 0; a < T.levels[i].size(); ++a) {
      EXPECT_TRUE(below.count(T.levels[i].nodes[a]));
      // a node's own point is among its descendants
      auto m = T.levels[i].members(a);
      EXPECT_TRUE(std::binary_search(m.begin(), m.end(), T.levels[i].nodes[a]));
    }
    std::size_t total = 0;
    for (int a = 0; a < T.levels[i].size(); ++a) total += T.levels[i].members(a).size();
    EXPECT_EQ(total, static_cast<std::size_t>(b.sub.graph.num_vertices()));
  }
}

TEST(CoverTree, DescendantDiameterMatchesBruteForce) {
  auto P = scaled_uniform(120, 3, 5, 0.25);
  auto b = build_tree(P, 0.25, 1);
  const auto& S = b.sub.graph;
  for (int i = 1; i <= b.tree.height(); ++i) {
    const auto& lv = b.tree.levels[i];
    std::vector<int> owner(S.num_vertices());
    for (int a = 0; a < lv.size(); ++a)
      for (int v : lv.members(a)) owner[v] = a;
    for (int a = 0; a < lv.size(); a += 3) {
      auto m = lv.members(a);
      double brute = 0;
      for (std::size_t x = 0; x < m.size(); ++x)
        for (std::size_t y = x + 1; y < m.size(); ++y) brute = std::max(brute, oracle::euclid(S.point(m[x]), S.point(m[y])));
      EXPECT_NEAR(descendant_diameter(S, m, owner, a), brute, 1e-9 * std::max(1.0, brute));
    }
  }
}

TEST(CoverTree, StepAWithLowThreshold) {
  // a threshold far below 4c/eps forces high-degree nodes at desk scale
  auto P = scaled_uniform(200, 3, 1, 0.25);
  CoverTreeConfig cfg;
  cfg.degree_threshold = 10;
  int made_a = 0, high = 0;
  for (double delta : {1.0, 2.0}) {
    auto b = build_tree(P, 0.25, delta, cfg);
    for (int i = 1; i <= b.tree.height(); ++i) {
      for (char h : b.tree.levels[i].high) high += h;
      for (char m : b.tree.levels[i].made_by) made_a += m == 'A';
    }
    EXPECT_TRUE(check_cover_radius(b.tree, b.sub.graph).ok);
    EXPECT_TRUE(check_sci(b.tree, b.sub.graph).ok);
    EXPECT_TRUE(check_charging(b.tree).ok);
    EXPECT_TRUE(check_tree_distances(b.tree, b.sub.graph, 3000, 1).ok);
  }
  EXPECT_GT(high, 0);
  EXPECT_GT(made_a, 0);
}

TEST(LevelGraph, NoPairsNoEdges) {
  auto T = flat_tree(5);
  auto H = build_level_graph(T, 1, {}, 320);
  EXPECT_TRUE(H.edges.empty());
  for (char h : H.high) EXPECT_FALSE(h);
}

TEST(LevelGraph, OneCrossPair) {
  auto T = flat_tree(5);
  auto H = build_level_graph(T, 1, {{1, 3}}, 320);
  ASSERT_EQ(H.edges.size(), 1u);
  EXPECT_EQ(H.edges[0], (std::pair<int, int>{1, 3}));
}

TEST(LevelGraph, StarAtThreshold) {
  const double c = 20, eps = 0.25;
  const int thr = static_cast<int>(std::ceil(4 * c / eps));
  for (int leaves : {thr, thr - 1}) {
    auto T = flat_tree(leaves + 1);
    std::vector<std::pair<int, int>> pairs;
    for (int k = 1; k <= leaves; ++k) pairs.push_back({0, k});
    auto H = build_level_graph(T, 1, pairs, 4 * c / eps);
    int high = 0;
    for (char h : H.high) high += h;
    if (leaves == thr) {
      EXPECT_EQ(high, 1);
      EXPECT_TRUE(H.high[0]);
    } else {
      EXPECT_EQ(high, 0);
    }
  }
}

TEST(Stp, Sizes) {
  EXPECT_EQ(blackbox_stp(PointSet({Point{0, 0, 0}}), 0.25).num_edges(), 0u);
  EXPECT_EQ(blackbox_stp(PointSet({Point{0, 0, 0}, Point{1, 2, 3}}), 0.25).num_edges(), 1u);
}

TEST(Stp, HundredPoints) {
  auto Q = oracle::random_points(100, 3, 4);
  for (auto plugin : {stp_plugin::greedy, stp_plugin::complete})
    EXPECT_LE(oracle::all_pairs_stretch(blackbox_stp(Q, 0.25, plugin)).max, 1.25);
  EXPECT_THROW(parse_stp_plugin("ls19"), invalid_input);
}

TEST(Highdim, TwoPoints) {
  auto r = build_highdim_spanner(PointSet({Point{0, 0, 0}, Point{1, 1, 1}}), 0.25);
  EXPECT_EQ(r.graph.num_edges(), 1u);
  EXPECT_DOUBLE_EQ(r.report.max_stretch, 1);
  EXPECT_DOUBLE_EQ(r.report.lightness, 1);
}

TEST(Highdim, HundredFiftyUniform) {
  auto P = generate({generator_kind::uniform, 150, 3, 1});
  HighdimDetail det;
  auto r = build_highdim_spanner(P, 0.25, {}, &det);
  auto s = oracle::all_pairs_stretch(r.graph);
  EXPECT_LE(s.max, 1.25);
  EXPECT_NEAR(r.report.max_stretch, s.max, 1e-12);
  for (int i = 0; i < 150; ++i) EXPECT_EQ(r.graph.point(i), P[i]);
  for (const auto& T : det.trees) {
    auto d = check_tree_distances(T, det.subdivided, 3000, 7);
    EXPECT_TRUE(d.ok) << d.detail;
  }
  EXPECT_NEAR(r.report.lightness, r.graph.total_weight() / oracle::complete_kruskal_weight(P), 1e-9 * r.report.lightness);
}

TEST(Highdim, PrefilterAndCompletePlugin) {
  auto P = generate({generator_kind::clustered, 80, 3, 2});
  HighdimOptions o;
  o.prefilter_logn = true;
  o.plugin = stp_plugin::complete;
  auto r = build_highdim_spanner(P, 0.25, o);
  EXPECT_LE(oracle::all_pairs_stretch(r.graph).max, 1.25);
}

TEST(Highdim, FourDimensions) {
  auto P = generate({generator_kind::uniform, 60, 4, 3});
  auto r = build_highdim_spanner(P, 0.5);
  EXPECT_LE(oracle::all_pairs_stretch(r.graph).max, 1.5);
}

TEST(Highdim, RejectsBadEps) {
  auto P = generate({generator_kind::uniform, 10, 3, 3});
  EXPECT_THROW(build_highdim_spanner(P, 0.75), invalid_input);
  EXPECT_THROW(build_highdim_spanner(P, 0), invalid_input);
}
