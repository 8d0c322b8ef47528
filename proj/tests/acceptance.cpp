// Acceptance run: one PASS/FAIL line per criterion. Optional arguments pick criteria, e.g. `acceptance 3 7`.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "lightspan/lightspan.hpp"

using namespace lightspan;

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) { return std::chrono::duration<double>(clock_type::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, auto... xs) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, xs...);
  return buf;
}

void note(const std::string& s) {
  std::fprintf(stderr, "  %s\n", s.c_str());
  std::fflush(stderr);
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

PointSet scaled(const PointSet& P, double s) {
  std::vector<Point> v;
  for (const auto& p : P) v.push_back(p * s);
  return PointSet(v);
}

// ---- 1 and 10: planar and fast stretch on shared instances ----

struct PlanarRow {
  int n;
  double eps;
  std::uint64_t seed;
  double planar_stretch, fast_stretch, planar_light, fast_light;
};

std::vector<PlanarRow> planar_rows;
double planar_seconds = 0;
bool planar_ran = false;

void run_planar_instances() {
  if (planar_ran) return;
  planar_ran = true;
  const int ns[] = {50, 300, 1000};
  const double epss[] = {0.5, 0.25, 0.1};
  auto t0 = clock_type::now();
  // 20 instances: every (n, eps) pair at least twice, plus two more small ones
  std::vector<std::tuple<int, double, std::uint64_t>> plan;
  for (int rep = 0; rep < 2; ++rep)
    for (int n : ns)
      for (double e : epss) plan.push_back({n, e, static_cast<std::uint64_t>(100 + plan.size())});
  plan.push_back({300, 0.1, 200});
  plan.push_back({50, 0.5, 201});
  for (auto [n, eps, seed] : plan) {
    auto kind = seed % 3 == 0 ? generator_kind::clustered : generator_kind::uniform;
    auto P = generate({kind, n, 2, seed});
    PlanarOptions po;
    po.verify = verify_mode::exact;
    auto a = build_planar_spanner(P, eps, po);
    FastOptions fo;
    fo.verify = verify_mode::exact;
    auto b = fast_build(P, eps, fo);
    planar_rows.push_back({n, eps, seed, a.report.max_stretch, b.report.max_stretch, a.report.lightness, b.report.lightness});
    note(fmt("n=%d eps=%.2f %s: planar stretch %.6f light %.2f (%.1fs), fast stretch %.6f light %.2f (%.1fs)", n, eps,
             to_string(kind).c_str(), a.report.max_stretch, a.report.lightness, a.report.elapsed, b.report.max_stretch,
             b.report.lightness, b.report.elapsed));
  }
  planar_seconds = seconds_since(t0);
}

Outcome criterion_1() {
  run_planar_instances();
  Outcome o;
  double worst = 0;
  for (const auto& r : planar_rows) {
    worst = std::max({worst, (r.planar_stretch - 1) / r.eps, (r.fast_stretch - 1) / r.eps});
    if (r.planar_stretch > 1 + r.eps || r.fast_stretch > 1 + r.eps) o.pass = false;
  }
  if (planar_seconds >= 600) o.pass = false;
  o.detail = fmt("%zu instances x 2 builders, worst (stretch-1)/eps = %.4f, %.0fs total (budget 600s)", planar_rows.size(),
                 worst, planar_seconds);
  return o;
}

Outcome criterion_10() {
  auto c1 = criterion_1();
  Outcome o;
  double worst = 1;
  for (int k = 0; k < 10; ++k) {
    const auto& r = planar_rows[k];
    double q = std::max(r.planar_light / r.fast_light, r.fast_light / r.planar_light);
    worst = std::max(worst, q);
  }
  o.pass = worst <= 3 && c1.pass;
  o.detail = fmt("worst lightness ratio %.3f over 10 shared instances (limit 3), criterion 1 %s", worst, c1.pass ? "passes" : "fails");
  return o;
}

// ---- 2: highdim stretch ----

Outcome criterion_2() {
  Outcome o;
  const int ns[] = {100, 150, 200, 250, 300};
  double worst = 0;
  int count = 0;
  auto t0 = clock_type::now();
  for (int k = 0; k < 10; ++k) {
    int n = ns[k % 5];
    double eps = k < 5 ? 0.25 : 0.125;
    auto kind = k % 2 ? generator_kind::clustered : generator_kind::uniform;
    auto P = generate({kind, n, 3, static_cast<std::uint64_t>(300 + k)});
    HighdimOptions ho;
    ho.verify = verify_mode::exact;
    auto r = build_highdim_spanner(P, eps, ho);
    ++count;
    worst = std::max(worst, (r.report.max_stretch - 1) / eps);
    if (r.report.max_stretch > 1 + eps) o.pass = false;
    note(fmt("d=3 n=%d eps=%.3f %s: stretch %.6f, %zu Steiner points, lightness %.1f (%.1fs)", n, eps, to_string(kind).c_str(),
             r.report.max_stretch, r.report.n_steiner, r.report.lightness, r.report.elapsed));
  }
  o.detail = fmt("%d instances, worst (stretch-1)/eps = %.4f, %.0fs", count, worst, seconds_since(t0));
  return o;
}

// ---- 3: SLT weight independent of eps ----

Outcome criterion_3() {
  Outcome o;
  double lo = 1e300, hi = 0, worst = 0;
  for (int j = 2; j <= 10; ++j) {
    double eps = std::ldexp(1.0, -j), len = std::sqrt(eps);
    int k = static_cast<int>(std::round(1 / len)) + 1;
    for (double off : {-0.5, 0.3, 1.5}) {
      SltInstance in;
      in.source = Point{off * len, 1.0};
      in.a = Point{0, 0};
      in.b = Point{len, 0};
      in.eps = eps;
      for (int i = 0; i < k; ++i) in.targets.push_back(Point{len * i / (k - 1), 0});
      auto g = build_slt(in);
      Dijkstra dj(g);
      const auto& d = dj.run(0);
      for (int i = 1; i <= k; ++i) {
        double s = d[i] / dist(g.point(0), g.point(i));
        worst = std::max(worst, (s - 1) / eps);
        if (s > 1 + eps) o.pass = false;
      }
      lo = std::min(lo, g.total_weight()), hi = std::max(hi, g.total_weight());
    }
  }
  if (hi / lo > 2.5) o.pass = false;
  o.detail = fmt("weight %.3f..%.3f, ratio %.3f (limit 2.5); worst (stretch-1)/eps = %.4f", lo, hi, hi / lo, worst);
  return o;
}

// ---- 4: single-source spanner ----

Outcome criterion_4() {
  Outcome o;
  std::mt19937_64 rng(4);
  double worst = 0;
  std::vector<double> wmax(11, 0);
  for (int t = 0; t < 50; ++t) {
    int j = 4 + t % 7;  // eps from 1/16 to 1/1024
    double eps = std::ldexp(1.0, -j);
    SssInstance in;
    in.eps = eps;
    in.radius = std::sqrt(eps);
    in.source = Point{0, 0};
    double ang = unit_double(rng) * 2 * M_PI;
    in.center = Point{(1 + in.radius) * std::cos(ang), (1 + in.radius) * std::sin(ang)};
    int m = 1 + static_cast<int>(rng() % 200);
    std::vector<Point> xs;
    std::set<std::pair<double, double>> seen;
    while (static_cast<int>(xs.size()) < m) {
      double a = unit_double(rng) * 2 * M_PI, q = in.radius * std::sqrt(unit_double(rng));
      Point x{in.center[0] + q * std::cos(a), in.center[1] + q * std::sin(a)};
      if (seen.insert({x[0], x[1]}).second) xs.push_back(x);
    }
    in.targets = xs;
    auto H = build_sss_unit(in);
    wmax[j] = std::max(wmax[j], H.total_weight());
    // host spanner among the targets
    auto g = H;
    if (m >= 2) {
      auto host = greedy_spanner(PointSet(xs), 1 + eps);
      for (const auto& e : host.edges()) g.add_edge(e.u + 1, e.v + 1);
    }
    Dijkstra dj(g);
    const auto& d = dj.run(0);
    for (int i = 1; i <= m; ++i) {
      double s = d[i] / dist(g.point(0), g.point(i));
      worst = std::max(worst, (s - 1) / eps);
      if (s > 1 + 13 * eps) o.pass = false;
    }
  }
  double lo = 1e300, hi = 0;
  for (int j = 4; j <= 10; ++j) lo = std::min(lo, wmax[j]), hi = std::max(hi, wmax[j]);
  if (hi / lo > 2) o.pass = false;
  o.detail = fmt("50 instances, worst (stretch-1)/eps = %.3f (limit 13); C_sss per eps %.2f..%.2f, ratio %.3f (limit 2)", worst, lo,
                 hi, hi / lo);
  return o;
}

// ---- 5: nets ----

bool brute_net_ok(const PointSet& P, const NetAssignment& a, double r) {
  std::vector<char> in(P.size(), 0);
  for (int p : a.net) in[p] = 1;
  for (std::size_t i = 0; i < a.net.size(); ++i)
    for (std::size_t j = i + 1; j < a.net.size(); ++j)
      if (dist(P[a.net[i]], P[a.net[j]]) <= r) return false;
  for (std::size_t x = 0; x < P.size(); ++x) {
    int c = a.cover_of[x];
    if (c < 0 || !in[c] || dist(P[x], P[c]) > r) return false;
  }
  return true;
}

Outcome criterion_5() {
  Outcome o;
  std::mt19937_64 rng(5);
  int builds = 0, bad = 0;
  for (int t = 0; t < 500; ++t) {
    int n = 10 + static_cast<int>(rng() % 300);
    int d = 2 + static_cast<int>(rng() % 2);
    auto kind = t % 2 ? generator_kind::clustered : generator_kind::uniform;
    auto P = generate({kind, n, d, rng()});
    double r = 0.005 + 0.4 * unit_double(rng);
    bad += !brute_net_ok(P, greedy_net(P, r), r);
    bad += !brute_net_ok(P, grid_net(P, r), r);
    builds += 2;
  }
  // size bound at the construction's radius sqrt(eps) L_i, nets over class endpoints
  double worst_c = 0;
  for (int t = 0; t < 100; ++t) {
    int n = 50 + static_cast<int>(rng() % 250);
    auto P = generate({t % 2 ? generator_kind::clustered : generator_kind::uniform, n, 2, rng()});
    double eps = std::ldexp(1.0, -(2 + t % 8));
    auto part = normalize_and_partition(P);
    double w = mst_weight(P);
    for (const auto& cls : part.classes) {
      if (cls.pairs.empty()) continue;
      double rho = std::sqrt(eps) * cls.L(part.unit);
      auto net = grid_net(P.points(), endpoints_of(cls.pairs), rho);
      worst_c = std::max(worst_c, net.net.size() / (w / rho + 1));
    }
  }
  o.pass = bad == 0 && worst_c <= 6;
  o.detail = fmt("%d/%d net builds valid by brute force; size bound: worst |net|/(w(MST)/rho + 1) = %.3f over 100 instances (limit 6)",
                 builds - bad, builds, worst_c);
  return o;
}

// ---- 6: lightness trend on boundary instances ----

Outcome criterion_6() {
  Outcome o;
  const double inv[] = {16, 64, 256};
  double light[3];
  for (int k = 0; k < 3; ++k) {
    double eps = 1 / inv[k];
    auto P = generate({generator_kind::boundary_spaced, 0, 2, 1, eps});
    PlanarOptions po;
    po.verify = verify_mode::exact;
    auto r = build_planar_spanner(P, eps, po);
    light[k] = r.report.lightness;
    if (r.report.max_stretch > 1 + eps) o.pass = false;
    note(fmt("1/eps=%g n=%zu: lightness %.2f, stretch %.6f", inv[k], P.size(), light[k], r.report.max_stretch));
  }
  // each step quadruples 1/eps, i.e. two doublings
  double f1 = std::sqrt(light[1] / light[0]), f2 = std::sqrt(light[2] / light[1]);
  for (double f : {f1, f2})
    if (f < 1.4 || f > 3.2) o.pass = false;
  auto P = generate({generator_kind::boundary_spaced, 0, 2, 1, 1.0 / 256});
  double greedy = greedy_spanner(P, 1 + 1.0 / 256).total_weight() / mst_weight(P);
  if (!(light[2] < greedy)) o.pass = false;
  o.detail = fmt("lightness %.2f, %.2f, %.2f; growth per doubling %.3f, %.3f (window [1.4, 3.2]); greedy at 1/256: %.2f", light[0],
                 light[1], light[2], f1, f2, greedy);
  return o;
}

// ---- 7: near-linear time ----

Outcome criterion_7() {
  Outcome o;
  const int ns[] = {1000, 10000, 100000};
  const int reps[] = {5, 3, 1};
  double t[3];
  for (int k = 0; k < 3; ++k) {
    auto P = generate({generator_kind::uniform, ns[k], 2, 7});
    std::vector<double> ts;
    SpannerResult last;
    for (int r = 0; r < reps[k]; ++r) {
      FastOptions fo;
      fo.verify = verify_mode::none;
      last = fast_build(P, 0.25, fo);
      ts.push_back(last.report.elapsed);
    }
    t[k] = median(ts);
    check_stretch(last.graph, verify_mode::automatic, 1.25, 1, last.report);
    if (last.report.max_stretch > 1.25) o.pass = false;
    note(fmt("n=%d: median build %.3fs of %d, lightness %.2f, %s stretch %.6f", ns[k], t[k], reps[k], last.report.lightness,
             last.report.verification.c_str(), last.report.max_stretch));
  }
  double r1 = t[1] / t[0], r2 = t[2] / t[1];
  if (r1 > 15 || r2 > 15) o.pass = false;
  o.detail = fmt("t = %.3fs, %.3fs, %.3fs; ratios %.2f, %.2f (limit 15)", t[0], t[1], t[2], r1, r2);
  return o;
}

// ---- 8: charging cover tree validators ----

// exhaustive per-level checks against the stored tree, independent of the library validators
struct TreeAudit {
  double radius = 0, sci = 0;
  bool charge_ok = true;
};

TreeAudit audit(const ChargingCoverTree& T, const GeometricGraph& S) {
  TreeAudit a;
  for (int i = 1; i <= T.height(); ++i) {
    const auto& lv = T.levels[i];
    bool charged_level = !T.graphs[i].degree.empty();
    int take = static_cast<int>(std::ceil(T.eps * lv.L / 2 - 1e-9));
    for (int x = 0; x < lv.size(); ++x) {
      auto m = lv.members(x);
      double far = 0, diam = 0;
      int unc = 0, here = 0;
      for (std::size_t p = 0; p < m.size(); ++p) {
        far = std::max(far, dist(S.point(lv.nodes[x]), S.point(m[p])));
        for (std::size_t q = p + 1; q < m.size(); ++q) diam = std::max(diam, dist(S.point(m[p]), S.point(m[q])));
        unc += T.charged_at[m[p]] < 0 || T.charged_at[m[p]] >= i;
        here += T.charged_at[m[p]] == i;
      }
      a.radius = std::max(a.radius, far / (20 * T.eps * lv.L));
      if (charged_level) {
        a.sci = std::max(a.sci, std::max(T.eps * lv.L, diam + 1) / unc);
        if (here != (T.graphs[i].high[x] ? take : 0)) a.charge_ok = false;
      }
    }
  }
  for (int c : T.times_charged)
    if (c > 1) a.charge_ok = false;
  return a;
}

Outcome criterion_8() {
  Outcome o;
  double worst_radius = 0, worst_sci = 0, worst_det = 0;
  int trees = 0, high = 0, bad = 0;
  long long samples = 0;
  for (int t = 0; t < 50; ++t) {
    int n = 100 + 100 * (t % 5);  // up to 500
    double eps = t % 2 ? 0.125 : 0.25;
    auto kind = t % 3 == 0 ? generator_kind::clustered : (t % 3 == 1 ? generator_kind::uniform : generator_kind::grid);
    auto P0 = generate({kind, n, 3, static_cast<std::uint64_t>(800 + t)});
    auto P = scaled(P0, (1 / eps) / extreme_pair_distances(P0).min);
    auto sub = subdivide_mst(mst(P));
    for (double delta = 1; delta < 1 / eps; delta *= 2) {
      auto classes = partition_edge_classes(P, eps, delta);
      if (classes.empty()) continue;
      auto T = build_charging_cover_tree({&sub.graph, eps, delta, &classes});
      ++trees;
      auto a = audit(T, sub.graph);
      auto r = check_cover_radius(T, sub.graph);
      auto s = check_sci(T, sub.graph);
      auto c = check_charging(T);
      auto d = check_tree_distances(T, sub.graph, 10000, t);
      samples += 10000;
      for (int i = 1; i <= T.height(); ++i)
        for (char h : T.levels[i].high) high += h;
      bool ok = r.ok && s.ok && c.ok && d.ok && a.radius <= 1 && a.sci <= 1 + 1e-12 && a.charge_ok;
      if (!ok) {
        ++bad;
        note(fmt("instance %d delta %g: %s %s %s %s", t, delta, r.detail.c_str(), s.detail.c_str(), c.detail.c_str(), d.detail.c_str()));
      }
      worst_radius = std::max(worst_radius, a.radius);
      worst_sci = std::max(worst_sci, a.sci);
      worst_det = std::max(worst_det, d.worst);
    }
  }
  o.pass = bad == 0;
  o.detail = fmt("50 instances, %d trees, %d failing; worst radius/(20 eps L) %.3f, need/uncharged %.3f, d_ET/(4c eps L) %.3f over %lld "
                 "samples; %d high-degree nodes",
                 trees, bad, worst_radius, worst_sci, worst_det, samples, high);
  return o;
}

// ---- 9: MST subdivision ----

Outcome criterion_9() {
  Outcome o;
  double lo_piece = 1e300, hi_piece = 0, lo_ratio = 1e300, hi_ratio = 0;
  for (int t = 0; t < 100; ++t) {
    int n = 20 + 5 * t;
    int d = 2 + t % 2;
    double eps = std::ldexp(1.0, -(2 + t % 4));
    auto P0 = generate({t % 2 ? generator_kind::clustered : generator_kind::uniform, n, d, static_cast<std::uint64_t>(900 + t)});
    auto P = scaled(P0, (1 / eps) / extreme_pair_distances(P0).min);
    auto T = mst(P);
    auto sub = subdivide_mst(T);
    for (const auto& e : sub.graph.edges()) lo_piece = std::min(lo_piece, e.weight), hi_piece = std::max(hi_piece, e.weight);
    double ratio = T.total_weight() / sub.graph.num_vertices();
    lo_ratio = std::min(lo_ratio, ratio), hi_ratio = std::max(hi_ratio, ratio);
  }
  o.pass = lo_piece > 0.5 && hi_piece <= 1 && lo_ratio > 0.4 && hi_ratio <= 1.1;
  o.detail = fmt("pieces in [%.4f, %.4f] (need (1/2, 1]); w(MST)/(|P|+|K|) in [%.4f, %.4f] (need (0.4, 1.1])", lo_piece, hi_piece,
                 lo_ratio, hi_ratio);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::function<Outcome()>> all = {criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
                                               criterion_6, criterion_7, criterion_8, criterion_9, criterion_10};
  std::set<int> pick;
  for (int a = 1; a < argc; ++a) pick.insert(std::atoi(argv[a]));
  int failed = 0;
  for (int k = 1; k <= 10; ++k) {
    if (!pick.empty() && !pick.count(k)) continue;
    std::fprintf(stderr, "criterion %d ...\n", k);
    auto t0 = clock_type::now();
    Outcome o;
    try {
      o = all[k - 1]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("criterion %2d: %s  %s [%.1fs]\n", k, o.pass ? "PASS" : "FAIL", o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
