// Small library walkthrough: random points, a planar Steiner spanner, a report, the graph and an SVG.
#include <cstdio>
#include <fstream>

#include "lightspan/lightspan.hpp"

using namespace lightspan;

int main() {
  auto P = generate({generator_kind::uniform, 200, 2, 7});
  auto r = build_planar_spanner(P, 0.25);
  std::printf("stretch %.4f, lightness %.2f, %zu Steiner points, %zu edges\n", r.report.max_stretch, r.report.lightness,
              r.report.n_steiner, r.report.n_edges);

  auto f = fast_build(P, 0.25);
  std::printf("fast: stretch %.4f, lightness %.2f\n", f.report.max_stretch, f.report.lightness);

  std::ofstream("basic.json") << report_to_json(r.report).dump(2) << '\n';
  write_graph_file("basic_graph.json", r.graph);
  render_svg(r.graph, "basic.svg");
  return 0;
}
