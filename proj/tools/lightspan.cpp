// lightspan: command line front end
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lightspan/lightspan.hpp"

using namespace lightspan;

namespace {

constexpr int exit_ok = 0, exit_verify = 2, exit_invalid = 3;

struct Common {
  std::string in, out, report;
  std::string algo = "planar", kind = "uniform", plugin = "greedy", verify = "auto";
  std::vector<double> eps{0.25};
  std::vector<std::string> algos;
  std::uint64_t seed = 1;
  int n = 100, dim = 2, repeats = 1;
  bool prefilter = false;
};

verify_mode parse_verify(const std::string& s) {
  if (s == "auto") return verify_mode::automatic;
  if (s == "exact") return verify_mode::exact;
  if (s == "sampled") return verify_mode::sampled;
  if (s == "none") return verify_mode::none;
  throw invalid_input("unknown verification mode: " + s);
}

PointSet load_points(const std::string& path) {
  if (path.empty() || path == "-") return read_points(std::cin);
  return read_points_file(path);
}

GeneratorSpec gen_spec(const Common& c, double eps) {
  GeneratorSpec g;
  g.kind = parse_generator_kind(c.kind);
  g.n = c.n;
  g.d = c.dim;
  g.seed = c.seed;
  g.eps = eps;
  return g;
}

int cmd_generate(const Common& c) {
  auto P = generate(gen_spec(c, c.eps.front()));
  if (c.out.empty() || c.out == "-")
    write_points(std::cout, P);
  else
    write_points_file(c.out, P);
  return exit_ok;
}

void print_report(const nlohmann::ordered_json& j, const std::string& path) {
  if (path.empty()) {
    std::cout << j.dump(1) << '\n';
  } else {
    std::ofstream f(path);
    require(static_cast<bool>(f), "cannot write report file: " + path);
    f << j.dump(1) << '\n';
  }
}

int cmd_build(const Common& c) {
  auto P = load_points(c.in);
  RunConfig cfg;
  cfg.algo = parse_algorithm(c.algo);
  cfg.eps = c.eps.front();
  cfg.prefilter_logn = c.prefilter;
  cfg.plugin = parse_stp_plugin(c.plugin);
  cfg.verify = parse_verify(c.verify);
  cfg.seed = c.seed;
  cfg.graph_out = c.out;
  auto r = run(cfg, P);
  auto j = report_to_json(r.report);
  j["algorithm"] = c.algo;
  j["ok"] = r.ok;
  print_report(j, c.report);
  if (!r.ok)
    std::cerr << "verification failed: stretch " << std::setprecision(17) << r.report.max_stretch << " at pair ("
              << r.report.worst_pair.first << ", " << r.report.worst_pair.second << ")\n";
  return r.ok ? exit_ok : exit_verify;
}

int cmd_verify(const Common& c) {
  require(!c.in.empty(), "verify: --in graph file is required");
  auto g = read_graph_file(c.in);
  double eps = c.eps.front();
  SpannerReport rep;
  auto t0 = std::chrono::steady_clock::now();
  fill_basic_report(g, mst_weight(originals_of(g)), rep);
  auto mode = parse_verify(c.verify);
  if (mode == verify_mode::none) mode = verify_mode::automatic;
  check_stretch(g, mode, 1 + eps, c.seed, rep);
  rep.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool ok = rep.max_stretch <= 1 + eps;
  auto j = report_to_json(rep);
  j["eps"] = eps;
  j["ok"] = ok;
  print_report(j, c.report.empty() ? c.out : c.report);
  return ok ? exit_ok : exit_verify;
}

int cmd_render(const Common& c) {
  require(!c.in.empty(), "render: --in graph file is required");
  require(!c.out.empty(), "render: --out svg path is required");
  render_svg(read_graph_file(c.in), c.out);
  return exit_ok;
}

// one row per (algorithm, eps, repeat) on a generated instance
int cmd_bench(const Common& c) {
  std::vector<std::string> algos = c.algos;
  if (algos.empty()) algos = c.dim == 2 ? std::vector<std::string>{"planar", "fast-planar", "greedy"}
                                        : std::vector<std::string>{"highdim", "greedy"};
  std::ostringstream tab;
  tab << "algo\tkind\tn\td\teps\tseed\tsteiner\tedges\tlightness\tmax_stretch\tverification\tseconds\tok\n";
  bool all_ok = true;
  for (double eps : c.eps) {
    for (int r = 0; r < c.repeats; ++r) {
      Common cr = c;
      cr.seed = c.seed + r;
      auto P = generate(gen_spec(cr, eps));
      for (const auto& a : algos) {
        RunConfig cfg;
        cfg.algo = parse_algorithm(a);
        cfg.eps = eps;
        cfg.prefilter_logn = c.prefilter;
        cfg.plugin = parse_stp_plugin(c.plugin);
        cfg.verify = parse_verify(c.verify);
        cfg.seed = cr.seed;
        auto res = run(cfg, P);
        all_ok = all_ok && res.ok;
        const auto& rep = res.report;
        tab << a << '\t' << c.kind << '\t' << P.size() << '\t' << P.dim() << '\t' << eps << '\t' << cr.seed << '\t'
            << rep.n_steiner << '\t' << rep.n_edges << '\t' << std::setprecision(6) << rep.lightness << '\t'
            << std::setprecision(8) << rep.max_stretch << '\t' << rep.verification << '\t' << std::setprecision(4)
            << rep.elapsed << '\t' << (res.ok ? "yes" : "NO") << '\n';
        std::cerr << a << " eps=" << eps << " seed=" << cr.seed << " done\n";
      }
    }
  }
  if (c.out.empty() || c.out == "-") {
    std::cout << tab.str();
  } else {
    std::ofstream f(c.out);
    require(static_cast<bool>(f), "cannot write table: " + c.out);
    f << tab.str();
  }
  return all_ok ? exit_ok : exit_verify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"light Steiner spanners for Euclidean point sets"};
  app.require_subcommand(1);
  Common c;

  auto* gen = app.add_subcommand("generate", "write a generated point set");
  gen->add_option("--kind", c.kind, "uniform | grid | boundary-spaced | clustered")->capture_default_str();
  gen->add_option("--n", c.n, "number of points")->capture_default_str();
  gen->add_option("--dim", c.dim, "dimension")->capture_default_str();
  gen->add_option("--seed", c.seed, "random seed")->capture_default_str();
  gen->add_option("--eps", c.eps, "spacing parameter for boundary-spaced")->expected(1);
  gen->add_option("--out", c.out, "point file (stdout if omitted)");

  auto* build = app.add_subcommand("build", "build a spanner, verify it and write the graph");
  build->add_option("--in", c.in, "point file (stdin if omitted)");
  build->add_option("--algo", c.algo, "planar | fast-planar | highdim | greedy")->capture_default_str();
  build->add_option("--eps", c.eps, "target stretch is 1+eps")->expected(1);
  build->add_option("--seed", c.seed, "seed for sampled verification")->capture_default_str();
  build->add_flag("--prefilter-logn", c.prefilter, "route pairs below w(MST)/n^2 directly");
  build->add_option("--stp-plugin", c.plugin, "greedy | complete (highdim only)")->capture_default_str();
  build->add_option("--verify", c.verify, "auto | exact | sampled | none")->capture_default_str();
  build->add_option("--out", c.out, "graph file (JSON)");
  build->add_option("--report", c.report, "report file (stdout if omitted)");

  auto* ver = app.add_subcommand("verify", "check the stretch of a graph file");
  ver->add_option("--in", c.in, "graph file")->required();
  ver->add_option("--eps", c.eps, "allowed stretch is 1+eps")->expected(1);
  ver->add_option("--seed", c.seed, "seed for sampled verification")->capture_default_str();
  ver->add_option("--verify", c.verify, "auto | exact | sampled")->capture_default_str();
  ver->add_option("--out", c.out, "report file (stdout if omitted)");

  auto* bench = app.add_subcommand("bench", "run algorithms on generated instances and print a table");
  bench->add_option("--algo", c.algos, "algorithms (repeatable; default: all that fit --dim)");
  bench->add_option("--eps", c.eps, "eps values (repeatable)");
  bench->add_option("--kind", c.kind, "generator kind")->capture_default_str();
  bench->add_option("--n", c.n, "number of points")->capture_default_str();
  bench->add_option("--dim", c.dim, "dimension")->capture_default_str();
  bench->add_option("--seed", c.seed, "first seed")->capture_default_str();
  bench->add_option("--repeats", c.repeats, "instances per eps (seeds seed, seed+1, ...)")->capture_default_str();
  bench->add_flag("--prefilter-logn", c.prefilter, "route pairs below w(MST)/n^2 directly");
  bench->add_option("--stp-plugin", c.plugin, "greedy | complete")->capture_default_str();
  bench->add_option("--verify", c.verify, "auto | exact | sampled | none")->capture_default_str();
  bench->add_option("--out", c.out, "table file, tab separated (stdout if omitted)");

  auto* rend = app.add_subcommand("render", "draw a 2-d graph file as SVG");
  rend->add_option("--in", c.in, "graph file")->required();
  rend->add_option("--out", c.out, "svg file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? exit_ok : exit_invalid;
  }

  try {
    if (*gen) return cmd_generate(c);
    if (*build) return cmd_build(c);
    if (*ver) return cmd_verify(c);
    if (*bench) return cmd_bench(c);
    if (*rend) return cmd_render(c);
  } catch (const invalid_input& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return exit_invalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return exit_ok;
}
