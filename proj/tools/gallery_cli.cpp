// gallery_cli: exact art gallery tools.
//
// Exit status: 0 success, 1 domain failure (invalid polygon, not covered,
// no cover within the bit budget), 2 usage or parse error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "gallery/gallery.hpp"

using namespace gallery;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << text;
}

// Perturbed polygons may leave [0, L]^2, so inputs are checked without the
// bounds test; `validate` still applies it.
Polygon load_polygon(const std::string& path) {
  Polygon p = parse_polygon_unchecked(read_file(path));
  require_valid(p, ValidateOptions{false});
  return p;
}

Point single_point(const std::string& text) {
  GuardSet g = parse_guards(text);
  if (g.size() != 1) throw UsageError("expected a single point x,y");
  return g.guards[0];
}

void print_violations(const ValidityReport& rep) {
  std::cerr << rep.describe();
}

// ----------------------------------------------------------------------------

int cmd_validate(const std::string& path, bool bounds) {
  Polygon p = parse_polygon_unchecked(read_file(path));
  ValidityReport rep = validate_polygon(p, ValidateOptions{bounds});
  if (rep.valid()) {
    std::cout << "valid\n";
    return 0;
  }
  std::cout << "invalid\n";
  print_violations(rep);
  return 1;
}

struct PerturbArgs {
  std::string polygon, model = "edge-inflate", delta, out;
  std::optional<std::int64_t> q;
  std::uint64_t seed = 0;
  bool approximate = false;
};

int cmd_perturb(const PerturbArgs& a) {
  Polygon p = load_polygon(a.polygon);
  PerturbationSpec spec;
  try {
    spec.model = parse_model(a.model);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  spec.delta = parse_rational(a.delta);
  spec.granularity = a.q;
  spec.seed = a.seed;
  spec.offsets.exact = !a.approximate;
  auto [moved, rec] = sample(p, spec);
  std::ostringstream os;
  os << "# model " << to_string(rec.model) << " delta " << spec.delta.fraction_str() << " seed " << rec.seed
     << " attempts " << rec.attempts << "\n";
  if (rec.model == PerturbModel::EdgeInflate) os << "# t " << rec.inflation.fraction_str() << "\n";
  if (rec.discrete_index) os << "# index " << *rec.discrete_index << " of " << *a.q << "\n";
  os << emit_polygon(moved);
  write_output(a.out, os.str());
  return 0;
}

int cmd_visibility(const std::string& polygon, const std::string& guard, const std::string& svg) {
  Polygon p = load_polygon(polygon);
  Point g = single_point(guard);
  VisibilityPolygon v = visibility_polygon(p, g);
  for (const auto& q : v.boundary) std::cout << point_str(q) << "\n";
  if (!svg.empty()) {
    SvgOverlays ov;
    ov.guards = {g};
    ov.visibility = {v};
    write_output(svg, emit_svg(p, ov));
  }
  return 0;
}

int cmd_verify(const std::string& polygon, const std::string& guards) {
  Polygon p = load_polygon(polygon);
  GuardSet g = parse_guards(guards);
  if (g.guards.empty()) throw UsageError("no guards given");
  CoverageReport rep = verify_guard_set(p, g);
  if (rep.covered) {
    std::cout << "covered\n";
    return 0;
  }
  std::cout << "not covered: " << point_str(*rep.uncovered_witness) << "\n";
  return 1;
}

void print_solution(const GuardSet& g, int level, const Rational& w) {
  BitCost bits = guard_bits(g);
  std::cout << "guards " << g.size() << "\n";
  for (std::size_t i = 0; i < g.size(); ++i) std::cout << point_str(g.guards[i]) << " bits " << bits.per_guard[i] << "\n";
  std::cout << "bits max " << bits.max_per_guard << " total " << bits.total << "\n";
  std::cout << "grid level " << level << " width " << w.fraction_str() << "\n";
}

int cmd_solve(const std::string& polygon, const std::string& mode, std::size_t max_bits, int level,
              std::uint64_t node_limit) {
  Polygon p = load_polygon(polygon);
  if (mode == "exact") {
    NaiveOptions opts;
    opts.grid.node_limit = node_limit;
    NaiveResult r = naive_algorithm(p, max_bits, opts);
    if (r.exhausted) {
      std::cout << "exhausted: no stable optimum within " << max_bits << " bits\n";
      return 1;
    }
    print_solution(r.guards, r.level, dyadic_width(p, r.level));
    return 0;
  }
  if (mode != "greedy") throw UsageError("--mode must be exact or greedy");
  Rational w = dyadic_width(p, level);
  std::vector<Point> cands = CandidateGrid{w}.points(p, 4096);
  for (const auto& v : p.vertices()) cands.push_back(v);
  std::sort(cands.begin(), cands.end());
  cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
  GuardSet g = solve_greedy(build_cover_instance(p, cands));
  if (guard_bits(g).max_per_guard > max_bits) {
    std::cout << "exhausted: greedy cover needs more than " << max_bits << " bits\n";
    return 1;
  }
  CoverageReport rep = verify_guard_set(p, g);
  print_solution(g, level, w);
  if (!rep.covered) {
    std::cout << "not covered: " << point_str(*rep.uncovered_witness) << "\n";
    return 1;
  }
  return 0;
}

struct ExperimentArgs {
  std::string config, rows, aggregates, timing;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
};

int cmd_experiment(const ExperimentArgs& a) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(a.config));
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
  ExperimentConfig cfg = ExperimentConfig::from_json(j);
  cfg.seed = *a.seed;
  if (!a.rows.empty()) cfg.rows_path = a.rows;
  if (!a.aggregates.empty()) cfg.aggregates_path = a.aggregates;
  if (!a.timing.empty()) cfg.timing_path = a.timing;
  if (a.workers) cfg.workers = *a.workers;
  ExperimentResult r = run_experiment(cfg);
  std::size_t skipped = 0;
  for (const auto& c : r.cells) skipped += c.skipped;
  std::cerr << r.rows.size() << " rows, " << skipped << " skipped\n";
  std::cout << aggregates_csv(r);
  return 0;
}

struct RenderArgs {
  std::string polygon, guards, grid, inflate, out;
  bool visibility = false, witnesses = false;
};

int cmd_render(const RenderArgs& a) {
  Polygon p = load_polygon(a.polygon);
  SvgOverlays ov;
  if (!a.guards.empty()) ov.guards = parse_guards(a.guards).guards;
  if (a.visibility)
    for (const auto& g : ov.guards) ov.visibility.push_back(visibility_polygon(p, g));
  if (a.witnesses && !ov.guards.empty()) {
    std::vector<VisibilityPolygon> regions;
    for (const auto& g : ov.guards) regions.push_back(visibility_polygon(p, g));
    ov.witnesses = witness_points(p, regions);
  }
  if (!a.grid.empty()) ov.grid = parse_rational(a.grid);
  if (!a.inflate.empty()) ov.inflated = edge_inflate(p, parse_rational(a.inflate), OffsetOptions{false, 64});
  write_output(a.out, emit_svg(p, ov));
  return 0;
}

int cmd_gen(const std::string& spec_text, std::uint64_t seed, bool general, const std::string& out) {
  GenSpec spec;
  try {
    spec = GenSpec::parse(spec_text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  Polygon p;
  try {
    p = gen_polygon(spec, !general, seed);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  write_output(out, "# " + spec.str() + " seed " + std::to_string(seed) + "\n" + emit_polygon(p));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact art gallery guarding: validation, perturbation, visibility, verification and solving"};
  app.require_subcommand(1);
  std::function<int()> run;

  auto* validate = app.add_subcommand("validate", "check a polygon file");
  std::string v_path;
  bool v_no_bounds = false;
  validate->add_option("--polygon", v_path, "polygon file")->required();
  validate->add_flag("--no-bounds", v_no_bounds, "skip the [0, L]^2 check (perturbed polygons)");
  validate->callback([&] { run = [&] { return cmd_validate(v_path, !v_no_bounds); }; });

  auto* perturb = app.add_subcommand("perturb", "draw a perturbed polygon");
  PerturbArgs pa;
  perturb->add_option("--polygon", pa.polygon, "polygon file")->required();
  perturb->add_option("--model", pa.model, "edge-inflate, edge-perturb or vertex-perturb");
  perturb->add_option("--delta", pa.delta, "magnitude, a rational")->required();
  perturb->add_option("--q", pa.q, "granularity for discrete edge inflation");
  perturb->add_option("--seed", pa.seed, "random seed")->required();
  perturb->add_option("--out", pa.out, "output file (default stdout)");
  perturb->add_flag("--approximate", pa.approximate, "allow non-Pythagorean edges (rounded outward)");
  perturb->callback([&] { run = [&] { return cmd_perturb(pa); }; });

  auto* visibility = app.add_subcommand("visibility", "visibility polygon of one point");
  std::string vis_poly, vis_guard, vis_svg;
  visibility->add_option("--polygon", vis_poly, "polygon file")->required();
  visibility->add_option("--guard", vis_guard, "point x,y")->required();
  visibility->add_option("--svg", vis_svg, "also write an SVG scene");
  visibility->callback([&] { run = [&] { return cmd_visibility(vis_poly, vis_guard, vis_svg); }; });

  auto* verify = app.add_subcommand("verify", "check that guards see the whole polygon");
  std::string ver_poly, ver_guards;
  verify->add_option("--polygon", ver_poly, "polygon file")->required();
  verify->add_option("--guards", ver_guards, "guards \"x1,y1 x2,y2 ...\"")->required();
  verify->callback([&] { run = [&] { return cmd_verify(ver_poly, ver_guards); }; });

  auto* solve = app.add_subcommand("solve", "find a guard set on a dyadic grid");
  std::string s_poly, s_mode = "exact";
  std::size_t s_bits = 32;
  int s_level = 3;
  std::uint64_t s_nodes = kDefaultNodeLimit;
  solve->add_option("--polygon", s_poly, "polygon file")->required();
  solve->add_option("--mode", s_mode, "exact (iterative deepening) or greedy (fixed grid)")
      ->check(CLI::IsMember({"exact", "greedy"}));
  solve->add_option("--max-bits", s_bits, "bit budget per guard");
  solve->add_option("--grid-level", s_level, "greedy mode: grid width L / 2^level")->check(CLI::Range(0, 12));
  solve->add_option("--node-limit", s_nodes, "branch-and-bound node cap");
  solve->callback([&] { run = [&] { return cmd_solve(s_poly, s_mode, s_bits, s_level, s_nodes); }; });

  auto* experiment = app.add_subcommand("experiment", "run an experiment from a JSON config");
  ExperimentArgs ea;
  experiment->add_option("--config", ea.config, "JSON config file")->required();
  experiment->add_option("--seed", ea.seed, "master seed")->required();
  experiment->add_option("--rows", ea.rows, "per-trial CSV (overrides config)");
  experiment->add_option("--aggregates", ea.aggregates, "aggregate CSV (overrides config)");
  experiment->add_option("--timing", ea.timing, "wall-clock sidecar CSV (overrides config)");
  experiment->add_option("--workers", ea.workers, "worker threads (GALLERY_WORKERS wins)");
  experiment->callback([&] { run = [&] { return cmd_experiment(ea); }; });

  auto* render = app.add_subcommand("render", "write an SVG scene");
  RenderArgs ra;
  render->add_option("--polygon", ra.polygon, "polygon file")->required();
  render->add_option("--guards", ra.guards, "guards \"x1,y1 x2,y2 ...\"");
  render->add_flag("--visibility", ra.visibility, "shade each guard's visibility polygon");
  render->add_flag("--witnesses", ra.witnesses, "mark one witness per arrangement face");
  render->add_option("--grid", ra.grid, "draw lattice points of this width");
  render->add_option("--inflate", ra.inflate, "dashed outline of the polygon inflated by t");
  render->add_option("--out", ra.out, "output file (default stdout)");
  render->callback([&] { run = [&] { return cmd_render(ra); }; });

  auto* gen = app.add_subcommand("gen", "generate a corpus polygon");
  std::string g_spec, g_out;
  std::uint64_t g_seed = 0;
  bool g_general = false;
  gen->add_option("--spec", g_spec, "\"Convex n\", \"Comb k\", \"StaircaseL n\", \"WithHoles n h\" or \"Pinwheel\"")
      ->required();
  gen->add_option("--seed", g_seed, "random seed");
  gen->add_flag("--general", g_general, "do not restrict edge directions to Pythagorean ones");
  gen->add_option("--out", g_out, "output file (default stdout)");
  gen->callback([&] { run = [&] { return cmd_gen(g_spec, g_seed, g_general, g_out); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    return run();
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const SyntaxError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const ValidityError& e) {
    std::cerr << e.what();
    return 1;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
}
