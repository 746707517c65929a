#pragma once

// Experiment drivers. A run is a list of trials (polygon x delta x sample);
// trials run on a worker pool and rows are written in trial order, so the
// CSV is identical for any worker count. Each trial's seed depends on the
// polygon and sample index only, so cells with different delta reuse the
// same random draws.

#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "gallery/corpus.hpp"
#include "gallery/io.hpp"
#include "gallery/solve.hpp"

namespace gallery {

enum class ExperimentKind { BitsVsDelta, GridContainment, OptMonotonicity, DiscreteHighProb, PointednessLemma };

inline const char* to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::BitsVsDelta: return "BitsVsDelta";
    case ExperimentKind::GridContainment: return "GridContainment";
    case ExperimentKind::OptMonotonicity: return "OptMonotonicity";
    case ExperimentKind::DiscreteHighProb: return "DiscreteHighProb";
    case ExperimentKind::PointednessLemma: return "PointednessLemma";
  }
  return "?";
}

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& m) : std::runtime_error("config: " + m) {}
};

inline ExperimentKind parse_experiment_kind(const std::string& s) {
  for (auto k : {ExperimentKind::BitsVsDelta, ExperimentKind::GridContainment, ExperimentKind::OptMonotonicity,
                 ExperimentKind::DiscreteHighProb, ExperimentKind::PointednessLemma})
    if (s == to_string(k)) return k;
  throw ConfigError("unknown experiment '" + s + "'");
}

struct PolygonSource {
  std::string generator;  // GenSpec text, empty when `file` is used
  std::string file;
  std::uint64_t seed = 0;

  std::string label() const {
    if (!file.empty()) return file;
    return generator + " #" + std::to_string(seed);
  }
  Polygon load(bool pythagorean) const {
    if (!file.empty()) {
      std::ifstream in(file);
      if (!in) throw ConfigError("cannot read polygon file '" + file + "'");
      std::stringstream ss;
      ss << in.rdbuf();
      return parse_polygon(ss.str());
    }
    return gen_polygon(GenSpec::parse(generator), pythagorean, seed);
  }
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::BitsVsDelta;
  std::vector<PolygonSource> polygons;
  bool pythagorean = true;
  std::vector<Rational> deltas;
  std::optional<std::int64_t> q;   // DiscreteHighProb granularity
  std::optional<Rational> p;       // DiscreteHighProb failure probability
  std::size_t samples = 1;
  std::uint64_t seed = 0;
  std::string rows_path;           // per-trial CSV, empty to skip
  std::string aggregates_path;     // aggregate CSV, empty to skip
  std::string timing_path;         // wall-clock sidecar CSV, empty to skip
  int j_ref = 20;                  // reference grid exponent
  int grid_level = 4;              // OptMonotonicity grid exponent
  int steps = 16;                  // OptMonotonicity inflation values per trial
  Rational delta0_ratio{1, 2};     // PointednessLemma: delta0 = ratio * delta
  std::uint64_t node_limit = kDefaultNodeLimit;
  std::size_t workers = 0;         // 0: GALLERY_WORKERS or hardware concurrency

  void check() const {
    if (polygons.empty()) throw ConfigError("no polygons");
    if (samples < 1) throw ConfigError("samples must be >= 1");
    if (deltas.empty()) throw ConfigError("no delta values");
    for (const auto& d : deltas)
      if (d.sign() <= 0) throw ConfigError("delta values must be positive");
    if (j_ref < 0 || grid_level < 0 || steps < 2) throw ConfigError("bad grid parameters");
    if (experiment == ExperimentKind::DiscreteHighProb) {
      if (!q || !p) throw ConfigError("DiscreteHighProb needs q and p");
      if (*q <= 0 || p->sign() <= 0 || *p >= Rational(1)) throw ConfigError("need q > 0 and 0 < p < 1");
      for (const auto& src : polygons) {
        std::size_t n = src.load(pythagorean).vertex_count();
        if (!(Rational(*q) > Rational(static_cast<std::int64_t>(2 * n)) / *p))
          throw ConfigError("DiscreteHighProb requires q > 2n/p");
      }
    }
    if (experiment == ExperimentKind::PointednessLemma && (delta0_ratio.sign() < 0 || delta0_ratio >= Rational(1)))
      throw ConfigError("delta0_ratio must be in [0, 1)");
  }

  static ExperimentConfig from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    auto rational = [](const nlohmann::json& v) {
      if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
      if (v.is_string()) return parse_rational(v.get<std::string>());
      throw ConfigError("rationals must be integers or \"a/b\" strings");
    };
    try {
      c.experiment = parse_experiment_kind(j.at("experiment").get<std::string>());
      for (const auto& p : j.at("polygons")) {
        PolygonSource s;
        if (p.is_string()) {
          s.generator = p.get<std::string>();
        } else {
          s.generator = p.value("generator", "");
          s.file = p.value("file", "");
          s.seed = p.value("seed", std::uint64_t{0});
        }
        if (s.generator.empty() == s.file.empty()) throw ConfigError("polygon needs exactly one of generator/file");
        c.polygons.push_back(std::move(s));
      }
      c.pythagorean = j.value("pythagorean", true);
      for (const auto& d : j.at("deltas")) c.deltas.push_back(rational(d));
      if (j.contains("q")) c.q = j.at("q").get<std::int64_t>();
      if (j.contains("p")) c.p = rational(j.at("p"));
      c.samples = j.value("samples", std::size_t{1});
      c.seed = j.value("seed", std::uint64_t{0});
      if (j.contains("output")) {
        const auto& o = j.at("output");
        c.rows_path = o.value("rows", "");
        c.aggregates_path = o.value("aggregates", "");
        c.timing_path = o.value("timing", "");
      }
      c.j_ref = j.value("j_ref", 20);
      c.grid_level = j.value("grid_level", 4);
      c.steps = j.value("steps", 16);
      if (j.contains("delta0_ratio")) c.delta0_ratio = rational(j.at("delta0_ratio"));
      c.node_limit = j.value("node_limit", kDefaultNodeLimit);
      c.workers = j.value("workers", std::size_t{0});
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(e.what());
    } catch (const SyntaxError& e) {
      throw ConfigError(e.what());
    }
    return c;
  }
};

// ----------------------------------------------------------------------------
// Building blocks shared by trials and tests

// Uniform point of the bounding box on the grid of 2^-bits times its extent,
// resampled until it lies in the open polygon.
inline Point random_interior_point(const Polygon& poly, DyadicRng& rng, int bits = 10) {
  Box b = bounding_box(poly.outer);
  const auto cells = std::uint64_t{1} << bits;
  for (int attempt = 0; attempt < 100000; ++attempt) {
    Rational u(static_cast<std::int64_t>(1 + rng.below(cells - 1)), static_cast<std::int64_t>(cells));
    Rational v(static_cast<std::int64_t>(1 + rng.below(cells - 1)), static_cast<std::int64_t>(cells));
    Point p{b.xmin + (b.xmax - b.xmin) * u, b.ymin + (b.ymax - b.ymin) * v};
    if (point_in_polygon(p, poly) == Location::Interior) return p;
  }
  throw std::runtime_error("random_interior_point: polygon too thin");
}

// A covering guard set: one random interior point, then unseen witnesses
// added as guards until the verifier accepts.
inline GuardSet random_cover(const Polygon& poly, DyadicRng& rng) {
  GuardSet g{{random_interior_point(poly, rng)}};
  for (int round = 0; round < 1000; ++round) {
    CoverageReport rep = verify_guard_set(poly, g);
    if (rep.covered) return g;
    const auto& ws = rep.uncovered_witnesses;
    g.guards.push_back(ws[rng.below(ws.size())]);
  }
  throw std::runtime_error("random_cover did not converge");
}

inline std::optional<std::size_t> grid_opt(const Polygon& poly, const Rational& w, WitnessPool& pool,
                                           const GridSolveOptions& opts, GuardSet* out = nullptr) {
  try {
    GridSolveResult r = solve_on_grid(poly, w, pool, opts);
    if (out) *out = r.guards;
    return r.guards.size();
  } catch (const InfeasibleCandidates&) {
    return std::nullopt;
  }
}

inline Rational dyadic_width(const Polygon& poly, int j) { return Rational(poly.bound) * Rational::pow2(-j); }

struct CheapestCover {
  std::size_t ref_opt = 0;
  int level = -1;  // coarsest dyadic level reaching ref_opt
  GuardSet guards;
};

// Reference optimum on the level-j_ref grid, then the coarsest level that
// reaches it. Optima are non-increasing in the level because the grids are
// nested, so a binary search finds it.
inline std::optional<CheapestCover> cheapest_cover(const Polygon& poly, int j_ref, const GridSolveOptions& opts) {
  WitnessPool pool(poly);
  CheapestCover out;
  GuardSet best;
  auto ref = grid_opt(poly, dyadic_width(poly, j_ref), pool, opts, &best);
  if (!ref) return std::nullopt;
  out.ref_opt = *ref;
  int lo = 0, hi = j_ref;
  while (lo < hi) {
    int mid = (lo + hi) / 2;
    GuardSet g;
    auto o = grid_opt(poly, dyadic_width(poly, mid), pool, opts, &g);
    if (o && *o <= out.ref_opt) {
      hi = mid;  // best always holds the solution at level hi
      best = std::move(g);
    } else {
      lo = mid + 1;
    }
  }
  out.level = lo;
  out.guards = std::move(best);
  return out;
}

// ----------------------------------------------------------------------------
// Trials

struct TrialRow {
  std::vector<std::string> fields;
  bool ok = true;      // false: skipped (recorded, not silent)
  bool passed = true;  // experiment-specific pass flag
  double metric = 0;   // bits (BitsVsDelta) or level
  double wall_ms = 0;
};

struct TrialKey {
  std::size_t index, polygon, delta, sample;
  std::uint64_t seed;
};

inline std::vector<std::string> csv_header(ExperimentKind k) {
  const std::vector<std::string> base{"trial", "polygon", "delta", "sample", "seed"};
  std::vector<std::string> extra;
  switch (k) {
    case ExperimentKind::BitsVsDelta:
      extra = {"status", "attempts", "t", "ref_opt", "level", "guards", "bits_max", "bits_total"};
      break;
    case ExperimentKind::GridContainment:
      extra = {"status", "t", "w", "guards", "passed", "witness"};
      break;
    case ExperimentKind::OptMonotonicity:
      extra = {"status", "grid_w", "s_values", "opt_values", "violations", "passed"};
      break;
    case ExperimentKind::DiscreteHighProb:
      extra = {"status", "index", "s", "w", "ref_opt", "coarse_opt", "success"};
      break;
    case ExperimentKind::PointednessLemma:
      extra = {"status", "delta0", "gamma", "beta", "max_sq_displacement", "passed"};
      break;
  }
  std::vector<std::string> out = base;
  out.insert(out.end(), extra.begin(), extra.end());
  return out;
}

inline std::string opt_str(const std::optional<std::size_t>& o) { return o ? std::to_string(*o) : "inf"; }

inline TrialRow run_trial(const ExperimentConfig& cfg, const std::vector<Polygon>& polys, const TrialKey& key) {
  const Polygon& poly = polys[key.polygon];
  const Rational& delta = cfg.deltas[key.delta];
  TrialRow row;
  row.fields = {std::to_string(key.index), cfg.polygons[key.polygon].label(), delta.fraction_str(),
                std::to_string(key.sample), std::to_string(key.seed)};
  auto push = [&](std::string s) { row.fields.push_back(std::move(s)); };
  GridSolveOptions opts;
  opts.node_limit = cfg.node_limit;
  const auto start = std::chrono::steady_clock::now();

  switch (cfg.experiment) {
    case ExperimentKind::BitsVsDelta: {
      PerturbationSpec spec;
      spec.model = PerturbModel::EdgeInflate;
      spec.delta = delta;
      spec.seed = key.seed;
      try {
        auto [pt_poly, rec] = sample(poly, spec);
        auto cc = cheapest_cover(pt_poly, cfg.j_ref, opts);
        if (!cc) {
          row.ok = false;
          push("infeasible");
          push(std::to_string(rec.attempts));
          push(rec.inflation.fraction_str());
          for (int i = 0; i < 5; ++i) push("");
          break;
        }
        BitCost bits = guard_bits(cc->guards);
        push("ok");
        push(std::to_string(rec.attempts));
        push(rec.inflation.fraction_str());
        push(std::to_string(cc->ref_opt));
        push(std::to_string(cc->level));
        push(emit_guards(cc->guards));
        push(std::to_string(bits.max_per_guard));
        push(std::to_string(bits.total));
        row.metric = static_cast<double>(bits.max_per_guard);
      } catch (const PerturbError& e) {
        row.ok = false;
        push(std::string("skipped: ") + to_string(e.kind()));
        for (int i = 0; i < 7; ++i) push("");
      } catch (const BudgetExceeded&) {
        row.ok = false;
        push("budget");
        for (int i = 0; i < 7; ++i) push("");
      }
      break;
    }
    case ExperimentKind::GridContainment: {
      DyadicRng rng(key.seed);
      GuardSet g = random_cover(poly, rng);
      // t uniform on (0, delta] with 20 fractional bits
      const std::int64_t cells = std::int64_t{1} << 20;
      Rational t = delta * Rational(static_cast<std::int64_t>(1 + rng.below(cells)), cells);
      try {
        LemmaReport rep = check_rounding_lemma(poly, g, t, t);
        push("ok");
        push(t.fraction_str());
        push(t.fraction_str());
        push(emit_guards(g));
        row.passed = rep.passed && rep.precondition_met;
        push(row.passed ? "1" : "0");
        push(rep.failure_witness ? point_str(*rep.failure_witness) : "");
      } catch (const PerturbError& e) {
        row.ok = false;
        push(std::string("skipped: ") + to_string(e.kind()));
        push(t.fraction_str());
        for (int i = 0; i < 4; ++i) push("");
      }
      break;
    }
    case ExperimentKind::OptMonotonicity: {
      Rational w = dyadic_width(poly, cfg.grid_level);
      // Pure grid candidates: the vertices of P_s move with s.
      GridSolveOptions grid_only = opts;
      grid_only.include_vertices = false;
      std::string s_values, opt_values;
      std::optional<std::size_t> prev;
      bool first = true;
      std::size_t violations = 0;
      try {
        for (int k = 0; k < cfg.steps; ++k) {
          Rational s = delta * Rational(k, cfg.steps - 1);
          Polygon ps = edge_inflate(poly, s, OffsetOptions{true, 64});
          WitnessPool pool(ps);
          auto o = grid_opt(ps, w, pool, grid_only);
          if (!first && o && prev && *o > *prev) ++violations;
          if (!first && !o && prev) ++violations;
          s_values += (first ? "" : ";") + s.fraction_str();
          opt_values += (first ? "" : ";") + opt_str(o);
          prev = o;
          first = false;
        }
        push("ok");
        push(w.fraction_str());
        push(s_values);
        push(opt_values);
        push(std::to_string(violations));
        row.passed = violations == 0;
        push(row.passed ? "1" : "0");
      } catch (const PerturbError& e) {
        row.ok = false;
        push(std::string("skipped: ") + to_string(e.kind()));
        for (int i = 0; i < 5; ++i) push("");
      }
      break;
    }
    case ExperimentKind::DiscreteHighProb: {
      PerturbationSpec spec;
      spec.model = PerturbModel::EdgeInflate;
      spec.delta = delta;
      spec.granularity = *cfg.q;
      spec.seed = key.seed;
      const auto n = static_cast<std::int64_t>(poly.vertex_count());
      Rational w = delta * *cfg.p / Rational(2 * n);
      try {
        auto [ps, rec] = sample(poly, spec);
        WitnessPool pool(ps);
        auto ref = grid_opt(ps, dyadic_width(ps, cfg.j_ref), pool, opts);
        GridSolveOptions coarse = opts;
        coarse.include_vertices = false;
        auto got = grid_opt(ps, w, pool, coarse);
        push("ok");
        push(std::to_string(*rec.discrete_index));
        push(rec.inflation.fraction_str());
        push(w.fraction_str());
        push(opt_str(ref));
        push(opt_str(got));
        row.passed = got && ref && *got <= *ref;
        push(row.passed ? "1" : "0");
      } catch (const PerturbError& e) {
        row.ok = false;
        push(std::string("skipped: ") + to_string(e.kind()));
        for (int i = 0; i < 6; ++i) push("");
      }
      break;
    }
    case ExperimentKind::PointednessLemma: {
      Rational delta0 = delta * cfg.delta0_ratio;
      Pointedness pn = pointedness(poly);
      Rational gamma = pn.beta * (delta - delta0);
      try {
        PointednessLemmaReport rep = check_pointedness_lemma(poly, delta, delta0, gamma, key.seed);
        push("ok");
        push(delta0.fraction_str());
        push(gamma.fraction_str());
        push(pn.beta.fraction_str());
        push(rep.max_squared_displacement.fraction_str());
        row.passed = rep.passed;
        push(row.passed ? "1" : "0");
      } catch (const PerturbError& e) {
        row.ok = false;
        push(std::string("skipped: ") + to_string(e.kind()));
        push(delta0.fraction_str());
        push(gamma.fraction_str());
        push(pn.beta.fraction_str());
        push("");
        push("");
      }
      break;
    }
  }
  row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return row;
}

// ----------------------------------------------------------------------------
// Aggregates

struct CellAggregate {
  Rational delta;
  std::size_t rows = 0, skipped = 0, passed = 0;
  double mean_metric = 0, median_metric = 0;
  double pass_rate() const { return rows > skipped ? static_cast<double>(passed) / static_cast<double>(rows - skipped) : 0; }
};

struct LinearFit {
  double slope = 0, intercept = 0, r2 = 0;
  std::size_t points = 0;
  bool valid = false;  // needs two distinct abscissae
};

inline LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  LinearFit f;
  f.points = x.size();
  if (x.size() < 2) return f;
  double n = static_cast<double>(x.size()), sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    syy += y[i] * y[i];
  }
  double vx = sxx - sx * sx / n, vy = syy - sy * sy / n, cxy = sxy - sx * sy / n;
  if (vx <= 0) return f;
  f.valid = true;
  f.slope = cxy / vx;
  f.intercept = (sy - f.slope * sx) / n;
  f.r2 = vy > 0 ? (cxy * cxy) / (vx * vy) : 1.0;
  return f;
}

// Wilson score interval for a binomial proportion at normal quantile z.
inline std::pair<double, double> wilson_interval(std::size_t successes, std::size_t n, double z = 2.5758293035489) {
  if (n == 0) return {0, 1};
  double nn = static_cast<double>(n), ph = static_cast<double>(successes) / nn;
  double denom = 1 + z * z / nn;
  double centre = (ph + z * z / (2 * nn)) / denom;
  double half = z * std::sqrt(ph * (1 - ph) / nn + z * z / (4 * nn * nn)) / denom;
  return {centre - half, centre + half};
}

struct ExperimentResult {
  std::vector<std::string> header;
  std::vector<TrialRow> rows;  // trial order
  std::vector<CellAggregate> cells;  // per delta
  LinearFit fit;                      // mean metric vs log2(1/delta)
};

inline std::vector<CellAggregate> aggregate_cells(const ExperimentConfig& cfg, const std::vector<TrialKey>& keys,
                                                  const std::vector<TrialRow>& rows) {
  std::vector<CellAggregate> cells(cfg.deltas.size());
  std::vector<std::vector<double>> metrics(cfg.deltas.size());
  for (std::size_t d = 0; d < cfg.deltas.size(); ++d) cells[d].delta = cfg.deltas[d];
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto& c = cells[keys[i].delta];
    ++c.rows;
    if (!rows[i].ok) {
      ++c.skipped;
      continue;
    }
    if (rows[i].passed) ++c.passed;
    metrics[keys[i].delta].push_back(rows[i].metric);
  }
  for (std::size_t d = 0; d < cells.size(); ++d) {
    auto& m = metrics[d];
    if (m.empty()) continue;
    double s = 0;
    for (double v : m) s += v;
    cells[d].mean_metric = s / static_cast<double>(m.size());
    std::sort(m.begin(), m.end());
    cells[d].median_metric = m.size() % 2 ? m[m.size() / 2] : (m[m.size() / 2 - 1] + m[m.size() / 2]) / 2;
  }
  return cells;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

inline std::string csv_line(const std::vector<std::string>& fields) {
  std::string s;
  for (std::size_t i = 0; i < fields.size(); ++i) s += (i ? "," : "") + csv_field(fields[i]);
  return s + "\n";
}

inline std::string format_double(double v) {
  std::ostringstream os;
  os.precision(6);
  os << std::fixed << v;
  return os.str();
}

inline std::string aggregates_csv(const ExperimentResult& r) {
  std::string out = csv_line({"scope", "delta", "log2_inv_delta", "rows", "skipped", "passed", "pass_rate",
                              "mean_metric", "median_metric", "slope", "intercept", "r2"});
  for (const auto& c : r.cells) {
    double lg = -std::log2(c.delta.to_double());
    out += csv_line({"cell", c.delta.fraction_str(), format_double(lg), std::to_string(c.rows),
                     std::to_string(c.skipped), std::to_string(c.passed), format_double(c.pass_rate()),
                     format_double(c.mean_metric), format_double(c.median_metric), "", "", ""});
  }
  if (r.fit.valid)
    out += csv_line({"fit", "", "", "", "", "", "", "", "", format_double(r.fit.slope),
                     format_double(r.fit.intercept), format_double(r.fit.r2)});
  return out;
}

inline std::size_t resolve_workers(std::size_t requested) {
  if (const char* env = std::getenv("GALLERY_WORKERS")) {
    char* end = nullptr;
    unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

inline std::vector<TrialKey> trial_keys(const ExperimentConfig& cfg) {
  std::vector<TrialKey> keys;
  for (std::size_t p = 0; p < cfg.polygons.size(); ++p)
    for (std::size_t d = 0; d < cfg.deltas.size(); ++d)
      for (std::size_t s = 0; s < cfg.samples; ++s)
        keys.push_back({keys.size(), p, d, s, mix_seed(cfg.seed, p * 1'000'003ULL + s)});
  return keys;
}

// Runs every trial; rows are streamed to cfg.rows_path (if set) in trial
// order as soon as all earlier trials have finished.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                       const std::function<void(const TrialRow&)>& on_row = {}) {
  cfg.check();
  std::vector<Polygon> polys;
  for (const auto& src : cfg.polygons) polys.push_back(src.load(cfg.pythagorean));
  const std::vector<TrialKey> keys = trial_keys(cfg);

  ExperimentResult res;
  res.header = csv_header(cfg.experiment);
  std::ofstream rows_out, timing_out;
  if (!cfg.rows_path.empty()) {
    rows_out.open(cfg.rows_path, std::ios::binary);
    if (!rows_out) throw ConfigError("cannot write '" + cfg.rows_path + "'");
    rows_out << csv_line(res.header) << std::flush;
  }
  if (!cfg.timing_path.empty()) {
    timing_out.open(cfg.timing_path, std::ios::binary);
    timing_out << "trial,wall_ms\n";
  }

  std::vector<std::optional<TrialRow>> done(keys.size());
  std::vector<std::exception_ptr> errors(keys.size());
  std::mutex mu;
  std::condition_variable cv;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= keys.size()) return;
      std::optional<TrialRow> row;
      std::exception_ptr err;
      try {
        row = run_trial(cfg, polys, keys[i]);
      } catch (...) {
        err = std::current_exception();
      }
      std::lock_guard<std::mutex> lock(mu);
      done[i] = std::move(row);
      errors[i] = err;
      if (err && !done[i]) done[i] = TrialRow{};
      cv.notify_all();
    }
  };
  const std::size_t nw = std::min(resolve_workers(cfg.workers), std::max<std::size_t>(keys.size(), 1));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < nw; ++t) pool.emplace_back(worker);

  // With a single worker the writer thread does the work itself.
  std::exception_ptr first_error;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (nw == 1) {
      try {
        done[i] = run_trial(cfg, polys, keys[i]);
      } catch (...) {
        first_error = std::current_exception();
        break;
      }
    } else {
      std::unique_lock<std::mutex> lock(mu);
      cv.wait(lock, [&] { return done[i].has_value(); });
      if (errors[i]) {
        first_error = errors[i];
        break;
      }
    }
    TrialRow row = *done[i];
    if (rows_out.is_open()) rows_out << csv_line(row.fields) << std::flush;
    if (timing_out.is_open()) timing_out << i << "," << format_double(row.wall_ms) << "\n";
    if (on_row) on_row(row);
    res.rows.push_back(std::move(row));
  }
  if (first_error) next.store(keys.size());
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);

  res.cells = aggregate_cells(cfg, keys, res.rows);
  std::vector<double> xs, ys;
  for (const auto& c : res.cells)
    if (c.rows > c.skipped) {
      xs.push_back(-std::log2(c.delta.to_double()));
      ys.push_back(c.mean_metric);
    }
  res.fit = fit_line(xs, ys);
  if (!cfg.aggregates_path.empty()) {
    std::ofstream agg(cfg.aggregates_path, std::ios::binary);
    if (!agg) throw ConfigError("cannot write '" + cfg.aggregates_path + "'");
    agg << aggregates_csv(res);
  }
  return res;
}

}  // namespace gallery
