#include "systolic/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "json.hpp"
#include "systolic/io.hpp"

namespace systolic {

using json = nlohmann::ordered_json;

TheoremCheck make_check(std::string id, std::string desc, double lhs, double rhs,
                        double tolerance, std::string provenance) {
  TheoremCheck c;
  c.theorem_id = std::move(id);
  c.input_desc = std::move(desc);
  c.lhs = lhs;
  c.rhs = rhs;
  c.margin = lhs - rhs;
  c.tolerance = tolerance;
  c.pass = lhs >= rhs - tolerance;
  c.provenance = std::move(provenance);
  return c;
}

ConvexBody random_body(std::mt19937_64& rng, bool symmetric) {
  std::uniform_int_distribution<int> npts(3, 12);
  std::uniform_real_distribution<double> radius(0.6, 2.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  for (int attempt = 0; attempt < 200; ++attempt) {
    const int n = npts(rng);
    std::vector<Vec2> pts;
    for (int i = 0; i < n; ++i) {
      const double r = radius(rng);
      const double a = angle(rng);
      pts.push_back({r * std::cos(a), r * std::sin(a)});
    }
    if (symmetric) {
      const std::size_t m = pts.size();
      for (std::size_t i = 0; i < m; ++i) pts.push_back(-pts[i]);
    }
    try {
      ConvexBody b{std::span<const Vec2>(pts)};
      if (!symmetric || b.symmetric()) return b;
    } catch (const std::invalid_argument&) {
      // origin not inside or degenerate; draw again
    }
  }
  throw std::runtime_error("random body generation failed");
}

Lattice2 random_lattice(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> c(-2.0, 2.0);
  for (int attempt = 0; attempt < 200; ++attempt) {
    const Vec2 u{c(rng), c(rng)};
    const Vec2 v{c(rng), c(rng)};
    if (std::abs(cross(u, v)) > 0.05) return Lattice2(u, v);
  }
  throw std::runtime_error("random lattice generation failed");
}

ConvexBody random_line_meeting_body(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> npts(3, 8);
  std::uniform_real_distribution<double> radius(1.75, 2.6);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  const int n = npts(rng);
  std::vector<Vec2> pts = {{1.2, 1.2}, {-1.2, 1.2}, {-1.2, -1.2}, {1.2, -1.2}};
  for (int i = 0; i < n; ++i) {
    const double r = radius(rng);
    const double a = angle(rng);
    pts.push_back({r * std::cos(a), r * std::sin(a)});
  }
  return ConvexBody{std::span<const Vec2>(pts)};
}

std::vector<TheoremCheck> check_flat_body(const ConvexBody& body, const std::string& desc) {
  const FlatFinslerTorus torus(body);
  const double bh = systolic_ratio(torus, AreaKind::BH);
  const double ht = systolic_ratio(torus, AreaKind::HT);
  std::vector<TheoremCheck> out;
  out.push_back(make_check("flat_ht_general", desc, ht, 3.0 / (2.0 * M_PI), 1e-9,
                           "triangle-polar torus attains equality"));
  if (body.symmetric()) {
    out.push_back(make_check("flat_bh_reversible", desc, bh, M_PI / 4.0, 1e-9,
                             "square torus attains equality"));
    out.push_back(make_check("flat_ht_reversible", desc, ht, 2.0 / M_PI, 1e-9,
                             "square torus attains equality"));
    const double mp = mahler_product(body);
    out.push_back(make_check("mahler_lower", desc, mp, 8.0, 1e-9,
                             "parallelograms attain the minimum"));
    out.push_back(make_check("blaschke_upper", desc, M_PI * M_PI, mp, 1e-9,
                             "disks attain the maximum"));
  }
  return out;
}

FlatteningOutcome check_flattening(const std::string& name, const MetricField& field,
                                   const GridSpec& spec, int ball_directions,
                                   int bounded_samples) {
  FlatteningOutcome out;
  out.field_name = name;

  const PeriodicGraph graph(field, spec);
  out.eps_stencil = graph.eps_stencil();
  out.eps_variation = graph.eps_variation();

  const StableBallEstimate ball = stable_unit_ball(graph, ball_directions);
  const PeriodicSystole sys = systole_periodic(graph);
  const QuadratureResult abh = area_bh_field(field, 64);
  const QuadratureResult aht = area_ht_field(field, 64);

  const FlatFinslerTorus flat(ball.ball);
  const double bh_flat = area_bh_flat(flat);
  const double ht_flat = area_ht_flat(flat);
  const double sys_flat_v = systole_flat(flat).value;

  // Error budget.  The ball polygon underestimates the true stable ball by at
  // most the worst relative bar plus the inscribed-hull gap, which inflates
  // the flat-side areas; the field areas carry their quadrature estimates.
  const double hull_gap = 0.25 * ball.max_angular_gap * ball.max_angular_gap;
  const double ball_rel = 2.0 * ball.rel_bar + hull_gap;
  out.tolerance_area_bh = bh_flat * ball_rel + abh.error_estimate + 1e-9;
  out.tolerance_area_ht = ht_flat * ball_rel + aht.error_estimate + 1e-9;
  out.tolerance_sys =
      sys.value * (graph.eps_total() + ball.rel_bar) + graph.additive_slack() + 1e-9;

  out.checks.push_back(make_check("flattening_ht", name, aht.value, ht_flat,
                                  out.tolerance_area_ht,
                                  "flattening does not increase the HT area"));
  out.checks.push_back(make_check("flattening_bh", name, abh.value, bh_flat,
                                  out.tolerance_area_bh,
                                  "flattening does not increase the BH area"));
  out.checks.push_back(make_check("flattening_sys", name,
                                  -std::abs(sys.value - sys_flat_v), 0.0,
                                  out.tolerance_sys,
                                  "the systole survives flattening"));

  if (bounded_samples > 0) {
    const auto bounded = check_bounded_distance(graph, name, bounded_samples);
    out.checks.insert(out.checks.end(), bounded.begin(), bounded.end());
  }
  return out;
}

std::vector<TheoremCheck> check_bounded_distance(const PeriodicGraph& graph,
                                                 const std::string& name, int samples) {
  std::vector<TheoremCheck> checks;
  const double diam = diameter_estimate(graph);
  std::mt19937_64 rng(0x5eedu + samples);
  const int bg = graph.spec().base_grid;
  std::uniform_int_distribution<int> pick(0, bg - 1);
  const std::array<std::array<long, 2>, 4> zs{{{1, 0}, {0, 1}, {1, 1}, {-1, 2}}};
  for (int s = 0; s < samples; ++s) {
    const std::array<long, 2> z = zs[s % zs.size()];
    const Vec2 x0{static_cast<double>(pick(rng)) / bg,
                  static_cast<double>(pick(rng)) / bg};
    const StableNormValue sn = stable_norm(graph, z);
    const DistanceResult d = distance(
        graph, x0, x0 + Vec2{static_cast<double>(z[0]), static_cast<double>(z[1])});
    const double gap = d.value - sn.value;
    std::ostringstream desc;
    desc << name << " x0=(" << x0.x << "," << x0.y << ") z=(" << z[0] << "," << z[1]
         << ")";
    checks.push_back(make_check("bounded_distance_lower", desc.str(), gap, 0.0, 1e-9,
                                "the stable norm never exceeds d(x, x+z)"));
    // discretization slack plus the coarse sampling of the diameter itself
    const double diam_slack = graph.max_speed() * std::sqrt(2.0) / 4.0;
    const double slack = 2.0 * (sn.value + diam) * graph.eps_total() +
                         graph.additive_slack() + 2.0 * diam_slack + 1e-9;
    checks.push_back(make_check("bounded_distance_upper", desc.str(), 2.0 * diam + slack,
                                gap, 0.0, "d(x, x+z) stays within twice the diameter"));
  }
  return checks;
}

std::pair<TheoremCheck, TheoremCheck> loewner_experiment(const Expression& f,
                                                         const Lattice2& g0,
                                                         int translations,
                                                         const GridSpec& spec) {
  const MetricField field = MetricField::conformal(f, g0);
  const PeriodicGraph graph(field, spec);
  const PeriodicSystole sys = systole_periodic(graph);
  const QuadratureResult ar = area_bh_field(field, 64);
  const double ratio_g = ar.value / (sys.value * sys.value);

  // Translation-averaging flattens the conformal factor to its mean, so the
  // averaged metric has the systolic ratio of the flat lattice metric.
  // The discrete average is sampled here only to audit near-constancy.
  const int t = std::max(2, translations);
  double avg_min = std::numeric_limits<double>::infinity();
  double avg_max = 0.0;
  for (const Vec2 probe : {Vec2{0.1, 0.2}, Vec2{0.55, 0.35}, Vec2{0.8, 0.85}}) {
    double acc = 0.0;
    for (int i = 0; i < t; ++i) {
      for (int j = 0; j < t; ++j) {
        acc += f(wrap01(probe.x + static_cast<double>(i) / t),
                 wrap01(probe.y + static_cast<double>(j) / t));
      }
    }
    acc /= t * t;
    avg_min = std::min(avg_min, acc);
    avg_max = std::max(avg_max, acc);
  }
  const double ratio_avg = flat_riemannian_ratio(g0);

  const double rel = 2.0 * graph.eps_total() + 2.0 * graph.additive_slack() / sys.value +
                     (avg_max - avg_min) / std::max(avg_min, 1e-12);
  TheoremCheck averaging =
      make_check("loewner_averaging", "f=" + f.text(), ratio_g, ratio_avg,
                 ratio_g * rel + ar.error_estimate, "averaging lowers the ratio");
  TheoremCheck hermite =
      make_check("loewner_flat_bound", "averaged metric", ratio_avg,
                 std::sqrt(3.0) / 2.0, 1e-12, "hexagonal lattices attain equality");
  return {averaging, hermite};
}

std::vector<FreedomRow> systolic_freedom_sweep(std::span<const double> eps_values) {
  std::vector<FreedomRow> rows;
  for (const double eps : eps_values) {
    const FlatFinslerTorus torus(k_epsilon(eps));
    const double ratio = systolic_ratio(torus, AreaKind::BH);
    const double formula = 2.0 * M_PI * eps / ((1.0 + eps) * (1.0 + eps));
    rows.push_back({eps, ratio, formula, std::abs(ratio - formula)});
  }
  return rows;
}

std::vector<std::pair<std::string, MetricField>> flattening_test_fields(std::uint64_t seed) {
  std::vector<std::pair<std::string, MetricField>> fields;
  const Lattice2 square{{1, 0}, {0, 1}};
  const Lattice2 hex{{1, 0}, {0.5, std::sqrt(3.0) / 2.0}};

  fields.emplace_back("conformal_const",
                      MetricField::conformal(Expression::parse("1"), square));
  fields.emplace_back(
      "conformal_sine",
      MetricField::conformal(
          Expression::parse("(1+0.5*sin(2*pi*x1))*(1+0.5*sin(2*pi*x1))"), square));
  fields.emplace_back(
      "conformal_2d",
      MetricField::conformal(
          Expression::parse("(1+0.3*sin(2*pi*x1))*(1+0.3*cos(2*pi*x2))"), square));
  fields.emplace_back(
      "conformal_wide_range",
      MetricField::conformal(
          Expression::parse("(1.25+0.75*sin(2*pi*x1))*(1.25+0.75*sin(2*pi*x1))"),
          square));
  fields.emplace_back(
      "conformal_hexagonal",
      MetricField::conformal(Expression::parse("1+0.2*sin(2*pi*x2)"), hex));

  const ConvexBody sq{Vec2{1, 1}, Vec2{-1, 1}, Vec2{-1, -1}, Vec2{1, -1}};
  const ConvexBody sq_big{Vec2{1.5, 1.5}, Vec2{-1.5, 1.5}, Vec2{-1.5, -1.5}, Vec2{1.5, -1.5}};
  const ConvexBody diamond{Vec2{1.3, 0}, Vec2{0, 1.3}, Vec2{-1.3, 0}, Vec2{0, -1.3}};
  const ConvexBody hexbody = regular_ngon(6, 1.25);
  const ConvexBody tri_polar{Vec2{1, 1}, Vec2{1, -2}, Vec2{-2, 1}};

  fields.emplace_back("grid_square_sizes",
                      MetricField::body_grid(2, {sq, sq_big, sq_big, sq}));
  fields.emplace_back("grid_square_diamond",
                      MetricField::body_grid(2, {sq, diamond, diamond, sq}));
  fields.emplace_back("grid_hexagon_square",
                      MetricField::body_grid(2, {hexbody, sq, sq, hexbody}));
  fields.emplace_back("grid_asymmetric",
                      MetricField::body_grid(2, {tri_polar, sq, sq, tri_polar}));

  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  std::vector<ConvexBody> mix;
  for (int i = 0; i < 4; ++i) {
    ConvexBody b = random_body(rng, true);
    std::vector<Vec2> scaled;
    const double target = 1.2 / b.circumradius();
    for (const Vec2 p : b.vertices()) scaled.push_back(target * p);
    mix.push_back(ConvexBody{std::span<const Vec2>(scaled)});
  }
  fields.emplace_back("grid_random_symmetric", MetricField::body_grid(2, std::move(mix)));
  return fields;
}

namespace {

void note_failure(SuiteReport& r, const TheoremCheck& c, const std::string& replay) {
  if (!c.pass && r.failure_replay.empty()) r.failure_replay = replay;
  r.all_pass = r.all_pass && c.pass;
}

void append(SuiteReport& r, const TheoremCheck& c, const std::string& replay = "") {
  r.checks.push_back(c);
  note_failure(r, c, replay);
}

void run_flat_suite(SuiteReport& r, std::uint64_t seed, const SuiteOptions& opts) {
  const ConvexBody square{Vec2{1, 1}, Vec2{-1, 1}, Vec2{-1, -1}, Vec2{1, -1}};
  const ConvexBody tri_polar{Vec2{1, 1}, Vec2{1, -2}, Vec2{-2, 1}};

  append(r, make_check("flat_bh_reversible", "square",
                       systolic_ratio(FlatFinslerTorus(square), AreaKind::BH),
                       M_PI / 4.0, 1e-12, "equality witness"));
  append(r, make_check("flat_ht_general", "triangle polar",
                       systolic_ratio(FlatFinslerTorus(tri_polar), AreaKind::HT),
                       3.0 / (2.0 * M_PI), 1e-12, "equality witness"));
  append(r, make_check("mahler_lower", "square", mahler_product(square), 8.0, 1e-12,
                       "equality witness"));
  append(r, make_check("mahler_hexagon", "regular hexagon",
                       mahler_product(regular_ngon(6, 1.0)), 9.0, 1e-9,
                       "hexagon volume product"));

  // randomized flat inequalities, reported as aggregate worst margins
  std::mt19937_64 rng(seed);
  struct Agg {
    double min_margin = std::numeric_limits<double>::infinity();
    std::string worst;
  };
  Agg sym_bh, sym_ht, sym_mahler_lo, sym_blaschke, sym_minkowski, gen_ht;

  const auto update = [](Agg& a, double margin, const ConvexBody& b) {
    if (margin < a.min_margin) {
      a.min_margin = margin;
      a.worst = body_to_json(b);
    }
  };

  for (int i = 0; i < opts.flat_random; ++i) {
    const ConvexBody b = random_body(rng, true);
    const FlatFinslerTorus t(b);
    update(sym_bh, systolic_ratio(t, AreaKind::BH) - M_PI / 4.0, b);
    update(sym_ht, systolic_ratio(t, AreaKind::HT) - 2.0 / M_PI, b);
    const double mp = mahler_product(b);
    update(sym_mahler_lo, mp - 8.0, b);
    update(sym_blaschke, M_PI * M_PI - mp, b);
    // normalized to unit systole, the body must stay within measure 4
    const double s = systole_flat(t).value;
    update(sym_minkowski, 4.0 - area(b) * s * s, b);
  }
  for (int i = 0; i < opts.flat_random; ++i) {
    const ConvexBody b = random_body(rng, false);
    update(gen_ht, systolic_ratio(FlatFinslerTorus(b), AreaKind::HT) - 3.0 / (2.0 * M_PI), b);
  }

  const std::string n = std::to_string(opts.flat_random) + " random bodies";
  const auto agg_check = [&](const char* id, const Agg& a, const char* prov) {
    TheoremCheck c = make_check(id, n, a.min_margin, 0.0, 1e-9, prov);
    append(r, c, a.worst);
  };
  agg_check("flat_bh_reversible_random", sym_bh, "worst margin over the sample");
  agg_check("flat_ht_reversible_random", sym_ht, "worst margin over the sample");
  agg_check("mahler_lower_random", sym_mahler_lo, "worst margin over the sample");
  agg_check("blaschke_upper_random", sym_blaschke, "worst margin over the sample");
  agg_check("minkowski_measure_random", sym_minkowski, "worst margin over the sample");
  agg_check("flat_ht_general_random", gen_ht, "worst margin over the sample");

  // flat Riemannian bound over random lattices
  std::mt19937_64 rng2(seed ^ 0xabcdefull);
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 1000; ++i) {
    worst = std::min(worst, flat_riemannian_ratio(random_lattice(rng2)));
  }
  append(r, make_check("hermite_random", "1000 random lattices", worst,
                       std::sqrt(3.0) / 2.0, 1e-9, "hexagonal lattices attain equality"));
  append(r, make_check("hermite_hexagonal", "hexagonal lattice",
                       flat_riemannian_ratio(Lattice2{{1, 0}, {0.5, std::sqrt(3.0) / 2.0}}),
                       std::sqrt(3.0) / 2.0, 1e-12, "equality witness"));
}

void run_freedom_suite(SuiteReport& r) {
  const std::vector<double> eps{0.5, 0.25, 0.1, 0.05, 0.01};
  r.freedom = systolic_freedom_sweep(eps);
  double max_diff = 0.0;
  bool monotone = true;
  for (std::size_t i = 0; i < r.freedom.size(); ++i) {
    max_diff = std::max(max_diff, r.freedom[i].diff);
    if (i > 0 && !(r.freedom[i].ratio < r.freedom[i - 1].ratio)) monotone = false;
  }
  append(r, make_check("freedom_formula", "eps sweep", 1e-12, max_diff, 0.0,
                       "closed form for the family"));
  append(r, make_check("freedom_monotone", "eps sweep", monotone ? 1.0 : 0.0, 1.0, 0.0,
                       "ratio decreases with eps"));
}

void run_loewner_suite(SuiteReport& r, const SuiteOptions& opts) {
  const Lattice2 square{{1, 0}, {0, 1}};
  const Lattice2 hex{{1, 0}, {0.5, std::sqrt(3.0) / 2.0}};
  const struct {
    const char* name;
    const char* f;
    const Lattice2* g0;
  } cases[] = {
      {"constant on hexagonal", "1", &hex},
      {"sine on square", "(1+0.5*sin(2*pi*x1))*(1+0.5*sin(2*pi*x1))", &square},
      {"two-frequency on hexagonal", "1+0.25*sin(2*pi*x1)+0.15*cos(2*pi*x2)", &hex},
  };
  for (const auto& c : cases) {
    auto [averaging, flat_bound] =
        loewner_experiment(Expression::parse(c.f), *c.g0, 8, opts.grid);
    averaging.input_desc = c.name;
    flat_bound.input_desc = c.name;
    append(r, averaging);
    append(r, flat_bound);
  }
}

void run_flattening_suite(SuiteReport& r, std::uint64_t seed, const SuiteOptions& opts) {
  for (const auto& [name, field] : flattening_test_fields(seed)) {
    const FlatteningOutcome out = check_flattening(name, field, opts.grid,
                                                   opts.ball_directions,
                                                   opts.bounded_samples);
    for (const auto& c : out.checks) append(r, c, "field " + name);
  }
}

}  // namespace

SuiteReport run_suite(const std::string& which, std::uint64_t seed,
                      const SuiteOptions& opts) {
  SuiteReport r;
  r.suite = which;
  r.seed = seed;
  if (which == "flat" || which == "all") run_flat_suite(r, seed, opts);
  if (which == "freedom" || which == "all") run_freedom_suite(r);
  if (which == "loewner" || which == "all") run_loewner_suite(r, opts);
  if (which == "flattening" || which == "all") run_flattening_suite(r, seed, opts);
  if (r.checks.empty() && r.freedom.empty()) {
    throw std::invalid_argument("unknown suite \"" + which + "\"");
  }
  return r;
}

std::string report_to_json(const SuiteReport& r) {
  json j;
  j["suite"] = r.suite;
  j["seed"] = r.seed;
  j["all_pass"] = r.all_pass;
  json checks = json::array();
  for (const auto& c : r.checks) {
    checks.push_back(json{{"theorem_id", c.theorem_id},
                          {"input", c.input_desc},
                          {"lhs", c.lhs},
                          {"rhs", c.rhs},
                          {"margin", c.margin},
                          {"tolerance", c.tolerance},
                          {"pass", c.pass},
                          {"provenance", c.provenance}});
  }
  j["checks"] = checks;
  if (!r.freedom.empty()) {
    json rows = json::array();
    for (const auto& row : r.freedom) {
      rows.push_back(json{{"eps", row.eps},
                          {"ratio", row.ratio},
                          {"formula", row.formula},
                          {"diff", row.diff}});
    }
    j["freedom"] = rows;
  }
  if (!r.failure_replay.empty()) j["failure_replay"] = r.failure_replay;
  return j.dump(2) + "\n";
}

std::string report_to_csv(const SuiteReport& r) {
  std::ostringstream os;
  os.precision(17);
  os << "theorem_id,input,lhs,rhs,margin,tolerance,pass\n";
  for (const auto& c : r.checks) {
    std::string desc = c.input_desc;
    std::replace(desc.begin(), desc.end(), ',', ';');
    os << c.theorem_id << "," << desc << "," << c.lhs << "," << c.rhs << "," << c.margin
       << "," << c.tolerance << "," << (c.pass ? 1 : 0) << "\n";
  }
  for (const auto& row : r.freedom) {
    os << "freedom_row,eps=" << row.eps << "," << row.ratio << "," << row.formula << ","
       << row.ratio - row.formula << "," << 1e-12 << "," << (row.diff <= 1e-12 ? 1 : 0)
       << "\n";
  }
  return os.str();
}

}  // namespace systolic
