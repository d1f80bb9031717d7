#include "systolic/cli.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "json.hpp"
#include "systolic/io.hpp"
#include "systolic/polygon_reduce.hpp"
#include "systolic/svg.hpp"
#include "systolic/verify.hpp"

namespace systolic {

namespace {

using json = nlohmann::ordered_json;

Vec2 parse_vec(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw std::invalid_argument("expected \"x,y\"");
  return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
}

std::array<long, 2> parse_class(const std::string& s) {
  const Vec2 v = parse_vec(s);
  return {std::lround(v.x), std::lround(v.y)};
}

Lattice2 parse_basis(const std::string& s) {
  const auto semi = s.find(';');
  if (semi == std::string::npos) throw std::invalid_argument("expected \"u1,u2;v1,v2\"");
  return Lattice2(parse_vec(s.substr(0, semi)), parse_vec(s.substr(semi + 1)));
}

void emit(const RunConfig& cfg, const json& payload, const std::string& human) {
  if (!human.empty()) std::cout << human;
  if (!cfg.json_path.empty()) write_file(cfg.json_path, payload.dump(2) + "\n");
}

GridSpec grid_from(const RunConfig& cfg) {
  GridSpec spec;
  const double res = 1.0 / cfg.h;
  spec.resolution = static_cast<int>(std::lround(res));
  if (std::abs(res - spec.resolution) > 1e-9 || spec.resolution < 8) {
    throw std::invalid_argument("h must be the reciprocal of an integer >= 8");
  }
  spec.stencil = cfg.stencil;
  spec.threads = cfg.threads;
  return spec;
}

int run_body(const RunConfig& cfg) {
  const ConvexBody k = load_body(cfg.input_path);
  json out;
  std::ostringstream human;
  human.precision(12);
  if (cfg.op == "area") {
    out["area"] = area(k);
    human << "area " << area(k) << "\n";
  } else if (cfg.op == "polar") {
    const ConvexBody p = polar(k);
    out = json::parse(body_to_json(p));
    human << body_to_json(p);
    if (!cfg.svg_path.empty()) write_file(cfg.svg_path, render_body(k, &p));
  } else if (cfg.op == "mahler") {
    out["mahler_product"] = mahler_product(k);
    human << "mahler_product " << mahler_product(k) << "\n";
  } else if (cfg.op == "minkowski") {
    const bool trivial = interior_lattice_trivial(k);
    out["interior_lattice_trivial"] = trivial;
    out["area"] = area(k);
    human << "interior_lattice_trivial " << (trivial ? "true" : "false") << ", area "
          << area(k) << "\n";
  } else if (cfg.op == "lines") {
    const bool meets = meets_all_integer_lines(k);
    out["meets_all_integer_lines"] = meets;
    human << "meets_all_integer_lines " << (meets ? "true" : "false") << "\n";
  } else {
    throw std::invalid_argument("unknown body op \"" + cfg.op + "\"");
  }
  if (cfg.op != "polar" && !cfg.svg_path.empty()) {
    write_file(cfg.svg_path, render_body(k));
  }
  emit(cfg, out, human.str());
  return 0;
}

int run_lattice(const RunConfig& cfg) {
  const Lattice2 l = parse_basis(cfg.basis);
  json out;
  std::ostringstream human;
  human.precision(12);
  if (cfg.op == "det") {
    out["determinant"] = determinant(l);
    human << "determinant " << determinant(l) << "\n";
  } else if (cfg.op == "shortest") {
    const ShortestVector s = shortest_vector(l);
    out["vector"] = {s.vec.x, s.vec.y};
    out["norm_sq"] = s.norm_sq;
    human << "shortest (" << s.vec.x << "," << s.vec.y << ") norm_sq " << s.norm_sq
          << "\n";
  } else if (cfg.op == "hermite") {
    out["hermite_invariant"] = hermite_invariant(l);
    human << "hermite_invariant " << hermite_invariant(l) << "\n";
  } else if (cfg.op == "reduce") {
    const Lattice2 rl = reduce_to_fundamental_domain(l);
    out["u"] = {rl.u().x, rl.u().y};
    out["v"] = {rl.v().x, rl.v().y};
    human << "reduced basis (" << rl.u().x << "," << rl.u().y << ");(" << rl.v().x << ","
          << rl.v().y << ")\n";
  } else {
    throw std::invalid_argument("unknown lattice op \"" + cfg.op + "\"");
  }
  emit(cfg, out, human.str());
  return 0;
}

int run_flat(const RunConfig& cfg) {
  json out;
  std::ostringstream human;
  human.precision(12);

  if (!cfg.sweep.empty()) {
    std::istringstream ss(cfg.sweep);
    std::string a, b, c;
    std::getline(ss, a, ':');
    std::getline(ss, b, ':');
    std::getline(ss, c, ':');
    const double lo = std::stod(a), hi = std::stod(b);
    const int count = std::stoi(c);
    if (count < 2 || lo <= 0 || hi >= 1 || lo > hi) {
      throw std::invalid_argument("sweep needs start:end:count inside (0,1)");
    }
    std::vector<double> eps(count);
    for (int i = 0; i < count; ++i) eps[i] = lo + (hi - lo) * i / (count - 1);
    const auto rows = systolic_freedom_sweep(eps);
    std::ostringstream csv;
    csv.precision(17);
    csv << "eps,bh_ratio,formula,diff\n";
    for (const auto& r : rows) {
      csv << r.eps << "," << r.ratio << "," << r.formula << "," << r.diff << "\n";
    }
    if (!cfg.csv_path.empty()) write_file(cfg.csv_path, csv.str());
    human << "swept " << count << " eps values\n";
    emit(cfg, out, human.str());
    return 0;
  }

  ConvexBody k = [&] {
    if (cfg.family == "keps") return k_epsilon(cfg.eps);
    if (cfg.family.empty()) return load_body(cfg.input_path);
    throw std::invalid_argument("unknown family \"" + cfg.family + "\"");
  }();
  const FlatFinslerTorus torus(k);
  if (cfg.op == "sys") {
    const FlatSystole s = systole_flat(torus);
    out["systole"] = s.value;
    out["class"] = {s.homotopy_class[0], s.homotopy_class[1]};
    human << "systole " << s.value << " class (" << s.homotopy_class[0] << ","
          << s.homotopy_class[1] << ")\n";
  } else if (cfg.op == "bh") {
    out["area_bh"] = area_bh_flat(torus);
    human << "area_bh " << area_bh_flat(torus) << "\n";
  } else if (cfg.op == "ht") {
    out["area_ht"] = area_ht_flat(torus);
    human << "area_ht " << area_ht_flat(torus) << "\n";
  } else if (cfg.op == "ratio") {
    out["bh_ratio"] = systolic_ratio(torus, AreaKind::BH);
    out["ht_ratio"] = systolic_ratio(torus, AreaKind::HT);
    human << "bh_ratio " << systolic_ratio(torus, AreaKind::BH) << "\n";
    human << "ht_ratio " << systolic_ratio(torus, AreaKind::HT) << "\n";
  } else {
    throw std::invalid_argument("unknown flat op \"" + cfg.op + "\"");
  }
  if (!cfg.svg_path.empty()) write_file(cfg.svg_path, render_body(k));
  emit(cfg, out, human.str());
  return 0;
}

int run_periodic(const RunConfig& cfg) {
  const MetricField field = load_metric(cfg.input_path);
  const GridSpec spec = grid_from(cfg);
  const PeriodicGraph graph(field, spec);
  json out;
  std::ostringstream human;
  human.precision(12);
  out["eps_stencil"] = graph.eps_stencil();
  out["eps_variation"] = graph.eps_variation();

  if (cfg.op == "sys") {
    const PeriodicSystole s = systole_periodic(graph);
    out["systole"] = s.value;
    out["class"] = {s.homotopy_class[0], s.homotopy_class[1]};
    out["relative_error"] = s.relative_error;
    human << "systole " << s.value << " class (" << s.homotopy_class[0] << ","
          << s.homotopy_class[1] << ") rel_err " << s.relative_error << "\n";
  } else if (cfg.op == "bh") {
    const QuadratureResult r = area_bh_field(field, cfg.quad_n);
    out["area_bh"] = r.value;
    out["error_estimate"] = r.error_estimate;
    human << "area_bh " << r.value << " (quadrature error ~ " << r.error_estimate
          << ")\n";
  } else if (cfg.op == "ht") {
    const QuadratureResult r = area_ht_field(field, cfg.quad_n);
    out["area_ht"] = r.value;
    out["error_estimate"] = r.error_estimate;
    human << "area_ht " << r.value << " (quadrature error ~ " << r.error_estimate
          << ")\n";
  } else if (cfg.op == "stable") {
    const std::array<long, 2> z = parse_class(cfg.z);
    const StableNormValue v = stable_norm(graph, z);
    out["z"] = {z[0], z[1]};
    out["stable_norm"] = v.value;
    out["lower"] = v.lower;
    out["upper"] = v.upper;
    human << "stable_norm(" << z[0] << "," << z[1] << ") " << v.value << " in ["
          << v.lower << ", " << v.upper << "]\n";
  } else if (cfg.op == "ball") {
    const StableBallEstimate est = stable_unit_ball(graph, cfg.directions);
    out["directions"] = est.directions.size();
    out["convex_within_bars"] = est.convex_within_bars;
    json verts = json::array();
    for (const Vec2 p : est.ball.vertices()) verts.push_back({p.x, p.y});
    out["ball"] = {{"vertices", verts}};
    human << "stable ball on " << est.directions.size() << " directions\n";
    if (!cfg.svg_path.empty()) write_file(cfg.svg_path, render_stable_ball(est));
  } else {
    throw std::invalid_argument("unknown periodic op \"" + cfg.op + "\"");
  }
  emit(cfg, out, human.str());
  return 0;
}

int run_reduce(const RunConfig& cfg) {
  const ConvexBody input = load_body(cfg.input_path);
  const auto [result, trace] =
      cfg.mode == "mahler"
          ? mahler_reduce(input)
          : cfg.mode == "abt" ? abt_reduce(input)
                              : throw std::invalid_argument("mode must be mahler|abt");
  if (!cfg.trace_path.empty()) write_file(cfg.trace_path, trace_to_json(input, trace));
  if (!cfg.svg_path.empty()) write_file(cfg.svg_path, render_trace(input, trace));
  std::ostringstream human;
  human.precision(12);
  human << "steps " << trace.steps.size() << ", final area " << area(result) << "\n";
  emit(cfg, json::parse(body_to_json(result)), human.str());
  return 0;
}

int run_verify(const RunConfig& cfg) {
  SuiteOptions opts;
  opts.grid = grid_from(cfg);
  opts.ball_directions = cfg.directions;
  const SuiteReport report = run_suite(cfg.suite, cfg.seed, opts);
  const std::string path = !cfg.report_path.empty() ? cfg.report_path : cfg.json_path;
  if (!path.empty()) write_file(path, report_to_json(report));
  if (!cfg.csv_path.empty()) write_file(cfg.csv_path, report_to_csv(report));
  int failures = 0;
  for (const auto& c : report.checks) {
    if (!c.pass) ++failures;
  }
  std::cout << "suite " << report.suite << ": " << report.checks.size() << " checks, "
            << failures << " failures\n";
  if (!report.all_pass && !report.failure_replay.empty()) {
    std::cerr << "offending input:\n" << report.failure_replay;
  }
  return report.all_pass ? 0 : 1;
}

int run_render(const RunConfig& cfg) {
  std::optional<ConvexBody> overlay;
  if (!cfg.input_path.empty()) overlay = load_body(cfg.input_path);
  const std::string svg = render_integer_lines(cfg.bound, overlay ? &*overlay : nullptr);
  if (!cfg.svg_path.empty()) {
    write_file(cfg.svg_path, svg);
  } else {
    std::cout << svg;
  }
  std::cout << "lines " << integer_line_count(cfg.bound) << "\n";
  return 0;
}

}  // namespace

int run(const RunConfig& cfg) {
  try {
    if (cfg.subcommand == "body") return run_body(cfg);
    if (cfg.subcommand == "lattice") return run_lattice(cfg);
    if (cfg.subcommand == "flat") return run_flat(cfg);
    if (cfg.subcommand == "periodic") return run_periodic(cfg);
    if (cfg.subcommand == "reduce") return run_reduce(cfg);
    if (cfg.subcommand == "verify") return run_verify(cfg);
    if (cfg.subcommand == "render") return run_render(cfg);
    std::cerr << "unknown subcommand \"" << cfg.subcommand << "\"\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace systolic
