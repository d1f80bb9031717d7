#include <string>

#include "CLI11.hpp"
#include "systolic/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"systoles, Finsler areas and stable norms on two-tori"};
  app.require_subcommand(1);

  systolic::RunConfig cfg;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--tol", cfg.tol_override, "override reported tolerances");
    sub->add_option("--seed", cfg.seed, "random seed");
    sub->add_option("--threads", cfg.threads, "worker threads")
        ->envname("SYSTOLIC_THREADS");
    sub->add_option("--json", cfg.json_path, "write a JSON result here");
    sub->add_option("--csv", cfg.csv_path, "write a CSV result here");
    sub->add_option("--svg", cfg.svg_path, "write an SVG rendering here");
  };

  auto* body = app.add_subcommand("body", "convex body operations");
  body->add_option("--in", cfg.input_path, "body JSON file")->required();
  body->add_option("--op", cfg.op, "polar|area|mahler|minkowski|lines")->required();
  add_common(body);

  auto* lattice = app.add_subcommand("lattice", "planar lattice operations");
  lattice->add_option("--basis", cfg.basis, "basis as \"u1,u2;v1,v2\"")->required();
  lattice->add_option("--op", cfg.op, "det|shortest|hermite|reduce")->required();
  add_common(lattice);

  auto* flat = app.add_subcommand("flat", "flat Finsler tori");
  flat->add_option("--in", cfg.input_path, "unit ball JSON file");
  flat->add_option("--op", cfg.op, "sys|bh|ht|ratio");
  flat->add_option("--family", cfg.family, "built-in family (keps)");
  flat->add_option("--eps", cfg.eps, "family parameter");
  flat->add_option("--sweep", cfg.sweep, "family sweep start:end:count");
  add_common(flat);

  auto* periodic = app.add_subcommand("periodic", "periodic Finsler fields");
  periodic->add_option("--in", cfg.input_path, "metric JSON file")->required();
  periodic->add_option("--op", cfg.op, "sys|bh|ht|stable|ball")->required();
  periodic->add_option("--z", cfg.z, "integer class \"z1,z2\"");
  periodic->add_option("--h", cfg.h, "grid spacing (reciprocal of an integer)");
  periodic->add_option("--stencil", cfg.stencil, "stencil order");
  periodic->add_option("--quad", cfg.quad_n, "quadrature grid per side");
  periodic->add_option("--directions", cfg.directions, "stable ball directions");
  add_common(periodic);

  auto* reduce = app.add_subcommand("reduce", "area- and product-reducing drives");
  reduce->add_option("--in", cfg.input_path, "polygon JSON file")->required();
  reduce->add_option("--mode", cfg.mode, "mahler|abt")->required();
  reduce->add_option("--trace", cfg.trace_path, "write the step trace here");
  add_common(reduce);

  auto* verify = app.add_subcommand("verify", "machine-checked inequality suites");
  verify->add_option("--suite", cfg.suite, "flat|flattening|loewner|freedom|all");
  verify->add_option("--report", cfg.report_path, "write the JSON report here");
  verify->add_option("--h", cfg.h, "grid spacing for periodic suites");
  verify->add_option("--stencil", cfg.stencil, "stencil order");
  verify->add_option("--directions", cfg.directions, "stable ball directions");
  add_common(verify);

  auto* render = app.add_subcommand("render", "integer-lines figure");
  render->add_option("--bound", cfg.bound, "draw lines with m1^2+m2^2 <= bound");
  render->add_option("--in", cfg.input_path, "overlay body JSON file");
  add_common(render);

  CLI11_PARSE(app, argc, argv);

  cfg.subcommand = app.get_subcommands().front()->get_name();
  return systolic::run(cfg);
}
