// Acceptance runner: one line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "systolic/flat_torus.hpp"
#include "systolic/io.hpp"
#include "systolic/periodic_solver.hpp"
#include "systolic/polygon_reduce.hpp"
#include "systolic/verify.hpp"

using namespace systolic;

namespace {

int g_failures = 0;

struct Criterion {
  int id;
  std::string name;
  bool pass = true;
  std::string detail;
  double seconds = 0.0;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

void run_criterion(int id, const std::string& name, double time_limit,
                   const std::function<void(Criterion&)>& body) {
  Criterion c{id, name};
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.pass = false;
    c.detail = std::string("exception: ") + e.what();
  }
  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (time_limit > 0 && c.seconds > time_limit) {
    c.pass = false;
    c.detail += (c.detail.empty() ? "" : "; ") + std::string("over time limit");
  }
  if (!c.pass) ++g_failures;
  std::string limit_note;
  if (time_limit > 0) {
    limit_note = " / limit " + std::to_string(static_cast<int>(time_limit)) + " s";
  }
  std::printf("[%s] criterion %2d: %s (%.2f s%s)%s%s\n", c.pass ? "PASS" : "FAIL", id,
              name.c_str(), c.seconds, limit_note.c_str(),
              c.detail.empty() ? "" : " -- ", c.detail.c_str());
}

const ConvexBody kSquare{Vec2{1, 1}, Vec2{-1, 1}, Vec2{-1, -1}, Vec2{1, -1}};
const ConvexBody kTrianglePolar{Vec2{1, 1}, Vec2{1, -2}, Vec2{-2, 1}};
const ConvexBody kDiamond{Vec2{1.3, 0}, Vec2{0, 1.3}, Vec2{-1.3, 0}, Vec2{0, -1.3}};

bool close_rel(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

}  // namespace

int main() {
  run_criterion(1, "hexagonal lattice ratio and random lattice bound", 1.0, [](Criterion& c) {
    const Lattice2 hex{{1, 0}, {0.5, std::sqrt(3.0) / 2.0}};
    c.require(std::abs(flat_riemannian_ratio(hex) - std::sqrt(3.0) / 2.0) <= 1e-12,
              "hexagonal ratio");
    std::mt19937_64 rng(1001);
    for (int i = 0; i < 1000; ++i) {
      if (flat_riemannian_ratio(random_lattice(rng)) < std::sqrt(3.0) / 2.0 - 1e-9) {
        c.require(false, "random lattice below the bound");
        break;
      }
    }
  });

  run_criterion(2, "square BH equality and the reversible BH bound", 5.0, [](Criterion& c) {
    c.require(std::abs(systolic_ratio(FlatFinslerTorus(kSquare), AreaKind::BH) -
                       M_PI / 4.0) <= 1e-12,
              "square BH ratio");
    std::mt19937_64 rng(1002);
    for (int i = 0; i < 1000; ++i) {
      const ConvexBody b = random_body(rng, true);
      if (systolic_ratio(FlatFinslerTorus(b), AreaKind::BH) < M_PI / 4.0 - 1e-9) {
        c.require(false, "random symmetric body below pi/4: " + body_to_json(b));
        break;
      }
    }
  });

  run_criterion(3, "volume product window", 5.0, [](Criterion& c) {
    c.require(std::abs(mahler_product(kSquare) - 8.0) <= 1e-12, "square product");
    c.require(close_rel(mahler_product(regular_ngon(256, 1.0)), M_PI * M_PI, 1e-3),
              "256-gon product");
    std::mt19937_64 rng(1003);
    for (int i = 0; i < 1000; ++i) {
      const double mp = mahler_product(random_body(rng, true));
      if (mp < 8.0 - 1e-9 || mp > M_PI * M_PI + 1e-9) {
        c.require(false, "product outside [8, pi^2]");
        break;
      }
    }
  });

  run_criterion(4, "triangle-polar HT equality and the general HT bound", 5.0,
                [](Criterion& c) {
    c.require(std::abs(systolic_ratio(FlatFinslerTorus(kTrianglePolar), AreaKind::HT) -
                       3.0 / (2.0 * M_PI)) <= 1e-12,
              "triangle-polar HT ratio");
    std::mt19937_64 rng(1004);
    for (int i = 0; i < 1000; ++i) {
      const ConvexBody b = random_body(rng, false);
      if (systolic_ratio(FlatFinslerTorus(b), AreaKind::HT) < 3.0 / (2.0 * M_PI) - 1e-9) {
        c.require(false, "random body below 3/(2pi): " + body_to_json(b));
        break;
      }
    }
  });

  run_criterion(5, "systolic freedom sweep", 0, [](Criterion& c) {
    const std::vector<double> eps{0.5, 0.25, 0.1, 0.05, 0.01};
    const auto rows = systolic_freedom_sweep(eps);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      c.require(rows[i].diff <= 1e-12, "formula mismatch at eps=" + std::to_string(rows[i].eps));
      if (i > 0) c.require(rows[i].ratio < rows[i - 1].ratio, "ratio not decreasing");
    }
  });

  run_criterion(6, "integer-line drive on random bodies", 30.0, [](Criterion& c) {
    std::mt19937_64 rng(1006);
    for (int i = 0; i < 100 && c.pass; ++i) {
      const ConvexBody start = random_line_meeting_body(rng);
      const auto [q, trace] = abt_reduce(start);
      for (const Vec2 p : q.vertices()) {
        c.require(std::abs(p.x - std::round(p.x)) <= 1e-6 &&
                      std::abs(p.y - std::round(p.y)) <= 1e-6,
                  "non-integral terminal vertex, input " + body_to_json(start));
      }
      c.require(area(q) >= 1.5 - 1e-6, "terminal area below 3/2");
      double prev = area(start);
      for (const auto& s : trace.steps) {
        c.require(s.monitored <= prev + 1e-9, "area increased along the trace");
        prev = s.monitored;
      }
    }
  });

  run_criterion(7, "pair-removal drive on random symmetric polygons", 0, [](Criterion& c) {
    std::mt19937_64 rng(1007);
    for (int i = 0; i < 200 && c.pass; ++i) {
      const ConvexBody start = random_body(rng, true);
      const auto [q, trace] = mahler_reduce(start);
      c.require(q.size() == 4, "terminal polygon is not a parallelogram");
      double prev = mahler_product(start);
      for (const auto& s : trace.steps) {
        c.require(s.monitored <= prev + 1e-9, "volume product increased");
        prev = s.monitored;
      }
    }
  });

  run_criterion(8, "flat-field solver oracle at two stencil orders", 0, [](Criterion& c) {
    const std::vector<const ConvexBody*> bodies{&kSquare, &kTrianglePolar, &kDiamond};
    const std::vector<std::array<long, 2>> zs{{1, 0}, {0, 1}, {1, 1}, {2, 1}, {-1, 2}};
    for (const double tol : {0.01, 0.005}) {
      GridSpec spec;
      spec.stencil = tol == 0.01 ? 4 : 6;
      for (const ConvexBody* k : bodies) {
        const MetricField field = MetricField::flat(*k);
        const PeriodicGraph graph(field, spec);
        for (const auto& z : zs) {
          const double exact = gauge_value(
              *k, {static_cast<double>(z[0]), static_cast<double>(z[1])});
          if (!close_rel(stable_norm(graph, z).value, exact, tol)) {
            c.require(false, "stable norm off at stencil " + std::to_string(spec.stencil));
          }
        }
        const FlatSystole fs = systole_flat(FlatFinslerTorus(*k));
        if (!close_rel(systole_periodic(graph).value, fs.value, tol)) {
          c.require(false, "systole off at stencil " + std::to_string(spec.stencil));
        }
        const double d = distance(graph, {0.25, 0.25}, {1.5, 0.75}).value;
        if (!close_rel(d, gauge_value(*k, {1.25, 0.5}), tol)) {
          c.require(false, "distance off at stencil " + std::to_string(spec.stencil));
        }
      }
    }
  });

  run_criterion(9, "analytic conformal oracle", 0, [](Criterion& c) {
    const MetricField sine = MetricField::conformal(
        Expression::parse("(1+0.5*sin(2*pi*x1))*(1+0.5*sin(2*pi*x1))"),
        Lattice2{{1, 0}, {0, 1}});
    const PeriodicGraph graph(sine);
    c.require(close_rel(stable_norm(graph, {0, 1}).value, 0.5, 0.02), "vertical stable norm");
    c.require(close_rel(stable_norm(graph, {1, 0}).value, 1.0, 0.02), "horizontal stable norm");
    c.require(close_rel(area_bh_field(sine, 64).value, 1.125, 0.005), "BH area");
    c.require(close_rel(area_ht_field(sine, 64).value, 1.125, 0.005), "HT area");
  });

  run_criterion(10, "flattening audit over ten fields", 300.0, [](Criterion& c) {
    GridSpec spec;
    for (const auto& [name, field] : flattening_test_fields(42)) {
      const FlatteningOutcome out = check_flattening(name, field, spec, 16, 0);
      for (const auto& check : out.checks) {
        std::ostringstream os;
        os.precision(6);
        os << name << " " << check.theorem_id << " margin " << check.margin << " tol "
           << check.tolerance;
        c.require(check.pass, os.str());
      }
    }
  });

  run_criterion(11, "bounded distance spot checks", 0, [](Criterion& c) {
    GridSpec spec;
    int samples = 0;
    for (const auto& [name, field] : flattening_test_fields(42)) {
      const PeriodicGraph graph(field, spec);
      for (const auto& check : check_bounded_distance(graph, name, 2)) {
        ++samples;
        c.require(check.pass, name + " " + check.theorem_id);
      }
    }
    c.require(samples == 40, "expected 2 sample pairs per field");
  });

  run_criterion(12, "byte-identical reports under a fixed seed", 0, [](Criterion& c) {
    const std::string a = report_to_json(run_suite("all", 42));
    const std::string b = report_to_json(run_suite("all", 42));
    c.require(!a.empty() && a == b, "reports differ between runs");
  });

  if (g_failures == 0) {
    std::printf("all criteria passed\n");
  } else {
    std::printf("%d criteria failed\n", g_failures);
  }
  return g_failures == 0 ? 0 : 1;
}
