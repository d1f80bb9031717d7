#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "systolic/cli.hpp"
#include "systolic/flat_torus.hpp"
#include "systolic/io.hpp"
#include "systolic/lattice.hpp"
#include "systolic/periodic_solver.hpp"
#include "systolic/polygon_reduce.hpp"
#include "systolic/svg.hpp"
#include "systolic/verify.hpp"

namespace py = pybind11;
using namespace systolic;

namespace {

using PointList = std::vector<std::pair<double, double>>;

ConvexBody body_from_points(const PointList& pts) {
  std::vector<Vec2> v;
  v.reserve(pts.size());
  for (const auto& [x, y] : pts) v.push_back({x, y});
  return ConvexBody(std::span<const Vec2>(v));
}

PointList points_of(const ConvexBody& k) {
  PointList out;
  for (const Vec2 p : k.vertices()) out.push_back({p.x, p.y});
  return out;
}

py::list trace_to_list(const ReductionTrace& trace) {
  py::list out;
  for (const auto& s : trace.steps) {
    py::dict step;
    step["kind"] = step_kind_name(s.kind);
    step["monitored"] = s.monitored;
    step["body"] = points_of(s.body);
    out.append(step);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(systolic_finsler, m) {
  m.doc() = "Systoles, Finsler areas, polar bodies and stable norms on two-tori";

  py::register_exception<NotSymmetric>(m, "NotSymmetric", PyExc_ValueError);
  py::register_exception<NotLatticePolygon>(m, "NotLatticePolygon", PyExc_ValueError);
  py::register_exception<AlreadyParallelogram>(m, "AlreadyParallelogram", PyExc_ValueError);
  py::register_exception<PreconditionViolated>(m, "PreconditionViolated", PyExc_ValueError);
  py::register_exception<PatchTooSmall>(m, "PatchTooSmall", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ExpressionParseError", PyExc_ValueError);

  py::class_<ConvexBody>(m, "ConvexBody")
      .def(py::init(&body_from_points), py::arg("vertices"))
      .def_property_readonly("vertices", &points_of)
      .def_property_readonly("symmetric", &ConvexBody::symmetric)
      .def_property_readonly("circumradius", &ConvexBody::circumradius)
      .def_property_readonly("inradius", &ConvexBody::inradius)
      .def("__len__", &ConvexBody::size)
      .def("__repr__", [](const ConvexBody& k) {
        return "ConvexBody(" + std::to_string(k.size()) + " vertices)";
      });

  m.def("area", [](const ConvexBody& k) { return area(k); });
  m.def("polar", [](const ConvexBody& k) { return polar(k); });
  m.def("gauge_value",
        [](const ConvexBody& k, double x, double y) { return gauge_value(k, {x, y}); });
  m.def("support_value",
        [](const ConvexBody& k, double x, double y) { return support_value(k, {x, y}); });
  m.def("mahler_product", [](const ConvexBody& k) { return mahler_product(k); });
  m.def("interior_lattice_trivial",
        [](const ConvexBody& k) { return interior_lattice_trivial(k); });
  m.def("meets_all_integer_lines",
        [](const ConvexBody& k) { return meets_all_integer_lines(k); });
  m.def("pick_area", [](const PointList& pts) {
    std::vector<Vec2> v;
    for (const auto& [x, y] : pts) v.push_back({x, y});
    return pick_area(std::span<const Vec2>(v));
  });
  m.def("hausdorff_distance", [](const ConvexBody& a, const ConvexBody& b) {
    return hausdorff_distance(a, b);
  });
  m.def("regular_ngon", &regular_ngon, py::arg("n"), py::arg("radius") = 1.0,
        py::arg("phase") = 0.0);

  py::class_<Lattice2>(m, "Lattice2")
      .def(py::init([](std::pair<double, double> u, std::pair<double, double> v) {
             return Lattice2({u.first, u.second}, {v.first, v.second});
           }),
           py::arg("u"), py::arg("v"))
      .def_property_readonly("u", [](const Lattice2& l) {
        return std::pair{l.u().x, l.u().y};
      })
      .def_property_readonly("v", [](const Lattice2& l) {
        return std::pair{l.v().x, l.v().y};
      });

  m.def("determinant", [](const Lattice2& l) { return determinant(l); });
  m.def("shortest_vector", [](const Lattice2& l) {
    const ShortestVector s = shortest_vector(l);
    return std::pair{std::pair{s.vec.x, s.vec.y}, s.norm_sq};
  });
  m.def("hermite_invariant", [](const Lattice2& l) { return hermite_invariant(l); });
  m.def("reduce_to_fundamental_domain",
        [](const Lattice2& l) { return reduce_to_fundamental_domain(l); });
  m.def("flat_riemannian_ratio", [](const Lattice2& l) { return flat_riemannian_ratio(l); });

  m.def("systole_flat", [](const ConvexBody& k) {
    const FlatSystole s = systole_flat(FlatFinslerTorus(k));
    return std::pair{s.value, std::pair{s.homotopy_class[0], s.homotopy_class[1]}};
  });
  m.def("area_bh_flat", [](const ConvexBody& k) { return area_bh_flat(FlatFinslerTorus(k)); });
  m.def("area_ht_flat", [](const ConvexBody& k) { return area_ht_flat(FlatFinslerTorus(k)); });
  m.def("systolic_ratio", [](const ConvexBody& k, const std::string& kind) {
    return systolic_ratio(FlatFinslerTorus(k),
                          kind == "BH" || kind == "bh" ? AreaKind::BH : AreaKind::HT);
  });
  m.def("k_epsilon", &k_epsilon, py::arg("eps"));

  m.def("mahler_reduce_step", [](const ConvexBody& k) {
    auto [q, trace] = mahler_reduce_step(k);
    return std::pair{q, trace_to_list(trace)};
  });
  m.def("mahler_reduce", [](const ConvexBody& k) {
    auto [q, trace] = mahler_reduce(k);
    return std::pair{q, trace_to_list(trace)};
  });
  m.def("abt_reduce", [](const ConvexBody& k) {
    auto [q, trace] = abt_reduce(k);
    return std::pair{q, trace_to_list(trace)};
  });

  py::class_<MetricField>(m, "MetricField")
      .def_static("flat", [](const ConvexBody& k) { return MetricField::flat(k); })
      .def_static("conformal",
                  [](const std::string& f, const Lattice2& g0, int disk_vertices) {
                    return MetricField::conformal(Expression::parse(f), g0, disk_vertices);
                  },
                  py::arg("f"), py::arg("g0"), py::arg("disk_vertices") = 64)
      .def_static("body_grid",
                  [](int n, const std::vector<ConvexBody>& bodies) {
                    return MetricField::body_grid(n, bodies);
                  })
      .def_property_readonly("reversible", &MetricField::reversible)
      .def("body_at", [](const MetricField& f, double x, double y) {
        return f.body_at({x, y});
      })
      .def("gauge_at", [](const MetricField& f, std::pair<double, double> x,
                          std::pair<double, double> v) {
        return f.gauge_at({x.first, x.second}, {v.first, v.second});
      });

  py::class_<GridSpec>(m, "GridSpec")
      .def(py::init<>())
      .def_readwrite("resolution", &GridSpec::resolution)
      .def_readwrite("stencil", &GridSpec::stencil)
      .def_readwrite("base_grid", &GridSpec::base_grid)
      .def_readwrite("threads", &GridSpec::threads);

  py::class_<PeriodicGraph>(m, "PeriodicGraph")
      .def(py::init<const MetricField&, GridSpec>(), py::arg("field"),
           py::arg("spec") = GridSpec{}, py::keep_alive<1, 2>())
      .def_property_readonly("eps_stencil", &PeriodicGraph::eps_stencil)
      .def_property_readonly("eps_variation", &PeriodicGraph::eps_variation);

  m.def("distance", [](const PeriodicGraph& g, std::pair<double, double> a,
                       std::pair<double, double> b) {
    const DistanceResult r = distance(g, {a.first, a.second}, {b.first, b.second});
    return std::pair{r.value, r.relative_error};
  });
  m.def("stable_norm", [](const PeriodicGraph& g, long z1, long z2) {
    const StableNormValue v = stable_norm(g, {z1, z2});
    return py::make_tuple(v.value, v.lower, v.upper);
  });
  m.def("systole_periodic", [](const PeriodicGraph& g) {
    const PeriodicSystole s = systole_periodic(g);
    return py::make_tuple(s.value, std::pair{s.homotopy_class[0], s.homotopy_class[1]},
                          s.relative_error);
  });
  m.def("stable_unit_ball", [](const PeriodicGraph& g, int directions) {
    const StableBallEstimate est = stable_unit_ball(g, directions);
    py::dict out;
    out["ball"] = est.ball;
    out["directions"] = est.directions;
    py::list values;
    for (const auto& v : est.values) values.append(py::make_tuple(v.value, v.lower, v.upper));
    out["values"] = values;
    out["convex_within_bars"] = est.convex_within_bars;
    return out;
  });
  m.def("area_bh_field", [](const MetricField& f, int quad_n) {
    const QuadratureResult r = area_bh_field(f, quad_n);
    return std::pair{r.value, r.error_estimate};
  }, py::arg("field"), py::arg("quad_n") = 64);
  m.def("area_ht_field", [](const MetricField& f, int quad_n) {
    const QuadratureResult r = area_ht_field(f, quad_n);
    return std::pair{r.value, r.error_estimate};
  }, py::arg("field"), py::arg("quad_n") = 64);
  m.def("diameter_estimate", [](const PeriodicGraph& g) { return diameter_estimate(g); });
  m.def("curve_length", [](const MetricField& f, const PointList& pts) {
    std::vector<Vec2> v;
    for (const auto& [x, y] : pts) v.push_back({x, y});
    return curve_length(f, std::span<const Vec2>(v));
  });

  m.def("run_suite", [](const std::string& which, std::uint64_t seed) {
    return report_to_json(run_suite(which, seed));
  }, py::arg("which"), py::arg("seed") = 42);
  m.def("render_integer_lines", [](long bound) {
    return render_integer_lines(bound, nullptr);
  });
  m.def("body_to_json", &body_to_json);
  m.def("body_from_json", &body_from_json);
}
