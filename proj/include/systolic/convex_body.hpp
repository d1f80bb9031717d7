#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "systolic/vec2.hpp"

namespace systolic {

struct NotSymmetric : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NotLatticePolygon : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Cross products below this (scale-adjusted) threshold count as collinear
// when normalizing vertex lists.
inline constexpr double kCollinearTol = 1e-12;

// A point is strictly inside a body only if every edge half-plane test
// a·x <= 1 passes with margin above this.  Lattice points sitting exactly on
// an edge must not count as interior.
inline constexpr double kInteriorMargin = 1e-9;

// A vertex set is symmetric when it matches its negation to this tolerance.
inline constexpr double kSymmetryTol = 1e-9;

/// A convex polygon that contains the origin in its interior.  Doubles as the
/// unit ball of a (possibly asymmetric) norm on the plane.
///
/// Construction normalizes the input: convex hull, counterclockwise order,
/// collinear vertices merged.  Instances are immutable and safe to share
/// across threads.
class ConvexBody {
 public:
  /// Throws std::invalid_argument if the hull is degenerate or the origin is
  /// not strictly interior.
  explicit ConvexBody(std::span<const Vec2> points);
  ConvexBody(std::initializer_list<Vec2> points)
      : ConvexBody(std::span<const Vec2>(points.begin(), points.size())) {}

  const std::vector<Vec2>& vertices() const { return verts_; }
  std::size_t size() const { return verts_.size(); }

  /// Outward edge functionals: edge (v_i, v_{i+1}) lies on {x : a_i·x = 1}.
  const std::vector<Vec2>& edge_duals() const { return duals_; }

  bool symmetric() const { return symmetric_; }

  /// Largest |v| over the vertices.
  double circumradius() const { return circumradius_; }
  /// Radius of the largest origin-centered disk inside the body.
  double inradius() const { return inradius_; }

 private:
  std::vector<Vec2> verts_;
  std::vector<Vec2> duals_;
  bool symmetric_ = false;
  double circumradius_ = 0.0;
  double inradius_ = 0.0;
};

/// Lebesgue measure by the shoelace formula.
double area(const ConvexBody& k);

/// Polar body {x : <x,y> <= 1 for all y in k}.  Each edge with supporting
/// line a·x = 1 contributes the vertex a.
ConvexBody polar(const ConvexBody& k);

/// min{t >= 0 : v in t·k}.  Zero exactly at v = 0.
double gauge_value(const ConvexBody& k, Vec2 v);

/// max over vertices of <u, vertex>; equals the gauge of u in the polar body.
double support_value(const ConvexBody& k, Vec2 u);

/// |K|·|K°|.  Throws NotSymmetric unless the body is centrally symmetric.
double mahler_product(const ConvexBody& k);

/// True iff the only integer point strictly inside the body is the origin.
bool interior_lattice_trivial(const ConvexBody& k);

/// True iff the body intersects every line {m·x = 1}, m in Z² \ {0}.
/// Duality interchanges points and lines, so this is the interior lattice
/// test on the polar body.
bool meets_all_integer_lines(const ConvexBody& k);

/// Area of a convex polygon with integer vertices via lattice point counts:
/// interior + boundary/2 - 1.  The polygon need not contain the origin.
/// Throws NotLatticePolygon if some vertex is not integral.
double pick_area(std::span<const Vec2> lattice_polygon);
double pick_area(const ConvexBody& k);

/// Hausdorff distance between convex bodies, evaluated as the sup difference
/// of support functions over a dense direction sample.
double hausdorff_distance(const ConvexBody& a, const ConvexBody& b);

/// Regular n-gon inscribed in the circle of the given radius, first vertex at
/// angle `phase`.
ConvexBody regular_ngon(int n, double radius = 1.0, double phase = 0.0);

/// Callable view of the norm whose unit ball is `body`.
class Gauge {
 public:
  explicit Gauge(const ConvexBody& body) : body_(&body) {}
  double operator()(Vec2 v) const { return gauge_value(*body_, v); }
  const ConvexBody& body() const { return *body_; }

 private:
  const ConvexBody* body_;
};

/// Convex hull, counterclockwise, collinear runs merged.  Shared by the
/// ConvexBody constructor and by lattice-polygon utilities that do not
/// require the origin inside.
std::vector<Vec2> convex_hull_ccw(std::span<const Vec2> points);

}  // namespace systolic
