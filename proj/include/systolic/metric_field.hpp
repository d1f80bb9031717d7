#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "systolic/convex_body.hpp"
#include "systolic/expression.hpp"
#include "systolic/lattice.hpp"

namespace systolic {

/// Z²-periodic assignment x -> K_x of convex unit bodies on the plane.
///
/// Three representations:
///  - flat: one body everywhere;
///  - conformal: sqrt(f(x)) times the flat metric of a lattice g0, with the
///    g0-unit disk polygonized as a regular n-gon (so areas and gauges agree
///    exactly with the polygonal approximant);
///  - body_grid: an n x n grid of bodies over [0,1)² combined by bilinear
///    interpolation of support functions (a weighted Minkowski sum).
///
/// Periodicity is enforced by construction: coordinates are wrapped into
/// [0,1)² before evaluation.  Instances are immutable after construction.
class MetricField {
 public:
  enum class Kind { Flat, Conformal, BodyGrid };

  static MetricField flat(ConvexBody k);
  static MetricField conformal(Expression f, Lattice2 g0, int disk_vertices = 64);
  static MetricField body_grid(int n, std::vector<ConvexBody> bodies);

  Kind kind() const { return kind_; }
  bool reversible() const { return reversible_; }

  /// Unit body at x (an actual polygon; for body_grid this is the weighted
  /// Minkowski sum of the cell corners).
  ConvexBody body_at(Vec2 x) const;

  /// Norm of v in the tangent space at x.  Agrees exactly with
  /// gauge_value(body_at(x), v).
  double gauge_at(Vec2 x, Vec2 v) const;

  double bh_integrand(Vec2 x) const;  // pi / |K_x|
  double ht_integrand(Vec2 x) const;  // |K_x polar| / pi

  /// Bounds on the directional speed gauge_at(x, v)/|v| over all x and v.
  double min_speed() const { return min_speed_; }
  double max_speed() const { return max_speed_; }

  // representation details, used by the loaders and reports
  const ConvexBody* flat_body() const { return kind_ == Kind::Flat ? &bodies_[0] : nullptr; }
  const Expression* conformal_factor() const { return factor_ ? &*factor_ : nullptr; }
  const Lattice2* base_lattice() const { return lattice_ ? &*lattice_ : nullptr; }
  int grid_n() const { return grid_n_; }
  const std::vector<ConvexBody>& grid_bodies() const { return bodies_; }
  int disk_vertices() const { return disk_vertices_; }

 private:
  MetricField() = default;

  double conformal_scale(Vec2 x) const;  // sqrt(f) with wrapped coordinates

  Kind kind_ = Kind::Flat;
  bool reversible_ = true;
  double min_speed_ = 0.0;
  double max_speed_ = 0.0;

  // flat: bodies_[0]; body_grid: n*n bodies, bodies_[j*n + i] at (i/n, j/n)
  std::vector<ConvexBody> bodies_;
  std::optional<Expression> factor_;
  std::optional<Lattice2> lattice_;
  int grid_n_ = 0;
  int disk_vertices_ = 0;

  // conformal: unit-scale base body B^{-1}(ngon) and the inverse basis map
  std::optional<ConvexBody> base_body_;
  double base_polar_area_ = 0.0;
  double inv_b_[4] = {1, 0, 0, 1};  // row-major inverse of the lattice basis
  double ngon_apothem_ = 1.0;

  // body_grid cell caches: union of corner edge normals and their supports
  struct CellCache {
    std::vector<Vec2> dirs;
    std::vector<std::array<double, 4>> h;  // per dir: supports of the 4 corners
  };
  std::vector<CellCache> cells_;
};

/// Weighted Minkowski sum of convex polygons (all weights nonnegative, at
/// least one positive).  The support function of the result is the weighted
/// sum of the support functions.
ConvexBody minkowski_combination(std::span<const ConvexBody* const> bodies,
                                 std::span<const double> weights);

inline double wrap01(double t) { return t - std::floor(t); }
inline Vec2 wrap01(Vec2 x) { return {wrap01(x.x), wrap01(x.y)}; }

}  // namespace systolic
