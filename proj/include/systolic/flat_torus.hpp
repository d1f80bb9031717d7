#pragma once

#include <array>

#include "systolic/convex_body.hpp"

namespace systolic {

enum class AreaKind { BH, HT };

/// Translation-invariant Finsler structure on the square torus induced by one
/// convex body acting as the unit ball at every point.  Reversible exactly
/// when the body is symmetric.
class FlatFinslerTorus {
 public:
  explicit FlatFinslerTorus(ConvexBody unit_ball) : ball_(std::move(unit_ball)) {}
  const ConvexBody& unit_ball() const { return ball_; }

 private:
  ConvexBody ball_;
};

struct FlatSystole {
  double value;
  std::array<long, 2> homotopy_class;  // a minimizing integer vector
};

/// Least gauge over nonzero integer vectors.  Finite enumeration: any z with
/// |z| > R * incumbent is beaten already since gauge(z) >= |z| / R.
FlatSystole systole_flat(const FlatFinslerTorus& t);

/// pi / |K|.
double area_bh_flat(const FlatFinslerTorus& t);

/// |K°| / pi.
double area_ht_flat(const FlatFinslerTorus& t);

/// area / systole^2; invariant under rescaling the ball.
double systolic_ratio(const FlatFinslerTorus& t, AreaKind kind);

/// The asymmetric quadrilateral family witnessing unbounded BH systolic
/// freedom: conv{(0,1), ((1+e)/(2e), (1-e)/2), (0,-e), (-(1+e)/(2e), (1-e)/2)}
/// for e in (0,1).  Its area is (1+e)^2 / (2e) while its systole stays 1.
ConvexBody k_epsilon(double eps);

}  // namespace systolic
