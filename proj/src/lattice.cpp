#include "systolic/lattice.hpp"

#include <cmath>
#include <utility>

namespace systolic {

double determinant(const Lattice2& l) { return std::abs(cross(l.u(), l.v())); }

Lattice2 lagrange_reduce(const Lattice2& l) {
  Vec2 a = l.u();
  Vec2 b = l.v();
  if (norm_sq(a) > norm_sq(b)) std::swap(a, b);
  while (true) {
    const double mu = std::round(dot(a, b) / norm_sq(a));
    b -= mu * a;
    if (norm_sq(b) >= norm_sq(a)) break;
    std::swap(a, b);
  }
  return Lattice2(a, b);
}

ShortestVector shortest_vector(const Lattice2& l) {
  const Lattice2 r = lagrange_reduce(l);
  return {r.u(), norm_sq(r.u())};
}

double hermite_invariant(const Lattice2& l) {
  return shortest_vector(l).norm_sq / determinant(l);
}

Lattice2 reduce_to_fundamental_domain(const Lattice2& l) {
  const Lattice2 r = lagrange_reduce(l);
  const Vec2 a = r.u();
  const Vec2 b = r.v();
  // Similarity sending a to (1,0): coordinates of b are (<a,b>, cross(a,b))
  // divided by |a|^2.
  const double n = norm_sq(a);
  double v1 = dot(a, b) / n;
  double v2 = cross(a, b) / n;
  if (v2 < 0) v2 = -v2;  // reflection across the x axis
  // Lagrange reduction already gives |v1| <= 1/2 and |b| >= |a|.
  return Lattice2(Vec2{1.0, 0.0}, Vec2{v1, v2});
}

double flat_riemannian_ratio(const Lattice2& l) {
  return determinant(l) / shortest_vector(l).norm_sq;
}

}  // namespace systolic
