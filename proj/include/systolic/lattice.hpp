#pragma once

#include <stdexcept>

#include "systolic/vec2.hpp"

namespace systolic {

/// Full-rank planar lattice spanned by a basis (u, v).
class Lattice2 {
 public:
  Lattice2(Vec2 u, Vec2 v) : u_(u), v_(v) {
    if (std::abs(cross(u, v)) <= 1e-12) {
      throw std::invalid_argument("lattice basis is singular");
    }
  }

  Vec2 u() const { return u_; }
  Vec2 v() const { return v_; }

 private:
  Vec2 u_, v_;
};

/// |det(u, v)|; invariant under unimodular basis change.
double determinant(const Lattice2& l);

struct ShortestVector {
  Vec2 vec;        // a nonzero lattice vector of minimal Euclidean norm
  double norm_sq;  // its squared length
};

/// Lagrange (Gauss) reduction: after reduction the first basis vector is a
/// shortest nonzero lattice vector.
Lattice2 lagrange_reduce(const Lattice2& l);

ShortestVector shortest_vector(const Lattice2& l);

/// N(L) / det(L); scale invariant, at most 2/sqrt(3) in the plane.
double hermite_invariant(const Lattice2& l);

/// Equivalent description (up to rotation, scaling and reflection) with basis
/// (1,0) and second vector in {|v1| <= 1/2, v2 > 0, v1^2 + v2^2 >= 1}.
Lattice2 reduce_to_fundamental_domain(const Lattice2& l);

/// det(L) / N(L) = area / sys^2 of the flat Riemannian torus of L.
double flat_riemannian_ratio(const Lattice2& l);

}  // namespace systolic
