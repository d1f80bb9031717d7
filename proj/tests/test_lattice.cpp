#include <cmath>
#include <random>

#include "doctest.h"
#include "systolic/lattice.hpp"
#include "systolic/verify.hpp"

using namespace systolic;

namespace {

const Lattice2 kHex{{1, 0}, {0.5, std::sqrt(3.0) / 2.0}};
const Lattice2 kZ2{{1, 0}, {0, 1}};

double brute_force_min_norm_sq(const Lattice2& l, long box) {
  double best = std::numeric_limits<double>::infinity();
  for (long a = -box; a <= box; ++a) {
    for (long b = -box; b <= box; ++b) {
      if (a == 0 && b == 0) continue;
      best = std::min(best, norm_sq(static_cast<double>(a) * l.u() +
                                    static_cast<double>(b) * l.v()));
    }
  }
  return best;
}

}  // namespace

TEST_CASE("determinants") {
  CHECK(determinant(kZ2) == doctest::Approx(1.0));
  CHECK(determinant(kHex) == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-14));
  CHECK(determinant(Lattice2{{2, 0}, {0, 3}}) == doctest::Approx(6.0));
  CHECK_THROWS_AS(Lattice2({1, 2}, {2, 4}), std::invalid_argument);
}

TEST_CASE("shortest vectors") {
  CHECK(shortest_vector(kZ2).norm_sq == doctest::Approx(1.0));
  CHECK(shortest_vector(kHex).norm_sq == doctest::Approx(1.0).epsilon(1e-14));

  const Lattice2 skew{{100, 0}, {99, 0.01}};
  CHECK(shortest_vector(skew).norm_sq ==
        doctest::Approx(brute_force_min_norm_sq(skew, 200)).epsilon(1e-12));
}

TEST_CASE("shortest vector agrees with brute force on random lattices") {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 500; ++i) {
    const Lattice2 l = random_lattice(rng);
    CHECK(shortest_vector(l).norm_sq ==
          doctest::Approx(brute_force_min_norm_sq(l, 50)).epsilon(1e-10));
  }
}

TEST_CASE("hermite invariant") {
  CHECK(hermite_invariant(kZ2) == doctest::Approx(1.0));
  CHECK(hermite_invariant(kHex) == doctest::Approx(2.0 / std::sqrt(3.0)).epsilon(1e-12));

  std::mt19937_64 rng(43);
  for (int i = 0; i < 1000; ++i) {
    CHECK(hermite_invariant(random_lattice(rng)) <= 2.0 / std::sqrt(3.0) + 1e-9);
  }
}

TEST_CASE("hermite invariant is unimodular and scale invariant") {
  std::mt19937_64 rng(47);
  std::uniform_int_distribution<int> small(-3, 3);
  for (int i = 0; i < 200; ++i) {
    const Lattice2 l = random_lattice(rng);
    // random unimodular recombination from shear generators
    Vec2 u = l.u(), v = l.v();
    for (int s = 0; s < 6; ++s) {
      const int k = small(rng);
      if (s % 2 == 0) {
        u += static_cast<double>(k) * v;
      } else {
        v += static_cast<double>(k) * u;
      }
    }
    CHECK(hermite_invariant(Lattice2{u, v}) ==
          doctest::Approx(hermite_invariant(l)).epsilon(1e-10));
    CHECK(hermite_invariant(Lattice2{3.7 * l.u(), 3.7 * l.v()}) ==
          doctest::Approx(hermite_invariant(l)).epsilon(1e-10));
  }
}

TEST_CASE("reduction to the fundamental domain") {
  const Lattice2 hex_r = reduce_to_fundamental_domain(kHex);
  CHECK(hex_r.u().x == doctest::Approx(1.0));
  CHECK(hex_r.u().y == doctest::Approx(0.0));
  CHECK(std::abs(hex_r.v().x) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(hex_r.v().y == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-12));

  const Lattice2 z2_r = reduce_to_fundamental_domain(kZ2);
  CHECK(std::abs(z2_r.v().x) <= 0.5 + 1e-12);
  CHECK(z2_r.v().y == doctest::Approx(1.0));

  std::mt19937_64 rng(53);
  for (int i = 0; i < 500; ++i) {
    const Lattice2 l = random_lattice(rng);
    const Lattice2 r = reduce_to_fundamental_domain(l);
    CHECK(std::abs(r.v().x) <= 0.5 + 1e-12);
    CHECK(r.v().y > 0.0);
    CHECK(norm_sq(r.v()) >= 1.0 - 1e-12);
    CHECK(hermite_invariant(r) == doctest::Approx(hermite_invariant(l)).epsilon(1e-12));
  }
}

TEST_CASE("flat riemannian systolic ratio") {
  CHECK(flat_riemannian_ratio(kHex) ==
        doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-14));
  CHECK(flat_riemannian_ratio(kZ2) == doctest::Approx(1.0));

  std::mt19937_64 rng(59);
  for (int i = 0; i < 1000; ++i) {
    CHECK(flat_riemannian_ratio(random_lattice(rng)) >= std::sqrt(3.0) / 2.0 - 1e-9);
  }
}
