#include <cmath>
#include <random>

#include "doctest.h"
#include "systolic/flat_torus.hpp"
#include "systolic/verify.hpp"

using namespace systolic;

namespace {

const ConvexBody kSquare{Vec2{1, 1}, Vec2{-1, 1}, Vec2{-1, -1}, Vec2{1, -1}};
const ConvexBody kTrianglePolar{Vec2{1, 1}, Vec2{1, -2}, Vec2{-2, 1}};

ConvexBody scaled(const ConvexBody& k, double s) {
  std::vector<Vec2> pts;
  for (const Vec2 p : k.vertices()) pts.push_back(s * p);
  return ConvexBody{std::span<const Vec2>(pts)};
}

}  // namespace

TEST_CASE("flat systoles") {
  const FlatSystole sq = systole_flat(FlatFinslerTorus(kSquare));
  CHECK(sq.value == doctest::Approx(1.0).epsilon(1e-14));

  for (const double eps : {0.1, 0.25, 0.5, 0.9}) {
    CHECK(systole_flat(FlatFinslerTorus(k_epsilon(eps))).value ==
          doctest::Approx(1.0).epsilon(1e-12));
  }

  CHECK(systole_flat(FlatFinslerTorus(scaled(kSquare, 2.0))).value ==
        doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("flat areas") {
  const FlatFinslerTorus sq(kSquare);
  CHECK(area_bh_flat(sq) == doctest::Approx(M_PI / 4.0).epsilon(1e-14));
  CHECK(area_ht_flat(sq) == doctest::Approx(2.0 / M_PI).epsilon(1e-14));

  const FlatFinslerTorus disk(regular_ngon(256, 1.0));
  CHECK(area_bh_flat(disk) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(area_ht_flat(disk) == doctest::Approx(1.0).epsilon(1e-3));

  const FlatFinslerTorus keps(k_epsilon(0.5));
  CHECK(area_bh_flat(keps) == doctest::Approx(M_PI / 2.25).epsilon(1e-14));

  const FlatFinslerTorus tp(kTrianglePolar);
  CHECK(area_ht_flat(tp) == doctest::Approx(1.5 / M_PI).epsilon(1e-13));
}

TEST_CASE("the asymmetric family") {
  const ConvexBody k = k_epsilon(0.5);
  CHECK_FALSE(k.symmetric());
  CHECK(k.size() == 4);
  CHECK(gauge_value(k, {0, 1}) == doctest::Approx(1.0));
  CHECK(gauge_value(k, {1.5, 0.25}) == doctest::Approx(1.0));

  for (const double eps : {0.1, 0.25, 0.5}) {
    CHECK(area(k_epsilon(eps)) ==
          doctest::Approx((1 + eps) * (1 + eps) / (2 * eps)).epsilon(1e-13));
  }
  CHECK_THROWS_AS(k_epsilon(0.0), std::invalid_argument);
  CHECK_THROWS_AS(k_epsilon(1.0), std::invalid_argument);
}

TEST_CASE("systolic ratios at the equality witnesses") {
  CHECK(systolic_ratio(FlatFinslerTorus(kSquare), AreaKind::BH) ==
        doctest::Approx(M_PI / 4.0).epsilon(1e-14));
  CHECK(systolic_ratio(FlatFinslerTorus(kTrianglePolar), AreaKind::HT) ==
        doctest::Approx(3.0 / (2.0 * M_PI)).epsilon(1e-13));
  for (const double eps : {0.1, 0.25, 0.5}) {
    CHECK(systolic_ratio(FlatFinslerTorus(k_epsilon(eps)), AreaKind::BH) ==
          doctest::Approx(2 * M_PI * eps / ((1 + eps) * (1 + eps))).epsilon(1e-13));
  }
}

TEST_CASE("ratios are scale invariant") {
  std::mt19937_64 rng(61);
  for (int i = 0; i < 20; ++i) {
    const ConvexBody k = random_body(rng, i % 2 == 0);
    const double bh = systolic_ratio(FlatFinslerTorus(k), AreaKind::BH);
    const double ht = systolic_ratio(FlatFinslerTorus(k), AreaKind::HT);
    for (const double lam : {0.1, 3.0, 17.0}) {
      const FlatFinslerTorus t(scaled(k, lam));
      CHECK(systolic_ratio(t, AreaKind::BH) == doctest::Approx(bh).epsilon(1e-10));
      CHECK(systolic_ratio(t, AreaKind::HT) == doctest::Approx(ht).epsilon(1e-10));
    }
  }
}

TEST_CASE("flat isosystolic bounds on random bodies") {
  std::mt19937_64 rng(67);
  for (int i = 0; i < 300; ++i) {
    const ConvexBody k = random_body(rng, true);
    const FlatFinslerTorus t(k);
    const double bh = systolic_ratio(t, AreaKind::BH);
    const double ht = systolic_ratio(t, AreaKind::HT);
    CHECK(bh >= M_PI / 4.0 - 1e-9);
    CHECK(ht >= 2.0 / M_PI - 1e-9);
    CHECK(ht <= bh + 1e-9);  // polygonal Blaschke
  }
  for (int i = 0; i < 300; ++i) {
    const ConvexBody k = random_body(rng, false);
    CHECK(systolic_ratio(FlatFinslerTorus(k), AreaKind::HT) >=
          3.0 / (2.0 * M_PI) - 1e-9);
  }
}
