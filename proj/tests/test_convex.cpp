#include <cmath>
#include <random>

#include "doctest.h"
#include "systolic/convex_body.hpp"
#include "systolic/verify.hpp"

using namespace systolic;

namespace {

const ConvexBody kSquare{Vec2{1, 1}, Vec2{-1, 1}, Vec2{-1, -1}, Vec2{1, -1}};
const ConvexBody kTriangle{Vec2{-1, -1}, Vec2{0, 1}, Vec2{1, 0}};
const ConvexBody kTrianglePolar{Vec2{1, 1}, Vec2{1, -2}, Vec2{-2, 1}};

// Independent line-by-line check: the body meets {m·x = 1} iff its support in
// direction m reaches 1.  Lines closer to the origin than the inscribed disk
// always cross the body, so a finite bound suffices.
bool meets_all_lines_direct(const ConvexBody& k) {
  const long bound = static_cast<long>(std::ceil(1.0 / k.inradius())) + 1;
  for (long m1 = -bound; m1 <= bound; ++m1) {
    for (long m2 = -bound; m2 <= bound; ++m2) {
      if (m1 == 0 && m2 == 0) continue;
      if (support_value(k, {static_cast<double>(m1), static_cast<double>(m2)}) <
          1.0 - 1e-9) {
        return false;
      }
    }
  }
  return true;
}

double shoelace(const std::vector<Vec2>& v) {
  double twice = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) twice += cross(v[i], v[(i + 1) % v.size()]);
  return 0.5 * std::abs(twice);
}

}  // namespace

TEST_CASE("construction normalizes and validates") {
  // arbitrary order, duplicates and interior points are all absorbed
  const std::vector<Vec2> messy{{1, 1}, {-1, -1}, {1, -1}, {-1, 1}, {0, 0}, {1, 1}, {0.5, 0.2}};
  const ConvexBody b{std::span<const Vec2>(messy)};
  CHECK(b.size() == 4);
  CHECK(b.symmetric());

  CHECK_THROWS_AS(ConvexBody({Vec2{0, 0}, Vec2{1, 0}, Vec2{0, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(ConvexBody({Vec2{1, 0}, Vec2{2, 0}, Vec2{3, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(ConvexBody({Vec2{1, 1}, Vec2{2, 1}, Vec2{1, 2}}), std::invalid_argument);
}

TEST_CASE("areas of the reference bodies") {
  CHECK(area(kSquare) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(area(kTriangle) == doctest::Approx(1.5).epsilon(1e-14));
  const ConvexBody keps{Vec2{0, 1}, Vec2{1.5, 0.25}, Vec2{0, -0.5}, Vec2{-1.5, 0.25}};
  CHECK(area(keps) == doctest::Approx(2.25).epsilon(1e-14));
}

TEST_CASE("polar bodies") {
  const ConvexBody cross_poly = polar(kSquare);
  CHECK(cross_poly.size() == 4);
  CHECK(gauge_value(cross_poly, {1, 0}) == doctest::Approx(1.0));
  CHECK(area(cross_poly) == doctest::Approx(2.0).epsilon(1e-14));

  const ConvexBody tp = polar(kTriangle);
  CHECK(tp.size() == 3);
  CHECK(hausdorff_distance(tp, kTrianglePolar) <= 1e-12);
  CHECK(area(tp) == doctest::Approx(4.5).epsilon(1e-14));
}

TEST_CASE("bipolar identity on random bodies") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 500; ++i) {
    const ConvexBody k = random_body(rng, i % 2 == 0);
    CHECK(hausdorff_distance(polar(polar(k)), k) <= 1e-10);
  }
}

TEST_CASE("gauge evaluation") {
  CHECK(gauge_value(kSquare, {3, 1}) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(gauge_value(kTrianglePolar, {1, 1}) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(gauge_value(kSquare, {0, 0}) == 0.0);

  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    const ConvexBody k = random_body(rng, false);
    const auto& verts = k.vertices();
    const Vec2 v = 2.0 * verts[i % verts.size()];
    CHECK(gauge_value(k, v) == doctest::Approx(2.0).epsilon(1e-10));
  }
}

TEST_CASE("support evaluation and duality with the polar gauge") {
  CHECK(support_value(kSquare, {1, 2}) == doctest::Approx(3.0));
  const ConvexBody cross_poly = polar(kSquare);
  CHECK(support_value(cross_poly, {3, 1}) == doctest::Approx(3.0));

  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> c(-3.0, 3.0);
  const ConvexBody k = random_body(rng, false);
  const ConvexBody kp = polar(k);
  for (int i = 0; i < 100; ++i) {
    const Vec2 u{c(rng), c(rng)};
    CHECK(support_value(k, u) == doctest::Approx(gauge_value(kp, u)).epsilon(1e-12));
  }
}

TEST_CASE("mahler product") {
  CHECK(mahler_product(kSquare) == doctest::Approx(8.0).epsilon(1e-14));
  CHECK(mahler_product(regular_ngon(6, 1.0)) == doctest::Approx(9.0).epsilon(1e-12));
  CHECK(mahler_product(regular_ngon(64, 1.0)) ==
        doctest::Approx(M_PI * M_PI).epsilon(0.005));
  CHECK_THROWS_AS(mahler_product(kTriangle), NotSymmetric);
}

TEST_CASE("mahler and blaschke bounds on random symmetric bodies") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 300; ++i) {
    const double mp = mahler_product(random_body(rng, true));
    CHECK(mp >= 8.0 - 1e-9);
    CHECK(mp <= M_PI * M_PI + 1e-9);
  }
}

TEST_CASE("interior lattice points") {
  CHECK(interior_lattice_trivial(kSquare));
  CHECK_FALSE(interior_lattice_trivial(regular_ngon(64, 1.5)));
  CHECK(interior_lattice_trivial(kTrianglePolar));
}

TEST_CASE("meeting every integer line") {
  CHECK(meets_all_integer_lines(kTriangle));
  const ConvexBody small{Vec2{0.25, 0.25}, Vec2{-0.25, 0.25}, Vec2{-0.25, -0.25},
                         Vec2{0.25, -0.25}};
  CHECK_FALSE(meets_all_integer_lines(small));
  CHECK_FALSE(meets_all_lines_direct(small));
  CHECK(meets_all_integer_lines(kSquare));

  // duality against the direct line enumeration
  std::mt19937_64 rng(19);
  for (int i = 0; i < 200; ++i) {
    const ConvexBody k = random_body(rng, i % 2 == 0);
    CHECK(meets_all_integer_lines(k) == meets_all_lines_direct(k));
    CHECK(interior_lattice_trivial(k) == meets_all_integer_lines(polar(k)));
  }
}

TEST_CASE("minkowski measure bound") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 300; ++i) {
    const ConvexBody k = random_body(rng, true);
    if (interior_lattice_trivial(k)) CHECK(area(k) <= 4.0 + 1e-9);
  }
}

TEST_CASE("pick counts") {
  const std::vector<Vec2> right{{0, 0}, {2, 0}, {0, 2}};
  CHECK(pick_area(std::span<const Vec2>(right)) == doctest::Approx(2.0));
  const std::vector<Vec2> unit{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  CHECK(pick_area(std::span<const Vec2>(unit)) == doctest::Approx(1.0));
  CHECK(pick_area(kTriangle) == doctest::Approx(1.5));

  const std::vector<Vec2> bad{{0, 0}, {1.5, 0}, {0, 1}};
  CHECK_THROWS_AS(pick_area(std::span<const Vec2>(bad)), NotLatticePolygon);
}

TEST_CASE("pick agrees with the shoelace formula on random lattice polygons") {
  std::mt19937_64 rng(29);
  std::uniform_int_distribution<int> coord(-6, 6);
  std::uniform_int_distribution<int> npts(3, 10);
  int done = 0;
  while (done < 200) {
    std::vector<Vec2> pts;
    for (int i = 0, n = npts(rng); i < n; ++i) {
      pts.push_back({static_cast<double>(coord(rng)), static_cast<double>(coord(rng))});
    }
    const auto hull = convex_hull_ccw(pts);
    if (hull.size() < 3) continue;
    CHECK(pick_area(std::span<const Vec2>(hull)) ==
          doctest::Approx(shoelace(hull)).epsilon(1e-9));
    ++done;
  }
}

TEST_CASE("hausdorff distance") {
  CHECK(hausdorff_distance(kSquare, kSquare) == 0.0);
  const ConvexBody big{Vec2{2, 2}, Vec2{-2, 2}, Vec2{-2, -2}, Vec2{2, -2}};
  CHECK(hausdorff_distance(kSquare, big) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-4));

  std::vector<Vec2> perturbed;
  for (const Vec2 p : kSquare.vertices()) perturbed.push_back(p + Vec2{1e-6, -1e-6});
  const ConvexBody moved{std::span<const Vec2>(perturbed)};
  CHECK(hausdorff_distance(kSquare, moved) <= 2e-6);
}
