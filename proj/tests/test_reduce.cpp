#include <cmath>
#include <random>

#include "doctest.h"
#include "systolic/polygon_reduce.hpp"
#include "systolic/verify.hpp"

using namespace systolic;

namespace {

const ConvexBody kHexagon{Vec2{1, 0},  Vec2{0.5, std::sqrt(3.0) / 2},
                          Vec2{-0.5, std::sqrt(3.0) / 2}, Vec2{-1, 0},
                          Vec2{-0.5, -std::sqrt(3.0) / 2}, Vec2{0.5, -std::sqrt(3.0) / 2}};
const ConvexBody kTriangle{Vec2{-1, -1}, Vec2{0, 1}, Vec2{1, 0}};

ConvexBody scaled(const ConvexBody& k, double s) {
  std::vector<Vec2> pts;
  for (const Vec2 p : k.vertices()) pts.push_back(s * p);
  return ConvexBody{std::span<const Vec2>(pts)};
}

bool all_vertices_integral(const ConvexBody& k, double tol) {
  for (const Vec2 p : k.vertices()) {
    if (std::abs(p.x - std::round(p.x)) > tol) return false;
    if (std::abs(p.y - std::round(p.y)) > tol) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("one pair removal on the hexagon") {
  const auto [q, trace] = mahler_reduce_step(kHexagon);
  CHECK(q.size() == 4);
  CHECK(q.symmetric());
  CHECK(area(q) == doctest::Approx(area(kHexagon)).epsilon(1e-12));
  CHECK(trace.steps.size() == 1);
  CHECK(trace.steps[0].kind == StepKind::MahlerPairRemoval);
  CHECK(mahler_product(q) <= mahler_product(kHexagon) + 1e-9);
  CHECK(mahler_product(q) >= 8.0 - 1e-9);
}

TEST_CASE("parallelograms cannot be reduced further") {
  const ConvexBody par{Vec2{1, 0.2}, Vec2{-1, -0.2}, Vec2{0.3, 1}, Vec2{-0.3, -1}};
  CHECK_THROWS_AS(mahler_reduce_step(par), AlreadyParallelogram);
  CHECK_THROWS_AS(mahler_reduce_step(kTriangle), NotSymmetric);
}

TEST_CASE("volume product decreases monotonically down to a parallelogram") {
  std::mt19937_64 rng(71);
  for (int i = 0; i < 200; ++i) {
    const ConvexBody start = random_body(rng, true);
    const std::size_t pairs = start.size() / 2;
    const auto [q, trace] = mahler_reduce(start);
    CHECK(q.size() == 4);
    CHECK(trace.steps.size() == pairs - 2);
    double prev = mahler_product(start);
    for (const auto& step : trace.steps) {
      CHECK(step.monitored <= prev + 1e-9);
      CHECK(step.body.symmetric());
      prev = step.monitored;
    }
    CHECK(mahler_product(q) == doctest::Approx(8.0).epsilon(1e-6));
  }
}

TEST_CASE("the minimal triangle is a fixed point of the integer-line drive") {
  REQUIRE(meets_all_integer_lines(kTriangle));
  const auto [q, trace] = abt_reduce(kTriangle);
  CHECK(trace.steps.empty());
  CHECK(area(q) == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("a scaled triangle drives down to an integer-vertex polygon") {
  const ConvexBody start = scaled(kTriangle, 1.2);
  REQUIRE(meets_all_integer_lines(start));
  const auto [q, trace] = abt_reduce(start);
  CHECK(all_vertices_integral(q, 1e-6));
  CHECK(area(q) >= 1.5 - 1e-6);
  CHECK(meets_all_integer_lines(q));
  double prev = area(start);
  for (const auto& step : trace.steps) {
    CHECK(step.monitored <= prev + 1e-9);
    prev = step.monitored;
  }
}

TEST_CASE("inputs missing a line are rejected") {
  const ConvexBody small{Vec2{0.25, 0.25}, Vec2{-0.25, 0.25}, Vec2{-0.25, -0.25},
                         Vec2{0.25, -0.25}};
  CHECK_THROWS_AS(abt_reduce(small), PreconditionViolated);
}

TEST_CASE("integer-line drive invariants on random inputs") {
  std::mt19937_64 rng(73);
  for (int i = 0; i < 25; ++i) {
    const ConvexBody start = random_line_meeting_body(rng);
    REQUIRE(meets_all_integer_lines(start));
    const auto [q, trace] = abt_reduce(start);
    CHECK(all_vertices_integral(q, 1e-6));
    CHECK(area(q) >= 1.5 - 1e-6);
    CHECK(meets_all_integer_lines(q));
    double prev = area(start);
    for (const auto& step : trace.steps) {
      CHECK(step.monitored <= prev + 1e-9);
      prev = step.monitored;
    }
    // terminal state: every vertex held by at least two supporting lines
    for (const auto& pins : supporting_lines_per_vertex(q)) {
      CHECK(pins.size() >= 2);
    }
  }
}
