#include "systolic/polygon_reduce.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>

namespace systolic {

namespace {

constexpr double kLineResidual = 1e-10;   // |m·v - 1| below this pins v to the line
constexpr double kSupportSlack = 1e-9;    // support(m) <= 1 + slack counts as supporting
constexpr double kMinStep = 1e-12;

double polygon_area(const std::vector<Vec2>& v) {
  double twice = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) twice += cross(v[i], v[(i + 1) % v.size()]);
  return 0.5 * twice;
}

// ----------------------------------------------------------------------------
// Mahler pair removal

struct MahlerCandidate {
  ConvexBody body;
  double product;
};

std::optional<MahlerCandidate> try_pair_removal(const ConvexBody& p, std::size_t i, int s) {
  const auto& v = p.vertices();
  const std::size_t n = v.size();
  const std::size_t m = n / 2;
  const Vec2 chord = v[(i + 1) % n] - v[(i + n - 1) % n];
  const Vec2 d = static_cast<double>(s) * chord;
  const Vec2 a = s > 0 ? v[(i + 1) % n] : v[(i + n - 1) % n];
  const Vec2 b = s > 0 ? v[(i + 2) % n] : v[(i + n - 2) % n];
  const Vec2 e = b - a;
  const double slope = cross(e, d);
  if (std::abs(slope) <= kMinStep) return std::nullopt;
  const double t = -cross(e, v[i] - a) / slope;
  if (t <= kMinStep) return std::nullopt;

  std::vector<Vec2> moved(v);
  moved[i] = v[i] + t * d;
  moved[(i + m) % n] = -moved[i];
  try {
    ConvexBody q{std::span<const Vec2>(moved)};
    if (!q.symmetric()) return std::nullopt;
    if (q.size() != n - 2) return std::nullopt;
    if (std::abs(polygon_area(q.vertices()) - polygon_area(v)) >
        1e-9 * std::max(1.0, polygon_area(v))) {
      return std::nullopt;
    }
    const double product = area(q) * area(polar(q));
    return MahlerCandidate{std::move(q), product};
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

}  // namespace

const char* step_kind_name(StepKind k) {
  switch (k) {
    case StepKind::MahlerPairRemoval: return "mahler_pair_removal";
    case StepKind::AbtPushToLine: return "abt_push_to_line";
    case StepKind::AbtSlideAlongLine: return "abt_slide_along_line";
    case StepKind::VertexMerge: return "vertex_merge";
  }
  return "unknown";
}

std::pair<ConvexBody, ReductionTrace> mahler_reduce_step(const ConvexBody& p) {
  if (!p.symmetric()) throw NotSymmetric("pair removal needs a symmetric polygon");
  const std::size_t m = p.size() / 2;
  if (m == 2) throw AlreadyParallelogram("polygon is already a parallelogram");

  std::optional<MahlerCandidate> best;
  for (std::size_t i = 0; i < m; ++i) {
    for (int s : {+1, -1}) {
      auto cand = try_pair_removal(p, i, s);
      if (cand && (!best || cand->product < best->product)) best = std::move(cand);
    }
  }
  if (!best) throw std::logic_error("no admissible pair removal found");

  const double before = mahler_product(p);
  if (best->product > before + 1e-9) {
    throw std::logic_error("volume product increased during pair removal");
  }
  ReductionTrace trace;
  trace.steps.push_back({StepKind::MahlerPairRemoval, best->body, best->product});
  return {std::move(best->body), std::move(trace)};
}

std::pair<ConvexBody, ReductionTrace> mahler_reduce(const ConvexBody& p) {
  if (!p.symmetric()) throw NotSymmetric("reduction needs a symmetric polygon");
  ConvexBody body = p;
  ReductionTrace trace;
  while (body.size() / 2 > 2) {
    auto [next, step] = mahler_reduce_step(body);
    trace.steps.push_back(step.steps.front());
    body = std::move(next);
  }
  return {std::move(body), std::move(trace)};
}

// ----------------------------------------------------------------------------
// Integer-line drive

namespace {

// Primitive integer vectors with |m|_inf <= bound.  A line {m·x = 1} can only
// support a body whose origin-centered inscribed disk has radius r when
// |m| <= 1/r, so a finite bound suffices for tangency detection.
std::vector<Vec2> primitive_candidates(long bound) {
  std::vector<Vec2> out;
  for (long mx = -bound; mx <= bound; ++mx) {
    for (long my = -bound; my <= bound; ++my) {
      if (mx == 0 && my == 0) continue;
      if (std::gcd(std::labs(mx), std::labs(my)) != 1) continue;
      out.push_back({static_cast<double>(mx), static_cast<double>(my)});
    }
  }
  return out;
}

long tangency_bound(const ConvexBody& k) {
  return static_cast<long>(std::ceil(1.0 / k.inradius())) + 2;
}

struct MoveStop {
  double t = std::numeric_limits<double>::infinity();
  bool on_line = false;
  Vec2 line{0, 0};
};

// First positive parameter at which the moving vertex flattens against a
// neighbor line, reaches the chord of its neighbors, or would push an edge
// through the origin.
double geometric_stop(const std::vector<Vec2>& v, std::size_t i, Vec2 d) {
  const std::size_t n = v.size();
  const Vec2 vi = v[i];
  const Vec2 prev = v[(i + n - 1) % n];
  const Vec2 next = v[(i + 1) % n];
  const Vec2 prev2 = v[(i + n - 2) % n];
  const Vec2 next2 = v[(i + 2) % n];

  double stop = std::numeric_limits<double>::infinity();
  const auto linear_root = [&](double f0, double f1) {
    if (std::abs(f1) <= 1e-300) return;
    const double t = -f0 / f1;
    if (t > kMinStep) stop = std::min(stop, t);
  };
  // vertex lands on the chord of its neighbors
  linear_root(cross(next - prev, vi - prev), cross(next - prev, d));
  // previous neighbor becomes collinear
  linear_root(cross(prev - prev2, vi - prev), cross(prev - prev2, d));
  // next neighbor becomes collinear
  linear_root(cross(next2 - next, vi - next), cross(next2 - next, d));
  // origin guards: the adjacent edges must not sweep over the origin
  double guard = std::numeric_limits<double>::infinity();
  const auto guard_root = [&](double f0, double f1) {
    if (std::abs(f1) <= 1e-300) return;
    const double t = -f0 / f1;
    if (t > kMinStep) guard = std::min(guard, t);
  };
  guard_root(cross(prev, vi), cross(prev, d));
  guard_root(cross(vi, next), cross(d, next));
  return std::min(stop, guard * (1.0 - 1e-9));
}

// Earliest t in (0, t_max] at which some candidate line becomes supporting at
// the moving vertex.  Lines already met through another vertex with slack stay
// met and are not stops.
MoveStop line_stop(const std::vector<Vec2>& v, std::size_t i, Vec2 d, double t_max,
                   const std::vector<Vec2>& candidates) {
  MoveStop stop;
  stop.t = t_max;
  for (const Vec2 m : candidates) {
    double others = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (j == i) continue;
      others = std::max(others, dot(m, v[j]));
    }
    if (others > 1.0 + kSupportSlack) continue;  // line crosses the interior elsewhere
    const double f0 = dot(m, v[i]) - 1.0;
    if (std::abs(f0) <= kLineResidual) continue;  // already pinned here
    const double f1 = dot(m, d);
    if (std::abs(f1) <= 1e-300) continue;
    const double t = -f0 / f1;
    if (t > kMinStep && t < stop.t - 1e-15) {
      stop.t = t;
      stop.on_line = true;
      stop.line = m;
    }
  }
  return stop;
}

std::vector<std::vector<Vec2>> pins_per_vertex(const ConvexBody& k,
                                               const std::vector<Vec2>& candidates) {
  const auto& v = k.vertices();
  std::vector<std::vector<Vec2>> pins(v.size());
  for (const Vec2 m : candidates) {
    if (support_value(k, m) > 1.0 + kSupportSlack) continue;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (std::abs(dot(m, v[i]) - 1.0) <= kLineResidual) pins[i].push_back(m);
    }
  }
  return pins;
}

struct AbtMove {
  std::vector<Vec2> verts;
  StepKind kind;
};

// One deformation of vertex i: toward the neighbor chord when the vertex is on
// no supporting line, along its single supporting line otherwise.
std::optional<AbtMove> abt_move(const ConvexBody& body, std::size_t i,
                                const std::vector<Vec2>& pins,
                                const std::vector<Vec2>& candidates) {
  const auto& v = body.vertices();
  const std::size_t n = v.size();
  const Vec2 vi = v[i];
  const Vec2 prev = v[(i + n - 1) % n];
  const Vec2 next = v[(i + 1) % n];

  Vec2 d;
  if (pins.empty()) {
    // push toward the orthogonal projection on the chord of the neighbors
    const Vec2 chord = next - prev;
    const Vec2 foot = prev + (dot(vi - prev, chord) / norm_sq(chord)) * chord;
    d = foot - vi;
    if (norm(d) <= kMinStep) return std::nullopt;
  } else {
    // slide along the single supporting line in the area-decreasing direction;
    // ties break toward the lower-index neighbor
    const Vec2 m = pins.front();
    Vec2 dir = perp(m);
    const double slope = cross(dir, next - prev);
    if (slope > kMinStep) {
      dir = -dir;
    } else if (std::abs(slope) <= kMinStep && dot(dir, prev - vi) < 0.0) {
      dir = -dir;
    }
    d = dir;
  }

  const double t_geo = geometric_stop(v, i, d);
  if (!std::isfinite(t_geo) || t_geo <= kMinStep) return std::nullopt;
  const MoveStop stop = line_stop(v, i, d, t_geo, candidates);

  AbtMove move;
  move.verts = v;
  move.verts[i] = vi + stop.t * d;
  if (stop.on_line) {
    move.kind = pins.empty() ? StepKind::AbtPushToLine : StepKind::AbtSlideAlongLine;
  } else {
    move.kind = StepKind::VertexMerge;
  }
  return move;
}

}  // namespace

std::vector<std::vector<Vec2>> supporting_lines_per_vertex(const ConvexBody& k) {
  return pins_per_vertex(k, primitive_candidates(tangency_bound(k)));
}

std::pair<ConvexBody, ReductionTrace> abt_reduce(const ConvexBody& p) {
  if (!meets_all_integer_lines(p)) {
    throw PreconditionViolated("input misses an integer line");
  }

  ConvexBody body = p;
  ReductionTrace trace;
  constexpr int kMaxSteps = 100000;
  for (int step = 0; step < kMaxSteps; ++step) {
    long bound = tangency_bound(body);
    auto candidates = primitive_candidates(bound);
    const auto pins = pins_per_vertex(body, candidates);

    std::size_t target = body.size();
    for (std::size_t i = 0; i < body.size(); ++i) {
      if (pins[i].size() < 2) {
        target = i;
        break;
      }
    }
    if (target == body.size()) break;  // every vertex sits on two supporting lines

    const double area_before = area(body);
    bool applied = false;
    for (int attempt = 0; attempt < 4 && !applied; ++attempt) {
      auto move = abt_move(body, target, pins[target], candidates);
      if (!move) {
        throw std::logic_error("integer-line drive has no admissible move");
      }
      ConvexBody next{std::span<const Vec2>(move->verts)};
      if (area(next) <= area_before + 1e-9 && meets_all_integer_lines(next)) {
        body = std::move(next);
        trace.steps.push_back({move->kind, body, area(body)});
        applied = true;
      } else {
        // a supporting line outside the tested bound stopped mattering first;
        // widen the candidate set and redo the step
        bound *= 2;
        candidates = primitive_candidates(bound);
      }
    }
    if (!applied) {
      throw std::logic_error("integer-line drive could not certify a step");
    }
  }
  return {std::move(body), std::move(trace)};
}

}  // namespace systolic
