#include "systolic/convex_body.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace systolic {

namespace {

bool collinear(Vec2 a, Vec2 b, Vec2 c) {
  const Vec2 ab = b - a;
  const Vec2 bc = c - b;
  const double scale = std::max(1.0, norm(ab) * norm(bc));
  return cross(ab, bc) <= kCollinearTol * scale;
}

}  // namespace

std::vector<Vec2> convex_hull_ccw(std::span<const Vec2> points) {
  std::vector<Vec2> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](Vec2 a, Vec2 b) {
                          return norm(a - b) <= kCollinearTol * (1.0 + norm(a));
                        }),
            pts.end());
  const std::size_t n = pts.size();
  if (n < 3) return pts;

  // Monotone chain; the collinear predicate also drops duplicate-direction
  // runs so no three consecutive hull vertices are collinear.
  std::vector<Vec2> hull(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (k >= 2 && collinear(hull[k - 2], hull[k - 1], pts[i])) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = n - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && collinear(hull[k - 2], hull[k - 1], pts[i])) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

ConvexBody::ConvexBody(std::span<const Vec2> points) {
  verts_ = convex_hull_ccw(points);
  if (verts_.size() < 3) {
    throw std::invalid_argument("convex body needs at least 3 non-collinear vertices");
  }
  const std::size_t n = verts_.size();
  duals_.resize(n);
  circumradius_ = 0.0;
  inradius_ = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 p = verts_[i];
    const Vec2 q = verts_[(i + 1) % n];
    const double c = cross(p, q);
    // For a CCW polygon, cross(v_i, v_{i+1}) > 0 on every edge is exactly the
    // strict origin-interior test.
    if (c <= kCollinearTol * std::max(1.0, norm(p) * norm(q))) {
      throw std::invalid_argument("origin is not strictly inside the convex body");
    }
    duals_[i] = Vec2{q.y - p.y, p.x - q.x} / c;
    circumradius_ = std::max(circumradius_, norm(p));
    inradius_ = std::min(inradius_, 1.0 / norm(duals_[i]));
  }

  symmetric_ = false;
  if (n % 2 == 0) {
    const std::size_t m = n / 2;
    symmetric_ = true;
    for (std::size_t i = 0; i < m; ++i) {
      if (norm(verts_[i] + verts_[i + m]) > kSymmetryTol) {
        symmetric_ = false;
        break;
      }
    }
  }
}

double area(const ConvexBody& k) {
  const auto& v = k.vertices();
  double twice = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    twice += cross(v[i], v[(i + 1) % v.size()]);
  }
  return 0.5 * twice;
}

ConvexBody polar(const ConvexBody& k) {
  return ConvexBody(std::span<const Vec2>(k.edge_duals()));
}

double gauge_value(const ConvexBody& k, Vec2 v) {
  double best = 0.0;
  for (const Vec2 a : k.edge_duals()) best = std::max(best, dot(a, v));
  return best;
}

double support_value(const ConvexBody& k, Vec2 u) {
  double best = -std::numeric_limits<double>::infinity();
  for (const Vec2 p : k.vertices()) best = std::max(best, dot(u, p));
  return best;
}

double mahler_product(const ConvexBody& k) {
  if (!k.symmetric()) {
    throw NotSymmetric("mahler_product requires a centrally symmetric body");
  }
  return area(k) * area(polar(k));
}

bool interior_lattice_trivial(const ConvexBody& k) {
  double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
  for (const Vec2 p : k.vertices()) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  const long ix0 = std::lround(std::ceil(xmin));
  const long ix1 = std::lround(std::floor(xmax));
  const long iy0 = std::lround(std::ceil(ymin));
  const long iy1 = std::lround(std::floor(ymax));
  for (long ix = ix0; ix <= ix1; ++ix) {
    for (long iy = iy0; iy <= iy1; ++iy) {
      if (ix == 0 && iy == 0) continue;
      const Vec2 p{static_cast<double>(ix), static_cast<double>(iy)};
      bool inside = true;
      for (const Vec2 a : k.edge_duals()) {
        if (dot(a, p) >= 1.0 - kInteriorMargin) {
          inside = false;
          break;
        }
      }
      if (inside) return false;
    }
  }
  return true;
}

bool meets_all_integer_lines(const ConvexBody& k) {
  return interior_lattice_trivial(polar(k));
}

namespace {

long lattice_gcd(double dx, double dy) {
  const long a = std::labs(std::lround(dx));
  const long b = std::labs(std::lround(dy));
  return std::gcd(a, b);
}

}  // namespace

double pick_area(std::span<const Vec2> lattice_polygon) {
  std::vector<Vec2> pts;
  pts.reserve(lattice_polygon.size());
  for (const Vec2 p : lattice_polygon) {
    const double rx = std::round(p.x);
    const double ry = std::round(p.y);
    if (std::abs(p.x - rx) > 1e-9 || std::abs(p.y - ry) > 1e-9) {
      throw NotLatticePolygon("vertex is not an integer point");
    }
    pts.push_back({rx, ry});
  }
  std::vector<Vec2> hull = convex_hull_ccw(pts);
  if (hull.size() < 3) throw NotLatticePolygon("degenerate lattice polygon");

  const std::size_t n = hull.size();
  long boundary = 0;
  double xmin = hull[0].x, xmax = hull[0].x, ymin = hull[0].y, ymax = hull[0].y;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 p = hull[i];
    const Vec2 q = hull[(i + 1) % n];
    boundary += lattice_gcd(q.x - p.x, q.y - p.y);
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }

  long interior = 0;
  for (long ix = std::lround(xmin); ix <= std::lround(xmax); ++ix) {
    for (long iy = std::lround(ymin); iy <= std::lround(ymax); ++iy) {
      const Vec2 p{static_cast<double>(ix), static_cast<double>(iy)};
      bool strict = true;
      for (std::size_t i = 0; i < n; ++i) {
        // Integer coordinates keep all cross products integral, so > 0.5 is a
        // safe strict-interior test.
        if (cross(hull[(i + 1) % n] - hull[i], p - hull[i]) < 0.5) {
          strict = false;
          break;
        }
      }
      if (strict) ++interior;
    }
  }
  return static_cast<double>(interior) + 0.5 * static_cast<double>(boundary) - 1.0;
}

double pick_area(const ConvexBody& k) {
  return pick_area(std::span<const Vec2>(k.vertices()));
}

double hausdorff_distance(const ConvexBody& a, const ConvexBody& b) {
  constexpr int kDirections = 720;
  double worst = 0.0;
  for (int i = 0; i < kDirections; ++i) {
    const double t = 2.0 * M_PI * i / kDirections;
    const Vec2 u{std::cos(t), std::sin(t)};
    worst = std::max(worst, std::abs(support_value(a, u) - support_value(b, u)));
  }
  return worst;
}

ConvexBody regular_ngon(int n, double radius, double phase) {
  if (n < 3) throw std::invalid_argument("regular_ngon needs n >= 3");
  std::vector<Vec2> pts(n);
  for (int i = 0; i < n; ++i) {
    const double t = phase + 2.0 * M_PI * i / n;
    pts[i] = {radius * std::cos(t), radius * std::sin(t)};
  }
  return ConvexBody(std::span<const Vec2>(pts));
}

}  // namespace systolic
