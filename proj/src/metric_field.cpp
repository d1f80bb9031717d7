#include "systolic/metric_field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace systolic {

namespace {

double angle_02pi(Vec2 v) {
  const double a = std::atan2(v.y, v.x);
  return a < 0 ? a + 2.0 * M_PI : a;
}

}  // namespace

ConvexBody minkowski_combination(std::span<const ConvexBody* const> bodies,
                                 std::span<const double> weights) {
  struct Edge {
    double angle;
    Vec2 vec;
  };
  std::vector<Edge> edges;
  Vec2 start{0.0, 0.0};
  for (std::size_t b = 0; b < bodies.size(); ++b) {
    const double w = weights[b];
    if (w <= 1e-15) continue;
    const auto& verts = bodies[b]->vertices();
    const std::size_t n = verts.size();
    std::size_t low = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (verts[i].y < verts[low].y ||
          (verts[i].y == verts[low].y && verts[i].x < verts[low].x)) {
        low = i;
      }
    }
    start += w * verts[low];
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 e = verts[(i + 1) % n] - verts[i];
      edges.push_back({angle_02pi(e), w * e});
    }
  }
  if (edges.empty()) throw std::invalid_argument("empty Minkowski combination");
  std::sort(edges.begin(), edges.end(),
            [](const Edge& a, const Edge& b) { return a.angle < b.angle; });
  std::vector<Vec2> verts;
  verts.reserve(edges.size());
  Vec2 p = start;
  for (const Edge& e : edges) {
    verts.push_back(p);
    p += e.vec;
  }
  return ConvexBody(std::span<const Vec2>(verts));
}

MetricField MetricField::flat(ConvexBody k) {
  MetricField f;
  f.kind_ = Kind::Flat;
  f.reversible_ = k.symmetric();
  f.min_speed_ = 1.0 / k.circumradius();
  f.max_speed_ = 0.0;
  for (const Vec2 a : k.edge_duals()) f.max_speed_ = std::max(f.max_speed_, norm(a));
  f.bodies_.push_back(std::move(k));
  return f;
}

MetricField MetricField::conformal(Expression fexpr, Lattice2 g0, int disk_vertices) {
  if (disk_vertices < 8 || disk_vertices % 2 != 0) {
    throw std::invalid_argument("conformal disk needs an even vertex count >= 8");
  }
  MetricField f;
  f.kind_ = Kind::Conformal;
  f.reversible_ = true;
  f.factor_ = std::move(fexpr);
  f.lattice_ = g0;
  f.disk_vertices_ = disk_vertices;

  const Vec2 u = g0.u();
  const Vec2 v = g0.v();
  const double det = cross(u, v);
  // inverse of the column-basis matrix [u v]
  f.inv_b_[0] = v.y / det;
  f.inv_b_[1] = -v.x / det;
  f.inv_b_[2] = -u.y / det;
  f.inv_b_[3] = u.x / det;
  f.ngon_apothem_ = std::cos(M_PI / disk_vertices);

  std::vector<Vec2> pts(disk_vertices);
  for (int i = 0; i < disk_vertices; ++i) {
    const double t = 2.0 * M_PI * i / disk_vertices;
    const Vec2 c{std::cos(t), std::sin(t)};
    pts[i] = {f.inv_b_[0] * c.x + f.inv_b_[1] * c.y, f.inv_b_[2] * c.x + f.inv_b_[3] * c.y};
  }
  f.base_body_.emplace(std::span<const Vec2>(pts));
  f.base_polar_area_ = area(polar(*f.base_body_));

  double fmin = std::numeric_limits<double>::infinity();
  double fmax = 0.0;
  const Expression& e = *f.factor_;
  constexpr int kSample = 128;
  for (int i = 0; i < kSample; ++i) {
    for (int j = 0; j < kSample; ++j) {
      const double val = e((i + 0.5) / kSample, (j + 0.5) / kSample);
      fmin = std::min(fmin, val);
      fmax = std::max(fmax, val);
    }
  }
  if (!(fmin > 0.0)) {
    throw std::invalid_argument("conformal factor must be positive on the torus");
  }
  double base_max = 0.0;
  for (const Vec2 a : f.base_body_->edge_duals()) base_max = std::max(base_max, norm(a));
  f.min_speed_ = std::sqrt(fmin) / f.base_body_->circumradius();
  f.max_speed_ = std::sqrt(fmax) * base_max;
  return f;
}

MetricField MetricField::body_grid(int n, std::vector<ConvexBody> bodies) {
  if (n < 1 || bodies.size() != static_cast<std::size_t>(n) * n) {
    throw std::invalid_argument("body_grid needs n*n bodies");
  }
  MetricField f;
  f.kind_ = Kind::BodyGrid;
  f.grid_n_ = n;
  f.reversible_ = true;
  f.min_speed_ = std::numeric_limits<double>::infinity();
  f.max_speed_ = 0.0;
  for (const ConvexBody& b : bodies) {
    f.reversible_ = f.reversible_ && b.symmetric();
    f.min_speed_ = std::min(f.min_speed_, 1.0 / b.circumradius());
    for (const Vec2 a : b.edge_duals()) f.max_speed_ = std::max(f.max_speed_, norm(a));
  }
  f.bodies_ = std::move(bodies);

  f.cells_.resize(static_cast<std::size_t>(n) * n);
  for (int cj = 0; cj < n; ++cj) {
    for (int ci = 0; ci < n; ++ci) {
      CellCache& cell = f.cells_[static_cast<std::size_t>(cj) * n + ci];
      const ConvexBody* corner[4] = {
          &f.bodies_[static_cast<std::size_t>(cj) * n + ci],
          &f.bodies_[static_cast<std::size_t>(cj) * n + (ci + 1) % n],
          &f.bodies_[static_cast<std::size_t>((cj + 1) % n) * n + ci],
          &f.bodies_[static_cast<std::size_t>((cj + 1) % n) * n + (ci + 1) % n],
      };
      for (const ConvexBody* b : corner) {
        for (const Vec2 a : b->edge_duals()) {
          cell.dirs.push_back(a / norm(a));
        }
      }
      // drop near-duplicate directions
      std::sort(cell.dirs.begin(), cell.dirs.end(), [](Vec2 a, Vec2 b) {
        return angle_02pi(a) < angle_02pi(b);
      });
      cell.dirs.erase(std::unique(cell.dirs.begin(), cell.dirs.end(),
                                  [](Vec2 a, Vec2 b) { return norm(a - b) < 1e-12; }),
                      cell.dirs.end());
      cell.h.resize(cell.dirs.size());
      for (std::size_t d = 0; d < cell.dirs.size(); ++d) {
        for (int c = 0; c < 4; ++c) {
          cell.h[d][c] = support_value(*corner[c], cell.dirs[d]);
        }
      }
    }
  }
  return f;
}

double MetricField::conformal_scale(Vec2 x) const {
  const Vec2 w = wrap01(x);
  return std::sqrt((*factor_)(w.x, w.y));
}

ConvexBody MetricField::body_at(Vec2 x) const {
  switch (kind_) {
    case Kind::Flat:
      return bodies_[0];
    case Kind::Conformal: {
      const double s = 1.0 / conformal_scale(x);
      std::vector<Vec2> pts;
      pts.reserve(base_body_->size());
      for (const Vec2 p : base_body_->vertices()) pts.push_back(s * p);
      return ConvexBody(std::span<const Vec2>(pts));
    }
    case Kind::BodyGrid: {
      const Vec2 w = wrap01(x);
      const double gx = w.x * grid_n_;
      const double gy = w.y * grid_n_;
      const int ci = std::min(static_cast<int>(gx), grid_n_ - 1);
      const int cj = std::min(static_cast<int>(gy), grid_n_ - 1);
      const double fx = gx - ci;
      const double fy = gy - cj;
      const ConvexBody* corner[4] = {
          &bodies_[static_cast<std::size_t>(cj) * grid_n_ + ci],
          &bodies_[static_cast<std::size_t>(cj) * grid_n_ + (ci + 1) % grid_n_],
          &bodies_[static_cast<std::size_t>((cj + 1) % grid_n_) * grid_n_ + ci],
          &bodies_[static_cast<std::size_t>((cj + 1) % grid_n_) * grid_n_ + (ci + 1) % grid_n_],
      };
      const double weights[4] = {(1 - fx) * (1 - fy), fx * (1 - fy), (1 - fx) * fy, fx * fy};
      return minkowski_combination(std::span<const ConvexBody* const>(corner, 4),
                                   std::span<const double>(weights, 4));
    }
  }
  throw std::logic_error("unreachable");
}

double MetricField::gauge_at(Vec2 x, Vec2 v) const {
  switch (kind_) {
    case Kind::Flat:
      return gauge_value(bodies_[0], v);
    case Kind::Conformal: {
      // gauge of the inscribed regular n-gon evaluated at B v, scaled by sqrt(f)
      const Vec2 w = v.x * lattice_->u() + v.y * lattice_->v();
      const double r = norm(w);
      if (r == 0.0) return 0.0;
      const double n = disk_vertices_;
      const double theta = std::atan2(w.y, w.x);
      const double stepang = 2.0 * M_PI / n;
      const double k = std::round((theta - 0.5 * stepang) / stepang);
      const double phi = theta - (0.5 * stepang + k * stepang);
      return conformal_scale(x) * r * std::cos(phi) / ngon_apothem_;
    }
    case Kind::BodyGrid: {
      const Vec2 w = wrap01(x);
      const double gx = w.x * grid_n_;
      const double gy = w.y * grid_n_;
      const int ci = std::min(static_cast<int>(gx), grid_n_ - 1);
      const int cj = std::min(static_cast<int>(gy), grid_n_ - 1);
      const double fx = gx - ci;
      const double fy = gy - cj;
      const double lam[4] = {(1 - fx) * (1 - fy), fx * (1 - fy), (1 - fx) * fy, fx * fy};
      const CellCache& cell = cells_[static_cast<std::size_t>(cj) * grid_n_ + ci];
      double best = 0.0;
      for (std::size_t d = 0; d < cell.dirs.size(); ++d) {
        const double num = dot(cell.dirs[d], v);
        if (num <= 0.0) continue;
        const double h = lam[0] * cell.h[d][0] + lam[1] * cell.h[d][1] +
                         lam[2] * cell.h[d][2] + lam[3] * cell.h[d][3];
        best = std::max(best, num / h);
      }
      return best;
    }
  }
  throw std::logic_error("unreachable");
}

double MetricField::bh_integrand(Vec2 x) const {
  switch (kind_) {
    case Kind::Flat:
      return M_PI / area(bodies_[0]);
    case Kind::Conformal: {
      const double s = conformal_scale(x);
      return M_PI * s * s / area(*base_body_);
    }
    case Kind::BodyGrid:
      return M_PI / area(body_at(x));
  }
  throw std::logic_error("unreachable");
}

double MetricField::ht_integrand(Vec2 x) const {
  switch (kind_) {
    case Kind::Flat:
      return area(polar(bodies_[0])) / M_PI;
    case Kind::Conformal: {
      // polar of a shrunk body grows by the same factor
      const double s = conformal_scale(x);
      return s * s * base_polar_area_ / M_PI;
    }
    case Kind::BodyGrid:
      return area(polar(body_at(x))) / M_PI;
  }
  throw std::logic_error("unreachable");
}

}  // namespace systolic
