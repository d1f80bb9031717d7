#include "systolic/periodic_solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>
#include <optional>
#include <queue>
#include <thread>

namespace systolic {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// two-point Gauss nodes on [0,1]
constexpr double kGaussA = 0.21132486540518713;
constexpr double kGaussB = 0.7886751345948129;

double angle_of(double y, double x) {
  const double a = std::atan2(y, x);
  return a < 0 ? a + 2.0 * M_PI : a;
}

struct Patch {
  long i0, j0, i1, j1;  // inclusive node bounds

  long nx() const { return i1 - i0 + 1; }
  long ny() const { return j1 - j0 + 1; }
  std::size_t size() const { return static_cast<std::size_t>(nx()) * ny(); }
  bool contains(long gi, long gj) const {
    return gi >= i0 && gi <= i1 && gj >= j0 && gj <= j1;
  }
  std::size_t idx(long gi, long gj) const {
    return static_cast<std::size_t>(gj - j0) * nx() + (gi - i0);
  }
};

struct Node {
  long gi, gj;
};

// Bounded solves may abandon once no path can undercut the incumbent by more
// than this relative slack; it is folded into the reported error bars.
constexpr double kBoundSlack = 1e-3;

/// Reusable shortest-path workspace over one patch of the periodic graph.
/// Target runs are goal-directed: the queue is keyed by d + rho*|n - target|,
/// which is admissible because every edge costs at least rho times its
/// Euclidean length.
class Engine {
 public:
  explicit Engine(const PeriodicGraph& g) : g_(g) {}

  struct Outcome {
    double dist = kInf;  // settled patch distance of the target
    double lb = 0.0;     // certified lower bound over the infinite graph
  };

  // Sharpens the goal heuristic of a run using the exhaustive sweep of another
  // engine from a fixed landmark node: d(n -> t) >= d(L -> t) - d(L -> n).
  struct LandmarkQuery {
    const Engine* landmark;
    const Patch* patch;
    double target_dist;
  };

  // Single-target run with early exit and an abandonment bound.
  Outcome run(const Patch& patch, Node src, Node tgt, double bound,
              const LandmarkQuery* lq = nullptr) {
    return run_impl(patch, src, &tgt, bound, nullptr, nullptr, lq);
  }

  // Exhaustive sweep; afterwards dist_at() is valid everywhere in the patch.
  void run_exhaust(const Patch& patch, Node src) {
    run_impl(patch, src, nullptr, kInf, nullptr, nullptr, nullptr);
  }

  // Target-group run: `groups` assigns every patch node a 1-based group id (0
  // for none); the first settled node of each group records the group's
  // distance, and the run stops once all groups are resolved.  Returns a
  // lower bound on the cost of any path not fully explored.
  double run_groups(const Patch& patch, Node src, const std::vector<std::uint32_t>& groups,
                    std::size_t n_groups, std::vector<double>& group_dist) {
    group_dist.assign(n_groups, kInf);
    const Outcome o = run_impl(patch, src, nullptr, kInf, &groups, &group_dist, nullptr);
    return o.lb;
  }

  double dist_at(const Patch& patch, long gi, long gj) const {
    const std::size_t id = patch.idx(gi, gj);
    return stamp_[id] == stamp_now_ ? dist_[id] : kInf;
  }

 private:
  Outcome run_impl(const Patch& patch, Node src, const Node* tgt, double bound,
                   const std::vector<std::uint32_t>* groups,
                   std::vector<double>* group_dist, const LandmarkQuery* lq) {
    const auto& offsets = g_.offsets();
    const int noff = static_cast<int>(offsets.size());
    const int res = g_.spec().resolution;
    const int s = g_.spec().stencil;

    if (dist_.size() < patch.size()) {
      dist_.resize(patch.size());
      stamp_.resize(patch.size(), 0);
    }
    ++stamp_now_;
    heap_ = {};

    // Valid for any path in the infinite graph; used for boundary certificates.
    const auto global_lb = [&](long gi, long gj) {
      return tgt ? g_.path_lower_bound(gi, gj, tgt->gi, tgt->gj) : 0.0;
    };
    // Queue ordering may additionally use the landmark sweep, which bounds
    // patch-internal paths only.
    const auto heuristic = [&](long gi, long gj) {
      if (!tgt) return 0.0;
      double h = global_lb(gi, gj);
      if (lq) {
        h = std::max(h, lq->target_dist - lq->landmark->dist_at(*lq->patch, gi, gj));
      }
      return h;
    };
    const auto in_band = [&](long gi, long gj) {
      return gi - patch.i0 < s || patch.i1 - gi < s || gj - patch.j0 < s ||
             patch.j1 - gj < s;
    };
    const auto set_dist = [&](std::size_t id, double d) {
      dist_[id] = d;
      stamp_[id] = stamp_now_;
    };
    const auto get_dist = [&](std::size_t id) {
      return stamp_[id] == stamp_now_ ? dist_[id] : kInf;
    };

    const std::size_t src_id = patch.idx(src.gi, src.gj);
    set_dist(src_id, 0.0);
    heap_.push({heuristic(src.gi, src.gj), src_id});
    double band_min = kInf;  // min over settled band nodes of d + lower bound to go
    std::size_t groups_left = group_dist ? group_dist->size() : 0;

    const std::size_t tgt_id = tgt ? patch.idx(tgt->gi, tgt->gj) : SIZE_MAX;
    const long nx = patch.nx();

    while (!heap_.empty()) {
      const auto [f, id] = heap_.top();
      heap_.pop();
      const long gi = patch.i0 + static_cast<long>(id % nx);
      const long gj = patch.j0 + static_cast<long>(id / nx);
      const double d = get_dist(id);
      if (f > d + heuristic(gi, gj) + 1e-15) continue;  // stale entry
      if (f > bound && band_min > bound) {
        return {kInf, std::min(f, band_min)};
      }
      if (tgt && id == tgt_id) {
        return {d, std::min(d, band_min)};
      }
      if (groups && (*groups)[id] != 0) {
        double& slot = (*group_dist)[(*groups)[id] - 1];
        if (slot == kInf) {
          slot = d;  // first settle wins the group minimum
          if (--groups_left == 0) return {d, std::min(band_min, d)};
        }
      }
      if (in_band(gi, gj)) {
        band_min = std::min(band_min, d + global_lb(gi, gj));
      }
      const int mi = static_cast<int>(((gi % res) + res) % res);
      const int mj = static_cast<int>(((gj % res) + res) % res);
      const double* w = g_.weight_row(mi, mj);
      for (int k = 0; k < noff; ++k) {
        const long ni = gi + offsets[k].p;
        const long nj = gj + offsets[k].q;
        if (!patch.contains(ni, nj)) continue;
        const double nd = d + w[k];
        const std::size_t nid = patch.idx(ni, nj);
        if (nd < get_dist(nid) - 1e-15) {
          set_dist(nid, nd);
          heap_.push({nd + heuristic(ni, nj), nid});
        }
      }
    }
    return {kInf, band_min};
  }

  const PeriodicGraph& g_;
  std::vector<double> dist_;
  std::vector<std::uint32_t> stamp_;
  std::uint32_t stamp_now_ = 0;
  std::priority_queue<std::pair<double, std::size_t>,
                      std::vector<std::pair<double, std::size_t>>, std::greater<>>
      heap_;
};

Patch padded_patch(Node a, Node b, int resolution, double pad) {
  const long padn = static_cast<long>(std::ceil(pad * resolution));
  return Patch{std::min(a.gi, b.gi) - padn, std::min(a.gj, b.gj) - padn,
               std::max(a.gi, b.gi) + padn, std::max(a.gj, b.gj) + padn};
}

// Certified point-to-point solve with patch auto-expansion.
double certified_solve(const PeriodicGraph& g, Engine& engine, Node src, Node tgt,
                       double bound, bool* above_bound) {
  double pad = g.spec().patch_pad;
  while (true) {
    const Patch patch = padded_patch(src, tgt, g.spec().resolution, pad);
    const auto out = engine.run(patch, src, tgt, bound);
    if (above_bound) *above_bound = false;
    if (out.dist <= out.lb + 1e-12) return out.dist;  // settled and certified
    if (out.dist == kInf && out.lb > bound) {
      if (above_bound) *above_bound = true;
      return kInf;  // certified: no path beats the bound
    }
    pad *= 1.6;
    if (pad > g.spec().patch_cap) {
      throw PatchTooSmall("shortest-path patch exceeded its size cap");
    }
  }
}

}  // namespace

std::vector<std::array<int, 2>> primitive_offsets(int order) {
  std::vector<std::array<int, 2>> out;
  for (int p = -order; p <= order; ++p) {
    for (int q = -order; q <= order; ++q) {
      if (p == 0 && q == 0) continue;
      if (std::gcd(std::abs(p), std::abs(q)) != 1) continue;
      out.push_back({p, q});
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return angle_of(a[1], a[0]) < angle_of(b[1], b[0]);
  });
  return out;
}

PeriodicGraph::PeriodicGraph(MetricField field, GridSpec spec)
    : field_(std::move(field)), spec_(spec) {
  if (spec_.resolution < 8) throw std::invalid_argument("resolution too coarse");
  if (spec_.stencil < 1) throw std::invalid_argument("stencil order must be >= 1");
  h_ = 1.0 / spec_.resolution;

  for (const auto& [p, q] : primitive_offsets(spec_.stencil)) {
    offsets_.push_back({p, q, Vec2{p * h_, q * h_}});
  }

  const int res = spec_.resolution;
  weights_.resize(static_cast<std::size_t>(res) * res * offsets_.size());
  for (int j = 0; j < res; ++j) {
    for (int i = 0; i < res; ++i) {
      const Vec2 x{i * h_, j * h_};
      double* w = &weights_[(static_cast<std::size_t>(j) * res + i) * offsets_.size()];
      for (std::size_t k = 0; k < offsets_.size(); ++k) {
        const Vec2 d = offsets_[k].step;
        w[k] = 0.5 * (field_.gauge_at(x + kGaussA * d, d) +
                      field_.gauge_at(x + kGaussB * d, d));
      }
    }
  }

  // Stencil anisotropy: worst relative cost of routing a unit direction
  // through the two bracketing stencil offsets instead of straight.
  const bool uniform_shape = field_.kind() != MetricField::Kind::BodyGrid;
  const int shape_samples = uniform_shape ? 1 : 8;
  std::vector<double> offset_angles;
  for (const auto& o : offsets_) offset_angles.push_back(angle_of(o.step.y, o.step.x));
  eps_stencil_ = 0.0;
  for (int sj = 0; sj < shape_samples; ++sj) {
    for (int si = 0; si < shape_samples; ++si) {
      const Vec2 x{(si + 0.25) / shape_samples, (sj + 0.25) / shape_samples};
      std::vector<Vec2> probes;
      for (int t = 0; t < 720; ++t) {
        const double a = 2.0 * M_PI * t / 720;
        probes.push_back({std::cos(a), std::sin(a)});
      }
      for (const Vec2 v : field_.body_at(x).vertices()) probes.push_back(v / norm(v));
      for (const Vec2 v : probes) {
        const double av = angle_of(v.y, v.x);
        auto it = std::upper_bound(offset_angles.begin(), offset_angles.end(), av);
        const std::size_t hi = it == offset_angles.end() ? 0 : it - offset_angles.begin();
        const std::size_t lo = (hi + offsets_.size() - 1) % offsets_.size();
        const Vec2 u1 = offsets_[lo].step;
        const Vec2 u2 = offsets_[hi].step;
        const double den = cross(u1, u2);
        if (std::abs(den) < 1e-15) continue;
        const double a1 = cross(v, u2) / den;
        const double a2 = cross(u1, v) / den;
        if (a1 < -1e-12 || a2 < -1e-12) continue;
        const double direct = field_.gauge_at(x, v);
        const double routed = a1 * field_.gauge_at(x, u1) + a2 * field_.gauge_at(x, u2);
        if (direct > 0) eps_stencil_ = std::max(eps_stencil_, routed / direct - 1.0);
      }
    }
  }

  // Sampled modulus of continuity across one stencil reach.
  eps_variation_ = 0.0;
  if (field_.kind() != MetricField::Kind::Flat) {
    const int vs = 16;
    const double reach = spec_.stencil * h_;
    for (int sj = 0; sj < vs; ++sj) {
      for (int si = 0; si < vs; ++si) {
        const Vec2 x{static_cast<double>(si) / vs, static_cast<double>(sj) / vs};
        for (const Vec2 d : {Vec2{reach, 0}, Vec2{0, reach}, Vec2{reach, reach}}) {
          for (int t = 0; t < 8; ++t) {
            const double a = 2.0 * M_PI * t / 8;
            const Vec2 v{std::cos(a), std::sin(a)};
            const double g0 = field_.gauge_at(x, v);
            const double g1 = field_.gauge_at(x + d, v);
            eps_variation_ = std::max(eps_variation_, std::abs(g1 / g0 - 1.0));
          }
        }
      }
    }
  }

  min_speed_ = 0.95 * field_.min_speed();
  max_speed_ = 1.05 * field_.max_speed();

  // Cheapest cost of crossing each column boundary (between columns b and
  // b+1) and each row boundary, pro-rated over multi-column edges.
  std::vector<double> col_min(res, kInf);
  std::vector<double> row_min(res, kInf);
  const auto wrap = [res](long v) { return static_cast<int>(((v % res) + res) % res); };
  for (int j = 0; j < res; ++j) {
    for (int i = 0; i < res; ++i) {
      const double* w = weight_row(i, j);
      for (std::size_t k = 0; k < offsets_.size(); ++k) {
        const int p = offsets_[k].p;
        const int q = offsets_[k].q;
        if (p != 0) {
          const double share = w[k] / std::abs(p);
          for (int step = 0; step < std::abs(p); ++step) {
            const int b = wrap(p > 0 ? i + step : i - 1 - step);
            col_min[b] = std::min(col_min[b], share);
          }
        }
        if (q != 0) {
          const double share = w[k] / std::abs(q);
          for (int step = 0; step < std::abs(q); ++step) {
            const int b = wrap(q > 0 ? j + step : j - 1 - step);
            row_min[b] = std::min(row_min[b], share);
          }
        }
      }
    }
  }
  col_prefix_.assign(res + 1, 0.0);
  row_prefix_.assign(res + 1, 0.0);
  for (int b = 0; b < res; ++b) {
    col_prefix_[b + 1] = col_prefix_[b] + col_min[b];
    row_prefix_[b + 1] = row_prefix_[b] + row_min[b];
  }
  col_total_ = col_prefix_[res];
  row_total_ = row_prefix_[res];
}

double PeriodicGraph::axis_crossing_sum(const std::vector<double>& prefix, double total,
                                        long a, long b) const {
  if (a > b) std::swap(a, b);
  const long res = spec_.resolution;
  const long count = b - a;
  const long full = count / res;
  const long rem = count % res;
  const long start = ((a % res) + res) % res;
  double partial;
  if (start + rem <= res) {
    partial = prefix[start + rem] - prefix[start];
  } else {
    partial = (total - prefix[start]) + prefix[start + rem - res];
  }
  return static_cast<double>(full) * total + partial;
}

double PeriodicGraph::path_lower_bound(long gi0, long gj0, long gi1, long gj1) const {
  const double dx = (gi1 - gi0) * h_;
  const double dy = (gj1 - gj0) * h_;
  const double isotropic = min_speed_ * std::sqrt(dx * dx + dy * dy);
  const double cols = axis_crossing_sum(col_prefix_, col_total_, gi0, gi1);
  const double rows = axis_crossing_sum(row_prefix_, row_total_, gj0, gj1);
  return std::max({isotropic, cols, rows});
}

double PeriodicGraph::additive_slack() const {
  // endpoint rounding of stencil paths plus the post-refinement base grid
  return max_speed_ * h_ * (spec_.stencil + 1.5);
}

double curve_length(const MetricField& f, std::span<const Vec2> polyline) {
  if (polyline.size() < 2) throw std::invalid_argument("polyline needs >= 2 points");
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < polyline.size(); ++i) {
    const Vec2 a = polyline[i];
    const Vec2 d = polyline[i + 1] - a;
    total += 0.5 * (f.gauge_at(a + kGaussA * d, d) + f.gauge_at(a + kGaussB * d, d));
  }
  return total;
}

DistanceResult distance(const PeriodicGraph& g, Vec2 a, Vec2 b) {
  const int res = g.spec().resolution;
  const Node na{std::lround(a.x * res), std::lround(a.y * res)};
  const Node nb{std::lround(b.x * res), std::lround(b.y * res)};
  const Vec2 pa{na.gi * g.h(), na.gj * g.h()};
  const Vec2 pb{nb.gi * g.h(), nb.gj * g.h()};

  double correction = 0.0;
  if (norm(a - pa) > 0) correction += curve_length(g.field(), std::array{a, pa});
  if (norm(b - pb) > 0) correction += curve_length(g.field(), std::array{pb, b});

  Engine engine(g);
  double core = 0.0;
  if (!(na.gi == nb.gi && na.gj == nb.gj)) {
    core = certified_solve(g, engine, na, nb, kInf, nullptr);
  }
  return {core + correction, g.eps_total()};
}

namespace {

struct BaseSource {
  Node node;
  Vec2 pos;
};

// Deterministic coarse-to-fine ordering of the base grid sources.
std::vector<BaseSource> base_sources(const PeriodicGraph& g) {
  const int res = g.spec().resolution;
  const int bg = g.spec().base_grid;
  std::vector<std::pair<int, BaseSource>> ranked;
  for (int b = 0; b < bg; ++b) {
    for (int a = 0; a < bg; ++a) {
      const Node n{std::lround(a * static_cast<double>(res) / bg),
                   std::lround(b * static_cast<double>(res) / bg)};
      const int rank = (a % 4 == 0 && b % 4 == 0) ? 0 : (a % 2 == 0 && b % 2 == 0) ? 1 : 2;
      ranked.push_back({rank, {n, Vec2{n.gi * g.h(), n.gj * g.h()}}});
    }
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<BaseSource> out;
  out.reserve(ranked.size());
  for (auto& r : ranked) out.push_back(r.second);
  return out;
}

// Max single axis-step weight: an exact graph-Lipschitz constant for moving a
// base point by one node.
double axis_step_bound(const PeriodicGraph& g) {
  const auto& offs = g.offsets();
  double worst = 0.0;
  const int res = g.spec().resolution;
  for (std::size_t k = 0; k < offs.size(); ++k) {
    if (std::abs(offs[k].p) + std::abs(offs[k].q) != 1) continue;
    for (int j = 0; j < res; ++j) {
      for (int i = 0; i < res; ++i) {
        worst = std::max(worst, g.weight(i, j, static_cast<int>(k)));
      }
    }
  }
  return worst;
}

struct MinResult {
  double value = kInf;
  Node arg{0, 0};
};

// min over base sources (plus a local refinement around the argmin) of the
// graph distance d(x, x + z).  All solves share one patch and are steered by a
// landmark sweep from a node sitting one class-translate behind the domain,
// which makes proving "this source cannot beat the incumbent" nearly free.
MinResult min_over_base(const PeriodicGraph& g, std::array<long, 2> z,
                        double initial_bound) {
  const int res = g.spec().resolution;
  const long zi = z[0] * res;
  const long zj = z[1] * res;
  const double step_cost = axis_step_bound(g);

  double pad = g.spec().patch_pad;
  while (true) {
    const long padn = static_cast<long>(std::ceil(pad * res));
    const Node landmark{res / 2 - zi, res / 2 - zj};
    const Patch patch{std::min({0L, zi, landmark.gi}) - padn,
                      std::min({0L, zj, landmark.gj}) - padn,
                      std::max({static_cast<long>(res), zi + res, landmark.gi}) + padn,
                      std::max({static_cast<long>(res), zj + res, landmark.gj}) + padn};

    Engine lm_engine(g);
    lm_engine.run_exhaust(patch, landmark);
    Engine engine(g);

    std::vector<std::pair<Node, double>> evaluated;
    MinResult best;
    double incumbent = initial_bound;
    bool patch_ok = true;

    const auto try_source = [&](Node s) {
      if (!patch_ok) return;
      const double lip_gap = [&] {
        double lb = 0.0;
        for (const auto& [n, val] : evaluated) {
          const double l1 =
              static_cast<double>(std::labs(n.gi - s.gi) + std::labs(n.gj - s.gj));
          lb = std::max(lb, val - 2.0 * l1 * step_cost);
        }
        return lb;
      }();
      if (lip_gap >= incumbent) return;
      const Node t{s.gi + zi, s.gj + zj};
      const Engine::LandmarkQuery lq{&lm_engine, &patch,
                                     lm_engine.dist_at(patch, t.gi, t.gj)};
      const double bound = incumbent * (1.0 - kBoundSlack);
      const auto out = engine.run(patch, s, t, bound, &lq);
      if (out.dist <= out.lb + 1e-12) {
        evaluated.push_back({s, out.dist});
        if (out.dist < incumbent) {
          incumbent = out.dist;
          best.value = out.dist;
          best.arg = s;
        }
      } else if (!(out.dist == kInf && out.lb > bound)) {
        patch_ok = false;  // neither settled-and-certified nor certified-above
      }
    };

    for (const BaseSource& s : base_sources(g)) try_source(s.node);

    // local refinement toward single-node resolution around the argmin
    if (patch_ok && best.value < kInf) {
      long stride =
          std::max(1L, std::lround(static_cast<double>(res) / g.spec().base_grid));
      while (stride > 1) {
        stride /= 2;
        const Node c = best.arg;
        for (long dj = -1; dj <= 1; ++dj) {
          for (long di = -1; di <= 1; ++di) {
            if (di == 0 && dj == 0) continue;
            try_source(Node{c.gi + di * stride, c.gj + dj * stride});
          }
        }
      }
    }
    if (patch_ok) {
      if (best.value == kInf) best.value = incumbent;  // nothing beat the bound
      return best;
    }
    pad *= 1.6;
    if (pad > g.spec().patch_cap) {
      throw PatchTooSmall("base-point sweep patch exceeded its size cap");
    }
  }
}

StableNormValue bars_from(const PeriodicGraph& g, double value) {
  const double rel = g.eps_total() + kBoundSlack;
  const double add = g.additive_slack();
  StableNormValue out;
  out.value = value;
  out.upper = value;
  out.lower = std::max(0.0, value / (1.0 + rel) - add);
  return out;
}

}  // namespace

StableNormValue stable_norm(const PeriodicGraph& g, std::array<long, 2> z) {
  if (z[0] == 0 && z[1] == 0) throw std::invalid_argument("stable norm needs z != 0");
  const MinResult r = min_over_base(g, z, kInf);
  return bars_from(g, r.value);
}

PeriodicSystole systole_periodic(const PeriodicGraph& g) {
  double best = kInf;
  std::array<long, 2> arg{1, 0};

  const auto consider = [&](std::array<long, 2> z) {
    const double lb = g.min_speed() * std::hypot(static_cast<double>(z[0]),
                                                 static_cast<double>(z[1]));
    if (lb >= best) return;
    const MinResult r = min_over_base(g, z, best);
    if (r.value < best) {
      best = r.value;
      arg = z;
    }
  };

  for (const std::array<long, 2> z :
       {std::array<long, 2>{1, 0}, {0, 1}, {-1, 0}, {0, -1}}) {
    consider(z);
  }
  const long cap = static_cast<long>(std::ceil(best / g.min_speed())) + 1;
  std::vector<std::array<long, 2>> zs;
  for (long p = -cap; p <= cap; ++p) {
    for (long q = -cap; q <= cap; ++q) {
      if ((p == 0 && q == 0) || std::gcd(std::labs(p), std::labs(q)) != 1) continue;
      if (std::labs(p) + std::labs(q) == 1) continue;  // already done
      zs.push_back({p, q});
    }
  }
  std::sort(zs.begin(), zs.end(), [](const auto& a, const auto& b) {
    const long na = a[0] * a[0] + a[1] * a[1];
    const long nb = b[0] * b[0] + b[1] * b[1];
    return na != nb ? na < nb : a < b;
  });
  for (const auto& z : zs) consider(z);

  return {best, arg, g.eps_total()};
}

StableBallEstimate stable_unit_ball(const PeriodicGraph& g, int directions) {
  if (directions < 8) throw std::invalid_argument("need at least 8 directions");
  int order = 1;
  std::vector<std::array<int, 2>> dirs = primitive_offsets(order);
  while (static_cast<int>(dirs.size()) < directions) {
    dirs = primitive_offsets(++order);
  }

  std::vector<std::array<long, 2>> zdirs;
  zdirs.reserve(dirs.size());
  for (const auto& d : dirs) zdirs.push_back({d[0], d[1]});
  std::vector<StableNormValue> values(zdirs.size());

  const int threads =
      g.spec().threads > 0
          ? g.spec().threads
          : std::max(1, static_cast<int>(std::min(8u, std::thread::hardware_concurrency())));
  if (threads == 1) {
    for (std::size_t i = 0; i < zdirs.size(); ++i) {
      values[i] = stable_norm(g, zdirs[i]);
    }
  } else {
    std::vector<std::future<void>> tasks;
    std::atomic<std::size_t> next{0};
    for (int t = 0; t < threads; ++t) {
      tasks.push_back(std::async(std::launch::async, [&] {
        while (true) {
          const std::size_t i = next.fetch_add(1);
          if (i >= zdirs.size()) return;
          values[i] = stable_norm(g, zdirs[i]);
        }
      }));
    }
    for (auto& t : tasks) t.get();
  }

  std::vector<Vec2> pts;
  pts.reserve(dirs.size());
  for (std::size_t i = 0; i < zdirs.size(); ++i) {
    const Vec2 z{static_cast<double>(zdirs[i][0]), static_cast<double>(zdirs[i][1])};
    pts.push_back(z / values[i].value);
  }
  StableBallEstimate est{std::move(zdirs), std::move(values),
                         ConvexBody(std::span<const Vec2>(pts))};

  est.rel_bar = 0.0;
  for (const auto& v : est.values) {
    est.rel_bar = std::max(est.rel_bar, (v.value - v.lower) / v.value);
  }
  est.convex_within_bars = true;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double inside_by = 1.0 - gauge_value(est.ball, pts[i]);
    const double bar = (est.values[i].value - est.values[i].lower) / est.values[i].value;
    if (inside_by > bar + 1e-9) est.convex_within_bars = false;
  }

  est.max_angular_gap = 0.0;
  for (std::size_t i = 0; i < est.directions.size(); ++i) {
    const auto& a = est.directions[i];
    const auto& b = est.directions[(i + 1) % est.directions.size()];
    double gap = angle_of(static_cast<double>(b[1]), static_cast<double>(b[0])) -
                 angle_of(static_cast<double>(a[1]), static_cast<double>(a[0]));
    if (gap < 0) gap += 2.0 * M_PI;
    est.max_angular_gap = std::max(est.max_angular_gap, gap);
  }
  return est;
}

namespace {

double midpoint_quadrature(const MetricField& f, int n, bool bh) {
  double sum = 0.0;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const Vec2 x{(i + 0.5) / n, (j + 0.5) / n};
      sum += bh ? f.bh_integrand(x) : f.ht_integrand(x);
    }
  }
  return sum / (static_cast<double>(n) * n);
}

QuadratureResult quadrature(const MetricField& f, int quad_n, bool bh) {
  if (quad_n < 8) throw std::invalid_argument("quadrature grid must be >= 8");
  const double coarse = midpoint_quadrature(f, quad_n, bh);
  const double fine = midpoint_quadrature(f, 2 * quad_n, bh);
  return {coarse, (4.0 / 3.0) * std::abs(fine - coarse) + 1e-15 * std::abs(coarse)};
}

}  // namespace

QuadratureResult area_bh_field(const MetricField& f, int quad_n) {
  return quadrature(f, quad_n, true);
}

QuadratureResult area_ht_field(const MetricField& f, int quad_n) {
  return quadrature(f, quad_n, false);
}

double diameter_estimate(const PeriodicGraph& g, int sample_grid) {
  const int res = g.spec().resolution;
  const long stride = std::max(1L, static_cast<long>(res / sample_grid));
  Engine engine(g);

  double pad = 0.35;
  while (true) {
    const Patch patch{static_cast<long>(-res - std::lround(pad * res)),
                      static_cast<long>(-res - std::lround(pad * res)),
                      static_cast<long>(2 * res + std::lround(pad * res)),
                      static_cast<long>(2 * res + std::lround(pad * res))};
    // quotient distance to target (ta, tb) = first settle among its 9 translates
    std::vector<std::uint32_t> groups(patch.size(), 0);
    const std::size_t n_groups = static_cast<std::size_t>(sample_grid) * sample_grid;
    for (int tb = 0; tb < sample_grid; ++tb) {
      for (int ta = 0; ta < sample_grid; ++ta) {
        const std::uint32_t gid = static_cast<std::uint32_t>(tb * sample_grid + ta) + 1;
        for (long zj = -1; zj <= 1; ++zj) {
          for (long zi = -1; zi <= 1; ++zi) {
            groups[patch.idx(ta * stride + zi * res, tb * stride + zj * res)] = gid;
          }
        }
      }
    }
    double diam = 0.0;
    double explored_lb = kInf;
    std::vector<double> group_dist;
    for (int b = 0; b < sample_grid; ++b) {
      for (int a = 0; a < sample_grid; ++a) {
        const Node src{a * stride, b * stride};
        explored_lb = std::min(explored_lb,
                               engine.run_groups(patch, src, groups, n_groups, group_dist));
        for (const double qd : group_dist) diam = std::max(diam, qd);
      }
    }
    if (diam <= explored_lb) return diam;
    pad *= 2.0;
    if (pad > g.spec().patch_cap) {
      throw PatchTooSmall("diameter patch exceeded its size cap");
    }
  }
}

}  // namespace systolic
