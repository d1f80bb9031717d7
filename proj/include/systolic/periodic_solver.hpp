#pragma once

#include <array>
#include <span>
#include <stdexcept>
#include <vector>

#include "systolic/metric_field.hpp"

namespace systolic {

struct PatchTooSmall : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Discretization parameters for the periodic shortest-path graph.
struct GridSpec {
  int resolution = 64;  // grid nodes per unit length; spacing h = 1/resolution
  int stencil = 4;      // edges to primitive offsets (p,q), |p|,|q| <= stencil
  int base_grid = 16;   // base points per side when minimizing over the torus
  double patch_pad = 0.6;    // initial patch padding, in fundamental domains
  double patch_cap = 6.0;    // refuse to grow a patch beyond this many domains
  int threads = 0;           // parallel direction sweeps; <= 0 picks a hardware
                             // default (results are deterministic either way)
};

struct Offset {
  int p, q;
  Vec2 step;  // physical displacement (p*h, q*h)
};

/// Weighted directed graph over the grid h·Z² with Z²-periodic edge weights.
/// Edge (u -> u + step) carries the two-point Gauss quadrature of the field
/// gauge along the segment, so weights of opposite edges differ when the
/// metric is not reversible.  Immutable after construction.
class PeriodicGraph {
 public:
  explicit PeriodicGraph(MetricField field, GridSpec spec = {});

  const MetricField& field() const { return field_; }
  const GridSpec& spec() const { return spec_; }
  double h() const { return h_; }
  const std::vector<Offset>& offsets() const { return offsets_; }

  double weight(long gi, long gj, int offset_index) const {
    const int res = spec_.resolution;
    const int i = static_cast<int>(((gi % res) + res) % res);
    const int j = static_cast<int>(((gj % res) + res) % res);
    return weights_[(static_cast<std::size_t>(j) * res + i) * offsets_.size() + offset_index];
  }

  /// All offset weights of the node (i, j) of the fundamental domain.
  const double* weight_row(int i, int j) const {
    return &weights_[(static_cast<std::size_t>(j) * spec_.resolution + i) * offsets_.size()];
  }

  /// Lower bound on the cost of any path between the two nodes, from the
  /// cheapest-crossing cost of every grid column and row plus the isotropic
  /// speed floor.  Derived from the edge weights themselves, so it never
  /// exceeds a graph distance.
  double path_lower_bound(long gi0, long gj0, long gi1, long gj1) const;

  /// Worst relative overhead of the best stencil decomposition against the
  /// straight chord, sampled over the field.
  double eps_stencil() const { return eps_stencil_; }
  /// Sampled relative metric variation across one stencil reach.
  double eps_variation() const { return eps_variation_; }
  /// Combined relative overestimation bound of graph distances.
  double eps_total() const { return (1 + eps_stencil_) * (1 + eps_variation_) - 1; }
  /// Additive endpoint-rounding allowance for path estimates.
  double additive_slack() const;

  double min_speed() const { return min_speed_; }  // safety-deflated
  double max_speed() const { return max_speed_; }

 private:
  double axis_crossing_sum(const std::vector<double>& prefix, double total, long a,
                           long b) const;

  MetricField field_;
  GridSpec spec_;
  double h_;
  std::vector<Offset> offsets_;
  std::vector<double> weights_;
  // prefix sums of the per-boundary crossing minima, for path lower bounds
  std::vector<double> col_prefix_, row_prefix_;
  double col_total_ = 0.0, row_total_ = 0.0;
  double eps_stencil_ = 0.0;
  double eps_variation_ = 0.0;
  double min_speed_ = 0.0;
  double max_speed_ = 0.0;
};

/// Primitive integer offsets (p,q) with |p|,|q| <= order, sorted by angle.
std::vector<std::array<int, 2>> primitive_offsets(int order);

/// Length of a piecewise linear curve under the field metric (two-point Gauss
/// quadrature per segment; exact for flat fields).
double curve_length(const MetricField& f, std::span<const Vec2> polyline);

struct DistanceResult {
  double value;           // graph path length (overestimates the true distance)
  double relative_error;  // documented overestimation bound
};

/// Point-to-point distance.  Endpoints snap to the nearest grid nodes with
/// explicit correction segments.  Throws PatchTooSmall if no certified patch
/// fits under the configured cap.
DistanceResult distance(const PeriodicGraph& g, Vec2 a, Vec2 b);

struct StableNormValue {
  double value;  // min over the base grid of d(x, x+z); overestimate
  double lower;  // value corrected by the documented error model
  double upper;  // = value
};

/// min over base points x of d(x, x+z) for an integer class z.
StableNormValue stable_norm(const PeriodicGraph& g, std::array<long, 2> z);

struct PeriodicSystole {
  double value;
  std::array<long, 2> homotopy_class;
  double relative_error;
};

PeriodicSystole systole_periodic(const PeriodicGraph& g);

struct StableBallEstimate {
  std::vector<std::array<long, 2>> directions;      // primitive, by angle
  std::vector<StableNormValue> values;              // one per direction
  ConvexBody ball;                                  // hull of z / ||z||
  bool convex_within_bars = true;                   // no point dips inside the
                                                    // hull beyond its error bar
  double max_angular_gap = 0.0;                     // radians between directions
  double rel_bar = 0.0;                             // worst relative error bar
};

/// Samples the stable norm on primitive directions covering the circle
/// (Stern-Brocot levels grown until the requested count is reached) and hulls
/// the normalized points into a unit-ball polygon.
StableBallEstimate stable_unit_ball(const PeriodicGraph& g, int directions);

struct QuadratureResult {
  double value;
  double error_estimate;  // Richardson estimate from a doubled grid
};

QuadratureResult area_bh_field(const MetricField& f, int quad_n);
QuadratureResult area_ht_field(const MetricField& f, int quad_n);

/// Max over sampled point pairs of the quotient distance (min over the nine
/// neighboring translates of the target).
double diameter_estimate(const PeriodicGraph& g, int sample_grid = 8);

}  // namespace systolic
