#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "systolic/flat_torus.hpp"
#include "systolic/lattice.hpp"
#include "systolic/metric_field.hpp"
#include "systolic/periodic_solver.hpp"

namespace systolic {

/// One machine-checked inequality instance.  All inequalities are oriented so
/// that pass means lhs >= rhs - tolerance; margin = lhs - rhs.
struct TheoremCheck {
  std::string theorem_id;
  std::string input_desc;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string provenance;
};

TheoremCheck make_check(std::string id, std::string desc, double lhs, double rhs,
                        double tolerance, std::string provenance);

/// Hull of points sampled on an annulus, optionally symmetrized by the union
/// with its negation; exercises both skinny and round bodies.
ConvexBody random_body(std::mt19937_64& rng, bool symmetric);

Lattice2 random_lattice(std::mt19937_64& rng);

/// Random body guaranteed to meet every integer line: contains [-1.2, 1.2]^2.
ConvexBody random_line_meeting_body(std::mt19937_64& rng);

/// Flat isosystolic bounds for one body: the constants applicable to its
/// symmetry class, each ratio computed after normalizing to unit systole.
std::vector<TheoremCheck> check_flat_body(const ConvexBody& body,
                                          const std::string& desc);

struct FlatteningOutcome {
  std::string field_name;
  std::vector<TheoremCheck> checks;  // areas, systole, bounded-distance rows
  double tolerance_area_bh = 0.0;
  double tolerance_area_ht = 0.0;
  double tolerance_sys = 0.0;
  double eps_stencil = 0.0;
  double eps_variation = 0.0;
};

/// Flattens a periodic field onto its stable-norm ball and audits that both
/// areas did not go up and the systole did not move, within the propagated
/// discretization tolerance.  Also runs bounded-distance spot checks.
FlatteningOutcome check_flattening(const std::string& name, const MetricField& field,
                                   const GridSpec& spec, int ball_directions = 16,
                                   int bounded_samples = 2);

/// d(x, x+z) - ||z||_st must land in [0, 2*diameter] up to the propagated
/// discretization slack, for sampled base points and classes.
std::vector<TheoremCheck> check_bounded_distance(const PeriodicGraph& graph,
                                                 const std::string& name, int samples);

/// Conformal averaging experiment: the systolic ratio of f·g0 is at least the
/// ratio of the averaged metric, which is the flat ratio of g0; and the
/// latter obeys the flat Riemannian bound.
std::pair<TheoremCheck, TheoremCheck> loewner_experiment(const Expression& f,
                                                         const Lattice2& g0,
                                                         int translations,
                                                         const GridSpec& spec);

struct FreedomRow {
  double eps;
  double ratio;    // computed BH systolic ratio of the K_eps torus
  double formula;  // 2*pi*eps/(1+eps)^2
  double diff;
};

std::vector<FreedomRow> systolic_freedom_sweep(std::span<const double> eps_values);

/// The ten named fields the flattening suite runs on.
std::vector<std::pair<std::string, MetricField>> flattening_test_fields(std::uint64_t seed);

struct SuiteOptions {
  GridSpec grid;
  int flat_random = 1000;
  int ball_directions = 16;
  int bounded_samples = 2;
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<TheoremCheck> checks;
  std::vector<FreedomRow> freedom;
  bool all_pass = true;
  std::string failure_replay;  // offending input, serialized, when a check fails
};

/// which: flat | flattening | loewner | freedom | all
SuiteReport run_suite(const std::string& which, std::uint64_t seed,
                      const SuiteOptions& opts = {});

std::string report_to_json(const SuiteReport& r);
std::string report_to_csv(const SuiteReport& r);

}  // namespace systolic
