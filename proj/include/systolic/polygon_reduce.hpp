#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "systolic/convex_body.hpp"

namespace systolic {

struct AlreadyParallelogram : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct PreconditionViolated : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

enum class StepKind {
  MahlerPairRemoval,
  AbtPushToLine,
  AbtSlideAlongLine,
  VertexMerge,
};

const char* step_kind_name(StepKind k);

struct ReductionStep {
  StepKind kind;
  ConvexBody body;   // snapshot after the step
  double monitored;  // |P|·|P°| for Mahler steps, |P| for the integer-line drive
};

struct ReductionTrace {
  std::vector<ReductionStep> steps;
};

/// One opposite-vertex-pair removal on a symmetric polygon: the pair moves in
/// opposite directions, each parallel to the line through its neighbors, until
/// aligned with an adjacent edge.  Area is preserved; the pair and direction
/// are chosen so the volume product |P|·|P°| does not increase.  Throws
/// AlreadyParallelogram on two vertex pairs, NotSymmetric otherwise.
std::pair<ConvexBody, ReductionTrace> mahler_reduce_step(const ConvexBody& p);

/// Drives a symmetric polygon down to a parallelogram, one pair per step.
std::pair<ConvexBody, ReductionTrace> mahler_reduce(const ConvexBody& p);

/// Deforms a polygon that meets every integer line {m·x = 1} into one with
/// integer vertices, never increasing the area and never losing an integer
/// line.  Vertices not on any supporting integer line are pushed toward the
/// chord of their neighbors until a line becomes supporting there; vertices on
/// exactly one such line slide along it in the area-decreasing direction until
/// a second one appears.  Ends when every vertex is on at least two supporting
/// integer lines, which pins it to an integer point.
std::pair<ConvexBody, ReductionTrace> abt_reduce(const ConvexBody& p);

/// Supporting integer lines through each vertex: lines {m·x = 1} with m
/// primitive, support(m) = 1, and m·v = 1 within tolerance.  Exposed for
/// tests and for rendering.
std::vector<std::vector<Vec2>> supporting_lines_per_vertex(const ConvexBody& k);

}  // namespace systolic
