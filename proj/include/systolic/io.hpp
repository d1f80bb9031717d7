#pragma once

#include <string>

#include "systolic/convex_body.hpp"
#include "systolic/metric_field.hpp"
#include "systolic/polygon_reduce.hpp"

namespace systolic {

/// Body file format: { "vertices": [[x, y], ...] } in any order; the loader
/// normalizes on construction.
ConvexBody body_from_json(const std::string& text);
ConvexBody load_body(const std::string& path);
std::string body_to_json(const ConvexBody& k);

/// Metric file format, one of
///   {"kind":"flat","body":{"vertices":[...]}}
///   {"kind":"conformal","f":"1+0.5*sin(2*pi*x1)","g0":[[1,0],[0,1]]}
///   {"kind":"body_grid","n":2,"bodies":[{...}, ...]}   (n*n bodies, row-major)
MetricField metric_from_json(const std::string& text);
MetricField load_metric(const std::string& path);

std::string trace_to_json(const ConvexBody& input, const ReductionTrace& trace);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace systolic
