#include "systolic/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace systolic {

using json = nlohmann::ordered_json;

namespace {

std::vector<Vec2> vertices_from(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("\"vertices\" must be an array");
  std::vector<Vec2> pts;
  for (const auto& p : j) {
    if (!p.is_array() || p.size() != 2) {
      throw std::invalid_argument("each vertex must be a [x, y] pair");
    }
    pts.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  return pts;
}

ConvexBody body_from(const json& j) {
  if (!j.contains("vertices")) throw std::invalid_argument("missing \"vertices\"");
  const auto pts = vertices_from(j["vertices"]);
  return ConvexBody(std::span<const Vec2>(pts));
}

json body_to(const ConvexBody& k) {
  json verts = json::array();
  for (const Vec2 p : k.vertices()) verts.push_back({p.x, p.y});
  return json{{"vertices", verts}};
}

}  // namespace

ConvexBody body_from_json(const std::string& text) {
  return body_from(json::parse(text));
}

ConvexBody load_body(const std::string& path) { return body_from_json(read_file(path)); }

std::string body_to_json(const ConvexBody& k) { return body_to(k).dump(2) + "\n"; }

MetricField metric_from_json(const std::string& text) {
  const json j = json::parse(text);
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "flat") {
    return MetricField::flat(body_from(j.at("body")));
  }
  if (kind == "conformal") {
    const auto& g0 = j.at("g0");
    if (!g0.is_array() || g0.size() != 2) {
      throw std::invalid_argument("\"g0\" must be a 2x2 basis");
    }
    const Lattice2 lat{{g0[0][0].get<double>(), g0[0][1].get<double>()},
                       {g0[1][0].get<double>(), g0[1][1].get<double>()}};
    const int disk = j.value("disk_vertices", 64);
    return MetricField::conformal(Expression::parse(j.at("f").get<std::string>()), lat, disk);
  }
  if (kind == "body_grid") {
    const int n = j.at("n").get<int>();
    std::vector<ConvexBody> bodies;
    for (const auto& b : j.at("bodies")) bodies.push_back(body_from(b));
    return MetricField::body_grid(n, std::move(bodies));
  }
  throw std::invalid_argument("unknown metric kind \"" + kind + "\"");
}

MetricField load_metric(const std::string& path) {
  return metric_from_json(read_file(path));
}

std::string trace_to_json(const ConvexBody& input, const ReductionTrace& trace) {
  json j;
  j["input"] = body_to(input);
  json steps = json::array();
  for (const auto& s : trace.steps) {
    steps.push_back(json{{"kind", step_kind_name(s.kind)},
                         {"monitored", s.monitored},
                         {"body", body_to(s.body)}});
  }
  j["steps"] = steps;
  return j.dump(2) + "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << content;
}

}  // namespace systolic
