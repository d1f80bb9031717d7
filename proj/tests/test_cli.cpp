#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "json.hpp"
#include "systolic/cli.hpp"
#include "systolic/io.hpp"
#include "systolic/svg.hpp"

using namespace systolic;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / "systolic_cli_test";
    fs::create_directories(path);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("body commands") {
  TempDir tmp;
  write_file(tmp.file("square.json"),
             "{\"vertices\": [[1,1],[-1,1],[-1,-1],[1,-1]]}\n");

  RunConfig cfg;
  cfg.subcommand = "body";
  cfg.input_path = tmp.file("square.json");
  cfg.op = "polar";
  cfg.json_path = tmp.file("polar.json");
  CHECK(run(cfg) == 0);

  // emitted JSON loads back through the same loader
  const ConvexBody p = load_body(tmp.file("polar.json"));
  CHECK(p.size() == 4);
  CHECK(area(p) == doctest::Approx(2.0));

  cfg.op = "mahler";
  cfg.json_path.clear();
  CHECK(run(cfg) == 0);

  cfg.op = "lines";
  CHECK(run(cfg) == 0);
}

TEST_CASE("malformed input exits with code 2") {
  TempDir tmp;
  write_file(tmp.file("bad.json"), "{\"vertices\": [[1,1],[-1,1]");
  RunConfig cfg;
  cfg.subcommand = "body";
  cfg.input_path = tmp.file("bad.json");
  cfg.op = "area";
  CHECK(run(cfg) == 2);

  write_file(tmp.file("degenerate.json"), "{\"vertices\": [[1,1],[2,2],[3,3]]}");
  cfg.input_path = tmp.file("degenerate.json");
  CHECK(run(cfg) == 2);

  RunConfig missing;
  missing.subcommand = "body";
  missing.input_path = tmp.file("does_not_exist.json");
  missing.op = "area";
  CHECK(run(missing) == 2);
}

TEST_CASE("lattice commands") {
  RunConfig cfg;
  cfg.subcommand = "lattice";
  cfg.basis = "1,0;0.5,0.8660254037844386";
  cfg.op = "hermite";
  CHECK(run(cfg) == 0);
  cfg.op = "reduce";
  CHECK(run(cfg) == 0);
  cfg.basis = "1,0";
  CHECK(run(cfg) == 2);
}

TEST_CASE("flat commands and the family sweep") {
  TempDir tmp;
  RunConfig cfg;
  cfg.subcommand = "flat";
  cfg.family = "keps";
  cfg.eps = 0.5;
  cfg.op = "ratio";
  CHECK(run(cfg) == 0);

  RunConfig sweep;
  sweep.subcommand = "flat";
  sweep.sweep = "0.05:0.5:10";
  sweep.csv_path = tmp.file("sweep.csv");
  CHECK(run(sweep) == 0);
  const std::string csv = read_file(tmp.file("sweep.csv"));
  CHECK(csv.find("eps,bh_ratio,formula,diff") == 0);
}

TEST_CASE("reduce command writes a replayable trace") {
  TempDir tmp;
  write_file(tmp.file("hex.json"),
             "{\"vertices\": [[1,0],[0.5,0.866],[-0.5,0.866],[-1,0],[-0.5,-0.866],"
             "[0.5,-0.866]]}\n");
  RunConfig cfg;
  cfg.subcommand = "reduce";
  cfg.input_path = tmp.file("hex.json");
  cfg.mode = "mahler";
  cfg.trace_path = tmp.file("trace.json");
  cfg.svg_path = tmp.file("trace.svg");
  CHECK(run(cfg) == 0);

  const auto trace = nlohmann::json::parse(read_file(tmp.file("trace.json")));
  REQUIRE(trace.contains("steps"));
  REQUIRE(!trace["steps"].empty());
  for (const auto& step : trace["steps"]) {
    const ConvexBody snapshot = body_from_json(step["body"].dump());
    CHECK(snapshot.size() >= 4);
  }
  CHECK(read_file(tmp.file("trace.svg")).find("<svg") == 0);
}

TEST_CASE("render command and line counts") {
  TempDir tmp;
  RunConfig cfg;
  cfg.subcommand = "render";
  cfg.bound = 50;
  cfg.svg_path = tmp.file("lines.svg");
  CHECK(run(cfg) == 0);
  const std::string svg = read_file(tmp.file("lines.svg"));

  // one <line> element per integer vector within the bound, plus two axes
  std::size_t count = 0;
  for (std::size_t at = svg.find("<line"); at != std::string::npos;
       at = svg.find("<line", at + 1)) {
    ++count;
  }
  CHECK(count == static_cast<std::size_t>(integer_line_count(50)) + 2);
  CHECK(integer_line_count(1) == 4);
}

TEST_CASE("verify suite through the command layer") {
  TempDir tmp;
  RunConfig cfg;
  cfg.subcommand = "verify";
  cfg.suite = "freedom";
  cfg.seed = 42;
  cfg.report_path = tmp.file("report.json");
  cfg.csv_path = tmp.file("report.csv");
  CHECK(run(cfg) == 0);
  const auto report = nlohmann::json::parse(read_file(tmp.file("report.json")));
  CHECK(report["all_pass"].get<bool>());
  CHECK(report["suite"] == "freedom");
}
