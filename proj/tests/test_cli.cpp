#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "cli/emit.hpp"

using namespace spectral;
using namespace spectral::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("spectral_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string field_of(const json& j) {
  try {
    parse_config(j);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<none>";
}

}  // namespace

TEST_CASE("minimal gaussian config gets defaults") {
  const RunSpec spec = parse_config(json::parse(R"({"potential": {"model": "gaussian"}})"));
  CHECK(spec.W.N() == 1);
  CHECK(spec.tol.newton == 1e-10);
  CHECK(spec.radius == 0.0);
  CHECK(spec.echo["radius"] == "auto");
  CHECK(spec.echo["tolerances"]["classify"] == 1e-7);
  CHECK(spec.echo["schema_version"] == 1);
  // The echo parses back to the same specification.
  CHECK(parse_config(spec.echo).echo == spec.echo);
}

TEST_CASE("schema errors name the field") {
  CHECK(field_of(json::parse(R"({"potential": {"model": "gaussian"}, "s": [[0.25, "x"]]})")) == "/s/0/1");
  CHECK(field_of(json::parse(R"({"potential": {"model": "gaussian"}, "s": [[0.25, 0, 1]]})")) == "/s/0");
  CHECK(field_of(json::parse(R"({"potential": {"model": "cubic", "g": [1]}})")) == "/potential/g");
  CHECK(field_of(json::parse(R"({"potential": {"model": "quartic"}})")) == "/potential/model");
  CHECK(field_of(json::parse(R"({})")) == "/potential");
  CHECK(field_of(json::parse(R"({"potential": {"model": "gaussian"}, "colour": 1})")) == "/colour");
  CHECK(field_of(json::parse(R"({"potential": {"model": "gaussian"}, "scan": {"x": {"param": "t3", "min": 0, "max": 1, "count": 3}}})")) ==
        "/scan/x/param");
  CHECK(field_of(json::parse(R"({"potential": {"model": "gaussian"}, "tolerances": {"newton": -1}})")) == "/tolerances/newton");
  CHECK(field_of(json::parse(R"({"potential": {"model": "gaussian"}, "betas": [1, -1], "pairing": [[0, 0]]})")) == "/pairing");
}

TEST_CASE("syntax errors carry a line number") {
  const fs::path dir = scratch("syntax");
  std::ofstream(dir / "bad.json") << "{\n  \"potential\": {\"model\": \"gaussian\"},\n  \"s\": [0.25,]\n}\n";
  try {
    parse_config(dir / "bad.json");
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("bad.json:3:") != std::string::npos);
  }
}

TEST_CASE("cubic scan echoes its grid and writes the class map") {
  const json cfg = json::parse(R"({
    "potential": {"model": "cubic", "g": 1},
    "scan": {"x": {"param": "t2", "min": -2, "max": 1, "count": 13},
             "y": {"param": "s", "min": -1, "max": 1, "count": 9}},
    "threads": 3
  })");
  const RunSpec spec = parse_config(cfg);
  CHECK(spec.echo["scan"]["x"]["count"] == 13);
  CHECK(spec.echo["scan"]["y"]["param"] == "s");
  CHECK(spec.scan->y.scale == -4.0);

  const fs::path a = scratch("scan_a"), b = scratch("scan_b");
  std::ostringstream log;
  const auto files = run_command("scan", spec, a, log);
  REQUIRE(files.size() == 2);
  const std::string csv = slurp(a / "run_scan.csv");
  CHECK(csv.rfind("t2,s,q,sector,min_dist,disc_re,disc_im\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 13 * 9);
  CHECK(csv.find('\r') == std::string::npos);
  const json summary = read_json(a / "run_scan.json");
  CHECK(summary["schema_version"] == kOutputSchema);
  CHECK(summary["config"]["scan"]["x"]["max"] == 1.0);
  CHECK(summary["nodes"] == 13 * 9);

  // Same config, one thread: byte-identical files.
  RunSpec one = spec;
  one.threads = 1;
  run_command("scan", one, b, log);
  CHECK(slurp(b / "run_scan.csv") == csv);
}

TEST_CASE("empty grid gives an empty table") {
  const RunSpec spec = parse_config(json::parse(R"({
    "potential": {"model": "cubic"},
    "scan": {"x": {"param": "t2", "min": -2, "max": 1, "count": 0},
             "y": {"param": "s", "min": -1, "max": 1, "count": 5}}})"));
  const fs::path dir = scratch("empty");
  std::ostringstream log;
  run_command("scan", spec, dir, log);
  CHECK(slurp(dir / "run_scan.csv") == "t2,s,q,sector,min_dist,disc_re,disc_im\n");
}

TEST_CASE("json round trip") {
  const fs::path dir = scratch("json");
  const json x = {{"betas", cvec_to_json({cplx(1.0 / 3.0, -2e-300), cplx(-0.1, 7.0)})}, {"n", {1, 0}}};
  write_json(dir / "x.json", x);
  json back = read_json(dir / "x.json");
  CHECK(back["schema_version"] == kOutputSchema);
  back.erase("schema_version");
  CHECK(back == x);
  CHECK(complex_from_json(back["betas"][0], "/betas/0") == cplx(1.0 / 3.0, -2e-300));
}

TEST_CASE("shortest round-trip number format") {
  for (double v : {0.1, 1.0 / 3.0, -2816.0000000000005, 1e-300, 0.0, 123456789.0})
    CHECK(std::stod(format_double(v)) == v);
  CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("commands produce the documented files") {
  const fs::path dir = scratch("commands");
  std::ostringstream log;
  SUBCASE("solve-hooft from the classical seed") {
    const RunSpec spec = parse_config(json::parse(R"({"potential": {"model": "gaussian"}, "s": [0.25]})"));
    run_command("solve-hooft", spec, dir, log);
    const json j = read_json(dir / "run_solve-hooft.json");
    CHECK(std::abs(std::abs(complex_from_json(j["betas"][0], "")) - 1.0) < 1e-10);
    CHECK(std::abs(complex_from_json(j["t"][0], "") + 1.0) < 1e-10);
  }
  SUBCASE("painleve") {
    const RunSpec spec = parse_config(json::parse(R"({"potential": {"model": "gaussian"},
      "painleve": {"x_min": -16, "x_max": -8, "step": 0.05}, "output": {"prefix": "pi"}})"));
    run_command("painleve", spec, dir, log);
    const json j = read_json(dir / "pi_painleve.json");
    CHECK(j["nodes"] == 161);
    CHECK(j["residual_norm"].get<double>() <= 1e-8);
    CHECK(slurp(dir / "pi_painleve.csv").rfind("x,u_re,u_im,du_re,du_im\n", 0) == 0);
  }
  SUBCASE("json only") {
    const RunSpec spec = parse_config(json::parse(R"({"potential": {"model": "cubic"},
      "betas": [[0.0869534467023368, 0], [-1.6599185290255911, 0]], "path": [[1.2], [1.3]],
      "output": {"format": "json"}})"));
    const auto files = run_command("flow-t", spec, dir, log);
    CHECK(files.size() == 1);
    CHECK_FALSE(fs::exists(dir / "run_flow-t.csv"));
  }
  SUBCASE("missing inputs are config errors") {
    const RunSpec spec = parse_config(json::parse(R"({"potential": {"model": "gaussian"}})"));
    CHECK_THROWS_AS(run_command("solve-hooft", spec, dir, log), ConfigError);
    CHECK_THROWS_AS(run_command("frobnicate", spec, dir, log), ConfigError);
  }
  CHECK(command_names().size() == 9);
}
