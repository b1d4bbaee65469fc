#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "wtoda/cli.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace wtoda;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "wtoda_cli_test" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

fs::path write_config(const fs::path& dir, const nlohmann::json& j) {
  const fs::path p = dir / "config.json";
  std::ofstream(p) << j.dump(2);
  return p;
}

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "wtoda");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p, std::string* comment = nullptr) {
  std::ifstream in(p);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '#') {
      if (comment) *comment = line;
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("schema validation") {
  const auto& schema = run_config_schema();
  CHECK(validate_schema({{"group", "SL2"}}, schema).empty());
  CHECK_FALSE(validate_schema({{"group", "SL4"}}, schema).empty());
  CHECK_FALSE(validate_schema({{"seed", 3}}, schema).empty());
  CHECK_FALSE(validate_schema({{"group", "SL2"}, {"colour", "red"}}, schema).empty());
  CHECK_FALSE(validate_schema({{"group", "SL2"}, {"quadrature", {{"nodes_per_dim", 2}}}}, schema).empty());
  CHECK_FALSE(validate_schema({{"group", "SL2"}, {"quadrature", {{"radius", 0.0}}}}, schema).empty());
  CHECK_FALSE(validate_schema({{"group", "SL2"}, {"character", {{"xi", {"a"}}}}}, schema).empty());
  CHECK(validate_schema({{"group", "SL2"}, {"transform", {{"calibration", 0.1}}}}, schema).empty());
  CHECK(validate_schema({{"group", "SL2"}, {"transform", {{"calibration", "fit"}}}}, schema).empty());
  CHECK_THROWS_AS(RunConfig::parse({{"group", "SL3"}, {"character", {{"xi", {1.0}}}}}), ConfigError);
  const RunConfig c = RunConfig::parse({{"group", "GL3"}, {"character", {{"xi", {0.5, 2.0}}}}});
  CHECK(c.rs.variant == Variant::GL);
  CHECK(c.couplings() == std::vector<double>{0.25, 4.0});
  CHECK_FALSE(c.seed.has_value());
}

TEST_CASE("malformed config exits 2 without output") {
  const fs::path dir = scratch("malformed");
  const fs::path cfg = dir / "config.json";
  std::ofstream(cfg) << "{\"group\": \"SL2\", ";
  CHECK(run({"density", "--config", cfg.string(), "--out", (dir / "out").string()}) == kExitConfig);
  CHECK_FALSE(fs::exists(dir / "out"));
  write_config(dir, {{"group", "SL2"}, {"density", {{"count", "many"}}}});
  CHECK(run({"density", "--config", cfg.string(), "--out", (dir / "out").string()}) == kExitConfig);
  CHECK_FALSE(fs::exists(dir / "out"));
  CHECK(run({"density"}) == kExitConfig);
  CHECK(run({"frobnicate", "--config", cfg.string()}) == kExitConfig);
}

TEST_CASE("density table") {
  const fs::path dir = scratch("density");
  const fs::path cfg = write_config(dir, {{"group", "SL2"}, {"density", {{"radius", 20.0}, {"count", 101}}}});
  REQUIRE(run({"density", "--config", cfg.string(), "--out", dir.string()}) == kExitPass);
  const auto rows = read_csv(dir / "density.csv");
  REQUIRE(rows.size() == 102);
  CHECK(rows[0] == std::vector<std::string>{"nu_1", "nu_2", "c_re", "c_im", "mu", "ratio"});
  CHECK(std::stod(rows[1][4]) == 0.0);  // nu = 0
  const double first = std::stod(rows[2][5]);
  for (std::size_t i = 2; i < rows.size(); ++i) CHECK(std::abs(std::stod(rows[i][5]) - first) <= 1e-8 * first);
  const auto summary = nlohmann::json::parse(slurp(dir / "density_summary.json"));
  CHECK(summary["bound"]["exponent"].get<double>() == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("whittaker samples") {
  const fs::path dir = scratch("whittaker");
  const fs::path cfg = write_config(dir, {{"group", "SL2"}, {"whittaker", {{"nu", {1.2, -1.2}}, {"h_count", 9}}}});
  REQUIRE(run({"whittaker", "--config", cfg.string(), "--out", dir.string()}) == kExitPass);
  std::string header;
  const auto rows = read_csv(dir / "whittaker.csv", &header);
  CHECK(header.find("experimental=0") != std::string::npos);
  REQUIRE(rows.size() == 10);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::stod(rows[i][3]) <= 1e-6);

  const fs::path cfg3 = write_config(dir, {{"group", "SL3"},
                                           {"whittaker", {{"nu", {1.0, 0.2, -1.2}}, {"points", {{0.0, 0.0}}}}}});
  REQUIRE(run({"whittaker", "--config", cfg3.string(), "--out", dir.string()}) == kExitPass);
  read_csv(dir / "whittaker.csv", &header);
  CHECK(header.find("experimental=1") != std::string::npos);

  const fs::path wall = write_config(dir, {{"group", "SL3"}, {"whittaker", {{"nu", {1.0, 1.0, -2.0}}}}});
  CHECK(run({"whittaker", "--config", wall.string(), "--out", dir.string()}) == kExitRefusal);
}

TEST_CASE("transform refuses GL, toda flow writes a trajectory") {
  const fs::path dir = scratch("toda");
  const fs::path gl = write_config(dir, {{"group", "GL2"}});
  CHECK(run({"transform", "roundtrip", "--config", gl.string(), "--out", dir.string()}) == kExitRefusal);
  const fs::path cfg = write_config(dir, {{"group", "SL3"}, {"toda", {{"steps", 2000}, {"record_every", 500}}}});
  REQUIRE(run({"toda", "--config", cfg.string(), "--out", dir.string()}) == kExitPass);
  const auto rows = read_csv(dir / "trajectory.csv");
  CHECK(rows[0].size() == 8);
  CHECK(rows.size() == 6);
  const fs::path seedless = write_config(dir, {{"group", "GL2"}, {"toda", {{"mode", "commutator"}}}});
  CHECK(run({"toda", "--config", seedless.string(), "--out", dir.string()}) == kExitConfig);
  CHECK(run({"toda", "--config", seedless.string(), "--out", dir.string(), "--seed", "4"}) == kExitPass);
}

TEST_CASE("verify suite filter, seeds and determinism") {
  const fs::path dir = scratch("verify");
  const fs::path cfg = write_config(dir, {{"group", "SL3"}, {"verify", {{"suites", {"inequalities"}}, {"pairs", 2000}}}});
  CHECK(run({"verify", "--config", cfg.string(), "--out", dir.string()}) == kExitConfig);
  REQUIRE(run({"verify", "--config", cfg.string(), "--out", (dir / "a").string(), "--seed", "1"}) == kExitPass);
  REQUIRE(run({"verify", "--config", cfg.string(), "--out", (dir / "b").string(), "--seed", "1"}) == kExitPass);
  REQUIRE(run({"verify", "--config", cfg.string(), "--out", (dir / "c").string(), "--seed", "2"}) == kExitPass);
  const std::string a = slurp(dir / "a" / "verify_report.json"), b = slurp(dir / "b" / "verify_report.json");
  CHECK(a == b);
  const auto ja = nlohmann::json::parse(a), jc = nlohmann::json::parse(slurp(dir / "c" / "verify_report.json"));
  REQUIRE(ja["suites"].size() == 1);
  CHECK(ja["suites"][0]["suite"] == "inequalities");
  CHECK(ja["suites"][0]["passed"] == jc["suites"][0]["passed"]);
  CHECK(ja["suites"][0]["max_ratio"] != jc["suites"][0]["max_ratio"]);
}

TEST_CASE("plot script") {
  const fs::path dir = scratch("plot");
  CHECK(run({"--emit-plot-script", (dir / "plot.py").string()}) == kExitPass);
  CHECK(slurp(dir / "plot.py").find("matplotlib") != std::string::npos);
}
