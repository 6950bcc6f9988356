#include "fluidlab/cli.hpp"
#include "fluidlab/fields.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace fluidlab;
namespace fs = std::filesystem;

namespace {

const std::string kConfigDir = FLUIDLAB_CONFIG_DIR;

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("fluidlab_test_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run(std::vector<std::string> args, std::string* out_text = nullptr, std::string* err_text = nullptr) {
  args.insert(args.begin(), "fluidlab");
  std::vector<char*> argv;
  for (std::string& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return code;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "cfg.json";
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST_CASE("config defaults and parsing") {
  const ScenarioConfig d = parse_config("{}");
  CHECK(d.chart.type == "trap");
  CHECK(d.eos.c2 == 0.5);
  CHECK(d.grid.n == 200);
  CHECK(d.seed == 0xE57);
  CHECK(d.suites == std::vector<std::string>{"all"});
  const ScenarioConfig c = parse_config(R"({"seed": "0x10", "time": {"dt": 0.01}, "chart": {"type": "minkowski"}})");
  CHECK(c.seed == 16);
  REQUIRE(c.time.dt.has_value());
  CHECK(*c.time.dt == 0.01);
  CHECK(make_chart(c).kind() == ChartKind::Minkowski);
  CHECK(parse_config(config_echo(c)).seed == 16);
  CHECK(config_echo(parse_config(config_echo(c))) == config_echo(c));
}

TEST_CASE("config errors name the key and line") {
  try {
    parse_config("{\n  \"grid\": {\n    \"nn\": 3\n  }\n}");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string m = e.what();
    CHECK(m.find("grid.nn") != std::string::npos);
    CHECK(m.find("line 3") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config(R"({"grid": {"n": "many"}})"), ConfigError);
  CHECK_THROWS_AS(parse_config("{ \"grid\": "), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"scenario": "explode"})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"eos": {"c2": 1.5}})"), AssumptionViolation);
  CHECK_THROWS_AS(parse_config(R"({"chart": {"k": -0.1}})"), AssumptionViolation);
  CHECK_THROWS_AS(load_config("/nonexistent/cfg.json"), ConfigError);
}

TEST_CASE("exit codes") {
  const fs::path dir = scratch("exit");
  std::string err;
  CHECK(run({"run", "--config", kConfigDir + "/static.json", "--out", dir.string()}) == kExitOk);
  CHECK(run({"run", "--config", write_config(dir, R"({"eos": {"c2": 1.5}})").string(), "--out", dir.string()},
            nullptr, &err) == kExitConfigError);
  CHECK(err.find("sound speed") != std::string::npos);
  CHECK(run({"run", "--out", dir.string()}) == kExitConfigError);
  CHECK(run({"bogus"}) == kExitConfigError);
  CHECK(run({"verify", "--suite", "nosuch", "--out", dir.string()}) == kExitConfigError);
  // A large perturbation pushes the boost past the small-lambda regime: the run completes but a check fails.
  const fs::path big = write_config(
      dir, R"({"scenario": "oscillate", "grid": {"n": 40}, "init": {"amplitude": 0.2}, "time": {"periods": 0.25}})");
  CHECK(run({"run", "--config", big.string(), "--out", dir.string()}) == kExitCheckFailure);
  const fs::path wild = write_config(
      dir, R"({"scenario": "oscillate", "grid": {"n": 40}, "init": {"amplitude": 0.45}, "time": {"dt": 0.2, "t_end": 4.0}})");
  CHECK(run({"run", "--config", wild.string(), "--out", dir.string()}) == kExitNumericalAbort);
}

TEST_CASE("runs are reproducible and write the documented columns") {
  const fs::path a = scratch("repro_a"), b = scratch("repro_b");
  const std::string cfg = kConfigDir + "/oscillate.json";
  REQUIRE(run({"run", "--config", cfg, "--out", a.string()}) == kExitOk);
  REQUIRE(run({"run", "--config", cfg, "--out", b.string()}) == kExitOk);
  for (const char* f : {"oscillate.csv", "oscillate.plt", "oscillate_summary.txt"}) {
    REQUIRE(fs::exists(a / f));
    CHECK(slurp(a / f) == slurp(b / f));
  }
  std::istringstream csv(slurp(a / "oscillate.csv"));
  std::string header;
  std::getline(csv, header);
  std::string expect;
  for (const std::string& c : run_csv_columns()) expect += (expect.empty() ? "" : ",") + c;
  CHECK(header == expect);
  const std::string summary = slurp(a / "oscillate_summary.txt");
  CHECK(summary.find("\"scenario\"") != std::string::npos);
  CHECK(run({"report", "--config", cfg, "--out", a.string()}) == kExitOk);
}

TEST_CASE("wave and verify subcommands") {
  const fs::path dir = scratch("wave");
  CHECK(run({"wave", "--config", kConfigDir + "/wave.json", "--out", dir.string()}) == kExitOk);
  std::istringstream w(slurp(dir / "wave.csv"));
  std::string header;
  std::getline(w, header);
  CHECK(header == "t,EW,psi_center,dpsi_center");
  CHECK(run({"verify", "--suite", "poin", "--seed", "3735", "--out", dir.string()}) == kExitOk);
  std::istringstream v(slurp(dir / "verify.csv"));
  std::getline(v, header);
  CHECK(header == "suite,instance,lhs,rhs,ratio,pass,order");
  std::string row;
  int rows = 0;
  while (std::getline(v, row)) {
    ++rows;
    CHECK(row.find(",true,") != std::string::npos);
  }
  CHECK(rows == 20);
}
