#ifndef FLUIDLAB_CLI_HPP_INCLUDED
#define FLUIDLAB_CLI_HPP_INCLUDED

#include "fluidlab/eos.hpp"
#include "fluidlab/inequalities.hpp"
#include "fluidlab/spacetime.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace fluidlab {

enum ExitCode : int { kExitOk = 0, kExitCheckFailure = 1, kExitConfigError = 2, kExitNumericalAbort = 3 };

struct ScenarioConfig {
  struct Chart {
    std::string type = "trap";  // "minkowski" or "trap"
    double k = 0.1;
  } chart;
  struct Eos {
    double c2 = 0.5, eps0 = 1.0, A = 1.0;
  } eos;
  struct Grid {
    std::string kind = "radial";  // "radial" (Lagrangian nodes), "spectral" (wave modes), "lattice"
    int n = 200;
    double h = 0.05;  // lattice spacing for the identity suites
    double R = 1.0;   // initial radius of the ball
  } grid;
  struct Init {
    double amplitude = 1e-3;
    int mode = 1;
  } init;
  struct Time {
    std::optional<double> dt;     // absent: from the CFL number
    double cfl = 0.5;
    std::optional<double> t_end;  // absent: periods acoustic periods
    double periods = 1.0;
    int output_every = 0;         // 0: about 200 rows
  } time;
  std::string scenario = "static";  // static, oscillate, wave
  std::vector<std::string> suites = {"all"};
  std::uint64_t seed = 0xE57;
  int instances = 20;
  struct Out {
    std::string csv = "run.csv";
    std::string plt = "run.plt";
    std::string summary = "summary.txt";
    std::string verify = "verify.csv";
  } out;
};

// Parses JSON text. Malformed input and unknown or mistyped keys raise
// ConfigError naming the key and line; parameters outside the modelling
// assumptions raise AssumptionViolation naming the assumption.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);
// Normalized JSON of a config, used as the echo in every summary.
std::string config_echo(const ScenarioConfig& cfg);

SpacetimeChart make_chart(const ScenarioConfig& cfg);
AffineEos make_eos(const ScenarioConfig& cfg);

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct RunResult {
  std::vector<CheckResult> checks;
  std::vector<std::string> files;
  bool ok() const;
};

// Each runner writes its artifacts under out_dir and a progress log to log.
// NumericalAbort propagates.
RunResult run_evolution(const ScenarioConfig& cfg, const std::string& out_dir, std::ostream& log);
RunResult run_wave(const ScenarioConfig& cfg, const std::string& out_dir, std::ostream& log);
RunResult run_verify(const ScenarioConfig& cfg, const std::vector<std::string>& suites, const std::string& out_dir,
                     std::ostream& log);
// Re-reads a run CSV and evaluates the checks that need only the time series.
RunResult run_report(const ScenarioConfig& cfg, const std::string& out_dir, std::ostream& log);

const std::vector<std::string>& run_csv_columns();

// Command line entry point shared by the executable and the tests.
int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace fluidlab

#endif
