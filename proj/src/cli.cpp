#include "fluidlab/cli.hpp"

#include "fluidlab/boundary.hpp"
#include "fluidlab/energies.hpp"
#include "fluidlab/evolve.hpp"
#include "fluidlab/fields.hpp"
#include "fluidlab/wave.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace fluidlab {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr double kPi = 3.14159265358979323846;

int line_of_offset(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

// Line of the first occurrence of "key" in the source; 0 if absent.
int line_of_key(const std::string& text, const std::string& key) {
  const std::size_t p = text.find("\"" + key + "\"");
  return p == std::string::npos ? 0 : line_of_offset(text, p);
}

class Reader {
 public:
  explicit Reader(const std::string& text) : text_(text) {}

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    std::ostringstream os;
    os << "config key '" << key << "'";
    const std::string leaf = key.substr(key.find_last_of('.') + 1);
    if (const int line = line_of_key(text_, leaf); line > 0) os << " (line " << line << ")";
    os << ": " << what;
    throw ConfigError(os.str());
  }

  void only(const json& obj, const std::string& path, const std::set<std::string>& keys) const {
    if (!obj.is_object()) fail(path.empty() ? "<root>" : path, "expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it)
      if (!keys.count(it.key())) fail(path.empty() ? it.key() : path + "." + it.key(), "unknown key");
  }

  void number(const json& obj, const std::string& path, const char* key, double& out) const {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    if (!v.is_number()) fail(path + "." + key, "expected a number");
    out = v.get<double>();
    if (!std::isfinite(out)) fail(path + "." + key, "must be finite");
  }
  void number(const json& obj, const std::string& path, const char* key, std::optional<double>& out) const {
    if (!obj.contains(key)) return;
    double v = 0.0;
    number(obj, path, key, v);
    out = v;
  }
  void integer(const json& obj, const std::string& path, const char* key, int& out) const {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
    out = v.get<int>();
  }
  void string(const json& obj, const std::string& path, const char* key, std::string& out) const {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    if (!v.is_string()) fail(path + "." + key, "expected a string");
    out = v.get<std::string>();
  }

 private:
  const std::string& text_;
};

std::string fmt(double v) {
  if (!std::isfinite(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::ofstream open_out(const std::string& out_dir, const std::string& name, RunResult& res) {
  fs::create_directories(out_dir.empty() ? "." : out_dir);
  const fs::path p = fs::path(out_dir.empty() ? "." : out_dir) / name;
  std::ofstream f(p, std::ios::binary);
  if (!f) throw ConfigError("cannot open output file " + p.string());
  res.files.push_back(p.string());
  return f;
}

CheckResult check(const std::string& name, bool pass, const std::string& detail) { return {name, pass, detail}; }

std::vector<AssumptionCheck> assumption_checks(const ScenarioConfig& cfg) {
  const AffineEos eos = make_eos(cfg);
  const double k = cfg.chart.type == "trap" ? cfg.chart.k : 0.0;
  const double amp = std::abs(cfg.init.amplitude);
  const double lo = eos.sigma0() * (1.0 - amp) * 0.99;
  const double hi = eos.sigma0() * (1.0 + k * cfg.grid.R * cfg.grid.R) * (1.0 + amp) * 1.01;
  std::vector<AssumptionCheck> out = validate_assumptions(eos, lo, hi).checks;
  out.push_back({"stationary background, lapse^2 = 1 + k r^2 >= 1", k, k >= 0.0, cfg.chart.type});
  return out;
}

void write_summary(std::ostream& os, const std::string& title, const ScenarioConfig& cfg, const RunResult& res) {
  os << "# " << title << "\n";
  os << "config:\n" << config_echo(cfg) << "\n";
  os << "assumptions:\n";
  for (const AssumptionCheck& a : assumption_checks(cfg))
    os << "  [" << (a.pass ? "ok" : "violated") << "] " << a.name << " = " << sci(a.value)
       << (a.note.empty() ? "" : " (" + a.note + ")") << "\n";
  os << "checks:\n";
  for (const CheckResult& c : res.checks) os << "  [" << (c.pass ? "PASS" : "FAIL") << "] " << c.name << ": " << c.detail << "\n";
  os << "result: " << (res.ok() ? "ok" : "check failure") << "\n";
}

void write_plot(std::ostream& os, const std::string& csv, const std::string& png,
                const std::vector<std::pair<std::string, std::vector<int>>>& panels) {
  os << "# gnuplot script; run with: gnuplot " << fs::path(csv).stem().string() << ".plt\n";
  os << "set datafile separator \",\"\n";
  os << "set key autotitle columnhead\n";
  os << "set terminal pngcairo size 1200,800\n";
  os << "set output \"" << png << "\"\n";
  const int rows = (static_cast<int>(panels.size()) + 1) / 2;
  os << "set multiplot layout " << rows << ",2\n";
  for (const auto& [title, cols] : panels) {
    os << "set title \"" << title << "\"\nset xlabel \"t\"\nplot ";
    for (std::size_t i = 0; i < cols.size(); ++i)
      os << (i ? ", " : "") << "\"" << csv << "\" using 1:" << cols[i] << " with lines";
    os << "\n";
  }
  os << "unset multiplot\n";
}

}  // namespace

bool RunResult::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

const std::vector<std::string>& run_csv_columns() {
  static const std::vector<std::string> c = {"t",   "R",   "E0",         "E00",          "E10",     "E01",
                                             "K1",  "EW0", "EW1",        "E1",           "lambda_max",
                                             "taylor_delta", "vol_ode", "vol_mesh", "res_wave", "res_constraint"};
  return c;
}

ScenarioConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    std::ostringstream os;
    os << "config is not valid JSON (line " << line_of_offset(text, e.byte ? e.byte - 1 : 0) << "): " << e.what();
    throw ConfigError(os.str());
  }
  const Reader rd(text);
  ScenarioConfig c;
  rd.only(j, "", {"chart", "eos", "grid", "init", "time", "scenario", "suites", "seed", "instances", "out"});

  if (j.contains("chart")) {
    const json& s = j["chart"];
    rd.only(s, "chart", {"type", "k"});
    rd.string(s, "chart", "type", c.chart.type);
    rd.number(s, "chart", "k", c.chart.k);
    if (c.chart.type != "trap" && c.chart.type != "minkowski") rd.fail("chart.type", "expected \"trap\" or \"minkowski\"");
  }
  if (j.contains("eos")) {
    const json& s = j["eos"];
    rd.only(s, "eos", {"c2", "eps0", "A"});
    rd.number(s, "eos", "c2", c.eos.c2);
    rd.number(s, "eos", "eps0", c.eos.eps0);
    rd.number(s, "eos", "A", c.eos.A);
  }
  if (j.contains("grid")) {
    const json& s = j["grid"];
    rd.only(s, "grid", {"kind", "n", "h", "R"});
    rd.string(s, "grid", "kind", c.grid.kind);
    rd.integer(s, "grid", "n", c.grid.n);
    rd.number(s, "grid", "h", c.grid.h);
    rd.number(s, "grid", "R", c.grid.R);
    if (c.grid.kind != "radial" && c.grid.kind != "spectral" && c.grid.kind != "lattice")
      rd.fail("grid.kind", "expected \"radial\", \"spectral\" or \"lattice\"");
    if (c.grid.n < 1) rd.fail("grid.n", "must be positive");
    if (!(c.grid.h > 0.0 && c.grid.h < 0.5)) rd.fail("grid.h", "lattice spacing must lie in (0, 0.5)");
  }
  if (j.contains("init")) {
    const json& s = j["init"];
    rd.only(s, "init", {"amplitude", "mode"});
    rd.number(s, "init", "amplitude", c.init.amplitude);
    rd.integer(s, "init", "mode", c.init.mode);
    if (c.init.mode < 1) rd.fail("init.mode", "mode numbers start at 1");
  }
  if (j.contains("time")) {
    const json& s = j["time"];
    rd.only(s, "time", {"dt", "cfl", "t_end", "periods", "output_every"});
    rd.number(s, "time", "dt", c.time.dt);
    rd.number(s, "time", "cfl", c.time.cfl);
    rd.number(s, "time", "t_end", c.time.t_end);
    rd.number(s, "time", "periods", c.time.periods);
    rd.integer(s, "time", "output_every", c.time.output_every);
    if (c.time.dt && !(*c.time.dt > 0.0)) rd.fail("time.dt", "must be positive");
    if (!(c.time.cfl > 0.0 && c.time.cfl <= 1.0)) rd.fail("time.cfl", "must lie in (0, 1]");
    if (c.time.t_end && !(*c.time.t_end > 0.0)) rd.fail("time.t_end", "must be positive");
    if (!(c.time.periods > 0.0)) rd.fail("time.periods", "must be positive");
    if (c.time.output_every < 0) rd.fail("time.output_every", "must be >= 0");
  }
  rd.string(j, "", "scenario", c.scenario);
  if (c.scenario != "static" && c.scenario != "oscillate" && c.scenario != "wave")
    rd.fail("scenario", "expected \"static\", \"oscillate\" or \"wave\"");
  if (j.contains("suites")) {
    const json& s = j["suites"];
    c.suites.clear();
    if (s.is_string()) {
      c.suites.push_back(s.get<std::string>());
    } else if (s.is_array()) {
      for (const json& e : s) {
        if (!e.is_string()) rd.fail("suites", "expected suite names");
        c.suites.push_back(e.get<std::string>());
      }
    } else {
      rd.fail("suites", "expected a name or a list of names");
    }
    for (const std::string& n : c.suites)
      if (!is_suite_or_group(n)) rd.fail("suites", "unknown suite '" + n + "'");
  }
  if (j.contains("seed")) {
    const json& s = j["seed"];
    if (s.is_number_unsigned()) {
      c.seed = s.get<std::uint64_t>();
    } else if (s.is_string()) {
      try {
        std::size_t used = 0;
        c.seed = std::stoull(s.get<std::string>(), &used, 0);
        if (used != s.get<std::string>().size()) throw std::invalid_argument("trailing characters");
      } catch (const std::exception&) {
        rd.fail("seed", "expected an unsigned integer");
      }
    } else {
      rd.fail("seed", "expected an unsigned integer");
    }
  }
  rd.integer(j, "", "instances", c.instances);
  if (c.instances < 1) rd.fail("instances", "must be positive");
  if (j.contains("out")) {
    const json& s = j["out"];
    rd.only(s, "out", {"csv", "plt", "summary", "verify"});
    rd.string(s, "out", "csv", c.out.csv);
    rd.string(s, "out", "plt", c.out.plt);
    rd.string(s, "out", "summary", c.out.summary);
    rd.string(s, "out", "verify", c.out.verify);
  }

  // Modelling assumptions.
  if (c.chart.type == "trap" && !(c.chart.k >= 0.0))
    throw AssumptionViolation("static trap background: the potential strength must satisfy k >= 0, got k = " +
                              fmt(c.chart.k));
  if (!(c.grid.R > 0.0)) throw AssumptionViolation("bounded liquid domain: the ball radius must be positive");
  if (!(std::abs(c.init.amplitude) < 0.5))
    throw AssumptionViolation("enthalpy floor: |init.amplitude| < 0.5 keeps sigma above half its boundary value");
  make_eos(c);
  if ((c.scenario == "static" || c.scenario == "oscillate") && c.grid.kind != "radial")
    rd.fail("grid.kind", "evolution scenarios use the radial grid");
  if ((c.scenario == "static" || c.scenario == "oscillate") && (c.grid.n < 16 || c.grid.n % 2))
    rd.fail("grid.n", "the radial grid needs an even number of at least 16 cells");
  if (c.scenario == "wave" && c.grid.kind != "spectral") rd.fail("grid.kind", "the wave scenario uses the spectral grid");
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

std::string config_echo(const ScenarioConfig& c) {
  json j;
  j["scenario"] = c.scenario;
  j["chart"] = {{"type", c.chart.type}, {"k", c.chart.k}};
  j["eos"] = {{"c2", c.eos.c2}, {"eps0", c.eos.eps0}, {"A", c.eos.A}};
  j["grid"] = {{"kind", c.grid.kind}, {"n", c.grid.n}, {"h", c.grid.h}, {"R", c.grid.R}};
  j["init"] = {{"amplitude", c.init.amplitude}, {"mode", c.init.mode}};
  json t = {{"cfl", c.time.cfl}, {"periods", c.time.periods}, {"output_every", c.time.output_every}};
  if (c.time.dt) t["dt"] = *c.time.dt;
  if (c.time.t_end) t["t_end"] = *c.time.t_end;
  j["time"] = t;
  j["suites"] = c.suites;
  j["seed"] = c.seed;
  j["instances"] = c.instances;
  j["out"] = {{"csv", c.out.csv}, {"plt", c.out.plt}, {"summary", c.out.summary}, {"verify", c.out.verify}};
  return j.dump(2);
}

SpacetimeChart make_chart(const ScenarioConfig& cfg) {
  return cfg.chart.type == "trap" ? SpacetimeChart::harmonic_trap(cfg.chart.k) : SpacetimeChart::minkowski();
}

AffineEos make_eos(const ScenarioConfig& cfg) { return AffineEos(cfg.eos.c2, cfg.eos.eps0, cfg.eos.A); }

RunResult run_evolution(const ScenarioConfig& cfg, const std::string& out_dir, std::ostream& log) {
  if (cfg.scenario != "static" && cfg.scenario != "oscillate")
    throw ConfigError("run_evolution handles the static and oscillate scenarios");
  const RadialSolver S(make_chart(cfg), make_eos(cfg), cfg.grid.n, cfg.grid.R);
  RadialState s = cfg.scenario == "static" ? S.hydrostatic() : S.perturbed(cfg.init.amplitude, cfg.init.mode);
  const RadialState s0 = s;

  const double period = S.acoustic_period();
  const double t_end = cfg.time.t_end.value_or(cfg.time.periods * period);
  const double dt_req = cfg.time.dt.value_or(S.cfl_dt(cfg.time.cfl));
  const long steps = std::max(1L, static_cast<long>(std::ceil(t_end / dt_req - 1e-9)));
  const double dt = t_end / static_cast<double>(steps);
  const long every = cfg.time.output_every > 0 ? cfg.time.output_every : std::max(1L, steps / 200);
  log << cfg.scenario << ": n = " << cfg.grid.n << ", dt = " << sci(dt) << ", steps = " << steps
      << ", acoustic period = " << sci(period) << "\n";

  RunResult res;
  std::ofstream csv = open_out(out_dir, cfg.out.csv, res);
  const auto& cols = run_csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) csv << (i ? "," : "") << cols[i];
  csv << "\n";

  double E0_start = 0.0, E1_start = 0.0, E0_drift = 0.0, Etot_drift = 0.0, E1_ratio = 0.0;
  double delta_min = INFINITY, lambda_max = 0.0, constraint_max = S.constraint_violation(s), pre_drift = 0.0;
  double vol_gap = 0.0;
  auto emit = [&](const RadialState& st) {
    const RadialEnergies E(S, st);
    const EnergyBreakdown b = E.breakdown();
    const ResidualReport rr = S.residuals(st);
    const double vo = S.volume_ode(st), vm = S.volume_mesh(st);
    if (st.t == 0.0) {
      E0_start = b.E0;
      E1_start = b.E1;
    }
    E0_drift = std::max(E0_drift, std::abs(b.E0 - E0_start) / E0_start);
    Etot_drift = std::max(Etot_drift, std::abs(b.E0 + st.exchange - E0_start) / E0_start);
    if (E1_start > 0.0) E1_ratio = std::max(E1_ratio, b.E1 / E1_start);
    delta_min = std::min(delta_min, b.delta);
    lambda_max = std::max(lambda_max, b.lambda);
    vol_gap = std::max(vol_gap, std::abs(vo - vm) / vm);
    const double row[] = {st.t,
                          st.R(),
                          b.E0,
                          b.Ekl.at({0, 0}).total(),
                          b.Ekl.at({1, 0}).total(),
                          b.Ekl.at({0, 1}).total(),
                          b.K1,
                          b.EW0,
                          b.EW1,
                          b.E1,
                          b.lambda,
                          b.delta,
                          vo,
                          vm,
                          rr.wave,
                          rr.constraint};
    for (std::size_t i = 0; i < std::size(row); ++i) csv << (i ? "," : "") << fmt(row[i]);
    csv << "\n";
  };

  emit(s);
  for (long i = 1; i <= steps; ++i) {
    const StepInfo info = S.step(s, dt);
    pre_drift = std::max(pre_drift, info.constraint_drift);
    constraint_max = std::max(constraint_max, S.constraint_violation(s));
    if (S.lambda_max(s) >= 1.0) throw NumericalAbort("velocity became null or spacelike (lambda >= 1)");
    if (i % every == 0 || i == steps) emit(s);
  }

  res.checks.push_back(check("constraint sigma + g(V,V) = 0", constraint_max <= 1e-8,
                             "max " + sci(constraint_max) + " after projection, per-step drift before projection " +
                                 sci(pre_drift) + " (bound 1e-8)"));
  res.checks.push_back(check("energy conservation", Etot_drift < 1e-5,
                             "max relative drift of E0 + exchange " + sci(Etot_drift) + ", of E0 alone " +
                                 sci(E0_drift) + " (bound 1e-5)"));
  if (cfg.scenario == "static") {
    double dev = 0.0;
    for (std::size_t j = 0; j < s.nodes(); ++j) {
      dev = std::max({dev, std::abs(s.x[j] - s0.x[j]), std::abs(s.sigma[j] - s0.sigma[j]),
                      std::abs(s.Vr[j] - s0.Vr[j]), std::abs(s.Vt[j] - s0.Vt[j])});
    }
    res.checks.push_back(check("static fixed point", dev <= 1e-8, "max field change " + sci(dev) + " (bound 1e-8)"));
  } else {
    res.checks.push_back(
        check("E1(t) <= 2 E1(0)", E1_ratio <= 2.0, "max E1(t) / E1(0) = " + fmt(E1_ratio) + " over t <= " + fmt(t_end)));
    res.checks.push_back(check("Taylor sign margin", delta_min > 0.0, "min delta(t) = " + sci(delta_min)));
    res.checks.push_back(check("small boost", lambda_max < 0.05, "max lambda(t) = " + sci(lambda_max) + " (bound 0.05)"));
  }
  res.checks.push_back(
      check("volume tracking", vol_gap < 1e-3, "max relative gap vol_ode / vol_mesh " + sci(vol_gap) + " (bound 1e-3)"));

  {
    std::ofstream plt = open_out(out_dir, cfg.out.plt, res);
    write_plot(plt, cfg.out.csv, fs::path(cfg.out.csv).stem().string() + ".png",
               {{"E0", {3}}, {"energies", {4, 5, 6, 7, 8, 9, 10}}, {"boundary radius", {2}},
                {"Taylor margin", {12}}, {"volumes", {13, 14}}, {"residuals", {15, 16}}});
  }
  std::ofstream sum = open_out(out_dir, cfg.out.summary, res);
  write_summary(sum, "run " + cfg.scenario, cfg, res);
  return res;
}

RunResult run_wave(const ScenarioConfig& cfg, const std::string& out_dir, std::ostream& log) {
  WaveProblem p;
  p.chart = make_chart(cfg);
  p.eta2 = cfg.eos.c2;
  p.R = cfg.grid.R;
  const double kw = cfg.init.mode * kPi / cfg.grid.R;
  p.psi0 = [kw](double r) { return std::abs(kw * r) < 1e-8 ? 1.0 - kw * kw * r * r / 6.0 : std::sin(kw * r) / (kw * r); };
  p.psi1 = [](double) { return 0.0; };
  WaveSolver W(p, std::max(cfg.grid.n, cfg.init.mode));
  // Period of the Minkowski mode; in the trap chart this is only the time unit.
  const double omega = kw * std::sqrt(p.eta2);
  const double period = 2.0 * kPi / omega;
  const double t_end = cfg.time.t_end.value_or(cfg.time.periods * period);
  const double dt_req = cfg.time.dt.value_or(cfg.time.cfl * kPi / W.omega_max());
  const long steps = std::max(1L, static_cast<long>(std::ceil(t_end / dt_req - 1e-9)));
  const double dt = t_end / static_cast<double>(steps);
  log << "wave: modes = " << W.modes() << ", dt = " << sci(dt) << ", steps = " << steps << "\n";
  const WaveHistory h = W.solve(dt, t_end);

  RunResult res;
  {
    std::ofstream csv = open_out(out_dir, cfg.out.csv, res);
    csv << "t,EW,psi_center,dpsi_center\n";
    const long every = cfg.time.output_every > 0 ? cfg.time.output_every : std::max(1L, steps / 400);
    for (std::size_t i = 0; i < h.t.size(); ++i) {
      if (i % static_cast<std::size_t>(every) != 0 && i + 1 != h.t.size()) continue;
      csv << fmt(h.t[i]) << "," << fmt(h.energy[i]) << "," << fmt(h.psi_center[i]) << "," << fmt(h.dpsi_center[i])
          << "\n";
    }
  }
  if (p.chart.kind() == ChartKind::Minkowski) {
    res.checks.push_back(check("wave energy conservation", h.energy_drift < 1e-6,
                               "max relative drift " + sci(h.energy_drift) + " (bound 1e-6)"));
    const double rel = std::abs(h.frequency - omega) / omega;
    res.checks.push_back(check("mode frequency", rel < 0.01,
                               "measured " + fmt(h.frequency) + " vs " + fmt(omega) + ", relative error " + sci(rel)));
  } else {
    // The conserved quantity of the trap chart carries the lapse, so E_w is only reported.
    res.checks.push_back(check("wave energy (reported only)", true, "max relative change " + sci(h.energy_drift)));
  }
  {
    std::ofstream plt = open_out(out_dir, cfg.out.plt, res);
    write_plot(plt, cfg.out.csv, fs::path(cfg.out.csv).stem().string() + ".png",
               {{"wave energy", {2}}, {"center value", {3, 4}}});
  }
  std::ofstream sum = open_out(out_dir, cfg.out.summary, res);
  write_summary(sum, "wave", cfg, res);
  return res;
}

RunResult run_verify(const ScenarioConfig& cfg, const std::vector<std::string>& suites, const std::string& out_dir,
                     std::ostream& log) {
  VerifyOptions opt;
  opt.seed = cfg.seed;
  opt.instances = cfg.instances;
  opt.R = cfg.grid.R;
  opt.lattice_h = cfg.grid.h;
  if (cfg.grid.kind == "radial") opt.radial_n = cfg.grid.n;
  if (cfg.chart.type == "trap") opt.trap_k = cfg.chart.k;

  std::vector<std::string> names;
  for (const std::string& s : suites) {
    if (!is_suite_or_group(s)) throw ConfigError("unknown suite '" + s + "'");
    for (const std::string& n : expand_suite(s))
      if (std::find(names.begin(), names.end(), n) == names.end()) names.push_back(n);
  }
  RunResult res;
  std::vector<InequalityReport> all;
  for (const std::string& n : names) {
    for (InequalityReport& r : run_suite(n, opt)) {
      std::string detail;
      if (r.identity) {
        double worst = 0.0;
        for (const auto& in : r.instances) worst = std::max(worst, in.lhs);
        detail = "residual " + sci(worst);
        if (std::isfinite(r.order)) detail += ", order " + fmt(std::round(r.order * 1000) / 1000);
      } else {
        detail = "constant " + sci(r.empirical_constant) + " within budget " + sci(r.budget);
      }
      if (!r.degenerate.empty()) detail += ", " + std::to_string(r.degenerate.size()) + " degenerate";
      for (const std::string& note : r.notes) detail += "; " + note;
      log << (r.pass ? "  pass " : "  FAIL ") << r.name << ": " << detail << "\n";
      res.checks.push_back(check(r.name, r.pass, detail));
      all.push_back(std::move(r));
    }
  }
  {
    std::ofstream csv = open_out(out_dir, cfg.out.verify, res);
    write_verify_csv(csv, all);
  }
  std::ofstream sum = open_out(out_dir, cfg.out.summary, res);
  write_summary(sum, "verify", cfg, res);
  return res;
}

RunResult run_report(const ScenarioConfig& cfg, const std::string& out_dir, std::ostream& log) {
  const fs::path p = fs::path(out_dir.empty() ? "." : out_dir) / cfg.out.csv;
  std::ifstream f(p);
  if (!f) throw ConfigError("no run output at " + p.string());
  std::string line;
  std::getline(f, line);
  std::vector<std::string> head;
  {
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) head.push_back(c);
  }
  if (head != run_csv_columns()) throw ConfigError(p.string() + " is not a run time series");
  std::map<std::string, std::vector<double>> col;
  while (std::getline(f, line)) {
    std::stringstream ss(line);
    std::size_t i = 0;
    for (std::string c; std::getline(ss, c, ',') && i < head.size(); ++i)
      col[head[i]].push_back(c.empty() ? NAN : std::stod(c));
  }
  if (col["t"].empty()) throw ConfigError(p.string() + " has no rows");
  RunResult res;
  const auto& E0 = col["E0"];
  const auto& E1 = col["E1"];
  double d0 = 0.0, r1 = 0.0;
  for (double v : E0) d0 = std::max(d0, std::abs(v - E0[0]) / E0[0]);
  for (double v : E1) r1 = std::max(r1, E1[0] > 0 ? v / E1[0] : 0.0);
  const double cmax = *std::max_element(col["res_constraint"].begin(), col["res_constraint"].end());
  const double dmin = *std::min_element(col["taylor_delta"].begin(), col["taylor_delta"].end());
  const double lmax = *std::max_element(col["lambda_max"].begin(), col["lambda_max"].end());
  res.checks.push_back(check("constraint sigma + g(V,V) = 0", cmax <= 1e-8, "max " + sci(cmax)));
  res.checks.push_back(check("E1(t) <= 2 E1(0)", r1 <= 2.0, "max ratio " + fmt(r1)));
  res.checks.push_back(check("E0 change (reported only)", true, "max relative change " + sci(d0)));
  res.checks.push_back(check("Taylor sign margin (reported only)", true, "min delta " + sci(dmin)));
  res.checks.push_back(check("boost (reported only)", true, "max lambda " + sci(lmax)));
  log << "report: " << col["t"].size() << " rows from " << p.string() << "\n";
  for (const CheckResult& c : res.checks) log << "  [" << (c.pass ? "PASS" : "FAIL") << "] " << c.name << ": " << c.detail << "\n";
  return res;
}

int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Relativistic liquid ball: evolution, wave and verification runs"};
  app.require_subcommand(1);
  std::string config, out_dir = ".", suite;
  std::uint64_t seed = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "JSON scenario file");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "seed for the random test fields");
  };
  CLI::App* run = app.add_subcommand("run", "evolve the static or oscillating ball");
  add_common(run);
  CLI::App* wave = app.add_subcommand("wave", "spectral run of the enthalpy wave equation");
  add_common(wave);
  CLI::App* verify = app.add_subcommand("verify", "identity and inequality suites");
  add_common(verify);
  verify->add_option("--suite", suite, "suite or group name (default from config, else all)");
  CLI::App* report = app.add_subcommand("report", "checks recomputed from an existing run CSV");
  add_common(report);
  run->get_option("--config")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    ScenarioConfig cfg = config.empty() ? ScenarioConfig{} : load_config(config);
    if (!app.get_subcommand("run")->parsed() && config.empty() && app.get_subcommand("wave")->parsed()) {
      cfg.scenario = "wave";
      cfg.chart.type = "minkowski";
      cfg.eos.c2 = 1.0;
      cfg.grid.kind = "spectral";
      cfg.grid.n = 32;
      cfg.time.periods = 10.0;
      cfg.out.csv = "wave.csv";
      cfg.out.plt = "wave.plt";
    }
    for (auto* sub : {run, wave, verify, report})
      if (sub->parsed() && sub->count("--seed")) cfg.seed = seed;

    RunResult res;
    if (run->parsed()) {
      res = cfg.scenario == "wave" ? run_wave(cfg, out_dir, out) : run_evolution(cfg, out_dir, out);
    } else if (wave->parsed()) {
      if (cfg.scenario != "wave") throw ConfigError("config key 'scenario': the wave subcommand needs \"wave\"");
      res = run_wave(cfg, out_dir, out);
    } else if (verify->parsed()) {
      const std::vector<std::string> suites = suite.empty() ? cfg.suites : std::vector<std::string>{suite};
      res = run_verify(cfg, suites, out_dir, out);
    } else {
      res = run_report(cfg, out_dir, out);
    }
    for (const CheckResult& c : res.checks)
      if (!verify->parsed() && !report->parsed())
        out << "  [" << (c.pass ? "PASS" : "FAIL") << "] " << c.name << ": " << c.detail << "\n";
    for (const std::string& f : res.files) out << "wrote " << f << "\n";
    out << (res.ok() ? "ok" : "check failure") << "\n";
    return res.ok() ? kExitOk : kExitCheckFailure;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const AssumptionViolation& e) {
    err << "assumption violated: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const NumericalAbort& e) {
    err << "numerical abort: " << e.what() << "\n";
    return kExitNumericalAbort;
  } catch (const ChartDomainError& e) {
    err << "numerical abort: " << e.what() << "\n";
    return kExitNumericalAbort;
  } catch (const std::exception& e) {
    err << "numerical abort: " << e.what() << "\n";
    return kExitNumericalAbort;
  }
}

}  // namespace fluidlab
