#include "fluidlab/boundary.hpp"
#include "fluidlab/cli.hpp"
#include "fluidlab/energies.hpp"
#include "fluidlab/eos.hpp"
#include "fluidlab/evolve.hpp"
#include "fluidlab/fields.hpp"
#include "fluidlab/inequalities.hpp"
#include "fluidlab/spacetime.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace fluidlab;

namespace {

py::dict energies_dict(const RadialSolver& S, const RadialState& s) {
  const EnergyBreakdown b = RadialEnergies(S, s).breakdown();
  py::dict d;
  d["t"] = b.t;
  d["E0"] = b.E0;
  py::dict ekl;
  for (const auto& [kl, parts] : b.Ekl) ekl[py::make_tuple(kl.first, kl.second)] = parts.total();
  d["Ekl"] = ekl;
  d["K1"] = b.K1;
  d["EW0"] = b.EW0;
  d["EW1"] = b.EW1;
  d["E1"] = b.E1;
  d["delta"] = b.delta;
  d["lambda"] = b.lambda;
  return d;
}

py::list reports_list(const std::vector<InequalityReport>& reps) {
  py::list out;
  for (const InequalityReport& r : reps) {
    py::dict d;
    d["name"] = r.name;
    d["suite"] = r.suite;
    d["identity"] = r.identity;
    d["pass"] = r.pass;
    d["empirical_constant"] = r.empirical_constant;
    d["budget"] = r.budget;
    d["order"] = r.order;
    py::list ratios;
    for (const InequalityInstance& in : r.instances) ratios.append(in.ratio);
    d["ratios"] = ratios;
    out.append(d);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(fluidlab, m) {
  m.doc() = "Relativistic liquid ball: radial evolution, energies and inequality checks";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<AssumptionViolation>(m, "AssumptionViolation", PyExc_ValueError);
  py::register_exception<NumericalAbort>(m, "NumericalAbort", PyExc_RuntimeError);
  py::register_exception<ChartDomainError>(m, "ChartDomainError", PyExc_RuntimeError);

  py::class_<SpacetimeChart>(m, "SpacetimeChart")
      .def_static("minkowski", &SpacetimeChart::minkowski)
      .def_static("harmonic_trap", &SpacetimeChart::harmonic_trap, py::arg("k"))
      .def_property_readonly("k", &SpacetimeChart::k);

  py::class_<AffineEos>(m, "AffineEos")
      .def(py::init<double, double, double>(), py::arg("c2"), py::arg("eps0") = 1.0, py::arg("A") = 1.0)
      .def("c2", &AffineEos::c2)
      .def("sigma0", &AffineEos::sigma0)
      .def("rho0", &AffineEos::rho0)
      .def("p", &AffineEos::p)
      .def("rho", &AffineEos::rho)
      .def("eps", &AffineEos::eps)
      .def("e", &AffineEos::e)
      .def("de", &AffineEos::de)
      .def("sigma_from_p", &AffineEos::sigma_from_p);

  py::class_<RadialState>(m, "RadialState")
      .def_readonly("t", &RadialState::t)
      .def_readonly("x", &RadialState::x)
      .def_readonly("sigma", &RadialState::sigma)
      .def_readonly("Vr", &RadialState::Vr)
      .def_readonly("Vt", &RadialState::Vt)
      .def_readonly("exchange", &RadialState::exchange)
      .def_property_readonly("R", &RadialState::R);

  py::class_<RadialSolver>(m, "RadialSolver")
      .def(py::init<SpacetimeChart, AffineEos, int, double>(), py::arg("chart"), py::arg("eos"), py::arg("n"),
           py::arg("R0") = 1.0)
      .def("hydrostatic", &RadialSolver::hydrostatic)
      .def("perturbed", &RadialSolver::perturbed, py::arg("amp"), py::arg("mode") = 1)
      .def("step", [](const RadialSolver& S, RadialState& s, double dt) { return S.step(s, dt).constraint_drift; })
      .def("cfl_dt", &RadialSolver::cfl_dt, py::arg("cfl") = 0.5)
      .def("acoustic_period", &RadialSolver::acoustic_period)
      .def("constraint_violation", &RadialSolver::constraint_violation)
      .def("lambda_max", &RadialSolver::lambda_max)
      .def("volume_ode", &RadialSolver::volume_ode)
      .def("volume_mesh", &RadialSolver::volume_mesh)
      .def("energies", &energies_dict);

  m.def(
      "taylor_margin",
      [](const RadialState& s, const AffineEos& eos) {
        const TaylorMargin t = taylor_sign_margin(s.x, s.sigma, eos);
        return py::make_tuple(t.delta, t.degenerate);
      },
      "Taylor sign margin -N p at the boundary and whether it is degenerate");

  m.def("suite_names", &suite_names);
  m.def(
      "run_suite",
      [](const std::string& name, std::uint64_t seed, int instances) {
        VerifyOptions o;
        o.seed = seed;
        o.instances = instances;
        return reports_list(run_suite(name, o));
      },
      py::arg("name"), py::arg("seed") = 0xE57, py::arg("instances") = 20);

  m.def("config_echo", [](const std::string& text) { return config_echo(parse_config(text)); },
        "Parse a JSON config and return its normalized form");

  m.def(
      "cli",
      [](std::vector<std::string> args) {
        args.insert(args.begin(), "fluidlab");
        std::vector<char*> argv;
        for (std::string& a : args) argv.push_back(a.data());
        std::ostringstream out, err;
        const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Run the command line interface; returns (exit code, stdout, stderr)");
}
