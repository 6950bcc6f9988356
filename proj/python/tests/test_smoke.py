import math
import os

import pytest

import fluidlab


def test_eos_roundtrip():
    eos = fluidlab.AffineEos(0.5, 1.0, 1.0)
    s0 = eos.sigma0()
    assert abs(eos.p(s0)) < 1e-14
    assert eos.sigma_from_p(eos.p(3.0 * s0)) == pytest.approx(3.0 * s0)
    assert eos.de(s0) == pytest.approx(0.5 / s0)


def test_invalid_eos_raises():
    with pytest.raises(fluidlab.AssumptionViolation):
        fluidlab.AffineEos(1.5)


def test_radial_run_conserves_constraint():
    solver = fluidlab.RadialSolver(fluidlab.SpacetimeChart.harmonic_trap(0.1), fluidlab.AffineEos(0.5), 32)
    state = solver.perturbed(1e-2)
    for _ in range(20):
        solver.step(state, solver.cfl_dt())
    assert state.t > 0.0
    assert solver.constraint_violation(state) < 1e-8
    e = solver.energies(state)
    assert e["E0"] > 0.0
    assert e["E1"] == pytest.approx(e["Ekl"][(0, 0)] + e["Ekl"][(1, 0)] + e["Ekl"][(0, 1)] + e["K1"] + e["EW1"])
    delta, degenerate = fluidlab.taylor_margin(state, fluidlab.AffineEos(0.5))
    assert delta > 0.0 and not degenerate


def test_static_minkowski_energy():
    eos = fluidlab.AffineEos(0.5, 1.3, 1.0)
    solver = fluidlab.RadialSolver(fluidlab.SpacetimeChart.minkowski(), eos, 64)
    e = solver.energies(solver.hydrostatic())
    assert e["E0"] == pytest.approx(1.3 * 4.0 * math.pi / 3.0, rel=1e-10)
    assert e["lambda"] == 0.0


def test_suite_and_cli(tmp_path):
    reps = fluidlab.run_suite("poin", instances=5)
    assert reps and all(r["pass"] for r in reps)
    assert "poin" in fluidlab.suite_names()
    code, _, err = fluidlab.cli(["verify", "--suite", "nosuch", "--out", str(tmp_path)])
    assert code == 2 and "nosuch" in err
    config = os.path.join(os.environ.get("FLUIDLAB_CONFIG_DIR", "configs"), "static.json")
    code, _, _ = fluidlab.cli(["run", "--config", config, "--out", str(tmp_path)])
    assert code == 0
    assert (tmp_path / "static.csv").exists()
    with pytest.raises(fluidlab.ConfigError):
        fluidlab.config_echo('{"grid": {"nn": 1}}')
