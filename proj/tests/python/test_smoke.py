"""Smoke tests for the python module: the bindings expose the core
operations and the numbers behave."""

import math

import pytest

import apcsim


def test_kinetics_scalars():
    assert apcsim.xi(0.0) == 0.0
    assert apcsim.xi(1.0) == pytest.approx(0.5, rel=1e-15)
    assert apcsim.xi(3.0) == pytest.approx(0.9, rel=1e-15)
    assert apcsim.zeta(2.0, 1.0, 3.0) == pytest.approx(0.5, rel=1e-15)
    with pytest.raises(ValueError):
        apcsim.zeta(0.0, 3.0, 1.0)


def test_imitation_terms():
    p = apcsim.BehaviorParams()
    assert apcsim.imitation_f(0.0, 0.7, p) == 0.0
    assert apcsim.imitation_f(0.3, 0.6, p) == pytest.approx(
        0.086284761906875484, rel=1e-15
    )
    # alpha32 > alpha23: net flow toward panic at equal densities
    assert apcsim.imitation_h(0.4, 0.4, p) < 0.0


def test_reaction_rhs_conserves():
    p = apcsim.BehaviorParams()
    sched = apcsim.TransitionSchedule.constants(gamma=1.0, phi=0.0)
    d = apcsim.reaction_rhs(0.0, [0.2, 0.3, 0.3, 0.1, 0.1, 0.0], sched, p)
    assert sum(d) == pytest.approx(0.0, abs=1e-15)
    d5 = apcsim.reaction_rhs_pde(0.0, [0.2, 0.3, 0.3, 0.1, 0.1], sched, p)
    assert list(d5) == list(d[:5])


def test_ode_integration_conserves():
    traj = apcsim.integrate(t1=25.0, dt=0.01)
    assert traj.times[0] == 0.0
    assert traj.times[-1] == 25.0
    assert apcsim.conservation_report(traj) <= 1e-10
    first = traj.states[0]
    assert first[3] == 1.0  # everyone starts in the daily compartment


def test_schedules():
    ramps = apcsim.TransitionSchedule.smoothsteps(1.0, 3.0, 20.0, 70.0)
    assert apcsim.gamma_at(2.0, ramps) == pytest.approx(0.5, rel=1e-15)
    assert apcsim.phi_at(45.0, ramps) == pytest.approx(0.5, rel=1e-15)


def test_config_round_trip():
    cfg = apcsim.builtin_scenario("scenario2", ["transport.d2=0.06"])
    text = apcsim.echo_config(cfg)
    assert "transport.d2 = 0.06" in text
    back = apcsim.parse_config(text)
    assert back == cfg
    with pytest.raises(ValueError):
        apcsim.parse_config("transport.bogus = 1")


SMALL_ROOM = """
geometry.width = 2
geometry.height = 1
geometry.nx = 40
geometry.ny = 20
initial.bump = 1,0.5,0.3,1
run.t_end = 5
run.snapshots =
run.output_interval = 1
"""


def test_small_scenario_run():
    cfg = apcsim.parse_config(SMALL_ROOM)
    out = apcsim.run_scenario(cfg)
    assert out["steps"] > 0
    assert out["initial_mass"] == pytest.approx(1.0, abs=1e-12)
    assert 0.0 < out["final_mass"] < 1.0
    assert out["outflow_cum"] > 0.0
    assert abs(out["closure_residual"]) <= 1e-10
    assert out["min_density"] >= -1e-12
    assert out["max_mass_step_increase"] <= 1e-14
    assert out["direction_max_divergence"] <= 1e-8
    # the series is a monotone evacuation curve
    us = out["series_U"]
    assert all(b <= a + 1e-14 for a, b in zip(us, us[1:]))
    assert math.isclose(us[0], 1.0, abs_tol=1e-12)


def test_builtin_scenario_run():
    cfg = apcsim.builtin_scenario(
        "scenario1", ["run.t_end=20", "run.snapshots=", "run.output_interval=5"]
    )
    out = apcsim.run_scenario(cfg)
    assert out["closure_residual"] == pytest.approx(0.0, abs=1e-10)
    assert out["final_mass"] <= out["initial_mass"]


def test_solver_error_maps_to_runtime_error():
    cfg = apcsim.parse_config(SMALL_ROOM, ["run.cfl_safety=2.5"])
    with pytest.raises(RuntimeError):
        apcsim.run_scenario(cfg)
