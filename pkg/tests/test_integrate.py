from __future__ import annotations

import math
from fractions import Fraction as F

import pytest

from hidden_dynamics.integrate import (Event, IntegrationError, IntegratorConfig,
                                       Trajectory, classify_outcome,
                                       detect_limit_cycle, integrate_adaptive,
                                       scan_parameter)
from hidden_dynamics.systems import oscillating_example_1, planar_switch_benchmark

TIGHT = IntegratorConfig(rtol=1e-10, atol=1e-12)


def test_exponential_decay():
    traj = integrate_adaptive(lambda t, y: (-y[0],), (1.0,), TIGHT, tau_end=1.0)
    assert traj.final_state[0] == pytest.approx(math.exp(-1.0), abs=1e-8)
    assert traj.status == "reached-end"


def test_harmonic_energy_conservation():
    traj = integrate_adaptive(lambda t, y: (y[1], -y[0]), (1.0, 0.0), TIGHT,
                              tau_end=100.0)
    u, v = traj.final_state
    assert u * u + v * v == pytest.approx(1.0, abs=1e-8)


def test_times_strictly_increasing():
    traj = integrate_adaptive(lambda t, y: (y[1], -y[0]), (1.0, 0.0),
                              IntegratorConfig(), tau_end=10.0)
    assert all(b > a for a, b in zip(traj.taus, traj.taus[1:]))


def test_linear_event_location():
    traj = integrate_adaptive(lambda t, y: (1.0,), (0.0,), TIGHT,
                              events=[Event(lambda t, y: y[0] - 1.0, "hit",
                                            terminal=True)], tau_end=5.0)
    assert traj.status == "event:hit"
    ev = traj.events[0]
    assert ev.tau == pytest.approx(1.0, abs=1e-10)
    assert abs(ev.value) <= 1e-10


def test_event_states_satisfy_condition_and_no_straddle():
    g = lambda t, y: y[0]
    traj = integrate_adaptive(lambda t, y: (y[1], -y[0]), (1.0, 0.0), TIGHT,
                              events=[Event(g, "zero")], tau_end=20.0)
    assert len(traj.events) == 6          # u = cos crosses zero 6 times in 20
    for ev in traj.events:
        assert abs(g(ev.tau, ev.state)) <= 1e-10
    for (t0, s0), (t1, s1) in zip(zip(traj.taus, traj.states),
                                  zip(traj.taus[1:], traj.states[1:])):
        g0, g1 = g(t0, s0), g(t1, s1)
        if abs(g0) > 1e-10 and abs(g1) > 1e-10:
            assert (g0 > 0) == (g1 > 0), "accepted step straddles a sign change"


def test_event_direction_filter():
    rising = integrate_adaptive(lambda t, y: (y[1], -y[0]), (1.0, 0.0), TIGHT,
                                events=[Event(lambda t, y: y[0], "up", direction=1)],
                                tau_end=20.0)
    assert len(rising.events) == 3
    assert all(e.direction == 1 for e in rising.events)


def test_fixed_step_order_at_least_four():
    def err_at(h):
        cfg = IntegratorConfig(rtol=1e6, atol=1e6, max_step=h)
        traj = integrate_adaptive(lambda t, y: (y[1], -y[0]), (1.0, 0.0), cfg,
                                  tau_end=4.0)
        return abs(traj.final_state[0] - math.cos(4.0))

    e1, e2 = err_at(0.1), err_at(0.05)
    order = math.log2(e1 / e2)
    assert order >= 4.0, f"observed order {order:.2f}"


def test_nonfinite_rhs_raises():
    def rhs(t, y):
        return (float("nan"),) if t > 0.5 else (1.0,)
    with pytest.raises(IntegrationError):
        integrate_adaptive(rhs, (0.0,), IntegratorConfig(), tau_end=2.0)


def test_csv_export(tmp_path):
    traj = integrate_adaptive(lambda t, y: (-y[0],), (1.0,), IntegratorConfig(),
                              tau_end=1.0)
    path = tmp_path / "traj.csv"
    traj.write_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0] == "tau,y1,event"
    assert len(lines) == len(traj.taus) + 1


# ----------------------------------------------------------------------
# limit-cycle detection


def circle_rhs(t, y):
    u, v = y
    r2 = u * u + v * v
    return (-v + u * (1 - r2), u + v * (1 - r2))


def test_detect_limit_cycle_unit_circle():
    traj = integrate_adaptive(circle_rhs, (0.1, 0.0), TIGHT,
                              events=[Event(lambda t, y: y[0], "section",
                                            direction=1)], tau_end=120.0)
    found = detect_limit_cycle(traj, 0.0, cycle_tol=1e-7)
    assert found is not None
    period, states = found
    assert period == pytest.approx(2 * math.pi, rel=0.01)
    assert all(abs(math.hypot(*s) - 1.0) < 1e-6 for s in states)


def test_detect_limit_cycle_from_states_without_events():
    traj = integrate_adaptive(circle_rhs, (0.1, 0.0), TIGHT, tau_end=120.0)
    found = detect_limit_cycle(traj, 0.0, cycle_tol=1e-5)
    assert found is not None
    assert found[0] == pytest.approx(2 * math.pi, rel=0.01)


def test_detect_limit_cycle_absent():
    traj = integrate_adaptive(lambda t, y: (-y[0], -y[1]), (1.0, 0.5), TIGHT,
                              tau_end=30.0)
    assert detect_limit_cycle(traj, 0.2) is None


# ----------------------------------------------------------------------
# classification


def test_classify_equilibrium_below_onset(fast_config):
    out = classify_outcome(oscillating_example_1(kappa=0.9), (-0.5, -1.0),
                           fast_config)
    assert out.tag == "equilibrium"
    assert out.point == pytest.approx((0.0, 0.0), abs=1e-6)


def test_classify_cycle_above_onset(fast_config):
    out = classify_outcome(oscillating_example_1(kappa=1.05), (-0.5, -1.0),
                           fast_config)
    assert out.tag == "limit-cycle"
    assert out.period is not None and out.amplitude > 0.1
    assert len(out.section_points) >= 2


def test_classify_exit_composition(fast_config):
    out = classify_outcome(oscillating_example_1(kappa=1.2), (-0.5, -1.0),
                           fast_config)
    assert out.tag == "exit"
    assert out.exit.kind == "quadrant" and out.exit.label == "++"


def test_classify_exit_factor_corner(fast_config):
    out = classify_outcome(oscillating_example_1(kappa=1.68, mode="factor"),
                           (-0.5, -1.0), fast_config)
    assert out.tag == "exit"
    assert out.exit.kind == "corner" and out.exit.label == "(1,1)"


def test_classify_is_deterministic(fast_config):
    a = classify_outcome(oscillating_example_1(kappa=1.05), (-0.5, -1.0), fast_config)
    b = classify_outcome(oscillating_example_1(kappa=1.05), (-0.5, -1.0), fast_config)
    assert a.tag == b.tag
    assert a.tau == b.tau
    assert a.state == b.state
    assert a.period == b.period


def test_classify_undecided_at_horizon():
    cfg = IntegratorConfig(horizon=5.0)
    out = classify_outcome(oscillating_example_1(kappa=1.001), (-0.5, -1.0), cfg)
    assert out.tag == "undecided"
    assert out.horizon == 5.0


def test_classify_rejects_outside_entry(fast_config):
    with pytest.raises(ValueError):
        classify_outcome(oscillating_example_1(), (2.0, 0.0), fast_config)


def test_factor_trajectories_stay_in_box(fast_config):
    out = classify_outcome(oscillating_example_1(kappa=1.25, mode="factor"),
                           (-0.5, -1.0), fast_config, return_trajectory=True)
    m = max(max(abs(s[0]), abs(s[1])) for s in out.trajectory.states)
    assert m <= 1.0 + 1e-9


def test_scan_uniform_below_one_has_no_bracket(fast_config):
    res = scan_parameter(lambda k: oscillating_example_1(kappa=k), (0.8, 0.9),
                         (-0.5, -1.0), fast_config)
    assert [o.tag for _, o in res.points] == ["equilibrium", "equilibrium"]
    assert res.brackets == []


def test_scan_brackets_change(fast_config):
    res = scan_parameter(lambda k: oscillating_example_1(kappa=k), (1.1, 1.2),
                         (-0.5, -1.0), fast_config, kappa_tol=1e-3)
    assert len(res.brackets) == 1
    br = res.brackets[0]
    assert br.hi - br.lo <= 1e-3 + 1e-12
    assert {br.tag_lo, br.tag_hi} == {"limit-cycle", "exit"}
    assert 1.1 < br.lo and br.hi < 1.2


def test_scan_empty_grid(fast_config):
    with pytest.raises(ValueError):
        scan_parameter(lambda k: oscillating_example_1(kappa=k), (),
                       (-0.5, -1.0), fast_config)


def test_benchmark_classifications(fast_config):
    ramp = classify_outcome(planar_switch_benchmark("composition"), (0.0, -1.0),
                            fast_config)
    hill = classify_outcome(planar_switch_benchmark("factor"), (0.0, -1.0),
                            fast_config)
    assert ramp.tag == "exit" and ramp.exit.label == "++"
    assert hill.tag == "equilibrium"
    assert hill.point == pytest.approx((0.17980589839890, -0.69519410160110), abs=1e-9)


def test_config_validation():
    with pytest.raises(ValueError):
        IntegratorConfig(rtol=-1.0)
    with pytest.raises(ValueError):
        IntegratorConfig(horizon=0.0)
