from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hidden_dynamics.switching import (HiddenFactor, SwitchingProfile,
                                       check_switch_properties, eval_switch,
                                       eval_switch_deriv, hill_factor)

RAMP = SwitchingProfile.ramp()
CUBIC = SwitchingProfile.smooth_cubic()


def test_ramp_values():
    assert eval_switch(RAMP, 0.0) == 0.0
    assert eval_switch(RAMP, 2.0) == 1.0
    assert eval_switch(RAMP, -5.0) == -1.0
    assert eval_switch(RAMP, 0.3) == 0.3


def test_smooth_cubic_values():
    assert eval_switch(CUBIC, 0.5) == pytest.approx(0.6875, abs=0)
    assert eval_switch(CUBIC, 1.0) == 1.0
    assert eval_switch(CUBIC, 3.0) == 1.0


def test_derivatives():
    assert eval_switch_deriv(RAMP, 0.3) == 1.0
    assert eval_switch_deriv(RAMP, 1.5) == 0.0
    assert eval_switch_deriv(RAMP, 1.0) == 0.0       # one-sided corner rule
    assert eval_switch_deriv(CUBIC, 0.0) == 1.5


@given(st.floats(-3, 3))
def test_profiles_are_odd(u):
    for prof in (RAMP, CUBIC):
        assert eval_switch(prof, -u) == -eval_switch(prof, u)


@given(st.floats(-0.99, 0.99))
def test_finite_difference_slope(u):
    h = 1e-5
    for prof in (RAMP, CUBIC):
        if abs(abs(u) - 1.0) < 10 * h:
            continue
        fd = (eval_switch(prof, u + h) - eval_switch(prof, u - h)) / (2 * h)
        assert fd == pytest.approx(eval_switch_deriv(prof, u), abs=1e-6)


def test_tabulated_interpolation_and_validation():
    prof = SwitchingProfile.tabulated([(-1, -1), (0, 0), (0.5, 0.9), (1, 1)])
    assert eval_switch(prof, 0.25) == pytest.approx(0.45)
    assert eval_switch(prof, 2.0) == 1.0
    with pytest.raises(ValueError):
        SwitchingProfile.tabulated([(0, 0), (0, 1)])
    with pytest.raises(ValueError):
        SwitchingProfile("ramp", kappa=0.0)
    with pytest.raises(ValueError):
        SwitchingProfile("sigmoid-ish")


def test_hill_factor_values():
    assert hill_factor(0.0) == 0.25
    assert hill_factor(1.0) == 0.0
    assert hill_factor(-1.0) == 0.0
    assert hill_factor(0.5) == 0.1875
    assert hill_factor(0.0, theta=2.0) == 0.125
    with pytest.raises(ValueError):
        hill_factor(1.5)


def test_hidden_factor_kinds():
    unit = HiddenFactor("unit")
    hill = HiddenFactor("hill")
    assert unit.value(0.7) == 1.0 and unit.deriv(0.7) == 0.0
    assert hill.value(0.5) == 0.1875
    assert hill.deriv(0.5) == -0.25
    with pytest.raises(ValueError):
        HiddenFactor("bogus")


def test_admissibility_ramp_and_cubic():
    assert check_switch_properties(RAMP).ok
    assert check_switch_properties(CUBIC).ok


def test_admissibility_flags_staircase():
    stairs = SwitchingProfile.tabulated(
        [(-1, -1), (-0.5, -1), (-0.25, -0.2), (0.25, 0.2), (0.5, 1), (1, 1)])
    rep = check_switch_properties(stairs)
    assert not rep.ok
    assert "pi' > 0" in rep.failures


def test_admissibility_flags_convexity():
    # odd, increasing, saturating, but convex on (0, 1)
    bad = SwitchingProfile.tabulated([(-1, -1), (-0.9, -0.1), (0.9, 0.1), (1, 1)])
    rep = check_switch_properties(bad)
    assert not rep.ok
    assert "pi'' <= 0 on (0,1)" in rep.failures


def test_admissibility_grid_floor():
    with pytest.raises(ValueError):
        check_switch_properties(RAMP, grid=32)


def test_serialization_round_trip():
    prof = SwitchingProfile.tabulated([(-1, -1), (0, 0), (1, 1)], kappa=2.5)
    again = SwitchingProfile.from_dict(prof.to_dict())
    assert again == prof
