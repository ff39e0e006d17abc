from __future__ import annotations

import math
import random
from fractions import Fraction as F

import pytest

from hidden_dynamics.bifurcation import (PolySystem2D, first_lyapunov_coefficient,
                                         fixed_points, hopf_detect, hopf_report,
                                         jacobian_pqrs, nullcline_slope_report,
                                         stability_change_analysis,
                                         supercritical_multilinear)
from hidden_dynamics.exactalg import Poly2, QuadExt
from hidden_dynamics.hidden import HiddenSystem, MultilinearCoeffs
from hidden_dynamics.integrate import IntegratorConfig, classify_outcome
from hidden_dynamics.switching import SwitchingProfile
from hidden_dynamics.systems import (DEL_BUONO_BOX_POINT, DEL_BUONO_POINT,
                                     del_buono_box, del_buono_modified,
                                     oscillating_example_1, oscillating_example_2)


# ----------------------------------------------------------------------
# fixed points


def test_fixed_points_example1_origin_only():
    fps = fixed_points(oscillating_example_1().coeffs)
    assert len(fps) == 1
    assert (fps.points[0].u, fps.points[0].v) == (0.0, 0.0)


def test_fixed_points_del_buono():
    fps = fixed_points(del_buono_modified(F(1), F(2)).coeffs)
    assert len(fps) == 1
    p = fps.points[0]
    assert p.exact[0].reduce() == F(9, 10)
    assert p.exact[1].reduce() == F(1, 2)


def grid_has_no_interior_crossing(coeffs, n=400):
    """Sign-scan oracle: both nullclines never vanish together inside."""
    best = math.inf
    for i in range(n + 1):
        u = -1 + 2 * i / n
        for j in range(n + 1):
            v = -1 + 2 * j / n
            r = max(abs(float(coeffs.eval_u(u, v))), abs(float(coeffs.eval_v(u, v))))
            best = min(best, r)
    return best > 2.0 / n


def test_fixed_points_empty_when_offset_large():
    co = MultilinearCoeffs(F(1), F(-1), F(1), F(10), F(11, 10), F(-2), F(1), F(0))
    assert len(fixed_points(co)) == 0
    assert grid_has_no_interior_crossing(co, n=200)


def test_fixed_points_coincident_nullclines_flagged():
    co = MultilinearCoeffs(F(1), F(-1), F(1), F(0), F(2), F(-2), F(2), F(0))
    fps = fixed_points(co)
    assert fps.nullclines_coincide


def test_fixed_points_float_path():
    fps = fixed_points(oscillating_example_1(a2=1.1).coeffs)
    assert len(fps) == 1 and fps.points[0].exact is None or fps.points[0].exact


# ----------------------------------------------------------------------
# Jacobians


def test_jacobian_example1():
    j = jacobian_pqrs(oscillating_example_1(kappa=F(1)), (F(0), F(0)))
    assert (j.p, j.q, j.r, j.s) == (-1, 1, -2, 1)
    assert j.det == 1 and j.trace == 0
    assert j.omega == 1.0


def test_jacobian_example2():
    j = jacobian_pqrs(oscillating_example_2(kappa=F(1)), (F(0), F(0)))
    assert (j.p, j.q, j.r, j.s) == (-1, 5, F(-1, 2), 1)
    assert j.det == F(3, 2)


def test_jacobian_example1_factor():
    j = jacobian_pqrs(oscillating_example_1(kappa=F(1), mode="factor"), (F(0), F(0)))
    assert (j.p, j.q, j.r, j.s) == (F(-1, 4), F(1, 4), F(-1, 2), F(1, 4))


def test_jacobian_factor_boundary_saddle_uses_product_rule():
    a2 = F(11, 10)
    sys = oscillating_example_1(a2=a2, kappa=F(1), mode="factor")
    vstar = 2 / (a2 + 1)
    j = jacobian_pqrs(sys, (F(1), vstar))
    # vertical eigenvector with positive eigenvalue ((a2+1)^2 - 4) k/(4(a2+1))
    assert j.q == 0
    lam_unstable = j.s
    assert lam_unstable == ((a2 + 1) ** 2 - 4) / (4 * (a2 + 1))
    assert j.p == -2 * (3 - a2) / (4 * (a2 + 1)) * 4 / 4 or float(j.p) < 0


def test_jacobian_kappa_scaling():
    j1 = jacobian_pqrs(oscillating_example_1(kappa=F(1)), (F(0), F(0)))
    j2 = jacobian_pqrs(oscillating_example_1(kappa=F(2)), (F(0), F(0)))
    assert (j2.p, j2.q) == (j1.p, j1.q)
    assert (j2.r, j2.s) == (2 * j1.r, 2 * j1.s)


def test_jacobian_rejects_non_fixed_point():
    with pytest.raises(ValueError):
        jacobian_pqrs(oscillating_example_1(kappa=F(1)), (F(1, 2), F(1, 2)))


def test_det_sign_invariant_under_positive_diagonal():
    rng = random.Random(5)
    for _ in range(50):
        p, q, r, s = (rng.uniform(-3, 3) for _ in range(4))
        d1, d2 = rng.uniform(0.01, 5), rng.uniform(0.01, 5)
        det = p * s - q * r
        det_scaled = (p * d1) * (s * d2) - (q * d2) * (r * d1)
        if det != 0:
            assert (det > 0) == (det_scaled > 0)


# ----------------------------------------------------------------------
# Hopf detection


def test_hopf_example1_family():
    hp = hopf_detect(lambda k: oscillating_example_1(kappa=k), (F(1, 2), F(2)),
                     point_tracker=lambda k: (F(0), F(0)))
    assert hp.is_hopf
    assert hp.param == 1
    assert float(hp.det) == 1.0 and hp.omega == 1.0
    assert hp.transversality == F(1, 2)


def test_hopf_example2_family():
    hp = hopf_detect(lambda k: oscillating_example_2(kappa=k), (F(1, 2), F(2)),
                     point_tracker=lambda k: (F(0), F(0)))
    assert hp.param == 1 and hp.det == F(3, 2)


def test_hopf_del_buono_in_mu():
    hp = hopf_detect(lambda mu: del_buono_modified(F(1), mu), (F(1), F(3)),
                     point_tracker=lambda mu: DEL_BUONO_POINT)
    assert hp.param == 2
    assert hp.transversality == F(1, 2)
    assert float(hp.det) == 4.0


def test_hopf_requires_sign_change():
    with pytest.raises(ValueError):
        hopf_detect(lambda k: oscillating_example_1(kappa=k), (F(1, 4), F(1, 2)),
                    point_tracker=lambda k: (F(0), F(0)))


def test_hopf_negative_det_not_hopf():
    # u' = v-like coupling with qr > 0 gives det < 0 at the trace zero
    co = MultilinearCoeffs(F(0), F(-1), F(1), F(0), F(0), F(1), F(1), F(0))
    hp = hopf_detect(lambda k: HiddenSystem(co, kappa=k), (F(1, 2), F(2)),
                     point_tracker=lambda k: (F(0), F(0)))
    assert not hp.is_hopf
    assert "not a Hopf point" in hp.reason


# ----------------------------------------------------------------------
# criticality, closed form


def test_supercritical_example1():
    crit = supercritical_multilinear(oscillating_example_1(a2=F(11, 10)).coeffs,
                                     (F(0), F(0)))
    assert crit.supercritical and not crit.subcritical
    assert crit.forms_agree
    assert crit.a == F(-79, 800)


def test_supercritical_sign_flips_past_sqrt2():
    crit = supercritical_multilinear(oscillating_example_1(a2=F(3, 2)).coeffs,
                                     (F(0), F(0)))
    assert not crit.supercritical and crit.subcritical


def test_supercritical_example2():
    crit = supercritical_multilinear(oscillating_example_2(a2=F(8, 5)).coeffs,
                                     (F(0), F(0)))
    assert crit.supercritical and crit.forms_agree


def test_supercritical_requires_hopf_point():
    co = oscillating_example_1(kappa=F(2)).scaled_coeffs()
    with pytest.raises(ValueError):
        supercritical_multilinear(co, (F(0), F(0)))


def random_hopf_instance(rng):
    """Random multilinear system tuned to its own Hopf point, or None."""
    vals = [F(rng.randint(-40, 40), rng.randint(1, 8)) for _ in range(8)]
    co = MultilinearCoeffs(*vals)
    try:
        fps = fixed_points(co)
    except ZeroDivisionError:
        return None
    for fp in fps:
        if fp.exact is None or not fp.exact[0].is_rational():
            continue
        u, v = fp.exact[0].reduce(), fp.exact[1].reduce()
        p = co.a1 * v + co.b1
        s0 = co.a2 * u + co.c2
        if s0 == 0 or p == 0:
            continue
        kappa = -p / s0
        if kappa <= 0:
            continue
        scaled = co.scale_second_row(kappa)
        j = jacobian_pqrs(HiddenSystem(scaled), (u, v))
        if j.det <= 0:
            continue
        return scaled, (u, v)
    return None


def test_two_criticality_forms_agree_on_random_hopf_instances():
    rng = random.Random(2024)
    found = 0
    while found < 25:
        inst = random_hopf_instance(rng)
        if inst is None:
            continue
        co, pt = inst
        crit = supercritical_multilinear(co, pt)
        assert crit.forms_agree
        found += 1


def test_fixed_point_identities_pq_and_rs():
    rng = random.Random(99)
    found = 0
    while found < 25:
        inst = random_hopf_instance(rng)
        if inst is None:
            continue
        co, pt = inst
        j = jacobian_pqrs(HiddenSystem(co), pt)
        assert j.p * j.q == co.b1 * co.c1 - co.a1 * co.d1
        assert j.r * j.s == co.b2 * co.c2 - co.a2 * co.d2
        found += 1


# ----------------------------------------------------------------------
# first Lyapunov coefficient, full normal form


def test_lyapunov_del_buono_quadratic_family():
    for delta in (F(1, 4), F(1, 2), F(1)):
        sys = del_buono_modified(delta, F(2))
        res = first_lyapunov_coefficient(PolySystem2D.from_hidden(sys),
                                         DEL_BUONO_POINT)
        assert res.a == -delta * delta / 2
        assert res.supercritical


def test_lyapunov_example2_factor():
    sys = oscillating_example_2(a2=F(8, 5), kappa=F(1), mode="factor")
    res = first_lyapunov_coefficient(PolySystem2D.from_hidden(sys), (0, 0))
    assert res.a == F(59, 2048)
    assert res.subcritical
    assert res.omega == pytest.approx(math.sqrt(3 / 32), abs=1e-15)


def test_lyapunov_example1_factor_value_and_meaning():
    # the closed normal-form computation; the independent finite-difference
    # cross-check lives in test_lyapunov_partials_match_finite_differences,
    # and measured cycle amplitudes scale like sqrt(offset/|a|) with this a
    sys = oscillating_example_1(a2=F(11, 10), kappa=F(1), mode="factor")
    res = first_lyapunov_coefficient(PolySystem2D.from_hidden(sys), (0, 0))
    a2 = F(11, 10)
    assert res.a == (a2 * a2 - 3) / 512
    assert res.a == F(-179, 51200)
    assert res.supercritical


def test_lyapunov_matches_multilinear_closed_form():
    # quadratic-only systems must give identical exact values by both routes
    for delta in (F(1, 3), F(2)):
        sys = del_buono_modified(delta, F(2))
        closed = supercritical_multilinear(sys.coeffs, DEL_BUONO_POINT)
        full = first_lyapunov_coefficient(PolySystem2D.from_hidden(sys),
                                          DEL_BUONO_POINT)
        assert full.a == closed.a


def test_lyapunov_requires_hopf_conditions():
    sys = oscillating_example_1(a2=F(11, 10), kappa=F(2), mode="factor")
    with pytest.raises(ValueError):
        first_lyapunov_coefficient(PolySystem2D.from_hidden(sys), (0, 0))
    with pytest.raises(ValueError):
        first_lyapunov_coefficient(
            PolySystem2D.from_hidden(oscillating_example_1(kappa=F(1))), (F(1, 3), 0))


def _numeric_partials(sys, point, q, p, omega):
    """Transformed-system partials by central differences with one
    Richardson extrapolation step; independent of the polynomial path.

    Second partials use the step 1e-4; third partials need a larger step
    (2e-2) because the rounding floor of a third difference at 1e-4 is
    about eps/h^3 ~ 1e-4.  The larger step is truncation-free here since
    every system under test has polynomial degree <= 4.
    """
    rhs = sys.rhs
    u0, v0 = float(point[0]), float(point[1])

    def fg(x, y):
        u = u0 + q * x
        v = v0 - p * x - omega * y
        fu, fv = rhs(0.0, (u, v))
        return (fu / q, -(p * fu + q * fv) / (q * omega))

    def second(fn, i, j, h):
        if i == j:
            def d(hh):
                args = [0.0, 0.0]
                args[i] = hh
                up = fn(*args)
                args[i] = -hh
                dn = fn(*args)
                return (up + dn - 2 * fn(0.0, 0.0)) / hh ** 2
        else:
            def d(hh):
                return (fn(hh, hh) - fn(hh, -hh) - fn(-hh, hh) + fn(-hh, -hh)) \
                    / (4 * hh ** 2)
        return (4 * d(h / 2) - d(h)) / 3

    def third(fn, pattern, h):
        if pattern == "xxy":
            def d(hh):
                def fxx(y):
                    return (fn(hh, y) + fn(-hh, y) - 2 * fn(0.0, y)) / hh ** 2
                return (fxx(hh) - fxx(-hh)) / (2 * hh)
        elif pattern == "xyy":
            def d(hh):
                def fyy(x):
                    return (fn(x, hh) + fn(x, -hh) - 2 * fn(x, 0.0)) / hh ** 2
                return (fyy(hh) - fyy(-hh)) / (2 * hh)
        elif pattern == "xxx":
            def d(hh):
                return (fn(2 * hh, 0.0) - 2 * fn(hh, 0.0) + 2 * fn(-hh, 0.0)
                        - fn(-2 * hh, 0.0)) / (2 * hh ** 3)
        else:                                  # yyy
            def d(hh):
                return (fn(0.0, 2 * hh) - 2 * fn(0.0, hh) + 2 * fn(0.0, -hh)
                        - fn(0.0, -2 * hh)) / (2 * hh ** 3)
        return (4 * d(h / 2) - d(h)) / 3

    h2, h3 = 1e-4, 2e-2
    f = lambda x, y: fg(x, y)[0]
    g = lambda x, y: fg(x, y)[1]
    return {
        "f_xx": second(f, 0, 0, h2), "f_xy": second(f, 0, 1, h2),
        "f_yy": second(f, 1, 1, h2),
        "g_xx": second(g, 0, 0, h2), "g_xy": second(g, 0, 1, h2),
        "g_yy": second(g, 1, 1, h2),
        "f_xxx": third(f, "xxx", h3), "f_xyy": third(f, "xyy", h3),
        "g_xxy": third(g, "xxy", h3), "g_yyy": third(g, "yyy", h3),
    }


def test_lyapunov_partials_match_finite_differences():
    for sys, pt in ((oscillating_example_1(a2=F(11, 10), kappa=F(1), mode="factor"),
                     (0, 0)),
                    (oscillating_example_2(a2=F(8, 5), kappa=F(1), mode="factor"),
                     (0, 0)),
                    (del_buono_modified(F(1), F(2)), DEL_BUONO_POINT)):
        res = first_lyapunov_coefficient(PolySystem2D.from_hidden(sys), pt)
        j = res.jacobian
        num = _numeric_partials(sys, pt, float(j.q), float(j.p), res.omega)
        for key, val in num.items():
            # abs floor 1e-6: second differences at step 1e-4 carry
            # cancellation noise ~1e-8/h^2 around exactly-zero partials
            exact = float(res.partials[key])
            assert val == pytest.approx(exact, rel=1e-6, abs=1e-6), key


def test_lyapunov_eigenvector_scaling_is_quadratic_in_scale():
    """Rescaling the eigenvector by c multiplies the coefficient by c^2:
    the sign (the verdict) is invariant, the magnitude is convention-bound.

    Checked here by redoing the transform with T -> 2T by hand."""
    sys = oscillating_example_1(a2=F(11, 10), kappa=F(1), mode="factor")
    res = first_lyapunov_coefficient(PolySystem2D.from_hidden(sys), (0, 0))
    P, Q = sys.polynomials()
    p, q = P.coeff(1, 0), P.coeff(0, 1)
    omega = QuadExt(F(0), F(1), (p * Q.coeff(0, 1) - q * Q.coeff(1, 0)))
    lift = lambda c: QuadExt.of(c, omega.w)
    two = lift(2)
    lu = Poly2({(1, 0): lift(q) * two})
    lv = Poly2({(1, 0): lift(-p) * two, (0, 1): (-omega) * two})
    Pt = P.map_coeffs(lift).subs_linear(lu, lv)
    Qt = Q.map_coeffs(lift).subs_linear(lu, lv)
    f = Pt.scale(1 / (lift(q) * two))
    g = (Pt.scale(lift(p) * two) + Qt.scale(lift(q) * two)).scale(
        -1 / (lift(q) * two * omega * two))
    pa = {
        "f_xxx": f.coeff(3, 0, lift(0)) * lift(6),
        "f_xyy": f.coeff(1, 2, lift(0)) * lift(2),
        "g_xxy": g.coeff(2, 1, lift(0)) * lift(2),
        "g_yyy": g.coeff(0, 3, lift(0)) * lift(6),
        "f_xx": f.coeff(2, 0, lift(0)) * lift(2), "f_xy": f.coeff(1, 1, lift(0)),
        "f_yy": f.coeff(0, 2, lift(0)) * lift(2),
        "g_xx": g.coeff(2, 0, lift(0)) * lift(2), "g_xy": g.coeff(1, 1, lift(0)),
        "g_yy": g.coeff(0, 2, lift(0)) * lift(2),
    }
    cubic = pa["f_xxx"] + pa["f_xyy"] + pa["g_xxy"] + pa["g_yyy"]
    mixed = (pa["f_xy"] * (pa["f_xx"] + pa["f_yy"])
             - pa["g_xy"] * (pa["g_xx"] + pa["g_yy"])
             - pa["f_xx"] * pa["g_xx"] + pa["f_yy"] * pa["g_yy"])
    a_scaled = cubic / lift(16) + mixed / (lift(16) * omega)
    assert a_scaled.reduce() == 4 * res.a
    assert (a_scaled.sign() < 0) == res.supercritical


# ----------------------------------------------------------------------
# slope-ordering classification


def test_slope_ordering_example1():
    rep = nullcline_slope_report(oscillating_example_1().coeffs, (F(0), F(0)))
    assert rep.satisfied and rep.case == "slope-ordered"
    assert rep.slope_u == 1 and rep.slope_v == 2


def test_slope_ordering_example2():
    rep = nullcline_slope_report(oscillating_example_2().coeffs, (F(0), F(0)))
    assert rep.satisfied
    assert rep.slope_u == F(1, 5) and rep.slope_v == F(1, 2)


def test_slope_ordering_fails_when_qr_positive():
    co = MultilinearCoeffs(F(0), F(-1), F(1), F(0), F(0), F(1), F(1), F(0))
    rep = nullcline_slope_report(co, (F(0), F(0)))
    assert not rep.satisfied
    assert not rep.qr_negative
    # with qr > 0 the eigenvalues are real, no oscillation is possible
    j = jacobian_pqrs(HiddenSystem(co), (F(0), F(0)))
    assert (j.p - j.s) ** 2 + 4 * j.q * j.r >= 0


def test_slope_ordering_undefined_when_q_zero():
    co = MultilinearCoeffs(F(0), F(-1), F(0), F(0), F(0), F(1), F(1), F(0))
    rep = nullcline_slope_report(co, (F(0), F(0)))
    assert rep.undefined


# ----------------------------------------------------------------------
# switching-function stability change


def test_stability_change_with_given_slopes():
    # diagonal ratio -2 with slope ratio above 2 flips the trace sign
    rep = stability_change_analysis(-2.0, 1.0, -3.0, 1.0, 0.9, 0.1,
                                    dpi_u=0.25, dpi_v=4.0)
    assert rep.changes_stability
    assert rep.product < 0
    assert rep.interval[0] <= rep.ratio <= rep.interval[1]


def test_stability_change_boundary_ratio_minus_one():
    rep = stability_change_analysis(-1.0, 0.5, -1.0, 1.0, 0.5, 0.5)
    assert rep.ratio == -1.0
    assert rep.achievable is False


def test_stability_change_achievability_branch_a():
    rep = stability_change_analysis(-2.0, 1.0, -3.0, 1.0, 0.8, 0.1)
    assert rep.achievable and rep.branch == "3(a)"
    # construct an admissible profile realizing the flip: steep near zero
    prof = SwitchingProfile.tabulated(
        [(-1, -1), (-0.2, -0.8), (0.2, 0.8), (1, 1)])
    from hidden_dynamics.switching import check_switch_properties, eval_switch_deriv
    assert check_switch_properties(prof).ok
    # rho* = 0.8 -> u* = 0.2 (knot; outer slope 0.25), sigma* = 0.1 -> v* = 0.025
    du, dv = 0.25, eval_switch_deriv(prof, 0.025)
    rep2 = stability_change_analysis(-2.0, 1.0, -3.0, 1.0, 0.8, 0.1,
                                     dpi_u=du, dpi_v=dv)
    assert dv / du > 2.0
    assert rep2.changes_stability


def test_stability_change_achievability_branch_b():
    rep = stability_change_analysis(-0.5, 1.0, -0.9, 1.0, 0.1, 0.8)
    assert rep.achievable and rep.branch == "3(b)"


def test_stability_change_not_achievable_when_det_negative():
    rep = stability_change_analysis(-2.0, 1.0, 1.0, 1.0, 0.8, 0.1)
    assert rep.det < 0 and rep.achievable is False


# ----------------------------------------------------------------------
# dynamic consistency of the criticality verdicts


def test_supercritical_amplitude_scaling(fast_config):
    """Just past a supercritical point the cycle amplitude follows
    sqrt(offset): doubling ratio within 25% for a 4x offset ratio.

    The factor-form example is the clean testbed; composition-form cycles
    (e.g. the rescaled quadratic family) clip against the box saturation
    and leave the asymptotic regime almost immediately."""
    hr = hopf_report(lambda k: oscillating_example_1(a2=F(11, 10), kappa=k,
                                                     mode="factor"),
                     (F(1, 2), F(2)), point_tracker=lambda k: (F(0), F(0)))
    assert hr.verdict == "supercritical"
    amps = []
    for dk in (0.004, 0.016):
        out = classify_outcome(
            oscillating_example_1(a2=F(11, 10), kappa=1 + dk, mode="factor"),
            (-0.5, -1.0), fast_config)
        assert out.tag == "limit-cycle"
        amps.append(out.amplitude)
    assert amps[1] / amps[0] == pytest.approx(2.0, rel=0.25)
    # and the quadratic family's verdict is still dynamically confirmed
    out = classify_outcome(del_buono_box(mu=2.01), (0.78, 0.0), fast_config)
    assert out.tag == "limit-cycle"


def test_hopf_report_factor_route():
    hr = hopf_report(lambda k: oscillating_example_1(a2=F(11, 10), kappa=k,
                                                     mode="factor"),
                     (F(1, 2), F(2)), point_tracker=lambda k: (F(0), F(0)))
    assert hr.method == "normal-form"
    assert hr.param == 1.0
    assert hr.verdict == "supercritical"
    d = hr.to_dict()
    assert d["lyapunov_coefficient"]["fraction"] == "-179/51200"
