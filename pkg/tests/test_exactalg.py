from __future__ import annotations

import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hidden_dynamics.exactalg import (Poly2, QuadExt, exact_sqrt, real_cubic_roots,
                                      solve_quadratic_exact, solve_quadratic_stable)

rationals = st.fractions(min_value=-10, max_value=10, max_denominator=50)


def test_exact_sqrt():
    assert exact_sqrt(F(9, 4)) == F(3, 2)
    assert exact_sqrt(F(2)) is None
    assert exact_sqrt(F(0)) == 0


@given(rationals, rationals, rationals, rationals)
def test_quadext_field_ops(a, b, c, d):
    w = F(17)
    x = QuadExt(a, b, w)
    y = QuadExt(c, d, w)
    fx = float(a) + float(b) * math.sqrt(17)
    fy = float(c) + float(d) * math.sqrt(17)
    assert float(x + y) == pytest.approx(fx + fy, abs=1e-9)
    assert float(x * y) == pytest.approx(fx * fy, rel=1e-12, abs=1e-9)
    if (y.a, y.b) != (0, 0):
        assert float(x / y) == pytest.approx(fx / fy, rel=1e-9, abs=1e-9)
        assert (x / y * y - x).sign() == 0


@given(rationals, rationals)
def test_quadext_sign_is_exact(a, b):
    x = QuadExt(a, b, F(17))
    fx = float(a) + float(b) * math.sqrt(17)
    if abs(fx) > 1e-9:
        assert x.sign() == (1 if fx > 0 else -1)


def test_quadext_sign_hairline():
    # 4 - sqrt(17) < 0 but barely; float of a^2 vs b^2 w would be risky
    assert QuadExt(F(4), F(-1), F(17)).sign() < 0
    assert QuadExt(F(-4), F(1), F(17)).sign() > 0
    assert QuadExt(F(3, 2), F(-1), F(9, 4)).sign() == 0


def test_quadext_join_rescales_square_factor():
    # sqrt(425/4096) = (5/64) sqrt(17)
    x = QuadExt(F(0), F(64, 5), F(425, 4096))
    y = QuadExt(F(0), F(1), F(17))
    assert (x - y).sign() == 0
    with pytest.raises(ValueError):
        _ = QuadExt(F(0), F(1), F(2)) + QuadExt(F(0), F(1), F(3))


def test_quadratic_exact_kinds():
    two = solve_quadratic_exact(1, -3, 2)
    assert two.kind == "two"
    assert sorted(float(r) for r in two.roots) == [1.0, 2.0]
    assert solve_quadratic_exact(1, 2, 1).kind == "double"
    assert solve_quadratic_exact(0, 2, -4).roots[0] == QuadExt(F(2))
    assert solve_quadratic_exact(0, 0, 0).kind == "any"
    assert solve_quadratic_exact(1, 0, 1).kind == "none"


def test_quadratic_stable_cancellation():
    # classic catastrophic-cancellation case
    roots, tangent = solve_quadratic_stable(1.0, -1e8, 1.0)
    assert not tangent
    lo, hi = sorted(roots)
    assert lo == pytest.approx(1e-8, rel=1e-10)
    assert hi == pytest.approx(1e8, rel=1e-12)


def _dedupe(xs, tol=1e-4):
    out = []
    for x in sorted(xs):
        if not out or x - out[-1] > tol:
            out.append(x)
    return out


@given(st.floats(-4, 4), st.floats(-4, 4), st.floats(-4, 4))
def test_cubic_roots_match_companion_matrix(b, c, d):
    mine = _dedupe(real_cubic_roots(1.0, b, c, d))
    comp = _dedupe(r.real for r in np.roots([1.0, b, c, d]) if abs(r.imag) < 1e-6)
    assert len(mine) == len(comp)
    for x, y in zip(mine, comp):
        assert x == pytest.approx(y, abs=5e-4)


def test_cubic_roots_simple_exactness():
    # distinct well-separated roots come out at full precision
    roots = real_cubic_roots(2.0, -12.0, 22.0, -12.0)   # 2(x-1)(x-2)(x-3)
    assert roots == pytest.approx([1.0, 2.0, 3.0], abs=1e-10)


def test_cubic_roots_triple_and_quadratic_fallback():
    assert real_cubic_roots(1, -3, 3, -1) == pytest.approx([1.0])
    assert real_cubic_roots(0, 1, -3, 2) == pytest.approx([1.0, 2.0])


def test_poly2_substitution_matches_pointwise():
    # p(u, v) = 1 - 2 u v + u^3 under u -> 2x + y, v -> x - 3y
    p = Poly2({(0, 0): F(1), (1, 1): F(-2), (3, 0): F(1)})
    lu = Poly2({(1, 0): F(2), (0, 1): F(1)})
    lv = Poly2({(1, 0): F(1), (0, 1): F(-3)})
    q = p.subs_linear(lu, lv)
    for x, y in ((F(1, 3), F(-2, 5)), (F(0), F(1)), (F(2), F(2))):
        u, v = 2 * x + y, x - 3 * y
        assert q.eval(x, y) == p.eval(u, v)


def test_poly2_shift_and_deriv():
    p = Poly2({(2, 0): F(1), (0, 1): F(3)})       # u^2 + 3v
    s = p.shift(F(1), F(-2))                       # (u+1)^2 + 3(v-2)
    assert s.coeff(0, 0) == F(-5)
    assert s.coeff(1, 0) == F(2)
    du = p.deriv("u")
    assert du.coeff(1, 0) == F(2) and du.degree() == 1
