"""Built-in benchmark systems used by the experiments and the test suite.

Coefficients are exact rationals throughout so the analysis layer can
report exact values.
"""

from __future__ import annotations

import math
from fractions import Fraction as F

from .hidden import HiddenSystem, MultilinearCoeffs
from .piecewise import PiecewiseSystem
from .switching import HILL_FACTOR, SwitchingProfile

__all__ = [
    "oscillating_example_1", "oscillating_example_2", "planar_switch_benchmark",
    "del_buono_modified", "del_buono_box", "triple_threshold_system",
    "macroscopic_hill_rhs",
]


def oscillating_example_1(a2=F(11, 10), kappa=1, mode: str = "composition") -> HiddenSystem:
    """u' = uv - u + v, v' = kappa (a2 uv - 2u + v)."""
    coeffs = MultilinearCoeffs(F(1), F(-1), F(1), F(0), F(a2), F(-2), F(1), F(0))
    return HiddenSystem(coeffs, mode=mode, kappa=kappa)


def oscillating_example_2(a2=F(8, 5), kappa=1, mode: str = "composition") -> HiddenSystem:
    """u' = 11/2 uv - u + 5v, v' = kappa (a2 uv - u/2 + v)."""
    coeffs = MultilinearCoeffs(F(11, 2), F(-1), F(5), F(0), F(a2), F(-1, 2), F(1), F(0))
    return HiddenSystem(coeffs, mode=mode, kappa=kappa)


# ----------------------------------------------------------------------
# the two-gene switching benchmark (stability depends on the profile)

PLANAR_K1 = F(1)
PLANAR_K2 = F(5)
PLANAR_PHI1 = F(1, 2)
PLANAR_PHI2 = F(7, 16)


def planar_switch_benchmark(mode: str = "composition",
                            kappa=1) -> HiddenSystem:
    """Hidden dynamics of the two-threshold production/decay system with
    rates k = (1, 5) and decay fractions phi = (1/2, 7/16).

    Region fields (s1, s2 are the unit-interval switch states):
        y1' = (1 - s1 + s1 s2) k1 - phi1 k1
        y2' = (1 - s1 - s2 + 2 s1 s2) k2 - phi2 k2
    """
    sysp = planar_switch_piecewise()
    from .piecewise import corner_fields
    cf = corner_fields(sysp)
    coeffs = MultilinearCoeffs.from_corners(cf.fa, cf.fb)
    return HiddenSystem(coeffs, mode=mode, kappa=kappa)


def planar_switch_piecewise() -> PiecewiseSystem:
    g1t = PLANAR_PHI1 * PLANAR_K1    # gamma_1 * theta_1
    g2t = PLANAR_PHI2 * PLANAR_K2
    theta = (F(1), F(1))

    def make(s1, s2):
        def fld(y):
            return ((1 - s1 + s1 * s2) * PLANAR_K1 - g1t * y[0],
                    (1 - s1 - s2 + 2 * s1 * s2) * PLANAR_K2 - g2t * y[1])
        return fld

    fields = {"++": make(1, 1), "+-": make(1, 0), "-+": make(0, 1), "--": make(0, 0)}
    return PiecewiseSystem(2, fields, theta)


def planar_switch_brackets():
    """The switch-state brackets F(Z1, Z2), G(Z1, Z2) of the benchmark,
    as exact polynomial coefficient maps {(i, j): coeff}."""
    g1t = PLANAR_PHI1 * PLANAR_K1
    g2t = PLANAR_PHI2 * PLANAR_K2
    Fb = {(0, 0): PLANAR_K1 - g1t, (1, 0): -PLANAR_K1, (1, 1): PLANAR_K1}
    Gb = {(0, 0): PLANAR_K2 - g2t, (1, 0): -PLANAR_K2, (0, 1): -PLANAR_K2,
          (1, 1): 2 * PLANAR_K2}
    return Fb, Gb


# ----------------------------------------------------------------------
# modified del Buono family


def del_buono_modified(delta=F(1), mu=F(2)) -> HiddenSystem:
    """Planar family in unit-interval coordinates with fixed point (9/10, 1/2):

        Z1' = -2 Z1 - Z2 + 23/10 + delta (Z1 - 9/10)(Z2 - 1/2)
        Z2' = 8 Z1 + mu (Z2 - 1/2) - 36/5
    """
    delta, mu = F(delta), F(mu)
    coeffs = MultilinearCoeffs(
        delta, F(-2) - delta / 2, F(-1) - delta * F(9, 10), F(23, 10) + delta * F(9, 20),
        F(0), F(8), mu, -mu / 2 - F(36, 5))
    return HiddenSystem(coeffs, mode="composition")


DEL_BUONO_POINT = (F(9, 10), F(1, 2))


def del_buono_box(mu=F(2), kappa=F(33, 10)) -> HiddenSystem:
    """The same family rescaled to the unit box, fixed point (4/5, 0):

        u' = -2u - v + 8/5 + (v/2)(u - 4/5)
        v' = kappa [8u + (mu/kappa) v - 32/5]
    """
    mu, kappa = F(mu), F(kappa)
    coeffs = MultilinearCoeffs(F(1, 2), F(-2), F(-7, 5), F(8, 5),
                               F(0), F(8), mu / kappa, F(-32, 5))
    return HiddenSystem(coeffs, mode="composition", kappa=kappa)


DEL_BUONO_BOX_POINT = (F(4, 5), F(0))


# ----------------------------------------------------------------------
# three-threshold sensitivity system


def triple_threshold_rhs(mu: float = 2.005, kappa: float = 3.3, pv: float = 2.1):
    """Right-hand side of the three-threshold system; the state components
    saturate at +-1 inside the equations, so the same formula is valid on
    all of R^3:

        u' = -2u - v + 8/5 + (v/2)(u - 4/5) + (1 + w)/4
        v' = kappa [8u + (mu/kappa) v - 32/5 + pv * v (1 + w)/2]
        w' = 2/3 + u v / 2
    """
    mk = mu / kappa

    def rhs(tau, y):
        u = -1.0 if y[0] < -1.0 else (1.0 if y[0] > 1.0 else y[0])
        v = -1.0 if y[1] < -1.0 else (1.0 if y[1] > 1.0 else y[1])
        w = -1.0 if y[2] < -1.0 else (1.0 if y[2] > 1.0 else y[2])
        hw = 0.5 * (1.0 + w)
        return (-2.0 * u - v + 1.6 + 0.5 * v * (u - 0.8) + 0.5 * hw,
                kappa * (8.0 * u + mk * v - 6.4 + pv * v * hw),
                2.0 / 3.0 + 0.5 * u * v)

    return rhs


def triple_threshold_system(mu=F("2.005"), kappa=F("3.3"), pv=F("2.1")) -> PiecewiseSystem:
    """The three-threshold system as eight constant orthant fields.

    The right-hand side is multilinear in the clipped variables, so the
    trilinear interpolation of these corner values reproduces it exactly
    on the box and the saturated formula outside.
    """
    mu, kappa, pv = F(mu), F(kappa), F(pv)

    def corner(su, sv, sw):
        hw = F(1 + sw, 2)
        return (F(-2) * su - sv + F(8, 5) + sv * (su - F(4, 5)) / 2 + hw / 2,
                kappa * (8 * su + (mu / kappa) * sv - F(32, 5) + pv * sv * hw),
                F(2, 3) + su * sv / 2)

    fields = {}
    for su in (1, -1):
        for sv in (1, -1):
            for sw in (1, -1):
                pat = f"{'+' if su > 0 else '-'}{'+' if sv > 0 else '-'}{'+' if sw > 0 else '-'}"
                fields[pat] = (lambda val: (lambda y: val))(corner(su, sv, sw))
    return PiecewiseSystem(3, fields, (F(0), F(0), F(0)))


# ----------------------------------------------------------------------
# the slow (macroscopic) system behind oscillating_example_1, with a
# steep sigmoid of width eps


def macroscopic_hill_rhs(a2: float = 1.1, kappa: float = 1.66, eps: float = 1e-2,
                         theta1: float = 1.0, theta2: float = 1.0,
                         gamma1: float = 3.0, gamma2: float | None = None):
    """Full (slow-time) system whose hidden dynamics is example 1:

        x' = (uv - u + v + gamma1 theta1) - gamma1 x
        y' = (a2 uv - 2u + v + gamma2 theta2) - gamma2 y

    with u, v the [-1, 1]-rescaled sigmoid outputs of x and y.  The
    sigmoid is evaluated in the overflow-safe logistic form
    1 / (1 + exp(k (ln theta - ln x) / eps)).
    """
    if gamma2 is None:
        gamma2 = 3.0 + a2
    lt1, lt2 = math.log(theta1), math.log(theta2)

    def sig(x, lt, steep):
        if x <= 0.0:
            return 0.0
        z = steep * (lt - math.log(x))
        if z > 700.0:
            return 0.0
        if z < -700.0:
            return 1.0
        return 1.0 / (1.0 + math.exp(z))

    def rhs(t, y):
        x1, x2 = y
        u = 2.0 * sig(x1, lt1, 1.0 / eps) - 1.0
        v = 2.0 * sig(x2, lt2, kappa / eps) - 1.0
        return ((u * v - u + v + gamma1 * theta1) - gamma1 * x1,
                (a2 * u * v - 2.0 * u + v + gamma2 * theta2) - gamma2 * x2)

    return rhs
