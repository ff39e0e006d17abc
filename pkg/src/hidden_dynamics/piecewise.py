"""Piecewise-smooth systems near intersecting switching surfaces.

The state space is split by coordinate thresholds alpha(y) = y1 - theta1
and beta(y) = y2 - theta2 into four (or, with a third threshold, eight)
regions, each carrying its own smooth field.  This module provides the
projected corner values at the intersection, the regularized field for a
positive switching width, the scalar Filippov sliding solution on a single
surface, and the bilinear blending solutions at the intersection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product

from .exactalg import solve_quadratic_stable
from .switching import SwitchingProfile, eval_switch

SIGNS2 = ("++", "+-", "-+", "--")


@dataclass(frozen=True)
class PiecewiseSystem:
    """Fields per sign region around coordinate thresholds.

    fields maps a sign pattern such as '+-' (or '+-+' in three dimensions)
    to a callable y -> rate tuple; thresholds are the switching levels of
    the leading state components.
    """

    dimension: int
    fields: dict
    thresholds: tuple

    def __post_init__(self):
        want = ["".join(s) for s in product("+-", repeat=len(self.thresholds))]
        missing = [s for s in want if s not in self.fields]
        if missing:
            raise ValueError(f"missing region fields: {missing}")

    def region_of(self, y) -> str:
        return "".join("+" if y[i] > th else "-" for i, th in enumerate(self.thresholds))

    def intersection_point(self) -> tuple:
        y0 = list(self.thresholds) + [0.0] * (self.dimension - len(self.thresholds))
        return tuple(y0)

    def field(self, pattern: str, y):
        return self.fields[pattern](y)


@dataclass(frozen=True)
class CornerFields:
    """Projected corner values at the intersection point.

    fa and fb hold the first and second components of the four region
    fields evaluated at the intersection, ordered (++, +-, -+, --); with
    coordinate thresholds the surface normals are unit vectors, so the
    projections are just these components.
    """

    fa: tuple
    fb: tuple

    def __iter__(self):
        return iter((self.fa, self.fb))


def corner_fields(system: PiecewiseSystem) -> CornerFields:
    """Evaluate the four region fields at the intersection point."""
    y0 = system.intersection_point()
    fa, fb = [], []
    for s in SIGNS2:
        f = system.field(s, y0)
        if not all(math.isfinite(float(c)) for c in f[:2]):
            raise ValueError(f"non-finite field value in region {s} at {y0}")
        fa.append(f[0])
        fb.append(f[1])
    return CornerFields(tuple(fa), tuple(fb))


def regularized_rhs(system: PiecewiseSystem, y, eps: float,
                    profiles: tuple[SwitchingProfile, SwitchingProfile]) -> tuple:
    """Convex combination of the four fields with switching weights.

    Weights are (1 +- pi(u))(1 +- pi(v))/4 with u = alpha(y)/eps,
    v = beta(y)/eps; they are nonnegative and sum to one.
    """
    if not eps > 0:
        raise ValueError("regularization width eps must be positive")
    th1, th2 = system.thresholds[:2]
    pu = eval_switch(profiles[0], (y[0] - th1) / eps)
    pv = eval_switch(profiles[1], (y[1] - th2) / eps)
    weights = {
        "++": (1 + pu) * (1 + pv) / 4.0,
        "+-": (1 + pu) * (1 - pv) / 4.0,
        "-+": (1 - pu) * (1 + pv) / 4.0,
        "--": (1 - pu) * (1 - pv) / 4.0,
    }
    n = system.dimension
    out = [0.0] * n
    for s, w in weights.items():
        f = system.field(s, y)
        for i in range(n):
            out[i] += w * float(f[i])
    return tuple(out)


# ----------------------------------------------------------------------
# codimension-1 sliding


@dataclass(frozen=True)
class Codim1Sliding:
    """Filippov solution on a single surface from the two normal rates."""

    exists: bool
    lambda_alpha: float | None
    attractive: bool
    reason: str = ""


def filippov_codim1(f_plus: float, f_minus: float) -> Codim1Sliding:
    """Solve (1+l) f_plus + (1-l) f_minus = 0 for the convex parameter.

    Sliding exists when the parameter lands in [-1, 1]; the surface is
    attractive when the field points toward it from both sides
    (f_minus > 0 > f_plus).
    """
    if f_plus == f_minus:
        if f_plus == 0.0:
            return Codim1Sliding(True, 0.0, False, "degenerate: both rates vanish")
        return Codim1Sliding(False, None, False, "equal nonzero rates: no sliding solution")
    lam = (f_plus + f_minus) / (f_minus - f_plus)
    attractive = f_minus > 0.0 > f_plus
    return Codim1Sliding(abs(lam) <= 1.0, lam, attractive)


# ----------------------------------------------------------------------
# codimension-2 blending


@dataclass(frozen=True)
class LambdaSolution:
    """One admissible blending pair in the closed unit square."""

    lambda_alpha: float
    lambda_beta: float
    residual: float
    tangent: bool = False


@dataclass
class BlendResult:
    outcome: str                       # 'discrete' | 'continuum'
    solutions: list[LambdaSolution] = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.solutions)


_ZERO = 1e-13


def blend_codim2_solutions(cf: CornerFields, residual_tol: float = 1e-10) -> BlendResult:
    """All blending pairs at the intersection.

    Writes both corner-value balance equations in the bilinear form
    A l1 l2 + B l1 + C l2 + D = 0, eliminates one unknown, solves the
    resulting quadratic exactly in the stable form, and keeps the pairs
    inside the closed square with both residuals below residual_tol.
    Two proportional equations yield a continuum outcome.
    """
    e1 = _bilinear_coeffs(cf.fa)
    e2 = _bilinear_coeffs(cf.fb)
    scale = max(*(abs(x) for x in e1 + e2), 1.0)
    if _proportional(e1, e2, scale):
        return BlendResult("continuum")

    sols: list[LambdaSolution] = []
    for first, second, swap in ((e1, e2, False), (e2, e1, True)):
        for la, lb, tangent in _eliminate(first, second, scale):
            if swap:
                la, lb = lb, la
            sols.append((la, lb, tangent))

    out = BlendResult("discrete")
    for la, lb, tangent in sols:
        if abs(la) > 1.0 + 1e-12 or abs(lb) > 1.0 + 1e-12:
            continue
        la, lb = max(-1.0, min(1.0, la)), max(-1.0, min(1.0, lb))
        r = max(abs(_bieval(e1, la, lb)), abs(_bieval(e2, la, lb)))
        if r > residual_tol * max(scale, 1.0):
            continue
        if any(abs(s.lambda_alpha - la) < 1e-8 and abs(s.lambda_beta - lb) < 1e-8
               for s in out.solutions):
            continue
        out.solutions.append(LambdaSolution(la, lb, r, tangent))
    out.solutions.sort(key=lambda s: (s.lambda_alpha, s.lambda_beta))
    return out


def _bilinear_coeffs(f: tuple) -> tuple[float, float, float, float]:
    fpp, fpm, fmp, fmm = (float(x) for x in f)
    return ((fpp - fpm - fmp + fmm) / 4.0,
            (fpp + fpm - fmp - fmm) / 4.0,
            (fpp - fpm + fmp - fmm) / 4.0,
            (fpp + fpm + fmp + fmm) / 4.0)


def _bieval(e, la, lb):
    A, B, C, D = e
    return A * la * lb + B * la + C * lb + D


def _proportional(e1, e2, scale) -> bool:
    tol = _ZERO * scale * scale
    return all(abs(e1[i] * e2[j] - e1[j] * e2[i]) <= tol
               for i in range(4) for j in range(i + 1, 4))


def _eliminate(e1, e2, scale):
    """Solve e1 for lambda_beta, substitute into e2; yields (la, lb, tangent)."""
    A1, B1, C1, D1 = e1
    A2, B2, C2, D2 = e2
    qa = A1 * B2 - A2 * B1
    qb = A1 * D2 - A2 * D1 + B2 * C1 - B1 * C2
    qc = C1 * D2 - C2 * D1
    roots, tangent = solve_quadratic_stable(qa, qb, qc)
    if roots is None:
        # quadratic identically zero: e1's lambda_beta branch solves e2 too;
        # pick representative intersections with the vertical lines la = +-1
        roots, tangent = [-1.0, 1.0], False
    for la in roots:
        den = A1 * la + C1
        if abs(den) > _ZERO * scale:
            lb = -(B1 * la + D1) / den
            yield la, lb, tangent
        else:
            # e1 degenerates to a vertical line at this la; e2 fixes lb
            den2 = A2 * la + C2
            if abs(den2) > _ZERO * scale:
                yield la, -(B2 * la + D2) / den2, tangent
