"""Invariant-region certificate for the factor-form oscillating example.

A chain of six straight segments is grown from the wall entry point
(-1/2, -1): the first takes the slope of the unstable eigenvector there,
each later segment takes the field slope dv/du at its left endpoint, and
endpoints are cut against the guide lines v=-1, v=u, v=0, v=-u, u=0,
v=2u, u=1 in turn.  The flow crosses each segment left-to-right exactly
when a quartic polynomial is negative on the segment's u-interval; the
left endpoint is a root by construction, so the certificate deflates it
and locates the remaining cubic's real roots in closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction as F

from .exactalg import real_cubic_roots

__all__ = [
    "SegmentChain", "SegmentCertificate", "InvariantRegionReport",
    "build_segments", "segment_quartic", "verify_segment",
    "verify_invariant_region", "chain_height",
]

GUIDE_LINES = ("v=-1", "v=u", "v=0", "v=-u", "u=0", "v=2u", "u=1")


class ChainConstructionError(ValueError):
    pass


@dataclass(frozen=True)
class SegmentChain:
    """Seven exact chain points and the six segment slopes."""

    a2: F
    points: tuple            # 7 (u, v) Fraction pairs
    slopes: tuple            # 6 Fractions

    @property
    def v6(self) -> F:
        return self.points[6][1]

    @property
    def top_bound(self) -> F:
        return 2 / (self.a2 + 1)


def _field_slope(a2: F, u: F, v: F) -> F:
    """dv/du of the factor-form field (the shared 1/4 scale cancels)."""
    num = (1 - v * v) * (a2 * u * v - 2 * u + v)
    den = (1 - u * u) * (u * v - u + v)
    if den == 0:
        raise ChainConstructionError(f"field slope undefined at ({u}, {v})")
    return num / den


def build_segments(a2) -> SegmentChain:
    """Build the chain for 1 < a2 < sqrt(2); everything stays rational.

    The starting slope is the unstable eigenvector slope (12 + 8 a2)/3 of
    the Jacobian at the entry saddle (-1/2, -1).
    """
    a2 = F(a2)
    if not (1 < a2 and a2 * a2 < 2):
        raise ChainConstructionError(f"a2 = {a2} outside the admissible interval")

    pts = [(F(-1, 2), F(-1))]
    m0 = (12 + 8 * a2) / 3
    slopes = [m0]

    def extend(idx: int, guide: str):
        (u0, v0), m = pts[-1], slopes[-1]
        if guide == "v=u":
            u1 = (m * u0 - v0) / (m - 1)
            v1 = u1
        elif guide == "v=0":
            u1 = u0 - v0 / m
            v1 = F(0)
        elif guide == "v=-u":
            u1 = (m * u0 - v0) / (m + 1)
            v1 = -u1
        elif guide == "u=0":
            u1 = F(0)
            v1 = v0 - m * u0
        elif guide == "v=2u":
            u1 = (m * u0 - v0) / (m - 2)
            v1 = 2 * u1
        elif guide == "u=1":
            u1 = F(1)
            v1 = v0 + m * (1 - u0)
        else:
            raise AssertionError(guide)
        if u1 <= u0:
            raise ChainConstructionError(
                f"segment {idx}: endpoint u does not increase ({u0} -> {u1})")
        if abs(u1) > 1 or abs(v1) > 1:
            raise ChainConstructionError(f"segment {idx}: endpoint ({u1}, {v1}) leaves the box")
        pts.append((u1, v1))

    for i, guide in enumerate(GUIDE_LINES[1:], start=0):
        extend(i, guide)
        if i < 5:
            u1, v1 = pts[-1]
            slopes.append(_field_slope(a2, u1, v1))
    return SegmentChain(a2, tuple(pts), tuple(slopes))


def segment_quartic(chain: SegmentChain, i: int) -> list[F]:
    """Exact coefficients (descending powers) of the crossing quartic.

    On segment i with line v = m (u - u_i) + v_i the flow crosses
    left-to-right when

        (1 - L^2)((a2 u + 1) L - 2u) - m (1 - u^2)((u + 1) L - u) < 0,

    where L is the line.  Expanded in u this is a quartic with a root at
    u = u_i by construction.
    """
    a2 = chain.a2
    (ui, vi), m = chain.points[i], chain.slopes[i]
    # L = m u + e
    e = vi - m * ui

    def poly_mul(p, q):
        out = [F(0)] * (len(p) + len(q) - 1)
        for ia, ca in enumerate(p):
            for ib, cb in enumerate(q):
                out[ia + ib] += ca * cb
        return out

    def poly_sub(p, q):
        n = max(len(p), len(q))
        p = [F(0)] * (n - len(p)) + list(p)
        q = [F(0)] * (n - len(q)) + list(q)
        return [a - b for a, b in zip(p, q)]

    L = [m, e]                                    # descending in u
    one_minus_L2 = poly_sub([F(1)], poly_mul(L, L))
    first = poly_mul(one_minus_L2, poly_sub(poly_mul([a2, F(1)], L), [F(2), F(0)]))
    second = poly_mul([-m], poly_mul(poly_sub([F(1)], [F(1), F(0), F(0)]),
                                     poly_sub(poly_mul([F(1), F(1)], L), [F(1), F(0)])))
    quartic = poly_sub(first, poly_mul([F(-1)], second))
    # normalize to exactly degree 4
    while len(quartic) > 5 and quartic[0] == 0:
        quartic.pop(0)
    quartic = [F(0)] * (5 - len(quartic)) + quartic
    return quartic


def deflate_at_root(quartic: list[F], root: F) -> tuple[list[F], F]:
    """Synthetic division of the quartic by (u - root); exact remainder."""
    out = [quartic[0]]
    for c in quartic[1:]:
        out.append(c + out[-1] * root)
    return out[:-1], out[-1]


@dataclass(frozen=True)
class SegmentCertificate:
    index: int
    interval: tuple[float, float]
    quartic: tuple
    cubic: tuple
    deflation_residual: float
    cubic_roots: tuple
    roots_inside: tuple
    midpoint_value: float
    nullcline_positive: bool
    passed: bool


def verify_segment(chain: SegmentChain, i: int,
                   residual_tol: float = 1e-9) -> SegmentCertificate:
    """Certify that the flow crosses segment i left-to-right only.

    Passes when the deflated cubic has no real root in the open u-interval
    and the quartic is negative at the midpoint.  Roots exactly at the
    endpoints are allowed (the left endpoint is one by construction).
    The division by the first field component is only valid where that
    component is positive, which is asserted at sample points along the
    segment.
    """
    quartic = segment_quartic(chain, i)
    ui, vi = chain.points[i]
    uj, _ = chain.points[i + 1]
    cubic, rem = deflate_at_root(quartic, ui)
    if rem != 0:
        raise ChainConstructionError(f"segment {i}: deflation remainder {float(rem)}")

    roots = real_cubic_roots(*(float(c) for c in cubic))
    lo, hi = float(ui), float(uj)
    pad = 1e-12 * max(1.0, abs(lo), abs(hi))
    inside = tuple(r for r in roots if lo + pad < r < hi - pad)

    mid = F(ui + uj, 2)
    mid_val = _eval_poly(quartic, mid)

    m = chain.slopes[i]
    nullcline_ok = True
    for k in range(1, 8):
        uu = ui + (uj - ui) * F(k, 8)
        vv = m * (uu - ui) + vi
        if uu * vv - uu + vv <= 0:
            nullcline_ok = False
            break

    passed = not inside and mid_val < 0 and nullcline_ok
    return SegmentCertificate(i, (lo, hi), tuple(quartic), tuple(cubic), float(rem),
                              tuple(roots), inside, float(mid_val), nullcline_ok, passed)


def _eval_poly(coeffs, x):
    out = coeffs[0]
    for c in coeffs[1:]:
        out = out * x + c
    return out


@dataclass
class InvariantRegionReport:
    a2: F
    chain: SegmentChain
    certificates: list[SegmentCertificate]
    v6: float
    top_bound: float
    v6_below_bound: bool
    left_wall_inward: bool
    passed: bool
    failures: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "a2": float(self.a2),
            "points": [[float(u), float(v)] for u, v in self.chain.points],
            "slopes": [float(m) for m in self.chain.slopes],
            "v6": self.v6,
            "top_bound": self.top_bound,
            "v6_below_bound": self.v6_below_bound,
            "left_wall_inward": self.left_wall_inward,
            "segments": [{
                "index": c.index,
                "interval": list(c.interval),
                "quartic": [float(x) for x in c.quartic],
                "cubic_roots": list(c.cubic_roots),
                "roots_inside": list(c.roots_inside),
                "midpoint_value": c.midpoint_value,
                "passed": c.passed,
            } for c in self.certificates],
            "passed": self.passed,
            "failures": self.failures,
        }


def verify_invariant_region(a2) -> InvariantRegionReport:
    """Build the chain and certify the whole region.

    Passes when all six segment certificates hold, the chain tops out
    below 2/(a2 + 1), and the flow on the left wall u = -1/2 points
    rightward for v > -1 (there u' is proportional to v + 1).
    """
    a2 = F(a2)
    chain = build_segments(a2)
    certs = [verify_segment(chain, i) for i in range(6)]
    failures = [f"segment {c.index}" for c in certs if not c.passed]

    v6_ok = chain.v6 < chain.top_bound
    if not v6_ok:
        failures.append("v6 >= 2/(a2+1)")

    # u'(-1/2, v) = (3/32)(v+1) for the factor form: check the sign at samples
    wall_ok = True
    for k in range(0, 21):
        v = F(-1) + F(k, 10)
        up = (1 - F(1, 4)) * (F(-1, 2) * v + F(1, 2) + v) / 4
        if k == 0:
            wall_ok &= up == 0
        else:
            wall_ok &= up > 0
    if not wall_ok:
        failures.append("left wall flow not inward")

    return InvariantRegionReport(a2, chain, certs, float(chain.v6),
                                 float(chain.top_bound), v6_ok, wall_ok,
                                 not failures, failures)


def chain_height(chain: SegmentChain):
    """Piecewise-linear chain height v(u) on [u0, 1], clamped outside.

    Usable as an event function g(u, v) = v - height(u): negative below
    the chain.
    """
    pts = [(float(u), float(v)) for u, v in chain.points]
    slopes = [float(m) for m in chain.slopes]

    def height(u: float) -> float:
        if u <= pts[0][0]:
            return pts[0][1]
        for (u0, v0), (u1, _), m in zip(pts, pts[1:], slopes):
            if u <= u1:
                return v0 + m * (u - u0)
        return pts[-1][1]

    return height
