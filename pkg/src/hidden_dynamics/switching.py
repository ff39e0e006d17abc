"""Switching profiles and regularization factors.

A switching profile replaces a jump discontinuity by a monotone transition
saturating at -1/+1 outside the unit interval.  The steepness ratio
``kappa`` records how much faster the second switching variable moves than
the first; it reshapes nothing here and instead multiplies the second
hidden equation (see :mod:`hidden_dynamics.hidden`).
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field


RAMP = "ramp"
SMOOTH_CUBIC = "smooth-cubic"
TABULATED = "tabulated"


@dataclass(frozen=True)
class SwitchingProfile:
    """A monotone switching function with saturation outside [-1, 1].

    kind     one of 'ramp', 'smooth-cubic', 'tabulated'
    kappa    steepness ratio (> 0) applied when the profile drives the
             second hidden variable
    table    for 'tabulated': ordered (u, value) knots on [-1, 1],
             interpolated piecewise-linearly
    """

    kind: str
    kappa: float = 1.0
    table: tuple[tuple[float, float], ...] | None = None

    def __post_init__(self):
        if self.kind not in (RAMP, SMOOTH_CUBIC, TABULATED):
            raise ValueError(f"unknown switching profile kind {self.kind!r}")
        if not self.kappa > 0:
            raise ValueError("steepness ratio kappa must be positive")
        if self.kind == TABULATED:
            if not self.table or len(self.table) < 2:
                raise ValueError("tabulated profile needs at least two knots")
            us = [u for u, _ in self.table]
            if any(b <= a for a, b in zip(us, us[1:])):
                raise ValueError("tabulated knots must have increasing u")

    @staticmethod
    def ramp(kappa: float = 1.0) -> "SwitchingProfile":
        return SwitchingProfile(RAMP, kappa)

    @staticmethod
    def smooth_cubic(kappa: float = 1.0) -> "SwitchingProfile":
        return SwitchingProfile(SMOOTH_CUBIC, kappa)

    @staticmethod
    def tabulated(pairs, kappa: float = 1.0) -> "SwitchingProfile":
        return SwitchingProfile(TABULATED, kappa, tuple((float(u), float(p)) for u, p in pairs))

    def to_dict(self) -> dict:
        d: dict = {"kind": self.kind, "kappa": self.kappa}
        if self.table is not None:
            d["table"] = [list(p) for p in self.table]
        return d

    @staticmethod
    def from_dict(d: dict) -> "SwitchingProfile":
        return SwitchingProfile(d["kind"], d.get("kappa", 1.0),
                                tuple(tuple(p) for p in d["table"]) if "table" in d else None)


def eval_switch(profile: SwitchingProfile, u: float) -> float:
    """Value of the profile at u; saturates to +-1 outside [-1, 1]."""
    if profile.kind == RAMP:
        return -1.0 if u <= -1.0 else (1.0 if u >= 1.0 else u)
    if profile.kind == SMOOTH_CUBIC:
        if u <= -1.0:
            return -1.0
        if u >= 1.0:
            return 1.0
        return 0.5 * (3.0 * u - u ** 3)
    return _table_eval(profile.table, u)


def eval_switch_deriv(profile: SwitchingProfile, u: float) -> float:
    """Slope of the profile at u.

    Ramp corners |u| = 1 take the one-sided outside value 0; the
    integrator localizes corners as events, so this choice never affects
    an accepted step.
    """
    if profile.kind == RAMP:
        return 1.0 if -1.0 < u < 1.0 else 0.0
    if profile.kind == SMOOTH_CUBIC:
        return 1.5 * (1.0 - u * u) if -1.0 < u < 1.0 else 0.0
    return _table_slope(profile.table, u)


def _table_eval(table, u: float) -> float:
    us = [p[0] for p in table]
    if u <= us[0]:
        return table[0][1]
    if u >= us[-1]:
        return table[-1][1]
    k = bisect_right(us, u) - 1
    u0, p0 = table[k]
    u1, p1 = table[k + 1]
    return p0 + (p1 - p0) * (u - u0) / (u1 - u0)


def _table_slope(table, u: float) -> float:
    us = [p[0] for p in table]
    if u < us[0] or u > us[-1]:
        return 0.0
    k = min(max(bisect_right(us, u) - 1, 0), len(table) - 2)
    u0, p0 = table[k]
    u1, p1 = table[k + 1]
    return (p1 - p0) / (u1 - u0)


# ----------------------------------------------------------------------
# multiplicative factor used by the factor form of the hidden dynamics


def hill_factor(w: float, theta: float = 1.0) -> float:
    """The factor (1 - w^2) / (4 theta) contributed by a steep sigmoid.

    Defined on [-1, 1] only; it vanishes at the edges, which is what pins
    factor-form trajectories inside the unit box.
    """
    if not -1.0 <= w <= 1.0:
        raise ValueError(f"hill factor argument {w} outside [-1, 1]")
    return (1.0 - w * w) / (4.0 * theta)


@dataclass(frozen=True)
class HiddenFactor:
    """Multiplier applied to one hidden equation: unit, or the sigmoid factor."""

    kind: str = "hill"          # 'unit' | 'hill'
    theta: float = 1.0

    def __post_init__(self):
        if self.kind not in ("unit", "hill"):
            raise ValueError(f"unknown hidden factor kind {self.kind!r}")
        if not self.theta > 0:
            raise ValueError("theta must be positive")

    def value(self, w: float) -> float:
        if self.kind == "unit":
            return 1.0
        # no domain check here: integration may overshoot the box edge by
        # a rounding error and the formula degrades gracefully
        return (1.0 - w * w) / (4.0 * self.theta)

    def deriv(self, w: float) -> float:
        if self.kind == "unit":
            return 0.0
        return -w / (2.0 * self.theta)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "theta": self.theta}

    @staticmethod
    def from_dict(d: dict) -> "HiddenFactor":
        return HiddenFactor(d.get("kind", "hill"), d.get("theta", 1.0))


UNIT_FACTOR = HiddenFactor("unit")
HILL_FACTOR = HiddenFactor("hill")


# ----------------------------------------------------------------------
# admissibility checks


@dataclass
class SwitchPropertyReport:
    """Result of sampling the four admissibility properties of a profile."""

    odd: bool
    strictly_increasing: bool
    concave_inside: bool
    saturates: bool
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.odd and self.strictly_increasing and self.concave_inside and self.saturates


def check_switch_properties(profile: SwitchingProfile, grid: int = 256,
                            tol: float = 1e-12) -> SwitchPropertyReport:
    """Sampled check that a profile is odd, strictly increasing on (-1, 1),
    concave on (0, 1) and saturated at 1 beyond u = 1.

    grid >= 64 sample points; kinks (ramp corner, tabulated knots) are
    admitted by testing concavity through divided differences.
    """
    if grid < 64:
        raise ValueError("grid must be at least 64 points")
    failures: list[str] = []
    h = 1.0 / grid

    odd = all(abs(eval_switch(profile, -u) + eval_switch(profile, u)) <= tol
              for u in (k * h for k in range(grid + 1)))
    if not odd:
        failures.append("pi odd")

    interior = [(-1.0 + 2.0 * k / grid) for k in range(1, grid)]
    increasing = all(eval_switch(profile, b) - eval_switch(profile, a) > tol * 0 + 0.0
                     for a, b in zip(interior, interior[1:])) and all(
        eval_switch(profile, b) > eval_switch(profile, a) for a, b in zip(interior, interior[1:]))
    if not increasing:
        failures.append("pi' > 0")

    pts = [k / grid for k in range(grid + 1)]
    vals = [eval_switch(profile, u) for u in pts]
    concave = all(vals[k + 1] - vals[k] <= vals[k] - vals[k - 1] + tol
                  for k in range(1, grid))
    if not concave:
        failures.append("pi'' <= 0 on (0,1)")

    saturates = all(abs(eval_switch(profile, 1.0 + 2.0 * k / grid) - 1.0) <= tol
                    for k in range(grid + 1))
    if not saturates:
        failures.append("pi = 1 on [1,inf)")

    return SwitchPropertyReport(odd, increasing, concave, saturates, failures)
