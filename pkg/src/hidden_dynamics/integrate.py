"""Adaptive Runge-Kutta integration with event localization, limit-cycle
detection, outcome classification and parameter scans.

The stepper is the Dormand-Prince 5(4) embedded pair with PI step-size
control.  Scalar event functions are monitored across every accepted step;
a sign change is localized by bracketing bisection (each candidate state
is a genuine single RK step from the step's start, so localized states
inherit the integrator's accuracy) and integration restarts at the event,
which keeps non-smooth right-hand-side corners out of accepted steps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .hidden import COMPOSITION, FACTOR, HiddenSystem
from .exactalg import solve_quadratic_stable

__all__ = [
    "IntegratorConfig", "Event", "EventRecord", "Trajectory", "Outcome",
    "ExitInfo", "IntegrationError", "integrate_adaptive", "classify_outcome",
    "detect_limit_cycle", "scan_parameter", "ScanResult", "Bracket",
]


class IntegrationError(RuntimeError):
    """Step-size underflow or a non-finite right-hand side."""

    def __init__(self, message: str, tau: float, state):
        super().__init__(f"{message} at tau={tau:.6g}, state={state}")
        self.tau = tau
        self.state = state


@dataclass(frozen=True)
class IntegratorConfig:
    """Tolerances and budgets for integration and classification."""

    rtol: float = 1e-8
    atol: float = 1e-10
    max_step: float = 1.0
    horizon: float = 1e4
    event_tol: float = 1e-10
    divergence_radius: float = 1e3
    # classification knobs
    cycle_tol: float = 1e-4
    period_tol: float = 0.01
    cycle_floor: float = 5e-3
    exit_tol: float = 1e-6
    equilibrium_tol: float = 1e-8
    equilibrium_steps: int = 25
    boundary_nudge: float = 1e-6
    max_steps: int = 20_000_000

    def __post_init__(self):
        for name in ("rtol", "atol", "max_step", "horizon", "event_tol",
                     "divergence_radius", "cycle_tol", "period_tol",
                     "cycle_floor", "exit_tol", "equilibrium_tol", "boundary_nudge"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")


@dataclass(frozen=True)
class Event:
    """Scalar event g(tau, y); a root is localized when g changes sign.

    direction: 0 any crossing, +1 only rising crossings, -1 only falling.
    terminal stops the integration at the event.
    """

    fn: Callable[[float, Sequence[float]], float]
    name: str = "event"
    direction: int = 0
    terminal: bool = False


@dataclass(frozen=True)
class EventRecord:
    name: str
    index: int
    tau: float
    state: tuple
    direction: int
    value: float


@dataclass
class Trajectory:
    """Accepted states with strictly increasing times and event records."""

    taus: list[float] = field(default_factory=list)
    states: list[tuple] = field(default_factory=list)
    steps: list[float] = field(default_factory=list)
    events: list[EventRecord] = field(default_factory=list)
    status: str = "incomplete"
    n_rhs: int = 0
    verdict: object = None

    def append(self, tau: float, state: tuple, h: float):
        self.taus.append(tau)
        self.states.append(state)
        self.steps.append(h)

    @property
    def final_tau(self) -> float:
        return self.taus[-1]

    @property
    def final_state(self) -> tuple:
        return self.states[-1]

    def write_csv(self, path):
        n = len(self.states[0]) if self.states else 0
        ev_taus = {e.tau for e in self.events}
        with open(path, "w") as fh:
            cols = ",".join(f"y{i+1}" for i in range(n))
            fh.write(f"tau,{cols},event\n")
            for t, s in zip(self.taus, self.states):
                flag = 1 if t in ev_taus else 0
                vals = ",".join(f"{x:.12g}" for x in s)
                fh.write(f"{t:.12g},{vals},{flag}\n")


# ----------------------------------------------------------------------
# Dormand-Prince 5(4)

_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_E = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)

_MIN_FACTOR = 0.2
_MAX_FACTOR = 6.0
_SAFETY = 0.9
_ALPHA = 0.7 / 5.0
_BETA = 0.4 / 5.0


def _check_finite(f, tau, y):
    if not (math.isfinite(f[0]) and all(math.isfinite(c) for c in f)):
        raise IntegrationError("non-finite right-hand side", tau, y)
    return f


def _rk_stages(rhs, tau, y, h, k1, n):
    """The seven DOPRI5 stages for one step of size h; returns (k, y_new)."""
    k = [k1]
    for i in range(1, 7):
        a = _A[i]
        yi = list(y)
        for j, aij in enumerate(a):
            if aij != 0.0:
                kj = k[j]
                fac = h * aij
                for m in range(n):
                    yi[m] += fac * kj[m]
        k.append(_check_finite(rhs(tau + _C[i] * h, tuple(yi)), tau, y))
    b = _A[6]
    y_new = tuple(y[m] + h * (b[0] * k[0][m] + b[2] * k[2][m] + b[3] * k[3][m]
                              + b[4] * k[4][m] + b[5] * k[5][m]) for m in range(n))
    return k, y_new


def _rk_state_at(rhs, tau0, y0, k1, h, n):
    """State after a single 5th-order step of size h (event search helper)."""
    _, y_new = _rk_stages(rhs, tau0, y0, h, k1, n)
    return y_new


class _Stepper:
    """Embedded RK 5(4) core with PI step-size control on a tuple state."""

    def __init__(self, rhs, tau0: float, y0: Sequence[float], config: IntegratorConfig):
        self.rhs = rhs
        self.cfg = config
        self.tau = float(tau0)
        self.y = tuple(float(x) for x in y0)
        self.n = len(self.y)
        self.n_rhs = 0
        self.k1 = _check_finite(rhs(self.tau, self.y), self.tau, self.y)
        self.err_prev = 1e-2
        self.h = self._initial_step()

    def _initial_step(self) -> float:
        cfg = self.cfg
        sc = [cfg.atol + cfg.rtol * abs(c) for c in self.y]
        d0 = math.sqrt(sum((c / s) ** 2 for c, s in zip(self.y, sc)) / self.n)
        d1 = math.sqrt(sum((c / s) ** 2 for c, s in zip(self.k1, sc)) / self.n)
        h0 = 1e-6 if (d1 < 1e-10 or d0 < 1e-10) else 0.01 * d0 / d1
        h0 = min(h0, cfg.max_step)
        y1 = tuple(c + h0 * k for c, k in zip(self.y, self.k1))
        k2 = self.rhs(self.tau + h0, y1)
        self.n_rhs += 1
        d2 = math.sqrt(sum(((a - b) / s) ** 2 for a, b, s in zip(k2, self.k1, sc))
                       / self.n) / h0
        if max(d1, d2) < 1e-15:
            h1 = max(1e-6, h0 * 1e-3)
        else:
            h1 = (0.01 / max(d1, d2)) ** 0.2
        return max(min(100 * h0, h1, cfg.max_step), 1e-12)

    def advance(self, h_limit: float):
        """One accepted step of size at most h_limit.

        Returns (tau0, y0, k1_at_start, tau1, y1, h).
        """
        cfg = self.cfg
        n = self.n
        while True:
            h = min(self.h, cfg.max_step, h_limit)
            if h <= 1e-14 * max(1.0, abs(self.tau)):
                raise IntegrationError("step size underflow", self.tau, self.y)
            k, y_new = _rk_stages(self.rhs, self.tau, self.y, h, self.k1, n)
            self.n_rhs += 6
            err = 0.0
            for m in range(n):
                e = h * (_E[0] * k[0][m] + _E[2] * k[2][m] + _E[3] * k[3][m]
                         + _E[4] * k[4][m] + _E[5] * k[5][m] + _E[6] * k[6][m])
                sc = cfg.atol + cfg.rtol * max(abs(self.y[m]), abs(y_new[m]))
                err += (e / sc) ** 2
            err = math.sqrt(err / n)
            if err <= 1.0:
                fac = _SAFETY * (err ** -_ALPHA if err > 1e-10 else 10.0) \
                    * (self.err_prev ** _BETA)
                self.h = h * min(_MAX_FACTOR, max(_MIN_FACTOR, fac))
                self.err_prev = max(err, 1e-4)
                tau0, y0, k1 = self.tau, self.y, self.k1
                self.tau = tau0 + h
                self.y = y_new
                self.k1 = k[-1]          # FSAL
                return tau0, y0, k1, self.tau, y_new, h
            self.h = h * max(_MIN_FACTOR, _SAFETY * err ** -_ALPHA)

    def restart(self, tau: float, y: tuple):
        self.tau = tau
        self.y = tuple(y)
        self.k1 = _check_finite(self.rhs(tau, y), tau, y)
        self.n_rhs += 1


def _locate_event(rhs, tau0, y0, k1, n, ev: Event, h: float, g0: float, g1: float,
                  event_tol: float):
    """Bracketing bisection for the root of ev.fn along the step (0, h]."""
    lo, hi = 0.0, h
    glo = g0
    y_hi, g_hi = None, g1
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        y_mid = _rk_state_at(rhs, tau0, y0, k1, mid, n)
        g_mid = ev.fn(tau0 + mid, y_mid)
        if abs(g_mid) <= event_tol or (hi - lo) <= 1e-15 * max(1.0, abs(tau0)):
            return mid, y_mid, g_mid
        if (glo < 0.0) != (g_mid < 0.0):
            hi, g_hi, y_hi = mid, g_mid, y_mid
        else:
            lo, glo = mid, g_mid
    if y_hi is None:
        y_hi = _rk_state_at(rhs, tau0, y0, k1, hi, n)
    return hi, y_hi, g_hi


def integrate_adaptive(rhs, y0: Sequence[float], config: IntegratorConfig | None = None,
                       events: Sequence[Event] = (), tau0: float = 0.0,
                       tau_end: float | None = None,
                       observer: Callable | None = None) -> Trajectory:
    """Integrate rhs(tau, y) from tau0 until tau_end (default: the horizon).

    Every sign change of an event function inside an accepted step is
    localized and the step truncated there, so no accepted step straddles
    a sign change.  The observer, when given, runs after every accepted
    step with (trajectory, tau, state, event_record_or_None); returning a
    non-None value stops the run (the classifier uses this to short-circuit).
    """
    cfg = config or IntegratorConfig()
    end = tau_end if tau_end is not None else tau0 + cfg.horizon
    stepper = _Stepper(rhs, tau0, y0, cfg)
    traj = Trajectory()
    traj.append(stepper.tau, stepper.y, 0.0)

    def band_sign(g: float) -> int:
        return 0 if abs(g) <= cfg.event_tol else (1 if g > 0.0 else -1)

    # armed[i] is the last sign of g_i seen outside the tolerance band;
    # an event fires only on a band-to-band sign flip, so localizing a
    # root (which parks g inside the band) cannot re-trigger it
    g_prev = [ev.fn(stepper.tau, stepper.y) for ev in events]
    armed = [band_sign(g) for g in g_prev]
    while stepper.tau < end - 1e-14 * max(1.0, abs(end)):
        if len(traj.taus) > cfg.max_steps:
            traj.status = "max-steps"
            break
        t0, y0_, k1, t1, y1, h = stepper.advance(end - stepper.tau)

        hit = None  # (theta, y, g, index, new_sign)
        g_new = [ev.fn(t1, y1) for ev in events]
        for i, ev in enumerate(events):
            s1 = band_sign(g_new[i])
            crossed = armed[i] != 0 and s1 != 0 and s1 != armed[i]
            if crossed and ev.direction != 0:
                crossed = s1 == ev.direction
            if crossed:
                theta, y_ev, g_ev = _locate_event(rhs, t0, y0_, k1, stepper.n,
                                                  ev, h, g_prev[i], g_new[i],
                                                  cfg.event_tol)
                if hit is None or theta < hit[0]:
                    hit = (theta, y_ev, g_ev, i, s1)

        record = None
        if hit is not None:
            theta, y_ev, g_ev, i, s1 = hit
            ev = events[i]
            tau_ev = t0 + theta
            record = EventRecord(ev.name, i, tau_ev, tuple(y_ev), s1, g_ev)
            traj.events.append(record)
            stepper.restart(tau_ev, tuple(y_ev))
            traj.append(tau_ev, tuple(y_ev), theta)
            g_prev = [e.fn(tau_ev, y_ev) for e in events]
            for j, g in enumerate(g_prev):
                sj = band_sign(g)
                if sj != 0:
                    armed[j] = sj
            armed[i] = s1            # the located event moved to the far side
            if ev.terminal:
                traj.status = f"event:{ev.name}"
                traj.n_rhs = stepper.n_rhs
                return traj
        else:
            traj.append(t1, y1, h)
            g_prev = g_new
            for j, g in enumerate(g_new):
                sj = band_sign(g)
                if sj != 0:
                    armed[j] = sj

        if observer is not None:
            verdict = observer(traj, stepper.tau, stepper.y, record)
            if verdict is not None:
                traj.status = "classified"
                traj.n_rhs = stepper.n_rhs
                traj.verdict = verdict
                return traj

    if traj.status == "incomplete":
        traj.status = "reached-end"
    traj.n_rhs = stepper.n_rhs
    return traj


# ----------------------------------------------------------------------
# outcomes

EQUILIBRIUM = "equilibrium"
LIMIT_CYCLE = "limit-cycle"
EXIT = "exit"
SLIDING_REENTRY = "sliding-reentry"
DIVERGENCE = "divergence"
UNDECIDED = "undecided"
_WALL_FREEZE = "_wall-freeze"       # classifier-internal sentinel


@dataclass(frozen=True)
class ExitInfo:
    kind: str           # 'corner' | 'edge' | 'quadrant'
    label: str          # e.g. '(1,1)', 'u=+1', '++'
    target: tuple | None = None


@dataclass
class Outcome:
    """Terminal behavior of a hidden-dynamics trajectory."""

    tag: str
    tau: float
    state: tuple
    point: tuple | None = None
    period: float | None = None
    amplitude: float | None = None
    section_points: list = field(default_factory=list)
    exit: ExitInfo | None = None
    horizon: float | None = None
    events: list = field(default_factory=list)
    trajectory: Trajectory | None = None

    def to_dict(self) -> dict:
        d = {"tag": self.tag, "tau": self.tau, "state": list(self.state)}
        if self.point is not None:
            d["point"] = list(self.point)
        if self.period is not None:
            d["period"] = self.period
            d["amplitude"] = self.amplitude
        if self.exit is not None:
            d["exit"] = {"kind": self.exit.kind, "label": self.exit.label,
                         "target": list(self.exit.target) if self.exit.target else None}
        if self.horizon is not None:
            d["horizon"] = self.horizon
        if self.events:
            d["n_events"] = len(self.events)
        return d


def _interior_fixed_points_float(coeffs) -> list[tuple[float, float]]:
    """Interior nullcline intersections in float arithmetic (classifier
    helper; the exact solver lives in the bifurcation module)."""
    a1, b1, c1, d1 = (float(x) for x in coeffs.row1())
    a2, b2, c2, d2 = (float(x) for x in coeffs.row2())
    A = a2 * b1 - a1 * b2
    B = b1 * c2 + a2 * d1 - b2 * c1 - a1 * d2
    C = c2 * d1 - c1 * d2
    roots, _ = solve_quadratic_stable(A, B, C)
    pts = []
    for u in roots or []:
        den = a1 * u + c1
        den2 = a2 * u + c2
        if abs(den) > 1e-12:
            v = -(b1 * u + d1) / den
        elif abs(den2) > 1e-12:
            v = -(b2 * u + d2) / den2
        else:
            continue
        if abs(u) < 1.0 - 1e-12 and abs(v) < 1.0 - 1e-12:
            pts.append((u, v))
    return pts


def _boundary_fixed_points(sys: HiddenSystem):
    """Factor-mode boundary fixed points with their outward flags."""
    co = sys.coeffs
    k = float(sys.kappa)
    pts = []

    def f_u(u, v):
        return float(co.eval_u(u, v))

    def f_v(u, v):
        return float(co.eval_v(u, v))

    for su in (-1.0, 1.0):
        for sv in (-1.0, 1.0):
            out = f_u(su, sv) * su > 0.0 and f_v(su, sv) * sv > 0.0
            pts.append(((su, sv),
                        ExitInfo("corner", f"({int(su)},{int(sv)})", (su, sv)), out))
    for su in (-1.0, 1.0):
        den = float(co.a2) * su + float(co.c2)
        if abs(den) > 1e-14:
            v0 = -(float(co.b2) * su + float(co.d2)) / den
            if -1.0 < v0 < 1.0:
                out = f_u(su, v0) * su > 0.0
                pts.append(((su, v0), ExitInfo("edge", f"u={int(su):+d}", (su, v0)), out))
    for sv in (-1.0, 1.0):
        den = float(co.a1) * sv + float(co.b1)
        if abs(den) > 1e-14:
            u0 = -(float(co.c1) * sv + float(co.d1)) / den
            if -1.0 < u0 < 1.0:
                out = k * f_v(u0, sv) * sv > 0.0
                pts.append(((u0, sv), ExitInfo("edge", f"v={int(sv):+d}", (u0, sv)), out))
    return pts


def _pick_section(sys: HiddenSystem, fps) -> float | None:
    """Vertical section through the interior fixed point; with several
    candidates prefer one with complex eigenvalues (a cycle encircles it)."""
    if not fps:
        return None
    if len(fps) == 1:
        return fps[0][0]
    co = sys.coeffs
    k = float(sys.kappa)
    for u, v in fps:
        p = float(co.a1) * v + float(co.b1)
        q = float(co.a1) * u + float(co.c1)
        r = k * (float(co.a2) * v + float(co.b2))
        s = k * (float(co.a2) * u + float(co.c2))
        if (p - s) ** 2 + 4 * q * r < 0:
            return u
    return fps[0][0]


class _ClassifierState:
    def __init__(self, sys, cfg, fps, boundary_fps, section_index, section_u):
        self.sys = sys
        self.cfg = cfg
        self.fps = fps
        self.boundary_fps = boundary_fps
        self.section_index = section_index
        self.section_fp_v = None
        if section_u is not None:
            for (u, v) in fps:
                if abs(u - section_u) < 1e-12:
                    self.section_fp_v = v
        self.eq_run = 0
        self.crossings: list[tuple[float, tuple]] = []
        self.stable_run = 0
        self.loop_min_u = math.inf
        self.loop_max_u = -math.inf

    def observe(self, traj, tau, y, record):
        sys, cfg = self.sys, self.cfg
        fu, fv = sys.rhs(tau, y)
        self.loop_min_u = min(self.loop_min_u, y[0])
        self.loop_max_u = max(self.loop_max_u, y[0])

        # factor mode: a wall-grazing trajectory can touch an invariant
        # edge at machine resolution and freeze at the edge's stable zero;
        # hand the point back so the classifier can relaunch it off the wall
        if sys.mode == FACTOR and max(abs(fu), abs(fv)) < 1e-9 and \
                (1.0 - abs(y[0]) <= 1e-13 or 1.0 - abs(y[1]) <= 1e-13):
            return Outcome(_WALL_FREEZE, tau, tuple(y))

        # equilibrium first: a zero-amplitude cycle is an equilibrium
        if max(abs(fu), abs(fv)) < cfg.equilibrium_tol:
            self.eq_run += 1
            if self.eq_run >= cfg.equilibrium_steps:
                if self._locally_stable(tau, y):
                    return self._equilibrium_outcome(tau, y)
                # creeping past a saddle (or along a vanishing-factor edge):
                # not an equilibrium, re-test after a cooldown
                self.eq_run = -20 * cfg.equilibrium_steps
        else:
            self.eq_run = 0

        if record is not None and self.section_index is not None \
                and record.index == self.section_index:
            out = self._on_crossing(tau, y)
            if out is not None:
                return out

        if sys.mode == FACTOR:
            for (pt, info, outward) in self.boundary_fps:
                if outward and max(abs(y[0] - pt[0]), abs(y[1] - pt[1])) < cfg.exit_tol:
                    return Outcome(EXIT, tau, tuple(y), exit=info)
        else:
            if abs(y[0]) > 1.0 and abs(y[1]) > 1.0:
                su, sv = math.copysign(1.0, y[0]), math.copysign(1.0, y[1])
                cu = float(sys.coeffs.eval_u(su, sv))
                cv = float(sys.kappa) * float(sys.coeffs.eval_v(su, sv))
                if cu * su > 0.0 and cv * sv > 0.0:
                    label = ("+" if su > 0 else "-") + ("+" if sv > 0 else "-")
                    return Outcome(EXIT, tau, tuple(y),
                                   exit=ExitInfo("quadrant", label, (su, sv)))

        if max(abs(y[0]), abs(y[1])) > cfg.divergence_radius:
            return Outcome(DIVERGENCE, tau, tuple(y))
        return None

    def _locally_stable(self, tau, y) -> bool:
        """Largest eigenvalue real part of the numeric Jacobian is <= 0
        (up to tolerance); rejects saddle passages as equilibria."""
        h = 1e-6
        rhs = self.sys.rhs
        fpu = rhs(tau, (y[0] + h, y[1]))
        fmu = rhs(tau, (y[0] - h, y[1]))
        fpv = rhs(tau, (y[0], y[1] + h))
        fmv = rhs(tau, (y[0], y[1] - h))
        j11 = (fpu[0] - fmu[0]) / (2 * h)
        j21 = (fpu[1] - fmu[1]) / (2 * h)
        j12 = (fpv[0] - fmv[0]) / (2 * h)
        j22 = (fpv[1] - fmv[1]) / (2 * h)
        tr = j11 + j22
        det = j11 * j22 - j12 * j21
        disc = tr * tr / 4.0 - det
        max_re = tr / 2.0 + (math.sqrt(disc) if disc > 0.0 else 0.0)
        return max_re <= 1e-7

    def _equilibrium_outcome(self, tau, y):
        pt = tuple(y)
        for (u, v) in self.fps:
            if max(abs(y[0] - u), abs(y[1] - v)) < 1e-4:
                pt = (u, v)
                break
        if self.sys.mode == COMPOSITION and \
                (abs(y[0]) > 1.0 + 1e-9) != (abs(y[1]) > 1.0 + 1e-9):
            return Outcome(SLIDING_REENTRY, tau, tuple(y), point=pt)
        return Outcome(EQUILIBRIUM, tau, tuple(y), point=pt)

    def _on_crossing(self, tau, y):
        cfg = self.cfg
        self.crossings.append((tau, tuple(y)))
        amp = 0.5 * (self.loop_max_u - self.loop_min_u)
        self.loop_min_u, self.loop_max_u = y[0], y[0]
        if len(self.crossings) < 3:
            return None
        (t0, s0), (t1, s1), (t2, s2) = self.crossings[-3:]
        diff = max(abs(a - b) for a, b in zip(s1, s2))
        p1, p2 = t1 - t0, t2 - t1
        if diff < cfg.cycle_tol and abs(p2 - p1) <= cfg.period_tol * abs(p2):
            # a spiral converging into the focus also stabilizes its
            # crossings; only the extrapolated limit separates the two
            if self.section_fp_v is not None and \
                    abs(_aitken(s0[1], s1[1], s2[1]) - self.section_fp_v) < cfg.cycle_floor:
                self.stable_run = 0
                return None
            # slow transients can stall below tolerance for one loop;
            # require the stabilization to persist before declaring
            self.stable_run += 1
            if self.stable_run < 3:
                return None
            pts = [s for _, s in self.crossings[-3:]]
            return Outcome(LIMIT_CYCLE, tau, tuple(y), period=p2, amplitude=amp,
                           section_points=pts)
        self.stable_run = 0
        return None


def classify_outcome(sys: HiddenSystem, entry: Sequence[float],
                     config: IntegratorConfig | None = None,
                     return_trajectory: bool = False) -> Outcome:
    """Integrate from an entry state and classify the terminal behavior.

    Checked in priority order on every accepted step: equilibrium (small
    right-hand side, persistently), limit cycle (stabilized same-direction
    crossings of the section through the interior fixed point), factor-mode
    exit (asymptotic approach to an outward boundary fixed point),
    composition-mode exit (outward constant field beyond the box),
    divergence, and the explicit undecided horizon.
    """
    cfg = config or IntegratorConfig()
    u0, v0 = float(entry[0]), float(entry[1])
    if sys.mode == FACTOR:
        # edges are invariant in factor mode: boundary entries are nudged
        # inward so the trajectory can leave the wall
        if abs(abs(u0) - 1.0) < 1e-15:
            u0 -= math.copysign(cfg.boundary_nudge, u0)
        if abs(abs(v0) - 1.0) < 1e-15:
            v0 -= math.copysign(cfg.boundary_nudge, v0)
        if abs(u0) > 1.0 or abs(v0) > 1.0:
            raise ValueError(f"factor-mode entry {entry} lies outside the closed box")
    else:
        if abs(u0) > 1.0 + 1e-12 or abs(v0) > 1.0 + 1e-12:
            raise ValueError(f"entry {entry} lies outside the closed box")

    fps = _interior_fixed_points_float(sys.coeffs)
    section_u = _pick_section(sys, fps)

    events: list[Event] = []
    if sys.mode == COMPOSITION:
        events += [Event(lambda t, y: y[0] - 1.0, "u=+1"),
                   Event(lambda t, y: y[0] + 1.0, "u=-1"),
                   Event(lambda t, y: y[1] - 1.0, "v=+1"),
                   Event(lambda t, y: y[1] + 1.0, "v=-1")]
    section_index = None
    if section_u is not None:
        events.append(Event(lambda t, y, su=section_u: y[0] - su, "section",
                            direction=+1))
        section_index = len(events) - 1

    boundary_fps = _boundary_fixed_points(sys) if sys.mode == FACTOR else []
    state = _ClassifierState(sys, cfg, fps, boundary_fps, section_index, section_u)

    start, tau_from = (u0, v0), 0.0
    all_events: list[EventRecord] = []
    trajs: list[Trajectory] = []
    outcome = None
    for _ in range(64):
        traj = integrate_adaptive(sys.rhs, start, cfg, events, tau0=tau_from,
                                  tau_end=cfg.horizon, observer=state.observe)
        trajs.append(traj)
        all_events.extend(traj.events)
        verdict = traj.verdict
        if verdict is not None and verdict.tag == _WALL_FREEZE:
            # relaunch just off the touched edge; the repeating loop is then
            # picked up by the ordinary section-crossing machinery
            start = tuple(math.copysign(1.0 - cfg.boundary_nudge, c)
                          if 1.0 - abs(c) <= 1e-13 else c for c in verdict.state)
            tau_from = verdict.tau
            all_events.append(EventRecord("wall-relaunch", -1, verdict.tau,
                                          verdict.state, 0, 0.0))
            continue
        outcome = verdict
        break
    if outcome is None:
        last = trajs[-1]
        outcome = Outcome(UNDECIDED, last.final_tau, last.final_state,
                          horizon=cfg.horizon)
    outcome.events = all_events
    if return_trajectory:
        outcome.trajectory = _stitch(trajs)
    return outcome


def _stitch(trajs: list[Trajectory]) -> Trajectory:
    if len(trajs) == 1:
        return trajs[0]
    out = Trajectory()
    for tr in trajs:
        skip = 1 if out.taus and tr.taus and tr.taus[0] <= out.taus[-1] else 0
        out.taus.extend(tr.taus[skip:])
        out.states.extend(tr.states[skip:])
        out.steps.extend(tr.steps[skip:])
        out.events.extend(tr.events)
        out.n_rhs += tr.n_rhs
    out.status = trajs[-1].status
    return out


# ----------------------------------------------------------------------
# post-hoc limit-cycle detection on a recorded trajectory


def _aitken(x0: float, x1: float, x2: float) -> float:
    """Aitken extrapolation of a geometric sequence's limit."""
    den = (x2 - x1) - (x1 - x0)
    if abs(den) < 1e-300:
        return x2
    return x2 - (x2 - x1) ** 2 / den


def detect_limit_cycle(traj: Trajectory, section_u: float,
                       cycle_tol: float = 1e-4, period_tol: float = 0.01):
    """Find a limit cycle from same-direction crossings of u = section_u.

    Uses recorded section events when present, otherwise linearly
    interpolated rising crossings of the state polyline.  Returns
    (period, crossing states) or None.
    """
    crossings = [(e.tau, e.state) for e in traj.events if e.name == "section"]
    if not crossings:
        crossings = _interpolated_crossings(traj, section_u)
    if len(crossings) < 3:
        return None
    for k in range(2, len(crossings)):
        (t0, _), (t1, s1), (t2, s2) = crossings[k - 2], crossings[k - 1], crossings[k]
        diff = max(abs(a - b) for a, b in zip(s1, s2))
        p1, p2 = t1 - t0, t2 - t1
        if diff < cycle_tol and abs(p2 - p1) <= period_tol * abs(p2):
            return p2, [s1, s2]
    return None


def _interpolated_crossings(traj: Trajectory, section_u: float):
    out = []
    for i in range(1, len(traj.states)):
        g0 = traj.states[i - 1][0] - section_u
        g1 = traj.states[i][0] - section_u
        if g0 < 0.0 <= g1 and g1 != g0:
            w = -g0 / (g1 - g0)
            s = tuple(a + w * (b - a)
                      for a, b in zip(traj.states[i - 1], traj.states[i]))
            out.append((traj.taus[i - 1] + w * (traj.taus[i] - traj.taus[i - 1]), s))
    return out


# ----------------------------------------------------------------------
# parameter scans


@dataclass(frozen=True)
class Bracket:
    lo: float
    hi: float
    tag_lo: str
    tag_hi: str


@dataclass
class ScanResult:
    points: list
    brackets: list

    def to_dict(self) -> dict:
        return {
            "points": [{"kappa": k, **o.to_dict()} for k, o in self.points],
            "brackets": [{"lo": b.lo, "hi": b.hi, "tags": [b.tag_lo, b.tag_hi]}
                         for b in self.brackets],
        }


def bisect_tag_change(tag_of: Callable[[float], str], lo: float, tag_lo: str,
                      hi: float, tag_hi: str, tol: float) -> Bracket:
    """Shrink a tag-change interval to width tol by bisection.

    A third tag at the midpoint (e.g. an undecided run) still yields a
    valid change bracket against the lower endpoint.
    """
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        tag_mid = tag_of(mid)
        if tag_mid == tag_lo:
            lo = mid
        else:
            hi, tag_hi = mid, tag_mid
    return Bracket(lo, hi, tag_lo, tag_hi)


def scan_parameter(family: Callable[[float], HiddenSystem], kappas: Sequence[float],
                   entry: Sequence[float], config: IntegratorConfig | None = None,
                   kappa_tol: float = 1e-3) -> ScanResult:
    """Classify outcomes over a parameter grid and bisect tag changes.

    Where neighboring grid points carry different outcome tags, the change
    is bisected down to a bracket of width kappa_tol.
    """
    if not len(kappas):
        raise ValueError("empty parameter grid")
    pts = [(float(k), classify_outcome(family(k), entry, config)) for k in kappas]
    brackets = []
    for (k0, o0), (k1, o1) in zip(pts, pts[1:]):
        if o0.tag != o1.tag:
            brackets.append(bisect_tag_change(
                lambda k: classify_outcome(family(k), entry, config).tag,
                k0, o0.tag, k1, o1.tag, kappa_tol))
    return ScanResult(pts, brackets)
