"""Exact arithmetic helpers.

Quadratic-extension numbers a + b*sqrt(w) over the rationals, dense
bivariate polynomials with exchangeable coefficient types, and stable
closed-form solvers for quadratics and cubics.  Everything here is pure
and deterministic; the rest of the package uses these pieces whenever a
result has to be reproduced exactly (rational fixed points, Jacobian
entries, Lyapunov coefficients, invariant-region certificates).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable


def as_fraction(x) -> Fraction:
    """Coerce ints/Fractions (and exact floats) to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def exact_sqrt(x: Fraction) -> Fraction | None:
    """Rational square root of x, or None when x is not a perfect square."""
    if x < 0:
        return None
    n, d = x.numerator, x.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


@dataclass(frozen=True)
class QuadExt:
    """Exact number a + b*sqrt(w), with a, b, w rational and w >= 0.

    Closed under +, -, *, / (field operations in Q(sqrt(w))), with exact
    sign evaluation, so irrational fixed points such as the sqrt(17) family
    can be carried through an entire analysis without rounding.
    """

    a: Fraction
    b: Fraction = Fraction(0)
    w: Fraction = Fraction(0)

    def __post_init__(self):
        if self.w < 0:
            raise ValueError("negative radicand")
        if self.w == 0 and self.b != 0:
            object.__setattr__(self, "b", Fraction(0))

    @staticmethod
    def of(x, w=Fraction(0)) -> "QuadExt":
        if isinstance(x, QuadExt):
            return x
        return QuadExt(as_fraction(x), Fraction(0), as_fraction(w))

    def _join(self, other) -> tuple["QuadExt", "QuadExt"]:
        o = other if isinstance(other, QuadExt) else QuadExt(as_fraction(other))
        if self.b == 0 and o.b != 0:
            return QuadExt(self.a, Fraction(0), o.w), o
        if o.b == 0 and self.b != 0:
            return self, QuadExt(o.a, Fraction(0), self.w)
        if self.b != 0 and o.b != 0 and self.w != o.w:
            # radicands that differ by a square factor live in one field
            r = exact_sqrt(self.w / o.w)
            if r is not None:
                return self, QuadExt(o.a, o.b / r, self.w)
            raise ValueError(f"incompatible radicals sqrt({self.w}) vs sqrt({o.w})")
        return self, o

    def __add__(self, other):
        s, o = self._join(other)
        return QuadExt(s.a + o.a, s.b + o.b, s.w if s.b or o.b else o.w)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self.a, -self.b, self.w)

    def __sub__(self, other):
        return self + (-(other if isinstance(other, QuadExt) else QuadExt(as_fraction(other))))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        s, o = self._join(other)
        w = s.w if s.b else o.w
        return QuadExt(s.a * o.a + s.b * o.b * w, s.a * o.b + s.b * o.a, w)

    __rmul__ = __mul__

    def __truediv__(self, other):
        s, o = self._join(other)
        w = s.w if s.b else o.w
        den = o.a * o.a - o.b * o.b * w
        if den == 0:
            r = o.reduce()
            if isinstance(r, Fraction):
                if r == 0:
                    raise ZeroDivisionError("division by zero")
                return QuadExt(s.a / r, s.b / r, w)
            raise ZeroDivisionError("division by zero")
        return QuadExt((s.a * o.a - s.b * o.b * w) / den, (s.b * o.a - s.a * o.b) / den, w)

    def __rtruediv__(self, other):
        return QuadExt(as_fraction(other), Fraction(0), self.w) / self

    def sign(self) -> int:
        """Exact sign of a + b*sqrt(w)."""
        a, b, w = self.a, self.b, self.w
        if b == 0 or w == 0:
            return (a > 0) - (a < 0)
        if a == 0:
            return (b > 0) - (b < 0)
        lhs, rhs = a * a, b * b * w
        if lhs == rhs:
            return 0 if (a > 0) != (b > 0) else ((a > 0) - (a < 0))
        if a > 0:
            return 1 if (b > 0 or lhs > rhs) else -1
        return -1 if (b < 0 or lhs > rhs) else 1

    def __eq__(self, other):
        try:
            return (self - other).sign() == 0
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        r = self.reduce()
        return hash(r) if isinstance(r, Fraction) else hash((self.a, self.b, self.w))

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def reduce(self) -> "Fraction | QuadExt":
        """Collapse to a plain Fraction when sqrt(w) is rational."""
        if self.b == 0:
            return self.a
        r = exact_sqrt(self.w)
        if r is not None:
            return self.a + self.b * r
        return self

    def is_rational(self) -> bool:
        return isinstance(self.reduce(), Fraction)

    def __float__(self):
        r = self.reduce()
        if isinstance(r, Fraction):
            return float(r)
        return float(self.a) + float(self.b) * math.sqrt(float(self.w))

    def __repr__(self):
        if self.b == 0:
            return f"{self.a}"
        return f"({self.a} + {self.b}*sqrt({self.w}))"


# ----------------------------------------------------------------------
# quadratics with exact coefficients


@dataclass(frozen=True)
class QuadraticRoots:
    """Outcome of A x^2 + B x + C = 0 over the rationals."""

    kind: str            # 'two' | 'double' | 'linear' | 'none' | 'any'
    roots: tuple
    discriminant: Fraction | None = None


def solve_quadratic_exact(A, B, C) -> QuadraticRoots:
    """Solve A x^2 + B x + C = 0 exactly; roots are QuadExt numbers."""
    A, B, C = as_fraction(A), as_fraction(B), as_fraction(C)
    if A == 0:
        if B == 0:
            return QuadraticRoots("any" if C == 0 else "none", ())
        return QuadraticRoots("linear", (QuadExt(-C / B),))
    disc = B * B - 4 * A * C
    if disc < 0:
        return QuadraticRoots("none", (), disc)
    if disc == 0:
        return QuadraticRoots("double", (QuadExt(-B / (2 * A)),), disc)
    half = Fraction(1, 2) / A
    r1 = QuadExt(-B * half, half, disc)
    r2 = QuadExt(-B * half, -half, disc)
    return QuadraticRoots("two", (r1, r2), disc)


def solve_quadratic_stable(a: float, b: float, c: float, double_tol: float = 1e-12):
    """Float quadratic solver using the sign-aware discriminant form.

    Returns (roots, tangent) where tangent flags |disc| below double_tol
    relative to the coefficient scale (reported as a single root).
    """
    if a == 0.0:
        if b == 0.0:
            return ([], False) if c != 0.0 else (None, False)
        return [-c / b], False
    disc = b * b - 4.0 * a * c
    scale = max(b * b, abs(4.0 * a * c), 1e-300)
    if abs(disc) < double_tol * scale:
        return [-b / (2.0 * a)], True
    if disc < 0.0:
        return [], False
    sq = math.sqrt(disc)
    q = -0.5 * (b + math.copysign(sq, b)) if b != 0.0 else 0.5 * sq
    if q == 0.0:
        return [0.0, -b / a], False
    return sorted({q / a, c / q}), False


# ----------------------------------------------------------------------
# real roots of cubics, closed form


def real_cubic_roots(c3: float, c2: float, c1: float, c0: float) -> list[float]:
    """All real roots of c3 x^3 + c2 x^2 + c1 x + c0, by radicals.

    Degenerate leading coefficients fall back to the quadratic solver.
    Each root gets one Newton polish step.
    """
    if abs(c3) < 1e-300:
        roots, _ = solve_quadratic_stable(c2, c1, c0)
        return list(roots or [])
    b, c, d = c2 / c3, c1 / c3, c0 / c3
    p = c - b * b / 3.0
    q = 2.0 * b ** 3 / 27.0 - b * c / 3.0 + d
    shift = -b / 3.0
    disc = -4.0 * p ** 3 - 27.0 * q * q
    roots: list[float]
    if abs(p) < 1e-14 and abs(q) < 1e-14:
        roots = [shift]
    elif disc > 0.0:
        # three real roots, trigonometric form
        m = 2.0 * math.sqrt(-p / 3.0)
        arg = 3.0 * q / (p * m)
        arg = min(1.0, max(-1.0, arg))
        phi = math.acos(arg) / 3.0
        roots = [m * math.cos(phi - 2.0 * math.pi * k / 3.0) + shift for k in range(3)]
    else:
        # one real root, Cardano
        half_q = -q / 2.0
        rad = math.sqrt(max(q * q / 4.0 + p ** 3 / 27.0, 0.0))
        t = math.copysign(abs(half_q + rad) ** (1.0 / 3.0), half_q + rad) + \
            math.copysign(abs(half_q - rad) ** (1.0 / 3.0), half_q - rad)
        roots = [t + shift]

    def polish(x: float) -> float:
        f = ((c3 * x + c2) * x + c1) * x + c0
        df = (3.0 * c3 * x + 2.0 * c2) * x + c1
        if df != 0.0:
            step = f / df
            if abs(step) < 1.0:
                return x - step
        return x

    return sorted(polish(x) for x in roots)


# ----------------------------------------------------------------------
# bivariate polynomials with generic coefficients


class Poly2:
    """Sparse bivariate polynomial sum c[i,j] u^i v^j.

    Coefficients can be Fractions, QuadExt numbers or floats; all
    operations stay within the coefficient type supplied.
    """

    __slots__ = ("c",)

    def __init__(self, coeffs: dict[tuple[int, int], object] | None = None):
        self.c = {k: v for k, v in (coeffs or {}).items() if not _is_zero(v)}

    @staticmethod
    def monomial(coeff, i: int, j: int) -> "Poly2":
        return Poly2({(i, j): coeff})

    @staticmethod
    def constant(coeff) -> "Poly2":
        return Poly2({(0, 0): coeff})

    def coeff(self, i: int, j: int, default=0):
        return self.c.get((i, j), default)

    def degree(self) -> int:
        return max((i + j for i, j in self.c), default=0)

    def map_coeffs(self, fn: Callable) -> "Poly2":
        return Poly2({k: fn(v) for k, v in self.c.items()})

    def __add__(self, other: "Poly2") -> "Poly2":
        out = dict(self.c)
        for k, v in other.c.items():
            out[k] = out[k] + v if k in out else v
        return Poly2(out)

    def __sub__(self, other: "Poly2") -> "Poly2":
        return self + other.scale(-1)

    def scale(self, s) -> "Poly2":
        return Poly2({k: v * s for k, v in self.c.items()})

    def __mul__(self, other: "Poly2") -> "Poly2":
        out: dict[tuple[int, int], object] = {}
        for (i1, j1), v1 in self.c.items():
            for (i2, j2), v2 in other.c.items():
                k = (i1 + i2, j1 + j2)
                t = v1 * v2
                out[k] = out[k] + t if k in out else t
        return Poly2(out)

    def pow(self, n: int) -> "Poly2":
        out = Poly2.constant(_one_like(next(iter(self.c.values()), 1)))
        for _ in range(n):
            out = out * self
        return out

    def subs_linear(self, lu: "Poly2", lv: "Poly2") -> "Poly2":
        """Substitute u -> lu(x, y), v -> lv(x, y)."""
        maxi = max((i for i, _ in self.c), default=0)
        maxj = max((j for _, j in self.c), default=0)
        pu = [Poly2.constant(_one_like(1))] + [None] * maxi
        pv = [Poly2.constant(_one_like(1))] + [None] * maxj
        for k in range(1, maxi + 1):
            pu[k] = pu[k - 1] * lu
        for k in range(1, maxj + 1):
            pv[k] = pv[k - 1] * lv
        out = Poly2()
        for (i, j), v in self.c.items():
            out = out + (pu[i] * pv[j]).scale(v)
        return out

    def shift(self, u0, v0) -> "Poly2":
        """Substitute u -> u + u0, v -> v + v0."""
        lu = Poly2({(1, 0): _one_like(u0), (0, 0): u0})
        lv = Poly2({(0, 1): _one_like(v0), (0, 0): v0})
        return self.subs_linear(lu, lv)

    def deriv(self, var: str) -> "Poly2":
        out = {}
        for (i, j), v in self.c.items():
            if var == "u" and i > 0:
                out[(i - 1, j)] = v * i
            elif var == "v" and j > 0:
                out[(i, j - 1)] = v * j
        return Poly2(out)

    def eval(self, u, v):
        tot = None
        for (i, j), c in self.c.items():
            t = c * (u ** i) * (v ** j)
            tot = t if tot is None else tot + t
        return 0 if tot is None else tot

    def eval_float(self, u: float, v: float) -> float:
        return sum(float(c) * u ** i * v ** j for (i, j), c in self.c.items())

    def __repr__(self):
        terms = [f"{v}*u^{i}*v^{j}" for (i, j), v in sorted(self.c.items())]
        return " + ".join(terms) if terms else "0"


def _is_zero(v) -> bool:
    if isinstance(v, QuadExt):
        return v.a == 0 and v.b == 0
    return v == 0


def _one_like(v):
    if isinstance(v, QuadExt):
        return QuadExt(Fraction(1), Fraction(0), v.w)
    if isinstance(v, Fraction):
        return Fraction(1)
    if isinstance(v, float):
        return 1.0
    return 1
