"""The two-dimensional hidden dynamics inside the switching box.

Near a transversal intersection of two switching surfaces the fast
variables obey a bilinear system determined by the eight projected corner
values.  Two concrete realizations are supported:

* composition form - the bilinear field evaluated at switch outputs
  pi(u), pi(v), defined on the whole plane through saturation, and
* factor form - the bilinear field premultiplied by the sigmoid factors
  (1-u^2)/4 and (1-v^2)/4, defined on the closed unit box whose edges are
  then invariant.

The steepness ratio kappa multiplies the second equation only.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

from .exactalg import Poly2, as_fraction
from .switching import (HILL_FACTOR, UNIT_FACTOR, HiddenFactor,
                        SwitchingProfile, eval_switch)

COMPOSITION = "composition"
FACTOR = "factor"


@dataclass(frozen=True)
class MultilinearCoeffs:
    """Coefficients of u' = a1 uv + b1 u + c1 v + d1, v' = a2 uv + ... .

    In exact bijection with the four projected corner values of each
    equation (bilinear interpolation through the corners of [-1,1]^2).
    """

    a1: object
    b1: object
    c1: object
    d1: object
    a2: object
    b2: object
    c2: object
    d2: object

    @staticmethod
    def from_corners(fa: tuple, fb: tuple) -> "MultilinearCoeffs":
        """Invert bilinear interpolation through corner values.

        Corner order is (++, +-, -+, --) for both rows.
        """
        def row(f):
            fpp, fpm, fmp, fmm = f
            q = _quarter_like(fpp)
            return ((fpp - fpm - fmp + fmm) * q,
                    (fpp + fpm - fmp - fmm) * q,
                    (fpp - fpm + fmp - fmm) * q,
                    (fpp + fpm + fmp + fmm) * q)

        a1, b1, c1, d1 = row(fa)
        a2, b2, c2, d2 = row(fb)
        return MultilinearCoeffs(a1, b1, c1, d1, a2, b2, c2, d2)

    def corners(self) -> tuple[tuple, tuple]:
        """Corner values ((++, +-, -+, --) per row); exact round trip."""
        def ev(a, b, c, d):
            return (a + b + c + d, -a + b - c + d, -a - b + c + d, a - b - c + d)
        return ev(self.a1, self.b1, self.c1, self.d1), ev(self.a2, self.b2, self.c2, self.d2)

    def eval_u(self, u, v):
        return self.a1 * u * v + self.b1 * u + self.c1 * v + self.d1

    def eval_v(self, u, v):
        return self.a2 * u * v + self.b2 * u + self.c2 * v + self.d2

    def row1(self) -> tuple:
        return (self.a1, self.b1, self.c1, self.d1)

    def row2(self) -> tuple:
        return (self.a2, self.b2, self.c2, self.d2)

    def as_fractions(self) -> "MultilinearCoeffs":
        return MultilinearCoeffs(*[as_fraction(x) for x in
                                   (self.a1, self.b1, self.c1, self.d1,
                                    self.a2, self.b2, self.c2, self.d2)])

    def scale_second_row(self, kappa) -> "MultilinearCoeffs":
        return replace(self, a2=self.a2 * kappa, b2=self.b2 * kappa,
                       c2=self.c2 * kappa, d2=self.d2 * kappa)

    def polynomials(self) -> tuple[Poly2, Poly2]:
        def poly(a, b, c, d):
            return Poly2({(1, 1): a, (1, 0): b, (0, 1): c, (0, 0): d})
        return poly(*self.row1()), poly(*self.row2())


def _quarter_like(x):
    if isinstance(x, (int, Fraction)):
        return Fraction(1, 4)
    return 0.25


def multilinear_from_corners(fa: tuple, fb: tuple) -> MultilinearCoeffs:
    return MultilinearCoeffs.from_corners(fa, fb)


@dataclass(frozen=True)
class HiddenSystem:
    """A concrete hidden-dynamics realization of a bilinear corner field."""

    coeffs: MultilinearCoeffs
    mode: str = COMPOSITION
    kappa: object = 1
    profile_u: SwitchingProfile | None = None
    profile_v: SwitchingProfile | None = None
    factor_u: HiddenFactor | None = None
    factor_v: HiddenFactor | None = None

    def __post_init__(self):
        if self.mode == COMPOSITION:
            if self.factor_u is not None or self.factor_v is not None:
                raise ValueError("composition mode takes switching profiles, not factors")
            object.__setattr__(self, "profile_u", self.profile_u or SwitchingProfile.ramp())
            object.__setattr__(self, "profile_v", self.profile_v or SwitchingProfile.ramp())
        elif self.mode == FACTOR:
            if self.profile_u is not None or self.profile_v is not None:
                raise ValueError("factor mode takes hidden factors, not profiles")
            object.__setattr__(self, "factor_u", self.factor_u or HILL_FACTOR)
            object.__setattr__(self, "factor_v", self.factor_v or HILL_FACTOR)
        else:
            raise ValueError(f"unknown hidden-system mode {self.mode!r}")
        if not float(self.kappa) > 0:
            raise ValueError("kappa must be positive")

    @staticmethod
    def from_profiles(coeffs: MultilinearCoeffs, profile_u: SwitchingProfile,
                      profile_v: SwitchingProfile) -> "HiddenSystem":
        """Composition system driven by two profiles; their steepness
        ratio multiplies the second equation."""
        kappa = profile_v.kappa / profile_u.kappa
        if profile_u.kappa == int(profile_u.kappa) and \
                profile_v.kappa == int(profile_v.kappa):
            kappa = Fraction(int(profile_v.kappa), int(profile_u.kappa))
        return HiddenSystem(coeffs, COMPOSITION, kappa,
                            profile_u=profile_u, profile_v=profile_v)

    # -- evaluation ----------------------------------------------------

    def rhs(self, tau: float, y) -> tuple[float, float]:
        u, v = y[0], y[1]
        c = self._float_coeffs()
        k = float(self.kappa)
        if self.mode == COMPOSITION:
            ru = eval_switch(self.profile_u, u)
            rv = eval_switch(self.profile_v, v)
            return (_bilin(c[0], ru, rv), k * _bilin(c[1], ru, rv))
        hu = self.factor_u.value(u)
        hv = self.factor_v.value(v)
        return (hu * _bilin(c[0], u, v), k * hv * _bilin(c[1], u, v))

    def _float_coeffs(self):
        cached = getattr(self, "_fc", None)
        if cached is None:
            cached = (tuple(float(x) for x in self.coeffs.row1()),
                      tuple(float(x) for x in self.coeffs.row2()))
            object.__setattr__(self, "_fc", cached)
        return cached

    def with_kappa(self, kappa) -> "HiddenSystem":
        return replace(self, kappa=kappa)

    def scaled_coeffs(self) -> MultilinearCoeffs:
        """Coefficients with kappa folded into the second row."""
        return self.coeffs.scale_second_row(self.kappa)

    def polynomials(self) -> tuple[Poly2, Poly2]:
        """The right-hand side as exact polynomials (factor form expands
        the sigmoid multipliers; composition form is the bare bilinear,
        valid inside the box where the profiles are the identity)."""
        cf = self.coeffs.as_fractions()
        pu, pv = cf.polynomials()
        kap = as_fraction(self.kappa)
        if self.mode == FACTOR:
            pu = _factor_poly(self.factor_u) * pu
            pv = _factor_poly(self.factor_v, second=True) * pv
        return pu, pv.scale(kap)

    # -- serialization ---------------------------------------------------

    def to_dict(self) -> dict:
        d: dict = {
            "corners": {"alpha": [float(x) for x in self.coeffs.corners()[0]],
                        "beta": [float(x) for x in self.coeffs.corners()[1]]},
            "mode": self.mode,
            "kappa": float(self.kappa),
        }
        if self.mode == COMPOSITION:
            d["profiles"] = {"u": self.profile_u.to_dict(), "v": self.profile_v.to_dict()}
        else:
            d["factors"] = {"u": self.factor_u.to_dict(), "v": self.factor_v.to_dict()}
        return d

    @staticmethod
    def from_dict(d: dict) -> "HiddenSystem":
        corners = d["corners"]
        coeffs = MultilinearCoeffs.from_corners(tuple(corners["alpha"]), tuple(corners["beta"]))
        mode = d.get("mode", COMPOSITION)
        kappa = d.get("kappa", 1.0)
        if mode == COMPOSITION:
            profs = d.get("profiles", {})
            return HiddenSystem(coeffs, mode, kappa,
                                profile_u=SwitchingProfile.from_dict(profs["u"]) if "u" in profs else None,
                                profile_v=SwitchingProfile.from_dict(profs["v"]) if "v" in profs else None)
        facts = d.get("factors", {})
        return HiddenSystem(coeffs, mode, kappa,
                            factor_u=HiddenFactor.from_dict(facts["u"]) if "u" in facts else None,
                            factor_v=HiddenFactor.from_dict(facts["v"]) if "v" in facts else None)


def _bilin(c, u, v):
    a, b, cc, d = c
    return a * u * v + b * u + cc * v + d


def _factor_poly(factor: HiddenFactor, second: bool = False) -> Poly2:
    """(1 - w^2)/(4 theta) as a polynomial in u (or in v)."""
    if factor.kind == "unit":
        return Poly2.constant(Fraction(1))
    th = as_fraction(factor.theta)
    q = Fraction(1, 4) / th
    key2 = (0, 2) if second else (2, 0)
    return Poly2({(0, 0): q, key2: -q})


def hidden_rhs(sys: HiddenSystem, u: float, v: float) -> tuple[float, float]:
    """Right-hand side (u', v') of the hidden system at a point."""
    return sys.rhs(0.0, (u, v))


def wall_equilibrium(coeffs: MultilinearCoeffs, edge: str):
    """Equilibrium of the sliding dynamics pinned to one box edge.

    edge is 'v=-1', 'v=+1', 'u=-1' or 'u=+1'; returns the coordinate of
    the free variable where the tangential field vanishes (exact for
    exact coefficients), or None when the edge dynamics has no zero.
    """
    var, val = edge.split("=")
    s = as_fraction(int(val))
    c = coeffs.as_fractions()
    if var == "v":
        den = c.a1 * s + c.b1
        num = c.c1 * s + c.d1
    elif var == "u":
        den = c.a2 * s + c.c2
        num = c.b2 * s + c.d2
    else:
        raise ValueError(f"bad edge spec {edge!r}")
    if den == 0:
        return None
    return -num / den
