"""JSON configuration for systems, switching, the integrator and experiments.

One structured file with sections {system, switching, integrator,
experiment}; every run echoes the fully resolved configuration back into
its report so any figure can be rebuilt from the report alone.
"""

from __future__ import annotations

import ast
import json
from dataclasses import dataclass, field
from fractions import Fraction

from .hidden import HiddenSystem, MultilinearCoeffs
from .integrate import IntegratorConfig
from .piecewise import SIGNS2, PiecewiseSystem, corner_fields


class ConfigError(ValueError):
    pass


_ALLOWED_NODES = (ast.Expression, ast.BinOp, ast.UnaryOp, ast.Constant, ast.Name,
                  ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow, ast.USub, ast.UAdd,
                  ast.Load)


def eval_polynomial(expr: str, names: dict[str, float]) -> float:
    """Evaluate an arithmetic expression over the given variables.

    Only +, -, *, /, ** and the supplied names are admitted, which keeps
    config files data, not code.
    """
    try:
        tree = ast.parse(expr, mode="eval")
    except SyntaxError as exc:
        raise ConfigError(f"bad expression {expr!r}: {exc}") from exc
    for node in ast.walk(tree):
        if not isinstance(node, _ALLOWED_NODES):
            raise ConfigError(f"disallowed syntax {type(node).__name__} in {expr!r}")
        if isinstance(node, ast.Name) and node.id not in names:
            raise ConfigError(f"unknown name {node.id!r} in {expr!r}")
        if isinstance(node, ast.Constant) and not isinstance(node.value, (int, float)):
            raise ConfigError(f"non-numeric constant in {expr!r}")
    return float(eval(compile(tree, "<config>", "eval"), {"__builtins__": {}}, names))


def _num(x):
    """Numbers in configs may be written as 'p/q' strings for exactness."""
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, bool):
        raise ConfigError(f"boolean {x!r} where a number was expected")
    if isinstance(x, int):
        return Fraction(x)
    return x


def system_from_config(section: dict) -> HiddenSystem:
    """Build a hidden system from a config section.

    Accepts either explicit multilinear coefficients, corner-value tables,
    or per-region polynomial expressions (validated against each other
    when both are present).
    """
    coeffs = None
    if "coeffs" in section:
        c = [_num(x) for x in section["coeffs"]]
        if len(c) != 8:
            raise ConfigError("coeffs must list eight values (two bilinear rows)")
        coeffs = MultilinearCoeffs(*c)
    if "corners" in section:
        fa = tuple(_num(x) for x in section["corners"]["alpha"])
        fb = tuple(_num(x) for x in section["corners"]["beta"])
        if len(fa) != 4 or len(fb) != 4:
            raise ConfigError("corner tables need four values per row (++, +-, -+, --)")
        from_corners = MultilinearCoeffs.from_corners(fa, fb)
        if coeffs is not None and any(
                abs(float(a) - float(b)) > 1e-12 for a, b in
                zip(coeffs.row1() + coeffs.row2(),
                    from_corners.row1() + from_corners.row2())):
            raise ConfigError("coeffs and corner table disagree")
        coeffs = from_corners
    if "regions" in section:
        pw = piecewise_from_config(section)
        cf = corner_fields(pw)
        from_regions = MultilinearCoeffs.from_corners(cf.fa, cf.fb)
        if coeffs is not None and any(
                abs(float(a) - float(b)) > 1e-10 for a, b in
                zip(coeffs.row1() + coeffs.row2(),
                    from_regions.row1() + from_regions.row2())):
            raise ConfigError("region expressions disagree with the corner data")
        coeffs = from_regions
    if coeffs is None:
        raise ConfigError("system section needs 'coeffs', 'corners' or 'regions'")

    return HiddenSystem.from_dict({
        "corners": {"alpha": [float(x) for x in coeffs.corners()[0]],
                    "beta": [float(x) for x in coeffs.corners()[1]]},
        "mode": section.get("mode", "composition"),
        "kappa": _num(section.get("kappa", 1)),
        **({"profiles": section["profiles"]} if "profiles" in section else {}),
        **({"factors": section["factors"]} if "factors" in section else {}),
    })


def piecewise_from_config(section: dict) -> PiecewiseSystem:
    regions = section["regions"]
    thresholds = tuple(float(_num(t)) for t in section.get("thresholds", (0.0, 0.0)))
    missing = [s for s in SIGNS2 if s not in regions]
    if missing:
        raise ConfigError(f"regions missing {missing}")
    names = [f"y{i+1}" for i in range(len(thresholds))]

    def make(exprs):
        def fld(y):
            env = {n: float(val) for n, val in zip(names, y)}
            return tuple(eval_polynomial(e, env) for e in exprs)
        return fld

    fields = {s: make(regions[s]) for s in SIGNS2}
    return PiecewiseSystem(len(thresholds), fields, thresholds)


def integrator_from_config(section: dict) -> IntegratorConfig:
    known = {f for f in IntegratorConfig.__dataclass_fields__}
    bad = set(section) - known
    if bad:
        raise ConfigError(f"unknown integrator settings: {sorted(bad)}")
    return IntegratorConfig(**section)


@dataclass
class RunConfig:
    """Fully resolved configuration of one experiment run."""

    preset: str
    system: dict = field(default_factory=dict)
    switching: dict = field(default_factory=dict)
    integrator: dict = field(default_factory=dict)
    experiment: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"preset": self.preset, "system": self.system,
                "switching": self.switching, "integrator": self.integrator,
                "experiment": self.experiment}

    @staticmethod
    def load(path) -> "RunConfig":
        with open(path) as fh:
            raw = json.load(fh)
        return RunConfig(raw.get("preset", ""), raw.get("system", {}),
                         raw.get("switching", {}), raw.get("integrator", {}),
                         raw.get("experiment", {}))

    def integrator_config(self) -> IntegratorConfig:
        return integrator_from_config(self.integrator)
