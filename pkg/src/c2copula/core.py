"""Copula construction from a generator, plus the checks that make the
characterisation testable: generator hypotheses, copula axioms, and the
closed-form versus double-integral round trip.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .generators import Generator
from .quadrature import DEFAULT_RULE, QuadratureRule, cumulative_2d

__all__ = [
    "GeneratorError",
    "Copula",
    "ValidationReport",
    "AxiomReport",
    "validate_generator",
    "build_copula",
    "check_axioms",
    "reconstruct_from_closed_form",
    "frechet_lower",
    "frechet_upper",
    "Uniform",
    "Exponential",
    "sklar_compose",
]

RANGE_TOL = 1e-12
MARGINAL_TOL = 1e-10


class GeneratorError(ValueError):
    """Generator evaluated to a non-finite value at ``location``."""

    def __init__(self, location, value):
        self.location = location
        super().__init__(f"generator is non-finite ({value!r}) at (u, v) = {location}")


def frechet_lower(u, v):
    return np.maximum(np.asarray(u) + np.asarray(v) - 1.0, 0.0)


def frechet_upper(u, v):
    return np.minimum(u, v)


class Copula:
    """An evaluatable bivariate copula.

    Built either from a :class:`Generator` (the usual route) or from a bare
    CDF, which is how the non-differentiable Frechet bounds enter as test
    oracles. ``closed_form`` is ``None`` when C is only available through
    quadrature.
    """

    def __init__(self, generator: Optional[Generator] = None,
                 closed_form: Optional[Callable] = None, label: str = ""):
        if generator is None and closed_form is None:
            raise ValueError("a copula needs a generator or a closed-form CDF")
        self.generator = generator
        self.closed_form = closed_form
        self.label = label or (generator.family if generator is not None else "closed-form")

    @property
    def rule(self) -> QuadratureRule:
        return self.generator.rule if self.generator is not None else DEFAULT_RULE

    def cdf(self, u, v):
        if self.closed_form is not None:
            return np.asarray(self.closed_form(u, v), dtype=float)
        return self.generator.cdf(u, v)

    __call__ = cdf

    def _need_generator(self, what: str) -> Generator:
        if self.generator is None:
            raise ValueError(f"{what} needs a generator; {self.label} has only a CDF")
        return self.generator

    def h(self, u, v):
        return self._need_generator("h").h(u, v)

    def density(self, u, v):
        return self._need_generator("density").density(u, v)

    def cdf_du(self, u, v):
        return self._need_generator("dC/du").cdf_du(u, v)

    def __repr__(self):
        return f"Copula({self.generator!r})" if self.generator is not None else f"Copula({self.label})"


def build_copula(g: Generator) -> Copula:
    """Wire a generator into a copula. No validation happens here."""
    return Copula(g, closed_form=g.cdf if g.closed_form else None)


@dataclass
class ValidationReport:
    """Outcome of checking the generator hypotheses on a probe grid.

    ``worst_violation`` is the largest pointwise breach of ``h >= -1`` on the
    grid. The two integral constraints are reported through
    ``marginal_violation``: ``marginal_u_ok`` means the integral of h(u, .)
    over v vanishes for every probed u (uniform U-margin), and
    ``marginal_v_ok`` the same with the roles swapped.
    """

    range_ok: bool
    marginal_u_ok: bool
    marginal_v_ok: bool
    worst_violation: float
    worst_location: Optional[tuple]
    marginal_violation: float
    marginal_location: Optional[tuple]
    probe_grid_size: int
    min_h: float

    @property
    def ok(self) -> bool:
        return self.range_ok and self.marginal_u_ok and self.marginal_v_ok

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "range_ok": self.range_ok,
            "marginal_u_ok": self.marginal_u_ok,
            "marginal_v_ok": self.marginal_v_ok,
            "worst_violation": self.worst_violation,
            "worst_location": self.worst_location,
            "marginal_violation": self.marginal_violation,
            "marginal_location": self.marginal_location,
            "min_h": self.min_h,
            "probe_grid_size": self.probe_grid_size,
        }


def _finite_or_raise(values, U, V):
    bad = ~np.isfinite(values)
    if bad.any():
        i = np.unravel_index(int(np.argmax(bad)), values.shape)
        raise GeneratorError((float(U[i]), float(V[i])), float(values[i]))


def validate_generator(g: Generator, grid_n: int = 201,
                       rule: Optional[QuadratureRule] = None) -> ValidationReport:
    """Check ``h >= -1`` on a uniform grid and the vanishing of both
    marginal integrals at ``grid_n`` values of the free variable."""
    if grid_n < 3:
        raise ValueError(f"grid_n must be >= 3, got {grid_n}")
    rule = rule or g.rule
    x = np.linspace(0.0, 1.0, grid_n)
    U, V = np.meshgrid(x, x, indexing="ij")
    H = np.broadcast_to(np.asarray(g.h(U, V), dtype=float), U.shape)
    _finite_or_raise(H, U, V)

    breach = np.maximum(-1.0 - H, 0.0)
    i = np.unravel_index(int(np.argmax(breach)), breach.shape)
    worst = float(breach[i])
    worst_loc = (float(U[i]), float(V[i])) if worst > 0 else None

    nodes, w = rule.nodes()
    Xn, Nn = np.meshgrid(x, nodes, indexing="ij")
    Hu = np.broadcast_to(np.asarray(g.h(Xn, Nn), dtype=float), Xn.shape)  # h(u, node)
    _finite_or_raise(Hu, Xn, Nn)
    Hv = np.broadcast_to(np.asarray(g.h(Nn, Xn), dtype=float), Xn.shape)  # h(node, v)
    _finite_or_raise(Hv, Nn, Xn)
    int_dv = np.abs(Hu @ w)
    int_du = np.abs(Hv @ w)

    ju, jv = int(np.argmax(int_dv)), int(np.argmax(int_du))
    if int_dv[ju] >= int_du[jv]:
        mworst, mloc = float(int_dv[ju]), ("u", float(x[ju]))
    else:
        mworst, mloc = float(int_du[jv]), ("v", float(x[jv]))

    return ValidationReport(
        range_ok=bool(worst <= RANGE_TOL),
        marginal_u_ok=bool(int_dv.max() <= MARGINAL_TOL),
        marginal_v_ok=bool(int_du.max() <= MARGINAL_TOL),
        worst_violation=worst,
        worst_location=worst_loc,
        marginal_violation=mworst,
        marginal_location=mloc if mworst > 0 else None,
        probe_grid_size=grid_n,
        min_h=float(H.min()),
    )


@dataclass
class AxiomReport:
    """Worst violation of each copula axiom over a grid (0 means clean)."""

    p1: float
    p2: float
    p3: float
    frechet: float
    grid_n: int
    tol: float = field(default=1e-9)

    @property
    def worst(self) -> float:
        return max(self.p1, self.p2, self.p3, self.frechet)

    @property
    def p1_ok(self) -> bool:
        return self.p1 <= self.tol

    @property
    def p2_ok(self) -> bool:
        return self.p2 <= self.tol

    @property
    def p3_ok(self) -> bool:
        return self.p3 <= self.tol

    @property
    def frechet_ok(self) -> bool:
        return self.frechet <= self.tol

    @property
    def ok(self) -> bool:
        return self.worst <= self.tol

    def to_dict(self) -> dict:
        return {"ok": self.ok, "p1": self.p1, "p2": self.p2, "p3": self.p3,
                "frechet": self.frechet, "worst": self.worst, "grid_n": self.grid_n,
                "tol": self.tol}


def check_axioms(c: Copula, grid_n: int = 101, tol: float = 1e-9) -> AxiomReport:
    """Grid audit of the boundary conditions, 2-increasingness on adjacent
    grid rectangles, and the Frechet-Hoeffding bounds."""
    if grid_n < 3:
        raise ValueError(f"grid_n must be >= 3, got {grid_n}")
    x = np.linspace(0.0, 1.0, grid_n)
    zero, one = np.zeros_like(x), np.ones_like(x)
    p1 = max(np.abs(c.cdf(x, zero)).max(), np.abs(c.cdf(zero, x)).max())
    p2 = max(np.abs(c.cdf(x, one) - x).max(), np.abs(c.cdf(one, x) - x).max())

    U, V = np.meshgrid(x, x, indexing="ij")
    Z = c.cdf(U, V)
    rect = Z[1:, 1:] + Z[:-1, :-1] - Z[:-1, 1:] - Z[1:, :-1]
    p3 = max(0.0, -float(rect.min()))
    fr = max(0.0, float((frechet_lower(U, V) - Z).max()), float((Z - frechet_upper(U, V)).max()))
    return AxiomReport(float(p1), float(p2), p3, fr, grid_n, tol)


def reconstruct_from_closed_form(c: Copula, grid_n: int = 51,
                                 rule: Optional[QuadratureRule] = None) -> float:
    """Max deviation between the closed-form C and the double integral of
    ``1 + h`` over interior grid points."""
    if c.closed_form is None or c.generator is None:
        raise ValueError(f"{c.label}: reconstruction needs both a closed form and a generator")
    rule = rule or c.rule
    x = np.linspace(0.0, 1.0, grid_n + 2)[1:-1]
    U, V = np.meshgrid(x, x, indexing="ij")
    integral = cumulative_2d(c.generator.density, U, V, rule)
    return float(np.abs(c.closed_form(U, V) - integral).max())


@dataclass(frozen=True)
class Uniform:
    lo: float = 0.0
    hi: float = 1.0

    def __post_init__(self):
        if not self.hi > self.lo:
            raise ValueError(f"uniform marginal needs hi > lo, got ({self.lo}, {self.hi})")

    def cdf(self, x):
        return np.clip((np.asarray(x, dtype=float) - self.lo) / (self.hi - self.lo), 0.0, 1.0)


@dataclass(frozen=True)
class Exponential:
    rate: float = 1.0

    def __post_init__(self):
        if not (self.rate > 0 and math.isfinite(self.rate)):
            raise ValueError(f"exponential marginal needs rate > 0, got {self.rate}")

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        return np.where(x > 0, -np.expm1(-self.rate * np.maximum(x, 0.0)), 0.0)


def sklar_compose(c: Copula, F, G, x, y):
    """Joint CDF H(x, y) = C(F(x), G(y))."""
    return c.cdf(F.cdf(x), G.cdf(y))
