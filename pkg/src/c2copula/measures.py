"""Spearman's rho and Kendall's tau: quadrature from the copula itself and
closed forms for the Fourier and smoothed-extremal families."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Optional

import numpy as np

from .core import Copula
from .families import ComplexFourierCoefficients, FourierCoefficients
from .generators import Generator, Independence
from .optimal import EpsilonFamily, rho_epsilon_closed, tau_epsilon_closed
from .quadrature import QuadratureRule

__all__ = [
    "DependenceReport",
    "NoClosedForm",
    "rho_numeric",
    "tau_numeric",
    "dependence_quadrature",
    "dependence_closed",
    "fourier_rho_closed",
    "fourier_tau_closed",
    "complex_fourier_measures",
    "BoundAudit",
    "fourier_bound_audit",
    "RHO_FOURIER_BOUND",
    "TAU_FOURIER_BOUND",
]

PI2 = math.pi**2
RHO_FOURIER_BOUND = 3.0 / PI2
TAU_FOURIER_BOUND = 2.0 / PI2


class NoClosedForm(LookupError):
    pass


@dataclass
class DependenceReport:
    rho: float
    tau: float
    method: Literal["closed_form", "quadrature"]
    est_error: float = 0.0

    def to_dict(self) -> dict:
        return {"rho": self.rho, "tau": self.tau, "method": self.method, "est_error": self.est_error}


def _tensor(rule: QuadratureRule):
    x, w = rule.nodes()
    U, V = np.meshgrid(x, x, indexing="ij")
    return U, V, np.outer(w, w)


def rho_numeric(c: Copula, rule: Optional[QuadratureRule] = None) -> float:
    """12 * integral of C over the unit square - 3."""
    U, V, W = _tensor(rule or c.rule)
    return 12.0 * float(np.sum(W * c.cdf(U, V))) - 3.0


def tau_numeric(c: Copula, rule: Optional[QuadratureRule] = None) -> float:
    """4 * integral of C dC - 1, with dC = (1 + h) du dv."""
    U, V, W = _tensor(rule or c.rule)
    return 4.0 * float(np.sum(W * c.cdf(U, V) * c.density(U, V))) - 1.0


def dependence_quadrature(c: Copula, rule: Optional[QuadratureRule] = None) -> DependenceReport:
    """Quadrature rho/tau; ``est_error`` is the change against a half-order rule."""
    rule = rule or c.rule
    coarse = QuadratureRule(max(2, rule.order // 2), rule.kind)
    rho, tau = rho_numeric(c, rule), tau_numeric(c, rule)
    err = max(abs(rho - rho_numeric(c, coarse)), abs(tau - tau_numeric(c, coarse)))
    return DependenceReport(rho, tau, "quadrature", err)


def _fourier_sum(fc: FourierCoefficients) -> float:
    n = np.arange(1, fc.N + 1)
    m = np.arange(1, fc.M + 1)
    terms = np.outer(fc.b / n, fc.d / m)
    return math.fsum(terms.ravel().tolist())


def fourier_rho_closed(fc: FourierCoefficients) -> float:
    """(3/pi^2) sum_{n,m} b_n d_m / (n m)."""
    return 3.0 * _fourier_sum(fc) / PI2


def fourier_tau_closed(fc: FourierCoefficients) -> float:
    """(2/pi^2) sum_{n,m} b_n d_m / (n m)."""
    return 2.0 * _fourier_sum(fc) / PI2


def complex_fourier_measures(cc: ComplexFourierCoefficients) -> DependenceReport:
    """Closed-form rho and tau for the exponential-basis generator.

    rho = -(3/pi^2) S1 with S1 = sum alpha[n,m] / (n m). Kendall's tau picks
    up a second, quadratic term:
    tau = -(2/pi^2) S1 - (1/pi^2) sum |alpha[n,m]|^2 / (n m).
    The quadratic term cancels whenever alpha factorises as
    gamma_n * delta_m (the real product form), leaving tau = (2/3) rho.
    """
    terms = [(a / (n * m), abs(a) ** 2 / (n * m)) for n, m, a in cc.items()]
    s1_re = math.fsum(t[0].real for t in terms)
    s1_im = math.fsum(t[0].imag for t in terms)
    if abs(s1_im) > 1e-12:
        raise ArithmeticError(f"coefficient sum is not real (imaginary part {s1_im})")
    s2 = math.fsum(t[1] for t in terms)
    rho = -3.0 * s1_re / PI2
    tau = -2.0 * s1_re / PI2 - s2 / PI2
    return DependenceReport(rho, tau, "closed_form", 0.0)


def dependence_closed(g: Generator) -> DependenceReport:
    if isinstance(g, Independence):
        return DependenceReport(0.0, 0.0, "closed_form")
    if isinstance(g, FourierCoefficients):
        return DependenceReport(fourier_rho_closed(g), fourier_tau_closed(g), "closed_form")
    if isinstance(g, ComplexFourierCoefficients):
        return complex_fourier_measures(g)
    if isinstance(g, EpsilonFamily):
        return DependenceReport(rho_epsilon_closed(g), tau_epsilon_closed(g), "closed_form")
    raise NoClosedForm(f"no closed-form rho/tau for family {g.family!r}")


@dataclass
class BoundAudit:
    trials: int
    worst_rho: float
    worst_tau: float

    @property
    def ok(self) -> bool:
        return self.worst_rho <= RHO_FOURIER_BOUND + 1e-12 and self.worst_tau <= TAU_FOURIER_BOUND + 1e-12


def random_boundary_coefficients(rng: np.random.Generator, max_terms: int = 4) -> FourierCoefficients:
    """Gaussian coefficients rescaled so the l1-product bound holds with equality."""
    N, M = rng.integers(1, max_terms + 1, size=2)
    a, b = rng.standard_normal(N), rng.standard_normal(N)
    c, d = rng.standard_normal(M), rng.standard_normal(M)
    S = np.hypot(a, b).sum() * np.hypot(c, d).sum()
    lam = 1.0 / math.sqrt(S)
    return FourierCoefficients(lam * a, lam * b, lam * c, lam * d)


def fourier_bound_audit(trials: int, seed: int) -> BoundAudit:
    """Largest |rho| and |tau| over random boundary-scaled Fourier generators.

    Trial ``i`` draws from its own child stream of ``SeedSequence(seed)``,
    so results do not depend on evaluation order.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    worst_r = worst_t = 0.0
    for child in np.random.SeedSequence(seed).spawn(trials):
        fc = random_boundary_coefficients(np.random.default_rng(child))
        worst_r = max(worst_r, abs(fourier_rho_closed(fc)))
        worst_t = max(worst_t, abs(fourier_tau_closed(fc)))
    return BoundAudit(trials, worst_r, worst_t)
