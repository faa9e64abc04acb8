"""Smoothed extremal generators for Spearman's rho.

The piecewise-linear tent that maximises the running-integral area is not
differentiable at 1/2; replacing ``|1 - 2x|`` by ``sqrt((1 - 2x)^2 + 4 eps^2)``
gives a C-infinity generator ``h = +/- g(x) g(y)`` whose rho and tau approach
+/-0.75 and +/-0.5 as eps -> 0. The slope parameter of the tent cancels in
``h``, so only ``eps`` and the sign are stored.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .generators import Generator
from .quadrature import FINE_RULE

__all__ = [
    "EpsilonFamily",
    "acoth",
    "smoothed_tent",
    "tent",
    "epsilon_h",
    "rho_epsilon_closed",
    "tau_epsilon_closed",
    "table1",
    "TABLE1_EPSILONS",
    "LimitAudit",
    "epsilon_limit_audit",
]

TABLE1_EPSILONS = (1.0, 0.1, 0.01, 0.001, 0.0001)
RHO_LIMIT = 0.75
TAU_LIMIT = 0.5


def _check_eps(epsilon) -> float:
    eps = float(epsilon)
    if not (eps > 0 and math.isfinite(eps)):
        raise ValueError(f"epsilon must be a finite positive number, got {epsilon!r}")
    return eps


def acoth(x: float) -> float:
    """Inverse hyperbolic cotangent for x > 1, via log1p to stay accurate near 1."""
    if not x > 1.0:
        raise ValueError(f"acoth needs x > 1, got {x}")
    return 0.5 * math.log1p(2.0 / (x - 1.0))


def _acoth_sqrt(e2: float) -> float:
    # acoth(sqrt(1 + 4 e2)) with sqrt(1 + 4 e2) - 1 = 4 e2 / (sqrt(1 + 4 e2) + 1)
    s = math.sqrt(1.0 + 4.0 * e2)
    return 0.5 * math.log1p(2.0 * (s + 1.0) / (4.0 * e2))


class EpsilonFamily(Generator):
    """h = +/- g(x) g(y) with g(x) = (1 - 2x) / sqrt((1 - 2x)^2 + 4 eps^2)."""

    family = "epsilon_optimal"
    closed_form = True
    rule = FINE_RULE

    def __init__(self, epsilon: float, sign: str = "max"):
        self.epsilon = _check_eps(epsilon)
        if sign not in ("max", "min"):
            raise ValueError(f"sign must be 'max' or 'min', got {sign!r}")
        self.sign = sign
        self._sgn = 1.0 if sign == "max" else -1.0
        self._s = math.sqrt(1.0 + 4.0 * self.epsilon**2)

    def g(self, x):
        y = 1.0 - 2.0 * np.asarray(x, dtype=float)
        return y / np.sqrt(y * y + 4.0 * self.epsilon**2)

    def G(self, x):
        """Running integral of g, i.e. the smoothed tent with unit slope."""
        y = 1.0 - 2.0 * np.asarray(x, dtype=float)
        return 0.5 * (self._s - np.sqrt(y * y + 4.0 * self.epsilon**2))

    def h(self, u, v):
        u, v = np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
        return self._sgn * self.g(u) * self.g(v)

    def cdf(self, u, v):
        u, v = np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
        return u * v + self._sgn * self.G(u) * self.G(v)

    def cdf_du(self, u, v):
        u, v = np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
        return v + self._sgn * self.g(u) * self.G(v)

    def to_dict(self):
        return {"family": self.family, "epsilon": self.epsilon, "sign": self.sign}

    def __repr__(self):
        return f"EpsilonFamily(epsilon={self.epsilon!r}, sign={self.sign!r})"


def smoothed_tent(epsilon: float, x, scale: float = 1.0):
    """(scale/2) (sqrt(1 + 4 eps^2) - sqrt((1 - 2x)^2 + 4 eps^2)).

    ``scale`` is the slope bound (alpha on the G side, 1/alpha on the H side);
    a negative scale gives the minimising profile.
    """
    eps = _check_eps(epsilon)
    if scale == 0:
        raise ValueError("scale must be non-zero")
    y = 1.0 - 2.0 * np.asarray(x, dtype=float)
    return 0.5 * scale * (math.sqrt(1.0 + 4.0 * eps * eps) - np.sqrt(y * y + 4.0 * eps * eps))


def tent(x, scale: float = 1.0):
    """Unsmoothed profile -scale |x - 1/2| + scale/2."""
    return scale * (0.5 - np.abs(np.asarray(x, dtype=float) - 0.5))


def epsilon_h(fam: EpsilonFamily, x, y):
    return fam.h(x, y)


def _rho_core(eps: float) -> float:
    """s - 4 eps^2 acoth(s) with s = sqrt(1 + 4 eps^2).

    Both terms grow like 2 eps, so for s >= 2 the series in x = 1/s,
    sum 2 x^(2k+1) / ((2k+1)(2k+3)), replaces the difference.
    """
    e2 = eps * eps
    s = math.sqrt(1.0 + 4.0 * e2)
    if s < 2.0:
        return s - 4.0 * e2 * _acoth_sqrt(e2)
    x = 1.0 / s
    return math.fsum(2.0 * x ** (2 * k + 1) / ((2 * k + 1) * (2 * k + 3)) for k in range(30))


def rho_epsilon_closed(fam: EpsilonFamily) -> float:
    """(3/4) (sqrt(1 + 4 eps^2) - 4 eps^2 acoth(sqrt(1 + 4 eps^2)))^2, negated for ``min``."""
    return fam._sgn * 0.75 * _rho_core(fam.epsilon) ** 2


def tau_epsilon_closed(fam: EpsilonFamily) -> float:
    """Closed-form Kendall tau of the smoothed family.

    The log term ``log((1 + 2e^2 - s) / (2e^2))`` is evaluated through the
    equivalent ``log(2e^2 / (1 + 2e^2 + s))`` to dodge the cancellation in
    the numerator for small eps.
    """
    e2 = fam.epsilon**2
    s = math.sqrt(1.0 + 4.0 * e2)
    if s >= 2.0:
        # the bracket cancels for large eps; for this product-form generator tau = (2/3) rho
        return fam._sgn * 0.5 * _rho_core(fam.epsilon) ** 2
    log_ratio = math.log(2.0 * e2 / (1.0 + 2.0 * e2 + s))
    val = 0.5 * (1.0 + 4.0 * e2 + 4.0 * e2 * (s - 2.0 * e2 * _acoth_sqrt(e2)) * log_ratio)
    return fam._sgn * val


def table1(epsilons: Iterable[float] = TABLE1_EPSILONS) -> list[tuple[float, float, float, float, float]]:
    """Rows (eps, rho_max, rho_min, tau_max, tau_min)."""
    epsilons = list(epsilons)
    for i, e in enumerate(epsilons):
        try:
            _check_eps(e)
        except (ValueError, TypeError):
            raise ValueError(f"epsilon entry {i} ({e!r}) must be a finite positive number") from None
    rows = []
    for e in epsilons:
        hi, lo = EpsilonFamily(e, "max"), EpsilonFamily(e, "min")
        rows.append((float(e), rho_epsilon_closed(hi), rho_epsilon_closed(lo),
                     tau_epsilon_closed(hi), tau_epsilon_closed(lo)))
    return rows


@dataclass
class LimitAudit:
    epsilons: list[float]
    rho: list[float]
    tau: list[float]
    rho_gaps: list[float]
    tau_gaps: list[float]
    rho_increasing: bool
    tau_increasing: bool
    below_limits: bool

    @property
    def final_rho_gap(self) -> float:
        return self.rho_gaps[-1]

    @property
    def final_tau_gap(self) -> float:
        return self.tau_gaps[-1]

    @property
    def ok(self) -> bool:
        return self.rho_increasing and self.tau_increasing and self.below_limits


def epsilon_limit_audit(eps_sequence: Sequence[float]) -> LimitAudit:
    """Check that rho_max and tau_max climb towards 0.75 and 0.5 as eps shrinks."""
    eps = [_check_eps(e) for e in eps_sequence]
    if not eps:
        raise ValueError("empty epsilon sequence")
    if any(b >= a for a, b in zip(eps, eps[1:])):
        raise ValueError("epsilon sequence must be strictly decreasing")
    fams = [EpsilonFamily(e, "max") for e in eps]
    rho = [rho_epsilon_closed(f) for f in fams]
    tau = [tau_epsilon_closed(f) for f in fams]
    return LimitAudit(
        epsilons=eps,
        rho=rho,
        tau=tau,
        rho_gaps=[RHO_LIMIT - r for r in rho],
        tau_gaps=[TAU_LIMIT - t for t in tau],
        rho_increasing=all(b > a for a, b in zip(rho, rho[1:])),
        tau_increasing=all(b > a for a, b in zip(tau, tau[1:])),
        below_limits=all(r < RHO_LIMIT for r in rho) and all(t < TAU_LIMIT for t in tau),
    )
