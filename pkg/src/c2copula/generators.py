"""Generator functions h on the unit square.

A copula is recovered from its generator as the double integral of the
density ``1 + h``. Subclasses that know ``C`` and ``dC/du`` in closed form
override :meth:`Generator.cdf` / :meth:`Generator.cdf_du` and set
``closed_form = True``; everything else falls back to quadrature.
"""
from __future__ import annotations

from typing import Callable, Optional

import numpy as np

from .quadrature import CUSTOM_RULE, DEFAULT_RULE, QuadratureRule, cumulative_2d

__all__ = ["Generator", "Independence", "CustomGenerator", "ProductGenerator"]


class Generator:
    """Base class. ``h`` must accept broadcastable numpy arrays."""

    family = "generator"
    closed_form = False
    rule: QuadratureRule = DEFAULT_RULE

    def h(self, u, v):
        raise NotImplementedError

    def density(self, u, v):
        return 1.0 + self.h(u, v)

    def cdf(self, u, v):
        return cumulative_2d(self.density, u, v, self.rule)

    def cdf_du(self, u, v):
        """Conditional CDF of V given U=u, i.e. the integral of 1+h(u, t) over t in [0, v]."""
        u, v = np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
        x, w = self.rule.nodes()
        t = v[..., None] * x
        vals = self.density(u[..., None], t)
        return np.sum(np.broadcast_to(vals, t.shape) * w, axis=-1) * v

    def to_dict(self) -> dict:
        return {"family": self.family}


class Independence(Generator):
    """h = 0, the product copula."""

    family = "independence"
    closed_form = True

    def h(self, u, v):
        u, v = np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
        return np.zeros(u.shape)

    def cdf(self, u, v):
        return np.asarray(u, dtype=float) * np.asarray(v, dtype=float)

    def cdf_du(self, u, v):
        u, v = np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
        return v.copy()

    def __repr__(self):
        return "Independence()"


class CustomGenerator(Generator):
    """Arbitrary user-supplied h.

    No smoothness certificate exists for these, so quadrature runs at
    order 128 by default. ``cdf`` may be supplied when ``C`` is known.
    """

    family = "custom"

    def __init__(
        self,
        h: Callable,
        cdf: Optional[Callable] = None,
        cdf_du: Optional[Callable] = None,
        rule: QuadratureRule = CUSTOM_RULE,
        label: str = "custom",
    ):
        self._h = h
        self._cdf = cdf
        self._cdf_du = cdf_du
        self.rule = rule
        self.label = label
        self.closed_form = cdf is not None

    def h(self, u, v):
        u, v = np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
        return np.broadcast_to(np.asarray(self._h(u, v), dtype=float), u.shape)

    def cdf(self, u, v):
        if self._cdf is not None:
            return np.asarray(self._cdf(u, v), dtype=float)
        return super().cdf(u, v)

    def cdf_du(self, u, v):
        if self._cdf_du is not None:
            return np.asarray(self._cdf_du(u, v), dtype=float)
        return super().cdf_du(u, v)

    def __repr__(self):
        return f"CustomGenerator({self.label!r})"


class ProductGenerator(Generator):
    """h(u, v) = phi(u) * psi(v) with user-supplied factors.

    The copula factorises as ``uv + Phi(u) Psi(v)`` where ``Phi``/``Psi``
    are running integrals, so only 1-D quadrature is needed.
    """

    family = "custom_product"

    def __init__(self, phi: Callable, psi: Callable, rule: QuadratureRule = CUSTOM_RULE,
                 phi_src: str = "", psi_src: str = ""):
        self.phi = phi
        self.psi = psi
        self.rule = rule
        self.phi_src = phi_src
        self.psi_src = psi_src

    @staticmethod
    def _eval(f, x):
        x = np.asarray(x, dtype=float)
        return np.broadcast_to(np.asarray(f(x), dtype=float), x.shape)

    def _running(self, f, x):
        x = np.asarray(x, dtype=float)
        nodes, w = self.rule.nodes()
        vals = self._eval(f, x[..., None] * nodes)
        return np.sum(vals * w, axis=-1) * x

    def h(self, u, v):
        return self._eval(self.phi, u) * self._eval(self.psi, v)

    def cdf(self, u, v):
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        return u * v + self._running(self.phi, u) * self._running(self.psi, v)

    def cdf_du(self, u, v):
        u, v = np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
        return v + self._eval(self.phi, u) * self._running(self.psi, v)

    def to_dict(self) -> dict:
        return {"family": self.family, "phi": self.phi_src, "psi": self.psi_src}

    def __repr__(self):
        return f"ProductGenerator(phi={self.phi_src!r}, psi={self.psi_src!r})"
