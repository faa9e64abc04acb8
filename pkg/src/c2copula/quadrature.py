"""Deterministic 1-D and 2-D quadrature on rectangles.

Gauss-Legendre is the default rule; composite Simpson is kept as a
structurally different second opinion. Integrands are evaluated on whole
node arrays at once, so they must accept numpy arrays.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Literal

import numpy as np

__all__ = [
    "QuadratureError",
    "QuadratureRule",
    "DEFAULT_RULE",
    "FINE_RULE",
    "CUSTOM_RULE",
    "integrate_1d",
    "integrate_2d",
    "cumulative_2d",
]

Kind = Literal["gauss-legendre", "composite-simpson"]


class QuadratureError(ValueError):
    """Integrand returned a non-finite value at ``node``."""

    def __init__(self, node, value):
        self.node = node
        self.value = value
        super().__init__(f"non-finite integrand value {value!r} at node {node!r}")


@lru_cache(maxsize=64)
def _reference(order: int, kind: str) -> tuple[np.ndarray, np.ndarray]:
    # nodes/weights on [0, 1]
    if kind == "gauss-legendre":
        x, w = np.polynomial.legendre.leggauss(order)
        x, w = 0.5 * (x + 1.0), 0.5 * w
    else:
        n = order if order % 2 == 1 else order + 1
        x = np.linspace(0.0, 1.0, n)
        w = np.ones(n)
        w[1:-1:2] = 4.0
        w[2:-1:2] = 2.0
        w *= 1.0 / (3.0 * (n - 1))
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


@dataclass(frozen=True)
class QuadratureRule:
    """Per-axis quadrature rule.

    For ``composite-simpson`` an even ``order`` is bumped to the next odd
    node count so the panels pair up.
    """

    order: int = 64
    kind: Kind = "gauss-legendre"

    def __post_init__(self):
        if int(self.order) != self.order or self.order < 2:
            raise ValueError(f"quadrature order must be an integer >= 2, got {self.order!r}")
        if self.kind not in ("gauss-legendre", "composite-simpson"):
            raise ValueError(f"unknown quadrature kind {self.kind!r}")

    def nodes(self, lo: float = 0.0, hi: float = 1.0) -> tuple[np.ndarray, np.ndarray]:
        """Nodes and weights mapped affinely onto ``[lo, hi]``."""
        x, w = _reference(int(self.order), self.kind)
        return lo + (hi - lo) * x, (hi - lo) * w

    def refined(self, factor: int = 2) -> "QuadratureRule":
        return QuadratureRule(self.order * factor, self.kind)


DEFAULT_RULE = QuadratureRule(64)
FINE_RULE = QuadratureRule(256)
CUSTOM_RULE = QuadratureRule(128)


def _check_finite(values: np.ndarray, nodes) -> None:
    bad = ~np.isfinite(values)
    if bad.any():
        idx = np.unravel_index(int(np.argmax(bad)), values.shape)
        if isinstance(nodes, tuple):
            node = tuple(float(np.broadcast_to(n, values.shape)[idx]) for n in nodes)
        else:
            node = float(np.broadcast_to(nodes, values.shape)[idx])
        raise QuadratureError(node, float(values[idx]))


def integrate_1d(
    f: Callable[[np.ndarray], np.ndarray],
    lo: float = 0.0,
    hi: float = 1.0,
    rule: QuadratureRule = DEFAULT_RULE,
) -> float:
    """Approximate the integral of ``f`` over ``[lo, hi]``.

    Gauss-Legendre with ``order`` nodes is exact for polynomials of degree
    up to ``2*order - 1``.
    """
    if lo > hi:
        raise ValueError(f"integration bounds reversed: lo={lo} > hi={hi}")
    x, w = rule.nodes(lo, hi)
    y = np.broadcast_to(np.asarray(f(x), dtype=float), x.shape)
    _check_finite(y, x)
    return float(y @ w)


def integrate_2d(
    f: Callable[[np.ndarray, np.ndarray], np.ndarray],
    u: float = 1.0,
    v: float = 1.0,
    rule: QuadratureRule = DEFAULT_RULE,
) -> float:
    """Tensor-product integral of ``f(s, t)`` over ``[0, u] x [0, v]``."""
    if not (0.0 <= u <= 1.0 and 0.0 <= v <= 1.0):
        raise ValueError(f"rectangle corner ({u}, {v}) outside the unit square")
    s, ws = rule.nodes(0.0, u)
    t, wt = rule.nodes(0.0, v)
    S, T = s[:, None], t[None, :]
    y = np.broadcast_to(np.asarray(f(S, T), dtype=float), (s.size, t.size))
    _check_finite(y, (S, T))
    return float(ws @ y @ wt)


def cumulative_2d(
    f: Callable[[np.ndarray, np.ndarray], np.ndarray],
    u,
    v,
    rule: QuadratureRule = DEFAULT_RULE,
    chunk: int = 2**22,
) -> np.ndarray:
    """Vectorised ``integrate_2d`` for many rectangle corners at once.

    ``u`` and ``v`` broadcast against each other; every corner gets the
    reference rule mapped onto its own rectangle. Work is chunked so peak
    memory stays near ``chunk`` floats.
    """
    u, v = np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
    shape = u.shape
    uf, vf = u.ravel(), v.ravel()
    x, w = rule.nodes()
    k = x.size
    out = np.empty(uf.size)
    step = max(1, chunk // (k * k))
    for i in range(0, uf.size, step):
        ub, vb = uf[i:i + step, None, None], vf[i:i + step, None, None]
        S = ub * x[None, :, None]
        T = vb * x[None, None, :]
        y = np.asarray(f(S, T), dtype=float)
        y = np.broadcast_to(y, (ub.shape[0], k, k))
        _check_finite(y, (np.broadcast_to(S, y.shape), np.broadcast_to(T, y.shape)))
        out[i:i + step] = np.einsum("pij,i,j->p", y, w, w) * uf[i:i + step] * vf[i:i + step]
    return out.reshape(shape)
