"""Conditional-inversion sampling and rank-based dependence estimates."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np
from scipy import stats

from .core import Copula

__all__ = ["SamplingError", "SampleBatch", "sample", "ordinal_ranks", "empirical_rho", "empirical_tau"]

BLOCK = 65536
_COARSE = 33          # bracketing grid for the conditional CDF
_V_TOL = 1e-12
_MONO_TOL = 1e-12
_BRACKET_TOL = 1e-10


class SamplingError(ArithmeticError):
    """The conditional CDF at ``u`` is not monotone or does not bracket ``w``."""

    def __init__(self, u: float, w: float, reason: str):
        self.u, self.w = u, w
        super().__init__(f"conditional CDF inversion failed at U={u!r}, W={w!r}: {reason}")


@dataclass
class SampleBatch:
    pairs: np.ndarray
    seed: int
    spec: Any = field(default=None)

    @property
    def u(self) -> np.ndarray:
        return self.pairs[:, 0]

    @property
    def v(self) -> np.ndarray:
        return self.pairs[:, 1]

    def __len__(self):
        return self.pairs.shape[0]


def _invert(c: Copula, U: np.ndarray, W: np.ndarray) -> np.ndarray:
    grid = np.linspace(0.0, 1.0, _COARSE)
    F = np.asarray(c.cdf_du(U[:, None], grid[None, :]), dtype=float)

    drop = np.diff(F, axis=1).min(axis=1) < -_MONO_TOL
    outside = (W < F[:, 0] - _BRACKET_TOL) | (W > F[:, -1] + _BRACKET_TOL)
    bad = drop | outside | ~np.all(np.isfinite(F), axis=1)
    if bad.any():
        i = int(np.argmax(bad))
        reason = "non-monotone conditional CDF" if drop[i] else "W not bracketed by the conditional CDF"
        raise SamplingError(float(U[i]), float(W[i]), reason)

    j = np.clip((F <= W[:, None]).sum(axis=1) - 1, 0, _COARSE - 2)
    lo, hi = grid[j], grid[j + 1]
    while (hi - lo).max() > _V_TOL:
        mid = 0.5 * (lo + hi)
        below = c.cdf_du(U, mid) < W
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return 0.5 * (lo + hi)


def sample(c: Copula, n: int, seed: int, spec: Any = None) -> SampleBatch:
    """Draw ``n`` pairs: U and W uniform, V solves dC/du(U, V) = W.

    Draws are produced in blocks of 65536; block ``k`` uses the stream
    ``SeedSequence(seed, spawn_key=(k,))`` and takes (U, W) row by row, so
    the output depends only on the seed and a longer run extends a shorter one.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    out = np.empty((n, 2))
    for k, start in enumerate(range(0, n, BLOCK)):
        m = min(BLOCK, n - start)
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(k,)))
        U, W = rng.random((m, 2)).T
        out[start:start + m, 0] = U
        out[start:start + m, 1] = _invert(c, U, W)
    return SampleBatch(out, seed, spec if spec is not None else c.label)


def _columns(batch):
    pairs = batch.pairs if isinstance(batch, SampleBatch) else np.asarray(batch, dtype=float)
    if pairs.ndim != 2 or pairs.shape[1] != 2 or pairs.shape[0] < 2:
        raise ValueError("need at least two (u, v) pairs")
    u, v = pairs[:, 0], pairs[:, 1]
    if np.ptp(u) == 0 or np.ptp(v) == 0:
        raise ValueError("degenerate batch: a coordinate has zero rank variance")
    return u, v


def ordinal_ranks(x: np.ndarray) -> np.ndarray:
    """Ranks 0..n-1; ties go to the earlier input position."""
    r = np.empty(x.size, dtype=np.int64)
    r[np.argsort(x, kind="stable")] = np.arange(x.size)
    return r


def empirical_rho(batch) -> float:
    """Sample Spearman rho: Pearson correlation of the ranks."""
    u, v = _columns(batch)
    return float(np.corrcoef(ordinal_ranks(u), ordinal_ranks(v))[0, 1])


def empirical_tau(batch) -> float:
    """Sample Kendall tau, (concordant - discordant) / (n choose 2).

    Ranks are made tie-free first, so scipy's O(n log n) tau-b coincides
    with the plain concordance count.
    """
    u, v = _columns(batch)
    return float(stats.kendalltau(ordinal_ranks(u), ordinal_ranks(v)).statistic)
