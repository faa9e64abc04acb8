"""Closed-form copula families expressed through their generators.

Frank (via the Archimedean recipe), FGM, real Fourier copulas built from a
product of two zero-mean trigonometric polynomials, and the complex
exponential generalisation with Hermitian coefficients.
"""
from __future__ import annotations

import math
from typing import Callable, Mapping, NamedTuple

import numpy as np

from .generators import Generator

__all__ = [
    "FrankParams",
    "FGMParams",
    "FourierCoefficients",
    "ComplexFourierCoefficients",
    "ArchimedeanTriple",
    "frank_h",
    "frank_copula",
    "frank_triple",
    "archimedean_h",
    "fgm_h",
    "fgm_copula",
    "fourier_h",
    "fourier_copula",
    "fourier_asymmetry",
    "complex_fourier_h",
]

TWO_PI = 2.0 * math.pi
FRANK_THETA_MIN = 1e-8
L1_SLACK = 1e-12


def _arrays(u, v):
    return np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(v, dtype=float))


# --------------------------------------------------------------------------- Frank

def _frank_pos(t, u, v):
    """C, dC/du and density for t > 0. Every exponent is <= 0, so nothing overflows.

    q = 1 + AB/E shrinks to e^-t near (1, 1). There it is rebuilt in log space
    from a = e^-tu - e^-t and b = e^-tv - e^-t as q = e^-t + a + b - ab/D with
    D = 1 - e^-t; since a, b <= D the subtraction costs at most a factor two.
    """
    A = np.expm1(-t * u)
    B = np.expm1(-t * v)
    E = math.expm1(-t)
    r = A * B / E
    near = r < -0.5
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        la = -t * u + np.log(-np.expm1(-t * (1.0 - u)))
        lb = -t * v + np.log(-np.expm1(-t * (1.0 - v)))
        top = np.maximum(np.maximum(la, lb), -t)
        s = np.exp(-t - top) + np.exp(la - top) + np.exp(lb - top) + np.exp(la + lb - top) / E
        C = np.where(near, -(top + np.log(s)) / t, -np.log1p(r) / t)
        # log q = -tC keeps these ratios finite where q and the exponentials underflow
        Cu = np.where(near, B / E * np.exp(t * (C - u)), np.exp(-t * u) * B / (E * (1.0 + r)))
        c = np.where(near, -t / E * np.exp(t * (2.0 * C - u - v)), -t * np.exp(-t * (u + v)) / (E * (1.0 + r) ** 2))
    return C, Cu, c


class FrankParams(Generator):
    """Frank copula with parameter ``theta != 0``.

    Negative parameters are evaluated through the reflection
    ``C_{-t}(u, v) = u - C_t(u, 1 - v)`` so that every exponential stays
    bounded by one, whatever the magnitude of ``theta``.
    """

    family = "frank"
    closed_form = True

    def __init__(self, theta: float):
        theta = float(theta)
        if not math.isfinite(theta):
            raise ValueError(f"Frank theta must be finite, got {theta}")
        if abs(theta) <= FRANK_THETA_MIN:
            raise ValueError(
                f"Frank theta={theta} is inside the independence band |theta| <= {FRANK_THETA_MIN}; "
                "use the independence generator instead"
            )
        self.theta = theta

    def _eval(self, u, v):
        u, v = _arrays(u, v)
        if self.theta > 0:
            return _frank_pos(self.theta, u, v)
        C, Cu, c = _frank_pos(-self.theta, u, 1.0 - v)
        return u - C, 1.0 - Cu, c

    def cdf(self, u, v):
        return self._eval(u, v)[0]

    def cdf_du(self, u, v):
        return self._eval(u, v)[1]

    def density(self, u, v):
        return self._eval(u, v)[2]

    def h(self, u, v):
        return self.density(u, v) - 1.0

    def to_dict(self):
        return {"family": self.family, "theta": self.theta}

    def __repr__(self):
        return f"FrankParams(theta={self.theta!r})"


def frank_h(p: FrankParams, u, v):
    return p.h(u, v)


def frank_copula(p: FrankParams, u, v):
    return p.cdf(u, v)


class ArchimedeanTriple(NamedTuple):
    """Additive generator ``phi``, its derivative, and the second derivative
    of its pseudo-inverse. ``phi_at_zero`` bounds the domain of the latter."""

    phi: Callable
    dphi: Callable
    d2_pseudo_inverse: Callable
    phi_at_zero: float = math.inf


def frank_triple(theta: float) -> ArchimedeanTriple:
    th = float(theta)
    if abs(th) <= FRANK_THETA_MIN:
        raise ValueError(f"Frank theta={th} is inside the independence band")
    em1 = math.expm1(-th)

    def phi(x):
        return -np.log(np.expm1(-th * np.asarray(x, dtype=float)) / em1)

    def dphi(x):
        x = np.asarray(x, dtype=float)
        return th * np.exp(-th * x) / np.expm1(-th * x)

    def d2inv(t):
        t = np.asarray(t, dtype=float)
        return math.expm1(th) * np.exp(th + t) / (th * (1.0 - math.exp(th) + np.exp(th + t)) ** 2)

    return ArchimedeanTriple(phi, dphi, d2inv, math.inf)


def archimedean_h(triple: ArchimedeanTriple, u, v):
    """h = (phi^[-1])''(phi(u) + phi(v)) * phi'(u) * phi'(v) - 1.

    Defined on the open square: at u = 0 or v = 0 the additive generator is
    typically infinite and a ``ValueError`` is raised.
    """
    u, v = _arrays(u, v)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        s = triple.phi(u) + triple.phi(v)
        bad = ~np.isfinite(s) | (s > triple.phi_at_zero)
        if bad.any():
            i = np.unravel_index(int(np.argmax(bad)), np.shape(bad))
            raise ValueError(
                f"phi(u) + phi(v) = {float(np.asarray(s)[i])} is outside the domain of the "
                f"pseudo-inverse derivative at (u, v) = ({float(u[i])}, {float(v[i])})"
            )
        out = triple.d2_pseudo_inverse(s) * triple.dphi(u) * triple.dphi(v) - 1.0
    if not np.all(np.isfinite(out)):
        raise ValueError("archimedean h evaluated to a non-finite value")
    return out


# --------------------------------------------------------------------------- FGM

class FGMParams(Generator):
    """Farlie-Gumbel-Morgenstern copula, ``-1 <= theta <= 1``."""

    family = "fgm"
    closed_form = True

    def __init__(self, theta: float):
        theta = float(theta)
        if not -1.0 <= theta <= 1.0:
            raise ValueError(f"FGM theta must lie in [-1, 1], got {theta}")
        self.theta = theta

    def h(self, u, v):
        u, v = _arrays(u, v)
        return self.theta * (1.0 - 2.0 * u) * (1.0 - 2.0 * v)

    def cdf(self, u, v):
        u, v = _arrays(u, v)
        return u * v * (1.0 + self.theta * ((1.0 - u) * (1.0 - v)))

    def cdf_du(self, u, v):
        u, v = _arrays(u, v)
        return v + self.theta * (1.0 - 2.0 * u) * v * (1.0 - v)

    def to_dict(self):
        return {"family": self.family, "theta": self.theta}

    def __repr__(self):
        return f"FGMParams(theta={self.theta!r})"


def fgm_h(p: FGMParams, u, v):
    return p.h(u, v)


def fgm_copula(p: FGMParams, u, v):
    return p.cdf(u, v)


# --------------------------------------------------------------------------- real Fourier

def _series(cos_c, sin_c, x):
    """sum_n cos_c[n] cos(2 pi n x) + sin_c[n] sin(2 pi n x), n = 1..N."""
    x = np.asarray(x, dtype=float)
    n = np.arange(1, cos_c.size + 1)
    ph = TWO_PI * x[..., None] * n
    return np.cos(ph) @ cos_c + np.sin(ph) @ sin_c


def _series_integral(cos_c, sin_c, x):
    """Running integral of :func:`_series` from 0 to x."""
    x = np.asarray(x, dtype=float)
    n = np.arange(1, cos_c.size + 1)
    ph = TWO_PI * x[..., None] * n
    return np.sin(ph) @ (cos_c / (TWO_PI * n)) + (-np.cos(ph) + 1.0) @ (sin_c / (TWO_PI * n))


def _coeff(x, name):
    arr = np.atleast_1d(np.asarray(x, dtype=float)).copy()
    if arr.ndim != 1:
        raise ValueError(f"coefficient {name} must be one-dimensional")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"coefficient {name} has non-finite entries")
    arr.setflags(write=False)
    return arr


class FourierCoefficients(Generator):
    """h(u, v) = [sum_n a_n cos(2 pi n u) + b_n sin(2 pi n u)]
               * [sum_m c_m cos(2 pi m v) + d_m sin(2 pi m v)].

    ``a``/``b`` (length N) act on u, ``c``/``d`` (length M) on v; shorter
    partners are zero-padded. Construction enforces
    ``sum_n |(a_n, b_n)| * sum_m |(c_m, d_m)| <= 1``, which keeps h >= -1.
    """

    family = "fourier"
    closed_form = True

    def __init__(self, a=(0.0,), b=(0.0,), c=(0.0,), d=(0.0,)):
        a, b, c, d = (_coeff(x, k) for x, k in zip((a, b, c, d), "abcd"))
        N, M = max(a.size, b.size), max(c.size, d.size)
        self.a, self.b = np.pad(a, (0, N - a.size)), np.pad(b, (0, N - b.size))
        self.c, self.d = np.pad(c, (0, M - c.size)), np.pad(d, (0, M - d.size))
        for arr in (self.a, self.b, self.c, self.d):
            arr.setflags(write=False)
        if self.l1_product() > 1.0 + L1_SLACK:
            raise ValueError(
                f"Fourier coefficients violate the l1-product bound: {self.l1_product():.12g} > 1"
            )

    @property
    def N(self) -> int:
        return self.a.size

    @property
    def M(self) -> int:
        return self.c.size

    def l1_product(self) -> float:
        return float(np.hypot(self.a, self.b).sum() * np.hypot(self.c, self.d).sum())

    def scaled(self, lam: float) -> "FourierCoefficients":
        """Scale every coefficient by ``lam``; the bound scales by ``lam**2``."""
        return FourierCoefficients(lam * self.a, lam * self.b, lam * self.c, lam * self.d)

    def h(self, u, v):
        u, v = _arrays(u, v)
        return _series(self.a, self.b, u) * _series(self.c, self.d, v)

    def cdf(self, u, v):
        u, v = _arrays(u, v)
        return u * v + _series_integral(self.a, self.b, u) * _series_integral(self.c, self.d, v)

    def cdf_du(self, u, v):
        u, v = _arrays(u, v)
        return v + _series(self.a, self.b, u) * _series_integral(self.c, self.d, v)

    def to_dict(self):
        return {"family": self.family, "a": self.a.tolist(), "b": self.b.tolist(),
                "c": self.c.tolist(), "d": self.d.tolist()}

    def __repr__(self):
        return (f"FourierCoefficients(a={self.a.tolist()}, b={self.b.tolist()}, "
                f"c={self.c.tolist()}, d={self.d.tolist()})")


def fourier_h(fc: FourierCoefficients, u, v):
    return fc.h(u, v)


def fourier_copula(fc: FourierCoefficients, u, v):
    return fc.cdf(u, v)


def fourier_asymmetry(fc: Generator, grid_n: int = 201) -> float:
    """max |C(u, v) - C(v, u)| over a uniform grid."""
    x = np.linspace(0.0, 1.0, grid_n)
    U, V = np.meshgrid(x, x, indexing="ij")
    return float(np.abs(fc.cdf(U, V) - fc.cdf(V, U)).max())


# --------------------------------------------------------------------------- complex Fourier

class ComplexFourierCoefficients(Generator):
    """h(s, t) = sum over n, m != 0 of alpha[n, m] exp(2 pi i (n s + m t)).

    Only one member of each conjugate pair is stored (the one with n > 0);
    the mirror ``alpha[-n, -m] = conj(alpha[n, m])`` is synthesised, so h is
    real by construction. If both members are passed they must agree.
    The coefficients must satisfy sum_{n,m >= 1} |alpha[n,m]| + |alpha[-n,m]| <= 1/2.
    """

    family = "complex_fourier"
    closed_form = True

    def __init__(self, alpha: Mapping[tuple[int, int], complex] | None = None):
        reps: dict[tuple[int, int], complex] = {}
        given = {}
        for (n, m), a in (alpha or {}).items():
            n, m, a = int(n), int(m), complex(a)
            if n == 0 or m == 0:
                raise ValueError(f"index ({n}, {m}) has a zero component; only n, m != 0 allowed")
            if not (math.isfinite(a.real) and math.isfinite(a.imag)):
                raise ValueError(f"alpha[{n}, {m}] is not finite")
            given[(n, m)] = a
        for (n, m), a in given.items():
            key, val = ((n, m), a) if n > 0 else ((-n, -m), a.conjugate())
            if key in reps and abs(reps[key] - val) > 1e-12:
                raise ValueError(
                    f"Hermitian symmetry violated: alpha[{n}, {m}] is not the conjugate of "
                    f"alpha[{-n}, {-m}]"
                )
            reps[key] = val
        self.alpha = {k: v for k, v in sorted(reps.items()) if v != 0}
        if self.half_norm() > 0.5 + L1_SLACK:
            raise ValueError(f"complex Fourier coefficients exceed the 1/2 bound: {self.half_norm():.12g}")
        full = list(self.alpha.items()) + [((-n, -m), a.conjugate()) for (n, m), a in self.alpha.items()]
        self._n = np.array([k[0] for k, _ in full], dtype=float)
        self._m = np.array([k[1] for k, _ in full], dtype=float)
        self._a = np.array([a for _, a in full], dtype=complex)

    @classmethod
    def from_real(cls, fc: FourierCoefficients) -> "ComplexFourierCoefficients":
        """alpha[n, m] = gamma_n delta_m with gamma_n = (a_n - i b_n)/2 and
        delta_m = (c_m - i d_m)/2, negative indices by conjugation."""
        gam = {n + 1: complex(a, -b) / 2 for n, (a, b) in enumerate(zip(fc.a, fc.b))}
        dlt = {m + 1: complex(c, -d) / 2 for m, (c, d) in enumerate(zip(fc.c, fc.d))}
        dlt.update({-m: z.conjugate() for m, z in list(dlt.items())})
        return cls({(n, m): g * dm for n, g in gam.items() for m, dm in dlt.items()})

    def half_norm(self) -> float:
        return math.fsum(abs(a) for a in self.alpha.values())

    def items(self):
        """All (n, m, alpha) triples including synthesised mirrors."""
        return zip(self._n.astype(int).tolist(), self._m.astype(int).tolist(), self._a.tolist())

    def _phase(self, x, k):
        return np.exp(1j * TWO_PI * np.asarray(x, dtype=float)[..., None] * k)

    def h(self, u, v):
        u, v = _arrays(u, v)
        if self._a.size == 0:
            return np.zeros(u.shape)
        z = (self._phase(u, self._n) * self._phase(v, self._m)) @ self._a
        scale = max(1.0, float(np.abs(self._a).sum()))
        if np.abs(z.imag).max(initial=0.0) > 1e-12 * scale:
            raise ArithmeticError("complex Fourier generator produced a non-real value")
        return z.real

    def cdf(self, u, v):
        u, v = _arrays(u, v)
        if self._a.size == 0:
            return u * v
        w = -self._a / (TWO_PI**2 * self._n * self._m)
        z = ((self._phase(u, self._n) - 1.0) * (self._phase(v, self._m) - 1.0)) @ w
        return u * v + z.real

    def cdf_du(self, u, v):
        u, v = _arrays(u, v)
        if self._a.size == 0:
            return v.copy()
        w = self._a / (1j * TWO_PI * self._m)
        z = (self._phase(u, self._n) * (self._phase(v, self._m) - 1.0)) @ w
        return v + z.real

    def to_dict(self):
        return {"family": self.family,
                "alpha": [{"n": n, "m": m, "re": a.real, "im": a.imag} for (n, m), a in self.alpha.items()]}

    def __repr__(self):
        return f"ComplexFourierCoefficients({self.alpha!r})"


def complex_fourier_h(cc: ComplexFourierCoefficients, u, v):
    return cc.h(u, v)
