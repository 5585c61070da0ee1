"""Hermite and Legendre polynomials, Gauss-Hermite rules, log-domain magnitudes.

Hermite polynomials follow the physicists' convention, so that the harmonic
oscillator eigenfunctions read ``H_n(x) exp(-x**2/2) / sqrt(2**n n! sqrt(pi))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath
import numpy as np
from scipy.linalg import eigh_tridiagonal

__all__ = [
    "QuadratureRule",
    "LogMagnitude",
    "hermite_coeffs",
    "hermite_normalizer_log",
    "hermite_function_values",
    "legendre_eval",
    "legendre_growth_rate",
    "gauss_hermite",
    "gauss_hermite_mp",
    "log_factorial",
]

SQRT_PI = math.sqrt(math.pi)


class QuadratureError(ArithmeticError):
    """The quadrature eigensolver or root polishing did not converge."""


@lru_cache(maxsize=None)
def _hermite_table(n):
    polys = [(1,), (0, 2)]
    for k in range(1, n):
        prev, cur = polys[k - 1], polys[k]
        nxt = [0] * (k + 2)
        for i, c in enumerate(cur):
            nxt[i + 1] += 2 * c
        for i, c in enumerate(prev):
            nxt[i] -= 2 * k * c
        polys.append(tuple(nxt))
    return tuple(polys)


def hermite_coeffs(n):
    """Integer monomial coefficients of the physicists' Hermite polynomial H_n.

    Coefficients are listed in increasing degree and are exact Python ints,
    built with ``H_{n+1} = 2x H_n - 2n H_{n-1}``.

    >>> hermite_coeffs(3)
    [0, -12, 0, 8]
    """
    if n < 0:
        raise ValueError("Hermite degree must be nonnegative")
    return list(_hermite_table(max(n, 1))[n])


def log_factorial(n):
    return math.lgamma(n + 1)


def hermite_normalizer_log(n):
    """log of 1/sqrt(2**n n! sqrt(pi))."""
    return -0.5 * (n * math.log(2.0) + log_factorial(n) + 0.5 * math.log(math.pi))


def hermite_function_values(n_max, x):
    """Orthonormal Hermite polynomials phi_0..phi_{n_max} at the points ``x``.

    ``phi_n = H_n / sqrt(2**n n! sqrt(pi))`` are orthonormal against
    ``exp(-x**2)``.  The three-term recurrence is stable, so no monomial
    cancellation is involved.  ``x`` may be a float array or a sequence of
    mpmath numbers; the result is a list of length ``n_max + 1`` whose entries
    match the input kind.
    """
    if not isinstance(x, np.ndarray) and any(isinstance(v, mpmath.mpf) for v in np.ravel(x)):
        return _mp_recurrence(n_max, list(x), mpmath.mpf(1) / mpmath.root(mpmath.pi, 4))
    x = np.asarray(x, dtype=float)
    out = [np.full_like(x, math.pi ** -0.25)]
    if n_max >= 1:
        out.append(math.sqrt(2.0) * x * out[0])
    for k in range(1, n_max):
        out.append(math.sqrt(2.0 / (k + 1)) * x * out[k] - math.sqrt(k / (k + 1)) * out[k - 1])
    return out


def _mp_recurrence(n_max, xs, p0):
    rows = [[p0] * len(xs)]
    if n_max >= 1:
        rows.append([mpmath.sqrt(2) * x * p0 for x in xs])
    for k in range(1, n_max):
        a = mpmath.sqrt(mpmath.mpf(2) / (k + 1))
        b = mpmath.sqrt(mpmath.mpf(k) / (k + 1))
        rows.append([a * x * u - b * v for x, u, v in zip(xs, rows[k], rows[k - 1])])
    return rows


def legendre_eval(n, x):
    """P_n(x) by the three-term recurrence."""
    if n < 0:
        raise ValueError("Legendre degree must be nonnegative")
    p_prev, p = 1.0, x
    if n == 0:
        return 1.0
    for k in range(1, n):
        p_prev, p = p, ((2 * k + 1) * x * p - k * p_prev) / (k + 1)
    return p


def legendre_log_eval(n, x):
    """log P_n(x) for x >= 1, accumulated through successive ratios."""
    if x < 1:
        raise ValueError("log-domain Legendre evaluation needs x >= 1")
    total = 0.0
    ratio = None
    for k in range(1, n + 1):
        ratio = _legendre_ratio_step(k, x, ratio)
        total += math.log(ratio)
    return total


def _legendre_ratio_step(k, x, prev_ratio):
    # r_k = P_k / P_{k-1};  k P_k = (2k-1) x P_{k-1} - (k-1) P_{k-2}
    if k == 1:
        return x
    return ((2 * k - 1) * x - (k - 1) / prev_ratio) / k


def legendre_growth_rate(n, x):
    """log(P_n(x) / P_{n-1}(x)) for x > 1.

    Tends to ``log(x + sqrt(x**2 - 1))`` as n grows.
    """
    if n < 2:
        raise ValueError("growth rate needs n >= 2")
    if not x > 1:
        raise ValueError("growth rate is defined here for x > 1")
    ratio = None
    for k in range(1, n + 1):
        ratio = _legendre_ratio_step(k, x, ratio)
    return math.log(ratio)


@dataclass(frozen=True)
class QuadratureRule:
    """m-point Gauss-Hermite rule for the weight exp(-x**2).

    Float rules store numpy arrays; extended-precision rules store tuples of
    mpmath numbers together with the decimal precision they were built at.
    """

    nodes: object
    weights: object
    order: int
    dps: int | None = None

    def integrate(self, values):
        if self.dps is None:
            return np.dot(self.weights, values)
        with mpmath.workdps(self.dps):
            return mpmath.fsum(w * v for w, v in zip(self.weights, values))


@lru_cache(maxsize=64)
def gauss_hermite(m):
    """Golub-Welsch construction of the m-point Gauss-Hermite rule.

    The nodes are the eigenvalues of the symmetric Jacobi matrix of the
    orthonormal Hermite recurrence, with off-diagonal ``sqrt(k/2)``.  The
    weights are the Christoffel numbers ``1 / sum_{k<m} phi_k(x_i)**2``, which
    equal ``sqrt(pi)`` times the squared first eigenvector components but keep
    full relative accuracy at the outermost nodes, where the eigenvector
    entries underflow.
    """
    if m < 1:
        raise ValueError("quadrature order must be at least 1")
    if m == 1:
        return QuadratureRule(np.array([0.0]), np.array([SQRT_PI]), 1)
    off = np.sqrt(np.arange(1, m) / 2.0)
    try:
        nodes = eigh_tridiagonal(np.zeros(m), off, eigvals_only=True)
    except np.linalg.LinAlgError as exc:
        raise QuadratureError(f"Jacobi eigensolver failed for m={m}") from exc
    phi = hermite_function_values(m - 1, nodes)
    weights = 1.0 / np.sum(np.square(phi), axis=0)
    # exact symmetry about the origin
    nodes = 0.5 * (nodes - nodes[::-1])
    weights = 0.5 * (weights + weights[::-1])
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureRule(nodes, weights, m)


@lru_cache(maxsize=64)
def gauss_hermite_mp(m, dps):
    """Gauss-Hermite rule in ``dps`` decimal digits.

    Float Golub-Welsch nodes are polished by Newton iteration on the
    orthonormal recurrence; weights are Christoffel numbers
    ``1 / sum_{k<m} phi_k(x_i)**2``.
    """
    base = gauss_hermite(m)
    if m == 1:
        with mpmath.workdps(dps):
            return QuadratureRule((mpmath.mpf(0),), (mpmath.sqrt(mpmath.pi),), 1, dps)
    half = m // 2
    with mpmath.workdps(dps + 10):
        tol = mpmath.mpf(10) ** (-(dps + 5))
        positive = []
        # polish the nonnegative half, mirror the rest
        for x0 in base.nodes[m - half - (m % 2):]:
            x = mpmath.mpf(float(x0))
            for _ in range(200):
                rows = _mp_recurrence(m, [x], mpmath.mpf(1) / mpmath.root(mpmath.pi, 4))
                val, below = rows[m][0], rows[m - 1][0]
                step = val / (mpmath.sqrt(2 * m) * below)
                x -= step
                if abs(step) <= tol * max(1, abs(x)):
                    break
            else:
                raise QuadratureError(f"Newton polishing failed for m={m}")
            positive.append(x)
        if m % 2:
            positive[0] = mpmath.mpf(0)
        nodes = [-x for x in reversed(positive[m % 2:])] + positive
        rows = _mp_recurrence(m - 1, nodes, mpmath.mpf(1) / mpmath.root(mpmath.pi, 4))
        weights = []
        for i in range(m):
            weights.append(1 / mpmath.fsum(rows[k][i] ** 2 for k in range(m)))
    with mpmath.workdps(dps):
        nodes = tuple(+x for x in nodes)
        weights = tuple(+w for w in weights)
    return QuadratureRule(nodes, weights, m, dps)


@dataclass(frozen=True)
class LogMagnitude:
    """A nonzero real number stored as sign and natural log of its magnitude."""

    log_value: float
    sign: int = 1

    @classmethod
    def of(cls, value):
        if value == 0:
            raise ValueError("LogMagnitude cannot hold zero")
        if isinstance(value, (mpmath.mpf, mpmath.mpc)):
            return cls(float(mpmath.log(abs(value))), 1 if value > 0 else -1)
        return cls(math.log(abs(value)), 1 if value > 0 else -1)

    def __mul__(self, other):
        return LogMagnitude(self.log_value + other.log_value, self.sign * other.sign)

    def __truediv__(self, other):
        return LogMagnitude(self.log_value - other.log_value, self.sign * other.sign)

    def log_base(self, base):
        return self.log_value / math.log(base)

    def value(self):
        return self.sign * math.exp(self.log_value)
