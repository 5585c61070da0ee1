"""The three biorthogonal example families and the operators attached to them.

EX1 and EX2 live in coefficient space against the orthonormal basis
``e_1, e_2, ...``:

* EX1: ``x_n = sum_{k<=n} e_k / k`` and ``y_n = n e_n - (n+1) e_{n+1}``
* EX2: ``x_n = sum_{k<=n} (-1)**(n+k) e_k`` and ``y_n = e_n + e_{n+1}``

EX3 lives in L2(R), indexed from 0, with the Hermite functions
``e_n = c_n H_n(x) exp(-x**2/2)`` and the deformed families
``x_n = c_n H_n exp(-x**2/4)``, ``y_n = c_n H_n exp(-3 x**2/4)``,
``c_n = 1/sqrt(2**n n! sqrt(pi))``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable

import mpmath
import numpy as np

from .seqspace import CoeffVector, GaussPolyVector, dps_for
from .specfun import hermite_coeffs

__all__ = [
    "FamilyKind",
    "SequenceFamily",
    "TriangularExpansionMatrix",
    "GaussOp",
    "DomainError",
    "family_member",
    "family",
    "example_pair",
    "h_vector",
    "expansion_matrix",
    "bareiss_det",
    "apply_gauss_operator",
    "EX3_RATES",
]

# highest Hermite index built with double precision coefficients
FLOAT_MEMBER_MAX = 15

EX3_RATES = {"x": 0.25, "y": 0.75, "e": 0.5}


class DomainError(ValueError):
    """The vector is outside the domain of the requested operator."""


class FamilyKind(enum.Enum):
    EX1_X = "ex1_x"
    EX1_Y = "ex1_y"
    EX2_X = "ex2_x"
    EX2_Y = "ex2_y"
    EX3_X = "ex3_x"
    EX3_Y = "ex3_y"
    REF_E_COEFF = "ref_e_coeff"
    REF_E_GAUSS = "ref_e_gauss"

    @property
    def base_index(self):
        return 0 if self in (FamilyKind.EX3_X, FamilyKind.EX3_Y, FamilyKind.REF_E_GAUSS) else 1

    @property
    def gaussian(self):
        return self.base_index == 0


def _coeff_member(kind, n, exact):
    if kind is FamilyKind.EX1_X:
        return [Fraction(1, k) for k in range(1, n + 1)]
    if kind is FamilyKind.EX1_Y:
        return [0] * (n - 1) + [n, -(n + 1)]
    if kind is FamilyKind.EX2_X:
        return [(-1) ** (n + k) for k in range(1, n + 1)]
    if kind is FamilyKind.EX2_Y:
        return [0] * (n - 1) + [1, 1]
    if kind is FamilyKind.REF_E_COEFF:
        return [0] * (n - 1) + [1]
    raise AssertionError(kind)


@lru_cache(maxsize=512)
def _hermite_member(n, rate):
    coeffs = hermite_coeffs(n)
    if n <= FLOAT_MEMBER_MAX:
        c = math.exp(-0.5 * (n * math.log(2) + math.lgamma(n + 1) + 0.5 * math.log(math.pi)))
        return GaussPolyVector([c * h for h in coeffs], rate)
    with mpmath.workdps(dps_for(2 * n)):
        c = 1 / mpmath.sqrt(mpmath.mpf(2) ** n * mpmath.factorial(n) * mpmath.sqrt(mpmath.pi))
        return GaussPolyVector([mpmath.mpc(c * h) for h in coeffs], rate)


def family_member(kind, n, dim_hint=None, exact=False):
    """The n-th member of a family.

    Coefficient families are indexed from 1 and returned as
    :class:`CoeffVector`, padded to ``dim_hint`` when given; ``exact=True``
    gives rational coefficients.  Gaussian families are indexed from 0.
    """
    kind = FamilyKind(kind)
    if n < kind.base_index:
        raise IndexError(f"{kind.value} is indexed from {kind.base_index}, got {n}")
    if kind.gaussian:
        rate = {
            FamilyKind.EX3_X: EX3_RATES["x"],
            FamilyKind.EX3_Y: EX3_RATES["y"],
            FamilyKind.REF_E_GAUSS: EX3_RATES["e"],
        }[kind]
        return _hermite_member(n, rate)
    v = CoeffVector(_coeff_member(kind, n, exact), exact=True)
    if not exact:
        v = v.to_float()
    if dim_hint is not None and dim_hint > v.dim:
        v = v.padded(dim_hint)
    return v


@dataclass(frozen=True)
class SequenceFamily:
    """One family of an example, as a map ``n -> member``."""

    kind: FamilyKind
    exact: bool = False

    @property
    def base_index(self):
        return self.kind.base_index

    def member(self, n):
        return family_member(self.kind, n, exact=self.exact)

    __call__ = member

    def members(self, N):
        """Members base_index .. N."""
        return [self.member(n) for n in range(self.base_index, N + 1)]


def family(kind, exact=False):
    return SequenceFamily(FamilyKind(kind), exact)


_PAIRS = {
    "ex1": (FamilyKind.EX1_X, FamilyKind.EX1_Y),
    "ex2": (FamilyKind.EX2_X, FamilyKind.EX2_Y),
    "ex3": (FamilyKind.EX3_X, FamilyKind.EX3_Y),
}

_REFERENCE = {"ex1": FamilyKind.REF_E_COEFF, "ex2": FamilyKind.REF_E_COEFF, "ex3": FamilyKind.REF_E_GAUSS}


def example_pair(example, exact=False):
    """The biorthogonal pair ``(F_x, F_y)`` of an example name."""
    try:
        xk, yk = _PAIRS[example]
    except KeyError:
        raise ValueError(f"unknown example {example!r}") from None
    return SequenceFamily(xk, exact), SequenceFamily(yk, exact)


def reference_family(example, exact=False):
    return SequenceFamily(_REFERENCE[example], exact)


def h_vector(N, exact=False):
    """Truncation ``sum_{k<=N} e_k / k`` of the vector h outside span{x_n}."""
    if N < 1:
        raise ValueError("N must be at least 1")
    if exact:
        return CoeffVector([Fraction(1, k) for k in range(1, N + 1)], exact=True)
    return CoeffVector(1.0 / np.arange(1, N + 1))


# ---------------------------------------------------------------------------
# change of basis for EX2
# ---------------------------------------------------------------------------


def bareiss_det(rows):
    """Exact determinant of an integer matrix by fraction-free elimination."""
    a = [list(map(int, r)) for r in rows]
    n = len(a)
    if any(len(r) != n for r in a):
        raise ValueError("matrix must be square")
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1] if n else 1


@dataclass(frozen=True)
class TriangularExpansionMatrix:
    """Integer matrix T_M with ``c = T_M alpha`` for ``f = sum alpha_k x_k``.

    Column n holds the coordinates of the EX2 member x_n, so
    ``T[k][n] = (-1)**(n+k)`` for k <= n.
    """

    M: int
    entries: tuple
    det: int

    def as_array(self):
        return np.array(self.entries, dtype=np.int64)

    def apply(self, alpha):
        return [sum(r[j] * alpha[j] for j in range(self.M)) for r in self.entries]

    def solve(self, c, exact=True):
        """Back substitution for ``T alpha = c``; exact with Fractions."""
        if len(c) != self.M:
            raise ValueError(f"expected {self.M} coordinates, got {len(c)}")
        conv = Fraction if exact else complex
        alpha = [conv(0)] * self.M
        for i in range(self.M - 1, -1, -1):
            acc = conv(c[i]) - sum(self.entries[i][j] * alpha[j] for j in range(i + 1, self.M))
            alpha[i] = acc / self.entries[i][i]
        return alpha


def expansion_matrix(M):
    if M < 1:
        raise ValueError("M must be at least 1")
    entries = tuple(
        tuple((-1) ** (n + k) if n >= k else 0 for n in range(1, M + 1)) for k in range(1, M + 1)
    )
    return TriangularExpansionMatrix(M, entries, bareiss_det(entries))


# ---------------------------------------------------------------------------
# operators on polynomial-times-Gaussian vectors
# ---------------------------------------------------------------------------


class GaussOp(enum.Enum):
    H1 = "H1"
    H2 = "H2"
    HOSC = "hosc"
    T_MULT = "T"
    T_MULT_INV = "Tinv"


def _second_order(f, first_coef, const_poly):
    """``1/2 [ -f'' + first_coef * x f' + const_poly f ]``."""
    d1 = f.derivative()
    d2 = d1.derivative()
    out = -d2
    if first_coef:
        out = out + d1.times_poly([0, first_coef])
    out = out + f.times_poly(const_poly)
    return 0.5 * out


def apply_gauss_operator(tag, f):
    """Apply one of H1, H2, the oscillator h, T or T^-1 to ``f``.

    ``T`` multiplies by ``exp(-x**2/4)`` (rate + 1/4); ``T^-1`` divides by it
    and is only admitted for ``rate > 1/4``, since otherwise the image is not
    square integrable.  The differential operators act by exact polynomial
    calculus and keep the rate.
    """
    tag = GaussOp(tag)
    if tag is GaussOp.T_MULT:
        return f.with_rate(f.rate + 0.25)
    if tag is GaussOp.T_MULT_INV:
        if not f.rate > 0.25:
            raise DomainError(
                f"T^-1 needs rate > 1/4, got {f.rate}: the vector is not in D(T^-1)"
            )
        return f.with_rate(f.rate - 0.25)
    if f.is_zero():
        return f
    if tag is GaussOp.HOSC:
        return _second_order(f, 0, [0, 0, 1])
    if tag is GaussOp.H1:
        # 1/2 [ -d2 - x d + (3x^2/2 - 1)/2 ]
        return _second_order(f, -1, [-0.5, 0, 0.75])
    # H2: 1/2 [ -d2 + x d + (3x^2/2 + 1)/2 ]
    return _second_order(f, 1, [0.5, 0, 0.75])


def gauss_compose(*tags) -> Callable:
    """Right-to-left composition of Gaussian operators."""

    def run(f):
        for tag in reversed(tags):
            f = apply_gauss_operator(tag, f)
        return f

    return run
