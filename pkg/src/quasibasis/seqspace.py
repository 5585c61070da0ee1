"""Vector types, inner products and scalar-sequence diagnostics.

Two concrete Hilbert-space models are used throughout:

* :class:`CoeffVector` -- finitely supported coordinates against an
  orthonormal basis ``e_1, e_2, ...`` (index 1 is stored at position 0).
* :class:`GaussPolyVector` -- functions ``p(x) exp(-a x**2)`` on the real
  line, integrated exactly with Gauss-Hermite quadrature.

Inner products are linear in the second argument.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import mpmath
import numpy as np

from .specfun import gauss_hermite, gauss_hermite_mp

__all__ = [
    "CoeffVector",
    "GaussPolyVector",
    "ScalarSequence",
    "SummabilityReport",
    "inner_coeff",
    "inner_gauss",
    "gauss_gram",
    "gauss_distance",
    "inner",
    "norm",
    "distance",
    "seq_diagnostics",
    "dyadic_flag",
    "FLOAT_DEGREE_LIMIT",
]

# integrand degree up to which double precision quadrature is used
FLOAT_DEGREE_LIMIT = 30


# ---------------------------------------------------------------------------
# coefficient vectors
# ---------------------------------------------------------------------------


class CoeffVector:
    """Finite coefficient vector ``sum_k c_k e_k``.

    Float vectors hold a read-only complex array.  Exact vectors hold
    :class:`fractions.Fraction` entries in an object array; they are closed
    under addition and rational scaling.  Vectors of different length are
    zero padded in every binary operation.
    """

    __slots__ = ("coefficients",)

    def __init__(self, coefficients, exact=False):
        if exact:
            arr = np.array([Fraction(c) for c in coefficients], dtype=object)
        else:
            arr = np.array(coefficients, dtype=complex)
        if arr.ndim != 1:
            raise ValueError("coefficients must be one-dimensional")
        arr.setflags(write=False)
        self.coefficients = arr

    @classmethod
    def unit(cls, k, dim=None, exact=False):
        """Reference basis vector e_k (1-based)."""
        dim = k if dim is None else dim
        if not 1 <= k <= dim:
            raise ValueError(f"unit index {k} outside 1..{dim}")
        c = [0] * dim
        c[k - 1] = 1
        return cls(c, exact=exact)

    @classmethod
    def zeros(cls, dim, exact=False):
        return cls([0] * dim, exact=exact)

    @property
    def dim(self):
        return len(self.coefficients)

    @property
    def exact(self):
        return self.coefficients.dtype == object

    def to_float(self):
        if not self.exact:
            return self
        return CoeffVector([complex(c) for c in self.coefficients])

    def padded(self, dim):
        if dim < self.dim:
            if any(c != 0 for c in self.coefficients[dim:]):
                raise ValueError("cannot truncate nonzero coefficients")
            return self._new(self.coefficients[:dim])
        extra = np.zeros(dim - self.dim, dtype=self.coefficients.dtype)
        if self.exact:
            extra[:] = Fraction(0)
        return self._new(np.concatenate([self.coefficients, extra]))

    def _new(self, arr):
        out = object.__new__(CoeffVector)
        arr = np.array(arr, dtype=arr.dtype)
        arr.setflags(write=False)
        out.coefficients = arr
        return out

    def _aligned(self, other):
        a, b = self, other
        if a.exact != b.exact:
            a, b = a.to_float(), b.to_float()
        dim = max(a.dim, b.dim)
        return a.padded(dim), b.padded(dim)

    def __add__(self, other):
        if not isinstance(other, CoeffVector):
            return NotImplemented
        a, b = self._aligned(other)
        return self._new(a.coefficients + b.coefficients)

    def __sub__(self, other):
        if not isinstance(other, CoeffVector):
            return NotImplemented
        a, b = self._aligned(other)
        return self._new(a.coefficients - b.coefficients)

    def __neg__(self):
        return self._new(-self.coefficients)

    def __mul__(self, scalar):
        if self.exact and isinstance(scalar, (int, Fraction)):
            return self._new(self.coefficients * Fraction(scalar))
        if self.exact:
            return self.to_float() * scalar
        return self._new(self.coefficients * complex(scalar))

    __rmul__ = __mul__

    def norm2(self):
        if self.exact:
            return sum(c * c for c in self.coefficients)
        return float(np.vdot(self.coefficients, self.coefficients).real)

    def norm(self):
        return math.sqrt(float(self.norm2()))

    def trimmed(self):
        """Drop trailing zero coefficients (keeps at least one entry)."""
        nz = np.flatnonzero(self.coefficients != 0)
        top = int(nz[-1]) + 1 if nz.size else 1
        return self._new(self.coefficients[:top])

    def __eq__(self, other):
        if not isinstance(other, CoeffVector):
            return NotImplemented
        a, b = self._aligned(other)
        return bool(np.all(a.coefficients == b.coefficients))

    __hash__ = None

    def __repr__(self):
        if self.exact:
            return f"CoeffVector([{', '.join(str(c) for c in self.coefficients)}], exact=True)"
        return f"CoeffVector({[complex(c) for c in self.coefficients]!r})"


def inner_coeff(u, v):
    """Sesquilinear form ``sum_k conj(u_k) v_k`` with zero padding."""
    a, b = u._aligned(v)
    if a.exact:
        return sum((x * y for x, y in zip(a.coefficients, b.coefficients) if x and y), Fraction(0))
    return complex(np.vdot(a.coefficients, b.coefficients))


# ---------------------------------------------------------------------------
# polynomial times Gaussian
# ---------------------------------------------------------------------------


def dps_for(degree):
    """Working decimal precision for an integrand of the given degree."""
    return 40 + 2 * max(degree, 0)


def _is_mp(c):
    return isinstance(c, (mpmath.mpf, mpmath.mpc))


class GaussPolyVector:
    """The function ``x -> p(x) exp(-rate x**2)``.

    ``poly`` lists monomial coefficients in increasing degree.  Entries are
    Python complex numbers, or mpmath numbers for high-degree vectors whose
    monomial coefficients need more than double precision.  Trailing zeros are
    stripped, so the zero vector has an empty ``poly``.
    """

    __slots__ = ("poly", "rate")

    def __init__(self, poly, rate):
        if not rate > 0:
            raise ValueError("rate must be strictly positive")
        coeffs = [c if _is_mp(c) else complex(c) for c in poly]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        self.poly = tuple(coeffs)
        self.rate = rate

    @property
    def degree(self):
        return len(self.poly) - 1

    @property
    def is_mp(self):
        return any(_is_mp(c) for c in self.poly)

    def is_zero(self):
        return not self.poly

    def _check_rate(self, other):
        if self.is_zero() or other.is_zero():
            return
        if self.rate != other.rate:
            raise ValueError(
                f"cannot combine decay rates {self.rate} and {other.rate} "
                "inside one polynomial-times-Gaussian vector"
            )

    def _combine(self, other, sign):
        if not isinstance(other, GaussPolyVector):
            return NotImplemented
        self._check_rate(other)
        rate = self.rate if not self.is_zero() else other.rate
        n = max(len(self.poly), len(other.poly))
        a = list(self.poly) + [0] * (n - len(self.poly))
        b = list(other.poly) + [0] * (n - len(other.poly))
        with mpmath.workdps(dps_for(n)):
            return GaussPolyVector([x + sign * y for x, y in zip(a, b)], rate)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return GaussPolyVector([-c for c in self.poly], self.rate)

    def __mul__(self, scalar):
        with mpmath.workdps(dps_for(self.degree)):
            return GaussPolyVector([scalar * c for c in self.poly], self.rate)

    __rmul__ = __mul__

    def with_rate(self, rate):
        return GaussPolyVector(self.poly, rate)

    def derivative(self):
        """d/dx of ``p exp(-a x**2)`` = ``(p' - 2 a x p) exp(-a x**2)``."""
        p = self.poly
        n = len(p)
        out = [0] * (n + 1)
        with mpmath.workdps(dps_for(n)):
            for k in range(1, n):
                out[k - 1] += k * p[k]
            for k in range(n):
                out[k + 1] -= 2 * self.rate * p[k]
            return GaussPolyVector(out, self.rate)

    def times_poly(self, q):
        """Multiply by the polynomial with monomial coefficients ``q``."""
        p = self.poly
        if not p:
            return self
        out = [0] * (len(p) + len(q) - 1)
        with mpmath.workdps(dps_for(len(out))):
            for i, a in enumerate(p):
                for j, b in enumerate(q):
                    if b:
                        out[i + j] += a * b
            return GaussPolyVector(out, self.rate)

    def to_mp(self):
        with mpmath.workdps(dps_for(self.degree)):
            return GaussPolyVector([mpmath.mpc(c) for c in self.poly], self.rate)

    def __call__(self, x):
        val = 0
        for c in reversed(self.poly):
            val = val * x + c
        return val * (mpmath.exp(-self.rate * x * x) if _is_mp(x) else np.exp(-self.rate * x * x))

    def __repr__(self):
        shown = [complex(c) for c in self.poly[:6]]
        more = "..." if len(self.poly) > 6 else ""
        return f"GaussPolyVector(poly={shown}{more}, rate={self.rate})"


def _horner(poly, xs):
    vals = []
    for x in xs:
        v = 0
        for c in reversed(poly):
            v = v * x + c
        vals.append(v)
    return vals


def gauss_gram(fs, gs, order=None, dps=None):
    """Matrix of inner products ``<f_i, g_j>`` for vectors sharing a combined rate.

    All pairs must have the same ``f.rate + g.rate`` so that one quadrature
    rule serves the whole matrix.  Each vector is evaluated once at the nodes.
    The quadrature order defaults to the exactness threshold of the largest
    degree pair; double precision is used when the integrand degree is at most
    :data:`FLOAT_DEGREE_LIMIT` and no vector carries extended-precision
    coefficients, mpmath otherwise.

    Returns a complex ndarray, or a list of lists of mpmath numbers when
    ``dps`` is given explicitly.
    """
    fs, gs = list(fs), list(gs)
    nonzero_f = [f for f in fs if not f.is_zero()]
    nonzero_g = [g for g in gs if not g.is_zero()]
    if not nonzero_f or not nonzero_g:
        return np.zeros((len(fs), len(gs)), dtype=complex)
    rates = {f.rate + g.rate for f in nonzero_f for g in nonzero_g}
    if len(rates) != 1:
        raise ValueError("gauss_gram needs a common combined rate")
    s = rates.pop()
    df = max(f.degree for f in nonzero_f)
    dg = max(g.degree for g in nonzero_g)
    needed = math.ceil((df + dg) / 2) + 1
    m = needed if order is None else order
    if m < needed:
        raise ValueError(f"quadrature order {m} below exactness threshold {needed}")
    as_mp = dps is not None
    if dps is None and (df + dg > FLOAT_DEGREE_LIMIT or any(v.is_mp for v in nonzero_f + nonzero_g)):
        dps = dps_for(df + dg)
    if dps is None:
        rule = gauss_hermite(m)
        xs = rule.nodes / math.sqrt(s)
        F = np.array([np.polynomial.polynomial.polyval(xs, np.array(f.poly or [0], dtype=complex)) for f in fs])
        G = np.array([np.polynomial.polynomial.polyval(xs, np.array(g.poly or [0], dtype=complex)) for g in gs])
        return (F.conj() * rule.weights) @ G.T / math.sqrt(s)
    rule = gauss_hermite_mp(m, dps)
    with mpmath.workdps(dps):
        root = mpmath.sqrt(mpmath.mpf(s))
        xs = [u / root for u in rule.nodes]
        F = [[mpmath.conj(v) for v in _horner(f.poly, xs)] for f in fs]
        G = [_horner(g.poly, xs) for g in gs]
        out = [
            [mpmath.fsum(w * a * b for w, a, b in zip(rule.weights, fr, gr)) / root for gr in G]
            for fr in F
        ]
    if as_mp:
        return out
    return np.array([[complex(v) for v in row] for row in out], dtype=complex)


def inner_gauss(f, g, order=None, dps=None):
    """``<f, g> = int conj(p_f) p_g exp(-(a_f + a_g) x**2) dx``.

    The integral is evaluated by Gauss-Hermite quadrature after rescaling
    ``u = x sqrt(a_f + a_g)``, which is exact for the polynomial integrand.
    """
    if f.is_zero() or g.is_zero():
        return 0j if dps is None else mpmath.mpc(0)
    val = gauss_gram([f], [g], order=order, dps=dps)
    return val[0][0] if dps is not None else complex(val[0, 0])


def gauss_distance(f, g):
    """``||f - g||`` for Gaussian vectors, possibly with different rates.

    Differences across rates are not representable in the closed class, so the
    squared distance is expanded into inner products and evaluated in extended
    precision to survive the cancellation.
    """
    if f.is_zero() or g.is_zero() or f.rate == g.rate:
        d = f - g
        if d.is_zero():
            return 0.0
        if d.degree * 2 > FLOAT_DEGREE_LIMIT or d.is_mp:
            return float(mpmath.sqrt(max(mpmath.re(inner_gauss(d, d, dps=dps_for(2 * d.degree))), 0)))
        return math.sqrt(max(inner_gauss(d, d).real, 0.0))
    dps = dps_for(2 * max(f.degree, g.degree)) + 20
    with mpmath.workdps(dps):
        ff = mpmath.re(inner_gauss(f, f, dps=dps))
        gg = mpmath.re(inner_gauss(g, g, dps=dps))
        fg = mpmath.re(inner_gauss(f, g, dps=dps))
        return float(mpmath.sqrt(max(ff + gg - 2 * fg, 0)))


# generic dispatch used by the operator modules


def inner(u, v):
    if isinstance(u, CoeffVector):
        return inner_coeff(u, v)
    return inner_gauss(u, v)


def norm(v):
    if isinstance(v, CoeffVector):
        return v.norm()
    return gauss_distance(v, GaussPolyVector([], v.rate))


def distance(u, v):
    if isinstance(u, CoeffVector):
        return (u - v).norm()
    return gauss_distance(u, v)


# ---------------------------------------------------------------------------
# scalar sequences
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ScalarSequence:
    """A deterministic map ``n -> alpha_n``.

    When ``vectorized`` is true the generator also accepts an integer ndarray,
    which keeps long truncations cheap.
    """

    generator: Callable
    label: str
    vectorized: bool = False

    def __call__(self, n):
        return self.generator(n)

    def values(self, N, start=1):
        """alpha_start .. alpha_N as a complex array."""
        idx = np.arange(start, N + 1)
        if self.vectorized:
            return np.asarray(self.generator(idx), dtype=complex) * np.ones(idx.size)
        return np.array([self.generator(int(n)) for n in idx], dtype=complex)

    @classmethod
    def power(cls, p):
        return cls(lambda n: np.asarray(n, dtype=float) ** (-p), f"power:{p:g}", True)

    @classmethod
    def geometric(cls, r):
        return cls(lambda n: float(r) ** np.asarray(n, dtype=float), f"geom:{r:g}", True)

    @classmethod
    def constant(cls, c):
        return cls(lambda n: c + 0 * np.asarray(n, dtype=float), f"const:{c:g}", True)

    @classmethod
    def from_list(cls, values, label=None):
        vals = tuple(values)

        def gen(n):
            return vals[n - 1] if 1 <= n <= len(vals) else 0.0

        return cls(gen, label or "list:" + ",".join(f"{v:g}" for v in vals))

    @classmethod
    def from_spec(cls, spec):
        """Parse a preset name: inv_n, inv_n2, geom:r, const:c, power:p,
        osc (n + 1/2), index (n), shifted (n - 1), or an inline list ``a,b,c``."""
        spec = spec.strip()
        if spec == "inv_n":
            return cls(lambda n: 1.0 / np.asarray(n, dtype=float), "inv_n", True)
        if spec == "inv_n2":
            return cls(lambda n: 1.0 / np.asarray(n, dtype=float) ** 2, "inv_n2", True)
        if spec == "osc":
            return cls(lambda n: np.asarray(n, dtype=float) + 0.5, "osc", True)
        if spec == "index":
            return cls(lambda n: np.asarray(n, dtype=float), "index", True)
        if spec == "shifted":
            return cls(lambda n: np.asarray(n, dtype=float) - 1.0, "shifted", True)
        head, _, arg = spec.partition(":")
        try:
            if head == "geom" and arg:
                return cls.geometric(float(arg))
            if head == "const" and arg:
                return cls.constant(complex(arg) if "j" in arg else float(arg))
            if head == "power" and arg:
                return cls.power(float(arg))
            if "," in spec or _is_number(spec):
                return cls.from_list([float(v) for v in spec.split(",") if v.strip()])
        except ValueError as exc:
            raise ValueError(f"malformed sequence spec {spec!r}") from exc
        raise ValueError(f"unknown sequence spec {spec!r}")


def _is_number(s):
    try:
        float(s)
    except ValueError:
        return False
    return True


def dyadic_flag(quarter, half, full, rel_tol=1e-12, bounded_ratio=0.9, growing_ratio=0.97):
    """Classify a nondecreasing partial-sum sequence from dyadic checkpoints.

    Uses the ratio of the increments over (N/2, N] and (N/4, N/2].  Tails
    summable like a power below -1 or faster give ratios clearly under one;
    divergent sums give ratios of one or more.
    """
    d1 = half - quarter
    d2 = full - half
    if d2 <= rel_tol * max(full, 1e-300):
        return "bounded"
    if d1 <= 0:
        return "growing"
    ratio = d2 / d1
    if ratio <= bounded_ratio:
        return "bounded"
    if ratio >= growing_ratio:
        return "growing"
    return "inconclusive"


SUM_NAMES = ("l1", "l2", "weighted_l2", "sqrt_weighted_l1")


@dataclass(frozen=True)
class SummabilityReport:
    """Partial sums of a sequence at truncation N with growth flags.

    ``l1 = sum |a_n|``, ``l2 = sum |a_n|**2``, ``weighted_l2 = sum n**2 |a_n|**2``
    and ``sqrt_weighted_l1 = sum |a_n| sqrt(n)``.
    """

    label: str
    N: int
    l1: float
    l2: float
    weighted_l2: float
    sqrt_weighted_l1: float
    flags: dict = field(default_factory=dict)

    def as_dict(self):
        return {name: getattr(self, name) for name in ("label", "N") + SUM_NAMES} | {"flags": dict(self.flags)}


def seq_diagnostics(s, N):
    """Partial sums of the four summability series of ``s`` at truncation N."""
    if N < 1:
        raise ValueError("N must be at least 1")
    a = np.abs(s.values(N))
    n = np.arange(1, N + 1, dtype=float)
    series = {
        "l1": np.cumsum(a),
        "l2": np.cumsum(a ** 2),
        "weighted_l2": np.cumsum(n ** 2 * a ** 2),
        "sqrt_weighted_l1": np.cumsum(a * np.sqrt(n)),
    }
    flags = {}
    for name, cs in series.items():
        flags[name] = dyadic_flag(cs[max(N // 4, 1) - 1], cs[max(N // 2, 1) - 1], cs[-1])
    return SummabilityReport(
        s.label, N, *(float(series[k][-1]) for k in SUM_NAMES), flags=flags
    )
