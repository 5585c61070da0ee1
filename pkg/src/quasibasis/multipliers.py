"""Multiplier Hamiltonians, metric operators and ladder operators at truncation.

For a biorthogonal pair ``(F_x, F_y)`` and a scalar sequence ``alpha``::

    H_{x,y} f = sum_n alpha_n <y_n, f> x_n        H_{y,x} g = sum_n alpha_n <x_n, g> y_n
    S^beta_x f = sum_n beta_n <x_n, f> x_n       S^gamma_y g = sum_n gamma_n <y_n, g> y_n
    A_{x,y} f = sum_{n>b} sqrt(alpha_n) <y_n, f> x_{n-1}
    B_{x,y} f = sum_{n>=b} sqrt(alpha_{n+1}) <y_n, f> x_{n+1}

where ``b`` is the family's first index.  Every series is cut at index ``N``
and returned together with a :class:`TailDiagnostics` record built from the
partial results at ``N/4``, ``N/2`` and ``N``.  Divergence is reported, never
raised.
"""

from __future__ import annotations

import cmath
import enum
import itertools
from dataclasses import dataclass

import numpy as np

from .families import SequenceFamily
from .seqspace import CoeffVector, GaussPolyVector, ScalarSequence, distance, gauss_gram, inner, norm

__all__ = [
    "Classification",
    "TailDiagnostics",
    "MultiplierOperator",
    "MetricOperator",
    "LadderOperator",
    "Direction",
    "EdgeIndexError",
    "multiplier_apply",
    "metric_apply",
    "ladder_apply",
    "factorization_residual",
    "intertwining_residual",
    "adjoint_pairing_residual",
    "find_adjoint_counterexample",
    "formal_frame",
    "FormalFrame",
    "combination",
    "member_matrix",
    "metric_matrix",
    "multiplier_matrix",
    "psd_sqrt",
    "DEFAULT_TAIL_TOL",
]

DEFAULT_TAIL_TOL = 1e-9
# increments that do not shrink by at least this factor per dyadic step
GROWTH_RATIO = 0.95


class EdgeIndexError(ValueError):
    """An index-shifting identity was requested at the truncation boundary."""


class Classification(str, enum.Enum):
    CONVERGED = "CONVERGED"
    GROWING = "GROWING"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class TailDiagnostics:
    """Dyadic convergence record of a truncated series.

    ``norms`` are the norms of the partial results at ``checkpoints``;
    ``increments`` are ``||S_{N/2} - S_{N/4}||`` and ``||S_N - S_{N/2}||``.
    Classification uses the increments (a Cauchy test), which also bounds the
    difference of the last two norms.  GROWING means the increments fail to
    shrink between the two dyadic blocks.
    """

    checkpoints: tuple
    norms: tuple
    increments: tuple
    classification: Classification
    tolerance: float

    def as_dict(self):
        return {
            "checkpoints": list(self.checkpoints),
            "norms": list(self.norms),
            "increments": list(self.increments),
            "classification": self.classification.value,
            "tolerance": self.tolerance,
        }


def classify_increments(norms, increments, tol):
    inc_prev, inc_last = increments
    if inc_last <= tol * (1.0 + norms[-1]):
        return Classification.CONVERGED
    if inc_prev > 0 and inc_last >= GROWTH_RATIO * inc_prev:
        return Classification.GROWING
    return Classification.INCONCLUSIVE


def diagnose(partials, checkpoints, tol=DEFAULT_TAIL_TOL):
    """TailDiagnostics from partial results at three increasing checkpoints."""
    norms = tuple(norm(p) for p in partials)
    increments = (distance(partials[1], partials[0]), distance(partials[2], partials[1]))
    return TailDiagnostics(tuple(checkpoints), norms, increments, classify_increments(norms, increments, tol), tol)


def _zero_like(v):
    if isinstance(v, CoeffVector):
        return CoeffVector.zeros(1, exact=v.exact)
    return GaussPolyVector([], v.rate)


def _batch_inner(probes, f):
    """[<p, f> for p in probes], batched for Gaussian vectors."""
    if isinstance(f, GaussPolyVector):
        if f.is_zero():
            return [0j] * len(probes)
        return list(gauss_gram(probes, [f])[:, 0])
    return [inner(p, f) for p in probes]


def _scalar(alpha, n):
    v = alpha(n)
    return complex(v) if not isinstance(v, (int, float, complex)) else v


def _truncated_series(terms, N, base, zero, tol):
    """Sum ``coef_n * vec_n`` for n = base..N with dyadic partial results.

    ``terms`` maps n to ``(coef, vec)``; entries with zero coefficient are
    skipped.
    """
    checkpoints = (N // 4, N // 2, N)
    partials = []
    acc = zero
    n = base
    for c in checkpoints:
        while n <= c:
            coef, vec = terms(n)
            if coef != 0:
                acc = acc + coef * vec
            n += 1
        partials.append(acc)
    return acc, diagnose(partials, checkpoints, tol)


def _series(weights, probes_family, out_family, f, N, shift=0, tol=DEFAULT_TAIL_TOL):
    """``sum_{n} weights(n) <probe_n, f> out_{n+shift}`` over the admissible n <= N."""
    base = probes_family.base_index
    lo = base - shift if shift < 0 else base
    lo = max(lo, base)
    idx = list(range(lo, N + 1))
    coefs = dict(zip(idx, _batch_inner([probes_family.member(n) for n in idx], f))) if idx else {}

    def terms(n):
        if n < lo:
            return 0, None
        w = weights(n)
        if w == 0:
            return 0, None
        return w * coefs[n], out_family.member(n + shift)

    zero = _zero_like(out_family.member(base))
    return _truncated_series(terms, N, base, zero, tol)


# ---------------------------------------------------------------------------
# operators
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MultiplierOperator:
    """``f -> sum_{n<=N} alpha_n <right_n, f> left_n``.

    ``H_{x,y}`` has ``left = F_x, right = F_y``; ``H_{y,x}`` swaps them.
    """

    left: SequenceFamily
    right: SequenceFamily
    alpha: ScalarSequence
    N: int

    def __call__(self, f):
        return multiplier_apply(self, f)[0]


@dataclass(frozen=True)
class MetricOperator:
    """``f -> sum_{n<=N} w_n <fam_n, f> fam_n`` with strictly positive weights."""

    family: SequenceFamily
    weights: ScalarSequence
    N: int

    def __post_init__(self):
        w = [self.weights(n) for n in range(self.family.base_index, self.N + 1)]
        if any(np.iscomplexobj(v) and np.imag(v) != 0 or np.real(v) <= 0 for v in w):
            raise ValueError("metric weights must be strictly positive reals")

    def __call__(self, f):
        return metric_apply(self, f)[0]


class Direction(str, enum.Enum):
    LOWER = "LOWER"
    RAISE = "RAISE"


@dataclass(frozen=True)
class LadderOperator:
    """Lowering (A) or raising (B) operator built on ``(left, right)``.

    ``A_{x,y}`` is ``LadderOperator(LOWER, F_x, F_y, alpha, N)``; the (y, x)
    versions swap the families.  Requires ``alpha_b = 0`` and alpha
    nondecreasing, ``b`` the first index.
    """

    direction: Direction
    left: SequenceFamily
    right: SequenceFamily
    alpha: ScalarSequence
    N: int

    def __post_init__(self):
        b = self.left.base_index
        vals = [_scalar(self.alpha, n) for n in range(b, self.N + 2)]
        if any(v.imag != 0 for v in map(complex, vals)):
            raise ValueError("ladder sequence must be real")
        vals = [complex(v).real for v in vals]
        if vals[0] != 0:
            raise ValueError(f"ladder sequence must vanish at the first index {b}")
        if any(a > c for a, c in zip(vals, vals[1:])):
            raise ValueError("ladder sequence must be nondecreasing")

    def __call__(self, f):
        return ladder_apply(self, f)[0]


def multiplier_apply(op, f, tol=DEFAULT_TAIL_TOL):
    return _series(lambda n: _scalar(op.alpha, n), op.right, op.left, f, op.N, tol=tol)


def metric_apply(op, f, tol=DEFAULT_TAIL_TOL):
    return _series(lambda n: _scalar(op.weights, n), op.family, op.family, f, op.N, tol=tol)


def ladder_apply(op, f, tol=DEFAULT_TAIL_TOL):
    if op.direction is Direction.LOWER:
        b = op.right.base_index

        def w(n):
            return cmath.sqrt(_scalar(op.alpha, n)) if n > b else 0

        return _series(w, op.right, op.left, f, op.N, shift=-1, tol=tol)

    def w(n):
        return cmath.sqrt(_scalar(op.alpha, n + 1))

    return _series(w, op.right, op.left, f, op.N, shift=1, tol=tol)


# ---------------------------------------------------------------------------
# identities
# ---------------------------------------------------------------------------


def combination(fam, coeffs):
    """``sum_k coeffs[k] * fam_k`` for a mapping index -> coefficient."""
    items = sorted(coeffs.items())
    acc = _zero_like(fam.member(fam.base_index))
    for k, c in items:
        acc = acc + c * fam.member(k)
    return acc


def _scale(*vectors):
    return 1.0 + max(norm(v) for v in vectors)


def factorization_residual(pair, alpha, coeffs, N, mirror=False):
    """``||B(A f) - H f||`` for ``f = sum coeffs[k] x_k`` (or y_k when mirrored).

    Returns ``(residual, scale)`` with ``scale = 1 + ||H f||``.
    """
    xf, yf = pair
    left, right = (yf, xf) if mirror else (xf, yf)
    top = max(coeffs) if coeffs else left.base_index
    if top > N - 1:
        raise EdgeIndexError(f"top index {top} must be at most N-1 = {N - 1}")
    f = combination(left, coeffs)
    A = LadderOperator(Direction.LOWER, left, right, alpha, N)
    B = LadderOperator(Direction.RAISE, left, right, alpha, N)
    H = MultiplierOperator(left, right, alpha, N)
    hf = H(f)
    return distance(B(A(f)), hf), 1.0 + norm(hf)


def intertwining_residual(pair, alpha, beta, n, N, gamma=None):
    """Residuals of ``(H_xy S_x - S_x H_yx) y_n`` and ``(H_yx S_y - S_y H_xy) x_n``.

    ``gamma`` defaults to ``1/beta``.  Returns
    ``((r1, scale1), (r2, scale2))`` with each scale one plus the norm of the
    first product.
    """
    if n > N - 1:
        raise EdgeIndexError(f"index {n} must be at most N-1 = {N - 1}")
    xf, yf = pair
    if gamma is None:
        gamma = ScalarSequence(lambda k: 1.0 / beta(k), f"1/({beta.label})")
    Hxy = MultiplierOperator(xf, yf, alpha, N)
    Hyx = MultiplierOperator(yf, xf, alpha, N)
    Sx = MetricOperator(xf, beta, N)
    Sy = MetricOperator(yf, gamma, N)
    yn, xn = yf.member(n), xf.member(n)
    a1, b1 = Hxy(Sx(yn)), Sx(Hyx(yn))
    a2, b2 = Hyx(Sy(xn)), Sy(Hxy(xn))
    return (distance(a1, b1), 1.0 + norm(a1)), (distance(a2, b2), 1.0 + norm(a2))


def adjoint_pairing_residual(pair, alpha, f, h, N):
    """``|<f, H_xy h> - <H_yx f, h>|`` at truncation N, with its scale.

    Vanishes for real alpha; a nonzero imaginary part breaks it.
    """
    xf, yf = pair
    Hxy = MultiplierOperator(xf, yf, alpha, N)
    Hyx = MultiplierOperator(yf, xf, alpha, N)
    lhs = inner(f, Hxy(h))
    rhs = inner(Hyx(f), h)
    return abs(lhs - rhs), 1.0 + abs(lhs) + abs(rhs)


def find_adjoint_counterexample(pair, alpha, N, tol=1e-10, max_index=4):
    """Search small two-term combinations for a broken adjoint pairing.

    Returns ``(f_coeffs, h_coeffs, residual)`` with ``f`` in span{y_k} and
    ``h`` in span{x_k}, or None when every candidate stays within ``tol``.
    """
    xf, yf = pair
    b = xf.base_index
    idx = range(b, min(b + max_index, N + 1))
    pairs = [(i,) for i in idx] + list(itertools.combinations(idx, 2))
    for fi in pairs:
        for hi in pairs:
            fc = {k: 1.0 for k in fi}
            hc = {k: 1.0 for k in hi}
            res, _ = adjoint_pairing_residual(pair, alpha, combination(yf, fc), combination(xf, hc), N)
            if res > tol:
                return fc, hc, res
    return None


# ---------------------------------------------------------------------------
# matrix representations and the formal frame
# ---------------------------------------------------------------------------


def member_matrix(fam, N, dim):
    """Columns are the coordinates of members base..N, cut to ``dim`` rows."""
    cols = []
    for n in range(fam.base_index, N + 1):
        c = fam.member(n).to_float().coefficients
        col = np.zeros(dim, dtype=complex)
        k = min(dim, c.size)
        col[:k] = c[:k]
        cols.append(col)
    return np.column_stack(cols)


def metric_matrix(fam, weights, N, dim):
    F = member_matrix(fam, N, dim)
    w = weights.values(N, start=fam.base_index)
    S = (F * w) @ F.conj().T
    return 0.5 * (S + S.conj().T)


def multiplier_matrix(left, right, alpha, N, dim):
    L = member_matrix(left, N, dim)
    R = member_matrix(right, N, dim)
    return (L * alpha.values(N, start=left.base_index)) @ R.conj().T


def psd_sqrt(S, rel_tol=1e-8):
    """Spectral square root of a Hermitian PSD matrix, clamping tiny negatives."""
    S = 0.5 * (S + S.conj().T)
    w, V = np.linalg.eigh(S)
    scale = max(float(np.abs(w).sum()), 1e-300)
    if w.min() < -rel_tol * scale:
        raise np.linalg.LinAlgError(f"matrix is indefinite: smallest eigenvalue {w.min():.3e}")
    return (V * np.sqrt(np.clip(w, 0.0, None))) @ V.conj().T


@dataclass(frozen=True)
class FormalFrame:
    e_hat: np.ndarray
    e_hat_alt: np.ndarray
    h_xy: np.ndarray
    orthonormality_residual: float
    eigen_residual: float
    consistency_residual: float
    dim: int


def formal_frame(pair, alpha, beta, N):
    """Truncated ``e_hat_n`` and ``h_xy`` for a coefficient example.

    The metric matrices are built on span{e_1..e_N}, where the truncated
    families form a pair of dual bases; the square roots are spectral.
    Residuals are maxima over indices ``1..N-1``:
    ``|<e_m, e_n> - delta_mn|``, ``||h_xy e_n - alpha_n e_n||`` and the
    distance between the two constructions ``beta_n^{-1/2} S_x^{1/2} y_n``
    and ``gamma_n^{-1/2} S_y^{1/2} x_n`` with ``gamma = 1/beta``.
    """
    xf, yf = pair
    if xf.kind.gaussian:
        raise ValueError("formal_frame works on coefficient examples only")
    dim = N
    b = beta.values(N)
    if np.any(b.real <= 0) or np.any(b.imag != 0):
        raise ValueError("beta must be strictly positive")
    b = b.real
    gamma = ScalarSequence(lambda k: 1.0 / beta(k), f"1/({beta.label})")
    X = member_matrix(xf, N, dim)
    Y = member_matrix(yf, N, dim)
    Sx = metric_matrix(xf, beta, N, dim)
    Sy = metric_matrix(yf, gamma, N, dim)
    H = multiplier_matrix(xf, yf, alpha, N, dim)
    rx, ry = psd_sqrt(Sx), psd_sqrt(Sy)
    E = rx @ Y / np.sqrt(b)
    E_alt = ry @ X * np.sqrt(b)
    h = ry @ H @ rx
    M = N - 1
    a = alpha.values(N)
    gram = E[:, :M].conj().T @ E[:, :M]
    ortho = float(np.abs(gram - np.eye(M)).max()) if M else 0.0
    eig = max((np.linalg.norm(h @ E[:, k] - a[k] * E[:, k]) for k in range(M)), default=0.0)
    cons = max((np.linalg.norm(E[:, k] - E_alt[:, k]) for k in range(M)), default=0.0)
    return FormalFrame(E, E_alt, h, ortho, float(eig), float(cons), dim)
