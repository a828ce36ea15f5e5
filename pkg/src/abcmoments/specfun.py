"""Special functions used by the wavefunction oracle.

Everything here accepts plain floats. ``pochhammer`` and
``laguerre_coefficients`` are written generically so that they also run on
``fractions.Fraction`` inputs and then return exact results.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError

__all__ = [
    "log_gamma",
    "gamma",
    "pochhammer",
    "LaguerreBasis",
    "laguerre_coefficients",
    "laguerre_eval",
    "QuadratureRule",
    "gauss_laguerre",
    "default_node_count",
]

_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)

# B_{2k} / (2k (2k - 1)) for k = 1..8
_STIRLING = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
)
_STIRLING_MIN = 15.0


def _stirling(x: float) -> float:
    z = 1.0 / x
    z2 = z * z
    series = 0.0
    for coef in reversed(_STIRLING):
        series = series * z2 + coef
    return (x - 0.5) * math.log(x) - x + _HALF_LOG_2PI + series * z


def log_gamma(x: float) -> float:
    """ln Gamma(x) for real x > 0.

    Stirling's series is used for x >= 15; smaller arguments are first
    shifted up with Gamma(x + 1) = x Gamma(x).
    """
    x = float(x)
    if not x > 0.0 or not math.isfinite(x):
        raise DomainError(f"log_gamma needs a finite x > 0, got {x!r}")
    if x >= _STIRLING_MIN:
        return _stirling(x)
    prod = 1.0
    while x < _STIRLING_MIN:
        prod *= x
        x += 1.0
    return _stirling(x) - math.log(prod)


def gamma(x: float) -> float:
    return math.exp(log_gamma(x))


def pochhammer(b, m: int):
    """Rising factorial (b)_m = Gamma(b + m) / Gamma(b) for integer m.

    Negative m gives 1 / ((b - 1)(b - 2)...(b + m)). Exact for Fractions.
    """
    out = b * 0 + 1  # 1 in the type of b
    if m >= 0:
        for i in range(m):
            out *= b + i
    else:
        for i in range(1, -m + 1):
            out /= b - i
    return out


def laguerre_coefficients(n: int, a):
    """Monomial coefficients c_0..c_n of the generalized Laguerre L_n^(a).

    c_j = (-1)^j binom(n + a, n - j) / j!, with the binomial built as a
    product so that rational ``a`` gives exact output.
    """
    if n < 0:
        raise DomainError(f"degree must be >= 0, got {n}")
    one = a * 0 + 1
    coeffs = []
    for j in range(n + 1):
        c = one
        for i in range(1, n - j + 1):
            c = c * (a + j + i) / i
        c = c / math.factorial(j)
        coeffs.append(-c if j % 2 else c)
    return coeffs


@dataclass(frozen=True)
class LaguerreBasis:
    n: int
    a: float
    coefficients: tuple

    @classmethod
    def build(cls, n: int, a) -> "LaguerreBasis":
        if not a > -1:
            raise DomainError(f"Laguerre parameter must exceed -1, got {a}")
        return cls(n, a, tuple(laguerre_coefficients(n, a)))

    def __call__(self, t):
        return laguerre_eval(self.n, float(self.a), t)

    def horner(self, t):
        out = 0.0 * np.asarray(t, dtype=float)
        for c in reversed(self.coefficients):
            out = out * t + float(c)
        return out


def laguerre_eval(n: int, a: float, t):
    """L_n^(a)(t) by the three-term recurrence in degree; ``t`` may be an array."""
    if n < 0:
        raise DomainError(f"degree must be >= 0, got {n}")
    t = np.asarray(t, dtype=float)
    prev = np.ones_like(t)
    if n == 0:
        return prev if prev.ndim else float(prev)
    cur = 1.0 + a - t
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 + a - t) * cur - (k + a) * prev) / (k + 1)
    return cur if cur.ndim else float(cur)


def laguerre_derivative(n: int, a: float, t):
    """d/dt L_n^(a)(t) = -L_{n-1}^(a+1)(t)."""
    if n == 0:
        return 0.0 * np.asarray(t, dtype=float)
    return -laguerre_eval(n - 1, a + 1.0, t)


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss rule for integrals of f(t) t^parameter e^{-t} over (0, inf)."""

    parameter: float
    nodes: np.ndarray
    weights: np.ndarray

    def __len__(self):
        return len(self.nodes)

    def integrate(self, f) -> float:
        """Apply the rule to a callable or to precomputed values at the nodes."""
        vals = f(self.nodes) if callable(f) else np.asarray(f)
        return float(np.dot(self.weights, vals))


def _jacobi(beta: float, N: int):
    k = np.arange(N, dtype=float)
    diag = 2.0 * k + beta + 1.0
    off = np.sqrt(k[1:] * (k[1:] + beta))
    return diag, off


def _sturm_count(diag, off, x):
    """Number of eigenvalues below each entry of ``x``."""
    count = np.zeros(x.shape, dtype=int)
    d = diag[0] - x
    count += d < 0
    tiny = np.finfo(float).tiny
    for i in range(1, len(diag)):
        d = np.where(d == 0.0, tiny, d)
        d = (diag[i] - x) - off[i - 1] ** 2 / d
        count += d < 0
    return count


def _bisection_nodes(diag, off):
    N = len(diag)
    radius = np.zeros(N)
    radius[:-1] += off
    radius[1:] += off
    lo = np.full(N, max(0.0, float(np.min(diag - radius))))
    hi = np.full(N, float(np.max(diag + radius)))
    idx = np.arange(N)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        below = _sturm_count(diag, off, mid) > idx
        hi = np.where(below, mid, hi)
        lo = np.where(below, lo, mid)
        if np.all(hi - lo <= 4 * np.finfo(float).eps * hi):
            break
    return 0.5 * (lo + hi)


def _orthonormal_sweep(diag, off, t, log_mass):
    """Evaluate p_N, p_N' and sum_{k<N} p_k^2 of the orthonormal family.

    Values are carried with a per-node scale to avoid overflow at the large
    nodes; returned quantities share that scale (``log_scale``).
    """
    N = len(diag)
    p_prev = np.zeros_like(t)
    dp_prev = np.zeros_like(t)
    p = np.full_like(t, math.exp(-0.5 * log_mass))
    dp = np.zeros_like(t)
    ssq = p * p
    log_scale = np.zeros_like(t)
    for k in range(N):
        b_next = math.sqrt((k + 1) * (k + 1 + (diag[0] - 1.0)))
        b_k = off[k - 1] if k > 0 else 0.0
        p_new = ((t - diag[k]) * p - b_k * p_prev) / b_next
        dp_new = (p + (t - diag[k]) * dp - b_k * dp_prev) / b_next
        p_prev, dp_prev, p, dp = p, dp, p_new, dp_new
        if k < N - 1:
            ssq = ssq + p * p
        big = np.abs(p) > 1e100
        if np.any(big):
            f = np.where(big, 1e-100, 1.0)
            p, dp, p_prev, dp_prev = p * f, dp * f, p_prev * f, dp_prev * f
            ssq = ssq * f * f
            log_scale = log_scale - np.log(f)
    return p, dp, ssq, log_scale


def default_node_count(n: int, lam) -> int:
    return int(min(200, max(20, n + 8 + math.ceil(abs(float(lam)) / 2))))


@lru_cache(maxsize=4096)
def _gauss_laguerre(beta: float, N: int, method: str) -> QuadratureRule:
    diag, off = _jacobi(beta, N)
    nodes = None
    if method == "eig":
        try:
            nodes = np.linalg.eigvalsh(np.diag(diag) + np.diag(off, 1) + np.diag(off, -1))
        except np.linalg.LinAlgError:
            nodes = None
        if nodes is not None and (nodes[0] <= 0 or np.any(np.diff(nodes) <= 0)):
            nodes = None
    if nodes is None:
        nodes = _bisection_nodes(diag, off)
    log_mass = log_gamma(beta + 1.0)
    for _ in range(3):
        p, dp, _, _ = _orthonormal_sweep(diag, off, nodes, log_mass)
        step = p / dp
        nodes = nodes - step
        if np.all(np.abs(step) <= 2 * np.finfo(float).eps * nodes):
            break
    _, _, ssq, log_scale = _orthonormal_sweep(diag, off, nodes, log_mass)
    weights = np.exp(-np.log(ssq) - 2.0 * log_scale)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureRule(beta, nodes, weights)


def gauss_laguerre(beta: float, N: int, method: str = "eig") -> QuadratureRule:
    """Generalized Gauss-Laguerre rule with ``N`` nodes for weight t^beta e^{-t}.

    Nodes start from the eigenvalues of the Jacobi matrix (Golub-Welsch) and
    are polished by Newton steps on the orthonormal recurrence; weights come
    from the Christoffel function. ``method="bisection"`` locates the
    eigenvalues by Sturm-sequence bisection instead, which is also the
    fallback if the dense eigensolver fails.
    """
    if isinstance(N, bool) or not isinstance(N, (int, np.integer)) or N < 1:
        raise DomainError(f"node count must be a positive integer, got {N!r}")
    beta = float(beta)
    if not beta > -1.0 or not math.isfinite(beta):
        raise DomainError(f"weight exponent must exceed -1, got {beta}")
    if method not in ("eig", "bisection"):
        raise DomainError(f"unknown method {method!r}")
    return _gauss_laguerre(beta, int(N), method)
