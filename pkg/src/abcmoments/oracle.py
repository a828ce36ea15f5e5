"""Explicit eigenfunctions and brute-force radial integrals.

Nothing in this module uses the moment recurrence. The radial function of
a state with effective numbers (alpha, n_eff) is

    u(r) = N r^(alpha+1) exp(-s r / 2) L_n^(2 alpha+1)(s r),   s = 2 Z / n_eff,

in units with a0 = 1 (planar states use alpha = alpha_tilde - 1/2, so that
u plays the role of chi = sqrt(rho) R and the 2 pi of the azimuthal
integral is absorbed into N). Every integral is evaluated twice: once as a
finite sum of Gamma functions over the Laguerre coefficients and once by
generalized Gauss-Laguerre quadrature.
"""
from __future__ import annotations

import math
from functools import lru_cache
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import ABCError, DivergentMoment, RecurrenceWindow
from .model import State
from .specfun import (
    LaguerreBasis,
    default_node_count,
    gauss_laguerre,
    laguerre_coefficients,
    laguerre_derivative,
    laguerre_eval,
    log_gamma,
    pochhammer,
)

PATH_RTOL = 1e-10


class OracleMismatch(ABCError, AssertionError):
    """The Gamma-series and quadrature evaluations disagree."""


def _series(coeffs, b):
    """sum_{i,j} c_i c_j (b)_{i+j}, i.e. the Gamma sum divided by Gamma(b)."""
    m = 2 * (len(coeffs) - 1)
    poch = [pochhammer(b, k) for k in range(m + 1)]
    total = 0 * b
    for i, ci in enumerate(coeffs):
        for j, cj in enumerate(coeffs):
            total += ci * cj * poch[i + j]
    return total


def _connection(n: int, shift):
    """Coefficients e_k with L_n^(a) = sum_k e_k L_k^(a - shift), k = 0..n.

    e_k = (shift)_{n-k} / (n-k)!.
    """
    return [pochhammer(shift, n - k) / math.factorial(n - k) for k in range(n + 1)]


def _orthogonal_sum(coeffs, beta):
    """Integral of (sum_k d_k L_k^(beta))^2 t^beta e^-t divided by Gamma(beta+1).

    A sum of non-negative terms d_k^2 (beta+1)_k / k!.
    """
    return math.fsum(
        d * d * pochhammer(beta + 1.0, k) / math.factorial(k) for k, d in enumerate(coeffs)
    )


def _gamma_ratio(b, lam):
    """Gamma(b + lam) / Gamma(b); exact for integer lam and Fraction b."""
    if isinstance(lam, int) or (isinstance(lam, float) and lam.is_integer() and abs(lam) < 64):
        return pochhammer(b, int(lam))
    return math.exp(log_gamma(b + lam) - log_gamma(b))


def _derivative_coeffs(coeffs, alpha):
    """Monomial coefficients of P(t) = (alpha+1) L - t L / 2 + t L'(t)."""
    n = len(coeffs) - 1
    out = []
    for j in range(n + 2):
        cj = coeffs[j] * (alpha + 1 + j) if j <= n else 0
        prev = coeffs[j - 1] / 2 if j >= 1 else 0
        out.append(cj - prev)
    return out


def _derivative_connection(n: int, a: float, beta: float):
    """P = (n+1)/2 L_{n+1}^(a) - (n+a)/2 L_{n-1}^(a), expanded in L_k^(beta)."""
    shift = a - beta
    hi = _connection(n + 1, shift)
    lo = _connection(n - 1, shift) if n >= 1 else []
    out = [0.5 * (n + 1) * c for c in hi]
    for k, c in enumerate(lo):
        out[k] -= 0.5 * (n + a) * c
    return out


@dataclass(frozen=True)
class RadialWavefunction:
    state: State
    alpha: float
    n_eff: float
    Z: float
    scale: float
    norm_constant: float
    basis: LaguerreBasis = field(repr=False)

    @property
    def n(self) -> int:
        return self.state.n

    def _parts(self, r):
        r = np.asarray(r, dtype=float)
        t = self.scale * r
        a = 2.0 * self.alpha + 1.0
        L = laguerre_eval(self.n, a, t)
        dL = laguerre_derivative(self.n, a, t)
        d2L = laguerre_eval(self.n - 2, a + 2.0, t) if self.n >= 2 else 0.0 * t
        return r, t, L, dL, d2L

    def __call__(self, r):
        r, t, L, _, _ = self._parts(r)
        return self.norm_constant * r ** (self.alpha + 1) * np.exp(-t / 2) * L

    def derivative(self, r):
        r, t, L, dL, _ = self._parts(r)
        P = (self.alpha + 1 - t / 2) * L + t * dL
        return self.norm_constant * r**self.alpha * np.exp(-t / 2) * P

    def second_derivative(self, r):
        r, t, L, dL, d2L = self._parts(r)
        a = self.alpha
        P = (a + 1 - t / 2) * L + t * dL
        dP = (a + 2 - t / 2) * dL - L / 2 + t * d2L
        env = self.norm_constant * np.exp(-t / 2)
        return env * (a * r ** (a - 1) * P + r**a * (self.scale * dP - self.scale / 2 * P))

    def ode_terms(self, r):
        """Terms of u'' + [2Z/r - alpha(alpha+1)/r^2 - (Z/n_eff)^2] u."""
        r = np.asarray(r, dtype=float)
        u = self(r)
        return (
            self.second_derivative(r),
            2 * self.Z / r * u,
            -self.alpha * (self.alpha + 1) / r**2 * u,
            -((self.Z / self.n_eff) ** 2) * u,
        )

    def ode_residual(self, r) -> float:
        """Max |residual| on ``r`` relative to the largest term on that grid."""
        terms = self.ode_terms(r)
        scale = max(float(np.max(np.abs(t))) for t in terms)
        return float(np.max(np.abs(sum(terms)))) / scale

    def interior_zeros(self, r_max=None, samples=20000) -> int:
        r_max = r_max or 8.0 * self.n_eff * (self.n_eff + 2) / self.Z
        r = np.linspace(r_max / samples, r_max, samples)
        _, t, L, _, _ = self._parts(r)
        s = np.sign(L)
        return int(np.count_nonzero(s[1:] * s[:-1] < 0))


@lru_cache(maxsize=1024)
def build_wavefunction(state: State) -> RadialWavefunction:
    """Normalized radial eigenfunction of ``state`` (a0 = 1)."""
    alpha = float(state.radial_alpha())
    nt = float(state.n_eff())
    Z = float(state.Z)
    s = 2.0 * Z / nt
    basis = LaguerreBasis.build(state.n, 2.0 * alpha + 1.0)
    a = 2.0 * alpha + 1.0
    # integral of t^(a+1) e^-t L_n^(a)(t)^2 = Gamma(n+a+1) (2n+a+1) / n!
    log_norm2 = (
        (a + 2.0) * math.log(s)
        + math.lgamma(state.n + 1)
        - log_gamma(state.n + a + 1.0)
        - math.log(2 * state.n + a + 1.0)
    )
    return RadialWavefunction(state, alpha, nt, Z, s, math.exp(0.5 * log_norm2), basis)


def _existence(alpha, lam):
    bound = -(2 * alpha + 3)
    if not lam > bound:
        raise DivergentMoment(lam, bound)


def series_moment(state: State, lam, exact: bool = False):
    """<r^lam> in units (a0/Z)^lam as a finite sum of Gamma functions.

    The float path expands L_n^(2 alpha+1) in the Laguerre family that is
    orthogonal for the integrand's weight, so the sum has no cancellation.
    With ``exact=True`` (integer lam, rational flux) the monomial double sum
    is evaluated in Fractions and the result is exact.
    """
    if exact:
        st = state.exact()
        alpha, nt = st.radial_alpha(), st.n_eff()
        _existence(alpha, lam)
        coeffs = laguerre_coefficients(state.n, 2 * alpha + 1)
        b0 = 2 * alpha + 3
        ratio = _series(coeffs, b0 + lam) / _series(coeffs, b0)
        return (nt / 2) ** lam * pochhammer(b0, lam) * ratio
    alpha, nt = float(state.radial_alpha()), float(state.n_eff())
    _existence(alpha, lam)
    n, a = state.n, 2 * alpha + 1
    beta0, beta = a + 1, a + 1 + lam
    norm = _orthogonal_sum(_connection(n, a - beta0), beta0)
    value = _orthogonal_sum(_connection(n, a - beta), beta)
    return (nt / 2) ** lam * _gamma_ratio(beta0 + 1, lam) * value / norm


def quadrature_moment(state: State, lam, nodes: int | None = None) -> float:
    """<r^lam> in units (a0/Z)^lam by Gauss-Laguerre quadrature of u^2."""
    wf = build_wavefunction(state)
    alpha = wf.alpha
    _existence(alpha, lam)
    beta = float(lam) + 2 * alpha + 2
    rule = gauss_laguerre(beta, nodes or default_node_count(state.n, lam))
    L = laguerre_eval(state.n, 2 * alpha + 1, rule.nodes)
    integral = rule.integrate(L * L)
    phys = wf.norm_constant**2 * wf.scale ** -(beta + 1) * integral
    return phys * wf.Z**lam


def _rel(a, b):
    a, b = float(a), float(b)
    denom = max(abs(a), abs(b))
    return abs(a - b) / denom if denom else 0.0


def oracle_moment_paths(state: State, lam):
    return series_moment(state, lam), quadrature_moment(state, lam)


def oracle_moment(state: State, lam, rtol: float = PATH_RTOL) -> float:
    """<r^lam> from the explicit wavefunction; lam may be any real number.

    Raises OracleMismatch if the two evaluation paths differ by more than
    ``rtol`` relative.
    """
    series, quad = oracle_moment_paths(state, lam)
    if _rel(series, quad) > rtol:
        raise OracleMismatch(
            f"oracle paths disagree for {state} lam={lam}: {series!r} vs {quad!r}"
        )
    return float(series)


def _kinetic_window(alpha, lam):
    bound = -(2 * alpha + 1)
    if not lam > bound:
        raise RecurrenceWindow(lam, bound)


def kinetic_series(state: State, lam) -> float:
    alpha, nt = float(state.radial_alpha()), float(state.n_eff())
    _kinetic_window(alpha, lam)
    n, a = state.n, 2 * alpha + 1
    beta0, beta = a + 1, a - 1 + lam
    norm = _orthogonal_sum(_connection(n, a - beta0), beta0)
    value = _orthogonal_sum(_derivative_connection(n, a, beta), beta)
    # N^2 s^-(beta+1) Gamma(beta+1) (...) with N^2 = s^(beta0+1) / (Gamma(beta0+1) norm),
    # converted from a0 = 1 to reduced units; s = 2Z / n_eff.
    return (nt / 2) ** (lam - 2) * _gamma_ratio(beta0 + 1, lam - 2) * value / norm


def kinetic_monomial_series(state: State, lam, exact: bool = False):
    """Same integral from the monomial coefficients of u'; exact if requested."""
    if exact:
        st = state.exact()
        alpha, nt = st.radial_alpha(), st.n_eff()
    else:
        alpha, nt = float(state.radial_alpha()), float(state.n_eff())
    _kinetic_window(alpha, lam)
    coeffs = laguerre_coefficients(state.n, 2 * alpha + 1)
    pcoef = _derivative_coeffs(coeffs, alpha)
    b0 = 2 * alpha + 3
    bk = 2 * alpha + 1 + lam
    return (nt / 2) ** (lam - 2) * _gamma_ratio(b0, lam - 2) * _series(pcoef, bk) / _series(coeffs, b0)


def kinetic_quadrature(state: State, lam, nodes: int | None = None) -> float:
    wf = build_wavefunction(state)
    alpha = wf.alpha
    _kinetic_window(alpha, lam)
    beta = float(lam) + 2 * alpha
    rule = gauss_laguerre(beta, nodes or default_node_count(state.n + 1, lam))
    t = rule.nodes
    a = 2 * alpha + 1
    P = (alpha + 1 - t / 2) * laguerre_eval(state.n, a, t) + t * laguerre_derivative(
        state.n, a, t
    )
    phys = wf.norm_constant**2 * wf.scale ** -(beta + 1) * rule.integrate(P * P)
    return phys / wf.Z ** (2 - lam)


def kinetic_weighted_integral(state: State, lam, rtol: float = PATH_RTOL) -> float:
    """Integral of r^lam (du/dr)^2 in units (Z/a0)^(2 - lam).

    Raises RecurrenceWindow unless lam > -(2 alpha + 1).
    """
    series = kinetic_series(state, lam)
    quad = kinetic_quadrature(state, lam)
    if _rel(series, quad) > rtol:
        raise OracleMismatch(
            f"kinetic paths disagree for {state} lam={lam}: {series!r} vs {quad!r}"
        )
    return float(series)


def overlap(wf1: RadialWavefunction, wf2: RadialWavefunction) -> float:
    """Integral of u1 u2 over (0, inf) for two functions with equal alpha."""
    if wf1.alpha != wf2.alpha:
        raise ValueError("overlap requires equal alpha")
    alpha = wf1.alpha
    sigma = 0.5 * (wf1.scale + wf2.scale)
    beta = 2 * alpha + 2
    rule = gauss_laguerre(beta, max(20, wf1.n + wf2.n + 4))
    r = rule.nodes / sigma
    a = 2 * alpha + 1
    vals = laguerre_eval(wf1.n, a, wf1.scale * r) * laguerre_eval(wf2.n, a, wf2.scale * r)
    return wf1.norm_constant * wf2.norm_constant * sigma ** -(beta + 1) * rule.integrate(vals)
