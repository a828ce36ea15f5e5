"""Radial moments <r^lambda> from the three-term moment recurrence.

All moments are dimensionless, in units of (a0/Z)^lambda. With n_eff the
effective principal number and alpha the effective angular number, every
admissible moment obeys

    (lam+1)/n_eff^2 <r^lam> - (2 lam+1) <r^(lam-1)>
        + lam/4 [(2 alpha+1)^2 - lam^2] <r^(lam-2)> = 0

as long as lam > -(2 alpha + 1). The chain is seeded with <r^0> = 1 and the
Hellmann-Feynman value of <r^-2>, which the recurrence cannot reach.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Union

from .errors import DivergentMoment, DomainError, RecurrenceWindow
from .model import QuantumState2D, QuantumState3D, State, to_fraction

FLOAT = "float64"
EXACT = "exact-rational"

_MODE_ALIASES = {
    "float": FLOAT,
    "float64": FLOAT,
    "exact": EXACT,
    "rational": EXACT,
    "exact-rational": EXACT,
}


def normalize_mode(mode: str) -> str:
    try:
        return _MODE_ALIASES[mode]
    except KeyError:
        raise DomainError(f"unknown arithmetic mode {mode!r}") from None


@dataclass(frozen=True)
class Moment:
    lam: int
    value: Union[float, Fraction]
    mode: str = FLOAT

    def __float__(self):
        return float(self.value)


@dataclass(frozen=True)
class AdmissibilityWindow:
    alpha: float

    @property
    def finite_bound(self):
        return -(2 * self.alpha + 3)

    @property
    def recurrence_bound(self):
        return -(2 * self.alpha + 1)

    def exists(self, lam) -> bool:
        return lam > self.finite_bound

    def step_ok(self, lam) -> bool:
        return lam > self.recurrence_bound


def radial_numbers(state: State, mode: str = FLOAT):
    """(alpha, n_eff) of the equivalent 3D radial problem, in the mode's type.

    For a planar state alpha is alpha_tilde - 1/2 and n_eff is n + alpha_tilde + 1/2.
    """
    mode = normalize_mode(mode)
    if mode == EXACT:
        state = state.exact()
        return state.radial_alpha(), state.n_eff()
    return float(state.radial_alpha()), float(state.n_eff())


def _check_lam(lam):
    if isinstance(lam, bool) or not isinstance(lam, int):
        raise DomainError(f"lambda must be an integer, got {lam!r}")


def _admissible(alpha, lam):
    window = AdmissibilityWindow(alpha)
    if not window.exists(lam):
        raise DivergentMoment(lam, window.finite_bound)


def _one(alpha):
    return Fraction(1) if isinstance(alpha, Rational) else 1.0


def _recurrence_coeffs(alpha, nt, lam):
    """Coefficients (of <r^lam>, <r^(lam-1)>, <r^(lam-2)>)."""
    one = _one(alpha)
    return (
        (lam + 1) * one / (nt * nt),
        -(2 * lam + 1) * one,
        lam * ((2 * alpha + 1) ** 2 - lam * lam) * one / 4,
    )


def _inv_r(alpha, nt):
    return _one(alpha) / (nt * nt)


def _inv_r2(alpha, nt):
    # Hellmann-Feynman: dE/dalpha = (alpha + 1/2) <r^-2>
    return _one(alpha) / (nt**3 * (alpha + _one(alpha) / 2))


def _upward(alpha, nt, lam):
    lower, cur = _inv_r(alpha, nt), _one(alpha)
    window = AdmissibilityWindow(alpha)
    for step in range(1, lam + 1):
        if not window.step_ok(step):
            raise RecurrenceWindow(step, window.recurrence_bound)
        c0, c1, c2 = _recurrence_coeffs(alpha, nt, step)
        lower, cur = cur, -(c1 * cur + c2 * lower) / c0
    return cur


def _downward(alpha, nt, lam):
    upper, cur = _inv_r(alpha, nt), _inv_r2(alpha, nt)
    window = AdmissibilityWindow(alpha)
    for target in range(-3, lam - 1, -1):
        step = target + 2
        if not window.step_ok(step):
            raise RecurrenceWindow(step, window.recurrence_bound)
        c0, c1, c2 = _recurrence_coeffs(alpha, nt, step)
        if c2 == 0:
            raise RecurrenceWindow(step, window.recurrence_bound)
        upper, cur = cur, -(c0 * upper + c1 * cur) / c2
    return cur


def radial_moment(alpha, nt, lam: int):
    """<r^lam> for the radial problem with numbers (alpha, n_eff)."""
    _check_lam(lam)
    _admissible(alpha, lam)
    if lam == 0:
        return _one(alpha)
    if lam > 0:
        return _upward(alpha, nt, lam)
    if lam == -1:
        return _inv_r(alpha, nt)
    if lam == -2:
        return _inv_r2(alpha, nt)
    return _downward(alpha, nt, lam)


def moment(state: QuantumState3D, lam: int, mode: str = FLOAT) -> Moment:
    """<r^lam> in units (a0/Z)^lam, by recurrence.

    Raises DivergentMoment when lam <= -(2 alpha + 3).
    """
    mode = normalize_mode(mode)
    alpha, nt = radial_numbers(state, mode)
    return Moment(lam, radial_moment(alpha, nt, lam), mode)


def moment_2d(state: QuantumState2D, lam: int, mode: str = FLOAT) -> Moment:
    """<rho^lam> for a planar state, via alpha -> alpha_tilde - 1/2."""
    return moment(state, lam, mode)


# Closed forms, each a function of (alpha, n_eff). Kept in a table so the
# verification suite can be pointed at a deliberately broken entry.


def _cf_r1(a, nt):
    return (3 * nt * nt - a * (a + 1)) / 2


def _cf_r2(a, nt):
    return nt * nt / 2 * (1 + 5 * nt * nt - 3 * a * (a + 1))


def _cf_rm3(a, nt):
    one = _one(a)
    return one / (nt**3 * a * (a + one / 2) * (a + 1))


def _cf_rm4(a, nt):
    # the extra factor alpha in the denominator is required by the recurrence
    one = _one(a)
    half = one / 2
    return (3 * nt * nt - a * (a + 1)) / (
        2 * nt**5 * a * (a - half) * (a + half) * (a + 1) * (a + 3 * half)
    )


CLOSED_FORMS = {
    -4: _cf_rm4,
    -3: _cf_rm3,
    -2: _inv_r2,
    -1: _inv_r,
    0: lambda a, nt: _one(a),
    1: _cf_r1,
    2: _cf_r2,
}


def closed_form_moment(state: State, lam: int, mode: str = FLOAT) -> Moment:
    """Direct closed-form value of <r^lam> for lam in -4..2."""
    mode = normalize_mode(mode)
    _check_lam(lam)
    if lam not in CLOSED_FORMS:
        raise DomainError(f"no closed form for lambda={lam}")
    alpha, nt = radial_numbers(state, mode)
    _admissible(alpha, lam)
    return Moment(lam, CLOSED_FORMS[lam](alpha, nt), mode)


def _val(m):
    return m.value if isinstance(m, Moment) else m


def recurrence_terms(state: State, lam, m_lo, m_mid, m_hi, mode: str = FLOAT):
    """The three terms of the recurrence for the given moment values.

    ``m_lo``, ``m_mid``, ``m_hi`` are <r^(lam-2)>, <r^(lam-1)>, <r^lam>.
    ``lam`` may be real here; the identity holds for any lam in its window.
    """
    alpha, nt = radial_numbers(state, mode)
    if normalize_mode(mode) == FLOAT:
        lam = float(lam)
        m_lo, m_mid, m_hi = float(_val(m_lo)), float(_val(m_mid)), float(_val(m_hi))
    else:
        m_lo, m_mid, m_hi = _val(m_lo), _val(m_mid), _val(m_hi)
    c0, c1, c2 = _recurrence_coeffs(alpha, nt, lam)
    return c0 * m_hi, c1 * m_mid, c2 * m_lo


def recurrence_residual(state: State, lam, m_lo, m_mid, m_hi, mode: str = FLOAT):
    """Left-hand side of the recurrence; zero for exact moments."""
    t0, t1, t2 = recurrence_terms(state, lam, m_lo, m_mid, m_hi, mode)
    return t0 + t1 + t2


def relative_residual(state: State, lam, m_lo, m_mid, m_hi) -> float:
    """|residual| scaled by the sum of the absolute term sizes."""
    terms = recurrence_terms(state, lam, m_lo, m_mid, m_hi)
    scale = sum(abs(t) for t in terms)
    return abs(sum(terms)) / scale if scale else 0.0
