"""Physical identities as machine-checkable propositions.

Each check compares two independently assembled numbers and returns a
:class:`CheckReport`. Moments come from the recurrence engine, the closed
forms, or the wavefunction oracle; kinetic terms always come from the
oracle, never from the energy formula.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

from . import engine, oracle
from .engine import EXACT, FLOAT, closed_form_moment, moment, normalize_mode
from .errors import (
    ABCError,
    DivergentMoment,
    NotCircular,
    NotRational,
    RecurrenceWindow,
    SWaveExcluded,
)
from .model import QuantumState2D, QuantumState3D, State, energy, energy_2d
from .tables import MomentRow, MomentTable

DEFAULT_TOL = 1e-8
ORACLE_PATH_TOL = 1e-10
RESIDUAL_TOL = 1e-10
KINETIC_TOL = 1e-9
ENGINE_ONLY_TOL = 1e-12


@dataclass(frozen=True)
class CheckReport:
    name: str
    lhs: object
    rhs: object
    abs_err: float
    rel_err: float
    tol: float
    passed: bool
    state: Optional[State] = None
    detail: str = ""


def make_report(name, lhs, rhs, tol, state=None, detail="", scale=None) -> CheckReport:
    """Compare ``lhs`` and ``rhs``; exact (Fraction) inputs give exact errors.

    Passes when rel_err <= tol or abs_err <= tol * max(1, |lhs|). The
    relative error is taken against max(|lhs|, |rhs|) unless ``scale`` is
    given (used when one side is an exact zero).
    """
    diff = abs(lhs - rhs)
    if scale is None:
        scale = max(abs(lhs), abs(rhs))
    abs_err = float(diff)
    rel_err = float(diff / scale) if scale else 0.0
    passed = rel_err <= tol or abs_err <= tol * max(1.0, abs(float(lhs)))
    return CheckReport(name, lhs, rhs, abs_err, rel_err, tol, passed, state, detail)


def failed_report(name, state, err: Exception, tol=0.0) -> CheckReport:
    nan = float("nan")
    return CheckReport(name, None, None, nan, nan, tol, False, state, f"{type(err).__name__}: {err}")


def _alpha_nt(state, mode=FLOAT):
    return engine.radial_numbers(state, mode)


# ----------------------------------------------------------------------------
# virial theorem


def kinetic_pieces(state: State):
    """(<p_r^2/2m>, <centrifugal>) in units e^2/a0, from oracle integrals."""
    Z = float(state.Z)
    alpha = float(state.radial_alpha())
    radial = 0.5 * oracle.kinetic_weighted_integral(state, 0) * Z * Z
    if alpha == 0:
        centrifugal = 0.0
    else:
        centrifugal = 0.5 * alpha * (alpha + 1) * oracle.oracle_moment(state, -2) * Z * Z
    return radial, centrifugal


def virial_suite(state: State, tol: float = DEFAULT_TOL) -> list:
    """2<T> = <r dV/dr>, <T> = -E and <V> = 2E for the Coulomb potential."""
    Z = float(state.Z)
    radial, centrifugal = kinetic_pieces(state)
    T = radial + centrifugal
    inv_r = oracle.oracle_moment(state, -1) * Z * Z  # Z <1/r> with <1/r> in 1/a0
    E = float(energy(state))
    return [
        make_report("virial", 2 * T, inv_r, tol, state),
        make_report("virial_kinetic", T, -E, tol, state),
        make_report("virial_potential", -inv_r, 2 * E, tol, state),
    ]


def virial_check(state: State, tol: float = DEFAULT_TOL) -> CheckReport:
    """Single report for 2<T> = <r dV/dr>; see :func:`virial_suite`."""
    return virial_suite(state, tol)[0]


def virial_energy_split(nu, E):
    """(<T>, <V>) for a potential homogeneous of degree ``nu``."""
    return nu * E / (nu + 2), 2 * E / (nu + 2)


# ----------------------------------------------------------------------------
# generalized Schwinger identity


def schwinger_check(state: State, mode: str = EXACT, source: str = "closed", tol=None):
    """Z <r^-2> = alpha(alpha+1) <r^-3> with hbar^2/m = e^2 a0.

    Both sides are reported in units e^2/a0^2, i.e. the reduced moments
    times Z^3.

    ``source`` picks the moments: "closed" forms, recurrence "engine", or
    the wavefunction "oracle" (float only).
    """
    alpha, _ = _alpha_nt(state, FLOAT)
    if not alpha > 0:
        raise SWaveExcluded(f"alpha = {alpha} for {state}; the identity needs alpha > 0")
    if source == "oracle":
        mode = FLOAT
        m2, m3 = oracle.oracle_moment(state, -2), oracle.oracle_moment(state, -3)
    elif source == "engine":
        m2, m3 = moment(state, -2, mode).value, moment(state, -3, mode).value
    elif source == "closed":
        m2 = closed_form_moment(state, -2, mode).value
        m3 = closed_form_moment(state, -3, mode).value
    else:
        raise ValueError(f"unknown source {source!r}")
    mode = normalize_mode(mode)
    if mode == EXACT:
        st = state.exact()
        alpha, Z = st.radial_alpha(), st.Z
        tol = 0.0 if tol is None else tol
    else:
        Z = float(state.Z)
        tol = DEFAULT_TOL if tol is None else tol
    z3 = Z**3
    return make_report(
        f"schwinger[{source}]", z3 * m2, alpha * (alpha + 1) * z3 * m3, tol, state
    )


# ----------------------------------------------------------------------------
# circular states


@dataclass(frozen=True)
class OrbitStats:
    r_most: float
    r_mean: float
    delta_r: float
    ratio: float


def _require_circular(state):
    if state.n != 0:
        raise NotCircular(f"n = {state.n}; circular statistics need n = 0")


def orbit_stats(state: State) -> OrbitStats:
    """Most probable radius, mean radius, spread and spread/mean (units a0/Z)."""
    _require_circular(state)
    nt = float(state.n_eff())
    return OrbitStats(
        r_most=nt * nt,
        r_mean=nt * nt + nt / 2,
        delta_r=math.sqrt(nt**3 / 2 + nt * nt / 4),
        ratio=1.0 / math.sqrt(2 * nt + 1),
    )


def orbit_checks(state: State, tol: float = ENGINE_ONLY_TOL) -> list:
    """Cross-checks of :func:`orbit_stats` against engine moments and u(r)."""
    _require_circular(state)
    stats = orbit_stats(state)
    m1 = moment(state, 1).value
    m2 = moment(state, 2).value
    spread = math.sqrt(m2 - m1 * m1)
    reports = [
        make_report("orbit_mean", stats.r_mean, m1, tol, state),
        make_report("orbit_spread", stats.delta_r, spread, tol, state),
        make_report("orbit_ratio", stats.ratio, spread / m1, tol, state),
    ]
    try:
        st = state.exact()
        e1, e2 = moment(st, 1, EXACT).value, moment(st, 2, EXACT).value
        nt = st.n_eff()
        reports.append(
            make_report("orbit_ratio_exact", (e2 - e1 * e1) / (e1 * e1), 1 / (2 * nt + 1), 0.0, state)
        )
    except NotRational:
        pass
    # stationary point of u^2 at r_most (in a0 units: n_eff^2 / Z)
    wf = oracle.build_wavefunction(state)
    r_most = stats.r_most / wf.Z
    slope = float(wf.derivative(r_most))
    peak = float(wf(r_most))
    # d(ln u)/d(ln r) vanishes at the maximum; scale by its size at r_most / 2
    ref = abs(float(wf.derivative(r_most / 2)) / float(wf(r_most / 2)) * r_most / 2)
    reports.append(
        make_report("orbit_most_probable", slope / peak * r_most, 0.0, 1e-10, state, scale=ref)
    )
    return reports


def centrifugal_ratio(state: State, mode: str = FLOAT):
    """<V_c> / <T> = alpha(alpha+1) / ((alpha+1/2) n_eff) for any bound state."""
    alpha, nt = _alpha_nt(state, mode)
    return alpha * (alpha + 1) / ((alpha + (nt / nt) / 2) * nt)


def kinetic_ratios(state: State, mode: str = FLOAT):
    """(r_c, r_r): centrifugal and radial shares of the kinetic energy at n = 0."""
    _require_circular(state)
    _, nt = _alpha_nt(state, mode)
    one = nt / nt
    return (nt - 1) / (nt - one / 2), one / (2 * nt - 1)


def kinetic_ratio_checks(state: State, tol: float = DEFAULT_TOL) -> list:
    _require_circular(state)
    r_c, r_r = kinetic_ratios(state)
    radial, centrifugal = kinetic_pieces(state)
    total = radial + centrifugal
    reports = [
        make_report("ratio_centrifugal", r_c, centrifugal / total, tol, state),
        make_report("ratio_radial", r_r, radial / total, tol, state),
        make_report("ratio_centrifugal_general", r_c, centrifugal_ratio(state), ENGINE_ONLY_TOL, state),
    ]
    try:
        ec, er = kinetic_ratios(state.exact(), EXACT)
        reports.append(make_report("ratio_sum_exact", ec + er, Fraction(1), 0.0, state))
    except NotRational:
        pass
    return reports


# ----------------------------------------------------------------------------
# recurrence and kinetic identities over oracle moments


def residual_check(state: State, lam, cache=None, tol: float = RESIDUAL_TOL) -> CheckReport:
    """The three-term recurrence evaluated on oracle moments."""
    cache = {} if cache is None else cache

    def om(p):
        if p not in cache:
            cache[p] = oracle.oracle_moment(state, p)
        return cache[p]

    terms = engine.recurrence_terms(state, lam, om(lam - 2), om(lam - 1), om(lam))
    scale = sum(abs(t) for t in terms)
    return make_report(f"recurrence[{lam}]", sum(terms), 0.0, tol, state, scale=scale)


def kinetic_identity_check(state: State, lam, tol: float = KINETIC_TOL) -> CheckReport:
    """Integral of r^lam u'^2 against its expression in three moments."""
    alpha, nt = _alpha_nt(state)
    lhs = oracle.kinetic_weighted_integral(state, lam)
    om = oracle.oracle_moment
    low = (lam * (lam - 1) / 2 - alpha * (alpha + 1))
    rhs = 2 * om(state, lam - 1) - om(state, lam) / nt**2
    if low != 0:
        rhs += low * om(state, lam - 2)
    return make_report(f"kinetic_identity[{lam}]", lhs, rhs, tol, state)


# ----------------------------------------------------------------------------
# sweeps


def _monotone(values, increasing=True):
    pairs = zip(values, values[1:])
    return all((b > a) if increasing else (b < a) for a, b in pairs)


_EXPECTED_TREND = {-1: False, 1: True, 2: True}


class MonotonicityViolation(ABCError, AssertionError):
    pass


def flux_sweep(template: State, mu0_grid: Iterable, lam: int, mode: str = FLOAT,
               with_oracle: bool = True, tol: float = DEFAULT_TOL) -> MomentTable:
    """Moments of ``template`` relabelled with each flux in ``mu0_grid``.

    For the ground state (0, 0, 0) and lam in {-1, 1, 2} on an increasing
    grid inside [0, 1) the documented monotonic trend is asserted.
    """
    mode = normalize_mode(mode)
    table = MomentTable()
    grid = list(mu0_grid)
    for mu0 in grid:
        state = _with_flux(template, mu0)
        table.append(evaluate_row(state, lam, mode, with_oracle, tol))
    if (
        lam in _EXPECTED_TREND
        and template.n == 0 and getattr(template, "q", 0) == 0 and template.k == 0
        and template.dim == 3
        and all(0 <= m < 1 for m in grid)
        and _monotone(grid)
        and all(r.status == "ok" for r in table)
    ):
        vals = [r.engine_value for r in table]
        if not _monotone(vals, _EXPECTED_TREND[lam]):
            raise MonotonicityViolation(f"<r^{lam}> is not monotone over {grid}")
    return table


def _with_flux(template, mu0):
    if template.dim == 3:
        return QuantumState3D(template.n, template.q, template.k, mu0, template.Z)
    return QuantumState2D(template.n, template.k, mu0, template.Z)


def evaluate_row(state: State, lam: int, mode: str = FLOAT, with_oracle: bool = True,
                 tol: float = DEFAULT_TOL) -> MomentRow:
    """Engine value plus optional oracle comparison; errors become a status."""
    try:
        value = moment(state, lam, mode).value
    except DivergentMoment:
        status = "divergent"
        if with_oracle:
            try:
                oracle.oracle_moment(state, lam)
                status = "divergent_engine_only"
            except DivergentMoment:
                pass
        return MomentRow(state, lam, None, None, None, status)
    except RecurrenceWindow:
        return MomentRow(state, lam, None, None, None, "recurrence_window")
    except NotRational:
        return MomentRow(state, lam, None, None, None, "not_rational")
    if not with_oracle:
        return MomentRow(state, lam, value, None, None, "ok")
    try:
        ref = oracle.oracle_moment(state, lam)
    except oracle.OracleMismatch:
        return MomentRow(state, lam, value, None, None, "oracle_mismatch")
    rel = abs(float(value) - ref) / abs(ref)
    return MomentRow(state, lam, value, ref, rel, "ok" if rel <= tol else "fail")


# ----------------------------------------------------------------------------
# verification grid


@dataclass(frozen=True)
class Grid:
    n: tuple
    q: tuple
    k: tuple
    mu0: tuple
    Z: tuple
    lams: tuple
    n2: tuple
    k2: tuple
    mu0_2d: tuple
    circular_n_eff: tuple = field(default=())

    def states_3d(self):
        for n in self.n:
            for q in self.q:
                for k in self.k:
                    for mu0 in self.mu0:
                        for Z in self.Z:
                            yield QuantumState3D(n, q, k, mu0, Z)

    def states_2d(self):
        for n in self.n2:
            for k in self.k2:
                for mu0 in self.mu0_2d:
                    yield QuantumState2D(n, k, mu0)


_F = Fraction
GRIDS = {
    "default": Grid(
        n=tuple(range(5)), q=tuple(range(5)), k=tuple(range(-2, 3)),
        mu0=(_F(0), _F(1, 10), _F(1, 4), _F(1, 2), _F(9, 10)), Z=(1, 2),
        lams=tuple(range(-4, 7)),
        n2=tuple(range(4)), k2=tuple(range(-2, 3)), mu0_2d=(_F(0), _F(1, 4), _F(1, 2)),
        circular_n_eff=(_F(1), _F(3, 2), _F(2), _F(7, 2), _F(10)),
    ),
    "small": Grid(
        n=(0, 1), q=(0, 1), k=(-1, 0), mu0=(_F(0), _F(1, 4), _F(1, 2)), Z=(1, 2),
        lams=tuple(range(-4, 5)),
        n2=(0, 1), k2=(0, 1), mu0_2d=(_F(0), _F(1, 2)),
        circular_n_eff=(_F(1), _F(3, 2)),
    ),
}


def circular_state(n_eff) -> QuantumState3D:
    """A nodeless state with the given effective principal number (k = 0)."""
    n_eff = Fraction(n_eff)
    alpha = n_eff - 1
    q = math.floor(alpha)
    return QuantumState3D(0, q, 0, alpha - q)


def _is_exact(state):
    try:
        state.exact()
    except NotRational:
        return False
    return True


def _moment_checks(state, lams, tol, exact_closed=True):
    reports = []
    cache = {}
    for lam in lams:
        try:
            e = moment(state, lam).value
        except DivergentMoment as err:
            try:
                oracle.oracle_moment(state, lam)
                reports.append(failed_report(f"divergence[{lam}]", state, err))
            except DivergentMoment:
                reports.append(CheckReport(f"divergence[{lam}]", None, None, 0.0, 0.0, 0.0, True, state))
            continue
        try:
            s, qd = oracle.oracle_moment_paths(state, lam)
        except ABCError as err:
            reports.append(failed_report(f"oracle_paths[{lam}]", state, err))
            continue
        cache[lam] = float(s)
        reports.append(make_report(f"oracle_paths[{lam}]", float(s), qd, ORACLE_PATH_TOL, state))
        reports.append(make_report(f"engine_oracle[{lam}]", e, float(s), tol, state))
        if lam in engine.CLOSED_FORMS:
            c = closed_form_moment(state, lam).value
            reports.append(make_report(f"closed_oracle[{lam}]", c, float(s), tol, state))
            if exact_closed and _is_exact(state):
                ce = closed_form_moment(state, lam, EXACT).value
                ee = moment(state, lam, EXACT).value
                reports.append(make_report(f"closed_engine_exact[{lam}]", ce, ee, 0.0, state))
    alpha = float(state.radial_alpha())
    for lam in lams:
        if all(p in cache for p in (lam, lam - 1, lam - 2)) and lam > -(2 * alpha + 1):
            reports.append(residual_check(state, lam, cache))
    return reports


def _closed_2d_checks(state: QuantumState2D, tol):
    """Planar closed forms for the energy and <rho^-1..-3>."""
    st = state.exact()
    at, nt2 = st.alpha_tilde(), st.n_eff2()
    half = Fraction(1, 2)
    forms = {
        -1: lambda: 1 / nt2**2,
        -2: lambda: 1 / (nt2**3 * at),
        -3: lambda: 1 / (nt2**3 * at * (at - half) * (at + half)),
    }
    reports = [make_report("energy_2d", energy_2d(st), -st.Z**2 / (2 * nt2**2), 0.0, state)]
    for lam, f in forms.items():
        try:
            e = moment(st, lam, EXACT).value
        except DivergentMoment:
            continue
        reports.append(make_report(f"closed_2d_exact[{lam}]", f(), e, 0.0, state))
    return reports


def verify_grid(grid: Grid | str = "default", tol: float = DEFAULT_TOL) -> list:
    """Run every identity over the grid; returns the list of reports."""
    if isinstance(grid, str):
        grid = GRIDS[grid]
    reports = []
    for state in grid.states_3d():
        reports.extend(_moment_checks(state, grid.lams, tol))
        reports.extend(virial_suite(state, tol))
        for lam in (0, 1, 2):
            reports.append(kinetic_identity_check(state, lam))
        if float(state.radial_alpha()) > 0:
            reports.append(schwinger_check(state, EXACT, "closed"))
            reports.append(schwinger_check(state, EXACT, "engine"))
            reports.append(schwinger_check(state, FLOAT, "oracle", tol))
        if state.n == 0:
            reports.extend(orbit_checks(state))
            reports.extend(kinetic_ratio_checks(state, tol))
    for n_eff in grid.circular_n_eff:
        st = circular_state(n_eff)
        reports.extend(orbit_checks(st))
        reports.extend(kinetic_ratio_checks(st, tol))
    for state in grid.states_2d():
        reports.extend(_moment_checks(state, grid.lams, tol))
        reports.extend(_closed_2d_checks(state, tol))
    return reports
