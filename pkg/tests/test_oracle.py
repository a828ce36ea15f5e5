import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from abcmoments import oracle
from abcmoments.engine import moment, recurrence_terms
from abcmoments.errors import DivergentMoment, RecurrenceWindow
from abcmoments.model import QuantumState2D, QuantumState3D
from abcmoments.specfun import gauss_laguerre

F = Fraction
STATES = [
    QuantumState3D(n, q, k, mu, Z)
    for n in range(0, 7, 2)
    for q in (0, 3, 6)
    for k in (-1, 0)
    for mu in (0.0, 0.37, -0.99, 0.99)
    for Z in (1, 2.5)
]


def test_ground_state_wavefunction():
    wf = oracle.build_wavefunction(QuantumState3D(0, 0, 0, 0))
    r = np.linspace(0.01, 10, 50)
    np.testing.assert_allclose(wf(r), 2 * r * np.exp(-r), rtol=1e-14)
    assert wf.norm_constant == pytest.approx(2.0, rel=1e-14)


def test_half_flux_normalization_constant():
    wf = oracle.build_wavefunction(QuantumState3D(0, 0, 0, 0.5))
    s = 2 / 1.5
    assert wf.scale == pytest.approx(s)
    assert wf.norm_constant**2 == pytest.approx(s**4 / math.gamma(4), rel=1e-13)


def test_circular_state_shape():
    # n = 0: u is r^n_eff exp(-Z r / n_eff) up to normalization
    wf = oracle.build_wavefunction(QuantumState3D(0, 2, 1, 0.3, 2))
    r = np.linspace(0.1, 20, 40)
    ratio = wf(r) / (r**wf.n_eff * np.exp(-2 * r / wf.n_eff))
    np.testing.assert_allclose(ratio, ratio[0], rtol=1e-12)


@pytest.mark.parametrize("state", STATES, ids=str)
def test_normalization(state):
    wf = oracle.build_wavefunction(state)
    beta = 2 * wf.alpha + 2
    rule = gauss_laguerre(beta, state.n + 10)
    # direct quadrature of u^2 in the variable t = s r
    r = rule.nodes / wf.scale
    vals = wf(r) ** 2 / (rule.nodes**beta * np.exp(-rule.nodes)) / wf.scale
    assert rule.integrate(vals) == pytest.approx(1.0, abs=1e-12)
    a = 2 * wf.alpha + 1
    closed = math.exp(math.lgamma(state.n + a + 1) - math.lgamma(state.n + 1)) * (2 * state.n + a + 1)
    assert wf.norm_constant**2 * closed / wf.scale ** (a + 2) == pytest.approx(1.0, rel=1e-12)


@pytest.mark.parametrize("state", STATES[::3], ids=str)
def test_ode_residual(state):
    wf = oracle.build_wavefunction(state)
    r = np.geomspace(1e-3, 50 * wf.n_eff**2, 400)
    assert wf.ode_residual(r) < 1e-8


@pytest.mark.parametrize("state", [QuantumState2D(n, k, mu) for n in (0, 2) for k in (0, 1) for mu in (0.0, 0.3)], ids=str)
def test_ode_residual_2d(state):
    wf = oracle.build_wavefunction(state)
    r = np.geomspace(1e-3, 50 * wf.n_eff**2, 400)
    assert wf.ode_residual(r) < 1e-8
    assert wf.alpha * (wf.alpha + 1) == pytest.approx(
        (state.alpha_tilde() - 0.5) * (state.alpha_tilde() + 0.5), abs=1e-15
    )


@pytest.mark.parametrize("n", range(7))
def test_node_count(n):
    assert oracle.build_wavefunction(QuantumState3D(n, 1, 0, 0.4)).interior_zeros() == n


@pytest.mark.parametrize("q, k, mu", [(0, 0, 0.0), (2, -1, 0.3), (1, 1, 0.9)])
def test_orthogonality(q, k, mu):
    wfs = [oracle.build_wavefunction(QuantumState3D(n, q, k, mu)) for n in range(5)]
    for i, a in enumerate(wfs):
        for j, b in enumerate(wfs):
            val = oracle.overlap(a, b)
            if i == j:
                assert val == pytest.approx(1.0, abs=1e-12)
            else:
                assert abs(val) < 1e-10


@pytest.mark.parametrize(
    "state, lam, value",
    [
        (QuantumState3D(0, 0, 0, 0), 1, 1.5),
        (QuantumState3D(0, 0, 0, 0.5), 1, 3.0),
        (QuantumState3D(1, 0, 0, 0), -2, 0.25),
    ],
)
def test_oracle_examples(state, lam, value):
    assert oracle.oracle_moment(state, lam) == pytest.approx(value, rel=1e-12)


def test_oracle_divergence():
    with pytest.raises(DivergentMoment):
        oracle.oracle_moment(QuantumState3D(0, 0, 0, 0), -3)
    with pytest.raises(DivergentMoment):
        oracle.oracle_moment(QuantumState2D(0, 0, 0.5), -3)


@pytest.mark.parametrize("state", STATES[::5], ids=str)
def test_two_paths_agree(state):
    for lam in (-2, -1, 0.5, 1, 3, 6):
        try:
            s, q = oracle.oracle_moment_paths(state, lam)
        except DivergentMoment:
            continue
        assert s == pytest.approx(q, rel=1e-10)


def test_exact_series_matches_float():
    st = QuantumState3D(4, 2, 2, F(9, 10))
    for lam in (-3, 1, 3):
        assert float(oracle.series_moment(st, lam, exact=True)) == pytest.approx(
            oracle.series_moment(st, lam), rel=1e-14
        )
    assert float(oracle.kinetic_monomial_series(st, 1, exact=True)) == pytest.approx(
        oracle.kinetic_series(st, 1), rel=1e-14
    )




@pytest.mark.parametrize(
    "state, lam",
    [(QuantumState3D(2, 1, 1, 0.25), 2.5), (QuantumState3D(1, 0, 0, 0.5), -2.7),
     (QuantumState2D(1, 0, 0.25), -1.3), (QuantumState3D(3, 0, -1, 0.8, 2), 1)],
)
def test_oracle_against_adaptive_quadrature(state, lam):
    mpmath.mp.dps = 30
    alpha = mpmath.mpf(float(state.radial_alpha()))
    nt = mpmath.mpf(float(state.n_eff()))
    s = 2 / nt  # reduced units
    u2 = lambda r: (r ** (alpha + 1) * mpmath.exp(-s * r / 2) * mpmath.laguerre(state.n, 2 * alpha + 1, s * r)) ** 2
    pts = [0, 1, 5, 20, 60, mpmath.inf]
    ref = mpmath.quad(lambda r: r**lam * u2(r), pts) / mpmath.quad(u2, pts)
    assert oracle.oracle_moment(state, lam) == pytest.approx(float(ref), rel=1e-12)


def test_kinetic_examples():
    assert oracle.kinetic_weighted_integral(QuantumState3D(0, 0, 0, 0), 0) == pytest.approx(1.0, rel=1e-14)
    # direct integral of (d/dr 2 r e^-r)^2 = 4 (1 - r)^2 e^-2r
    direct = mpmath.quad(lambda r: 4 * (1 - r) ** 2 * mpmath.exp(-2 * r), [0, mpmath.inf])
    assert float(direct) == pytest.approx(1.0, rel=1e-14)
    st = QuantumState3D(0, 1, 0, 0)
    quad = oracle.kinetic_quadrature(st, 2)
    om = oracle.oracle_moment
    rhs = (1 - 2) * om(st, 0) + 2 * om(st, 1) - om(st, 2) / 4
    assert quad == pytest.approx(rhs, rel=1e-10)


@pytest.mark.parametrize("state", STATES[::4], ids=str)
def test_kinetic_identity(state):
    alpha, nt = float(state.radial_alpha()), float(state.n_eff())
    om = oracle.oracle_moment
    for lam in (0, 1, 2, 4):
        lhs = oracle.kinetic_weighted_integral(state, lam)
        rhs = 2 * om(state, lam - 1) - om(state, lam) / nt**2
        low = lam * (lam - 1) / 2 - alpha * (alpha + 1)
        if low:
            rhs += low * om(state, lam - 2)
        assert lhs == pytest.approx(rhs, rel=1e-9)


def test_kinetic_window():
    with pytest.raises(RecurrenceWindow):
        oracle.kinetic_weighted_integral(QuantumState3D(0, 0, 0, 0), -1)
    with pytest.raises(RecurrenceWindow):
        oracle.kinetic_weighted_integral(QuantumState2D(0, 0, 0), 0)


def test_engine_oracle_spot_check():
    for state in STATES[::7]:
        for lam in range(-4, 7):
            try:
                e = moment(state, lam).value
            except DivergentMoment:
                continue
            assert e == pytest.approx(oracle.oracle_moment(state, lam), rel=1e-8)


@pytest.mark.parametrize("lam", [2.5, 0.3, -0.7, -1.9])
@pytest.mark.parametrize("state", [QuantumState3D(2, 1, 1, 0.25), QuantumState3D(0, 3, -1, 0.6, 2)], ids=str)
def test_recurrence_holds_for_real_lambda(state, lam):
    om = [oracle.oracle_moment(state, lam - j) for j in (2, 1, 0)]
    terms = recurrence_terms(state, lam, *om)
    assert abs(sum(terms)) < 1e-10 * sum(abs(t) for t in terms)
