import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from abcmoments.errors import DomainError, NotRational
from abcmoments.model import (
    FluxParam,
    QuantumState2D,
    QuantumState3D,
    effective_alpha,
    energy_2d,
    energy_3d,
    flux_to_mu0,
)


@pytest.mark.parametrize("phi, mu0", [(0, 0), (0.5, -0.5), (1.0, -1.0)])
def test_flux_to_mu0(phi, mu0):
    assert flux_to_mu0(phi) == mu0


def test_flux_to_mu0_keeps_fractions():
    assert flux_to_mu0(Fraction(1, 3)) == Fraction(-1, 3)
    assert FluxParam.from_flux_quanta(Fraction(1, 2)).mu0 == Fraction(-1, 2)


@pytest.mark.parametrize("bad", [math.inf, -math.inf, math.nan])
def test_flux_to_mu0_rejects_non_finite(bad):
    with pytest.raises(DomainError):
        flux_to_mu0(bad)


@pytest.mark.parametrize(
    "state, alpha",
    [
        (QuantumState3D(0, 0, 0, 0), 0),
        (QuantumState3D(0, 0, 0, 0.5), 0.5),
        (QuantumState3D(1, 2, -1, 0.3), 2.7),
    ],
)
def test_effective_alpha(state, alpha):
    assert effective_alpha(state) == pytest.approx(alpha, abs=1e-15)


def test_n_eff():
    assert QuantumState3D(1, 2, -1, 0.3).n_eff() == pytest.approx(4.7)
    assert QuantumState2D(1, 0, Fraction(1, 4)).n_eff2() == Fraction(7, 4)


@pytest.mark.parametrize(
    "state, E",
    [
        (QuantumState3D(0, 0, 0, 0, 1), -0.5),
        (QuantumState3D(0, 0, 0, 0.5, 1), -1 / 4.5),
        (QuantumState3D(1, 1, -1, 0.5, 2), -4 / (2 * 3.5**2)),
    ],
)
def test_energy_3d(state, E):
    assert energy_3d(state) == pytest.approx(E, rel=1e-15)


@pytest.mark.parametrize(
    "state, E",
    [
        (QuantumState2D(0, 0, 0, 1), -2.0),
        (QuantumState2D(1, 0, 0, 1), -2 / 9),
        (QuantumState2D(0, 1, -1, 1), -2.0),
    ],
)
def test_energy_2d(state, E):
    assert energy_2d(state) == pytest.approx(E, rel=1e-15)


def test_exact_energy():
    assert energy_3d(QuantumState3D(0, 0, 0, Fraction(1, 2)).exact()) == Fraction(-2, 9)


@pytest.mark.parametrize(
    "kwargs",
    [dict(n=-1, q=0, k=0), dict(n=0, q=-1, k=0), dict(n=0, q=0, k=0, Z=0),
     dict(n=0.5, q=0, k=0), dict(n=True, q=0, k=0), dict(n=0, q=0, k=0, flux=math.nan)],
)
def test_invalid_states(kwargs):
    with pytest.raises(DomainError):
        QuantumState3D(**kwargs)


def test_exact_rejects_non_binary_float():
    with pytest.raises(NotRational):
        QuantumState3D(0, 0, 0, 0.1).exact()
    assert QuantumState3D(0, 0, 0, 0.25).exact().mu0 == Fraction(1, 4)


mu_fracs = st.fractions(min_value=-3, max_value=3, max_denominator=50)


@given(
    n=st.integers(0, 6), q=st.integers(0, 6), k=st.integers(-5, 5),
    mu0=mu_fracs, m=st.integers(-6, 6), Z=st.fractions(Fraction(1, 4), 5, max_denominator=8),
)
def test_gauge_shift_exact(n, q, k, mu0, m, Z):
    a = QuantumState3D(n, q, k, mu0, Z)
    b = a.shifted(m)
    assert (a.alpha(), a.n_eff(), energy_3d(a)) == (b.alpha(), b.n_eff(), energy_3d(b))
    a2, b2 = QuantumState2D(n, k, mu0, Z), QuantumState2D(n, k, mu0, Z).shifted(m)
    assert energy_2d(a2) == energy_2d(b2)


@given(n=st.integers(0, 6), q=st.integers(0, 6), k=st.integers(-5, 5),
       mu0=st.integers(-64, 64).map(lambda i: i / 16), m=st.integers(-6, 6))
def test_gauge_shift_float_dyadic(n, q, k, mu0, m):
    a = QuantumState3D(n, q, k, mu0)
    assert energy_3d(a) == energy_3d(a.shifted(m))


@given(mu0=st.floats(0, 0.99), n=st.integers(0, 5), q=st.integers(0, 5))
def test_degeneracy_bit_identical(mu0, n, q):
    # (n+1, q) and (n, q+1) share n_eff
    e1 = energy_3d(QuantumState3D(n + 1, q, 0, mu0))
    e2 = energy_3d(QuantumState3D(n, q + 1, 0, mu0))
    assert e1 == e2


def test_flux_monotone_binding():
    grid = [i / 20 for i in range(20)]
    energies = [energy_3d(QuantumState3D(0, 0, 0, m)) for m in grid]
    assert all(b > a for a, b in zip(energies, energies[1:]))


@pytest.mark.parametrize("n, q, k", [(0, 0, 0), (1, 2, -1), (3, 0, 2), (2, 1, 1)])
def test_flux_free_is_hydrogen(n, q, k):
    l = q + abs(k)
    assert energy_3d(QuantumState3D(n, q, k, 0)) == -1 / (2 * (n + l + 1) ** 2)
