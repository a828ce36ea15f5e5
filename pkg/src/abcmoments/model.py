"""Quantum-number bookkeeping and exact spectra for the 3D and 2D systems.

Conventions: lengths in units of a0/Z, energies in units of e^2/a0, and
hbar^2/m = e^2 a0 wherever it appears. The flux enters only through the
signed factor ``mu0``; every observable depends on ``|k + mu0|``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational, Real
from typing import Union

from .errors import DomainError, NotRational

Number = Union[int, float, Fraction]


def flux_to_mu0(flux_quanta: Real) -> Real:
    """Convert a flux in units of hc/e into the signed factor mu0 = -flux."""
    if isinstance(flux_quanta, Rational):
        return -flux_quanta
    if not math.isfinite(flux_quanta):
        raise DomainError(f"flux must be finite, got {flux_quanta!r}")
    return -float(flux_quanta)


def _check_real(name, value):
    if isinstance(value, bool) or not isinstance(value, Real):
        raise DomainError(f"{name} must be a real number, got {value!r}")
    if not isinstance(value, Rational) and not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")


def _check_index(name, value, nonneg=True):
    if isinstance(value, bool) or not isinstance(value, int):
        raise DomainError(f"{name} must be an integer, got {value!r}")
    if nonneg and value < 0:
        raise DomainError(f"{name} must be >= 0, got {value}")


def to_fraction(x) -> Fraction:
    """Exact rational value of ``x``; floats are accepted only if they are
    integers or exact binary fractions with a short denominator."""
    if isinstance(x, Rational):
        return Fraction(x)
    f = Fraction(x)
    if f.denominator > 2**20:
        raise NotRational(f"{x!r} is not an exact short binary fraction")
    return f


def _is_rational(x) -> bool:
    return isinstance(x, Rational)


@dataclass(frozen=True)
class FluxParam:
    mu0: Number = 0

    def __post_init__(self):
        _check_real("mu0", self.mu0)

    @classmethod
    def from_flux_quanta(cls, phi) -> "FluxParam":
        return cls(flux_to_mu0(phi))


def _as_flux(flux) -> FluxParam:
    return flux if isinstance(flux, FluxParam) else FluxParam(flux)


@dataclass(frozen=True)
class QuantumState3D:
    """Bound state (n, q, k) of the 3D Coulomb problem threaded by a flux line.

    ``flux`` may be given as a bare number, which is taken to be mu0.
    """

    n: int
    q: int
    k: int
    flux: FluxParam = FluxParam()
    Z: Number = 1

    def __post_init__(self):
        object.__setattr__(self, "flux", _as_flux(self.flux))
        _check_index("n", self.n)
        _check_index("q", self.q)
        _check_index("k", self.k, nonneg=False)
        _check_real("Z", self.Z)
        if self.Z <= 0:
            raise DomainError(f"Z must be positive, got {self.Z}")
        frac = abs(self.k + self.mu0)
        object.__setattr__(self, "_alpha", self.q + frac)
        # integer part first: one rounding, so equal n_eff means equal bits
        object.__setattr__(self, "_n_eff", (self.n + self.q + 1) + frac)

    @property
    def mu0(self):
        return self.flux.mu0

    @property
    def dim(self) -> int:
        return 3

    def alpha(self):
        """Effective angular quantum number q + |k + mu0|."""
        return self._alpha

    def n_eff(self):
        """Effective principal quantum number n + alpha + 1."""
        return self._n_eff

    # Uniform radial-problem view shared with the 2D state.
    def radial_alpha(self):
        return self.alpha()

    def exact(self) -> "QuantumState3D":
        """Copy with mu0 and Z as Fractions; raises NotRational if impossible."""
        if _is_rational(self.mu0) and _is_rational(self.Z):
            return self
        return QuantumState3D(
            self.n, self.q, self.k, FluxParam(to_fraction(self.mu0)), to_fraction(self.Z)
        )

    def shifted(self, m: int) -> "QuantumState3D":
        """Relabel as (k + m, mu0 - m); physically the same state."""
        return QuantumState3D(self.n, self.q, self.k + m, FluxParam(self.mu0 - m), self.Z)


@dataclass(frozen=True)
class QuantumState2D:
    """Bound state (n, k) of the planar Coulomb problem with a flux line."""

    n: int
    k: int
    flux: FluxParam = FluxParam()
    Z: Number = 1

    def __post_init__(self):
        object.__setattr__(self, "flux", _as_flux(self.flux))
        _check_index("n", self.n)
        _check_index("k", self.k, nonneg=False)
        _check_real("Z", self.Z)
        if self.Z <= 0:
            raise DomainError(f"Z must be positive, got {self.Z}")
        at = abs(self.k + self.mu0)
        half = Fraction(1, 2) if isinstance(at, Rational) else 0.5
        object.__setattr__(self, "_alpha_tilde", at)
        object.__setattr__(self, "_n_eff2", (self.n + half) + at)
        object.__setattr__(self, "_radial_alpha", at - half)

    @property
    def mu0(self):
        return self.flux.mu0

    @property
    def dim(self) -> int:
        return 2

    def alpha_tilde(self):
        return self._alpha_tilde

    def n_eff2(self):
        return self._n_eff2

    def n_eff(self):
        return self.n_eff2()

    def radial_alpha(self):
        """The 3D-equivalent angular number alpha_tilde - 1/2."""
        return self._radial_alpha

    def exact(self) -> "QuantumState2D":
        if _is_rational(self.mu0) and _is_rational(self.Z):
            return self
        return QuantumState2D(
            self.n, self.k, FluxParam(to_fraction(self.mu0)), to_fraction(self.Z)
        )

    def shifted(self, m: int) -> "QuantumState2D":
        return QuantumState2D(self.n, self.k + m, FluxParam(self.mu0 - m), self.Z)


State = Union[QuantumState3D, QuantumState2D]


def effective_alpha(state: QuantumState3D):
    return state.alpha()


def _energy(Z, nt):
    return -Z * Z / (2 * nt * nt)


def energy_3d(state: QuantumState3D):
    """Bound-state energy -Z^2 / (2 n_eff^2) in units of e^2/a0."""
    return _energy(state.Z, state.n_eff())


def energy_2d(state: QuantumState2D):
    """Planar bound-state energy -Z^2 / (2 (n + |k + mu0| + 1/2)^2)."""
    return _energy(state.Z, state.n_eff2())


def energy(state: State):
    return energy_3d(state) if state.dim == 3 else energy_2d(state)
