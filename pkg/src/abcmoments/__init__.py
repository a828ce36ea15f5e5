"""Radial moments <r^lambda> for the Aharonov-Bohm-Coulomb problem."""

__version__ = "0.1.0"

from .engine import Moment, closed_form_moment, moment, moment_2d, recurrence_residual
from .errors import (
    DivergentMoment,
    DomainError,
    NotCircular,
    NotRational,
    RecurrenceWindow,
    SWaveExcluded,
)
from .model import (
    FluxParam,
    QuantumState2D,
    QuantumState3D,
    effective_alpha,
    energy_2d,
    energy_3d,
    flux_to_mu0,
)
from .oracle import build_wavefunction, kinetic_weighted_integral, oracle_moment

__all__ = [
    "DivergentMoment",
    "DomainError",
    "FluxParam",
    "Moment",
    "NotCircular",
    "NotRational",
    "QuantumState2D",
    "QuantumState3D",
    "RecurrenceWindow",
    "SWaveExcluded",
    "build_wavefunction",
    "closed_form_moment",
    "effective_alpha",
    "energy_2d",
    "energy_3d",
    "flux_to_mu0",
    "kinetic_weighted_integral",
    "moment",
    "moment_2d",
    "oracle_moment",
    "recurrence_residual",
]
