"""Exact single-excitation dynamics of the inhomogeneous Dicke model."""

__version__ = "0.1.0"

from .bethe import BetheSpectrum, RootClass, residual, residual_derivative, solve_spectrum
from .dynamics import (
    InitialCondition,
    ObservableTrace,
    evolve,
    expand,
    make_initial,
    photon_amplitude,
    spin_amplitude,
    survival_amplitude,
)
from .eigen import SectorState, darkness, eigenstate
from .model import DisorderKind, DisorderSpec, ModelParams, build_epsilons, make_params, validate

__all__ = [
    "BetheSpectrum",
    "DisorderKind",
    "DisorderSpec",
    "InitialCondition",
    "ModelParams",
    "ObservableTrace",
    "RootClass",
    "SectorState",
    "build_epsilons",
    "darkness",
    "eigenstate",
    "evolve",
    "expand",
    "make_initial",
    "make_params",
    "photon_amplitude",
    "residual",
    "residual_derivative",
    "solve_spectrum",
    "spin_amplitude",
    "survival_amplitude",
    "validate",
]
