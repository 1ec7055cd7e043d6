"""Normalized Bethe eigenstates in the (photon, spin_1..spin_L) basis."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bethe import BetheSpectrum, residual, residual_derivative
from .errors import NotARoot
from .model import ModelParams

ROOT_CHECK_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class SectorState:
    photon_amp: complex
    spin_amps: np.ndarray

    def __post_init__(self):
        spins = np.array(self.spin_amps, dtype=complex).reshape(-1)
        spins.setflags(write=False)
        object.__setattr__(self, "spin_amps", spins)
        object.__setattr__(self, "photon_amp", complex(self.photon_amp))

    @classmethod
    def from_vector(cls, vec) -> "SectorState":
        vec = np.asarray(vec)
        return cls(vec[0], vec[1:])

    @property
    def vector(self) -> np.ndarray:
        return np.concatenate(([self.photon_amp], self.spin_amps))

    @property
    def L(self) -> int:
        return self.spin_amps.size

    def norm(self) -> float:
        return float(np.linalg.norm(self.vector))

    def overlap(self, other: "SectorState") -> complex:
        """<self|other>."""
        return complex(np.vdot(self.vector, other.vector))


def _norm_sq(g: float, detunings: np.ndarray) -> float:
    # compensated sum: a near-pole amplitude must not swamp the others
    return 1.0 + math.fsum((g / detunings) ** 2)


def eigenstate(lam: float, params: ModelParams) -> tuple[SectorState, float]:
    """Normalized eigenstate for a solved rapidity and its unnormalized norm squared."""
    newton_step = abs(residual(lam, params) / residual_derivative(lam, params))
    if newton_step > ROOT_CHECK_TOL * max(1.0, abs(lam)):
        raise NotARoot(f"lambda={lam!r} is not a root (Newton correction {newton_step:.3g})")
    return _state_from_detunings(params.g, lam - params.epsilons)


def _state_from_detunings(g: float, detunings: np.ndarray) -> tuple[SectorState, float]:
    amps = g / detunings
    nsq = _norm_sq(g, detunings)
    scale = 1.0 / math.sqrt(nsq)
    return SectorState(scale, amps * scale), nsq


def darkness(norm_sq: float) -> float:
    """Photon weight 1/<Phi|Phi> of an eigenstate; small means dark."""
    if norm_sq < 1.0:
        raise ValueError(f"norm_sq must be >= 1, got {norm_sq}")
    return 1.0 / norm_sq


def eigenbasis(spectrum: BetheSpectrum) -> np.ndarray:
    """Real ``(L+1, L+1)`` matrix whose row ``alpha`` is the normalized eigenstate.

    The photon component of every row is positive.
    """
    g = spectrum.params.g
    amps = g / spectrum.detunings
    scale = 1.0 / np.sqrt(spectrum.norm_sq)
    return np.hstack([scale[:, None], amps * scale[:, None]])


def eigenstates(spectrum: BetheSpectrum) -> list[SectorState]:
    return [SectorState.from_vector(row) for row in eigenbasis(spectrum)]


def unnormalized_overlap(spectrum: BetheSpectrum, a: int, b: int) -> float:
    """<Phi_a|Phi_b> for unnormalized Bethe states; zero for a != b."""
    g2 = spectrum.params.g ** 2
    return 1.0 + math.fsum(g2 / (spectrum.detunings[a] * spectrum.detunings[b]))
