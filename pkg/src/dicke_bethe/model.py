"""Model parameters, disorder generators and basis conventions.

The single-excitation sector is spanned by ``L + 1`` states ordered as
``(photon, spin_1, ..., spin_L)``. Index 0 is always the photon slot and spin
``j`` (1-based) lives at index ``j``. Energies are in units of the cavity
frequency and times in units of its inverse.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DistinctnessViolation,
    IndexOutOfRange,
    InvalidSpec,
    NonAscendingEnergies,
    NonPositiveCoupling,
    RotatingWaveWarning,
)

DISTINCT_TOL = 1e-12
MAX_RESAMPLES = 100
RWA_DETUNING_LIMIT = 0.5


@dataclass(frozen=True, eq=False)
class ModelParams:
    omega: float
    g: float
    epsilons: np.ndarray = field(repr=False)

    def __post_init__(self):
        eps = np.array(self.epsilons, dtype=float).reshape(-1)
        eps.setflags(write=False)
        object.__setattr__(self, "epsilons", eps)
        object.__setattr__(self, "omega", float(self.omega))
        object.__setattr__(self, "g", float(self.g))

    @property
    def L(self) -> int:
        return int(self.epsilons.size)

    @property
    def dim(self) -> int:
        return self.L + 1

    @property
    def width(self) -> float:
        return float(self.epsilons[-1] - self.epsilons[0]) if self.L else 0.0

    @property
    def mean_spacing(self) -> float:
        """Mean level spacing ``d = width / (L - 1)``; zero for a single spin."""
        return self.width / (self.L - 1) if self.L > 1 else 0.0

    def __repr__(self):
        return f"ModelParams(omega={self.omega!r}, g={self.g!r}, L={self.L}, eps=[{self.epsilons[0]:.6g} .. {self.epsilons[-1]:.6g}])"


class DisorderKind(str, enum.Enum):
    EQUALLY_SPACED = "equally_spaced"
    UNIFORM_RANDOM = "uniform_random"
    GAUSSIAN = "gaussian"


@dataclass(frozen=True)
class DisorderSpec:
    kind: DisorderKind = DisorderKind.EQUALLY_SPACED
    center: float = 1.0
    width: float = 0.1
    seed: int = 0
    pin_resonant: bool = False

    def __post_init__(self):
        object.__setattr__(self, "kind", DisorderKind(self.kind))


def _draw(spec: DisorderSpec, L: int, rng: np.random.Generator) -> np.ndarray:
    if spec.kind is DisorderKind.EQUALLY_SPACED:
        if L == 1:
            return np.array([spec.center])
        half = 0.5 * spec.width
        eps = spec.center - half + spec.width * np.arange(L) / (L - 1)
        eps[-1] = spec.center + half
        return eps
    if spec.kind is DisorderKind.UNIFORM_RANDOM:
        return rng.uniform(spec.center - 0.5 * spec.width, spec.center + 0.5 * spec.width, size=L)
    return rng.normal(spec.center, spec.width, size=L)


def _pin(eps: np.ndarray, center: float) -> np.ndarray:
    if np.any(eps == center):
        return eps
    eps = eps.copy()
    eps[nearest_index(eps, center)] = center
    return np.sort(eps)


def _is_distinct(eps: np.ndarray, tol: float) -> bool:
    return eps.size < 2 or bool(np.min(np.diff(eps)) > tol)


def build_epsilons(spec: DisorderSpec, L: int) -> np.ndarray:
    """Spin excitation energies for ``L`` spins, strictly ascending.

    Random kinds are drawn from ``numpy.random.default_rng(spec.seed)`` and
    redrawn from the same stream if two energies collide.
    """
    if L < 1:
        raise InvalidSpec(f"L must be >= 1, got {L}")
    if not np.isfinite(spec.width) or spec.width < 0:
        raise InvalidSpec(f"disorder width must be >= 0, got {spec.width}")
    if spec.kind is not DisorderKind.EQUALLY_SPACED and spec.width == 0 and L > 1:
        raise InvalidSpec("random disorder with zero width cannot give distinct energies")
    tol = DISTINCT_TOL * max(1.0, abs(spec.center))
    rng = np.random.default_rng(spec.seed)
    attempts = 1 if spec.kind is DisorderKind.EQUALLY_SPACED else MAX_RESAMPLES
    for _ in range(attempts):
        eps = np.sort(_draw(spec, L, rng))
        if spec.pin_resonant:
            eps = _pin(eps, spec.center)
        if _is_distinct(eps, tol):
            return eps
    raise DistinctnessViolation(
        f"could not obtain {L} distinct energies (tolerance {tol:g}) for {spec}"
    )


def make_params(spec: DisorderSpec, L: int, omega: float = 1.0, g: float = 0.05) -> ModelParams:
    return ModelParams(omega=omega, g=g, epsilons=build_epsilons(spec, L))


def validate(params: ModelParams) -> None:
    if params.L < 1:
        raise InvalidSpec("at least one spin is required")
    if not (np.isfinite(params.omega) and params.omega > 0):
        raise InvalidSpec(f"omega must be positive, got {params.omega}")
    if not (np.isfinite(params.g) and params.g > 0):
        raise NonPositiveCoupling(f"g must be positive, got {params.g}")
    eps = params.epsilons
    if not np.all(np.isfinite(eps)):
        raise InvalidSpec("spin energies must be finite")
    if eps.size > 1 and not np.all(np.diff(eps) > 0):
        raise NonAscendingEnergies("spin energies must be strictly ascending")
    detuning = float(np.max(np.abs(eps - params.omega)))
    if detuning > RWA_DETUNING_LIMIT * params.omega:
        warnings.warn(
            f"max |eps_j - omega| = {detuning:.3g} exceeds {RWA_DETUNING_LIMIT} omega; "
            "rotating-wave approximation may be poor",
            RotatingWaveWarning,
            stacklevel=2,
        )


def nearest_index(epsilons, target: float) -> int:
    """0-based index of the energy closest to ``target``; ties go to the lower index."""
    eps = np.asarray(epsilons, dtype=float)
    dist = np.abs(eps - target)
    best = dist.min()
    return int(np.flatnonzero(dist <= best + DISTINCT_TOL * max(1.0, abs(target)))[0])


def resonant_spin(params: ModelParams) -> int:
    """1-based label of the spin closest to resonance with the cavity."""
    return nearest_index(params.epsilons, params.omega) + 1


def check_spin(params: ModelParams, m: int) -> int:
    if not 1 <= m <= params.L:
        raise IndexOutOfRange(f"spin index {m} outside [1, {params.L}]")
    return m
