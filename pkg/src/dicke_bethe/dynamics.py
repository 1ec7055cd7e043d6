"""Exact time evolution by spectral expansion over Bethe eigenstates.

Every observable is a finite sum over the ``L + 1`` eigenstates,

    <x|psi(t)> = sum_alpha C_alpha exp(-i lam_alpha t) <x|phi_alpha>,

so traces are exact at any time and nothing is integrated step by step.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .bethe import BetheSpectrum
from .eigen import SectorState, eigenbasis
from .errors import IndexOutOfRange, InvalidSpec
from .model import ModelParams, check_spin


class ConditionKind(str, enum.Enum):
    SINGLE_SPIN = "single_spin"
    SINGLE_PHOTON = "single_photon"
    BELL = "bell"


@dataclass(frozen=True)
class InitialCondition:
    kind: ConditionKind
    A: int | None = None
    B: int | None = None
    sign: int = +1

    def __post_init__(self):
        object.__setattr__(self, "kind", ConditionKind(self.kind))
        if self.kind is ConditionKind.BELL:
            if self.A is None or self.B is None:
                raise InvalidSpec("Bell condition needs spins A and B")
            if self.A == self.B:
                raise InvalidSpec("Bell condition needs A != B")
            if self.sign not in (1, -1):
                raise InvalidSpec(f"Bell sign must be +1 or -1, got {self.sign}")
        elif self.kind is ConditionKind.SINGLE_SPIN and self.A is None:
            raise InvalidSpec("single-spin condition needs spin A")

    @classmethod
    def single_spin(cls, A: int) -> "InitialCondition":
        return cls(ConditionKind.SINGLE_SPIN, A=A)

    @classmethod
    def single_photon(cls) -> "InitialCondition":
        return cls(ConditionKind.SINGLE_PHOTON)

    @classmethod
    def bell(cls, A: int, B: int, sign: int = +1) -> "InitialCondition":
        return cls(ConditionKind.BELL, A=A, B=B, sign=sign)

    def swapped(self) -> "InitialCondition":
        if self.kind is not ConditionKind.BELL:
            return self
        return InitialCondition(self.kind, A=self.B, B=self.A, sign=self.sign)

    @property
    def label(self) -> str:
        if self.kind is ConditionKind.SINGLE_SPIN:
            return f"spin{self.A}"
        if self.kind is ConditionKind.SINGLE_PHOTON:
            return "photon"
        return f"bell{'+' if self.sign > 0 else '-'}_{self.A}_{self.B}"


@dataclass(frozen=True, eq=False)
class ObservableTrace:
    times: np.ndarray
    values: np.ndarray
    label: str

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        v = np.asarray(self.values, dtype=complex)
        if t.shape != v.shape or t.ndim != 1:
            raise InvalidSpec("times and values must be 1-d arrays of equal length")
        if t.size > 1 and not np.all(np.diff(t) > 0):
            raise InvalidSpec("times must be strictly ascending")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", v)

    @property
    def abs(self) -> np.ndarray:
        return np.abs(self.values)

    def __len__(self):
        return self.times.size


def make_initial(cond: InitialCondition, params: ModelParams) -> SectorState:
    vec = np.zeros(params.dim, dtype=complex)
    if cond.kind is ConditionKind.SINGLE_PHOTON:
        vec[0] = 1.0
    elif cond.kind is ConditionKind.SINGLE_SPIN:
        vec[check_spin(params, cond.A)] = 1.0
    else:
        check_spin(params, cond.A)
        check_spin(params, cond.B)
        vec[cond.A] = 1.0 / math.sqrt(2.0)
        vec[cond.B] = cond.sign / math.sqrt(2.0)
    return SectorState.from_vector(vec)


def expand(state: SectorState, spectrum: BetheSpectrum, params: ModelParams | None = None) -> np.ndarray:
    """Coefficients ``C_alpha = <phi_alpha|psi>`` (eigenstates are real)."""
    basis = eigenbasis(spectrum)
    vec = state.vector
    if vec.size != basis.shape[1]:
        raise IndexOutOfRange(f"state has {vec.size} components, spectrum needs {basis.shape[1]}")
    return basis @ vec


def _phases(spectrum: BetheSpectrum, times) -> np.ndarray:
    t = np.atleast_1d(np.asarray(times, dtype=float))
    return np.exp(-1j * np.outer(t, spectrum.roots))


def evolve(coeffs, spectrum: BetheSpectrum, t: float) -> SectorState:
    basis = eigenbasis(spectrum)
    c_t = np.asarray(coeffs) * np.exp(-1j * spectrum.roots * t)
    return SectorState.from_vector(basis.T @ c_t)


def evolve_many(coeffs, spectrum: BetheSpectrum, times) -> np.ndarray:
    """State vectors at each time, shape ``(len(times), L+1)``."""
    basis = eigenbasis(spectrum)
    return (_phases(spectrum, times) * np.asarray(coeffs)) @ basis


def _coeffs(cond: InitialCondition, spectrum: BetheSpectrum, params: ModelParams) -> np.ndarray:
    return expand(make_initial(cond, params), spectrum, params)


def survival_amplitude(cond, spectrum, params, times) -> ObservableTrace:
    """<psi(0)|psi(t)>; for Bell initial states this is the fidelity amplitude."""
    c = _coeffs(cond, spectrum, params)
    weights = np.abs(c) ** 2
    label = "fidelity" if cond.kind is ConditionKind.BELL else "survival"
    return ObservableTrace(times, _phases(spectrum, times) @ weights, label)


def component_amplitude(index: int, cond, spectrum, params, times) -> np.ndarray:
    c = _coeffs(cond, spectrum, params)
    column = eigenbasis(spectrum)[:, index]
    return _phases(spectrum, times) @ (c * column)


def photon_amplitude(cond, spectrum, params, times) -> ObservableTrace:
    return ObservableTrace(times, component_amplitude(0, cond, spectrum, params, times), "photon")


def spin_amplitude(m: int, cond, spectrum, params, times) -> ObservableTrace:
    check_spin(params, m)
    return ObservableTrace(times, component_amplitude(m, cond, spectrum, params, times), f"spin:{m}")


def time_grid(t_max: float, steps: int) -> np.ndarray:
    if steps < 2 or not t_max > 0:
        raise InvalidSpec("time grid needs steps >= 2 and t_max > 0")
    return np.linspace(0.0, t_max, steps)


def revival_period(params: ModelParams) -> float:
    """``2 pi / d``, the first revival time of the triangle-wave survival."""
    d = params.mean_spacing
    if d <= 0:
        raise InvalidSpec("revival period needs at least two spins")
    return 2.0 * math.pi / d


@dataclass(frozen=True)
class Revival:
    time: float
    height: float
    index: int


def find_revival(times, values) -> Revival | None:
    """First revival peak of ``|values|`` after the initial decay.

    Uses two levels between the starting value and the global minimum: the
    trace has to drop below the lower one, and the revival is the maximum of
    the first later stretch that climbs above the upper one (the stretch ends
    when the trace falls below the lower level again).
    """
    a = np.abs(np.asarray(values))
    t = np.asarray(times)
    floor = a.min()
    low = floor + 0.25 * (a[0] - floor)
    high = floor + 0.5 * (a[0] - floor)
    below = np.flatnonzero(a < low)
    if below.size == 0:
        return None
    start = below[0]
    above = np.flatnonzero(a[start:] >= high)
    if above.size == 0:
        return None
    seg_start = start + above[0]
    after = np.flatnonzero(a[seg_start:] < low)
    seg_end = seg_start + after[0] if after.size else a.size
    i = seg_start + int(np.argmax(a[seg_start:seg_end]))
    return Revival(time=float(t[i]), height=float(a[i]), index=int(i))
