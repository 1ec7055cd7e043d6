"""Large-L closed forms for an equally spaced band of spin energies.

Used to check the exact dynamics and to draw the explicit curves next to the
numerical ones. ``d`` is the level spacing, ``N`` the number of Fourier terms
kept when a series is evaluated literally (sums run over ``n = 0..N``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .bethe import BetheSpectrum
from .dynamics import ConditionKind, InitialCondition
from .errors import BracketFailure, InvalidSpec, OutOfRange, UnsupportedCondition
from .model import ModelParams

DEFAULT_TERMS = 10_000
VALIDITY_MARGIN = 5.0  # separated root must sit this many spacings outside the band
_CHUNK = 256


@dataclass(frozen=True)
class AsymptoticContext:
    d: float
    g: float
    omega: float
    L: int
    epsilon_1: float
    epsilon_L: float
    series_terms: int = DEFAULT_TERMS

    def __post_init__(self):
        if not self.d > 0:
            raise InvalidSpec("level spacing d must be positive")
        if self.series_terms < 1:
            raise InvalidSpec("series_terms must be >= 1")
        if not self.epsilon_1 < self.epsilon_L:
            raise InvalidSpec("epsilon_1 must be below epsilon_L")

    @classmethod
    def from_params(cls, params: ModelParams, series_terms: int = DEFAULT_TERMS) -> "AsymptoticContext":
        if params.L < 2:
            raise InvalidSpec("asymptotic forms need at least two spins")
        return cls(
            d=params.mean_spacing,
            g=params.g,
            omega=params.omega,
            L=params.L,
            epsilon_1=float(params.epsilons[0]),
            epsilon_L=float(params.epsilons[-1]),
            series_terms=series_terms,
        )

    @property
    def width(self) -> float:
        return self.epsilon_L - self.epsilon_1

    @property
    def period(self) -> float:
        """Period 4 pi / d of the triangle and square waves."""
        return 4.0 * math.pi / self.d


# -- confined roots ---------------------------------------------------------

def _edge_log(eps_alpha, ctx: AsymptoticContext):
    eps_alpha = np.asarray(eps_alpha, dtype=float)
    if np.any(eps_alpha <= ctx.epsilon_1) or np.any(eps_alpha >= ctx.epsilon_L):
        raise OutOfRange("energy must lie strictly inside the band")
    return np.log((ctx.epsilon_L - eps_alpha) / (eps_alpha - ctx.epsilon_1))


def delta_alpha(eps_alpha, ctx: AsymptoticContext):
    """Offset of the confined root above ``eps_alpha``; always in (0, d)."""
    x = ((ctx.d / ctx.g**2) * (np.asarray(eps_alpha) - ctx.omega) + _edge_log(eps_alpha, ctx)) / math.pi
    arccot = 0.5 * math.pi - np.arctan(x)
    return ctx.d / math.pi * arccot


def dark_norm(eps_alpha, ctx: AsymptoticContext):
    log = _edge_log(eps_alpha, ctx)
    return ctx.g**2 * math.pi**2 / ctx.d**2 * (1.0 + (log / math.pi) ** 2)


# -- separated roots --------------------------------------------------------

@dataclass(frozen=True)
class BrightStates:
    """The two separated roots with their unnormalized norms."""

    low: float
    high: float
    norm_low: float
    norm_high: float
    valid_low: bool = True
    valid_high: bool = True

    @property
    def roots(self) -> tuple[float, float]:
        return self.low, self.high

    @property
    def norms(self) -> tuple[float, float]:
        return self.norm_low, self.norm_high

    @classmethod
    def from_spectrum(cls, spectrum: BetheSpectrum) -> "BrightStates":
        return cls(
            low=float(spectrum.roots[0]),
            high=float(spectrum.roots[-1]),
            norm_low=float(spectrum.norm_sq[0]),
            norm_high=float(spectrum.norm_sq[-1]),
        )


def bright_norm(lam, ctx: AsymptoticContext):
    return 1.0 + ctx.g**2 * ctx.L / ((lam - ctx.epsilon_1) * (lam - ctx.epsilon_L))


def bright_roots(ctx: AsymptoticContext, tol: float = 1e-13) -> BrightStates:
    """Solve the continuum equation for the roots below and above the band.

    ``lam - omega = (g^2 L / width) * ln((lam - eps_1) / (lam - eps_L))``.
    The left side minus the right side increases on both sides of the band.
    """
    coupling = ctx.g**2 * ctx.L / ctx.width

    def h(lam):
        return lam - ctx.omega - coupling * math.log((lam - ctx.epsilon_1) / (lam - ctx.epsilon_L))

    def solve(edge, side):
        reach = max(ctx.g * math.sqrt(ctx.L), ctx.width)
        for _ in range(64):
            far = edge + side * reach
            if side * h(far) > 0:
                break
            reach *= 2.0
        else:
            raise BracketFailure("continuum bright-root equation: no sign change")
        near = edge + side * reach * 1e-3
        for _ in range(64):
            if near != edge and side * h(near) < 0:
                break
            near = edge + 0.1 * (near - edge)
        else:
            raise BracketFailure("continuum bright-root equation: root too close to band edge")
        a, b = sorted((near, far))
        return brentq(h, a, b, xtol=tol, rtol=4 * np.finfo(float).eps)

    low = solve(ctx.epsilon_1, -1)
    high = solve(ctx.epsilon_L, +1)
    margin = VALIDITY_MARGIN * ctx.d
    return BrightStates(
        low=low,
        high=high,
        norm_low=float(bright_norm(low, ctx)),
        norm_high=float(bright_norm(high, ctx)),
        valid_low=(ctx.epsilon_1 - low) >= margin,
        valid_high=(high - ctx.epsilon_L) >= margin,
    )


# -- Fourier waves ----------------------------------------------------------

def _series(t, d: float, terms: int, kind: str) -> np.ndarray:
    t = np.atleast_1d(np.asarray(t, dtype=float))
    k = 2 * np.arange(terms + 1) + 1.0
    out = np.empty(t.shape)
    for start in range(0, t.size, _CHUNK):
        arg = np.outer(t[start:start + _CHUNK] * d / 2.0, k)
        if kind == "cos":
            out[start:start + _CHUNK] = (np.cos(arg) / k**2).sum(axis=1)
        else:
            out[start:start + _CHUNK] = (np.sin(arg) / k).sum(axis=1)
    return out


def triangle_series(t, ctx: AsymptoticContext) -> np.ndarray:
    return 8.0 / math.pi**2 * _series(t, ctx.d, ctx.series_terms, "cos")


def triangle_closed(t, ctx: AsymptoticContext) -> np.ndarray:
    x = np.asarray(t, dtype=float) * ctx.d / 2.0
    folded = np.abs(np.mod(x + math.pi, 2 * math.pi) - math.pi)
    return 1.0 - 2.0 * folded / math.pi


def triangle(t, ctx: AsymptoticContext, series: bool = False):
    """Unit triangle wave of period 4 pi / d: 1 at t = 0, -1 at t = 2 pi / d."""
    return triangle_series(t, ctx) if series else triangle_closed(t, ctx)


def square_series(t, ctx: AsymptoticContext) -> np.ndarray:
    return _series(t, ctx.d, ctx.series_terms, "sin")


def square_closed(t, ctx: AsymptoticContext) -> np.ndarray:
    x = np.asarray(t, dtype=float) * ctx.d / 2.0
    return 0.25 * math.pi * np.sign(np.sin(x))


def square(t, ctx: AsymptoticContext, series: bool = False):
    """``sum_n sin((2n+1) t d / 2) / (2n+1)``, a square wave of height pi/4."""
    return square_series(t, ctx) if series else square_closed(t, ctx)


# -- observables ------------------------------------------------------------

def _bright_spin_correction(t, eps_a: float, ctx: AsymptoticContext, bright: BrightStates):
    t = np.asarray(t, dtype=float)
    total = np.zeros(t.shape, dtype=complex)
    for lam, nsq in zip(bright.roots, bright.norms):
        weight = (1.0 / ctx.L) * ctx.g**2 * ctx.L / (lam - eps_a) ** 2 / nsq
        total += np.exp(-1j * eps_a * t) * np.exp(-1j * t * (lam - eps_a)) * weight
    return total


def survival_asym(cond: InitialCondition, t, ctx: AsymptoticContext, epsilons,
                  bright: BrightStates | None = None, series: bool = False):
    """Explicit survival (or Bell fidelity) amplitude.

    Single spin: triangle wave with carrier ``exp(-i eps_A t)``, plus the
    separated-root correction when ``bright`` is given. Bell: the two-spin
    form mixing the triangle and square waves.
    """
    t = np.asarray(t, dtype=float)
    eps = np.asarray(epsilons, dtype=float)
    if cond.kind is ConditionKind.SINGLE_SPIN:
        eps_a = eps[cond.A - 1]
        value = np.exp(-1j * eps_a * t) * triangle(t, ctx, series)
        if bright is not None:
            value = value + _bright_spin_correction(t, eps_a, ctx, bright)
        return value
    if cond.kind is ConditionKind.BELL:
        eps_a, eps_b = eps[cond.A - 1], eps[cond.B - 1]
        half = 0.5 * (eps_b - eps_a) * t
        # d/(eps_A - eps_B) * sin((eps_B - eps_A) t / 2), finite as eps_B -> eps_A
        sin_term = -0.5 * ctx.d * t * np.sinc(half / math.pi)
        cos_series = math.pi**2 / 8.0 * triangle(t, ctx, series)
        inner = np.cos(half) * cos_series + cond.sign * sin_term * square(t, ctx, series)
        return 8.0 / math.pi**2 * np.exp(-0.5j * (eps_a + eps_b) * t) * inner
    raise UnsupportedCondition("use photon_survival_asym for a single-photon start")


def photon_survival_asym(t, ctx: AsymptoticContext, bright: BrightStates, epsilons):
    """Photon amplitude for a single-photon start split into dark and bright parts.

    Returns ``(dark, bright)`` arrays; their sum is the explicit amplitude.
    """
    t = np.asarray(t, dtype=float)
    eps = np.asarray(epsilons, dtype=float)[: ctx.L - 1]
    with np.errstate(divide="ignore"):
        log = np.log((ctx.epsilon_L - eps) / (eps - ctx.epsilon_1))
    weights = 1.0 / (1.0 + (log / math.pi) ** 2)
    prefactor = ctx.d**2 / (math.pi**2 * ctx.g**2)
    dark = prefactor * np.exp(-0.5j * ctx.d * t) * (np.exp(-1j * np.outer(t, eps)) @ weights)
    bright_part = np.zeros(t.shape, dtype=complex)
    for lam in bright.roots:
        bright_part += np.exp(-1j * lam * t) / bright_norm(lam, ctx)
    return dark.reshape(t.shape), bright_part


def spin_from_photon_asym(m: int, t, ctx: AsymptoticContext, bright: BrightStates, epsilons):
    """Amplitude of spin ``m`` after a single-photon start (dark square wave + bright)."""
    t = np.asarray(t, dtype=float)
    eps_m = float(np.asarray(epsilons)[m - 1])
    value = 4.0 * ctx.d / (math.pi**2 * ctx.g) * np.exp(-1j * eps_m * t) * square(t, ctx)
    for lam in bright.roots:
        value = value + np.exp(-1j * lam * t) / bright_norm(lam, ctx) * ctx.g / (lam - eps_m)
    return value


def photon_from_spin_asym(t, ctx: AsymptoticContext, eps_a: float, series: bool = False):
    """Photon amplitude after a single-spin start: square wave of height d/(pi g)."""
    t = np.asarray(t, dtype=float)
    return 4.0 * ctx.d / (ctx.g * math.pi**2) * np.exp(-1j * eps_a * t) * square(t, ctx, series)


def bell_photon_asym(t, ctx: AsymptoticContext, eps_a: float, eps_b: float, sign: int):
    t = np.asarray(t, dtype=float)
    pair = np.exp(-1j * eps_a * t) + sign * np.exp(-1j * eps_b * t)
    return 2.0 * math.sqrt(2.0) / math.pi**2 * (ctx.d / ctx.g) * pair * square(t, ctx)
