"""Single-rapidity Bethe equation and its complete set of real roots.

In the one-excitation sector every root of

    f(lam) = (lam - omega) / g - sum_j g / (lam - eps_j)

is an eigenenergy. ``f`` increases strictly between consecutive poles, so the
``L + 1`` roots interlace with the spin energies and each one can be isolated
in its own bracket. Inside a bracket we search for the offset from the nearest
anchoring pole rather than for ``lam`` itself, which keeps ``lam - eps_j``
accurate when a confined root hugs a pole.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BracketFailure, ConvergenceFailure, PoleHit
from .model import ModelParams, validate

DEFAULT_TOL = 1e-12
RESIDUAL_TOL = 1e-9  # in units of 1/g
MAX_ITER = 200
MAX_EXPANSIONS = 64
POLE_EPS = 1e-300


class RootClass(str, enum.Enum):
    SEPARATED_LOW = "separated_low"
    CONFINED = "confined"
    SEPARATED_HIGH = "separated_high"


@dataclass(frozen=True, eq=False)
class BetheSpectrum:
    params: ModelParams = field(repr=False)
    roots: np.ndarray
    classes: tuple
    brackets: tuple
    norm_sq: np.ndarray
    detunings: np.ndarray = field(repr=False)  # (L+1, L): lam_alpha - eps_j

    def __len__(self):
        return self.roots.size

    @property
    def confined(self) -> np.ndarray:
        return np.array([c is RootClass.CONFINED for c in self.classes])

    @property
    def darkness(self) -> np.ndarray:
        return 1.0 / self.norm_sq


def _check_off_pole(lam: float, params: ModelParams) -> np.ndarray:
    diff = lam - params.epsilons
    if np.any(np.abs(diff) < POLE_EPS):
        raise PoleHit(f"lambda={lam!r} coincides with a spin energy")
    return diff


def residual(lam: float, params: ModelParams) -> float:
    diff = _check_off_pole(lam, params)
    return (lam - params.omega) / params.g - math.fsum(params.g / diff)


def residual_derivative(lam: float, params: ModelParams) -> float:
    diff = _check_off_pole(lam, params)
    return 1.0 / params.g + math.fsum(params.g / diff**2)


class _OffsetEquation:
    """The Bethe equation written in terms of ``x = lam - eps[anchor]``."""

    def __init__(self, params: ModelParams, anchor: int):
        self.g = params.g
        self.base = params.epsilons[anchor] - params.omega
        self.gaps = params.epsilons - params.epsilons[anchor]

    def __call__(self, x: float):
        r = 1.0 / (x - self.gaps)
        f = (self.base + x) / self.g - self.g * r.sum()
        df = 1.0 / self.g + self.g * (r * r).sum()
        return f, df


def _refine(eq: _OffsetEquation, a: float, b: float, tol: float) -> float:
    """Safeguarded Newton on a bracket where eq(a) < 0 < eq(b)."""
    ftol = RESIDUAL_TOL / eq.g
    x = 0.5 * (a + b)
    for _ in range(MAX_ITER):
        f, df = eq(x)
        if f == 0.0:
            return x
        if f < 0:
            a = x
        else:
            b = x
        x_new = x - f / df
        if not a <= x_new <= b:
            x_new = 0.5 * (a + b)
        step = abs(x_new - x)
        ulp = np.spacing(max(abs(x), abs(x_new)))
        x = x_new
        if (step <= tol and abs(f) <= ftol) or step <= 4 * ulp or (b - a) <= 4 * ulp:
            return _polish(eq, x, a, b)
    raise ConvergenceFailure(f"root in ({a!r}, {b!r}) not converged after {MAX_ITER} iterations")


def _polish(eq: _OffsetEquation, x: float, a: float, b: float) -> float:
    f, df = eq(x)
    x_new = x - f / df
    slack = 4 * np.spacing(max(abs(a), abs(b)))
    return x_new if a - slack <= x_new <= b + slack else x


def _confined_bracket(eq: _OffsetEquation, h: float):
    guard = 1e-3 * h
    for _ in range(MAX_EXPANSIONS):
        lo, hi = guard, h - guard
        if lo < hi and eq(lo)[0] < 0 < eq(hi)[0]:
            return lo, hi
        guard *= 0.1
    raise BracketFailure(f"no sign change in confined interval of width {h!r}")


def _outer_bracket(eq: _OffsetEquation, side: int, w0: float):
    """Bracket for a root at offset ``side * (guard .. W)`` from the outermost pole."""
    width = w0
    for _ in range(MAX_EXPANSIONS):
        if side * eq(side * width)[0] > 0:
            break
        width *= 2.0
    else:
        raise BracketFailure("could not expand bracket for separated root")
    guard = 1e-3 * width
    for _ in range(MAX_EXPANSIONS):
        if side * eq(side * guard)[0] < 0:
            return (-width, -guard) if side < 0 else (guard, width)
        guard *= 0.1
    raise BracketFailure("could not isolate separated root from the band edge")


def solve_spectrum(params: ModelParams, tol: float = DEFAULT_TOL) -> BetheSpectrum:
    """All ``L + 1`` rapidities, ascending, with classes, brackets and norms."""
    validate(params)
    if not tol > 0:
        raise ValueError("tol must be positive")
    eps = params.epsilons
    L = params.L
    w0 = max(params.g * math.sqrt(L), params.width)

    jobs = [(0, -1, None)]
    jobs += [(j, 0, float(eps[j + 1] - eps[j])) for j in range(L - 1)]
    jobs += [(L - 1, +1, None)]

    roots = np.empty(L + 1)
    detunings = np.empty((L + 1, L))
    brackets = []
    for alpha, (anchor, side, h) in enumerate(jobs):
        eq = _OffsetEquation(params, anchor)
        if side == 0:
            lo, hi = _confined_bracket(eq, h)
        else:
            lo, hi = _outer_bracket(eq, side, w0)
        x = _refine(eq, lo, hi, tol)
        roots[alpha] = eps[anchor] + x
        detunings[alpha] = x - eq.gaps
        brackets.append((float(eps[anchor] + lo), float(eps[anchor] + hi)))

    classes = (
        (RootClass.SEPARATED_LOW,)
        + (RootClass.CONFINED,) * (L - 1)
        + (RootClass.SEPARATED_HIGH,)
    )
    g2 = params.g**2
    norm_sq = np.array([1.0 + math.fsum(g2 / row**2) for row in detunings])
    return BetheSpectrum(
        params=params,
        roots=roots,
        classes=classes,
        brackets=tuple(brackets),
        norm_sq=norm_sq,
        detunings=detunings,
    )
