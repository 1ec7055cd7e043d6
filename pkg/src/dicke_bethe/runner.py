"""Scenario execution behind the command line: spectrum, evolve, compare, sweep."""

from __future__ import annotations

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import asymptotics as asy
from . import dynamics as dyn
from . import oracle, report
from .bethe import BetheSpectrum, solve_spectrum
from .config import ConfigError, ScenarioConfig
from .dynamics import ConditionKind, InitialCondition
from .eigen import eigenbasis
from .model import ModelParams

log = logging.getLogger(__name__)

SWEEP_MIN_THRESHOLD = 0.2


@dataclass
class Prepared:
    config: ScenarioConfig
    params: ModelParams
    spectrum: BetheSpectrum
    initial: InitialCondition | None = None
    times: np.ndarray | None = None


def prepare(cfg: ScenarioConfig, dynamics: bool = True) -> Prepared:
    params = cfg.build_params()
    spectrum = solve_spectrum(params)
    if not dynamics:
        return Prepared(cfg, params, spectrum)
    initial = cfg.build_initial(params)
    times = dyn.time_grid(cfg.time_max(params), cfg.steps)
    return Prepared(cfg, params, spectrum, initial, times)


# -- spectrum ---------------------------------------------------------------

SPECTRUM_HEADER = ["alpha", "lambda", "class", "norm_sq", "darkness"]


def spectrum_table(prep: Prepared, with_oracle: bool = False):
    sp = prep.spectrum
    header = list(SPECTRUM_HEADER)
    cols = [range(len(sp)), sp.roots, [c.value for c in sp.classes], sp.norm_sq, sp.darkness]
    summary = {}
    if with_oracle:
        eig = oracle.solve(prep.params)
        diff = sp.roots - eig.values
        header += ["oracle_lambda", "diff", "oracle_darkness"]
        cols += [eig.values, diff, eig.darkness]
        summary["oracle_max_diff"] = float(np.max(np.abs(diff)))
    return header, list(zip(*cols)), summary


def eigenstate_table(prep: Prepared):
    basis = eigenbasis(prep.spectrum)
    header = ["alpha", "photon"] + [f"spin{j}" for j in range(1, prep.params.L + 1)]
    return header, [(a, *row) for a, row in enumerate(basis)]


# -- evolution --------------------------------------------------------------

def _bright(prep: Prepared, ctx: asy.AsymptoticContext) -> asy.BrightStates:
    source = prep.config.raw.get("comparison", {}).get("bright", "exact")
    if source == "continuum":
        return asy.bright_roots(ctx)
    if source != "exact":
        raise ConfigError(f"comparison.bright must be 'exact' or 'continuum', got {source!r}")
    return asy.BrightStates.from_spectrum(prep.spectrum)


def _observable_index(name: str, prep: Prepared):
    """None for the survival/fidelity overlap, else the basis component index."""
    if name in ("survival", "fidelity"):
        return None
    if name == "photon":
        return 0
    return prep.config.spin_outputs(prep.params)[[n for n in prep.config.outputs if n.startswith("spin:")].index(name)]


def exact_observable(name: str, prep: Prepared) -> np.ndarray:
    idx = _observable_index(name, prep)
    if idx is None:
        return dyn.survival_amplitude(prep.initial, prep.spectrum, prep.params, prep.times).values
    if idx == 0:
        return dyn.photon_amplitude(prep.initial, prep.spectrum, prep.params, prep.times).values
    return dyn.spin_amplitude(idx, prep.initial, prep.spectrum, prep.params, prep.times).values


def asymptotic_observable(name: str, prep: Prepared) -> np.ndarray | None:
    """Closed-form companion of an observable, or None when none exists."""
    if prep.params.L < 2:
        return None
    ctx = asy.AsymptoticContext.from_params(prep.params)
    cond, t, eps = prep.initial, prep.times, prep.params.epsilons
    idx = _observable_index(name, prep)
    kind = cond.kind
    if kind is ConditionKind.SINGLE_PHOTON:
        bright = _bright(prep, ctx)
        if idx is None or idx == 0:
            dark, br = asy.photon_survival_asym(t, ctx, bright, eps)
            return dark + br
        return asy.spin_from_photon_asym(idx, t, ctx, bright, eps)
    if idx is None:
        bright = _bright(prep, ctx) if kind is ConditionKind.SINGLE_SPIN else None
        return asy.survival_asym(cond, t, ctx, eps, bright=bright)
    if idx == 0:
        if kind is ConditionKind.SINGLE_SPIN:
            return asy.photon_from_spin_asym(t, ctx, eps[cond.A - 1])
        return asy.bell_photon_asym(t, ctx, eps[cond.A - 1], eps[cond.B - 1], cond.sign)
    if kind is ConditionKind.SINGLE_SPIN and idx == cond.A:
        return asy.survival_asym(cond, t, ctx, eps, bright=_bright(prep, ctx))
    return None


def oracle_states(prep: Prepared) -> np.ndarray:
    eig = oracle.solve(prep.params)
    return oracle.propagate_many(eig, dyn.make_initial(prep.initial, prep.params), prep.times)


def oracle_observable(name: str, prep: Prepared, states: np.ndarray) -> np.ndarray:
    idx = _observable_index(name, prep)
    if idx is None:
        psi0 = dyn.make_initial(prep.initial, prep.params).vector
        return states @ psi0.conj()
    return states[:, idx]


@dataclass
class EvolutionResult:
    prep: Prepared
    traces: dict = field(default_factory=dict)  # name -> column dict
    summary: dict = field(default_factory=dict)


def run_evolution(cfg: ScenarioConfig, asymptotic: bool = False, with_oracle: bool = False) -> EvolutionResult:
    prep = prepare(cfg)
    result = EvolutionResult(prep)
    states = oracle_states(prep) if with_oracle else None
    if states is not None:
        coeffs = dyn.expand(dyn.make_initial(prep.initial, prep.params), prep.spectrum)
        bethe_states = dyn.evolve_many(coeffs, prep.spectrum, prep.times)
        result.summary["oracle_max_state_diff"] = float(np.max(np.abs(bethe_states - states)))
    worst = 0.0
    for name in cfg.outputs:
        exact = exact_observable(name, prep)
        asym = asymptotic_observable(name, prep) if asymptotic else None
        orc = oracle_observable(name, prep, states) if states is not None else None
        if orc is not None:
            worst = max(worst, float(np.max(np.abs(exact - orc))))
        if asym is not None:
            result.summary[f"{name}_asym_rms"] = float(np.sqrt(np.mean((np.abs(exact) - np.abs(asym)) ** 2)))
        result.traces[name] = report.trace_columns(prep.times, exact, asym, orc)
    if states is not None:
        result.summary["oracle_max_diff"] = worst
    return result


def comparison_columns(cfg: ScenarioConfig) -> tuple[Prepared, dict]:
    prep = prepare(cfg)
    out = {}
    for name in cfg.outputs:
        asym = asymptotic_observable(name, prep)
        if asym is None:
            log.info("no closed form for %s with %s start", name, prep.initial.kind.value)
            continue
        exact = np.abs(exact_observable(name, prep))
        asym_abs = np.abs(asym)
        out[name] = {"t": prep.times, "exact_abs": exact, "asym_abs": asym_abs, "diff": exact - asym_abs}
    return prep, out


# -- sweeps -----------------------------------------------------------------

SWEEP_HEADER = [
    "run", "L", "seed", "min_abs", "max_abs_after_decay", "revival_time", "revival_height", "revival_over_2pi_d",
]


def _one_realization(cfg: ScenarioConfig) -> dict:
    prep = prepare(cfg)
    trace = dyn.survival_amplitude(prep.initial, prep.spectrum, prep.params, prep.times)
    a = trace.abs
    rev = dyn.find_revival(trace.times, a)
    dip = np.flatnonzero(a < 0.5 * (1.0 + a.min()))
    late = a[dip[0]:] if dip.size else a
    period = dyn.revival_period(prep.params) if prep.params.L > 1 else float("nan")
    return {
        "L": prep.params.L,
        "seed": cfg.disorder.seed if cfg.disorder else None,
        "min_abs": float(a.min()),
        "max_abs_after_decay": float(late.max()),
        "revival_time": rev.time if rev else None,
        "revival_height": rev.height if rev else None,
        "revival_over_2pi_d": rev.time / period if rev else None,
    }


def sweep_configs(cfg: ScenarioConfig) -> list[ScenarioConfig]:
    spec = cfg.sweep
    seeds = spec.seeds if spec else (cfg.disorder.seed if cfg.disorder else 0,)
    Ls = spec.L if spec and spec.L is not None else (cfg.L,)
    if not seeds or not Ls:
        raise ConfigError("sweep grid is empty")
    return [cfg.with_L(L).with_seed(s) for L in Ls for s in seeds]


def thread_count() -> int:
    raw = os.environ.get("DICKE_THREADS")
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"DICKE_THREADS must be an integer, got {raw!r}")
    return max(1, n)


def linear_fit(x, y) -> tuple[float, float, float]:
    """Least-squares slope, intercept and R^2."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    return float(slope), float(intercept), r2


def run_sweep(cfg: ScenarioConfig, threads: int | None = None):
    configs = sweep_configs(cfg)
    threads = threads or thread_count()
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(_one_realization, configs))
    else:
        rows = [_one_realization(c) for c in configs]
    for i, row in enumerate(rows):
        row["run"] = i
    mins = np.array([r["min_abs"] for r in rows])
    summary = {
        "runs": len(rows),
        "fraction_min_above_0.2": float(np.mean(mins > SWEEP_MIN_THRESHOLD)),
    }
    by_L = {}
    for r in rows:
        if r["revival_time"] is not None:
            by_L.setdefault(r["L"], []).append(r["revival_time"])
    if len(by_L) >= 2:
        Ls = sorted(by_L)
        means = [float(np.mean(by_L[L])) for L in Ls]
        slope, intercept, r2 = linear_fit(Ls, means)
        summary.update(revival_slope=slope, revival_intercept=intercept, revival_r2=r2)
    return rows, summary


# -- file output ------------------------------------------------------------

def write_outputs(name: str, tables: dict, out_dir, gnuplot: bool = False) -> list[Path]:
    """Write ``{suffix: (header, rows)}`` as ``<name>_<suffix>.csv`` files."""
    out_dir = Path(out_dir)
    written, headers = [], {}
    for suffix, (header, rows, comments) in tables.items():
        path = out_dir / f"{name}_{suffix}.csv".replace(":", "")
        report.write_csv(path, header, rows, comments)
        written.append(path)
        headers[path.name] = list(header)
    if gnuplot and headers:
        written.append(report.atomic_write(out_dir / f"{name}.gp", report.gnuplot_script(headers, out_dir)))
    return written
