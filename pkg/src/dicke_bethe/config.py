"""Scenario configuration files (TOML).

A file describes one scenario, or several under ``[[scenario]]``; top-level
tables act as defaults that each scenario overrides key by key::

    name = "fig2d"
    command = "evolve"
    outputs = ["survival", "photon"]

    [model]
    omega = 1.0
    g = 0.05
    L = 20
    [model.disorder]
    kind = "equally_spaced"   # or uniform_random, gaussian
    center = 1.0
    width = 0.1

    [initial]
    kind = "single_spin"      # or single_photon, bell
    A = "resonant"            # 1-based index or "resonant"

    [times]
    t_max = "auto"            # number, or "auto" = periods * 4 pi / d
    steps = 2000

    [comparison]
    asymptotic = true
    oracle = false
"""

from __future__ import annotations

import copy
import math
import re
import sys
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .dynamics import ConditionKind, InitialCondition
from .errors import InvalidSpec
from .model import DisorderKind, DisorderSpec, ModelParams, build_epsilons, resonant_spin

COMMANDS = ("spectrum", "evolve", "compare", "sweep")
DEFAULT_PERIODS = 1.25
DEFAULT_STEPS = 2000
_SPIN_OUTPUT = re.compile(r"spin:(\d+|resonant)$")


class ConfigError(InvalidSpec):
    pass


@dataclass(frozen=True)
class SweepSpec:
    seeds: tuple[int, ...] = (0,)
    L: tuple[int, ...] | None = None  # None: use the scenario's own L


@dataclass(frozen=True)
class ScenarioConfig:
    name: str
    command: str
    omega: float
    g: float
    L: int
    disorder: DisorderSpec | None
    epsilons: tuple[float, ...] | None
    initial: dict
    t_max: float | str
    periods: float
    steps: int
    outputs: tuple[str, ...]
    asymptotic: bool = False
    oracle: bool = False
    sweep: SweepSpec | None = None
    raw: dict = field(default_factory=dict, repr=False, compare=False)

    def with_seed(self, seed: int) -> "ScenarioConfig":
        if self.disorder is None:
            return self
        return replace(self, disorder=replace(self.disorder, seed=int(seed)))

    def with_L(self, L: int) -> "ScenarioConfig":
        if self.epsilons is not None:
            raise ConfigError("cannot vary L when explicit epsilons are given")
        return replace(self, L=int(L))

    def build_params(self) -> ModelParams:
        if self.epsilons is not None:
            eps = self.epsilons
        else:
            eps = build_epsilons(self.disorder, self.L)
        return ModelParams(omega=self.omega, g=self.g, epsilons=eps)

    def build_initial(self, params: ModelParams) -> InitialCondition:
        spec = self.initial
        kind = ConditionKind(spec.get("kind", "single_spin"))
        if kind is ConditionKind.SINGLE_PHOTON:
            return InitialCondition.single_photon()
        A = _spin_ref(spec.get("A", "resonant"), params)
        if kind is ConditionKind.SINGLE_SPIN:
            return InitialCondition.single_spin(A)
        if "B" in spec:
            B = _spin_ref(spec["B"], params)
        elif "separation" in spec:
            B = A + int(spec["separation"])
        else:
            raise ConfigError("bell initial state needs B or separation")
        return InitialCondition.bell(A, B, _sign(spec.get("sign", "+")))

    def time_max(self, params: ModelParams) -> float:
        if self.t_max == "auto":
            d = params.mean_spacing
            if d <= 0:
                raise ConfigError('t_max = "auto" needs at least two spins')
            return self.periods * 4.0 * math.pi / d
        return float(self.t_max)

    def spin_outputs(self, params: ModelParams) -> list[int]:
        spins = []
        for name in self.outputs:
            m = _SPIN_OUTPUT.match(name)
            if m:
                spins.append(_spin_ref(m.group(1), params))
        return spins


def _spin_ref(value, params: ModelParams) -> int:
    if isinstance(value, str):
        if value == "resonant":
            return resonant_spin(params)
        if value.isdigit():
            return int(value)
        raise ConfigError(f"spin reference must be an index or 'resonant', got {value!r}")
    return int(value)


def _sign(value) -> int:
    if value in ("+", "plus", 1, "+1"):
        return 1
    if value in ("-", "minus", -1, "-1"):
        return -1
    raise ConfigError(f"Bell sign must be + or -, got {value!r}")


def _merge(base: dict, over: dict) -> dict:
    out = copy.deepcopy(base)
    for key, value in over.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], value)
        else:
            out[key] = copy.deepcopy(value)
    return out


def _parse_one(doc: dict, fallback_name: str) -> ScenarioConfig:
    try:
        model = doc["model"]
        omega = float(model.get("omega", 1.0))
        g = float(model["g"])
        epsilons = model.get("epsilons")
        disorder = None
        if epsilons is not None:
            epsilons = tuple(float(e) for e in epsilons)
            L = len(epsilons)
        else:
            L = int(model["L"])
            dis = model.get("disorder", {})
            disorder = DisorderSpec(
                kind=DisorderKind(dis.get("kind", "equally_spaced")),
                center=float(dis.get("center", omega)),
                width=float(dis.get("width", DisorderSpec.width)),
                seed=int(dis.get("seed", doc.get("seed", 0))),
                pin_resonant=bool(dis.get("pin_resonant", False)),
            )
        times = doc.get("times", {})
        t_max = times.get("t_max", "auto")
        if t_max != "auto":
            t_max = float(t_max)
            if not t_max > 0:
                raise ConfigError("t_max must be positive")
        steps = int(times.get("steps", DEFAULT_STEPS))
        if steps < 2:
            raise ConfigError("steps must be >= 2")
        outputs = tuple(doc.get("outputs", ["survival"]))
        for name in outputs:
            if name not in ("survival", "photon", "fidelity") and not _SPIN_OUTPUT.match(name):
                raise ConfigError(f"unknown observable {name!r}")
        comparison = doc.get("comparison", {})
        sweep = None
        if "sweep" in doc:
            sw = doc["sweep"]
            seeds = sw.get("seeds", [doc.get("seed", 0)])
            if isinstance(seeds, int):
                start = int(sw.get("seed_start", 0))
                seeds = list(range(start, start + seeds))
            Ls = tuple(int(n) for n in sw["L"]) if "L" in sw else None
            sweep = SweepSpec(seeds=tuple(int(s) for s in seeds), L=Ls)
        command = doc.get("command", "sweep" if sweep else "evolve")
        if command not in COMMANDS:
            raise ConfigError(f"unknown command {command!r}")
        return ScenarioConfig(
            name=str(doc.get("name", fallback_name)),
            command=command,
            omega=omega,
            g=g,
            L=L,
            disorder=disorder,
            epsilons=epsilons,
            initial=dict(doc.get("initial", {"kind": "single_spin", "A": "resonant"})),
            t_max=t_max,
            periods=float(times.get("periods", DEFAULT_PERIODS)),
            steps=steps,
            outputs=outputs,
            asymptotic=bool(comparison.get("asymptotic", False)),
            oracle=bool(comparison.get("oracle", False)),
            sweep=sweep,
            raw=doc,
        )
    except ConfigError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad scenario {fallback_name!r}: {exc!r}") from exc


def parse_config(text: str, name: str = "scenario") -> list[ScenarioConfig]:
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"cannot parse config: {exc}") from exc
    scenarios = doc.pop("scenario", None)
    base_name = doc.get("name", name)
    if scenarios is None:
        return [_parse_one(doc, base_name)]
    if not scenarios:
        raise ConfigError("empty [[scenario]] list")
    return [
        _parse_one(_merge(doc, sc), f"{base_name}_{i}") for i, sc in enumerate(scenarios)
    ]


def load_config(path) -> list[ScenarioConfig]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    return parse_config(text, name=path.stem)


def preset_names() -> list[str]:
    root = resources.files("dicke_bethe") / "presets"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".toml"))


def load_preset(name: str) -> list[tuple[str, list[ScenarioConfig]]]:
    """Presets whose name equals ``name`` or, failing that, starts with it."""
    names = preset_names()
    chosen = [name] if name in names else [n for n in names if n.startswith(name)]
    if not chosen:
        raise ConfigError(f"unknown preset {name!r}; available: {', '.join(names)}")
    root = resources.files("dicke_bethe") / "presets"
    return [(n, parse_config((root / f"{n}.toml").read_text(encoding="utf-8"), name=n)) for n in chosen]
