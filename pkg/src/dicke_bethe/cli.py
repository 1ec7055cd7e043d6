"""Command line entry point: ``dicke-bethe <command> [options]``."""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__, report, runner
from .config import ConfigError, ScenarioConfig, load_config, load_preset, preset_names
from .errors import DickeError, NumericalError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

log = logging.getLogger("dicke_bethe")


def _u64(text: str) -> int:
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="scenario file (TOML)")
    common.add_argument("--out", type=Path, help="output directory; CSV goes to stdout when omitted")
    common.add_argument("--seed", type=_u64, help="override the disorder seed (sweeps: first seed)")
    common.add_argument("--oracle", action="store_true", help="cross-check against dense diagonalization")
    common.add_argument("--asymptotic", action="store_true", help="add closed-form large-L columns")
    common.add_argument("--gnuplot", action="store_true", help="write a gnuplot script next to the CSVs")
    common.add_argument("--plot", action="store_true", help="render PNG figures next to the CSVs")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="dicke-bethe",
        description="Exact one-excitation dynamics of the inhomogeneous Dicke model.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spectrum", parents=[common], help="Bethe roots, classes and norms")
    sp.add_argument("--states", action="store_true", help="also write normalized eigenvectors")
    sub.add_parser("evolve", parents=[common], help="time traces of the configured observables")
    sub.add_parser("compare", parents=[common], help="exact vs asymptotic moduli")
    sub.add_parser("sweep", parents=[common], help="seeded realizations over a grid")
    pre = sub.add_parser("preset", parents=[common], help="run a bundled figure scenario")
    pre.add_argument("name", nargs="?", help="preset name or prefix (fig4 runs fig4a, fig4b, ...)")
    pre.add_argument("--list", action="store_true", help="list bundled presets")
    pre.add_argument("--states", action="store_true", help=argparse.SUPPRESS)
    return parser


class _Sink:
    """Collects tables and writes them to ``--out`` or to stdout."""

    def __init__(self, out: Path | None, gnuplot: bool, plot: bool):
        self.out = out
        self.gnuplot = gnuplot
        self.plot = plot and out is not None
        self.first = True

    def tables(self, name: str, tables: dict):
        if self.out is None:
            for header, rows, comments in tables.values():
                if not self.first:
                    sys.stdout.write("\n")
                sys.stdout.write(report.render_csv(header, rows, comments))
                self.first = False
            return
        for path in runner.write_outputs(name, tables, self.out, self.gnuplot):
            log.info("wrote %s", path)

    def figure(self, fn, filename: str, *args, **kwargs):
        if self.plot:
            self.out.mkdir(parents=True, exist_ok=True)
            path = fn(self.out / filename, *args, **kwargs)
            log.info("wrote %s", path)


def _summary_lines(summary: dict) -> list[str]:
    lines = []
    for key, value in summary.items():
        text = format(value, ".6g") if isinstance(value, float) else str(value)
        lines.append(f"{key} = {text}")
    return lines


def _report(name: str, summary: dict):
    for line in _summary_lines(summary):
        print(f"{name}: {line}", file=sys.stderr)


def cmd_spectrum(cfg: ScenarioConfig, args, sink: _Sink):
    prep = runner.prepare(cfg, dynamics=False)
    header, rows, summary = runner.spectrum_table(prep, args.oracle or cfg.oracle)
    tables = {"spectrum": (header, rows, _summary_lines(summary))}
    if getattr(args, "states", False):
        sh, srows = runner.eigenstate_table(prep)
        tables["states"] = (sh, srows, ())
    sink.tables(cfg.name, tables)
    sink.figure(report.plot_spectrum, f"{cfg.name}_spectrum.png", prep.params, prep.spectrum, title=cfg.name)
    _report(cfg.name, summary)


def cmd_evolve(cfg: ScenarioConfig, args, sink: _Sink):
    res = runner.run_evolution(cfg, args.asymptotic or cfg.asymptotic, args.oracle or cfg.oracle)
    comments = _summary_lines(res.summary) + [f"initial: {res.prep.initial.label}"]
    tables = {}
    for name, cols in res.traces.items():
        tables[name] = (list(cols), report.columns_to_rows(cols), comments)
        curves = {"exact": cols["re"] + 1j * cols["im"]}
        if "asym_re" in cols:
            curves["asymptotic"] = cols["asym_re"] + 1j * cols["asym_im"]
        sink.figure(report.plot_trace, f"{cfg.name}_{name}.png".replace(":", ""), cols["t"], curves,
                    title=f"{cfg.name}: {name} ({res.prep.initial.label})", ylabel=f"|{name}|")
    sink.tables(cfg.name, tables)
    _report(cfg.name, res.summary)


def cmd_compare(cfg: ScenarioConfig, args, sink: _Sink):
    prep, columns = runner.comparison_columns(cfg)
    if not columns:
        raise ConfigError(f"{cfg.name}: no requested observable has a closed form")
    tables, summary = {}, {}
    for name, cols in columns.items():
        rms = float((cols["diff"] ** 2).mean() ** 0.5)
        summary[f"{name}_rms"] = rms
        tables[f"compare_{name}"] = (list(cols), report.columns_to_rows(cols), [f"rms = {rms:.6g}"])
        sink.figure(report.plot_trace, f"{cfg.name}_compare_{name}.png".replace(":", ""), cols["t"],
                    {"exact": cols["exact_abs"], "asymptotic": cols["asym_abs"]},
                    title=f"{cfg.name}: {name}", ylabel=f"|{name}|")
    sink.tables(cfg.name, tables)
    _report(cfg.name, summary)


def cmd_sweep(cfg: ScenarioConfig, args, sink: _Sink):
    rows, summary = runner.run_sweep(cfg)
    table = [[r[k] for k in runner.SWEEP_HEADER] for r in rows]
    sink.tables(cfg.name, {"sweep": (runner.SWEEP_HEADER, table, _summary_lines(summary))})
    sink.figure(report.plot_sweep, f"{cfg.name}_sweep.png", rows, title=cfg.name)
    _report(cfg.name, summary)


COMMANDS = {
    "spectrum": cmd_spectrum,
    "evolve": cmd_evolve,
    "compare": cmd_compare,
    "sweep": cmd_sweep,
}


def _apply_seed(cfg: ScenarioConfig, seed: int | None) -> ScenarioConfig:
    if seed is None:
        return cfg
    if cfg.sweep is not None:
        n = len(cfg.sweep.seeds)
        cfg = replace(cfg, sweep=replace(cfg.sweep, seeds=tuple(range(seed, seed + n))))
    return cfg.with_seed(seed)


def _scenarios(args) -> list[tuple[str, ScenarioConfig]]:
    """``(command, config)`` pairs to run."""
    if args.command == "preset":
        if args.list or not args.name:
            return []
        found = load_preset(args.name)
        return [(cfg.command, cfg) for _, configs in found for cfg in configs]
    if args.config is None:
        raise ConfigError(f"{args.command} needs --config (or use: preset <name>)")
    return [(args.command, cfg) for cfg in load_config(args.config)]


def run(args) -> int:
    if args.command == "preset" and (args.list or not args.name):
        print("\n".join(preset_names()))
        return EXIT_OK
    sink = _Sink(args.out, args.gnuplot, args.plot)
    for command, cfg in _scenarios(args):
        COMMANDS[command](_apply_seed(cfg, args.seed), args, sink)
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse usage errors count as config errors
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return run(args)
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (DickeError, ValueError, IndexError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
