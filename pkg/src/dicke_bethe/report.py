"""CSV output, gnuplot companions and matplotlib figures."""

from __future__ import annotations

import io
import os
import tempfile
from pathlib import Path

import numpy as np

from . import __version__

HEADER_COMMENT = f"# dicke-bethe v{__version__}, units: energy/ω, time·ω"


def _fmt(value) -> str:
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if value is None:
        return ""
    return str(value)


def render_csv(header, rows, comments=()) -> str:
    buf = io.StringIO()
    buf.write(HEADER_COMMENT + "\n")
    for line in comments:
        buf.write(f"# {line}\n")
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    return buf.getvalue()


def atomic_write(path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def write_csv(path, header, rows, comments=()) -> Path:
    return atomic_write(path, render_csv(header, rows, comments))


def columns_to_rows(columns: dict):
    """Rows from a dict of equal-length columns; complex columns stay whole."""
    return zip(*columns.values())


def trace_columns(times, exact, asym=None, oracle=None) -> dict:
    cols = {"t": times, "re": exact.real, "im": exact.imag, "abs": np.abs(exact)}
    if asym is not None:
        cols.update(asym_re=asym.real, asym_im=asym.imag, asym_abs=np.abs(asym))
    if oracle is not None:
        cols.update(oracle_re=oracle.real, oracle_im=oracle.imag, oracle_abs=np.abs(oracle))
    return cols


def gnuplot_script(csv_files: dict, out_dir) -> str:
    """Plot script drawing the modulus column(s) of each CSV into a PNG."""
    lines = [
        "# generated by dicke-bethe; run with: gnuplot <this file>",
        "set datafile separator ','",
        "set terminal pngcairo size 900,560",
        "set xlabel 't ω'",
    ]
    for csv, header in csv_files.items():
        name = Path(csv).name
        png = Path(name).with_suffix(".gp.png").name
        lines.append(f"set output '{png}'")
        lines.append(f"set title '{Path(name).stem}'")
        if "t" not in header:
            lines.append("set xlabel 'index'")
        x = header.index("t") + 1 if "t" in header else 1
        parts = []
        for col, label in enumerate(header, start=1):
            if label.endswith("abs") or label in ("diff",):
                parts.append(f"'{name}' using {x}:{col} with lines title '{label}'")
        if not parts:
            parts.append(f"'{name}' using 1:2 with points title '{header[1]}'")
        lines.append("plot " + ", \\\n     ".join(parts))
    return "\n".join(lines) + "\n"


# -- matplotlib ---------------------------------------------------------------

def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams.update({"font.size": 9, "axes.grid": True, "grid.alpha": 0.3})
    return plt


def plot_trace(path, times, curves: dict, title: str = "", ylabel: str = "|amplitude|", squared=False):
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.4, 3.6))
    styles = ["-", "--", ":", "-."]
    for i, (label, values) in enumerate(curves.items()):
        y = np.abs(values) ** (2 if squared else 1)
        ax.plot(times, y, styles[i % len(styles)], lw=1.2, label=label)
    ax.set_xlabel(r"$t\,\omega$")
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.set_xlim(times[0], times[-1])
    if len(curves) > 1:
        ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return Path(path)


def plot_spectrum(path, params, spectrum, title: str = ""):
    """Spin energies and eigenenergies on the energy axis, plus photon weight per root."""
    plt = _pyplot()
    fig, (top, bottom) = plt.subplots(2, 1, figsize=(6.4, 4.2), sharex=True,
                                      gridspec_kw={"height_ratios": [1, 2]})
    top.plot(params.epsilons, np.zeros(params.L), "o", mfc="none", color="tab:blue", label=r"$\epsilon_j$")
    top.plot(spectrum.roots, np.zeros(len(spectrum)), ".", color="tab:green", ms=9, label=r"$\lambda^{(\alpha)}$")
    top.axvline(params.omega, ls="--", color="0.4", lw=0.8)
    top.set_yticks([])
    top.legend(frameon=False, ncol=2, loc="upper left")
    top.set_title(title)
    bottom.semilogy(spectrum.roots, spectrum.darkness, "s", ms=4, color="tab:green")
    bottom.set_ylabel("photon weight")
    bottom.set_xlabel("energy / ω")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return Path(path)


def plot_sweep(path, rows, title: str = ""):
    plt = _pyplot()
    L = np.array([r["L"] for r in rows], dtype=float)
    tmin = np.array([r["min_abs"] for r in rows], dtype=float)
    trev = np.array([np.nan if r["revival_time"] is None else r["revival_time"] for r in rows])
    fig, (a, b) = plt.subplots(1, 2, figsize=(7.2, 3.2))
    a.hist(tmin, bins=20, color="tab:blue", alpha=0.8)
    a.set_xlabel(r"min$_t$ |survival|")
    a.set_ylabel("runs")
    b.plot(L, trev, "o", ms=4)
    b.set_xlabel("L")
    b.set_ylabel(r"first revival $t\,\omega$")
    fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return Path(path)
