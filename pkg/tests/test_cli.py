import csv
import io

import pytest

from dicke_bethe import __version__
from dicke_bethe import runner
from dicke_bethe.cli import main
from dicke_bethe.errors import ConvergenceFailure

HEADER = f"# dicke-bethe v{__version__}, units: energy/ω, time·ω"


def rows(text):
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(lines))))


def write(tmp_path, text, name="c.toml"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


RESONANCE = '[model]\ng = 0.05\nepsilons = [1.0]\n'


def test_spectrum_to_stdout(tmp_path, capsys):
    assert main(["spectrum", "--config", write(tmp_path, RESONANCE)]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == HEADER
    table = rows(out)
    assert [float(r["lambda"]) for r in table] == pytest.approx([0.95, 1.05], abs=1e-15)
    assert list(table[0]) == ["alpha", "lambda", "class", "norm_sq", "darkness"]


def test_fig2_spectrum_counts(tmp_path, capsys):
    assert main(["spectrum", "--config", write(tmp_path, '[model]\ng=0.05\nL=20\n'), "--oracle"]) == 0
    table = rows(capsys.readouterr().out)
    assert len(table) == 21
    assert sum(r["class"] == "confined" for r in table) == 19
    assert max(abs(float(r["diff"])) for r in table) <= 1e-10


def test_states_file(tmp_path):
    out = tmp_path / "o"
    assert main(["spectrum", "--config", write(tmp_path, '[model]\ng=0.05\nL=4\n', "s.toml"),
                 "--states", "--out", str(out)]) == 0
    states = rows((out / "s_states.csv").read_text())
    assert len(states) == 5 and "spin4" in states[0]


def test_runs_are_byte_identical(tmp_path):
    cfg = write(tmp_path, '[model]\ng=0.05\nL=12\n[model.disorder]\nkind="gaussian"\nwidth=0.05\n'
                          '[times]\nsteps=300\n', "r.toml")
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["evolve", "--config", cfg, "--seed", "17", "--out", str(a), "--asymptotic"]) == 0
    assert main(["evolve", "--config", cfg, "--seed", "17", "--out", str(b), "--asymptotic"]) == 0
    assert (a / "r_survival.csv").read_bytes() == (b / "r_survival.csv").read_bytes()
    c = tmp_path / "c"
    main(["evolve", "--config", cfg, "--seed", "18", "--out", str(c)])
    assert (a / "r_survival.csv").read_bytes() != (c / "r_survival.csv").read_bytes()


def test_evolve_columns_with_oracle(tmp_path):
    out = tmp_path / "o"
    cfg = write(tmp_path, '[model]\ng=0.05\nL=6\noutputs=1\n[times]\nsteps=50\n'.replace("outputs=1\n", ""), "e.toml")
    assert main(["evolve", "--config", cfg, "--oracle", "--asymptotic", "--gnuplot", "--out", str(out)]) == 0
    text = (out / "e_survival.csv").read_text()
    assert "# oracle_max_diff = " in text
    header = rows(text)[0]
    for col in ["t", "re", "im", "abs", "asym_abs", "oracle_abs"]:
        assert col in header
    assert (out / "e.gp").read_text().count("e_survival.csv") >= 1


def test_fig2d_preset_revival(tmp_path):
    out = tmp_path / "o"
    assert main(["preset", "fig2d", "--out", str(out), "--plot"]) == 0
    assert (out / "fig2d_survival.png").stat().st_size > 0
    table = rows((out / "fig2d_survival.csv").read_text())
    import numpy as np

    from dicke_bethe.dynamics import find_revival

    t = np.array([float(r["t"]) for r in table])
    a = np.array([float(r["abs"]) for r in table])
    d = 0.1 / 19
    rev = find_revival(t, a)
    assert abs(rev.time / (2 * np.pi / d) - 1) <= 0.05


def test_fig5a_two_fidelity_traces(tmp_path):
    out = tmp_path / "o"
    assert main(["preset", "fig5a", "--out", str(out)]) == 0
    assert (out / "fig5a_plus_fidelity.csv").exists()
    assert (out / "fig5a_minus_fidelity.csv").exists()


def test_fig4_presets(tmp_path):
    out = tmp_path / "o"
    assert main(["preset", "fig4", "--out", str(out)]) == 0
    for n in ("fig4a", "fig4b", "fig4b_l12", "fig4c"):
        assert (out / f"{n}_photon.csv").exists()


def test_compare(tmp_path, capsys):
    cfg = write(tmp_path, '[model]\ng=0.05\nL=10\n[times]\nsteps=200\n')
    assert main(["compare", "--config", cfg]) == 0
    table = rows(capsys.readouterr().out)
    assert list(table[0]) == ["t", "exact_abs", "asym_abs", "diff"]


def test_sweep_fraction_reported(tmp_path, capsys):
    cfg = write(tmp_path, '[model]\ng=0.05\nL=20\n[model.disorder]\nkind="uniform_random"\n'
                          '[times]\nsteps=400\n[sweep]\nseeds=6\n')
    assert main(["sweep", "--config", cfg]) == 0
    cap = capsys.readouterr()
    assert "fraction_min_above_0.2 = " in cap.out
    assert len(rows(cap.out)) == 6


def test_sweep_threads_deterministic(tmp_path, monkeypatch):
    cfg = write(tmp_path, '[model]\ng=0.05\nL=10\n[model.disorder]\nkind="gaussian"\nwidth=0.05\n'
                          '[times]\nsteps=200\n[sweep]\nseeds=8\n')
    main(["sweep", "--config", cfg, "--out", str(tmp_path / "one")])
    monkeypatch.setenv("DICKE_THREADS", "4")
    main(["sweep", "--config", cfg, "--out", str(tmp_path / "four")])
    assert (tmp_path / "one" / "c_sweep.csv").read_bytes() == (tmp_path / "four" / "c_sweep.csv").read_bytes()


def test_revival_grows_linearly_with_L(tmp_path, capsys):
    cfg = write(tmp_path, '[model]\ng=0.05\nL=4\n[sweep]\nL=[4, 6, 10, 20]\nseeds=[0]\n')
    assert main(["sweep", "--config", cfg]) == 0
    out = capsys.readouterr().out
    summary = dict(ln[2:].split(" = ") for ln in out.splitlines() if " = " in ln)
    assert float(summary["revival_slope"]) > 0
    assert float(summary["revival_r2"]) >= 0.99


@pytest.mark.parametrize("body", ['[model]\ng=0.05\nL=4\n[sweep]\nseeds=[]\n',
                                  '[model]\ng=0.05\nL=4\n[sweep]\nL=[]\n'])
def test_empty_grid_is_config_error(tmp_path, body):
    assert main(["sweep", "--config", write(tmp_path, body)]) == 2


def test_config_errors_exit_2(tmp_path):
    assert main(["spectrum", "--config", write(tmp_path, "[model]\ng = -1\nL = 3\n")]) == 2
    assert main(["spectrum", "--config", str(tmp_path / "missing.toml")]) == 2
    assert main(["evolve"]) == 2
    assert main(["preset", "nope"]) == 2
    assert main(["frobnicate"]) == 2
    assert main(["spectrum", "--seed", "-3", "--config", "x"]) == 2


def test_numerical_failure_exit_3(tmp_path, monkeypatch):
    def boom(params, tol=None):
        raise ConvergenceFailure("forced")

    monkeypatch.setattr(runner, "solve_spectrum", boom)
    assert main(["spectrum", "--config", write(tmp_path, RESONANCE)]) == 3


def test_preset_list(capsys):
    assert main(["preset", "--list"]) == 0
    assert "fig2d" in capsys.readouterr().out.split()
