import math

import numpy as np
import pytest

from dicke_bethe import DisorderSpec, ModelParams, make_params, solve_spectrum

FIG_G = 0.05
FIG_WIDTH = 0.1


def fig_params(L: int, kind: str = "equally_spaced", seed: int = 0) -> ModelParams:
    return make_params(DisorderSpec(kind, 1.0, FIG_WIDTH, seed=seed), L, omega=1.0, g=FIG_G)


def resonance(g: float = 0.05, omega: float = 1.0) -> ModelParams:
    return ModelParams(omega=omega, g=g, epsilons=[omega])


@pytest.fixture(scope="session")
def fig2():
    p = fig_params(20)
    return p, solve_spectrum(p)


@pytest.fixture(scope="session")
def fig2_times(fig2):
    p, _ = fig2
    return np.linspace(0.0, 1.25 * 4 * math.pi / p.mean_spacing, 2000)


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
