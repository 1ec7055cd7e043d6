import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dicke_bethe import InitialCondition, ModelParams, solve_spectrum
from dicke_bethe import asymptotics as asy
from dicke_bethe import dynamics as dyn
from dicke_bethe.errors import InvalidSpec, UnsupportedCondition
from dicke_bethe.model import DisorderSpec, make_params, resonant_spin

from conftest import fig_params


@pytest.fixture(scope="module")
def ctx(fig2):
    return asy.AsymptoticContext.from_params(fig2[0])


def test_context_needs_two_spins():
    with pytest.raises(InvalidSpec):
        asy.AsymptoticContext.from_params(ModelParams(1.0, 0.05, [1.0]))


def test_delta_at_center(ctx):
    assert asy.delta_alpha(1.0, ctx) == pytest.approx(ctx.d / 2, abs=1e-12 * ctx.d)


def test_delta_edges(ctx):
    # arccot of a large positive argument near the lower edge, large negative near the upper
    lo = asy.delta_alpha(ctx.epsilon_1 + 1e-12, ctx)
    hi = asy.delta_alpha(ctx.epsilon_L - 1e-12, ctx)
    assert 0 < lo < 0.05 * ctx.d
    assert 0.95 * ctx.d < hi < ctx.d
    inner = np.linspace(ctx.epsilon_1 + 1e-6, ctx.epsilon_L - 1e-6, 101)
    assert np.all(np.diff(asy.delta_alpha(inner, ctx)) > 0)


def test_delta_against_exact_central_roots(fig2, ctx):
    p, sp = fig2
    for alpha in range(7, 13):
        eps_alpha = p.epsilons[alpha - 1]
        shift = sp.roots[alpha] - eps_alpha
        assert abs(shift - asy.delta_alpha(eps_alpha, ctx)) <= 0.05 * ctx.d


def test_dark_norm(fig2, ctx):
    p, sp = fig2
    centered = ctx.g**2 * math.pi**2 / ctx.d**2
    assert asy.dark_norm(1.0, ctx) == pytest.approx(centered, rel=1e-14)
    assert asy.dark_norm(1.0 + 0.025, ctx) > centered
    assert asy.dark_norm(1.0 - 0.025, ctx) > centered
    assert asy.dark_norm(p.epsilons[9], ctx) == pytest.approx(sp.norm_sq[10], rel=0.2)


def test_bright_roots_against_exact(fig2, ctx):
    _, sp = fig2
    br = asy.bright_roots(ctx)
    assert br.low == pytest.approx(sp.roots[0], rel=0.02)
    assert br.high == pytest.approx(sp.roots[-1], rel=0.02)
    assert br.valid_low and br.valid_high
    exact = asy.BrightStates.from_spectrum(sp)
    assert br.norm_low == pytest.approx(exact.norm_low, rel=0.05)
    assert br.norm_high == pytest.approx(exact.norm_high, rel=0.05)


@pytest.mark.parametrize("L", [10, 50, 200])
def test_bright_roots_narrow_band(L):
    p = make_params(DisorderSpec("equally_spaced", 1.0, 1e-6), L)
    br = asy.bright_roots(asy.AsymptoticContext.from_params(p))
    rabi = p.g * math.sqrt(L)
    assert br.low == pytest.approx(1.0 - rabi, abs=1e-3 * rabi)
    assert br.high == pytest.approx(1.0 + rabi, abs=1e-3 * rabi)


def test_triangle_values(ctx):
    d = ctx.d
    t = np.array([0.0, math.pi / d, 2 * math.pi / d])
    assert asy.triangle_closed(t, ctx) == pytest.approx([1.0, 0.0, -1.0], abs=1e-14)
    series = asy.triangle_series(t, ctx)
    assert series == pytest.approx([1.0, 0.0, -1.0], abs=1e-4)


def test_basel_truncation(ctx):
    n = ctx.series_terms
    err = 1.0 - asy.triangle_series(0.0, ctx)[0]
    assert 0 < err <= 4 / (math.pi**2 * n)


def test_square_values(ctx):
    d = ctx.d
    assert asy.square(0.0, ctx) == 0.0
    assert asy.square(math.pi / d, ctx) == pytest.approx(math.pi / 4, abs=1e-15)
    assert asy.square_series(math.pi / d, ctx)[0] == pytest.approx(math.pi / 4, abs=1e-4)


@settings(max_examples=40, deadline=None)
@given(x=st.floats(0.01, 0.99))
def test_series_match_closed_forms(x):
    c = asy.AsymptoticContext(d=1.0, g=1.0, omega=0.0, L=10, epsilon_1=-1.0, epsilon_L=1.0, series_terms=20000)
    t = np.array([x * c.period])
    assert asy.triangle_series(t, c) == pytest.approx(asy.triangle_closed(t, c), abs=2e-4)
    # away from the jumps at t = 0, 2 pi / d
    if min(abs(x - 0.5), x, 1 - x) > 0.02:
        assert asy.square_series(t, c) == pytest.approx(asy.square_closed(t, c), abs=2e-3)


def test_photon_plateau_of_dark_states(fig2, fig2_times):
    """The d/(pi g) square-wave height is the dark-state part of the exact photon amplitude."""
    p, sp = fig2
    ctx = asy.AsymptoticContext.from_params(p)
    height = np.abs(asy.photon_from_spin_asym(np.array([math.pi / ctx.d]), ctx, 1.0))[0]
    assert height == pytest.approx(ctx.d / (math.pi * ctx.g), rel=1e-14)
    assert height == pytest.approx(0.0335, abs=1e-4)
    from dicke_bethe.eigen import eigenbasis

    basis = eigenbasis(sp)
    A = resonant_spin(p)
    w = (basis[:, A] * basis[:, 0])[1:-1]
    dark = np.abs(np.exp(-1j * np.outer(fig2_times, sp.roots[1:-1])) @ w)
    assert np.median(dark) == pytest.approx(height, rel=0.3)


def test_single_spin_start(ctx):
    cond = InitialCondition.single_spin(10)
    eps = np.linspace(ctx.epsilon_1, ctx.epsilon_L, ctx.L)
    assert asy.survival_asym(cond, [0.0], ctx, eps)[0] == pytest.approx(1.0, abs=1e-15)


def test_bell_reduces_to_triangle_at_coincidence(ctx):
    eps = np.linspace(ctx.epsilon_1, ctx.epsilon_L, ctx.L)
    eps_same = eps.copy()
    eps_same[10] = eps_same[9]  # force eps_B = eps_A
    t = np.linspace(0, ctx.period, 200)
    bell = asy.survival_asym(InitialCondition.bell(10, 11, +1), t, ctx, eps_same)
    spin = asy.survival_asym(InitialCondition.single_spin(10), t, ctx, eps)
    # the sin term survives as -(d t / 2) * square wave
    expected = spin - 4 / math.pi**2 * ctx.d * t * np.exp(-1j * eps[9] * t) * asy.square(t, ctx)
    assert np.max(np.abs(bell - expected)) <= 1e-12


def test_survival_asym_rejects_photon(ctx):
    with pytest.raises(UnsupportedCondition):
        asy.survival_asym(InitialCondition.single_photon(), [0.0], ctx, [0.95, 1.05])


def test_fig2_agreement_improves_with_L():
    worst = []
    for L in (6, 10, 20):
        p = fig_params(L)
        sp = solve_spectrum(p)
        ctx = asy.AsymptoticContext.from_params(p)
        t = np.linspace(0, 1.25 * ctx.period, 2000)
        cond = InitialCondition.single_spin(resonant_spin(p))
        exact = dyn.survival_amplitude(cond, sp, p, t).abs
        approx = np.abs(asy.survival_asym(cond, t, ctx, p.epsilons, bright=asy.BrightStates.from_spectrum(sp)))
        worst.append(np.max(np.abs(exact - approx)))
    assert worst[2] < worst[1] < worst[0]


def test_photon_start_weights_sum_to_one(fig2, ctx):
    p, sp = fig2
    dark, bright = asy.photon_survival_asym([0.0], ctx, asy.BrightStates.from_spectrum(sp), p.epsilons)
    assert abs(dark[0] + bright[0]) == pytest.approx(1.0, abs=0.05)


def test_weak_disorder_gives_collective_rabi():
    p = make_params(DisorderSpec("equally_spaced", 1.0, 0.01), 100)
    ctx = asy.AsymptoticContext.from_params(p)
    br = asy.bright_roots(ctx)
    rabi = p.g * math.sqrt(p.L)
    assert br.high - br.low == pytest.approx(2 * rabi, rel=1e-3)
    t = np.linspace(0, 60, 3000)
    dark, bright = asy.photon_survival_asym(t, ctx, br, p.epsilons)
    assert np.abs(bright).max() == pytest.approx(1.0, abs=1e-3)
    assert np.abs(dark).max() < 1e-3
    exact = dyn.photon_amplitude(InitialCondition.single_photon(), solve_spectrum(p), p, t).values
    assert np.max(np.abs(exact - (dark + bright))) < 1e-3


def test_dark_photon_revival_fig4c(fig2, ctx):
    p, sp = fig2
    T = 2 * math.pi / ctx.d
    t = np.linspace(0, 1.25 * ctx.period, 4000)
    dark, _ = asy.photon_survival_asym(t, ctx, asy.BrightStates.from_spectrum(sp), p.epsilons)
    dark = np.abs(dark)
    window = (t > 0.8 * T) & (t < 1.2 * T)
    before = (t > 0.3 * T) & (t < 0.8 * T)
    assert dark[window].max() > 5 * dark[before].max()
    assert t[window][np.argmax(dark[window])] / T == pytest.approx(1.0, abs=0.05)


def test_bell_photon_cancellation(ctx):
    t = np.linspace(0, ctx.period, 500)
    assert np.all(asy.bell_photon_asym(t, ctx, 1.0, 1.0, -1) == 0)
    plus = asy.bell_photon_asym(t, ctx, 1.0, 1.0, +1)
    single = asy.photon_from_spin_asym(t, ctx, 1.0)
    assert plus == pytest.approx(math.sqrt(2) * single, abs=1e-15)


def test_bell_photon_ratio_is_tangent(ctx):
    # |minus / plus| = |tan((eps_B - eps_A) t / 2)|, so the two envelopes share their maxima
    t = np.linspace(1.0, ctx.period, 700)
    ea, eb = 1.0, 1.0 + ctx.d
    plus = asy.bell_photon_asym(t, ctx, ea, eb, +1)
    minus = asy.bell_photon_asym(t, ctx, ea, eb, -1)
    ok = np.abs(plus) > 1e-6
    ratio = np.abs(minus[ok]) / np.abs(plus[ok])
    assert ratio == pytest.approx(np.abs(np.tan(0.5 * ctx.d * t[ok])), rel=1e-9)
