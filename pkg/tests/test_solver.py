import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from solitary_pressure import (
    Environment,
    WaveSolution,
    continue_amplitude,
    decay_rate,
    kdv_profile,
    residuals,
    solve_wave,
    surface_elevation,
)
from solitary_pressure.errors import (
    AmplitudeCapExceeded,
    AmplitudeOutOfRange,
    FroudeSubcritical,
    InputConflict,
    InvalidInput,
    NoConvergence,
)
from solitary_pressure.solver import auto_half_length, default_modes

UNIT = Environment()


def second_order_profile(a, x):
    """Weakly nonlinear solitary wave to second order in a/d (g = d = 1)."""
    kappa = math.sqrt(0.75 * a) * (1.0 - 0.625 * a)
    s = 1.0 / np.cosh(kappa * x)
    t = np.tanh(kappa * x)
    return a * s**2 - 0.75 * a * a * s**2 * t**2


def fenton_speed(a):
    return math.sqrt(1.0 + a - a * a / 20.0 - 3.0 * a**3 / 70.0)


@settings(max_examples=25, deadline=None)
@given(st.floats(1.0001, 1.29))
def test_decay_rate_matches_independent_root(F):
    with mpmath.workdps(40):
        f2 = mpmath.mpf(F) ** 2
        lo, hi = mpmath.mpf("1e-8"), mpmath.pi / 2 - mpmath.mpf("1e-20")
        for _ in range(160):
            mid = (lo + hi) / 2
            if mpmath.tan(mid) - f2 * mid < 0:
                lo = mid
            else:
                hi = mid
        oracle = float(lo)
    assert decay_rate(F) == pytest.approx(oracle, rel=1e-12)


def test_decay_rate_small_amplitude_limit():
    # tan t = F^2 t with F^2 = 1 + eps gives t ~ sqrt(3 eps)
    eps = 1e-6
    assert decay_rate(math.sqrt(1 + eps)) == pytest.approx(math.sqrt(3 * eps), rel=1e-5)


def test_decay_rate_rejects_subcritical():
    with pytest.raises(FroudeSubcritical):
        decay_rate(1.0)


@pytest.mark.parametrize("a,L", [(0.1, 55), (0.3, 35), (0.5, 30), (0.7, 30)])
def test_auto_half_length(a, L):
    assert auto_half_length(a) == L


def test_default_modes():
    assert [default_modes(a) for a in (0.1, 0.3, 0.5, 0.7)] == [512, 512, 1024, 2048]


def test_kdv_profile_domain():
    eta, c = kdv_profile(0.1, UNIT)
    assert eta(0.0) == pytest.approx(0.1)
    assert c == pytest.approx(math.sqrt(1.1))
    with pytest.raises(AmplitudeOutOfRange):
        kdv_profile(0.3, UNIT)


@pytest.mark.parametrize("a", [0.025, 0.05])
def test_small_amplitude_profile_against_second_order_theory(solution, a):
    sol = solution(a)
    x = np.linspace(0.0, sol.half_length, 2001)
    err = np.max(np.abs(surface_elevation(sol, x) - second_order_profile(a, x))) / a
    # third-order terms are O(a^2) relative to a
    assert err < 0.5 * a * a


@pytest.mark.parametrize("a", [0.05, 0.1, 0.2])
def test_speed_against_weakly_nonlinear_series(solution, a):
    assert solution(a).froude == pytest.approx(fenton_speed(a), abs=2 * a**4)


def test_second_order_error_shrinks_fourfold(solution):
    errs = []
    for a in (0.05, 0.025):
        sol = solution(a)
        x = np.linspace(0.0, sol.half_length, 2001)
        errs.append(np.max(np.abs(surface_elevation(sol, x) - second_order_profile(a, x))) / a)
    assert errs[0] / errs[1] > 3.5


def test_solution_invariants(solution):
    sol = solution(0.3)
    assert sol.diagnostics.converged
    assert float(surface_elevation(sol, 0.0)) == pytest.approx(0.3, abs=1e-13)
    assert sol.mass_flux == pytest.approx(sol.speed * 1.0, rel=1e-12)
    assert sol.bernoulli_C == pytest.approx(0.5 * sol.speed**2, rel=1e-14)
    assert sol.froude > 1.0
    assert sol.odd_spectrum is None
    with pytest.raises(ValueError):
        sol.surface_spectrum[0] = 1.0
    x = np.linspace(0.0, sol.half_length, 501)
    assert np.max(np.abs(surface_elevation(sol, x) - surface_elevation(sol, -x))) <= 1e-12 * 0.3
    eta = surface_elevation(sol, x)
    assert np.all(np.diff(eta) < 1e-15)


def test_froude_mode_reproduces_amplitude_mode(solution):
    ref = solution(0.3)
    sol = solve_wave(UNIT, froude=ref.froude, modes=512)
    assert sol.amplitude == pytest.approx(0.3, abs=1e-9)


def test_both_targets_must_agree(solution):
    ref = solution(0.3)
    assert solve_wave(UNIT, amplitude=0.3, froude=ref.froude).froude == pytest.approx(ref.froude)
    with pytest.raises(InputConflict):
        solve_wave(UNIT, amplitude=0.3, froude=ref.froude + 0.01)


def test_dimensional_solution_scales(solution):
    env = Environment(gravity=9.81, depth=2.0)
    sol = solve_wave(env, amplitude=0.6, modes=512)
    unit = solution(0.3)
    assert sol.froude == pytest.approx(unit.froude, rel=1e-12)
    assert sol.speed == pytest.approx(unit.froude * math.sqrt(9.81 * 2.0), rel=1e-12)
    assert sol.half_length == pytest.approx(2.0 * unit.half_length)


@pytest.mark.parametrize("kwargs,error", [
    ({"amplitude": 0.3, "modes": 63}, InvalidInput),
    ({"amplitude": 0.3, "modes": 96}, InvalidInput),
    ({"froude": 0.9}, FroudeSubcritical),
    ({"froude": 1.0}, FroudeSubcritical),
    ({"amplitude": 0.85}, AmplitudeCapExceeded),
    ({"amplitude": -0.1}, AmplitudeOutOfRange),
    ({}, InvalidInput),
    ({"amplitude": 0.3, "tol": 0.0}, InvalidInput),
])
def test_invalid_requests(kwargs, error):
    with pytest.raises(error):
        solve_wave(UNIT, **kwargs)


def test_subcritical_message_mentions_supercritical():
    with pytest.raises(FroudeSubcritical, match="supercritical"):
        solve_wave(UNIT, froude=0.9)


def test_unreachable_tolerance_reports_partial_solution():
    with pytest.raises(NoConvergence) as info:
        solve_wave(UNIT, amplitude=0.1, modes=64, tol=1e-18)
    assert info.value.solution is not None
    assert not info.value.solution.diagnostics.converged


def test_continuation_warm_start(solution):
    sols = continue_amplitude(UNIT, [0.1, 0.2], modes=512)
    assert [s.amplitude for s in sols] == pytest.approx([0.1, 0.2], abs=1e-12)
    assert sols[0].froude == pytest.approx(solution(0.1).froude, abs=1e-12)
    with pytest.raises(InvalidInput):
        continue_amplitude(UNIT, [0.2, 0.1])


def test_residual_report(solution):
    rep = residuals(solution(0.1))
    for name, value in rep.as_dict().items():
        assert value <= 1e-10, name


def test_still_water_is_exactly_flat():
    sol = WaveSolution.still_water(UNIT, froude=1.2)
    assert sol.is_still_water
    assert sol.mass_flux == pytest.approx(1.2)
    assert residuals(sol).bernoulli_surface_residual == 0.0


@pytest.mark.parametrize("a", [0.1, 0.3])
def test_surface_tail_decays_at_dispersion_rate(solution, a):
    sol = solution(a)
    x = np.linspace(0.0, sol.half_length, 2000)
    eta = surface_elevation(sol, x)
    window = (eta / a < 1e-2) & (eta / a > 1e-8)
    slope = np.polyfit(x[window], np.log(eta[window]), 1)[0]
    assert -slope == pytest.approx(decay_rate(sol.froude), rel=0.02)
