"""Acceptance criteria 1-9, one summary line each (see the terminal summary)."""
import json
import math
import time
import warnings

import mpmath
import numpy as np
import pytest

from solitary_pressure import Environment, kdv_profile, residuals, solve_wave, surface_elevation
from solitary_pressure.cli import EXIT_INVALID, main
from solitary_pressure.fields import dynamic_pressure, flow_field, half_domain_grid
from solitary_pressure.gauge import FLAG_NEGATIVE, height_lower_bound, synth_trace
from solitary_pressure.verify import (
    Status,
    check_bernoulli_constant,
    check_boundary_monotonicity,
    check_crest_max,
    check_decay,
    check_hopf_signs,
    check_mass_flux,
    check_positivity,
    check_superharmonic,
    check_symmetry,
    corrupt_spectrum,
    fit_bed_decay,
    tail_offset_pressure,
)

UNIT = Environment()


def tan_root(F):
    """Decay rate from c^2 mu = g tanh(mu d) continued to imaginary wavenumber, i.e. tan(mu d) = F^2 mu d.

    High-precision bisection, independent of the package's root finder.
    """
    with mpmath.workdps(40):
        f2 = mpmath.mpf(F) ** 2
        lo, hi = mpmath.mpf("1e-8"), mpmath.pi / 2 - mpmath.mpf("1e-20")
        for _ in range(160):
            mid = (lo + hi) / 2
            if mpmath.tan(mid) - f2 * mid < 0:
                lo = mid
            else:
                hi = mid
        return float(lo)


def test_criterion_1_small_amplitude_consistency(criterion):
    errs, times = {}, {}
    for a in (0.05, 0.025):
        t0 = time.perf_counter()
        sol = solve_wave(UNIT, amplitude=a, modes=512, tol=1e-12)
        times[a] = time.perf_counter() - t0
        eta_kdv, _ = kdv_profile(a, UNIT)
        x = np.linspace(0.0, sol.half_length, 4001)
        errs[a] = float(np.max(np.abs(surface_elevation(sol, x) - eta_kdv(x))) / a)
    ratio = errs[0.05] / errs[0.025]
    ok = ratio >= 3.0 and max(times.values()) < 10.0
    criterion(1, ok, f"KdV error/a {errs[0.05]:.3e} -> {errs[0.025]:.3e}, ratio {ratio:.3f} (need >= 3); "
                     f"slowest solve {max(times.values()):.2f} s")
    assert max(times.values()) < 10.0
    assert ratio >= 3.0


def test_criterion_2_governing_residuals(solution, criterion):
    worst = {}
    ok = True
    for a in (0.1, 0.3, 0.5):
        sol = solution(a)
        rep = residuals(sol)
        eta_end = abs(float(surface_elevation(sol, sol.half_length)))
        vals = {"bernoulli": rep.bernoulli_surface_residual, "kinematic": rep.kinematic_surface_residual,
                "bed": rep.bed_residual}
        ok &= all(v <= 1e-10 for v in vals.values())
        ok &= eta_end <= 1e-10 * a and sol.diagnostics.truncation_tail <= 1e-10 * a
        for k, v in vals.items():
            worst[k] = max(worst.get(k, 0.0), v)
        worst["eta(L)/a"] = max(worst.get("eta(L)/a", 0.0), eta_end / a,
                                sol.diagnostics.truncation_tail / a)
    criterion(2, ok, ", ".join(f"{k} {v:.1e}" for k, v in worst.items()))
    assert ok


def test_criterion_3_pressure_extrema(solution, criterion):
    lines, ok, slowest = [], True, 0.0
    for a in (0.1, 0.3, 0.5, 0.7):
        t0 = time.perf_counter()
        sol = solution(a)
        grid = half_domain_grid(sol, 201, 41)
        found = [check_crest_max(grid), check_positivity(grid), *check_boundary_monotonicity(sol),
                 *check_hopf_signs(sol)]
        slowest = max(slowest, time.perf_counter() - t0)
        crest_at_node = grid.crest_index == int(np.argmax(grid.p))
        bad = [f.property_id.value for f in found if f.status is not Status.PASS]
        ok &= not bad and crest_at_node
        lines.append(f"a={a}: " + ("all pass" if not bad else "not pass: " + ",".join(bad)))
    ok &= slowest < 120.0
    criterion(3, ok, "; ".join(lines) + f"; slowest amplitude {slowest:.1f} s")
    assert ok


def test_criterion_4_superharmonic(solution, criterion):
    f = check_superharmonic(solution(0.3))
    criterion(4, f.status is Status.PASS, "; ".join(f.notes))
    assert f.status is Status.PASS
    assert f.margin >= 0.0


def test_criterion_5_constancy(solution, criterion):
    ok, worst = True, {"bernoulli": 0.0, "mass_flux": 0.0, "surface": 0.0}
    for a in (0.1, 0.3, 0.5, 0.7):
        sol = solution(a)
        b = check_bernoulli_constant(sol)
        m = check_mass_flux(sol)
        sm = sol.strip_map()
        alpha = np.arange(sol.modes + 1) * sm.L / sol.modes
        nodes, _, _ = sm.evaluate(alpha, 0.0)
        alpha_mid = alpha[:-1] + 0.5 * sm.L / sol.modes
        mid, _, _ = sm.evaluate(alpha_mid, 0.0)
        z = np.concatenate([nodes, mid])
        x = np.clip(z.real, 0.0, sol.half_length)
        surf = float(np.max(np.abs(dynamic_pressure(sol, x, surface_elevation(sol, x)) -
                                   surface_elevation(sol, x))))
        ok &= b.status is Status.PASS and m.status is Status.PASS and surf <= 1e-10
        worst["bernoulli"] = max(worst["bernoulli"], b.margin)
        worst["mass_flux"] = max(worst["mass_flux"], m.margin)
        worst["surface"] = max(worst["surface"], surf)
    criterion(5, ok, f"Bernoulli dev {worst['bernoulli']:.1e} (<=1e-9), flux spread {worst['mass_flux']:.1e} "
                     f"(<=1e-8), |p - g eta| {worst['surface']:.1e} (<=1e-10)")
    assert ok


def test_criterion_6_decay_rate(solution, criterion):
    parts, ok = [], True
    for a in (0.1, 0.3):
        sol = solution(a)
        xs = np.linspace(0.0, sol.half_length, 401)
        p_bed = flow_field(sol).state(xs, np.full(xs.shape, -1.0))["p"]
        mu_fit, _ = fit_bed_decay(xs, p_bed, 1e-11)
        mu_root = tan_root(sol.froude)
        rel = abs(mu_fit / mu_root - 1.0)
        ok &= rel <= 0.05 and check_decay(sol).status is Status.PASS
        parts.append(f"a={a}: fit {mu_fit:.5f} vs root {mu_root:.5f} ({rel:.1e})")
    criterion(6, ok, "; ".join(parts))
    assert ok


def test_criterion_6_real_tanh_relation_has_no_decaying_root(solution):
    """For F > 1, F^2 t = tanh t has no positive root, hence the continuation used above."""
    F = solution(0.1).froude
    t = np.linspace(1e-6, 50.0, 200001)
    assert np.all(F * F * t - np.tanh(t) > 0)


def test_criterion_7_height_bound(solution, criterion):
    amps = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7)
    sigma = 1e-3
    ok, parts = True, []
    for a in amps:
        sol = solution(a)
        eta0 = float(surface_elevation(sol, 0.0))
        st = np.linspace(-sol.half_length, sol.half_length, 401)
        h = height_lower_bound(synth_trace(sol, st)).h_lb
        below, fired = 0, 0
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            for seed in range(100):
                bound = height_lower_bound(synth_trace(sol, st, sigma, seed))
                below += bound.h_lb < eta0
                fired += FLAG_NEGATIVE in bound.flags
        ok &= 0.0 < h < eta0 and below >= 99 and fired == 0
        parts.append(f"a={a}: h_lb/eta0 {h / eta0:.4f}, noisy below {below}/100")
    criterion(7, ok, "; ".join(parts))
    assert ok


def test_criterion_8_negative_controls(solution, criterion, capsys, tmp_path, monkeypatch):
    sol = solution(0.3)
    sym = check_symmetry(corrupt_spectrum(sol, 1e-3)).status
    dec = check_decay(sol, pressure=tail_offset_pressure(sol, 1e-3)).status
    monkeypatch.chdir(tmp_path)
    capsys.readouterr()
    code = main(["solve", "--froude", "0.9"])
    err = capsys.readouterr().err
    ok = sym is Status.FAIL and dec is Status.FAIL and code == EXIT_INVALID and "supercritical" in err
    criterion(8, ok, f"SYMMETRY {sym.value}, DECAY {dec.value}, F=0.9 exit {code}")
    assert ok


def test_criterion_9_sweep_determinism(tmp_path, criterion):
    outputs = []
    for run in ("one", "two"):
        code = main(["sweep", "--amplitudes", "0.1,0.2,0.3", "--output-dir", str(tmp_path / run)])
        assert code == 0
        outputs.append(((tmp_path / run / "sweep.csv").read_bytes(), (tmp_path / run / "sweep.json").read_bytes()))
    same = outputs[0] == outputs[1]
    rows = json.loads(outputs[0][1])["rows"]
    criterion(9, same, f"{len(rows)} rows, CSV and JSON byte-identical: {same}")
    assert same
    assert all(r["status"] == "pass" for r in rows)
