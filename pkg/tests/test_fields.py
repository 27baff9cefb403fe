import csv
import io
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from solitary_pressure import (
    Environment,
    GridSpec,
    dynamic_pressure,
    flow_field,
    half_domain_grid,
    mass_flux,
    pressure_gradient,
    sample_grid,
    solve_wave,
    stream_function,
    surface_elevation,
    total_pressure,
    velocity,
)
from solitary_pressure.errors import OutOfDomain


@pytest.fixture(scope="module")
def wave_atm():
    return solve_wave(Environment(gravity=9.81, depth=2.0, p_atm=3.5), amplitude=0.6, modes=512)


def test_stream_function_boundary_values(wave03):
    x = np.linspace(-20, 20, 41)
    eta = surface_elevation(wave03, x)
    assert np.max(np.abs(stream_function(wave03, x, eta))) < 1e-14
    assert np.max(np.abs(stream_function(wave03, x, -1.0) - wave03.mass_flux)) < 1e-13


def test_stream_function_is_harmonic(wave03):
    h = 1e-3
    x0, y0 = np.array([0.0, 0.8, 3.0]), np.array([-0.4, -0.2, -0.7])
    psi = lambda dx, dy: stream_function(wave03, x0 + dx, y0 + dy)
    lap = (psi(h, 0) + psi(-h, 0) + psi(0, h) + psi(0, -h) - 4 * psi(0, 0)) / h**2
    assert np.max(np.abs(lap)) < 1e-5


def test_velocity_from_stream_function(wave03):
    h = 1e-5
    x0, y0 = np.array([0.5, 2.0]), np.array([-0.3, -0.6])
    u, v = velocity(wave03, x0, y0)
    dpsi_dy = (stream_function(wave03, x0, y0 + h) - stream_function(wave03, x0, y0 - h)) / (2 * h)
    dpsi_dx = (stream_function(wave03, x0 + h, y0) - stream_function(wave03, x0 - h, y0)) / (2 * h)
    # relative flow (u - c, v) with psi_y = u - c and psi_x = -v
    assert np.allclose(dpsi_dy, u - wave03.speed, atol=1e-8)
    assert np.allclose(dpsi_dx, -v, atol=1e-8)


def test_pressure_boundary_and_far_field(wave_atm):
    sol, env = wave_atm, wave_atm.env
    x = np.linspace(0, sol.half_length, 50)
    eta = surface_elevation(sol, x)
    assert np.max(np.abs(total_pressure(sol, x, eta) - env.p_atm)) < 1e-12 * env.gravity * env.depth
    assert np.max(np.abs(dynamic_pressure(sol, x, eta) - env.gravity * eta)) < 1e-10 * env.gravity * env.depth
    far = sol.half_length
    ys = np.linspace(-2.0, 0.0, 5)
    assert np.allclose(total_pressure(sol, np.full(5, far), ys), env.p_atm - env.gravity * ys, atol=1e-9)
    u, v = velocity(sol, np.full(5, far), ys)
    assert np.max(np.abs(u)) < 1e-9 and np.max(np.abs(v)) < 1e-9


def test_dimensional_fields_scale_from_unit_solution(solution, wave_atm):
    unit = solution(0.3)
    gd = 9.81 * 2.0
    x, y = np.array([0.0, 1.0, 5.0]), np.array([-0.5, -0.1, -0.9])
    p_unit = dynamic_pressure(unit, x, y)
    p_dim = dynamic_pressure(wave_atm, 2 * x, 2 * y)
    assert np.allclose(p_dim, gd * p_unit, rtol=1e-10, atol=1e-12)


def test_pressure_gradient_by_differences(wave03):
    h = 1e-5
    x0, y0 = np.array([0.3, 1.7]), np.array([-0.5, -0.95])
    px, py = pressure_gradient(wave03, x0, y0)
    fx = (dynamic_pressure(wave03, x0 + h, y0) - dynamic_pressure(wave03, x0 - h, y0)) / (2 * h)
    fy = (dynamic_pressure(wave03, x0, y0 + h) - dynamic_pressure(wave03, x0, y0 - h)) / (2 * h)
    assert np.allclose(px, fx, atol=1e-9)
    assert np.allclose(py, fy, atol=1e-9)


def test_pressure_differences_match_direct(wave03):
    ff = flow_field(wave03)
    x0, y0 = np.array([0.4, 3.0]), np.array([-0.5, -0.3])
    offs = np.array([0.05, -0.05j, 0.02 + 0.03j])
    d = ff.pressure_differences(x0, y0, offs)
    for j, o in enumerate(offs):
        direct = dynamic_pressure(wave03, x0 + o.real, y0 + o.imag) - dynamic_pressure(wave03, x0, y0)
        assert np.allclose(d[:, j], direct, atol=1e-14)


@pytest.mark.parametrize("x", [0.0, 3.0, 17.5, 35.0])
def test_mass_flux_is_constant(wave03, x):
    assert mass_flux(wave03, x) == pytest.approx(wave03.mass_flux, rel=1e-12)


def test_mass_flux_far_field_is_speed_times_depth(wave_atm):
    assert mass_flux(wave_atm, wave_atm.half_length) == pytest.approx(wave_atm.speed * 2.0, rel=1e-11)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.0, 30.0), st.floats(0.0, 1.0))
def test_interior_symmetry_and_positivity(wave03, x, frac):
    eta = float(surface_elevation(wave03, x))
    y = -1.0 + frac * (eta + 1.0)
    u1, v1 = velocity(wave03, x, y)
    u2, v2 = velocity(wave03, -x, y)
    assert abs(u1 - u2) <= 1e-12 * wave03.speed
    assert abs(v1 + v2) <= 1e-12 * wave03.speed
    assert dynamic_pressure(wave03, x, y) > -1e-14


@pytest.mark.parametrize("x,y", [(0.0, 0.31), (1.0, -1.001), (36.0, -0.5)])
def test_points_outside_the_fluid(wave03, x, y):
    with pytest.raises(OutOfDomain):
        dynamic_pressure(wave03, x, y)


def test_half_domain_grid_layout(wave03):
    grid = half_domain_grid(wave03, 201, 41)
    assert len(grid) == 201 * 41
    assert grid.crest_index is not None
    assert grid.x[grid.crest_index] == 0.0
    assert grid.y[grid.crest_index] == pytest.approx(0.3, abs=1e-13)
    assert grid.surface.sum() == 201 and grid.bed.sum() == 201
    assert np.all(grid.y[grid.bed] == -1.0)
    text = grid.to_csv()
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["x", "y", "psi", "u", "v", "P", "p"]
    assert len(rows) == len(grid) + 1
    assert float(rows[1 + grid.crest_index][6]) == grid.p[grid.crest_index]
    doc = json.loads(grid.to_json_text())
    assert doc["crest_index"] == grid.crest_index
    assert len(doc["samples"]) == len(grid)


def test_single_column_and_empty_grids(wave03):
    col = half_domain_grid(wave03, 0, 41)
    assert len(col) == 41 and np.all(col.x == 0.0)
    empty = sample_grid(wave03, GridSpec(()))
    assert len(empty) == 0 and empty.crest_index is None


def test_grid_without_crest(wave03):
    grid = sample_grid(wave03, GridSpec(tuple(np.linspace(0.2, 10.0, 20)), 11))
    assert grid.crest_index is None
