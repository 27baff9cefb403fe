import functools

import pytest

from solitary_pressure import Environment, WaveSolution, solve_wave
from solitary_pressure.solver import default_modes

UNIT = Environment()


@functools.lru_cache(maxsize=None)
def cached_solution(amplitude, gravity=1.0, depth=1.0, modes=None):
    env = Environment(gravity=gravity, depth=depth)
    return solve_wave(env, amplitude=amplitude, modes=modes or default_modes(amplitude / depth))


@pytest.fixture(scope="session")
def solution():
    return cached_solution


@pytest.fixture(scope="session")
def wave03():
    return cached_solution(0.3)


@pytest.fixture(scope="session")
def still():
    return WaveSolution.still_water(UNIT)


def pytest_configure(config):
    config._acceptance_lines = {}


@pytest.fixture
def criterion(request):
    """Record the outcome line of one acceptance criterion for the terminal summary."""

    def record(number, passed, detail):
        line = f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}"
        request.config._acceptance_lines[number] = line
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = getattr(config, "_acceptance_lines", {})
    if lines:
        terminalreporter.section("acceptance criteria")
        for number in sorted(lines):
            terminalreporter.write_line(lines[number])
