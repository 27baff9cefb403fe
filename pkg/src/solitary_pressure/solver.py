"""Steady solitary waves by Newton iteration on the conformal surface equation.

The wave is computed as one period of a very long periodic wave whose trough
sits exactly at y = 0 over a bed at y = -d.  In the strip variables the
Laplace equation, the bed condition, the kinematic condition and constancy of
the stream function on the boundaries hold by construction, so the only
equation left to solve is Bernoulli on the surface,

    q^2 / (2 |z'|^2) + eta = c^2 / 2          (g = d = 1, P = P_atm on the surface)

collocated at the conformal nodes alpha_j = j L / N, j = 0..N.  Unknowns are the
cosine coefficients of the surface, the conformal depth D, the strip speed q
and the wave speed c; the two extra equations pin the crest elevation (or the
Froude number) and put the trough on y = 0.
"""
from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.fft import dct
from scipy.optimize import brentq

from .core import Environment, critical_speed, nondimensionalize
from .errors import (
    AmplitudeCapExceeded,
    AmplitudeOutOfRange,
    FroudeSubcritical,
    InputConflict,
    InvalidInput,
    NoConvergence,
    TruncationWarning,
)
from .strip import StripMap

log = logging.getLogger(__name__)

DEFAULT_CAP = 0.79
NEWTON_MAX_ITER = 50
TAIL_TARGET = 1e-10  # truncation tail at x = L, relative to the amplitude
SPECTRAL_TAIL_TARGET = 1e-8


@dataclass(frozen=True)
class Diagnostics:
    iterations: int
    residual: float
    spectral_tail: float
    truncation_tail: float
    converged: bool = True
    method: str = "newton"
    continuation: tuple = ()
    warnings: tuple = ()


@dataclass(frozen=True, eq=False)
class WaveSolution:
    """A converged solitary wave.

    Scalars are dimensional; ``surface_spectrum`` (cosine coefficients of the
    surface in the conformal variable), ``conformal_depth`` and ``strip_speed``
    are in units where g = d = 1.
    """

    env: Environment
    amplitude: float
    speed: float
    froude: float
    bernoulli_C: float
    mass_flux: float
    surface_spectrum: np.ndarray
    conformal_depth: float
    strip_speed: float
    half_length: float
    diagnostics: Diagnostics
    odd_spectrum: Optional[np.ndarray] = None
    amplitude_cap: float = DEFAULT_CAP

    def __post_init__(self):
        spec = np.array(self.surface_spectrum, dtype=float)
        spec.setflags(write=False)
        object.__setattr__(self, "surface_spectrum", spec)
        if self.odd_spectrum is not None:
            odd = np.array(self.odd_spectrum, dtype=float)
            if odd.shape != spec.shape:
                raise InvalidInput("odd_spectrum must match surface_spectrum in length")
            odd.setflags(write=False)
            object.__setattr__(self, "odd_spectrum", odd)

    @property
    def modes(self) -> int:
        return int(self.surface_spectrum.size)

    @property
    def scaled(self):
        return nondimensionalize(self.env)

    @property
    def is_still_water(self) -> bool:
        return self.amplitude == 0.0 and not np.any(self.surface_spectrum)

    def strip_map(self) -> StripMap:
        return StripMap(
            self.surface_spectrum,
            self.odd_spectrum,
            self.conformal_depth,
            self.half_length / self.env.depth,
        )

    def with_odd_spectrum(self, odd: np.ndarray) -> "WaveSolution":
        """Copy with an antisymmetric surface component (used for negative controls)."""
        return replace(self, odd_spectrum=np.asarray(odd, dtype=float))

    @classmethod
    def still_water(cls, env: Environment, froude: float = 1.1, modes: int = 64,
                    half_length: float = 40.0) -> "WaveSolution":
        """The flat state seen from a frame moving at ``froude * sqrt(g d)``."""
        c = froude * critical_speed(env)
        return cls(
            env=env,
            amplitude=0.0,
            speed=c,
            froude=froude,
            bernoulli_C=0.5 * c * c + env.p_atm,
            mass_flux=c * env.depth,
            surface_spectrum=np.zeros(modes),
            conformal_depth=1.0,
            strip_speed=froude,
            half_length=half_length * env.depth,
            diagnostics=Diagnostics(0, 0.0, 0.0, 0.0, method="still-water"),
        )


# ---------------------------------------------------------------------------
# asymptotics


def kdv_profile(a: float, env: Environment) -> tuple[Callable[[np.ndarray], np.ndarray], float]:
    """First-order (KdV) solitary wave: eta = a sech^2(x sqrt(3a / 4d^3)), c = sqrt(g(d + a))."""
    d = env.depth
    if not (a > 0) or a > 0.2 * d:
        raise AmplitudeOutOfRange(f"KdV profile requires 0 < a <= 0.2 d, got a = {a}")
    kappa = math.sqrt(3.0 * a / (4.0 * d**3))

    def eta(x):
        return a / np.cosh(kappa * np.asarray(x, dtype=float)) ** 2

    return eta, math.sqrt(env.gravity * (d + a))


def decay_rate(froude: float) -> float:
    """Spatial decay rate mu d of a solitary wave: the root of tan(mu d) = F^2 mu d in (0, pi/2)."""
    if froude <= 1.0:
        raise FroudeSubcritical("decay rate only exists for supercritical waves (F > 1)")
    f2 = froude * froude
    lo = min(1e-3, 0.5 * math.sqrt(3.0 * (f2 - 1.0)))
    hi = 0.5 * math.pi - 1e-12
    return brentq(lambda t: math.tan(t) - f2 * t, lo, hi, xtol=1e-15, rtol=1e-15)


def auto_half_length(amplitude: float) -> float:
    """Nondimensional half-length for which the tail at x = L is ~1e-11 a.

    Uses the decay rate of the KdV speed estimate; the solver extends the
    domain afterwards if the measured tail turns out larger.
    """
    mu = decay_rate(math.sqrt(1.0 + amplitude))
    need = math.log(4.0 / (0.1 * TAIL_TARGET)) / mu
    return max(20.0, 5.0 * math.ceil(need / 5.0))


# ---------------------------------------------------------------------------
# Newton iteration


@dataclass
class _State:
    A: np.ndarray
    D: float
    q: float
    c: float
    L: float


@dataclass
class _Grid:
    N: int
    L: float
    k: np.ndarray = field(init=False)
    C: np.ndarray = field(init=False)
    S: np.ndarray = field(init=False)

    def __post_init__(self):
        n = np.arange(1, self.N + 1)
        j = np.arange(self.N + 1)
        # k_n alpha_j = pi (j n mod 2N) / N keeps the node trig values exact to rounding
        m = np.outer(j, n) % (2 * self.N)
        self.C = np.cos(np.pi * m / self.N)
        self.S = np.sin(np.pi * m / self.N)
        self.k = np.pi * n / self.L

    @property
    def alpha(self):
        return np.arange(self.N + 1) * self.L / self.N


def _surface_terms(st: _State, g: _Grid):
    coth = 1.0 / np.tanh(g.k * st.D)
    Y = g.C @ st.A
    Xa = g.C @ (st.A * g.k * coth)
    Ya = -(g.S @ (st.A * g.k))
    J = (1.0 + Xa) ** 2 + Ya**2
    return coth, Y, Xa, Ya, J


def _residual(st: _State, g: _Grid, kind: str, value: float):
    _, Y, Xa, Ya, J = _surface_terms(st, g)
    eta = st.D - 1.0 + Y
    R = st.q**2 / (2.0 * J) + eta - 0.5 * st.c**2
    first = eta[0] - value if kind == "amplitude" else st.c - value
    return np.concatenate([R, [first, eta[-1]]])


def _jacobian(st: _State, g: _Grid, kind: str):
    N = g.N
    k = g.k
    coth, Y, Xa, Ya, J = _surface_terms(st, g)
    w = -(st.q**2) / (2.0 * J**2)
    dJdA = (2.0 * (1.0 + Xa))[:, None] * (g.C * (k * coth)) - (2.0 * Ya)[:, None] * (g.S * k)
    dXa_dD = g.C @ (st.A * k * (-k / np.sinh(k * st.D) ** 2))
    Jm = np.zeros((N + 3, N + 3))
    Jm[: N + 1, :N] = w[:, None] * dJdA + g.C
    Jm[: N + 1, N] = w * 2.0 * (1.0 + Xa) * dXa_dD + 1.0
    Jm[: N + 1, N + 1] = st.q / J
    Jm[: N + 1, N + 2] = -st.c
    if kind == "amplitude":
        Jm[N + 1, :N] = g.C[0]
        Jm[N + 1, N] = 1.0
    else:
        Jm[N + 1, N + 2] = 1.0
    Jm[N + 2, :N] = g.C[-1]
    Jm[N + 2, N] = 1.0
    return Jm


def _newton(st: _State, g: _Grid, kind: str, value: float, tol: float, max_iter: int = NEWTON_MAX_ITER):
    F = _residual(st, g, kind, value)
    res = float(np.max(np.abs(F)))
    it = 0
    while res > tol and it < max_iter:
        it += 1
        try:
            delta = np.linalg.solve(_jacobian(st, g, kind), -F)
        except np.linalg.LinAlgError:
            break
        lam = 1.0
        while True:
            trial = _State(st.A + lam * delta[: g.N], st.D + lam * delta[g.N],
                           st.q + lam * delta[g.N + 1], st.c + lam * delta[g.N + 2], st.L)
            if trial.D > 0:
                F_new = _residual(trial, g, kind, value)
                res_new = float(np.max(np.abs(F_new)))
                if np.isfinite(res_new) and (res_new < res or lam < 1.0 / 512):
                    break
            lam *= 0.5
            if lam < 1.0 / 4096:
                trial = None
                break
        if trial is None:
            break
        st, F, res = trial, F_new, res_new
        log.debug("newton %s=%g N=%d iter %d residual %.3e (step %g)", kind, value, g.N, it, res, lam)
    return st, res, it


def _kdv_state(a: float, g: _Grid) -> _State:
    kappa = math.sqrt(3.0 * a / 4.0)
    eta = a / np.cosh(kappa * g.alpha) ** 2
    return _state_from_eta(eta, g, math.sqrt(1.0 + a))


def _state_from_eta(eta: np.ndarray, g: _Grid, c: float) -> _State:
    coef = dct(eta, type=1) / g.N
    coef[-1] *= 0.5
    A = coef[1:].copy()
    D = 1.0 - float(g.C[-1] @ A)
    q = c * _trough_stretch(A, D, g)
    return _State(A, D, q, c, g.L)


def _trough_stretch(A, D, g: _Grid) -> float:
    coth = 1.0 / np.tanh(g.k * D)
    Xa = float(g.C[-1] @ (A * g.k * coth))
    return 1.0 + Xa


def _resample(prev: _State, g: _Grid) -> _State:
    """Warm start on a new grid from the surface elevation of a previous state."""
    if prev.L == g.L and prev.A.size <= g.N:
        A = np.zeros(g.N)
        A[: prev.A.size] = prev.A
        return _State(A, prev.D, prev.q, prev.c, g.L)
    smap = StripMap(prev.A, None, prev.D, prev.L)
    alpha = np.minimum(g.alpha, prev.L)
    eta = smap.surface_elevation_at(alpha)
    eta[g.alpha > prev.L] = 0.0
    return _state_from_eta(eta, g, prev.c)


def _amplitude_path(a_from: float, a_to: float) -> list:
    path = []
    a = a_from
    while a < a_to - 1e-12:
        step = 0.05 if a < 0.6 - 1e-12 else 0.025
        a = min(a_to, round(a + step, 12))
        path.append(a)
    return path or [a_to]


def _state_to_surface(st: _State, g: _Grid):
    coth, Y, *_ = _surface_terms(st, g)
    x = g.alpha + g.S @ (st.A * coth)
    eta = st.D - 1.0 + Y
    return x, eta


def _spectral_tail(A: np.ndarray) -> float:
    lead = np.max(np.abs(A))
    if lead == 0:
        return 0.0
    n_tail = max(1, A.size // 20)
    return float(np.max(np.abs(A[-n_tail:])) / lead)


def _truncation_tail(st: _State, g: _Grid, amplitude: float) -> float:
    """Solitary-wave elevation the periodic domain cuts off at x = L (nondimensional).

    Extrapolates the surface from the range where it is small but still well
    above the periodic-image level, using the linear decay rate.
    """
    x, eta = _state_to_surface(st, g)
    mu = decay_rate(st.c)
    window = (eta > 1e-6 * amplitude) & (eta < 1e-2 * amplitude)
    if np.count_nonzero(window) < 3:
        # domain too short for a clean asymptotic window: take the smallest resolved value
        window = eta > 0
        if not np.any(window):
            return 0.0
        i = np.argmin(np.where(window, eta, np.inf))
        return float(eta[i] * math.exp(-mu * (g.L - x[i])))
    est = eta[window] * np.exp(-mu * (g.L - x[window]))
    return float(np.median(est))


def default_modes(a: float) -> int:
    """Mode count that keeps surface residuals near rounding level up to a/d = a."""
    if a <= 0.3:
        return 512
    if a <= 0.5:
        return 1024
    return 2048


def _validate_modes(modes) -> int:
    if isinstance(modes, bool) or not isinstance(modes, (int, np.integer)):
        raise InvalidInput(f"modes must be an integer power of two >= 64, got {modes!r}")
    modes = int(modes)
    if modes < 64 or modes & (modes - 1):
        raise InvalidInput(f"modes must be a power of two >= 64, got {modes}")
    return modes


class _Stalled(Exception):
    def __init__(self, message, st, grid, res, iterations, history, amplitude):
        super().__init__(message)
        self.args_ = (st, grid, res, iterations, history)
        self.amplitude = amplitude


def _solve_periodic(kind: str, value: float, N: int, L: float, tol: float,
                    initial: Optional[_State], a_hint: float, cap: float):
    """Newton with amplitude continuation for one fixed half-length."""
    coarse = _Grid(min(N, 1024), L)
    history = []
    iterations = 0
    a_target = value if kind == "amplitude" else a_hint
    if initial is not None:
        st = _resample(initial, coarse)
        a_start = float(st.D - 1.0 + coarse.C[0] @ st.A)
    else:
        a_start = min(a_target, 0.3)
        st = _kdv_state(a_start, coarse)
        st, res, it = _newton(st, coarse, "amplitude", a_start, tol)
        iterations += it
        history.append(a_start)
        if res > tol:
            raise _Stalled(f"no convergence at amplitude {a_start:g} (residual {res:.2e})",
                           st, coarse, res, iterations, tuple(history), a_start)
    if abs(a_target - a_start) > 1e-12:
        for a in _amplitude_path(a_start, a_target) if a_target > a_start else [a_target]:
            st, res, it = _newton(st, coarse, "amplitude", a, tol)
            iterations += it
            history.append(a)
            if res > tol:
                raise _Stalled(f"continuation failed at amplitude {a:g} (residual {res:.2e})",
                               st, coarse, res, iterations, tuple(history), a)
    fine = coarse if coarse.N == N else _Grid(N, L)
    st = _resample(st, fine)
    st, res, it = _newton(st, fine, kind, value, tol)
    iterations += it
    return st, fine, res, iterations, tuple(history)


def solve_wave(env: Environment, amplitude: Optional[float] = None, froude: Optional[float] = None,
               modes: int = 512, half_length: Optional[float] = None, tol: float = 1e-12,
               amplitude_cap: float = DEFAULT_CAP, extend: bool = True,
               initial: Optional[WaveSolution] = None) -> WaveSolution:
    """Compute the solitary wave of given crest elevation or Froude number.

    ``half_length`` (dimensional) defaults to a value sized from the expected
    decay rate; when ``extend`` is set the domain grows until the truncated
    tail is below 1e-10 of the amplitude.
    """
    N = _validate_modes(modes)
    if not (tol > 0):
        raise InvalidInput(f"tol must be positive, got {tol}")
    if not (0 < amplitude_cap):
        raise InvalidInput("amplitude_cap must be positive")
    d = env.depth
    vel = critical_speed(env)
    if amplitude is None and froude is None:
        raise InvalidInput("either amplitude or froude must be given")
    if froude is not None and not froude > 1.0:
        raise FroudeSubcritical(
            f"Froude number {froude} <= 1: solitary waves exist only for supercritical "
            f"speeds c > sqrt(g d) = {vel:.6g}")
    if amplitude is not None:
        a = amplitude / d
        if not (a > 0):
            raise AmplitudeOutOfRange(f"amplitude must be positive, got {amplitude}")
        if a > amplitude_cap:
            raise AmplitudeCapExceeded(
                f"amplitude {amplitude} exceeds the cap {amplitude_cap} d (smooth-wave regime)")
        kind, value, a_hint = "amplitude", a, a
    else:
        kind, value = "froude", float(froude)
        a_hint = min(froude**2 - 1.0, amplitude_cap)

    L = auto_half_length(a_hint) if half_length is None else half_length / d
    if not (L > 0):
        raise InvalidInput("half_length must be positive")
    init_state = None
    if initial is not None:
        init_state = _State(np.array(initial.surface_spectrum), initial.conformal_depth,
                            initial.strip_speed, initial.froude, initial.half_length / d)

    notes = []
    for attempt in range(6):
        try:
            st, grid, res, iterations, history = _solve_periodic(
                kind, value, N, L, tol, init_state, a_hint, amplitude_cap)
        except _Stalled as exc:
            st, grid, res, iterations, history = exc.args_
            a_now = float(st.D - 1.0 + grid.C[0] @ st.A)
            partial = _build(env, st, grid, a_now, res, iterations, history, False, (), amplitude_cap)
            raise NoConvergence(str(exc), solution=partial, amplitude=exc.amplitude * d) from None
        a_now = float(st.D - 1.0 + grid.C[0] @ st.A)
        if res > tol:
            partial = _build(env, st, grid, a_now, res, iterations, history, False, (), amplitude_cap)
            raise NoConvergence(
                f"Newton iteration did not reach tol={tol:g} (residual {res:.2e}) at "
                f"{kind} {value:g}", solution=partial, amplitude=a_now * d)
        tail = _truncation_tail(st, grid, a_now)
        if not extend or tail <= TAIL_TARGET * a_now:
            break
        mu = decay_rate(st.c)
        grow = math.log(tail / (0.1 * TAIL_TARGET * a_now)) / mu
        L_new = 5.0 * math.ceil((L + max(grow, 5.0)) / 5.0)
        notes.append(f"half-length extended from {L:g} to {L_new:g} (tail {tail:.1e})")
        log.info(notes[-1])
        L = L_new
        init_state = st

    if st.c <= 1.0:
        raise FroudeSubcritical(f"converged speed c = {st.c * vel:.6g} is not supercritical")
    if kind == "froude" and a_now > amplitude_cap:
        raise AmplitudeCapExceeded(
            f"Froude number {froude} implies amplitude {a_now * d:.4g} above the cap {amplitude_cap} d")

    tail_spec = _spectral_tail(st.A)
    if tail_spec > SPECTRAL_TAIL_TARGET:
        msg = f"spectral tail {tail_spec:.1e} above {SPECTRAL_TAIL_TARGET:g}; increase modes"
        notes.append(msg)
        warnings.warn(msg, TruncationWarning, stacklevel=2)
    tail = _truncation_tail(st, grid, a_now)
    if tail > TAIL_TARGET * a_now:
        msg = f"truncation tail {tail:.1e} above {TAIL_TARGET:g} a; increase half_length"
        notes.append(msg)
        warnings.warn(msg, TruncationWarning, stacklevel=2)
    sol = _build(env, st, grid, a_now, res, iterations, history, True, tuple(notes), amplitude_cap)
    if amplitude is not None and froude is not None and abs(sol.froude - froude) > 1e-6:
        raise InputConflict(
            f"amplitude {amplitude} gives Froude {sol.froude:.8f}, inconsistent with requested {froude}")
    return sol


def _build(env, st, grid, a_now, res, iterations, history, converged, notes, cap) -> WaveSolution:
    sc = nondimensionalize(env)
    speed = st.c * sc.velocity
    diag = Diagnostics(
        iterations=iterations,
        residual=float(res),
        spectral_tail=_spectral_tail(st.A),
        truncation_tail=_truncation_tail(st, grid, a_now) if converged else float("nan"),
        converged=converged,
        continuation=history,
        warnings=notes,
    )
    return WaveSolution(
        env=env,
        amplitude=a_now * sc.length,
        speed=speed,
        froude=st.c,
        bernoulli_C=0.5 * speed * speed + env.p_atm,
        mass_flux=st.q * st.D * sc.stream,
        surface_spectrum=st.A,
        conformal_depth=st.D,
        strip_speed=st.q,
        half_length=grid.L * sc.length,
        diagnostics=diag,
        amplitude_cap=cap,
    )


def continue_amplitude(env: Environment, a_list: Sequence[float], modes: int = 512,
                       tol: float = 1e-12, amplitude_cap: float = DEFAULT_CAP,
                       half_length: Optional[float] = None) -> list:
    """Solve along ascending amplitudes, each solve warm-started from the last."""
    a_list = [float(a) for a in a_list]
    if any(b <= a for a, b in zip(a_list, a_list[1:])):
        raise InvalidInput("amplitude list must be strictly ascending")
    out = []
    prev = None
    for a in a_list:
        try:
            prev = solve_wave(env, amplitude=a, modes=modes, half_length=half_length, tol=tol,
                              amplitude_cap=amplitude_cap, initial=prev)
        except NoConvergence as exc:
            raise NoConvergence(f"continuation failed at amplitude {a}: {exc}",
                                solution=exc.solution, amplitude=a) from exc
        out.append(prev)
    return out


# ---------------------------------------------------------------------------
# residuals


@dataclass(frozen=True)
class ResidualReport:
    """Governing-equation residuals, nondimensional (g = d = 1)."""

    laplace_residual: float
    bernoulli_surface_residual: float
    kinematic_surface_residual: float
    bed_residual: float
    decay_residual: float

    def as_dict(self) -> dict:
        return {
            "laplace_residual": self.laplace_residual,
            "bernoulli_surface_residual": self.bernoulli_surface_residual,
            "kinematic_surface_residual": self.kinematic_surface_residual,
            "bed_residual": self.bed_residual,
            "decay_residual": self.decay_residual,
        }


@dataclass(frozen=True)
class ProbeSpec:
    """Where residuals are probed.

    ``surface_refinement`` r puts r*N surface probes on nodes offset by half a
    probe spacing from the solver's collocation nodes.
    """

    surface_refinement: int = 2
    stations: int = 48
    depths: int = 9
    kinematic_stations: int = 96
    fd_step: float = 0.01


def residuals(sol: WaveSolution, probe: Optional[ProbeSpec] = None) -> ResidualReport:
    from . import fields

    probe = probe or ProbeSpec()
    ff = fields.flow_field(sol)
    smap = ff.strip
    L = smap.L
    c = sol.froude

    M = probe.surface_refinement * sol.modes
    alpha = (np.arange(M) + 0.5) * L / M
    z, dz, _ = smap.evaluate(alpha, 0.0)
    q2 = sol.strip_speed**2 / np.abs(dz) ** 2
    bern = np.max(np.abs(0.5 * q2 + z.imag - 0.5 * c * c)) if M else 0.0

    # kinematic condition with the surface slope from finite differences of eta(x)
    xs = (np.arange(probe.kinematic_stations) + 0.5) * (0.98 * L) / probe.kinematic_stations
    h = 2e-3
    stencil = np.array([-1, 9, -45, 0, 45, -9, 1]) / 60.0
    offsets = np.arange(-3, 4) * h
    eta_off = smap.surface_elevation_at(smap.invert_surface((xs[:, None] + offsets).ravel()))
    eta_x = eta_off.reshape(xs.size, 7) @ stencil / h
    a_s = smap.invert_surface(xs)
    _, dz_s, _ = smap.evaluate(a_s, 0.0)
    w = -sol.strip_speed / dz_s
    kin = np.max(np.abs(-w.imag - w.real * eta_x))

    xb = np.linspace(0.0, L, probe.stations)
    ab = smap.invert_bed(xb)
    _, dz_b, _ = smap.evaluate(ab, -smap.D)
    bed = np.max(np.abs((-sol.strip_speed / dz_b).imag))

    # Laplacian of psi by a fourth-order five-point-per-axis stencil
    lap = 0.0
    hl = probe.fd_step
    xi = np.linspace(0.0, 0.9 * L, probe.stations)
    eta_i = smap.surface_elevation_at(smap.invert_surface(xi))
    X, Y = [], []
    for x0, e0 in zip(xi, eta_i):
        ys = np.linspace(-1.0 + 3 * hl, e0 - 3 * hl, probe.depths)
        X.append(np.full(ys.shape, x0))
        Y.append(ys)
    if X:
        X = np.concatenate(X)
        Y = np.concatenate(Y)
        d4 = np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / (12.0 * hl * hl)
        o = np.arange(-2, 3) * hl
        px = np.repeat(X, 5) + np.tile(o, X.size)
        py = np.repeat(Y, 5)
        psi_x = ff.psi_nd(px, py).reshape(-1, 5) @ d4
        qx = np.repeat(X, 5)
        qy = np.repeat(Y, 5) + np.tile(o, Y.size)
        psi_y = ff.psi_nd(qx, qy).reshape(-1, 5) @ d4
        lap = float(np.max(np.abs(psi_x + psi_y)))

    ys = np.linspace(-1.0, smap.surface_elevation_at(np.array([L]))[0], probe.depths)
    state = ff.state_nd(np.full(ys.shape, L), ys)
    decay = abs(float(smap.surface_elevation_at(np.array([L]))[0])) + float(
        np.max(np.abs(state["u"]))) + float(np.max(np.abs(state["v"])))
    return ResidualReport(
        laplace_residual=lap,
        bernoulli_surface_residual=float(bern),
        kinematic_surface_residual=float(kin),
        bed_residual=float(bed),
        decay_residual=decay,
    )
