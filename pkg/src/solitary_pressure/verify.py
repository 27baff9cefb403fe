"""Numerical checks of the extremal properties of the dynamic pressure.

Strict inequalities are judged against two floors: outside the tail region
(|x| < tail_start * half_length) a value only has to clear rounding level, in
the tail a value smaller than ``eps_mono * g * d`` is reported as
indeterminate instead of pass.  Tail-only indeterminates are noted but do not
spoil a pass.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional

import numpy as np

from .errors import (
    DenominatorVanishing,
    GridTooCoarse,
    NotConverged,
    SolitaryWaveError,
    StepTooLarge,
)
from .fields import FieldGrid, flow_field, half_domain_grid, mass_flux, surface_elevation
from .solver import WaveSolution, decay_rate


class PropertyId(str, Enum):
    CREST_MAX = "CREST_MAX"
    POSITIVITY = "POSITIVITY"
    MONO_BROKEN_LINE = "MONO_BROKEN_LINE"
    MONO_SURFACE = "MONO_SURFACE"
    DECAY = "DECAY"
    SUPERHARMONIC = "SUPERHARMONIC"
    HOPF_BED = "HOPF_BED"
    HOPF_CREST_LINE = "HOPF_CREST_LINE"
    SYMMETRY = "SYMMETRY"
    BERNOULLI_CONST = "BERNOULLI_CONST"
    MASS_FLUX_CONST = "MASS_FLUX_CONST"


class Status(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class Finding:
    property_id: PropertyId
    status: Status
    margin: float
    witness: Optional[tuple]
    tolerance_used: float
    notes: tuple = ()

    def __post_init__(self):
        if self.status is Status.FAIL and self.witness is None:
            raise ValueError(f"failed finding {self.property_id.value} needs a witness point")

    def to_json(self) -> dict:
        return {
            "property_id": self.property_id.value,
            "status": self.status.value,
            "margin": _num(self.margin),
            "witness": None if self.witness is None else [_num(v) for v in self.witness],
            "tolerance_used": _num(self.tolerance_used),
            "notes": list(self.notes),
        }


def _num(v):
    v = float(v)
    return v if math.isfinite(v) else None


@dataclass(frozen=True)
class VerifierConfig:
    stations: int = 201
    nodes: int = 41
    boundary_resolution: int = 400
    fd_step: float = 1e-3  # in units of d
    probes: int = 50
    eps_mono: float = 1e-9  # tail noise floor, units of g d
    eps_round: float = 1e-14  # rounding floor outside the tail, units of g d
    tail_start: float = 0.8
    decay_station: float = 0.95
    decay_limit: float = 1e-6
    decay_rate_tol: float = 0.05
    symmetry_tol: float = 1e-12
    bernoulli_tol: float = 1e-9
    bernoulli_samples: int = 1000
    mass_flux_stations: int = 16
    mass_flux_tol: float = 1e-8
    min_order: float = 1.9
    min_samples: int = 100

    def to_json(self) -> dict:
        return dict(self.__dict__)


@dataclass(frozen=True)
class VerificationReport:
    amplitude: float
    froude: float
    modes: int
    half_length: float
    findings: tuple
    config: VerifierConfig = field(default_factory=VerifierConfig)

    @property
    def overall(self) -> Status:
        statuses = {f.status for f in self.findings}
        if Status.FAIL in statuses:
            return Status.FAIL
        if Status.INDETERMINATE in statuses:
            return Status.INDETERMINATE
        return Status.PASS

    def finding(self, pid) -> Finding:
        pid = PropertyId(pid)
        return next(f for f in self.findings if f.property_id is pid)

    @property
    def has_notes(self) -> bool:
        return any(f.notes for f in self.findings)

    def to_json(self) -> dict:
        return {
            "solution": {
                "amplitude": self.amplitude,
                "froude": self.froude,
                "modes": self.modes,
                "half_length": self.half_length,
            },
            "findings": [f.to_json() for f in self.findings],
            "overall": self.overall.value,
            "config": self.config.to_json(),
        }

    def to_json_text(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    def to_table(self) -> str:
        rows = [f"{'property':<18} {'status':<14} {'margin':>12}  notes"]
        for f in self.findings:
            margin = "-" if not math.isfinite(f.margin) else f"{f.margin:12.4e}"
            rows.append(f"{f.property_id.value:<18} {f.status.value:<14} {margin:>12}  {'; '.join(f.notes)}")
        rows.append(f"overall: {self.overall.value}")
        return "\n".join(rows)


# ---------------------------------------------------------------------------
# helpers


def _gd(obj) -> float:
    env = obj.env
    return env.gravity * env.depth


def _classify(values, positions, tail_x, floor_tail, floor_round, sign=+1):
    """Label each value that should have the given strict sign as ok / fail / tie.

    Returns boolean arrays (ok, fail, tie_inside, tie_tail).
    """
    v = sign * np.asarray(values, dtype=float)
    tail = np.abs(np.asarray(positions, dtype=float)) >= tail_x
    floor = np.where(tail, floor_tail, floor_round)
    ok = v > floor
    fail = v < -floor
    tie = ~ok & ~fail
    return ok, fail, tie & ~tail, tie & tail


def _sign_finding(pid, values, points, tail_x, floor_tail, floor_round, sign, tolerance,
                  margin=None, extra_notes=()):
    values = np.asarray(values, dtype=float)
    points = np.asarray(points, dtype=float).reshape(-1, 2)
    ok, fail, tie_in, tie_tail = _classify(values, points[:, 0], tail_x, floor_tail, floor_round, sign)
    notes = list(extra_notes)
    if values.size == 0:
        return Finding(pid, Status.INDETERMINATE, float("nan"), None, tolerance, ("no samples",))
    signed = sign * values
    outside = np.abs(points[:, 0]) < tail_x
    if margin is None:
        pool = signed[outside] if np.any(outside) else signed
        margin = float(np.min(pool))
    if np.any(fail):
        i = int(np.argmin(np.where(fail, signed, np.inf)))
        return Finding(pid, Status.FAIL, margin, tuple(points[i]), tolerance,
                       tuple(notes + [f"{int(fail.sum())} sign violations"]))
    if np.any(tie_tail):
        notes.append(f"{int(tie_tail.sum())} tail samples near noise floor")
    if np.any(tie_in):
        i = int(np.argmax(tie_in))
        notes.append(f"{int(tie_in.sum())} indeterminate samples outside the tail")
        return Finding(pid, Status.INDETERMINATE, margin, tuple(points[i]), tolerance, tuple(notes))
    return Finding(pid, Status.PASS, margin, None, tolerance, tuple(notes))


# ---------------------------------------------------------------------------
# grid checks


def check_crest_max(grid: FieldGrid, config: VerifierConfig = VerifierConfig()) -> Finding:
    """Margin: p(crest) minus the largest other sample value (units of pressure)."""
    pid = PropertyId.CREST_MAX
    if len(grid) < config.min_samples:
        raise GridTooCoarse(f"{len(grid)} samples, need at least {config.min_samples}")
    tol = config.eps_round * grid.gravity * grid.depth
    if grid.crest_index is None:
        return Finding(pid, Status.INDETERMINATE, float("nan"), None, tol, ("crest not covered",))
    p = grid.p
    ic = grid.crest_index
    others = np.delete(p, ic)
    p_other = float(np.max(others))
    margin = float(p[ic]) - p_other
    if abs(margin) <= tol and np.ptp(p) <= tol:
        return Finding(pid, Status.INDETERMINATE, margin, None, tol, ("no unique argmax",))
    if margin > tol:
        return Finding(pid, Status.PASS, margin, None, tol)
    j = int(np.argmax(p))
    if margin >= -tol:
        return Finding(pid, Status.INDETERMINATE, margin, (float(grid.x[j]), float(grid.y[j])), tol,
                       ("maximum tied with another sample",))
    return Finding(pid, Status.FAIL, margin, (float(grid.x[j]), float(grid.y[j])), tol,
                   ("maximum away from the crest",))


def check_positivity(grid: FieldGrid, config: VerifierConfig = VerifierConfig()) -> Finding:
    """Margin: the smallest sampled dynamic pressure."""
    if len(grid) < config.min_samples:
        raise GridTooCoarse(f"{len(grid)} samples, need at least {config.min_samples}")
    gd = grid.gravity * grid.depth
    tail_x = config.tail_start * grid.half_length
    points = np.column_stack([grid.x, grid.y])
    margin = float(np.min(grid.p))
    return _sign_finding(PropertyId.POSITIVITY, grid.p, points, tail_x, config.eps_mono * gd,
                         config.eps_round * gd, +1, config.eps_mono, margin=margin)


# ---------------------------------------------------------------------------
# boundary checks


def broken_line_points(sol: WaveSolution, resolution: int):
    """Points on the crest line from crest to bed, then along the bed to x = half_length."""
    d = sol.env.depth
    eta0 = float(surface_elevation(sol, 0.0))
    total = eta0 + d + sol.half_length
    n_c = max(8, int(round(resolution * (eta0 + d) / total)))
    n_b = max(8, resolution - n_c)
    ys = np.linspace(eta0, -d, n_c + 1)
    xs = np.linspace(0.0, sol.half_length, n_b + 1)[1:]
    x = np.concatenate([np.zeros(n_c + 1), xs])
    y = np.concatenate([ys, np.full(n_b, -d)])
    return x, y


def check_boundary_monotonicity(sol: WaveSolution, resolution: Optional[int] = None,
                                config: VerifierConfig = VerifierConfig()):
    """(broken line finding, surface finding); margins are the smallest decrease between neighbours."""
    resolution = resolution or config.boundary_resolution
    ff = flow_field(sol)
    gd = _gd(sol)
    tail_x = config.tail_start * sol.half_length

    x, y = broken_line_points(sol, resolution)
    p = ff.state(x, y)["p"]
    drop = p[:-1] - p[1:]
    mid = np.column_stack([x[1:], y[1:]])
    line = _sign_finding(PropertyId.MONO_BROKEN_LINE, drop, mid, tail_x, config.eps_mono * gd,
                         config.eps_round * gd, +1, config.eps_mono)

    xs = np.linspace(0.0, sol.half_length, resolution + 1)
    eta = surface_elevation(sol, xs)
    ps = ff.state(xs, eta)["p"]
    gap = float(np.max(np.abs(ps - sol.env.gravity * eta)))
    drop_s = ps[:-1] - ps[1:]
    pts = np.column_stack([xs[1:], eta[1:]])
    surf = _sign_finding(PropertyId.MONO_SURFACE, drop_s, pts, tail_x, config.eps_mono * gd,
                         config.eps_round * gd, +1, config.eps_mono,
                         extra_notes=[f"max |p - g eta| on surface {gap:.2e}"])
    return line, surf


def check_hopf_signs(sol: WaveSolution, resolution: Optional[int] = None,
                     config: VerifierConfig = VerifierConfig()):
    """Strict signs p_x < 0 on the bed (x > 0) and p_y > 0 on the crest line.

    Gradients come from the analytic representation; the notes record their
    distance from central differences of p with step 1e-4 d.
    """
    resolution = resolution or config.boundary_resolution
    ff = flow_field(sol)
    d = sol.env.depth
    g = sol.env.gravity
    tail_x = config.tail_start * sol.half_length

    xb = np.linspace(0.0, sol.half_length, resolution + 1)[1:]
    sb = ff.state(xb, np.full(xb.shape, -d), derivatives=True)
    hd = 1e-4 * d
    inner = xb + hd <= sol.half_length
    fd_b = ff.pressure_differences(xb[inner], np.full(inner.sum(), -d), [hd, -hd])
    ident_b = float(np.max(np.abs(sb["p_x"][inner] - (fd_b[:, 0] - fd_b[:, 1]) / (2 * hd))))
    bed = _sign_finding(PropertyId.HOPF_BED, sb["p_x"], np.column_stack([xb, np.full(xb.shape, -d)]),
                        tail_x, config.eps_mono * g, config.eps_round * g, -1, config.eps_mono,
                        extra_notes=[f"max |p_x - central difference| {ident_b:.2e}"])

    eta0 = float(surface_elevation(sol, 0.0))
    yc = np.linspace(-d, eta0, resolution + 2)[1:-1]
    scl = ff.state(np.zeros(yc.shape), yc, derivatives=True)
    fd_c = ff.pressure_differences(np.zeros(yc.shape), yc, [1j * hd, -1j * hd])
    ident_c = float(np.max(np.abs(scl["p_y"] - (fd_c[:, 0] - fd_c[:, 1]) / (2 * hd))))
    crest = _sign_finding(PropertyId.HOPF_CREST_LINE, scl["p_y"], np.column_stack([np.zeros(yc.shape), yc]),
                          tail_x, config.eps_mono * g, config.eps_round * g, +1, config.eps_mono,
                          extra_notes=[f"max |p_y - central difference| {ident_c:.2e}"])
    return bed, crest


# ---------------------------------------------------------------------------
# interior identities


def superharmonic_probes(sol: WaveSolution, count: int = 50):
    """Deterministic interior probe lattice over the part of the wave where p is resolved."""
    d = sol.env.depth
    n_x = max(1, count // 5)
    n_y = max(1, count // n_x)
    x_max = 0.25 * sol.half_length
    if sol.amplitude > 0:
        x_max = min(x_max, 3.0 * d / decay_rate(sol.froude))
    xs = np.linspace(0.0, x_max, n_x)
    eta = surface_elevation(sol, xs)
    frac = (np.arange(n_y) + 0.5) / n_y
    X = np.repeat(xs, n_y)
    Y = -d + np.tile(frac, n_x) * np.repeat(eta + d, n_y)
    return X[:count], Y[:count]


def _superharmonic_residual(ff, x, y, h):
    offs = np.array([h, -h, 1j * h, -1j * h])
    dp = ff.pressure_differences(x, y, offs)
    lap = dp.sum(axis=1) / (h * h)
    s = ff.state(x, y, derivatives=True)
    grad2 = s["p_x"] ** 2 + s["p_y"] ** 2
    speed2 = s["v"] ** 2 + s["urel"] ** 2
    return lap, lap + 2.0 * grad2 / speed2


def check_superharmonic(sol: WaveSolution, grid: Optional[FieldGrid] = None, fd_step: Optional[float] = None,
                        config: VerifierConfig = VerifierConfig(), points=None) -> Finding:
    """Order of convergence of the five-point Laplacian against the exact identity.

    Margin: observed order minus the required order.
    """
    pid = PropertyId.SUPERHARMONIC
    d = sol.env.depth
    h = (fd_step if fd_step is not None else config.fd_step) * d
    if points is not None:
        x, y = (np.asarray(v, dtype=float) for v in points)
    elif grid is not None:
        interior = ~grid.surface & ~grid.bed & (grid.x >= 0)
        idx = np.flatnonzero(interior)
        idx = idx[np.linspace(0, idx.size - 1, min(config.probes, idx.size)).astype(int)]
        x, y = grid.x[idx], grid.y[idx]
    else:
        x, y = superharmonic_probes(sol, config.probes)
    eta = surface_elevation(sol, x)
    height = eta + d
    if np.any(h > height / 8) or np.any(eta - y < 2 * h) or np.any(y + d < 2 * h):
        raise StepTooLarge(f"step {h:g} too large for at least one probe (need 2h clearance, h <= column/8)")
    ff = flow_field(sol)
    lap_h, r_h = _superharmonic_residual(ff, x, y, h)
    lap_h2, r_h2 = _superharmonic_residual(ff, x, y, h / 2)
    e1 = float(np.max(np.abs(r_h)))
    e2 = float(np.max(np.abs(r_h2)))
    gd = _gd(sol)
    notes = [f"max residual {e1:.3e} (h) / {e2:.3e} (h/2)"]
    if e1 <= config.eps_round * gd / d**2 and e2 <= config.eps_round * gd / d**2:
        return Finding(pid, Status.PASS, float("inf"), None, config.min_order,
                       tuple(notes + ["residual vanishes identically"]))
    order = math.log2(e1 / e2) if e2 > 0 else float("inf")
    worst = int(np.argmax(lap_h2))
    tol = e2
    notes.append(f"observed order {order:.3f}")
    if order < config.min_order:
        i = int(np.argmax(np.abs(r_h2)))
        return Finding(pid, Status.FAIL, order - config.min_order, (float(x[i]), float(y[i])),
                       config.min_order, tuple(notes))
    if lap_h2[worst] > tol:
        return Finding(pid, Status.FAIL, order - config.min_order, (float(x[worst]), float(y[worst])),
                       config.min_order, tuple(notes + [f"discrete Laplacian {lap_h2[worst]:.3e} > 0"]))
    return Finding(pid, Status.PASS, order - config.min_order, None, config.min_order, tuple(notes))


def coefficients_from_state(p_x, p_y, u_rel, v, speed):
    """A = 2 p_x / (v^2 + (u-c)^2), B = 2 p_y / (v^2 + (u-c)^2)."""
    denom = v * v + u_rel * u_rel
    if np.any(denom < 1e-14 * speed * speed):
        raise DenominatorVanishing("v^2 + (u - c)^2 vanishes: stagnation point, out of the smooth regime")
    return 2.0 * p_x / denom, 2.0 * p_y / denom


def quasilinear_coefficients(sol: WaveSolution, point):
    x, y = (point.x, point.y) if hasattr(point, "x") else point
    s = flow_field(sol).state(np.atleast_1d(float(x)), np.atleast_1d(float(y)), derivatives=True)
    a, b = coefficients_from_state(s["p_x"], s["p_y"], s["urel"], s["v"], sol.speed)
    return float(a[0]), float(b[0])


def check_symmetry(sol: WaveSolution, resolution: int = 200, config: VerifierConfig = VerifierConfig(),
                   depths: int = 5) -> Finding:
    """Margin: largest mirror deviation of u, v (velocity units) over the sampled pairs."""
    pid = PropertyId.SYMMETRY
    d = sol.env.depth
    ff = flow_field(sol)
    xs = np.linspace(0.0, 0.95 * sol.half_length, resolution + 1)[1:]
    e_p = surface_elevation(sol, xs)
    e_m = surface_elevation(sol, -xs)
    dev_eta = np.abs(e_p - e_m)
    frac = np.linspace(0.0, 1.0, depths)
    top = np.minimum(e_p, e_m)
    X = np.repeat(xs, depths)
    Y = -d + np.tile(frac, xs.size) * np.repeat(top + d, depths)
    sp = ff.state(X, Y)
    sm = ff.state(-X, Y)
    dev = np.maximum(np.abs(sp["u"] - sm["u"]), np.abs(sp["v"] + sm["v"]))
    tol = config.symmetry_tol * sol.speed
    i = int(np.argmax(dev))
    margin = float(dev[i])
    notes = [f"max |eta(x) - eta(-x)| {float(np.max(dev_eta)):.2e}"]
    if margin > tol or np.max(dev_eta) > config.symmetry_tol * d:
        if np.max(dev_eta) > config.symmetry_tol * d and margin <= tol:
            j = int(np.argmax(dev_eta))
            return Finding(pid, Status.FAIL, margin, (float(xs[j]), float(e_p[j])), config.symmetry_tol, tuple(notes))
        return Finding(pid, Status.FAIL, margin, (float(X[i]), float(Y[i])), config.symmetry_tol, tuple(notes))
    return Finding(pid, Status.PASS, margin, None, config.symmetry_tol, tuple(notes))


def fit_bed_decay(xs, p_bed, p_floor):
    """Least-squares exponential rate of the bed pressure over its asymptotic range."""
    p0 = float(p_bed[0])
    window = (p_bed < 1e-2 * p0) & (p_bed > max(1e-8 * p0, p_floor))
    if np.count_nonzero(window) < 5:
        return float("nan"), window
    slope, _ = np.polyfit(xs[window], np.log(p_bed[window]), 1)
    return -float(slope), window


def check_decay(sol: WaveSolution, config: VerifierConfig = VerifierConfig(),
                pressure: Optional[Callable] = None, samples: int = 400) -> Finding:
    """Far-field smallness of p plus the exponential rate of the bed pressure.

    Margin: max |p| at x = 0.95 half_length (pressure units).  ``pressure``
    replaces the dynamic-pressure evaluator, e.g. to inject a perturbation.
    """
    pid = PropertyId.DECAY
    d = sol.env.depth
    gd = _gd(sol)
    if pressure is None:
        ff = flow_field(sol)
        def pressure(x, y):
            return ff.state(x, y)["p"]
    x_far = config.decay_station * sol.half_length
    eta_far = float(surface_elevation(sol, x_far))
    ys = np.linspace(-d, eta_far, 21)
    p_far = np.asarray(pressure(np.full(ys.shape, x_far), ys))
    i_far = int(np.argmax(np.abs(p_far)))
    far = float(np.abs(p_far[i_far]))
    witness = (x_far, float(ys[i_far]))
    xs = np.linspace(0.0, sol.half_length, samples + 1)
    p_bed = np.asarray(pressure(xs, np.full(xs.shape, -d)))
    notes = []
    if far > config.decay_limit * gd:
        notes.append("increase truncation")
        return Finding(pid, Status.FAIL, far, witness, config.decay_limit, tuple(notes))
    if np.max(np.abs(p_bed)) <= config.eps_mono * gd:
        return Finding(pid, Status.PASS, far, None, config.decay_limit, ("identically zero",))
    mu_fit, window = fit_bed_decay(xs, p_bed, 1e3 * config.eps_round * gd)
    mu_root = decay_rate(sol.froude) / d
    if not math.isfinite(mu_fit):
        return Finding(pid, Status.INDETERMINATE, far, witness, config.decay_limit,
                       ("too few samples in the asymptotic window",))
    rel = abs(mu_fit / mu_root - 1.0)
    notes.append(f"fitted rate {mu_fit:.6g}, dispersion root {mu_root:.6g}, rel. diff {rel:.2e}")
    if rel > config.decay_rate_tol:
        j = int(np.flatnonzero(window)[0])
        return Finding(pid, Status.FAIL, far, (float(xs[j]), -d), config.decay_limit, tuple(notes))
    return Finding(pid, Status.PASS, far, None, config.decay_limit, tuple(notes))


def bernoulli_samples(sol: WaveSolution, count: int = 1000, tail_start: float = 0.8):
    d = sol.env.depth
    n_x = max(1, int(round(math.sqrt(count * 2.5))))
    n_y = max(1, count // n_x)
    xs = np.linspace(0.0, tail_start * sol.half_length, n_x)
    eta = surface_elevation(sol, xs)
    frac = (np.arange(n_y) + 0.5) / n_y
    return xs, eta, frac


def check_bernoulli_constant(sol: WaveSolution, config: VerifierConfig = VerifierConfig(),
                             quad_nodes: int = 16) -> Finding:
    """Bernoulli sum with the pressure rebuilt from the vertical Euler equation.

    P(x, y) = P_atm + int_y^eta [g + (u - c) v_x + v v_y] dy'; margin is the
    largest |q^2/2 + P + g y - C| (pressure units).
    """
    pid = PropertyId.BERNOULLI_CONST
    d = sol.env.depth
    g = sol.env.gravity
    ff = flow_field(sol)
    xs, eta, frac = bernoulli_samples(sol, config.bernoulli_samples, config.tail_start)
    t, w = np.polynomial.legendre.leggauss(quad_nodes)
    # sample depths from the surface downwards, integrate interval by interval
    fr = np.concatenate([[1.0], frac[::-1]])
    X, Y, W, seg = [], [], [], []
    ny = frac.size
    for i, (x0, e0) in enumerate(zip(xs, eta)):
        levels = -d + fr * (e0 + d)
        for j in range(ny):
            top, bot = levels[j], levels[j + 1]
            X.append(np.full(quad_nodes, x0))
            Y.append(bot + (t + 1.0) * 0.5 * (top - bot))
            W.append(w * 0.5 * (top - bot))
            seg.append(np.full(quad_nodes, i * ny + j))
    X, Y, W, seg = (np.concatenate(v) for v in (X, Y, W, seg))
    s = ff.state(X, Y, derivatives=True)
    integrand = g + s["urel"] * s["v_x"] + s["v"] * s["v_y"]
    pieces = np.bincount(seg, weights=W * integrand, minlength=xs.size * ny).reshape(xs.size, ny)
    P_euler = sol.env.p_atm + np.cumsum(pieces, axis=1)
    ys = -d + np.outer(eta + d, frac[::-1])
    sx = ff.state(np.repeat(xs, ny), ys.ravel())
    q2 = sx["v"] ** 2 + sx["urel"] ** 2
    resid = 0.5 * q2 + P_euler.ravel() + g * ys.ravel() - sol.bernoulli_C
    i = int(np.argmax(np.abs(resid)))
    margin = float(np.abs(resid[i]))
    tol = config.bernoulli_tol * g * d
    notes = (f"{resid.size} samples",)
    if margin > tol:
        return Finding(pid, Status.FAIL, margin, (float(np.repeat(xs, ny)[i]), float(ys.ravel()[i])),
                       config.bernoulli_tol, notes)
    return Finding(pid, Status.PASS, margin, None, config.bernoulli_tol, notes)


def check_mass_flux(sol: WaveSolution, config: VerifierConfig = VerifierConfig()) -> Finding:
    """Margin: relative spread of the column flux over the stations."""
    pid = PropertyId.MASS_FLUX_CONST
    xs = np.linspace(0.0, sol.half_length, config.mass_flux_stations)
    m = np.array([mass_flux(sol, x) for x in xs])
    spread = float((m.max() - m.min()) / abs(sol.mass_flux))
    offset = float(np.max(np.abs(m - sol.mass_flux)) / abs(sol.mass_flux))
    notes = (f"max deviation from stored flux {offset:.2e}",)
    if spread > config.mass_flux_tol or offset > config.mass_flux_tol:
        i = int(np.argmax(np.abs(m - sol.mass_flux)))
        return Finding(pid, Status.FAIL, spread, (float(xs[i]), -sol.env.depth), config.mass_flux_tol, notes)
    return Finding(pid, Status.PASS, spread, None, config.mass_flux_tol, notes)


# ---------------------------------------------------------------------------


# ---------------------------------------------------------------------------
# negative controls


def corrupt_spectrum(sol: WaveSolution, relative: float = 1e-3) -> WaveSolution:
    """Copy whose surface gains an odd part b_n = relative * a_n, breaking the x -> -x symmetry."""
    return sol.with_odd_spectrum(relative * np.asarray(sol.surface_spectrum))


def tail_offset_pressure(sol: WaveSolution, offset: float, start: float = 0.8) -> Callable:
    """Dynamic-pressure evaluator with ``offset`` added wherever |x| >= start * half_length."""
    ff = flow_field(sol)
    x0 = start * sol.half_length

    def pressure(x, y):
        x = np.asarray(x, dtype=float)
        return ff.state(x, y)["p"] + offset * (np.abs(x) >= x0)

    return pressure


def verify_all(sol: WaveSolution, config: Optional[VerifierConfig] = None,
               pressure: Optional[Callable] = None) -> VerificationReport:
    """Run every check; a check that raises is reported as indeterminate.

    ``pressure`` overrides the evaluator used by the decay check only.
    """
    config = config or VerifierConfig()
    if not sol.diagnostics.converged:
        raise NotConverged("verification needs a converged solution")
    grid_cache = {}

    def grid():
        if "g" not in grid_cache:
            grid_cache["g"] = half_domain_grid(sol, config.stations, config.nodes)
        return grid_cache["g"]

    def crest():
        f = check_crest_max(grid(), config)
        if sol.amplitude / sol.env.depth > sol.amplitude_cap:
            return Finding(f.property_id, Status.INDETERMINATE, f.margin, f.witness, f.tolerance_used,
                           f.notes + ("amplitude above the smooth-wave cap: reported, not asserted",))
        return f

    mono = {}
    hopf = {}

    def mono_get(i):
        if not mono:
            mono["v"] = check_boundary_monotonicity(sol, config=config)
        return mono["v"][i]

    def hopf_get(i):
        if not hopf:
            hopf["v"] = check_hopf_signs(sol, config=config)
        return hopf["v"][i]

    plan = [
        (PropertyId.CREST_MAX, crest),
        (PropertyId.POSITIVITY, lambda: check_positivity(grid(), config)),
        (PropertyId.MONO_BROKEN_LINE, lambda: mono_get(0)),
        (PropertyId.MONO_SURFACE, lambda: mono_get(1)),
        (PropertyId.DECAY, lambda: check_decay(sol, config, pressure)),
        (PropertyId.SUPERHARMONIC, lambda: check_superharmonic(sol, config=config)),
        (PropertyId.HOPF_BED, lambda: hopf_get(0)),
        (PropertyId.HOPF_CREST_LINE, lambda: hopf_get(1)),
        (PropertyId.SYMMETRY, lambda: check_symmetry(sol, config=config)),
        (PropertyId.BERNOULLI_CONST, lambda: check_bernoulli_constant(sol, config)),
        (PropertyId.MASS_FLUX_CONST, lambda: check_mass_flux(sol, config)),
    ]
    findings = []
    for pid, run in plan:
        try:
            findings.append(run())
        except (SolitaryWaveError, ArithmeticError, ValueError) as exc:
            findings.append(Finding(pid, Status.INDETERMINATE, float("nan"), None, float("nan"),
                                    (f"{type(exc).__name__}: {exc}",)))
    return VerificationReport(
        amplitude=sol.amplitude,
        froude=sol.froude,
        modes=sol.modes,
        half_length=sol.half_length,
        findings=tuple(findings),
        config=config,
    )
