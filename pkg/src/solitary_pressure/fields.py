"""Stream function, velocity and pressure anywhere in the fluid.

Points are located by inverting the conformal map (Newton in the complex
plane), after which every field is a closed-form expression in the map
derivatives: (u - c) - i v = -q / z',  psi = -q beta.  Public functions take
and return dimensional quantities.
"""
from __future__ import annotations

import csv
import io
import json
import weakref
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence, Union

import numpy as np

from .core import PhysicalPoint
from .errors import OutOfDomain
from .solver import WaveSolution

_SNAP = 1e-13
_EPS_STEP = 4 * np.finfo(float).eps
_cache: "weakref.WeakKeyDictionary[WaveSolution, FlowField]" = weakref.WeakKeyDictionary()


def flow_field(sol: WaveSolution) -> "FlowField":
    ff = _cache.get(sol)
    if ff is None:
        ff = FlowField(sol)
        _cache[sol] = ff
    return ff


class FlowField:
    """Field evaluator bound to one solution."""

    def __init__(self, sol: WaveSolution):
        self.sol = sol
        self.strip = sol.strip_map()
        self.sc = sol.scaled
        self.c = sol.froude
        self.q = sol.strip_speed
        self.C = sol.bernoulli_C / self.sc.pressure
        self.p_atm = sol.env.p_atm / self.sc.pressure
        self.L = self.strip.L

    # -- nondimensional core ------------------------------------------------

    def eta_nd(self, x):
        x = np.asarray(x, dtype=float)
        self._check_x(x)
        return self.strip.surface_elevation_at(self.strip.invert_surface(x))

    def _check_x(self, x):
        if np.any(np.abs(x) > self.L * (1 + 1e-12)):
            raise OutOfDomain(f"|x| exceeds the truncation half-length {self.L * self.sc.length:g}")

    def locate(self, x, y):
        """Strip preimage (alpha, beta) of nondimensional points of the closed fluid domain."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        y = np.atleast_1d(np.asarray(y, dtype=float))
        x, y = np.broadcast_arrays(x, y)
        x = x.ravel()
        y = y.ravel()
        self._check_x(x)
        sm = self.strip
        ux, inv = np.unique(x, return_inverse=True)
        ua_s = sm.invert_surface(ux)
        a_s = ua_s[inv]
        eta = sm.surface_elevation_at(ua_s)[inv]
        tol = _SNAP * (1.0 + np.abs(eta))
        if np.any(y > eta + tol) or np.any(y < -1.0 - _SNAP):
            raise OutOfDomain("point lies outside the fluid domain")
        alpha = a_s.copy()
        beta = np.zeros_like(x)
        on_bed = y <= -1.0 + _SNAP
        inside = ~on_bed & (y < eta - tol)
        need_bed = on_bed | inside
        a_b = np.zeros_like(x)
        if np.any(need_bed):
            ub, binv = np.unique(x[need_bed], return_inverse=True)
            a_b[need_bed] = sm.invert_bed(ub)[binv]
        if np.any(on_bed):
            alpha[on_bed] = a_b[on_bed]
            beta[on_bed] = -sm.D
        if np.any(inside):
            a_b = a_b[inside]
            ai, bi = sm.invert(x[inside], y[inside], a_s=a_s[inside], a_b=a_b, eta=eta[inside])
            alpha[inside] = ai
            beta[inside] = bi
        return alpha, beta

    def state_nd(self, x, y, derivatives=False, preimage=None):
        x = np.asarray(x, dtype=float)
        shape = np.broadcast(x, np.asarray(y)).shape
        alpha, beta = self.locate(x, y) if preimage is None else preimage
        z, dz, d2z = self.strip.evaluate(alpha, beta, order=2 if derivatives else 1)
        w = -self.q / dz
        q2 = np.abs(w) ** 2
        yy = np.broadcast_to(np.asarray(y, dtype=float), shape).ravel()
        out = {
            "psi": -self.q * beta,
            "urel": w.real,
            "u": w.real + self.c,
            "v": -w.imag,
            "q2": q2,
            "P": self.C - yy - 0.5 * q2,
            "p": 0.5 * self.c**2 - 0.5 * q2,
        }
        if derivatives:
            dw = self.q * d2z / dz**3
            prod = np.conj(w) * dw
            out.update(
                p_x=-prod.real,
                p_y=prod.imag,
                u_x=dw.real,
                u_y=-dw.imag,
                v_x=-dw.imag,
                v_y=-dw.real,
            )
        return {k: v.reshape(shape) for k, v in out.items()}

    def pressure_differences_nd(self, x, y, offsets):
        """p(z0 + o) - p(z0) for each complex offset o, free of the rounding in p itself.

        The preimage increment solves z(zeta0 + delta) - z(zeta0) = o by Newton
        on the cancellation-free increment of the map.
        """
        x = np.atleast_1d(np.asarray(x, dtype=float)).ravel()
        y = np.atleast_1d(np.asarray(y, dtype=float)).ravel()
        offsets = np.asarray(offsets, dtype=complex)
        alpha, beta = self.locate(x, y)
        _, dz0, _ = self.strip.evaluate(alpha, beta)
        A = np.repeat(alpha, offsets.size)
        B = np.repeat(beta, offsets.size)
        Z0 = np.repeat(dz0, offsets.size)
        O = np.tile(offsets, x.size)
        delta = O / Z0
        for _ in range(30):
            dz, ddz = self.strip.increment(A, B, delta)
            step = (dz - O) / (Z0 + ddz)
            delta = delta - step
            if np.all(np.abs(step) <= _EPS_STEP * np.maximum(np.abs(O), 1e-300)):
                break
        _, ddz = self.strip.increment(A, B, delta)
        dz1 = Z0 + ddz
        w0 = -self.q / Z0
        dw = self.q * ddz / (dz1 * Z0)
        # |w1|^2 - |w0|^2 = Re(dw * conj(w1 + w0))
        dq2 = np.real(dw * np.conj(2 * w0 + dw))
        return (-0.5 * dq2).reshape(x.size, offsets.size)

    def pressure_differences(self, x, y, offsets):
        """Dimensional counterpart of pressure_differences_nd (offsets in length units)."""
        xn, yn = self._nd(x, y)
        o = np.asarray(offsets, dtype=complex) / self.sc.length
        return self.pressure_differences_nd(xn, yn, o) * self.sc.pressure

    def psi_nd(self, x, y):
        return self.state_nd(x, y)["psi"]

    # -- dimensional --------------------------------------------------------

    def _nd(self, x, y=None):
        d = self.sc.length
        if y is None:
            return np.asarray(x, dtype=float) / d
        return np.asarray(x, dtype=float) / d, np.asarray(y, dtype=float) / d

    def state(self, x, y, derivatives=False) -> dict:
        """All fields at physical points, dimensional."""
        xn, yn = self._nd(x, y)
        s = self.state_nd(xn, yn, derivatives=derivatives)
        sc = self.sc
        vel = sc.velocity
        pres = sc.pressure
        out = {
            "psi": s["psi"] * sc.stream,
            "u": s["u"] * vel,
            "v": s["v"] * vel,
            "urel": s["urel"] * vel,
        }
        y_dim = np.broadcast_to(np.asarray(y, dtype=float), out["u"].shape)
        q2 = s["q2"] * vel * vel
        c = self.sol.speed
        g = self.sol.env.gravity
        out["P"] = self.sol.bernoulli_C - g * y_dim - 0.5 * q2
        out["p"] = 0.5 * c * c - 0.5 * q2
        out["p_bernoulli"] = out["P"] - (self.sol.env.p_atm - g * y_dim)
        if derivatives:
            grad = pres / sc.length
            for key in ("p_x", "p_y"):
                out[key] = s[key] * grad
            for key in ("u_x", "u_y", "v_x", "v_y"):
                out[key] = s[key] / sc.time
        return out


# ---------------------------------------------------------------------------
# point evaluations


def surface_elevation(sol: WaveSolution, x):
    ff = flow_field(sol)
    return ff.eta_nd(ff._nd(x)) * ff.sc.length


def stream_function(sol: WaveSolution, x, y):
    return flow_field(sol).state(x, y)["psi"]


def velocity(sol: WaveSolution, x, y):
    s = flow_field(sol).state(x, y)
    return s["u"], s["v"]


def total_pressure(sol: WaveSolution, x, y):
    return flow_field(sol).state(x, y)["P"]


def dynamic_pressure(sol: WaveSolution, x, y, check: bool = True):
    """p = c^2/2 - (v^2 + (u - c)^2)/2, cross-checked against P - (P_atm - g y)."""
    s = flow_field(sol).state(x, y)
    if check:
        scale = sol.env.gravity * sol.env.depth
        dev = np.max(np.abs(s["p"] - s["p_bernoulli"])) if np.size(s["p"]) else 0.0
        if dev > 1e-10 * scale + 8 * np.finfo(float).eps * abs(sol.env.p_atm):
            raise ArithmeticError(f"dynamic pressure paths disagree by {dev:.3e}")
    return s["p"]


def pressure_gradient(sol: WaveSolution, x, y):
    s = flow_field(sol).state(x, y, derivatives=True)
    return s["p_x"], s["p_y"]


def mass_flux(sol: WaveSolution, x: float, nodes: int = 64, max_nodes: int = 1024) -> float:
    """Relative mass flux psi(x, -d) = int_{-d}^{eta(x)} (c - u) dy through the column at x.

    Gauss-Legendre quadrature; the node count doubles until successive values
    agree to 1e-12 relative.
    """
    ff = flow_field(sol)
    d = sol.env.depth
    eta = float(surface_elevation(sol, x))
    prev = None
    n = nodes
    while True:
        t, wts = np.polynomial.legendre.leggauss(n)
        ys = -d + (t + 1.0) * 0.5 * (eta + d)
        s = ff.state(np.full(n, float(x)), ys)
        val = float(np.sum(wts * -s["urel"]) * 0.5 * (eta + d))
        if prev is not None and abs(val - prev) <= 1e-12 * abs(val):
            return val
        if n >= max_nodes:
            return val
        prev = val
        n *= 2


# ---------------------------------------------------------------------------
# grids


@dataclass(frozen=True)
class FieldSample:
    point: PhysicalPoint
    psi: float
    u: float
    v: float
    u_rel: float
    P: float
    p: float


@dataclass(frozen=True)
class GridSpec:
    """Boundary-fitted grid: ``nodes`` points spanning [-d, eta(x)] at each station."""

    stations: tuple
    nodes: Union[int, tuple] = 41

    def __post_init__(self):
        object.__setattr__(self, "stations", tuple(float(s) for s in self.stations))
        if not isinstance(self.nodes, int):
            nodes = tuple(int(n) for n in self.nodes)
            if len(nodes) != len(self.stations):
                raise ValueError("per-station node counts must match the station list")
            object.__setattr__(self, "nodes", nodes)

    def node_counts(self):
        if isinstance(self.nodes, int):
            return [self.nodes] * len(self.stations)
        return list(self.nodes)

    def to_json(self) -> dict:
        return {"stations": list(self.stations), "nodes": self.nodes if isinstance(self.nodes, int)
                else list(self.nodes)}


COLUMNS = ("x", "y", "psi", "u", "v", "P", "p")


@dataclass(frozen=True, eq=False)
class FieldGrid:
    grid_spec: GridSpec
    x: np.ndarray
    y: np.ndarray
    psi: np.ndarray
    u: np.ndarray
    v: np.ndarray
    P: np.ndarray
    p: np.ndarray
    station: np.ndarray
    node: np.ndarray
    crest_index: Optional[int]
    half_length: float
    speed: float
    gravity: float
    depth: float
    surface: np.ndarray = field(default=None)
    bed: np.ndarray = field(default=None)

    def __len__(self):
        return int(self.x.size)

    @property
    def samples(self) -> Iterator[FieldSample]:
        for i in range(len(self)):
            yield FieldSample(PhysicalPoint(float(self.x[i]), float(self.y[i])), float(self.psi[i]),
                              float(self.u[i]), float(self.v[i]), float(self.u[i] - self.speed),
                              float(self.P[i]), float(self.p[i]))

    def columns(self) -> dict:
        return {name: getattr(self, name) for name in COLUMNS}

    def to_csv(self, fh=None) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(COLUMNS)
        cols = [getattr(self, c) for c in COLUMNS]
        for row in zip(*cols):
            w.writerow([f"{v + 0.0:.17g}" for v in row])
        text = buf.getvalue()
        if fh is not None:
            fh.write(text)
        return text

    def to_json(self) -> dict:
        return {
            "grid_spec": self.grid_spec.to_json(),
            "crest_index": self.crest_index,
            "columns": list(COLUMNS),
            "samples": [[float(f"{v:.17g}") for v in row]
                        for row in zip(*(getattr(self, c) for c in COLUMNS))],
        }

    def to_json_text(self) -> str:
        return json.dumps(self.to_json(), indent=1)


def sample_grid(sol: WaveSolution, grid_spec: GridSpec) -> FieldGrid:
    ff = flow_field(sol)
    d = sol.env.depth
    stations = np.asarray(grid_spec.stations, dtype=float)
    counts = grid_spec.node_counts()
    if stations.size == 0:
        empty = np.zeros(0)
        return FieldGrid(grid_spec, empty, empty, empty, empty, empty, empty, empty,
                         np.zeros(0, int), np.zeros(0, int), None, sol.half_length, sol.speed,
                         sol.env.gravity, d, np.zeros(0, bool), np.zeros(0, bool))
    if any(n < 1 for n in counts):
        raise ValueError("each station needs at least one node")
    eta = surface_elevation(sol, stations)
    xs, ys, st_idx, nd_idx, surf, bed = [], [], [], [], [], []
    for i, (x0, e0, n) in enumerate(zip(stations, eta, counts)):
        if n == 1:
            col = np.array([e0])
        else:
            col = -d + np.arange(n) / (n - 1) * (e0 + d)
            col[-1] = e0
        xs.append(np.full(n, x0))
        ys.append(col)
        st_idx.append(np.full(n, i))
        nd_idx.append(np.arange(n))
        s_flag = np.zeros(n, bool)
        s_flag[-1] = True
        b_flag = np.zeros(n, bool)
        if n > 1:
            b_flag[0] = True
        surf.append(s_flag)
        bed.append(b_flag)
    x = np.concatenate(xs)
    y = np.concatenate(ys)
    s = ff.state(x, y)
    crest = None
    hits = np.flatnonzero(np.concatenate(surf) & (x == 0.0))
    if hits.size:
        crest = int(hits[0])
    return FieldGrid(
        grid_spec=grid_spec, x=x, y=y, psi=s["psi"], u=s["u"], v=s["v"], P=s["P"], p=s["p"],
        station=np.concatenate(st_idx), node=np.concatenate(nd_idx), crest_index=crest,
        half_length=sol.half_length, speed=sol.speed, gravity=sol.env.gravity, depth=d,
        surface=np.concatenate(surf), bed=np.concatenate(bed),
    )


def half_domain_grid(sol: WaveSolution, stations: int = 201, nodes: int = 41) -> FieldGrid:
    """Boundary-fitted grid over the right half of the fluid, x in [0, half_length].

    Fewer than two stations give the single column under the crest.
    """
    xs = np.linspace(0.0, sol.half_length, stations) if stations > 1 else np.zeros(1)
    return sample_grid(sol, GridSpec(tuple(xs), nodes))
