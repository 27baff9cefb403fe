"""Lower bound on the crest elevation from bed-pressure records.

Bed pressure P (per unit density) under a solitary wave peaks below the crest
and tends to the hydrostatic value P_inf far away; the excess (P_max - P_inf)/g
never exceeds the crest elevation.
"""
from __future__ import annotations

import csv
import io
import json
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .core import Environment
from .errors import InputFormat, NegativeBoundWarning, OutOfDomain, TraceTooShort
from .fields import flow_field
from .solver import WaveSolution

MIN_SAMPLES = 8
FLAG_NEGATIVE = "negative-bound"
FLAG_PEAK = "peak may be uncaptured"


@dataclass(frozen=True, eq=False)
class GaugeTrace:
    """Bed pressure samples against position ``x`` or time ``t``."""

    abscissa: np.ndarray
    pressure: np.ndarray
    env: Environment = field(default_factory=Environment)
    kind: str = "x"
    source: str = "file"
    noise: Optional[float] = None

    def __post_init__(self):
        a = np.array(self.abscissa, dtype=float)
        p = np.array(self.pressure, dtype=float)
        if self.kind not in ("x", "t"):
            raise InputFormat(f"abscissa kind must be 'x' or 't', got {self.kind!r}")
        if a.ndim != 1 or a.shape != p.shape:
            raise InputFormat("abscissa and pressure must be 1-D arrays of equal length")
        if a.size < MIN_SAMPLES:
            raise TraceTooShort(f"trace has {a.size} samples, need at least {MIN_SAMPLES}")
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(p))):
            raise InputFormat("trace contains non-finite values")
        if np.any(np.diff(a) <= 0):
            raise InputFormat("trace abscissae must be strictly increasing")
        a.flags.writeable = False
        p.flags.writeable = False
        object.__setattr__(self, "abscissa", a)
        object.__setattr__(self, "pressure", p)

    def __len__(self):
        return self.abscissa.size

    def shifted(self, offset: float) -> "GaugeTrace":
        return GaugeTrace(self.abscissa, self.pressure + offset, self.env, self.kind, self.source, self.noise)

    def to_space(self, speed: float, origin: float = 0.0) -> "GaugeTrace":
        """Convert a time series at a fixed gauge X = origin to x = X - c t."""
        if self.kind == "x":
            return self
        x = origin - speed * self.abscissa
        return GaugeTrace(x[::-1], self.pressure[::-1], self.env, "x", self.source, self.noise)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([self.kind, "pressure"])
        for a, p in zip(self.abscissa, self.pressure):
            w.writerow([repr(float(a)), repr(float(p))])
        return buf.getvalue()


@dataclass(frozen=True)
class HeightBound:
    h_lb: float
    p_max_bed: float
    p_inf: float
    tail_fraction: float
    flags: tuple = ()

    def to_json(self) -> dict:
        return {
            "h_lb": self.h_lb,
            "p_max_bed": self.p_max_bed,
            "p_inf": self.p_inf,
            "tail_fraction": self.tail_fraction,
            "flags": list(self.flags),
        }


def _tail_count(n: int, tail_fraction: float) -> int:
    if not 0 < tail_fraction <= 0.5:
        raise ValueError(f"tail_fraction must lie in (0, 0.5], got {tail_fraction}")
    return max(1, int(round(tail_fraction * n)))


def p_infinity_estimate(trace: GaugeTrace, tail_fraction: float = 0.1) -> float:
    """Median over the first and last tail_fraction of the samples."""
    if len(trace) < MIN_SAMPLES:
        raise TraceTooShort(f"trace has {len(trace)} samples, need at least {MIN_SAMPLES}")
    k = _tail_count(len(trace), tail_fraction)
    tails = np.concatenate([trace.pressure[:k], trace.pressure[-k:]])
    return float(np.median(tails))


def height_lower_bound(trace: GaugeTrace, env: Optional[Environment] = None,
                       tail_fraction: float = 0.1, p_inf: Optional[float] = None) -> HeightBound:
    """(max P - P_inf)/g.

    With the tail-median estimate the bound cannot go negative, since the
    tails belong to the trace; an externally supplied ``p_inf`` (e.g. from a
    calibration record) can exceed every sample, which is flagged.
    """
    env = env or trace.env
    if p_inf is None:
        p_inf = p_infinity_estimate(trace, tail_fraction)
    elif len(trace) < MIN_SAMPLES:
        raise TraceTooShort(f"trace has {len(trace)} samples, need at least {MIN_SAMPLES}")
    p_inf = float(p_inf)
    i = int(np.argmax(trace.pressure))
    p_max = float(trace.pressure[i])
    flags = []
    if i == 0 or i == len(trace) - 1:
        flags.append(FLAG_PEAK)
    h = (p_max - p_inf) / env.gravity
    if h < 0:
        warnings.warn("trace maximum lies below the asymptotic estimate; bound set to 0", NegativeBoundWarning,
                      stacklevel=2)
        flags.append(FLAG_NEGATIVE)
        h = 0.0
    return HeightBound(h_lb=float(h), p_max_bed=p_max, p_inf=p_inf, tail_fraction=tail_fraction, flags=tuple(flags))


def synth_trace(sol: WaveSolution, stations, sigma: float = 0.0, seed: Optional[int] = None) -> GaugeTrace:
    """Total bed pressure at the stations plus Gaussian noise of standard deviation sigma."""
    x = np.asarray(stations, dtype=float)
    if np.any(np.abs(x) > sol.half_length * (1 + 1e-12)):
        raise OutOfDomain("gauge stations must lie within the truncated domain")
    P = flow_field(sol).state(x, np.full(x.shape, -sol.env.depth))["P"]
    if sigma > 0:
        P = P + np.random.default_rng(seed).normal(0.0, sigma, size=x.shape)
    return GaugeTrace(x, P, sol.env, "x", "synthetic", float(sigma))


def read_trace(text: str, env: Optional[Environment] = None) -> GaugeTrace:
    """Parse CSV text with header ``x,pressure`` or ``t,pressure``; ``#`` starts a comment line."""
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise InputFormat("trace file is empty")
    rows = list(csv.reader(lines))
    header = [h.strip() for h in rows[0]]
    if header not in (["x", "pressure"], ["t", "pressure"]):
        raise InputFormat(f"unknown trace header {','.join(header)!r}; expected x,pressure or t,pressure")
    try:
        data = np.array([[float(v) for v in r] for r in rows[1:]], dtype=float).reshape(-1, 2)
    except ValueError as exc:
        raise InputFormat(f"malformed trace row: {exc}") from None
    return GaugeTrace(data[:, 0], data[:, 1], env or Environment(), header[0], "file")


def load_trace(path, env: Optional[Environment] = None) -> GaugeTrace:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputFormat(f"cannot read trace file: {exc}") from None
    return read_trace(text, env)


def bound_json_text(bound: HeightBound, extra: Optional[dict] = None) -> str:
    out = bound.to_json()
    if extra:
        out.update(extra)
    return json.dumps(out, indent=2)
