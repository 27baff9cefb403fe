"""JSON and CSV round trips for wave solutions."""
from __future__ import annotations

import json
import math
from typing import Any, Mapping, Optional

import numpy as np

from .core import Environment
from .errors import InputFormat
from .solver import Diagnostics, WaveSolution

FORMAT = "solitary-wave-solution/1"


def _f(v):
    v = float(v)
    return v if math.isfinite(v) else None


def _unf(v):
    return float("nan") if v is None else float(v)


def solution_to_json(sol: WaveSolution, request: Optional[Mapping[str, Any]] = None) -> dict:
    d = sol.diagnostics
    out = {
        "format": FORMAT,
        "request": dict(request) if request is not None else None,
        "env": sol.env.to_json(),
        "amplitude": sol.amplitude,
        "speed": sol.speed,
        "froude": sol.froude,
        "bernoulli_C": sol.bernoulli_C,
        "mass_flux": sol.mass_flux,
        "conformal_depth": sol.conformal_depth,
        "strip_speed": sol.strip_speed,
        "half_length": sol.half_length,
        "amplitude_cap": sol.amplitude_cap,
        "modes": sol.modes,
        "surface_spectrum": [float(v) for v in sol.surface_spectrum],
        "odd_spectrum": None if sol.odd_spectrum is None else [float(v) for v in sol.odd_spectrum],
        "diagnostics": {
            "iterations": d.iterations,
            "residual": _f(d.residual),
            "spectral_tail": _f(d.spectral_tail),
            "truncation_tail": _f(d.truncation_tail),
            "converged": d.converged,
            "method": d.method,
            "continuation": [float(v) for v in d.continuation],
            "warnings": list(d.warnings),
        },
    }
    return out


def solution_from_json(obj: Mapping[str, Any]) -> WaveSolution:
    if not isinstance(obj, Mapping) or obj.get("format") != FORMAT:
        raise InputFormat("not a wave solution document")
    try:
        dg = obj["diagnostics"]
        diag = Diagnostics(
            iterations=int(dg["iterations"]),
            residual=_unf(dg["residual"]),
            spectral_tail=_unf(dg["spectral_tail"]),
            truncation_tail=_unf(dg["truncation_tail"]),
            converged=bool(dg["converged"]),
            method=str(dg["method"]),
            continuation=tuple(float(v) for v in dg["continuation"]),
            warnings=tuple(str(v) for v in dg["warnings"]),
        )
        spec = np.array(obj["surface_spectrum"], dtype=float)
        odd = obj.get("odd_spectrum")
        sol = WaveSolution(
            env=Environment.from_json(obj["env"]),
            amplitude=float(obj["amplitude"]),
            speed=float(obj["speed"]),
            froude=float(obj["froude"]),
            bernoulli_C=float(obj["bernoulli_C"]),
            mass_flux=float(obj["mass_flux"]),
            surface_spectrum=spec,
            conformal_depth=float(obj["conformal_depth"]),
            strip_speed=float(obj["strip_speed"]),
            half_length=float(obj["half_length"]),
            diagnostics=diag,
            odd_spectrum=None if odd is None else np.array(odd, dtype=float),
            amplitude_cap=float(obj["amplitude_cap"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise InputFormat(f"malformed wave solution document: {exc}") from None
    if spec.ndim != 1 or spec.size == 0 or not np.all(np.isfinite(spec)):
        raise InputFormat("surface spectrum must be a non-empty list of finite numbers")
    return sol


def dumps(sol: WaveSolution, request: Optional[Mapping[str, Any]] = None) -> str:
    return json.dumps(solution_to_json(sol, request), indent=2) + "\n"


def loads(text: str) -> WaveSolution:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputFormat(f"invalid JSON: {exc}") from None
    return solution_from_json(obj)


def load(path) -> WaveSolution:
    try:
        with open(path, encoding="utf-8") as fh:
            return loads(fh.read())
    except OSError as exc:
        raise InputFormat(f"cannot read solution file: {exc}") from None


def spectrum_csv(sol: WaveSolution) -> str:
    """Mode table ``n,k,cos,sin`` with k in units of 1/d."""
    k = np.pi * np.arange(1, sol.modes + 1) / (sol.half_length / sol.env.depth)
    odd = sol.odd_spectrum if sol.odd_spectrum is not None else np.zeros(sol.modes)
    rows = ["n,k,cos,sin"]
    rows += [f"{n},{kn!r},{a!r},{b!r}" for n, kn, a, b in
             zip(range(1, sol.modes + 1), k.tolist(), sol.surface_spectrum.tolist(), odd.tolist())]
    return "\n".join(rows) + "\n"
