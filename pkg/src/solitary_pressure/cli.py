"""Command-line driver: solve, fields, verify, estimate-height, sweep.

Exit codes: 0 ok, 1 verification failure, 2 solver non-convergence, 3 invalid input.
Settings come from built-in defaults, then a ``--config`` JSON file, then flags.
The output directory may also be set with SOLITARY_PRESSURE_OUTPUT_DIR
(a flag still wins over the variable, the variable over the config file).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import serialize
from .core import Environment
from .errors import (
    AmplitudeCapExceeded,
    AmplitudeOutOfRange,
    InputFormat,
    InvalidInput,
    NoConvergence,
    NotConverged,
    SolitaryWaveError,
)
from .fields import dynamic_pressure, half_domain_grid, surface_elevation
from .gauge import height_lower_bound, load_trace, synth_trace
from .solver import DEFAULT_CAP, WaveSolution, default_modes, solve_wave
from .verify import Status, VerifierConfig, corrupt_spectrum, tail_offset_pressure, verify_all

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_NO_CONVERGENCE = 2
EXIT_INVALID = 3

OUTPUT_DIR_VAR = "SOLITARY_PRESSURE_OUTPUT_DIR"

ENV_DEFAULTS = {"gravity": 1.0, "depth": 1.0, "p_atm": 0.0}
SOLVER_DEFAULTS = {"amplitude": None, "froude": None, "modes": None, "half_length": None, "tol": 1e-12,
                   "amplitude_cap": DEFAULT_CAP}
VERIFIER_KEYS = tuple(VerifierConfig().to_json())

DEFAULTS = {
    "solve": {**ENV_DEFAULTS, **SOLVER_DEFAULTS, "still_water": False, "output": "solution.json",
              "spectrum": False},
    "fields": {"solution": None, "stations": 201, "nodes": 41, "format": "both", "output": "fields"},
    "verify": {"solution": None, **VerifierConfig().to_json(), "corrupt_spectrum": 0.0, "tail_offset": 0.0,
               "output": "verification.json"},
    "estimate-height": {**ENV_DEFAULTS, "trace": None, "solution": None, "samples": 401, "sigma": 0.0,
                        "seed": 0, "tail_fraction": 0.1, "speed": None, "p_inf": None,
                        "output": "height_bound.json"},
    "sweep": {**ENV_DEFAULTS, "amplitudes": [], "modes": None, "tol": 1e-12, "amplitude_cap": DEFAULT_CAP,
              "verify": True, "samples": 401, "output": "sweep"},
}


@dataclass(frozen=True)
class RunConfig:
    """Effective settings of one run; enough to reproduce it."""

    command: str
    values: dict = field(default_factory=dict)
    output_dir: str = "."

    def __getitem__(self, key):
        return self.values[key]

    def to_json(self) -> dict:
        return {"command": self.command, **self.values}

    def path(self, name: str) -> Path:
        p = Path(name)
        return p if p.is_absolute() else Path(self.output_dir) / p

    @property
    def env(self) -> Environment:
        return Environment(gravity=self["gravity"], depth=self["depth"], p_atm=self["p_atm"])


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _float_list(text):
    text = text.strip()
    if not text:
        return []
    try:
        return [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _env_flags(p):
    p.add_argument("--gravity", type=float, help="gravitational acceleration (default 1)")
    p.add_argument("--depth", type=float, help="undisturbed depth (default 1)")
    p.add_argument("--p-atm", type=float, dest="p_atm", help="atmospheric pressure per unit density (default 0)")


def _common(p):
    p.add_argument("--config", help="JSON file with settings; flags override it")
    p.add_argument("--output-dir", dest="output_dir", help=f"output directory (or ${OUTPUT_DIR_VAR})")
    p.add_argument("--output", help="output file name or prefix")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="solitary-pressure", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="compute a solitary wave and write it as JSON")
    _common(p)
    _env_flags(p)
    p.add_argument("--amplitude", type=float, help="crest elevation above the undisturbed level")
    p.add_argument("--froude", type=float, help="Froude number c / sqrt(g d)")
    p.add_argument("--modes", type=int, help="Fourier modes, power of two >= 64 (default: by amplitude)")
    p.add_argument("--half-length", type=float, dest="half_length", help="truncation half-length")
    p.add_argument("--tol", type=float, help="Newton tolerance (nondimensional)")
    p.add_argument("--amplitude-cap", type=float, dest="amplitude_cap", help="largest admissible a/d")
    p.add_argument("--still-water", action="store_const", const=True, dest="still_water",
                   help="write the flat pseudo-solution at the given Froude number instead")
    p.add_argument("--spectrum", action="store_const", const=True, help="also write the mode table as CSV")

    p = sub.add_parser("fields", help="sample the flow on a boundary-fitted grid over x >= 0")
    _common(p)
    p.add_argument("solution", nargs="?", help="solution JSON written by solve")
    p.add_argument("--stations", type=int, help="stations in [0, half_length]; 0 or 1 gives the crest column")
    p.add_argument("--nodes", type=int, help="nodes per station")
    p.add_argument("--format", choices=("csv", "json", "both"))

    p = sub.add_parser("verify", help="check the pressure properties of a solution")
    _common(p)
    p.add_argument("solution", nargs="?", help="solution JSON written by solve")
    for key in VERIFIER_KEYS:
        kind = int if isinstance(getattr(VerifierConfig(), key), int) else float
        p.add_argument("--" + key.replace("_", "-"), dest=key, type=kind)
    p.add_argument("--corrupt-spectrum", dest="corrupt_spectrum", type=float,
                   help="negative control: add an odd surface component of this relative size")
    p.add_argument("--tail-offset", dest="tail_offset", type=float,
                   help="negative control: add this offset to p in the tail for the decay check")

    p = sub.add_parser("estimate-height", help="lower bound on the crest elevation from a bed trace")
    _common(p)
    _env_flags(p)
    p.add_argument("trace", nargs="?", help="CSV with header x,pressure or t,pressure")
    p.add_argument("--from-solution", dest="solution", help="synthesize the trace from a solution file")
    p.add_argument("--samples", type=int, help="stations of a synthetic trace")
    p.add_argument("--sigma", type=float, help="noise standard deviation of a synthetic trace")
    p.add_argument("--seed", type=int, help="noise seed")
    p.add_argument("--tail-fraction", dest="tail_fraction", type=float, help="fraction of samples per tail")
    p.add_argument("--speed", type=float, help="wave speed for converting a time series to x")
    p.add_argument("--p-inf", dest="p_inf", type=float, help="reference far-field bed pressure (default: tail median)")

    p = sub.add_parser("sweep", help="solve, verify and bound a list of amplitudes")
    _common(p)
    _env_flags(p)
    p.add_argument("--amplitudes", type=_float_list, help="comma-separated amplitudes")
    p.add_argument("--modes", type=int)
    p.add_argument("--tol", type=float)
    p.add_argument("--amplitude-cap", type=float, dest="amplitude_cap")
    p.add_argument("--no-verify", action="store_const", const=False, dest="verify")
    p.add_argument("--samples", type=int, help="stations of the synthetic bed trace")
    return parser


def effective_config(args: argparse.Namespace) -> RunConfig:
    command = args.command
    values = dict(DEFAULTS[command])
    file_dir = None
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                loaded = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise InputFormat(f"cannot read config file: {exc}") from None
        if not isinstance(loaded, dict):
            raise InputFormat("config file must hold a JSON object")
        loaded = {k.replace("-", "_"): v for k, v in loaded.items() if k != "command"}
        file_dir = loaded.pop("output_dir", None)
        unknown = set(loaded) - set(values)
        if unknown:
            raise InputFormat(f"unknown config keys for {command}: {sorted(unknown)}")
        values.update(loaded)
    for key in values:
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    out_dir = args.output_dir or os.environ.get(OUTPUT_DIR_VAR) or file_dir or "."
    return RunConfig(command, values, out_dir)


def _write(cfg: RunConfig, name: str, text: str) -> Path:
    path = cfg.path(name)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    return path


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _load_solution(cfg: RunConfig) -> WaveSolution:
    if not cfg["solution"]:
        raise InvalidInput("a solution file is required")
    return serialize.load(cfg["solution"])


# ---------------------------------------------------------------------------


def cmd_solve(cfg: RunConfig) -> int:
    env = cfg.env
    a, F = cfg["amplitude"], cfg["froude"]
    if cfg["still_water"]:
        sol = WaveSolution.still_water(env, froude=F if F is not None else 1.1, modes=cfg["modes"] or 64,
                                       half_length=(cfg["half_length"] or 40.0 * env.depth) / env.depth)
    else:
        modes = cfg["modes"]
        if modes is None:
            guess = a / env.depth if a is not None else (F * F - 1.0 if F is not None else 0.0)
            modes = default_modes(guess)
        sol = solve_wave(env, amplitude=a, froude=F, modes=modes, half_length=cfg["half_length"],
                         tol=cfg["tol"], amplitude_cap=cfg["amplitude_cap"])
    path = _write(cfg, cfg["output"], serialize.dumps(sol, request=cfg.to_json()))
    if cfg["spectrum"]:
        _write(cfg, Path(cfg["output"]).with_suffix(".spectrum.csv").name, serialize.spectrum_csv(sol))
    print(f"a = {sol.amplitude:.12g}  F = {sol.froude:.12g}  c = {sol.speed:.12g}  "
          f"modes = {sol.modes}  half_length = {sol.half_length:g}  -> {path}")
    return EXIT_OK


PLOT_SCRIPT = """\
# gnuplot script for {csv}
set datafile separator ','
set key autotitle columnhead
set xlabel 'x'
set ylabel 'y'
set title 'dynamic pressure p'
set view map
set palette rgbformulae 33,13,10
splot '{csv}' using 1:2:7 with points pointtype 5 pointsize 0.5 palette notitle
"""


def cmd_fields(cfg: RunConfig) -> int:
    sol = _load_solution(cfg)
    if cfg["nodes"] < 1 or cfg["stations"] < 0:
        raise InvalidInput("stations must be >= 0 and nodes >= 1")
    grid = half_domain_grid(sol, cfg["stations"], cfg["nodes"])
    stem = cfg["output"]
    written = []
    if cfg["format"] in ("csv", "both"):
        written.append(_write(cfg, stem + ".csv", grid.to_csv()))
        written.append(_write(cfg, stem + ".plot.txt", PLOT_SCRIPT.format(csv=Path(stem).name + ".csv")))
    if cfg["format"] in ("json", "both"):
        doc = {"config": cfg.to_json(), **grid.to_json()}
        written.append(_write(cfg, stem + ".json", json.dumps(doc) + "\n"))
    print(f"{len(grid)} samples -> " + ", ".join(str(p) for p in written))
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    sol = _load_solution(cfg)
    vconf = VerifierConfig(**{k: cfg[k] for k in VERIFIER_KEYS})
    if cfg["corrupt_spectrum"]:
        sol = corrupt_spectrum(sol, cfg["corrupt_spectrum"])
    pressure = tail_offset_pressure(sol, cfg["tail_offset"], vconf.tail_start) if cfg["tail_offset"] else None
    report = verify_all(sol, vconf, pressure=pressure)
    doc = {"config": cfg.to_json(), **report.to_json()}
    _write(cfg, cfg["output"], _json_text(doc))
    print(report.to_table(), flush=True)
    if report.overall is Status.FAIL:
        return EXIT_VERIFY_FAIL
    if report.overall is Status.INDETERMINATE or report.has_notes:
        print("warning: some properties are indeterminate or near the noise floor; see notes", file=sys.stderr)
    return EXIT_OK


def cmd_estimate_height(cfg: RunConfig) -> int:
    env = cfg.env
    if cfg["trace"]:
        trace = load_trace(cfg["trace"], env)
    elif cfg["solution"]:
        sol = serialize.load(cfg["solution"])
        env = sol.env
        stations = np.linspace(-sol.half_length, sol.half_length, cfg["samples"])
        trace = synth_trace(sol, stations, cfg["sigma"], cfg["seed"])
        _write(cfg, Path(cfg["output"]).with_suffix(".trace.csv").name, trace.to_csv())
    else:
        raise InvalidInput("give a trace file or --from-solution")
    if trace.kind == "t" and cfg["speed"] is not None:
        trace = trace.to_space(cfg["speed"])
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        bound = height_lower_bound(trace, env, cfg["tail_fraction"], cfg["p_inf"])
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    doc = {**bound.to_json(), "config": cfg.to_json()}
    _write(cfg, cfg["output"], _json_text(doc))
    print(json.dumps(bound.to_json()))
    return EXIT_OK


SWEEP_COLUMNS = ("a", "F", "c", "m", "C", "p_crest", "h_lb", "status")


def sweep_rows(cfg: RunConfig):
    env = cfg.env
    amps = [float(a) for a in cfg["amplitudes"]]
    for a in amps:
        if not a > 0:
            raise AmplitudeOutOfRange(f"amplitude must be positive, got {a}")
        if a / env.depth > cfg["amplitude_cap"]:
            raise AmplitudeCapExceeded(f"amplitude {a} exceeds the cap {cfg['amplitude_cap']} d")
    rows = []
    for a in amps:
        modes = cfg["modes"] or default_modes(a / env.depth)
        sol = solve_wave(env, amplitude=a, modes=modes, tol=cfg["tol"], amplitude_cap=cfg["amplitude_cap"])
        eta0 = float(surface_elevation(sol, 0.0))
        p_crest = float(dynamic_pressure(sol, 0.0, eta0))
        stations = np.linspace(-sol.half_length, sol.half_length, cfg["samples"])
        h_lb = height_lower_bound(synth_trace(sol, stations)).h_lb
        status = verify_all(sol).overall.value if cfg["verify"] else "skipped"
        rows.append({"a": sol.amplitude, "F": sol.froude, "c": sol.speed, "m": sol.mass_flux,
                     "C": sol.bernoulli_C, "p_crest": p_crest, "h_lb": h_lb, "status": status})
    return rows


def cmd_sweep(cfg: RunConfig) -> int:
    rows = sweep_rows(cfg)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_COLUMNS)
    for r in rows:
        w.writerow([r[k] if k == "status" else f"{r[k]:.17g}" for k in SWEEP_COLUMNS])
    stem = cfg["output"]
    _write(cfg, stem + ".csv", buf.getvalue())
    _write(cfg, stem + ".json", _json_text({"config": cfg.to_json(), "rows": rows}))
    sys.stdout.write(buf.getvalue())
    if any(r["status"] == Status.FAIL.value for r in rows):
        return EXIT_VERIFY_FAIL
    return EXIT_OK


COMMANDS = {
    "solve": cmd_solve,
    "fields": cmd_fields,
    "verify": cmd_verify,
    "estimate-height": cmd_estimate_height,
    "sweep": cmd_sweep,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = effective_config(args)
        return COMMANDS[args.command](cfg)
    except (NoConvergence, NotConverged) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    except (SolitaryWaveError, ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
