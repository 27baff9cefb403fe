"""Physical constants, scaling and domain geometry.

Density is fixed at 1, so every pressure in the package is a pressure per unit
density (units of length^2 / time^2).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Mapping

from .errors import InvalidInput

DENSITY = 1.0


@dataclass(frozen=True)
class Environment:
    gravity: float = 1.0
    depth: float = 1.0
    p_atm: float = 0.0

    def __post_init__(self):
        for name in ("gravity", "depth", "p_atm"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or not math.isfinite(value):
                raise InvalidInput(f"{name} must be a finite number, got {value!r}")
            object.__setattr__(self, name, float(value))
        if self.gravity <= 0:
            raise InvalidInput(f"gravity must be positive, got {self.gravity}")
        if self.depth <= 0:
            raise InvalidInput(f"depth must be positive, got {self.depth}")

    @property
    def density(self) -> float:
        return DENSITY

    @classmethod
    def from_json(cls, obj: Mapping[str, Any]) -> "Environment":
        """Build from a ``{"gravity", "depth", "p_atm"}`` mapping (SI units)."""
        unknown = set(obj) - {"gravity", "depth", "p_atm"}
        if unknown:
            raise InvalidInput(f"unknown environment keys: {sorted(unknown)}")
        return cls(
            gravity=obj.get("gravity", 1.0),
            depth=obj.get("depth", 1.0),
            p_atm=obj.get("p_atm", 0.0),
        )

    def to_json(self) -> dict:
        return {"gravity": self.gravity, "depth": self.depth, "p_atm": self.p_atm}


@dataclass(frozen=True)
class ScaledEnvironment:
    """Scaling to the system with g = d = 1.

    A dimensional quantity q with scale s maps to q / s; multiply to map back.
    """

    env: Environment
    length: float
    time: float

    gravity: float = 1.0
    depth: float = 1.0

    @property
    def velocity(self) -> float:
        return self.length / self.time

    @property
    def pressure(self) -> float:
        # pressure per unit density: velocity^2 = g d
        return self.velocity**2

    @property
    def acceleration(self) -> float:
        return self.length / self.time**2

    @property
    def stream(self) -> float:
        return self.length * self.velocity

    @property
    def p_atm(self) -> float:
        return self.env.p_atm / self.pressure

    def redimensionalize(self) -> Environment:
        return Environment(
            gravity=self.gravity * self.acceleration,
            depth=self.depth * self.length,
            p_atm=self.p_atm * self.pressure,
        )


def nondimensionalize(env: Environment) -> ScaledEnvironment:
    return ScaledEnvironment(env=env, length=env.depth, time=math.sqrt(env.depth / env.gravity))


def critical_speed(env: Environment) -> float:
    """Long-wave speed sqrt(g d); solitary waves travel strictly faster."""
    return math.sqrt(env.gravity * env.depth)


@dataclass(frozen=True)
class PhysicalPoint:
    x: float
    y: float


@dataclass(frozen=True)
class DomainGeometry:
    """Right half of the fluid domain and the broken line bounding it.

    The broken line runs from the crest (0, eta(0)) down to the corner (0, -d)
    and then along the bed to x = half_length.
    """

    depth: float
    crest_elevation: float
    half_length: float
    half_domain: bool = True

    def __post_init__(self):
        if self.half_length <= 0:
            raise InvalidInput("half_length must be positive")
        if self.depth <= 0:
            raise InvalidInput("depth must be positive")

    @property
    def corner(self) -> PhysicalPoint:
        return PhysicalPoint(0.0, -self.depth)

    def crest_line(self, s):
        """Point at fraction s in [0, 1] from the crest down to the corner."""
        return PhysicalPoint(0.0, self.crest_elevation - s * (self.crest_elevation + self.depth))

    def bed(self, s):
        """Point at fraction s in [0, 1] from the corner out to the truncation."""
        return PhysicalPoint(s * self.half_length, -self.depth)

    @property
    def broken_line_length(self) -> float:
        return self.crest_elevation + self.depth + self.half_length
