"""Solitary gravity waves, their dynamic-pressure field and checks of its extrema."""
from .core import DomainGeometry, Environment, PhysicalPoint, ScaledEnvironment, critical_speed, nondimensionalize
from .fields import (
    FieldGrid,
    GridSpec,
    dynamic_pressure,
    flow_field,
    half_domain_grid,
    mass_flux,
    pressure_gradient,
    sample_grid,
    stream_function,
    surface_elevation,
    total_pressure,
    velocity,
)
from .gauge import GaugeTrace, HeightBound, height_lower_bound, p_infinity_estimate, synth_trace
from .solver import (
    Diagnostics,
    ResidualReport,
    WaveSolution,
    continue_amplitude,
    decay_rate,
    kdv_profile,
    residuals,
    solve_wave,
)
from .verify import Finding, PropertyId, Status, VerificationReport, VerifierConfig, verify_all

__version__ = "0.1.0"
