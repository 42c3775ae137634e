"""Finite-difference solver for the 2D viscous shallow-water equations
on a square domain with Dirichlet walls and transmission (open)
boundaries, plus discrete energy diagnostics and a calibration sweep for
the transmission coefficient.

The per-step kernels run on a compiled Cython core when available and
fall back to a vectorized NumPy implementation otherwise; see
:mod:`swetbc.kernels`.
"""

from .boundary import BOUNDARY_CASES, BoundaryLayout, make_boundary_case
from .config import RunConfig, parse_config, serialize_config
from .diagnostics import (
    EnergyRecord,
    Theorem2Report,
    boundary_integrals,
    compute_energy,
    dissipation_integral,
    energy_identity_residual,
    extrema_table,
    theorem2_check,
    transmission_coefficient_bound,
)
from .domain import GridSpec, InitialCondition, PhysicalParams, State, build_grid, init_state
from .errors import (
    BlowUpError,
    ConfigurationError,
    DryStateError,
    SolverError,
    UsageError,
)
from .experiments import (
    IC_CASES,
    REFERENCE_EXTREMA,
    REFERENCE_SWEEP,
    SweepResult,
    SweepSpec,
    preset,
    run_sweep,
    s_norm,
    time_accumulated_norm,
)
from .kernels import available_backends, default_backend_name, get_backend
from .solver import RunResult, TimeStepping, advance, run

__version__ = "0.1.0"

__all__ = [
    "BOUNDARY_CASES",
    "BoundaryLayout",
    "make_boundary_case",
    "RunConfig",
    "parse_config",
    "serialize_config",
    "EnergyRecord",
    "Theorem2Report",
    "boundary_integrals",
    "compute_energy",
    "dissipation_integral",
    "energy_identity_residual",
    "extrema_table",
    "theorem2_check",
    "transmission_coefficient_bound",
    "GridSpec",
    "InitialCondition",
    "PhysicalParams",
    "State",
    "build_grid",
    "init_state",
    "SolverError",
    "ConfigurationError",
    "BlowUpError",
    "DryStateError",
    "UsageError",
    "IC_CASES",
    "REFERENCE_EXTREMA",
    "REFERENCE_SWEEP",
    "SweepSpec",
    "SweepResult",
    "preset",
    "run_sweep",
    "s_norm",
    "time_accumulated_norm",
    "available_backends",
    "default_backend_name",
    "get_backend",
    "RunResult",
    "TimeStepping",
    "advance",
    "run",
    "__version__",
]
