"""Finite-volume solver for the hyperbolic (extended-Lagrangian) relaxations
of the Serre-Green-Naghdi and Iordanskii-Kogarko-Wijngaarden systems."""

import os

# prefer OpenMP for the parallel sweeps; skips numba's noisy TBB probe
os.environ.setdefault("NUMBA_THREADING_LAYER_PRIORITY", "omp workqueue tbb")

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ConfigError,
    DegenerateStarState,
    DomainError,
    HyperbolicityViolation,
    HyperDispError,
    NonPositiveBubbleVolume,
    NonPositiveDepth,
    PlateauNotFound,
    ShapeMismatch,
    ZeroWaveSpeed,
)
from .grid import BoundaryCondition, Grid, apply_boundary_conditions  # noqa: E402
from .integrators import SchemeConfig, StepReport, cfl_dt, step  # noqa: E402
from .model import ModelClosure, PrimitiveState  # noqa: E402
from .scenarios import ScenarioSpec, builtin_scenarios  # noqa: E402

__all__ = [
    "BoundaryCondition", "ConfigError", "DegenerateStarState", "DomainError", "Grid",
    "HyperDispError", "HyperbolicityViolation", "ModelClosure", "NonPositiveBubbleVolume",
    "NonPositiveDepth", "PlateauNotFound", "PrimitiveState", "ScenarioSpec", "SchemeConfig",
    "ShapeMismatch", "StepReport", "ZeroWaveSpeed", "apply_boundary_conditions",
    "builtin_scenarios", "cfl_dt", "step",
]
