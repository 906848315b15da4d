"""atmfv: finite-volume WENO-TVD solver for 2D atmospheric flow benchmarks.

A structured-grid solver combining quadratic WENO reconstruction with a
flux-limited centred (FLIC/GFORCE) flux, third-order TVD Runge-Kutta time
stepping and Strang splitting for source terms. Ships two models
(space-dependent linear advection and the compressible Euler equations in
potential-temperature form) and a catalogue of standard advection and
convection test cases.
"""

from atmfv.grid import BCKind, Field, Grid, apply_bc, make_grid
from atmfv.weno import WenoParams, reconstruct_field
from atmfv.flux import FluxConfig
from atmfv.physics import AdvectionModel, DryAir, EulerModel
from atmfv.integrate import SolverError, compute_dt, rk3_step, strang_step
from atmfv.scenarios import SCENARIOS, get_scenario, simulate

__version__ = "0.1.0"

__all__ = [
    "BCKind",
    "Field",
    "Grid",
    "apply_bc",
    "make_grid",
    "WenoParams",
    "reconstruct_field",
    "FluxConfig",
    "AdvectionModel",
    "DryAir",
    "EulerModel",
    "SolverError",
    "compute_dt",
    "rk3_step",
    "strang_step",
    "SCENARIOS",
    "get_scenario",
    "simulate",
    "__version__",
]
