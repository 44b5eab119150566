"""Pseudo-differential two-way sweeping for the 2D Helmholtz equation.

The solver marches one-way equations built from rotated Padé approximants of
the square-root, damping and fractional-attenuation symbols, adds one
backward/forward reflection correction, and checks the result through
Helmholtz residuals in negative Sobolev norms.
"""

from .config import ConfigError, RunConfig, parse_config, parse_config_text, parse_omega
from .fieldio import FieldFormatError, read_field, render_image, write_csv, write_field, write_pgm
from .medium import (DomainSpec, Medium, MediumSlice, build_benchmark_medium,
                     build_homogeneous_medium, dirichlet_profile, grid_points)
from .ops import PadeSet, SymbolBank, TridiagonalSystem, solve_tridiagonal
from .pade import (PadeCoefficients, PadeError, coefficients, error_scan, evaluate,
                   generate_classical, load_table, rotate)
from .residual import (ResidualReport, apply_helmholtz, cone_fractions, observed_order,
                       relative_residual, sobolev_norm)
from .study import ConvergenceTable, run_convergence
from .sweep import Field2D, NumericalAbort, Sweeper, heun_march, solve_one_way, solve_two_way

__version__ = "0.1.0"

__all__ = [
    "ConfigError", "RunConfig", "parse_config", "parse_config_text", "parse_omega",
    "FieldFormatError", "read_field", "render_image", "write_csv", "write_field", "write_pgm",
    "DomainSpec", "Medium", "MediumSlice", "build_homogeneous_medium", "build_benchmark_medium",
    "dirichlet_profile", "grid_points",
    "PadeSet", "SymbolBank", "TridiagonalSystem", "solve_tridiagonal",
    "PadeCoefficients", "PadeError", "coefficients", "error_scan", "evaluate",
    "generate_classical", "load_table", "rotate",
    "ResidualReport", "apply_helmholtz", "cone_fractions", "observed_order",
    "relative_residual", "sobolev_norm",
    "ConvergenceTable", "run_convergence",
    "Field2D", "NumericalAbort", "Sweeper", "heun_march", "solve_one_way", "solve_two_way",
]
