"""Random walks on weight lattices with minuscule steps, conditioned to stay
in the dominant Weyl chamber."""

from .conditioning import (SurvivalField, aitken_row, convergence_series, count_paths, finite_horizon_row,
                           finite_horizon_rows, h_n, survival, tail_fit)
from .errors import CapExceeded, ConfigError, WeylWalkError
from .lattice import (RootSystem, Weight, build_root_system, decompose_in_simple_roots, enumerate_weyl,
                      is_dominant, simple_reflection, weyl_orbit)
from .montecarlo import estimate_survival, simulate_conditioned, simulate_conditioned_batch, simulate_walk
from .reps import MinusculeRep, build_minuscule, char_eval, dim_irrep, minuscule_weights, successors
from .walk import (KernelRow, StepDistribution, doob_transform, h_drifted, kernel_drifted, kernel_zero_drift,
                   solve_x, step_distribution)

__all__ = [
    "CapExceeded", "ConfigError", "KernelRow", "MinusculeRep", "RootSystem", "StepDistribution",
    "SurvivalField", "Weight", "WeylWalkError", "aitken_row", "build_minuscule", "build_root_system",
    "char_eval", "convergence_series", "count_paths", "decompose_in_simple_roots", "dim_irrep",
    "doob_transform", "enumerate_weyl", "estimate_survival", "finite_horizon_row", "finite_horizon_rows",
    "h_drifted", "h_n", "is_dominant", "kernel_drifted", "kernel_zero_drift", "minuscule_weights",
    "simple_reflection", "simulate_conditioned", "simulate_conditioned_batch", "simulate_walk", "solve_x",
    "step_distribution", "successors", "survival", "tail_fit", "weyl_orbit",
]
