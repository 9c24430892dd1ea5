"""Optimization layer: standard-form programs, backends, and the registry."""

from .config import (
    InfeasibleQP,
    NoInteriorPoint,
    SolverConfig,
    SolverResult,
    SolverStall,
    StandardFormProgram,
    available_solvers,
    dispatch,
    register_solver,
)
from .programs import (
    AnalyticCenterSolution,
    MinNormSolution,
    PartitionLPSolution,
    ProjectionResult,
    project_onto_cone,
    solve_analytic_center,
    solve_min_norm_qp,
    solve_partition_lp,
)

__all__ = [
    "AnalyticCenterSolution",
    "InfeasibleQP",
    "MinNormSolution",
    "NoInteriorPoint",
    "PartitionLPSolution",
    "ProjectionResult",
    "SolverConfig",
    "SolverResult",
    "SolverStall",
    "StandardFormProgram",
    "available_solvers",
    "dispatch",
    "project_onto_cone",
    "register_solver",
    "solve_analytic_center",
    "solve_min_norm_qp",
    "solve_partition_lp",
]
