"""Certified upper bound on the homogeneous error constant of A x <= 0.

The target quantity is

    H0(A) = sup over u outside P of dist_2(u, P) / max_i (A u)_i^+

with P = {x : A x <= 0}, the Euclidean norm on inputs, and the max norm on
row violations.  By convention H0 of a zero matrix is 0.  The bound is
assembled from three certified components attached to the tight/slack row
partition (B, N):

* slack rows: any x_bar with A_N x_bar >= 1 gives H0(A_N) <= ||x_bar||_2
  (the sign of x_bar is immaterial; flipping it turns the deep-slack
  certificate into a deep-violation one with the same norm);
* tight rows: any y_bar > 0 with sum 1 and A_B' y_bar = 0 gives
  H0(A_B) <= 2 / sigma, where sigma is the smallest positive singular value
  of A_B' diag(y_bar);
* stitching: with Q an orthonormal basis of null(A_B) and D the inverse row
  norms of A_N, any z_bar with D A_N Q z_bar >= 1 bounds the restriction
  factor by 1 + 2 ||z_bar||_2.

The total is the restriction factor times the larger of the two row-block
bounds, degenerating to the single available component when one side of the
partition is empty.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .core import ProblemInstance, euclidean_norm
from .numerics import (
    DEFAULT_RANK_TOL,
    NullBasis,
    NumericalFailure,
    orthonormal_null_basis,
    row_normalize,
    smallest_positive_singular_value,
)
from .partition import PartitionCertificate, compute_partition
from .solvers import (
    SolverConfig,
    solve_analytic_center,
    solve_min_norm_qp,
)

__all__ = [
    "BoundReport",
    "CaseBBound",
    "CaseNBound",
    "StitchBound",
    "bound_case_b",
    "bound_case_n",
    "bound_h0",
    "bound_stitch",
]


@dataclass(frozen=True)
class CaseNBound:
    """Bound on the slack-row block: value = ||x_bar|| with A_N x_bar >= 1."""

    value: float
    x_bar: np.ndarray
    min_margin: float
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.x_bar.setflags(write=False)


@dataclass(frozen=True)
class CaseBBound:
    """Bound on the tight-row block: value = 2 / sigma at the analytic center.

    ``sigma`` is the smallest positive singular value of A_B' diag(y_bar);
    it is None only for an identically zero tight block, where the bound is
    0 by the zero-matrix convention.
    """

    value: float
    y_bar: np.ndarray
    sigma: float | None
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.y_bar.setflags(write=False)


@dataclass(frozen=True)
class StitchBound:
    """Restriction factor: value = 1 + 2 ||z_bar|| with D A_N Q z_bar >= 1.

    ``Q`` is the orthonormal null-space basis of A_B the certificate lives
    in; auditors recompute D from the rows of A_N and check the margin of
    Q z_bar directly.
    """

    value: float
    z_bar: np.ndarray
    Q: np.ndarray
    min_margin: float
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.z_bar.setflags(write=False)
        self.Q.setflags(write=False)


@dataclass(frozen=True)
class BoundReport:
    """Full output of one bounding run.

    ``branch`` records which arm of the combination produced ``total``:
    "zero" (zero matrix, total 0), "case_N" (no tight rows), "case_B" (no
    slack rows), or "general" (total = stitch * max of the block bounds,
    evaluated in exactly that floating-point order).
    """

    total: float
    branch: str
    partition: PartitionCertificate | None
    case_n: CaseNBound | None
    case_b: CaseBBound | None
    stitch: StitchBound | None
    diagnostics: dict = field(default_factory=dict)

    def recomputed_total(self) -> float:
        """Re-derive ``total`` from the components; must match bit for bit."""
        if self.branch == "zero":
            return 0.0
        if self.branch == "case_N":
            return self.case_n.value
        if self.branch == "case_B":
            return self.case_b.value
        if self.branch == "general":
            return self.stitch.value * max(self.case_n.value, self.case_b.value)
        raise ValueError(f"unknown branch {self.branch!r}")


def bound_case_n(A_N: np.ndarray, cfg: SolverConfig | None = None) -> CaseNBound:
    """Certified bound for the slack-row block via a minimum-norm point.

    Any x_bar with A_N x_bar >= 1 componentwise certifies that every unit of
    max-norm violation can be repaired by moving at most ||x_bar|| in
    Euclidean distance, so the minimum-norm such point gives the tightest
    bound of this family.
    """
    cfg = cfg or SolverConfig()
    A_N = np.asarray(A_N, dtype=float)
    sol = solve_min_norm_qp(A_N, cfg)
    return CaseNBound(
        value=sol.norm,
        x_bar=sol.z.copy(),
        min_margin=sol.min_margin,
        diagnostics={
            "dual_lower": sol.dual_lower,
            "optimality_gap": sol.residuals["optimality_gap"],
            "iterations": sol.iterations,
        },
    )


def bound_case_b(
    A_B: np.ndarray,
    cfg: SolverConfig | None = None,
    y_start: np.ndarray | None = None,
    rank_tol: float = DEFAULT_RANK_TOL,
) -> CaseBBound:
    """Certified bound for the tight-row block via the analytic center.

    The center y_bar maximizes the product of the dual weights on the slice
    {y > 0 : A_B' y = 0, sum(y) = 1}; weighting the rows of A_B by it and
    reading off the smallest positive singular value yields the bound
    2 / sigma.  An identically zero block returns 0 by convention.
    """
    cfg = cfg or SolverConfig()
    A_B = np.asarray(A_B, dtype=float)
    p = A_B.shape[0]
    if p == 0:
        raise ValueError("the tight set must be nonempty")
    if float(np.abs(A_B).max(initial=0.0)) == 0.0:
        return CaseBBound(
            value=0.0,
            y_bar=np.full(p, 1.0 / p),
            sigma=None,
            diagnostics={"note": "zero tight block; bound is 0 by convention"},
        )

    ac = solve_analytic_center(A_B, cfg, y_start=y_start)
    weighted = A_B.T * ac.y[None, :]
    sigma = smallest_positive_singular_value(weighted, rank_tol)
    if sigma is None:
        raise NumericalFailure(
            "weighted tight block has no positive singular value above the "
            "rank tolerance; the center is too unbalanced to certify"
        )
    return CaseBBound(
        value=2.0 / sigma,
        y_bar=ac.y.copy(),
        sigma=sigma,
        diagnostics={
            "grad_norm": ac.grad_norm,
            "center_eq_inf": ac.residuals["eq_inf"],
            "min_component": ac.residuals["min_component"],
            "iterations": ac.iterations,
        },
    )


def bound_stitch(
    A_B: np.ndarray,
    A_N: np.ndarray,
    cfg: SolverConfig | None = None,
    rank_tol: float = DEFAULT_RANK_TOL,
    null_basis: NullBasis | None = None,
) -> StitchBound:
    """Certified restriction factor tying the block bounds together.

    Within L = null(A_B) the slack rows are normalized to unit length and a
    deep point z_bar with D A_N Q z_bar >= 1 is computed; 1 + 2 ||z_bar||
    bounds how much distances can grow when passing from the subspace to the
    cone cut out of it.  The factor is invariant to the choice of
    orthonormal basis Q, which ``null_basis`` lets callers pin down.
    """
    cfg = cfg or SolverConfig()
    A_B = np.asarray(A_B, dtype=float)
    A_N = np.asarray(A_N, dtype=float)
    if A_N.shape[0] == 0:
        raise ValueError("the slack set must be nonempty")

    basis = null_basis if null_basis is not None else orthonormal_null_basis(
        A_B, rank_tol
    )
    scaling = row_normalize(A_N)
    M = scaling.normalized_rows @ basis.Q
    sol = solve_min_norm_qp(M, cfg)
    return StitchBound(
        value=1.0 + 2.0 * sol.norm,
        z_bar=sol.z.copy(),
        Q=np.array(basis.Q),
        min_margin=sol.min_margin,
        diagnostics={
            "null_dim": int(basis.Q.shape[1]),
            "basis_residual": basis.residual,
            "dual_lower": sol.dual_lower,
            "optimality_gap": sol.residuals["optimality_gap"],
            "iterations": sol.iterations,
        },
    )


def bound_h0(
    instance: ProblemInstance,
    cfg: SolverConfig | None = None,
    rank_tol: float = DEFAULT_RANK_TOL,
) -> BoundReport:
    """Certified upper bound on H0(A) with all intermediate certificates.

    The tight/slack partition decides the branch: a zero matrix is 0 by
    convention, a one-sided partition returns its single block bound, and
    the general case multiplies the restriction factor by the larger block
    bound.  Every certificate the branch used is kept on the report so an
    independent audit can recheck the claim with matrix-vector products.
    """
    cfg = cfg or SolverConfig()
    timings: dict[str, float] = {}
    t0 = time.perf_counter()

    diagnostics = {
        "feas_tol": cfg.feas_tol,
        "opt_tol": cfg.opt_tol,
        "solver_id": cfg.solver_id,
        "rank_tol": rank_tol,
        "m": instance.m,
        "n": instance.n,
        "frobenius_scale": instance.frobenius_scale,
        "timings": timings,
    }

    if instance.is_zero:
        timings["total_s"] = time.perf_counter() - t0
        return BoundReport(
            total=0.0,
            branch="zero",
            partition=None,
            case_n=None,
            case_b=None,
            stitch=None,
            diagnostics=diagnostics,
        )

    t1 = time.perf_counter()
    cert = compute_partition(instance, cfg)
    timings["partition_s"] = time.perf_counter() - t1

    A = instance.A
    A_B = A[list(cert.B)]
    A_N = A[list(cert.N)]

    case_n = case_b = stitch = None
    if not cert.N:
        t1 = time.perf_counter()
        case_b = bound_case_b(A_B, cfg, y_start=cert.y_hat, rank_tol=rank_tol)
        timings["case_b_s"] = time.perf_counter() - t1
        total = case_b.value
        branch = "case_B"
    elif not cert.B:
        t1 = time.perf_counter()
        case_n = bound_case_n(A_N, cfg)
        timings["case_n_s"] = time.perf_counter() - t1
        total = case_n.value
        branch = "case_N"
    else:
        t1 = time.perf_counter()
        case_n = bound_case_n(A_N, cfg)
        timings["case_n_s"] = time.perf_counter() - t1
        t1 = time.perf_counter()
        case_b = bound_case_b(A_B, cfg, y_start=cert.y_hat, rank_tol=rank_tol)
        timings["case_b_s"] = time.perf_counter() - t1
        t1 = time.perf_counter()
        stitch = bound_stitch(A_B, A_N, cfg, rank_tol=rank_tol)
        timings["stitch_s"] = time.perf_counter() - t1
        total = stitch.value * max(case_n.value, case_b.value)
        branch = "general"

    timings["total_s"] = time.perf_counter() - t0
    return BoundReport(
        total=total,
        branch=branch,
        partition=cert,
        case_n=case_n,
        case_b=case_b,
        stitch=stitch,
        diagnostics=diagnostics,
    )
