"""Concrete optimization programs used by the bounding pipeline.

Four operations are exposed, all routed through the backend registry:

* ``solve_partition_lp``: the self-dual feasibility LP whose optimal support
  splits the rows of A into the tight set B and the slack set N.
* ``solve_min_norm_qp``: minimum-Euclidean-norm point of ``{z : G z >= 1}``,
  with exact feasibility after restoration and a certified duality gap.
* ``solve_analytic_center``: log-barrier center of ``{y > 0 : A_B' y = 0,
  sum(y) = 1}`` by damped Newton on the affine slice.
* ``project_onto_cone``: Euclidean projection onto ``{x : A x <= 0}``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.optimize

from ..core import ProblemInstance, euclidean_norm, relative_scale
from ..numerics import NumericalFailure, orthonormal_null_basis
from .config import (
    InfeasibleQP,
    NoInteriorPoint,
    SolverConfig,
    SolverResult,
    SolverStall,
    StandardFormProgram,
    dispatch,
    register_solver,
)
from .ipm import solve_qp_ipm

__all__ = [
    "AnalyticCenterSolution",
    "MinNormSolution",
    "PartitionLPSolution",
    "ProjectionResult",
    "project_onto_cone",
    "solve_analytic_center",
    "solve_min_norm_qp",
    "solve_partition_lp",
]

_POS_FLOOR = 1e-12
_INFEAS_RESIDUAL = 1e-6


def _barrier_newton(program: StandardFormProgram, cfg: SolverConfig) -> SolverResult:
    """Damped Newton for min c'v - sum w_i log v_i over {E v = f, v > 0}.

    The iteration runs in the exact affine parametrization v = v0 + W q with
    W an orthonormal null-space basis of E, so equality feasibility is
    preserved to rounding error regardless of step length.
    """
    w = np.asarray(program.log_barrier_weights, dtype=float)
    if np.any(w <= 0.0):
        raise ValueError("log-barrier weights must all be positive")
    E = program.E
    f = program.f
    c = program.c

    v = _positive_slice_point(program, cfg)
    basis = orthonormal_null_basis(E)
    W = basis.Q
    if W.shape[1] == 0:
        return SolverResult(
            v=v,
            residuals={"grad_inf": 0.0, "eq_inf": float(np.abs(E @ v - f).max(initial=0.0))},
            iterations=0,
            status="converged",
        )

    grad_target = cfg.opt_tol * max(1.0, float(np.abs(c).max(initial=0.0)))
    status = "stalled"
    it = 0
    for it in range(cfg.max_iters):
        g_full = c - w / v
        g = W.T @ g_full
        gnorm = euclidean_norm(g)
        if gnorm <= grad_target:
            status = "converged"
            break

        B = W * (np.sqrt(w) / v)[:, None]
        H = B.T @ B
        dq = _solve_spd(H, -g)
        dv = W @ dq

        alpha = 1.0
        neg = dv < 0.0
        if np.any(neg):
            alpha = min(1.0, 0.99 * float(np.min(-v[neg] / dv[neg])))
        phi0 = float(c @ v) - float(w @ np.log(v))
        slope = float(g @ dq)
        # Once the Newton decrement drops below the evaluation noise of phi,
        # a sufficient-decrease test can only reject; the boundary-capped
        # step is safe there, so take it without backtracking.
        if -slope <= 1e-9 * max(1.0, abs(phi0)):
            v = v + alpha * dv
            continue
        for _ in range(60):
            v_new = v + alpha * dv
            if np.all(v_new > 0.0):
                phi = float(c @ v_new) - float(w @ np.log(v_new))
                if phi <= phi0 + 1e-4 * alpha * slope:
                    break
            alpha *= 0.5
        else:
            break
        v = v_new

    g_final = W.T @ (c - w / v)
    return SolverResult(
        v=v,
        residuals={
            "grad_inf": euclidean_norm(g_final),
            "eq_inf": float(np.abs(E @ v - f).max(initial=0.0)),
        },
        iterations=it,
        status=status,
    )


def _solve_spd(H: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Cholesky solve with a short jitter escalation on breakdown."""
    jitter = 0.0
    scale = float(np.abs(H).max(initial=1.0))
    for _ in range(4):
        try:
            cho = scipy.linalg.cho_factor(
                H + jitter * np.eye(H.shape[0]), check_finite=False
            )
            return scipy.linalg.cho_solve(cho, rhs, check_finite=False)
        except scipy.linalg.LinAlgError:
            jitter = max(jitter * 100.0, 1e-14 * scale)
    raise NumericalFailure("barrier Hessian factorization failed")


def _positive_slice_point(
    program: StandardFormProgram, cfg: SolverConfig
) -> np.ndarray:
    """Strictly positive point on {E v = f}, or raise NoInteriorPoint."""
    E = program.E
    f = program.f
    p = program.num_vars

    candidates = []
    if program.v0 is not None:
        v0 = np.asarray(program.v0, dtype=float)
        r = E @ v0 - f
        corr, *_ = np.linalg.lstsq(E, r, rcond=None)
        candidates.append(v0 - corr)
    v_mn, *_ = np.linalg.lstsq(E, f, rcond=None)
    candidates.append(v_mn)

    for cand in candidates:
        floor = _POS_FLOOR * max(1.0, float(np.abs(cand).max(initial=0.0)))
        if cand.min(initial=np.inf) > floor and _on_slice(E, f, cand):
            return cand

    # Phase one: maximize the smallest component over the slice.
    n_eq = E.shape[0]
    nv = p + 1 + p
    c = np.zeros(nv)
    c[p] = -1.0
    E1 = np.zeros((n_eq + p, nv))
    E1[:n_eq, :p] = E
    E1[n_eq:, :p] = np.eye(p)
    E1[n_eq:, p] = -1.0
    E1[n_eq:, p + 1 :] = -np.eye(p)
    f1 = np.concatenate([f, np.zeros(p)])
    cone = np.ones(nv, dtype=bool)
    res = solve_qp_ipm(
        np.zeros((nv, nv)),
        c,
        E1,
        f1,
        cone,
        feas_tol=cfg.feas_tol,
        opt_tol=cfg.opt_tol,
        max_iters=cfg.max_iters,
    )
    t_val = float(res.v[p])
    if res.status != "converged" or t_val <= 1e3 * _POS_FLOOR:
        raise NoInteriorPoint(
            "no strictly positive point on the equality slice was found"
        )
    return res.v[:p].copy()


def _on_slice(E: np.ndarray, f: np.ndarray, v: np.ndarray) -> bool:
    tol = 1e-10 * max(1.0, float(np.abs(E).max(initial=0.0))) * max(
        1.0, float(np.abs(v).max(initial=0.0))
    )
    return float(np.abs(E @ v - f).max(initial=0.0)) <= tol


def _builtin_backend(program: StandardFormProgram, cfg: SolverConfig) -> SolverResult:
    """Default backend: damped Newton for barrier programs, IPM otherwise."""
    if program.log_barrier_weights is not None:
        if program.quadratic is not None:
            raise ValueError("barrier and quadratic objectives cannot be combined")
        return _barrier_newton(program, cfg)

    c = program.c
    E = program.E
    f = program.f
    nonneg = np.asarray(program.nonneg, dtype=bool)
    N = program.num_vars
    P = program.quadratic if program.quadratic is not None else np.zeros((N, N))

    if program.G is not None:
        G = program.G
        h = program.h if program.h is not None else np.zeros(G.shape[0])
        k = G.shape[0]
        E = np.block([[E, np.zeros((E.shape[0], k))], [G, -np.eye(k)]])
        f = np.concatenate([f, h])
        c = np.concatenate([c, np.zeros(k)])
        P2 = np.zeros((N + k, N + k))
        P2[:N, :N] = P
        P = P2
        nonneg = np.concatenate([nonneg, np.ones(k, dtype=bool)])

    res = solve_qp_ipm(
        P,
        c,
        E,
        f,
        nonneg,
        feas_tol=cfg.feas_tol,
        opt_tol=cfg.opt_tol,
        max_iters=cfg.max_iters,
    )
    n_eq = program.f.shape[0]
    return SolverResult(
        v=res.v[:N],
        residuals={
            "primal_rel": res.primal_res,
            "dual_rel": res.dual_res,
            "comp": res.mu,
        },
        iterations=res.iterations,
        status=res.status,
        eq_multipliers=res.lam[:n_eq],
        ineq_multipliers=res.lam[n_eq:] if program.G is not None else None,
    )


register_solver("builtin", _builtin_backend)


@dataclass(frozen=True)
class PartitionLPSolution:
    """Optimal point of the row-partition LP.

    ``x`` certifies slack rows through ``A x + s = 0``; ``y`` certifies tight
    rows through ``A' y = 0``; ``t`` is the common support margin.
    """

    x: np.ndarray
    y: np.ndarray
    s: np.ndarray
    t: float
    residuals: dict[str, float]
    iterations: int


def solve_partition_lp(
    instance: ProblemInstance, cfg: SolverConfig | None = None
) -> PartitionLPSolution:
    """Maximize the support margin t over the self-dual feasibility system.

    The LP is

        max t  s.t.  A' y = 0,  A x + s = 0,  y + s >= t 1,
                     1'y + 1's = 1,  y >= 0, s >= 0, t >= 0

    which is always feasible (y = s = uniform, t = 0 works whenever the
    normalization row can be met) and bounded by 1/m.  Strict complementarity
    of the underlying homogeneous system makes the optimal t positive, with
    the supports of y and s splitting the rows exactly.

    Raises
    ------
    SolverStall
        If the interior-point iteration fails to reach its tolerances.
    """
    cfg = cfg or SolverConfig()
    m, n = instance.m, instance.n

    # The optimal (y, s, t) is invariant under uniform positive scaling of A
    # (x absorbs the factor), so solve in units of the largest row norm and
    # scale x back afterwards.
    row_scale = float(np.sqrt(np.sum(instance.A * instance.A, axis=1)).max())
    if row_scale <= 1e-300:
        row_scale = 1.0
    A = instance.A / row_scale

    # Variable layout: [x (n, free), y (m), s (m), t (1), w (m)] with
    # w = y + s - t 1 the coupling slack.
    nv = n + 3 * m + 1
    ne = n + 2 * m + 1
    it = n + 2 * m  # index of t

    E = np.zeros((ne, nv))
    f = np.zeros(ne)
    E[:n, n : n + m] = A.T
    E[n : n + m, :n] = A
    E[n : n + m, n + m : n + 2 * m] = np.eye(m)
    rows = np.arange(n + m, n + 2 * m)
    E[rows, n + np.arange(m)] = 1.0
    E[rows, n + m + np.arange(m)] = 1.0
    E[rows, it] = -1.0
    E[rows, it + 1 + np.arange(m)] = -1.0
    E[ne - 1, n : n + 2 * m] = 1.0
    f[ne - 1] = 1.0

    c = np.zeros(nv)
    c[it] = -1.0
    cone = np.ones(nv, dtype=bool)
    cone[:n] = False

    # Solve a notch tighter than advertised so the residual budget below
    # holds with margin even for matrices of unit scale.
    solve_cfg = SolverConfig(
        feas_tol=cfg.feas_tol / 10.0,
        opt_tol=cfg.opt_tol / 10.0,
        max_iters=cfg.max_iters,
        solver_id=cfg.solver_id,
    )
    program = StandardFormProgram(c=c, E=E, f=f, nonneg=cone)
    res = dispatch(program, solve_cfg)
    if not res.converged:
        raise SolverStall(
            f"partition LP did not converge ({res.status}, "
            f"{res.iterations} iterations)"
        )

    v = res.v
    x = v[:n] / row_scale
    y = v[n : n + m].copy()
    s = v[n + m : n + 2 * m].copy()
    t = float(v[it])

    A_orig = instance.A
    scale = relative_scale(instance.frobenius_scale)
    residuals = {
        "dual_eq_inf": float(np.abs(A_orig.T @ y).max(initial=0.0)),
        "primal_eq_inf": float(np.abs(A_orig @ x + s).max(initial=0.0)),
        "normalization": abs(float(y.sum() + s.sum()) - 1.0),
        "coupling_violation": max(0.0, t - float((y + s).min())),
        "nonneg_violation": max(0.0, -float(min(y.min(), s.min(), t))),
    }
    budget = cfg.feas_tol * scale
    worst = max(
        residuals["dual_eq_inf"],
        residuals["primal_eq_inf"],
        residuals["normalization"],
        residuals["nonneg_violation"],
    )
    if worst > budget:
        raise SolverStall(
            "partition LP residuals exceed the feasibility budget: "
            f"{residuals}"
        )
    return PartitionLPSolution(
        x=x, y=y, s=s, t=t, residuals=residuals, iterations=res.iterations
    )


@dataclass(frozen=True)
class MinNormSolution:
    """Feasible near-minimal-norm point of ``{z : G z >= 1}``.

    ``min_margin`` is the exact post-restoration value of ``min_i (G z)_i``
    (never below 1); ``dual_lower`` is a certified lower bound on the optimal
    squared norm, so ``norm**2 - dual_lower`` bounds the optimality gap.
    """

    z: np.ndarray
    norm: float
    min_margin: float
    dual_lower: float
    residuals: dict[str, float]
    iterations: int


def _restore_feasibility(G: np.ndarray, z: np.ndarray) -> np.ndarray | None:
    """Scale z so that min(G z) >= 1 holds exactly in floating point."""
    margin = float((G @ z).min())
    if not np.isfinite(margin) or margin <= 1e-150:
        return None
    z = z / margin
    for _ in range(100):
        viol = 1.0 - float((G @ z).min())
        if viol <= 0.0:
            return z
        # The bump must stay strictly above 1 after rounding; a bare
        # 1 + viol can tie back to 1 when viol is half an ulp.
        z = z * (1.0 + max(1.5 * viol, 1e-15))
    raise NumericalFailure("feasibility restoration failed to close the margin")


def solve_min_norm_qp(G: np.ndarray, cfg: SolverConfig | None = None) -> MinNormSolution:
    """Minimum-norm point of the polyhedron ``{z : G z >= 1}``.

    The interior-point solution is polished by solving the active-set
    equality system with a minimum-norm least-squares step, then rescaled so
    feasibility holds exactly.  Polishing makes the returned point a
    deterministic function of the active set, which keeps the result stable
    under row permutations and matrix rescalings.

    Raises
    ------
    InfeasibleQP
        If no feasible point is found (large primal residual at the cap).
    SolverStall
        If the iteration stalls while the problem still looks feasible.
    """
    cfg = cfg or SolverConfig()
    G = np.asarray(G, dtype=float)
    if G.ndim != 2:
        raise ValueError("G must be a matrix")
    k, d = G.shape
    if k == 0 or d == 0:
        raise InfeasibleQP("empty constraint system cannot reach margin 1")

    # Solve in units where the largest row has norm 1.  The solution maps
    # back by one scalar division, so the iteration (and in particular the
    # active-set identification below) behaves identically for G and alpha G.
    s = float(np.sqrt(np.sum(G * G, axis=1)).max())
    if s <= 1e-300:
        raise InfeasibleQP("a zero matrix cannot reach margin 1")
    Gw = G / s

    nv = d + k
    P = np.zeros((nv, nv))
    P[np.arange(d), np.arange(d)] = 2.0
    c = np.zeros(nv)
    E = np.concatenate([Gw, -np.eye(k)], axis=1)
    f = np.ones(k)
    cone = np.zeros(nv, dtype=bool)
    cone[d:] = True

    program = StandardFormProgram(c=c, E=E, f=f, nonneg=cone, quadratic=P)
    res = dispatch(program, cfg)

    z_raw = res.v[:d] / s
    restored = _restore_feasibility(G, z_raw)
    if restored is None:
        if res.residuals.get("primal_rel", np.inf) > _INFEAS_RESIDUAL:
            raise InfeasibleQP(
                "no point with G z >= 1 was found; the system looks infeasible"
            )
        raise SolverStall("minimum-norm QP stalled before reaching feasibility")
    if not res.converged:
        raise SolverStall(
            f"minimum-norm QP did not converge ({res.status}, "
            f"{res.iterations} iterations)"
        )
    z_best = restored

    # Polish: rows at margin define an equality system whose minimum-norm
    # solution is the exact optimum when the active set is identified.  The
    # detection runs in the normalized units so it is scale-free.
    margins = Gw @ res.v[:d] - 1.0
    act_tol = 1e-6 * (1.0 + float(np.abs(margins).max(initial=0.0)))
    active = margins <= act_tol
    if np.any(active):
        z_pol, *_ = np.linalg.lstsq(Gw[active], np.ones(int(active.sum())), rcond=None)
        z_pol = _restore_feasibility(G, z_pol / s)
        if z_pol is not None and euclidean_norm(z_pol) < euclidean_norm(z_best):
            z_best = z_pol

    lam = res.eq_multipliers
    if lam is not None:
        lam = np.asarray(lam, dtype=float) / s**2
    else:
        lam = np.zeros(k)
        if np.any(active):
            lam_act, *_ = np.linalg.lstsq(
                G[active].T, 2.0 * z_best, rcond=None
            )
            lam[active] = lam_act
    lam = np.maximum(lam, 0.0)
    dual_lower = float(lam.sum()) - 0.25 * float(np.sum((G.T @ lam) ** 2))

    norm = euclidean_norm(z_best)
    min_margin = float((G @ z_best).min())
    gap = norm**2 - dual_lower
    residuals = {
        "min_margin": min_margin,
        "optimality_gap": gap,
        "primal_rel": res.residuals.get("primal_rel", 0.0),
        "dual_rel": res.residuals.get("dual_rel", 0.0),
    }
    if gap > 50.0 * max(1, k) * cfg.opt_tol * (1.0 + norm**2):
        raise SolverStall(
            f"certified optimality gap {gap:.3e} is too large for the "
            "requested tolerance"
        )
    return MinNormSolution(
        z=z_best,
        norm=norm,
        min_margin=min_margin,
        dual_lower=dual_lower,
        residuals=residuals,
        iterations=res.iterations,
    )


@dataclass(frozen=True)
class AnalyticCenterSolution:
    """Analytic center of ``{y > 0 : A_B' y = 0, sum(y) = 1}``."""

    y: np.ndarray
    grad_norm: float
    residuals: dict[str, float]
    iterations: int


def solve_analytic_center(
    A_B: np.ndarray,
    cfg: SolverConfig | None = None,
    y_start: np.ndarray | None = None,
) -> AnalyticCenterSolution:
    """Log-barrier center of the dual slice attached to the tight rows.

    Parameters
    ----------
    A_B : ndarray of shape (p, n)
        Rows of A indexed by the tight set B.
    cfg : SolverConfig, optional
        Accuracy knobs; defaults are shared with the rest of the pipeline.
    y_start : ndarray of shape (p,), optional
        Strictly positive hint on the slice (projected onto it before use).
        Without a usable hint a small auxiliary LP locates one.

    Raises
    ------
    NoInteriorPoint
        If the slice has no strictly positive point.
    SolverStall
        If Newton fails to drive the reduced gradient below ``opt_tol``.
    """
    cfg = cfg or SolverConfig()
    A_B = np.asarray(A_B, dtype=float)
    p, n = A_B.shape
    if p == 0:
        raise ValueError("the tight set must be nonempty")

    # The slice {A_B' y = 0, sum(y) = 1} is invariant under uniform scaling
    # of A_B, so run the iteration in units of the largest row norm; the
    # center then comes out identical for A_B and alpha A_B.
    A_orig = A_B
    s = float(np.sqrt(np.sum(A_B * A_B, axis=1)).max())
    if s > 1e-300:
        A_B = A_B / s

    E = np.concatenate([A_B.T, np.ones((1, p))], axis=0)
    f = np.zeros(n + 1)
    f[-1] = 1.0
    program = StandardFormProgram(
        c=np.zeros(p),
        E=E,
        f=f,
        nonneg=np.ones(p, dtype=bool),
        log_barrier_weights=np.ones(p),
        v0=y_start,
    )
    res = dispatch(program, cfg)
    if res.status not in ("converged",):
        raise SolverStall(
            f"analytic center Newton did not converge ({res.status})"
        )

    y = np.asarray(res.v, dtype=float)
    if y.min(initial=np.inf) <= 0.0:
        raise NoInteriorPoint("analytic center iterate left the positive orthant")
    y = y / y.sum()
    residuals = {
        "eq_inf": float(np.abs(A_orig.T @ y).max(initial=0.0)),
        "normalization": abs(float(y.sum()) - 1.0),
        "min_component": float(y.min()),
        "grad_norm": float(res.residuals.get("grad_inf", np.nan)),
    }
    return AnalyticCenterSolution(
        y=y,
        grad_norm=residuals["grad_norm"],
        residuals=residuals,
        iterations=res.iterations,
    )


@dataclass(frozen=True)
class ProjectionResult:
    """Euclidean projection onto ``{x : A x <= 0}`` with audit residuals.

    ``distance`` is the primal value ||u - point||, an overestimate of the
    true distance whenever the point is inexact; ``distance_lower`` is a
    certified underestimate derived from a dual feasible multiplier, so the
    true distance always lies in [distance_lower, distance].
    """

    point: np.ndarray
    distance: float
    distance_lower: float
    feas_violation: float
    kkt_residual: float


def project_onto_cone(
    instance: ProblemInstance,
    u: np.ndarray,
    cfg: SolverConfig | None = None,
) -> ProjectionResult:
    """Project ``u`` onto the feasible cone of the instance.

    The input is normalized to unit length before the solve and the result
    rescaled afterwards; projection onto a cone commutes with positive
    scaling, and the normalization keeps the solver tolerances meaningful
    across input magnitudes.

    Raises
    ------
    SolverStall
        If the projection QP fails to reach its tolerances.
    """
    cfg = cfg or SolverConfig()
    u = np.asarray(u, dtype=float)
    if u.shape != (instance.n,):
        raise ValueError(f"u has shape {u.shape}, expected ({instance.n},)")
    unorm = euclidean_norm(u)
    if unorm <= 1e-300:
        return ProjectionResult(point=np.zeros(instance.n), distance=0.0,
                                distance_lower=0.0, feas_violation=0.0,
                                kkt_residual=0.0)

    n = instance.n
    u_hat = u / unorm

    # Positive row scalings leave the cone unchanged, so the constraints are
    # row-normalized for conditioning and identically zero rows are dropped.
    norms = np.sqrt(np.sum(instance.A * instance.A, axis=1))
    keep = norms > 1e-300
    if not np.any(keep):
        return ProjectionResult(point=u.copy(), distance=0.0,
                                distance_lower=0.0, feas_violation=0.0,
                                kkt_residual=0.0)
    Aw = instance.A[keep] / norms[keep, None]
    mk = Aw.shape[0]

    nv = n + mk
    P = np.zeros((nv, nv))
    P[np.arange(n), np.arange(n)] = 1.0
    c = np.zeros(nv)
    c[:n] = -u_hat
    E = np.concatenate([Aw, np.eye(mk)], axis=1)
    f = np.zeros(mk)
    cone = np.zeros(nv, dtype=bool)
    cone[n:] = True

    program = StandardFormProgram(c=c, E=E, f=f, nonneg=cone, quadratic=P)
    res = dispatch(program, cfg)
    if not res.converged:
        raise SolverStall(
            f"projection QP did not converge ({res.status}, "
            f"{res.iterations} iterations)"
        )
    x_hat = res.v[:n]
    if res.eq_multipliers is not None:
        mu = np.maximum(-np.asarray(res.eq_multipliers, dtype=float), 0.0)
    else:
        mu = np.zeros(mk)

    # Polish: u decomposes into its projection plus a nonnegative
    # combination of the active rows, so a nonnegative least-squares fit of
    # u against those rows recovers the projection and its multipliers to
    # rounding error; the fit is nonnegative by construction, which keeps
    # the dual distance certificate tight.
    slacks = -(Aw @ x_hat)
    active = slacks <= 1e-6
    if np.any(active):
        coef, _ = scipy.optimize.nnls(Aw[active].T, u_hat)
        x_pol = u_hat - Aw[active].T @ coef
        if (
            float((Aw @ x_pol).max(initial=0.0)) <= 1e-10
            and euclidean_norm(u_hat - x_pol) <= euclidean_norm(u_hat - x_hat)
        ):
            x_hat = x_pol
            mu = np.zeros(mk)
            mu[active] = coef

    # Any mu >= 0 certifies dist^2 >= 2 mu'(Aw u) - ||Aw' mu||^2.
    lb_sq = 2.0 * float(mu @ (Aw @ u_hat)) - float(np.sum((Aw.T @ mu) ** 2))
    dist_lower = float(np.sqrt(max(lb_sq, 0.0))) * unorm

    x = x_hat * unorm
    feas = max(0.0, float((instance.A @ x).max(initial=0.0)))
    return ProjectionResult(
        point=x,
        distance=euclidean_norm(u - x),
        distance_lower=min(dist_lower, euclidean_norm(u - x)),
        feas_violation=feas,
        kkt_residual=float(res.residuals.get("dual_rel", np.nan)),
    )
