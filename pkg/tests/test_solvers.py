"""Solver configuration, backend registry, and the four optimization programs."""

import numpy as np
import pytest

from hoffbound import (
    InfeasibleQP,
    NoInteriorPoint,
    ProblemInstance,
    SolverConfig,
    StandardFormProgram,
    available_solvers,
    dispatch,
    project_onto_cone,
    register_solver,
    solve_analytic_center,
    solve_min_norm_qp,
    solve_partition_lp,
)

from helpers import gaussian_matrix, instance


# --- configuration and registry -------------------------------------------

def test_config_defaults():
    cfg = SolverConfig()
    assert cfg.feas_tol == 1e-9
    assert cfg.opt_tol == 1e-8
    assert cfg.max_iters == 500
    assert cfg.solver_id == "builtin"


@pytest.mark.parametrize("kwargs", [
    {"feas_tol": -1.0},
    {"feas_tol": 0.0},
    {"feas_tol": 2.0},
    {"opt_tol": 0.0},
    {"max_iters": 0},
])
def test_config_rejects_bad_values(kwargs):
    with pytest.raises(ValueError):
        SolverConfig(**kwargs)


def test_config_tightened_divides_tolerances():
    cfg = SolverConfig().tightened(100.0)
    assert cfg.feas_tol == pytest.approx(1e-11, rel=1e-12)
    assert cfg.opt_tol == pytest.approx(1e-10, rel=1e-12)
    assert cfg.max_iters == 500
    assert cfg.solver_id == "builtin"


def test_builtin_backend_is_registered():
    assert "builtin" in available_solvers()


def test_unknown_solver_id_raises():
    prog = StandardFormProgram(c=np.zeros(1), E=np.zeros((0, 1)), f=np.zeros(0),
                               nonneg=np.array([0]))
    with pytest.raises(KeyError):
        dispatch(prog, SolverConfig(solver_id="no-such-backend"))


def test_registering_a_wrapper_backend_routes_calls():
    calls = []

    def wrapper(program, cfg):
        calls.append(program.num_vars)
        inner = SolverConfig(feas_tol=cfg.feas_tol, opt_tol=cfg.opt_tol,
                             max_iters=cfg.max_iters, solver_id="builtin")
        return dispatch(program, inner)

    register_solver("test-wrapper", wrapper)
    assert "test-wrapper" in available_solvers()
    sol = solve_min_norm_qp(np.array([[3.0, 4.0]]),
                            SolverConfig(solver_id="test-wrapper"))
    assert calls, "wrapper backend was never invoked"
    assert sol.norm == pytest.approx(0.2, abs=1e-9)


# --- standard-form dispatch ------------------------------------------------

def test_lp_with_inequality_rows():
    # max x subject to x <= 1, x >= 0
    prog = StandardFormProgram(c=np.array([-1.0]), E=np.zeros((0, 1)), f=np.zeros(0),
                               nonneg=np.array([0]),
                               G=np.array([[-1.0]]), h=np.array([-1.0]))
    res = dispatch(prog, SolverConfig())
    assert res.converged
    assert res.v[0] == pytest.approx(1.0, abs=1e-8)
    assert res.ineq_multipliers is not None
    assert res.ineq_multipliers[0] == pytest.approx(1.0, abs=1e-6)


def test_bound_constrained_qp():
    # min 0.5 ||v||^2 - v_0 + 0.5 v_1 over v >= 0: optimum at e_0, with a
    # strictly positive multiplier on the inactive coordinate
    prog = StandardFormProgram(c=np.array([-1.0, 0.5]), E=np.zeros((0, 2)),
                               f=np.zeros(0), nonneg=np.array([0, 1]),
                               quadratic=np.eye(2))
    res = dispatch(prog, SolverConfig())
    assert res.converged
    assert np.allclose(res.v, [1.0, 0.0], atol=1e-6)


def test_barrier_program_runs_damped_newton():
    # analytic center of the probability simplex in R^2 is (1/2, 1/2)
    prog = StandardFormProgram(c=np.zeros(2), E=np.ones((1, 2)), f=np.ones(1),
                               nonneg=np.array([0, 1]),
                               log_barrier_weights=np.ones(2))
    res = dispatch(prog, SolverConfig())
    assert res.converged
    assert np.allclose(res.v, [0.5, 0.5], atol=1e-9)


def test_barrier_plus_quadratic_is_rejected():
    prog = StandardFormProgram(c=np.zeros(2), E=np.ones((1, 2)), f=np.ones(1),
                               nonneg=np.array([0, 1]),
                               quadratic=np.eye(2),
                               log_barrier_weights=np.ones(2))
    with pytest.raises(ValueError):
        dispatch(prog, SolverConfig())


# --- minimum-norm margin QP -------------------------------------------------

def test_min_norm_qp_single_row():
    # min ||z|| s.t. 3 z_0 + 4 z_1 >= 1 has solution (0.12, 0.16), norm 0.2
    sol = solve_min_norm_qp(np.array([[3.0, 4.0]]))
    assert np.allclose(sol.z, [0.12, 0.16], atol=1e-9)
    assert sol.norm == pytest.approx(0.2, abs=1e-9)
    assert sol.min_margin >= -1e-9


def test_min_norm_qp_identity_rows():
    sol = solve_min_norm_qp(np.eye(5))
    assert sol.norm == pytest.approx(np.sqrt(5.0), rel=1e-9)
    assert np.allclose(sol.z, np.ones(5), atol=1e-7)


def test_min_norm_qp_dual_gap_is_small():
    sol = solve_min_norm_qp(np.array([[3.0, 4.0], [1.0, -1.0], [0.5, 2.0]]))
    # dual_lower bounds the optimal squared norm from below
    assert sol.dual_lower <= sol.norm ** 2 * (1 + 1e-9) + 1e-12
    assert sol.norm ** 2 - sol.dual_lower <= 1e-6 * (1 + sol.norm ** 2)


def test_min_norm_qp_scale_invariance():
    G = np.array([[3.0, 4.0], [1.0, -2.0]])
    a = solve_min_norm_qp(G)
    b = solve_min_norm_qp(1000.0 * G)
    assert b.norm * 1000.0 == pytest.approx(a.norm, rel=1e-12)


def test_min_norm_qp_feasible_margins():
    rng = np.random.default_rng(5)
    G = rng.standard_normal((4, 6))
    sol = solve_min_norm_qp(G)
    assert np.min(G @ sol.z) >= 1.0 - 1e-9


def test_min_norm_qp_infeasible_inputs():
    with pytest.raises(InfeasibleQP):
        solve_min_norm_qp(np.array([[1.0], [-1.0]]))  # z >= 1 and -z >= 1
    with pytest.raises(InfeasibleQP):
        solve_min_norm_qp(np.zeros((2, 2)))
    with pytest.raises(InfeasibleQP):
        solve_min_norm_qp(np.zeros((0, 3)))


# --- analytic center ---------------------------------------------------------

def test_analytic_center_opposing_rows():
    sol = solve_analytic_center(np.array([[1.0], [-1.0]]))
    assert np.allclose(sol.y, [0.5, 0.5], atol=1e-10)
    assert sol.y.sum() == pytest.approx(1.0, abs=1e-12)


def test_analytic_center_with_free_row():
    # slice {y : y_0 = y_1, sum y = 1} has center (1/3, 1/3, 1/3)
    sol = solve_analytic_center(np.array([[1.0], [-1.0], [0.0]]))
    assert np.allclose(sol.y, np.ones(3) / 3.0, atol=1e-10)
    assert sol.grad_norm <= 1e-8


def test_analytic_center_scale_invariance():
    A = np.array([[2.0, 1.0], [-2.0, -1.0], [1.0, -1.0], [-1.0, 1.0]])
    a = solve_analytic_center(A)
    b = solve_analytic_center(700.0 * A)
    assert np.allclose(a.y, np.full(4, 0.25), atol=1e-9)
    assert np.allclose(a.y, b.y, atol=1e-11)


def test_analytic_center_requires_rows():
    with pytest.raises(ValueError):
        solve_analytic_center(np.zeros((0, 2)))


def test_analytic_center_empty_slice():
    # y_0 + y_1 = 0 with y > 0 and sum y = 1 has no interior point
    with pytest.raises(NoInteriorPoint):
        solve_analytic_center(np.array([[1.0], [1.0]]))


# --- cone projection ----------------------------------------------------------

def test_projection_onto_nonpositive_quadrant():
    inst = instance(np.eye(2))  # P = {x <= 0}
    res = project_onto_cone(inst, np.array([1.0, 1.0]))
    assert np.allclose(res.point, 0.0, atol=1e-8)
    assert res.distance == pytest.approx(np.sqrt(2.0), rel=1e-9)
    assert res.distance_lower <= res.distance
    assert res.distance_lower == pytest.approx(np.sqrt(2.0), rel=1e-9)


def test_projection_partial_clip():
    inst = instance(np.eye(2))
    res = project_onto_cone(inst, np.array([-1.0, 2.0]))
    assert np.allclose(res.point, [-1.0, 0.0], atol=1e-8)
    assert res.distance == pytest.approx(2.0, rel=1e-9)


def test_projection_of_interior_point_is_identity():
    inst = instance(np.eye(2))
    res = project_onto_cone(inst, np.array([-1.0, -2.0]))
    # the primal point is only solver-accurate, but the certified lower
    # bound recognizes an interior point exactly
    assert res.distance <= 1e-6
    assert res.distance_lower == 0.0
    assert np.allclose(res.point, [-1.0, -2.0], atol=1e-6)


def test_projection_of_origin():
    inst = instance(np.eye(2))
    res = project_onto_cone(inst, np.zeros(2))
    assert res.distance == 0.0
    assert np.allclose(res.point, 0.0)


def test_projection_feasibility_and_lower_bound():
    rng = np.random.default_rng(17)
    for _ in range(5):
        A = rng.standard_normal((6, 4))
        inst = instance(A)
        u = rng.standard_normal(4) * 3.0
        res = project_onto_cone(inst, u)
        assert res.feas_violation <= 1e-8 * inst.scale
        assert res.distance_lower <= res.distance + 1e-12


# --- partition linear program ---------------------------------------------------

@pytest.mark.parametrize("A, t_star", [
    (np.array([[-1.0]]), 1.0),
    (np.array([[1.0], [-1.0]]), 0.5),
    (-np.eye(5), 0.2),
    (np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, -1.0]]), 1.0 / 3.0),
])
def test_partition_lp_optimal_values(A, t_star):
    sol = solve_partition_lp(instance(A))
    assert sol.t == pytest.approx(t_star, abs=1e-6)


def test_partition_lp_residuals_and_cap():
    for seed in range(10):
        inst = instance(gaussian_matrix(100 + seed))
        sol = solve_partition_lp(inst)
        assert sol.t <= 1.0 / inst.m + 1e-9
        assert sol.t > 0.0
        for key in ("dual_eq_inf", "primal_eq_inf", "normalization",
                    "coupling_violation", "nonneg_violation"):
            assert sol.residuals[key] <= 1e-7 * inst.scale
