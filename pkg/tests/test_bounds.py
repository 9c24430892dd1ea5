"""Component bounds and the combined upper-bound report."""

import numpy as np
import pytest

from hoffbound import (
    NumericalFailure,
    bound_case_b,
    bound_case_n,
    bound_h0,
    bound_stitch,
)

from helpers import gaussian_matrix, instance

SQRT5 = 2.23606797749979
TWO_SQRT2 = 2.8284271247461903
SIX_SQRT2 = 8.485281374238571
C4 = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, -1.0]])


# --- slack-block bound ---------------------------------------------------

def test_case_n_identity_block():
    res = bound_case_n(-np.eye(5))
    assert res.value == pytest.approx(SQRT5, rel=1e-9)
    assert res.min_margin >= 1.0 - 1e-9
    assert res.value == pytest.approx(np.linalg.norm(res.x_bar), rel=1e-12)


def test_case_n_witness_margins_on_random_block():
    rng = np.random.default_rng(21)
    A_N = -np.abs(rng.standard_normal((6, 4))) - 0.5
    res = bound_case_n(A_N)
    assert np.min(A_N @ res.x_bar) >= 1.0 - 1e-9
    assert res.value == pytest.approx(np.linalg.norm(res.x_bar), rel=1e-12)


def test_case_n_scale_invariance():
    A_N = -np.abs(np.random.default_rng(22).standard_normal((5, 3))) - 0.25
    a = bound_case_n(A_N)
    b = bound_case_n(50.0 * A_N)
    assert b.value * 50.0 == pytest.approx(a.value, rel=1e-9)


# --- tight-block bound ----------------------------------------------------

def test_case_b_opposing_rows():
    res = bound_case_b(np.array([[1.0], [-1.0]]))
    assert res.value == pytest.approx(TWO_SQRT2, rel=1e-9)
    assert res.sigma == pytest.approx(np.sqrt(0.5), rel=1e-9)
    assert np.allclose(res.y_bar, [0.5, 0.5], atol=1e-9)


def test_case_b_zero_block_contributes_nothing():
    res = bound_case_b(np.array([[0.0], [0.0]]))
    assert res.value == 0.0
    assert res.sigma is None
    assert np.allclose(res.y_bar, 0.5)


def test_case_b_warm_start_agrees_with_cold():
    A_B = np.array([[1.0, 2.0], [-1.0, -2.0], [2.0, -1.0], [-2.0, 1.0]])
    cold = bound_case_b(A_B)
    warm = bound_case_b(A_B, y_start=np.full(4, 0.25))
    assert warm.value == pytest.approx(cold.value, rel=1e-9)


# --- stitching bound --------------------------------------------------------

def test_stitch_known_instance():
    res = bound_stitch(C4[:2], C4[2:])
    assert res.value == pytest.approx(3.0, rel=1e-9)
    assert np.allclose(np.abs(res.Q.ravel()), [0.0, 1.0], atol=1e-12)
    assert res.min_margin >= 1.0 - 1e-9
    assert res.value == pytest.approx(1.0 + 2.0 * np.linalg.norm(res.z_bar), rel=1e-12)


def test_stitch_margins_in_reduced_coordinates():
    rng = np.random.default_rng(33)
    A_B = np.vstack([rng.standard_normal(4), -rng.standard_normal(4)])
    A_B[1] = -A_B[0]
    A_N = -np.abs(rng.standard_normal((3, 4))) - 0.3
    res = bound_stitch(A_B, A_N)
    norms = np.linalg.norm(A_N, axis=1)
    margins = (A_N / norms[:, None]) @ (res.Q @ res.z_bar)
    assert np.min(margins) >= 1.0 - 1e-9


# --- combined report ----------------------------------------------------------

def test_zero_branch():
    rep = bound_h0(instance(np.zeros((3, 2))))
    assert rep.branch == "zero"
    assert rep.total == 0.0
    assert rep.partition is None
    assert rep.case_n is None and rep.case_b is None and rep.stitch is None


def test_case_n_branch():
    rep = bound_h0(instance(-np.eye(5)))
    assert rep.branch == "case_N"
    assert rep.total == pytest.approx(SQRT5, rel=1e-9)
    assert rep.case_b is None and rep.stitch is None
    assert rep.total == rep.case_n.value


def test_case_b_branch():
    rep = bound_h0(instance(np.array([[1.0], [-1.0]])))
    assert rep.branch == "case_B"
    assert rep.total == pytest.approx(TWO_SQRT2, rel=1e-9)
    assert rep.case_n is None and rep.stitch is None
    assert rep.total == rep.case_b.value


def test_general_branch_component_values():
    rep = bound_h0(instance(C4))
    assert rep.branch == "general"
    assert rep.case_n.value == pytest.approx(1.0, rel=1e-9)
    assert rep.case_b.value == pytest.approx(TWO_SQRT2, rel=1e-9)
    assert rep.stitch.value == pytest.approx(3.0, rel=1e-9)
    assert rep.total == pytest.approx(SIX_SQRT2, rel=1e-9)
    # the combination is literal arithmetic on the stored components
    assert rep.total == rep.stitch.value * max(rep.case_n.value, rep.case_b.value)
    assert rep.recomputed_total() == rep.total


def test_report_diagnostics_carry_run_parameters():
    rep = bound_h0(instance(C4))
    diag = rep.diagnostics
    assert diag["m"] == 3 and diag["n"] == 2
    assert diag["solver_id"] == "builtin"
    assert set(diag["timings"]) >= {"partition_s", "total_s"}


def test_random_instances_take_consistent_branches():
    for seed in range(10):
        inst = instance(gaussian_matrix(300 + seed))
        rep = bound_h0(inst)
        assert rep.branch in {"zero", "case_N", "case_B", "general"}
        assert rep.total >= 0.0
        assert rep.recomputed_total() == rep.total
        if rep.branch == "general":
            assert rep.partition is not None
            assert rep.case_n is not None and rep.case_b is not None
            assert rep.stitch is not None
