import numpy as np
import pytest

from timeop.fock import BasisWindow, ModelParams, WindowedOperator, make_lowering
from timeop.index import RANK_TOLS, check_index, check_polar, compute_index, polar_factors, restrict_to_subspace
from timeop.time_shift import make_time_shift

from conftest import ket


def test_lowering_index_full_window(params):
    res = compute_index(make_lowering(params, 2))
    assert (res.dim_ker, res.dim_coker, res.index) == (2, 0, 2)


def test_lowering_index_on_fm(params):
    assert compute_index(restrict_to_subspace(make_lowering(params, 2), 2)).index == 0


def test_zero_operator_square():
    w = BasisWindow(0, 4)
    res = compute_index(WindowedOperator.zeros(w, w))
    assert (res.dim_ker, res.dim_coker, res.index, res.rank) == (5, 5, 0, 0)


@pytest.mark.parametrize("tol", RANK_TOLS)
@pytest.mark.parametrize("m", range(1, 9))
def test_index_stable_across_tolerances(params, m, tol):
    low = make_lowering(params, m)
    assert compute_index(low, tol).index == m
    assert compute_index(restrict_to_subspace(low, m), tol).index == 0


def test_rank_tolerance_bounds(params):
    with pytest.raises(ValueError):
        compute_index(make_lowering(params, 1), 0.0)
    with pytest.raises(ValueError):
        compute_index(make_lowering(params, 1), 1e-2)


def test_check_index_records(params):
    rec = check_index(params, 3)
    assert rec.passed and rec.residual == 0.0 and rec.tolerance == 0.0


def test_polar_m1_entries(params):
    f = polar_factors(params, 1)
    np.testing.assert_allclose(np.diag(f.W.matrix)[:5], np.sqrt(np.arange(1, 6)), rtol=1e-14)
    out = (f.W @ f.U) @ ket(params.full_window, 4)
    assert out.amplitude(3) == pytest.approx(2.0, rel=1e-14)


def test_polar_m2_products(params):
    U = make_time_shift(params, 2).forward
    Ur = restrict_to_subspace(U, 2)
    np.testing.assert_allclose((Ur @ Ur.adjoint()).matrix, np.eye(Ur.codomain.size), atol=1e-12)
    np.testing.assert_allclose((Ur.adjoint() @ Ur).matrix, np.eye(Ur.domain.size), atol=1e-12)
    np.testing.assert_allclose((U @ U.adjoint()).matrix, np.eye(U.codomain.size), atol=1e-12)
    deficiency = np.eye(U.domain.size) - (U.adjoint() @ U).matrix
    assert np.trace(deficiency) == pytest.approx(2.0, abs=1e-12)


@pytest.mark.parametrize("m", range(1, 9))
def test_check_polar(params, m):
    rec = check_polar(params, m)
    assert rec.passed and rec.residual <= 1e-12
    assert rec.extra == {"index_full": m, "index_restricted": 0}


def test_polar_rebuild_relative_at_large_truncation():
    rec = check_polar(ModelParams(n_max=256), 4)
    assert rec.passed
