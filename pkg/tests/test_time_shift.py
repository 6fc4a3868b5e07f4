import numpy as np
import pytest

from timeop.fock import BasisWindow, ModelParams
from timeop.time_shift import (
    check_commutator,
    check_isometry,
    check_power_consistency,
    check_shift_pattern,
    check_spectral_action,
    make_time_shift,
)
from timeop.fock import hamiltonian

from conftest import ket


def test_forward_two_on_five(params):
    out = make_time_shift(params, 2).forward @ ket(params.full_window, 5)
    assert out.support() == [3] and out.amplitude(3) == pytest.approx(1.0, abs=1e-14)


def test_forward_three_on_two_is_zero(params):
    out = make_time_shift(params, 3).forward @ ket(params.full_window, 2)
    assert np.max(np.abs(out.coeffs)) == 0.0


@pytest.mark.parametrize("n", [0, 5, 63])
def test_backward_unit_shift(params, n):
    ts = make_time_shift(params, 1)
    out = ts.backward @ ket(ts.backward.domain, n)
    assert out.support(atol=1e-14) == [n + 1]
    assert out.amplitude(n + 1) == pytest.approx(1.0, abs=1e-14)


def test_backward_is_exact_adjoint(params):
    ts = make_time_shift(params, 4)
    np.testing.assert_array_equal(ts.backward.matrix, ts.forward.matrix.T)


@pytest.mark.parametrize("m,n", [(1, 1), (2, 2)])
def test_spectral_action_reaches_ground_energy(params, m, n):
    ts = make_time_shift(params, m)
    out = hamiltonian(params, ts.forward.codomain) @ (ts.forward @ ket(params.full_window, n))
    assert out.amplitude(0) == pytest.approx(0.5, abs=1e-14)


def test_spectral_action_kernel(params):
    ts = make_time_shift(params, 4)
    out = hamiltonian(params, ts.forward.codomain) @ (ts.forward @ ket(params.full_window, 1))
    assert np.max(np.abs(out.coeffs)) == 0.0


@pytest.mark.parametrize("check", [check_shift_pattern, check_spectral_action,
                                   check_commutator, check_isometry])
@pytest.mark.parametrize("m", [1, 3, 8])
def test_checks_pass(params, check, m):
    rec = check(make_time_shift(params, m))
    assert rec.passed and rec.residual <= 1e-12


def test_commutator_m5_omega2_scaled_by_minus_ten():
    params = ModelParams(omega=2.0)
    ts = make_time_shift(params, 5)
    rec = check_commutator(ts)
    assert rec.residual <= 1e-12
    H = hamiltonian(params)
    lhs = hamiltonian(params, ts.forward.codomain) @ ts.forward - ts.forward @ H
    np.testing.assert_allclose(lhs.matrix, -10.0 * ts.forward.matrix, atol=1e-12)


def test_m_zero_rejected(params):
    with pytest.raises(ValueError):
        make_time_shift(params, 0)


def test_isometry_windows(params):
    ts = make_time_shift(params, 1)
    v = ts.forward @ (ts.backward @ ket(ts.backward.domain, 0))
    assert v.amplitude(0) == pytest.approx(1.0, abs=1e-14)
    ts2 = make_time_shift(params, 2)
    bf = ts2.backward @ ts2.forward
    assert np.max(np.abs((bf @ ket(params.full_window, 1)).coeffs)) == 0.0
    assert (bf @ ket(params.full_window, 2)).amplitude(2) == pytest.approx(1.0, abs=1e-14)


def test_power_consistency(params):
    for m in (1, 3):
        assert check_power_consistency(params, m).residual <= 1e-12
    ts1 = make_time_shift(params, 1).forward
    three = ts1 @ ts1 @ ts1
    direct = make_time_shift(params, 3).forward
    for op in (three, direct):
        assert (op @ ket(params.full_window, 7)).amplitude(4) == pytest.approx(1.0, abs=1e-13)
        assert np.max(np.abs((op @ ket(params.full_window, 2)).coeffs)) <= 1e-15


def test_large_truncation_is_finite():
    ts = make_time_shift(ModelParams(n_max=512), 8)
    assert np.all(np.isfinite(ts.forward.matrix))
    assert check_shift_pattern(ts).residual <= 1e-12


def test_isometry_record_names_both_windows(params):
    rec = check_isometry(make_time_shift(params, 2))
    assert str(BasisWindow(2, 64)) in rec.window
