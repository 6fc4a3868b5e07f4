import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from timeop.errors import TruncationError
from timeop.fock import BasisWindow, ModelParams, hamiltonian
from timeop.virasoro import (
    bracket,
    central_residuals,
    check_central_charge,
    check_highest_weight,
    check_jacobi,
    check_witt_bracket,
    estimate_central_charge,
    interior_window,
    make_fractional_generator,
    make_generator,
)

from conftest import ket


def test_m0_is_hamiltonian(params):
    M0 = make_generator(params, 0).op
    for n in (0, 5, 64):
        assert (M0 @ ket(params.full_window, n)).amplitude(n) == params.energy(n)
    np.testing.assert_array_equal(M0.matrix, hamiltonian(params).matrix)


def test_m1_on_one(params):
    out = make_generator(params, 1).op @ ket(params.full_window, 1)
    assert out.support(atol=1e-15) == [0]
    assert out.amplitude(0) == pytest.approx(1.0, abs=1e-14)


def test_m2_kills_one(params):
    out = make_generator(params, 2).op @ ket(params.full_window, 1)
    assert np.max(np.abs(out.coeffs)) == 0.0


def test_negative_index_is_adjoint(params):
    np.testing.assert_array_equal(make_generator(params, -3).op.matrix,
                                  make_generator(params, 3).op.matrix.T)


def test_generator_beyond_half_truncation_rejected():
    with pytest.raises(TruncationError):
        make_generator(ModelParams(n_max=8), 5)


def test_bracket_one_two(params):
    rec = check_witt_bracket(params, 1, 2)
    assert rec.passed and rec.residual <= 1e-10
    lhs = bracket(params, 1, 2) @ ket(params.full_window, 10)
    rhs = make_generator(params, 3).op @ ket(params.full_window, 10)
    assert lhs.amplitude(7) == pytest.approx(-rhs.amplitude(7), rel=1e-12)


def test_bracket_with_itself_is_zero(params):
    rec = check_witt_bracket(params, 3, 3)
    assert rec.raw_residual == 0.0 and rec.passed


def test_mixed_sign_bracket_gives_4_omega_m0(params):
    rec = check_witt_bracket(params, 2, -2)
    assert rec.passed and rec.residual <= params.tol_exact
    assert "[4,60]" == rec.window


def test_mixed_sign_bracket_fails_without_interior_window(params):
    full = bracket(params, 2, -2)
    ref = 4 * params.omega * hamiltonian(params)
    diff = full.matrix - ref.restrict(full.domain, full.codomain).matrix
    assert np.max(np.abs(diff)) == pytest.approx(0.25)


def test_interior_window_rule(params):
    assert interior_window(params, 1, 2, 3) == BasisWindow(0, 58)
    assert interior_window(params, 2, -1, 1) == BasisWindow(4, 60)
    with pytest.raises(TruncationError):
        interior_window(ModelParams(n_max=8), 3, 3, -3)


@pytest.mark.parametrize("m", range(1, 6))
@pytest.mark.parametrize("n", range(1, 6))
def test_all_positive_brackets(params, m, n):
    assert check_witt_bracket(params, m, n).residual <= 1e-10


@settings(max_examples=25, deadline=None)
@given(m=st.integers(-4, 4), n=st.integers(-4, 4))
def test_bracket_antisymmetry(m, n):
    params = ModelParams(n_max=32)
    a, b = bracket(params, m, n), bracket(params, n, m)
    assert (a.domain, a.codomain) == (b.domain, b.codomain)
    np.testing.assert_allclose(a.matrix, -b.matrix, atol=1e-9)


def test_jacobi(params):
    for triple in [(1, 2, -1), (2, 2, 1), (-1, -1, 2)]:
        assert check_jacobi(params, *triple).passed


def test_central_charge_zero(params):
    assert abs(estimate_central_charge(params, 4)) <= 1e-8
    for m, (_, worst) in central_residuals(params, 4).items():
        if m >= 2:
            assert worst <= 1e-10
    assert check_central_charge(params, 4).passed


def test_central_charge_needs_two_modes(params):
    with pytest.raises(ValueError):
        estimate_central_charge(params, 1)


def test_highest_weight_integer(params):
    rec = check_highest_weight(params, 6)
    assert rec.passed and rec.residual == 0.0
    vac = ket(params.full_window, 0)
    for m in range(1, 7):
        assert np.max(np.abs((make_generator(params, m).op @ vac).coeffs)) == 0.0
    assert (make_generator(params, 0).op @ vac).amplitude(0) == 0.5


def test_highest_weight_boundary_is_nonzero(params):
    out = make_fractional_generator(params, 0, 0.4).op @ ket(params.full_window, 0)
    # (E_0 + E_{-0.4}) / 2 with unit shift coefficient
    assert out.amplitude(0) == pytest.approx(0.3, abs=1e-14)
    assert out.window.offset == -0.4
    rec = check_highest_weight(params, 6, 0.4)
    assert rec.passed and rec.extra["boundary_nonzero"]
