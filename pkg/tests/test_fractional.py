import math

import numpy as np
import pytest
import sympy as sp

from timeop.errors import OracleError, WindowError
from timeop.fock import BasisWindow, ModelParams, hamiltonian, number_op
from timeop.fractional import (
    DEFAULT_LAMBDA_GRID,
    GradedBasis,
    QuadratureOracle,
    check_closed_form_vs_oracle,
    check_frac_commutator,
    check_frac_index,
    check_frac_isometry,
    check_frac_ladder,
    check_frac_shift_action,
    check_noncommutation_facts,
    check_virtual_vacuum,
    closed_form_derivative,
    frac_lower,
    frac_raise,
    make_frac_shift,
    oracle_errors,
    oracle_fractional_derivative,
    raise_shift,
    virtual_vacuum,
)

from conftest import ket

LAMBDAS = (0.1, 0.25, 0.5, 0.75, 0.9)


class TestGradedBasis:
    def test_sectors_orthogonal(self):
        g = GradedBasis(6, 0.3)
        assert not np.any(g.gram(-1, 0)) and not np.any(g.gram(0, 1))
        np.testing.assert_array_equal(g.gram(1, 1), np.eye(7))

    def test_only_three_sectors(self):
        with pytest.raises(WindowError):
            GradedBasis(6, 0.3).sector(2)


class TestLadder:
    def test_lower_half_on_vacuum(self, params):
        out = frac_lower(params, 0.5) @ ket(params.full_window, 0)
        assert out.window.offset == -0.5
        assert out.amplitude(0) == pytest.approx(0.7511255444649425, rel=1e-14)

    def test_lower_limits(self, params):
        near0 = virtual_vacuum(params, 1e-9).norm()
        near1 = virtual_vacuum(params, 1 - 1e-9).norm()
        assert near0 == pytest.approx(1.0, abs=1e-8)
        assert near1 < 1e-4

    def test_raise_half_on_vacuum(self, params):
        out = frac_raise(params, 0.5) @ ket(params.full_window, 0)
        assert out.window.offset == 0.5
        assert out.amplitude(0) == pytest.approx(0.9413962637767148, rel=1e-14)

    def test_raise_on_two_has_number_eigenvalue(self, params):
        out = frac_raise(params, 0.3) @ ket(params.full_window, 2)
        assert out.amplitude(2) == pytest.approx(math.sqrt(math.gamma(3.3) / math.gamma(3)), rel=1e-13)
        eig = number_op(params, out.window) @ out
        assert eig.amplitude(2) == pytest.approx(2.3 * out.amplitude(2), rel=1e-14)

    def test_adjoint_pairing(self, params):
        for lam in LAMBDAS:
            np.testing.assert_allclose(frac_raise(params, lam, -lam).matrix,
                                       frac_lower(params, lam).matrix.T, rtol=1e-14)
            assert check_frac_ladder(params, lam).passed

    def test_raise_after_lower_is_gamma_ratio(self, params):
        prod = frac_raise(params, 0.5, -0.5) @ frac_lower(params, 0.5)
        n = np.arange(5)
        expected = [math.gamma(k + 1) / math.gamma(k + 0.5) for k in n]
        np.testing.assert_allclose(np.diag(prod.matrix)[:5], expected, rtol=1e-13)

    def test_sector_preconditions(self, params):
        with pytest.raises(WindowError):
            frac_lower(params, 0.5, -0.5)
        with pytest.raises(WindowError):
            frac_raise(params, 0.5, 0.5)
        with pytest.raises(ValueError):
            frac_lower(params, 1.0)


class TestShift:
    def test_m1_half_on_three(self, params):
        out = make_frac_shift(params, 1, 0.5).forward @ ket(params.full_window, 3)
        assert out.window.offset == -0.5
        assert out.support(atol=1e-14) == [2]  # |1.5> sits at n = 2 of the -0.5 sector
        assert out.amplitude(2) == pytest.approx(1.0, abs=1e-14)

    def test_m2_kills_one(self, params):
        out = make_frac_shift(params, 2, 0.5).forward @ ket(params.full_window, 1)
        assert np.max(np.abs(out.coeffs)) == 0.0

    def test_virtual_vacuum_image(self, params):
        out = make_frac_shift(params, 0, 0.4).forward @ ket(params.full_window, 0)
        assert out.window.offset == -0.4 and out.amplitude(0) == pytest.approx(1.0, abs=1e-14)

    @pytest.mark.parametrize("lam", LAMBDAS)
    @pytest.mark.parametrize("m", range(0, 5))
    def test_checks_pass(self, params, m, lam):
        fs = make_frac_shift(params, m, lam)
        for check in (check_frac_shift_action, check_frac_commutator, check_frac_isometry):
            rec = check(fs)
            assert rec.passed and rec.residual <= 1e-12

    def test_commutator_m2_quarter_omega2(self):
        params = ModelParams(omega=2.0)
        fs = make_frac_shift(params, 2, 0.25)
        F = fs.forward
        lhs = hamiltonian(params, F.codomain) @ F - F @ hamiltonian(params)
        np.testing.assert_allclose(lhs.matrix, -4.5 * F.matrix, atol=1e-12)

    def test_small_lambda_approaches_integer_case(self, params):
        fs = make_frac_shift(params, 2, 1e-9)
        F = fs.forward
        lhs = hamiltonian(params, F.codomain) @ F - F @ hamiltonian(params)
        np.testing.assert_allclose(lhs.matrix, -2.0 * F.matrix, atol=1e-8)

    def test_isometry_kernel_excluded(self, params):
        fs = make_frac_shift(params, 2, 0.7)
        bf = fs.backward @ fs.forward
        assert np.max(np.abs((bf @ ket(params.full_window, 1)).coeffs)) == 0.0
        sub = BasisWindow(2, params.n_max)
        np.testing.assert_allclose(bf.restrict(sub, sub).matrix, np.eye(sub.size), atol=1e-12)

    def test_m0_isometry_both_ways(self, params):
        fs = make_frac_shift(params, 0, 0.3)
        np.testing.assert_allclose((fs.backward @ fs.forward).matrix, np.eye(65), atol=1e-12)
        np.testing.assert_allclose((fs.forward @ fs.backward).matrix, np.eye(65), atol=1e-12)

    def test_backward_equals_raise_shift_from_lower_sector(self, params):
        fs = make_frac_shift(params, 3, 0.25)
        np.testing.assert_allclose(raise_shift(params, 3, 0.25, -0.25).matrix,
                                   fs.backward.matrix, atol=1e-14)

    def test_index_zero(self, params):
        for lam in LAMBDAS:
            assert check_frac_index(params, lam).residual == 0.0


@pytest.mark.parametrize("n", range(0, 5))
def test_forward_coefficients_telescope_symbolically(n):
    lam = sp.Symbol("lambda", positive=True)
    for m in range(0, n + 1):
        # squared coefficients; every factor is positive
        lower_m = sp.factorial(n) / sp.factorial(n - m)
        lower_lam = sp.gamma(n - m + 1) / sp.gamma(n - m - lam + 1)
        nu = n - m - lam
        diag = sp.gamma(nu + 1) / sp.gamma(nu + m + lam + 1)
        assert sp.simplify(sp.gammasimp(lower_m * lower_lam * diag)) == 1


class TestVirtualVacuum:
    def test_half(self, params):
        assert virtual_vacuum(params, 0.5).norm() == pytest.approx(math.pi ** -0.25, rel=1e-14)
        assert round(math.pi ** -0.25, 5) == 0.75113

    def test_monotone_trend(self, params):
        norms = [virtual_vacuum(params, lam).norm() for lam in DEFAULT_LAMBDA_GRID]
        assert all(a > b for a, b in zip(norms, norms[1:]))
        assert norms[0] < 1.0 and norms[-1] > 0.0

    def test_records(self, params):
        for lam in DEFAULT_LAMBDA_GRID:
            assert check_virtual_vacuum(params, lam).residual <= 1e-12


class TestOracle:
    oracle = QuadratureOracle()

    def test_n0_half(self):
        val = oracle_fractional_derivative(self.oracle, 0, 0.5, 1.0)
        assert val == pytest.approx(0.5641895835477563, rel=1e-6)
        assert closed_form_derivative(0, 0.5, 1.0) == pytest.approx(1 / math.sqrt(math.pi), rel=1e-14)

    def test_n1_half(self):
        val = oracle_fractional_derivative(self.oracle, 1, 0.5, 1.0)
        assert val == pytest.approx(2 / math.sqrt(math.pi), rel=1e-6)

    def test_n3_quarter(self):
        z = 0.7
        exact = math.gamma(4) / math.gamma(3.75) * z ** 2.75
        assert oracle_fractional_derivative(self.oracle, 3, 0.25, z) == pytest.approx(exact, rel=1e-6)

    def test_small_lambda_continuation(self):
        assert closed_form_derivative(3, 1e-10, 1.3) == pytest.approx(1.3 ** 3, rel=1e-8)

    def test_preconditions(self):
        with pytest.raises(ValueError):
            oracle_fractional_derivative(self.oracle, 0, 0.5, 0.0)
        with pytest.raises(ValueError):
            oracle_fractional_derivative(self.oracle, 13, 0.5, 1.0)
        with pytest.raises(ValueError):
            oracle_fractional_derivative(self.oracle, 0, 0.99, 1.0)
        with pytest.raises(ValueError):
            QuadratureOracle(panels=32)
        with pytest.raises(ValueError):
            QuadratureOracle(fd_step=1e-3)

    def test_unconverged_quadrature_raises(self):
        with pytest.raises(OracleError):
            oracle_fractional_derivative(QuadratureOracle(panels=64), 12, 0.05, 1.0, tol_quad=1e-6)

    def test_full_grid_and_doubling(self, params):
        errs = oracle_errors(self.oracle)
        errs2 = oracle_errors(self.oracle.doubled())
        assert max(errs.values()) <= 1e-6
        assert max(errs2.values()) <= max(errs.values())
        assert check_closed_form_vs_oracle(params, self.oracle).passed


class TestNoncommutation:
    def test_diagonals_half(self, params):
        ratio = np.diag((frac_raise(params, 0.5, -0.5) @ frac_lower(params, 0.5)).matrix)
        assert 1.0 ** 0.5 == 1.0
        assert ratio[1] == pytest.approx(1.1283791670955126, rel=1e-14)
        assert ratio[0] == pytest.approx(0.5641895835477563, rel=1e-14)

    def test_orders_agree_for_n_at_least_m(self, params):
        from timeop.fock import make_lowering
        from timeop.fractional import sector_lowering

        image = BasisWindow(0, params.n_max - 1)
        first = frac_lower(params, 0.5, 0.0, image) @ make_lowering(params, 1)
        second = sector_lowering(params, 1, -0.5) @ frac_lower(params, 0.5)
        v1, v2 = first.column(3), second.column(3)
        np.testing.assert_allclose(v1.embed(v2.window).coeffs, v2.coeffs, rtol=1e-14)

    def test_record(self, params):
        for lam in LAMBDAS:
            rec = check_noncommutation_facts(params, lam)
            assert rec.passed
            assert rec.extra["disagree"] == "1:0;2:0,1;3:0,1,2;4:0,1,2,3"
