"""Fractional ladder operators on a graded basis of virtual states.

The enlarged space is modelled by three sectors with occupations ``n - lam``,
``n`` and ``n + lam`` (``n = 0..n_max``).  Sectors are mutually orthogonal and
orthonormal inside; only one fractional hop between them is modelled.  The
Gamma-ratio coefficients for integer ``n`` are extended to real occupations
``nu > -1`` through the Bargmann monomial calculus ``z^lam z^nu = z^(nu+lam)``.

An independent check of the fractional-derivative coefficient is provided by
:func:`oracle_fractional_derivative`, which integrates the Riemann-Liouville
definition numerically and never evaluates the closed-form Gamma ratio.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import OracleError, WindowError
from .fock import (
    BasisWindow,
    ModelParams,
    StateVector,
    WindowedOperator,
    gamma_ratio_diag,
    hamiltonian,
    make_lowering,
    make_raising,
)
from .index import compute_index
from .records import VerificationRecord, operator_residual, stopwatch
from .special import log_pochhammer
from .time_shift import unit_shift


def _check_lambda(lam: float) -> None:
    if not 0 < lam < 1:
        raise ValueError(f"lambda must lie in (0, 1), got {lam!r}")


@dataclass(frozen=True)
class GradedBasis:
    """Sectors ``-lam``, ``0``, ``+lam`` of the enlarged Fock space."""

    n_max: int
    lam: float

    def __post_init__(self) -> None:
        _check_lambda(self.lam)

    def sector(self, k: int) -> BasisWindow:
        if k not in (-1, 0, 1):
            raise WindowError(f"only sectors -1, 0, +1 are modelled, got {k}")
        return BasisWindow(0, self.n_max, k * self.lam)

    @property
    def sectors(self) -> tuple[BasisWindow, BasisWindow, BasisWindow]:
        return self.sector(-1), self.sector(0), self.sector(1)

    def potential(self, k: int) -> float:
        """Constant potential, in units of omega, that labels sector ``k``."""
        return k * self.lam

    def state(self, n: int, k: int = 0) -> StateVector:
        return StateVector.basis(self.sector(k), n)

    def gram(self, k: int, l: int) -> np.ndarray:
        a, b = self.sector(k), self.sector(l)
        return np.array(
            [[StateVector.basis(a, i).inner(StateVector.basis(b, j)) for j in range(b.lo, b.hi + 1)]
             for i in range(a.lo, a.hi + 1)]
        )


def _window(params: ModelParams, offset: float, window: BasisWindow | None) -> BasisWindow:
    if window is None:
        return BasisWindow(0, params.n_max, offset)
    if window.offset != offset:
        raise WindowError(f"window {window} is not in sector {offset:+g}")
    return window


def frac_lower(
    params: ModelParams, lam: float, from_sector_offset: float = 0.0,
    window: BasisWindow | None = None,
) -> WindowedOperator:
    """``a^lam``: ``|nu> -> sqrt(Gamma(nu+1)/Gamma(nu-lam+1)) |nu-lam>``."""
    _check_lambda(lam)
    if from_sector_offset not in (0.0, lam):
        raise WindowError("a^lambda is modelled from the 0 and +lambda sectors only")
    src = _window(params, from_sector_offset, window)
    dst = BasisWindow(src.lo, src.hi, from_sector_offset - lam)
    nu = src.occupations
    coeff = np.exp(0.5 * log_pochhammer(nu - lam + 1.0, lam))
    return WindowedOperator(src, dst, np.diag(coeff))


def frac_raise(
    params: ModelParams, lam: float, from_sector_offset: float = 0.0,
    window: BasisWindow | None = None,
) -> WindowedOperator:
    """``(a^dagger)^lam``: ``|nu> -> sqrt(Gamma(nu+lam+1)/Gamma(nu+1)) |nu+lam>``."""
    _check_lambda(lam)
    if from_sector_offset not in (0.0, -lam):
        raise WindowError("(a^dagger)^lambda is modelled from the -lambda and 0 sectors only")
    src = _window(params, from_sector_offset, window)
    dst = BasisWindow(src.lo, src.hi, from_sector_offset + lam)
    coeff = np.exp(0.5 * log_pochhammer(src.occupations + 1.0, lam))
    return WindowedOperator(src, dst, np.diag(coeff))


def sector_lowering(params: ModelParams, m: int, offset: float) -> WindowedOperator:
    """``a^m`` inside one sector, on states whose image stays in the sector."""
    if offset == 0.0:
        return make_lowering(params, m).restrict(domain=BasisWindow(m, params.n_max))
    src = BasisWindow(m, params.n_max, offset)
    dst = BasisWindow(0, params.n_max - m, offset)
    coeff = np.exp(0.5 * log_pochhammer(src.occupations - m + 1.0, m))
    return WindowedOperator(src, dst, np.diag(coeff))


def sector_raising(params: ModelParams, m: int, offset: float) -> WindowedOperator:
    """``(a^dagger)^m`` inside one sector: ``[0, n_max - m] -> [0, n_max]``."""
    if offset == 0.0:
        return make_raising(params, m)
    src = BasisWindow(0, params.n_max - m, offset)
    dst = BasisWindow(0, params.n_max, offset)
    coeff = np.exp(0.5 * log_pochhammer(src.occupations + 1.0, m))
    mat = np.zeros((dst.size, src.size))
    mat[np.arange(m, params.n_max + 1), np.arange(src.size)] = coeff
    return WindowedOperator(src, dst, mat)


@dataclass(frozen=True)
class FractionalShift:
    """``exp(+-i (m+lam) omega T_{m+lam})`` between the integer and ``-lam`` sectors."""

    m: int
    lam: float
    forward: WindowedOperator
    backward: WindowedOperator
    params: ModelParams

    @property
    def alpha(self) -> float:
        return self.m + self.lam


def make_frac_shift(params: ModelParams, m: int, lam: float) -> FractionalShift:
    """Forward shift ``D a^lam a^m`` with the Gamma diagonal ``D`` on the image sector.

    Evaluating ``D = [Gamma(N+1)/Gamma(N+m+lam+1)]^(1/2)`` on the ``-lam``
    sector makes the coefficients telescope to exactly one.
    """
    _check_lambda(lam)
    if int(m) != m or m < 0:
        raise ValueError(f"m must be a nonnegative integer, got {m!r}")
    m = int(m)
    image = BasisWindow(0, params.n_max - m)
    lower = make_lowering(params, m) if m else WindowedOperator.identity(params.full_window)
    fl = frac_lower(params, lam, 0.0, image)
    diag = gamma_ratio_diag(params, m + lam, 0.5, fl.codomain)
    forward = diag @ fl @ lower
    return FractionalShift(m, lam, forward, forward.adjoint(), params)


def raise_shift(params: ModelParams, m: int, lam: float, from_sector_offset: float = 0.0) -> WindowedOperator:
    """``(a^dagger)^m (a^dagger)^lam D`` applied to an arbitrary modelled sector.

    On the ``-lam`` sector this is the adjoint of the forward fractional
    shift; on the integer sector it moves ``|n>`` to ``|n+m+lam>``.
    """
    _check_lambda(lam)
    src = BasisWindow(0, params.n_max - m, from_sector_offset)
    diag = gamma_ratio_diag(params, m + lam, 0.5, src)
    fr = frac_raise(params, lam, from_sector_offset, src)
    if m == 0:
        return fr @ diag
    return sector_raising(params, m, fr.codomain.offset) @ fr @ diag


def _record(fs: FractionalShift, check: str, tag: str, window: str, res: float, raw: float,
            **kw) -> VerificationRecord:
    p = fs.params
    return VerificationRecord(
        check=check, eq_tag=tag, m=fs.m, lam=fs.lam, n_max=p.n_max, omega=p.omega,
        window=window, residual=res, raw_residual=raw, tolerance=p.tol_exact,
        passed=bool(res <= p.tol_exact), **kw,
    )


def check_frac_shift_action(fs: FractionalShift) -> VerificationRecord:
    with stopwatch() as t:
        F = fs.forward
        res, raw = operator_residual(F, unit_shift(F.domain, F.codomain, fs.m))
    return _record(fs, "check_frac_shift_action", "fractional-shift-action",
                   f"{F.codomain}<-{F.domain}", res, raw, wall_time=t[0],
                   note="Gamma diagonal evaluated on the image sector (telescoping reading)")


def check_frac_commutator(fs: FractionalShift) -> VerificationRecord:
    p = fs.params
    with stopwatch() as t:
        F = fs.forward
        comm = hamiltonian(p, F.codomain) @ F - F @ hamiltonian(p, F.domain)
        res, raw = operator_residual(comm, (-fs.alpha * p.omega) * F)
    return _record(fs, "check_frac_commutator", "fractional-commutator",
                   f"{F.codomain}<-{F.domain}", res, raw, wall_time=t[0])


def check_frac_isometry(fs: FractionalShift) -> VerificationRecord:
    with stopwatch() as t:
        F, B = fs.forward, fs.backward
        sub = BasisWindow(fs.m, fs.params.n_max)
        bf = (B @ F).restrict(sub, sub)
        res1, raw1 = operator_residual(bf, WindowedOperator.identity(sub))
        img = F.codomain
        fb = F @ B
        res2, raw2 = operator_residual(fb, WindowedOperator.identity(img))
    return _record(fs, "check_frac_isometry", "fractional-isometry", f"{sub} & {img}",
                   max(res1, res2), max(raw1, raw2), wall_time=t[0])


def check_frac_index(params: ModelParams, lam: float,
                     rank_tols=(1e-12, 1e-11, 1e-10, 1e-9, 1e-8)) -> VerificationRecord:
    """The ``m = 0`` fractional shift has index 0 between its sectors."""
    with stopwatch() as t:
        fs = make_frac_shift(params, 0, lam)
        idx = [compute_index(fs.forward, tol).index for tol in rank_tols]
    res = float(max(abs(i) for i in idx))
    return _record(fs, "check_frac_index", "fractional-index",
                   f"{fs.forward.codomain}<-{fs.forward.domain}", res, res,
                   wall_time=t[0], extra={"indices": ",".join(map(str, idx))})


def virtual_vacuum(params: ModelParams, lam: float) -> StateVector:
    """``a^lam |0>``, a multiple of the virtual vacuum ``|-lam>``."""
    return frac_lower(params, lam) @ StateVector.basis(params.full_window, 0)


def check_virtual_vacuum(params: ModelParams, lam: float) -> VerificationRecord:
    with stopwatch() as t:
        state = virtual_vacuum(params, lam)
        expected = 1.0 / math.sqrt(math.gamma(1.0 - lam))
        raw = abs(state.norm() - expected)
        support_ok = state.support() == [0] and state.window.offset == -lam
    res = raw / expected
    return VerificationRecord(
        check="check_virtual_vacuum", eq_tag="virtual-vacuum", lam=lam, n_max=params.n_max,
        omega=params.omega, window=str(state.window), residual=res, raw_residual=raw,
        tolerance=params.tol_exact, passed=bool(res <= params.tol_exact and support_ok),
        wall_time=t[0], note=f"norm {state.norm():.12g}",
    )


def check_frac_ladder(params: ModelParams, lam: float) -> VerificationRecord:
    """Adjoint pairing of ``a^lam`` and ``(a^dagger)^lam`` and the eigenvalue rule.

    ``frac_raise`` from the ``-lam`` sector must equal the adjoint of
    ``frac_lower`` from the integer sector, ``frac_raise`` from the integer
    sector must equal the adjoint of ``frac_lower`` from ``+lam``, and the
    number operator must read ``n +- lam`` on the images.
    """
    with stopwatch() as t:
        down = frac_lower(params, lam, 0.0)
        up = frac_raise(params, lam, -lam)
        r1 = operator_residual(up, down.adjoint())
        up0 = frac_raise(params, lam, 0.0)
        down_plus = frac_lower(params, lam, lam)
        r2 = operator_residual(up0, down_plus.adjoint())
        # (a^dagger)^lam a^lam diagonal: Gamma(n+1)/Gamma(n-lam+1)
        n = params.full_window.occupations
        ref = WindowedOperator.diagonal(params.full_window, np.exp(log_pochhammer(n - lam + 1, lam)))
        r3 = operator_residual(up @ down, ref)
        from .fock import number_op

        worst_eig = 0.0
        for k, op in ((-1, down), (1, up0)):
            img = op.codomain
            N = number_op(params, img)
            lhs = N @ op
            rhs = WindowedOperator(op.domain, img, np.diag(img.occupations) @ op.matrix)
            worst_eig = max(worst_eig, operator_residual(lhs, rhs)[0])
    res = max(r1[0], r2[0], r3[0], worst_eig)
    raw = max(r1[1], r2[1], r3[1])
    return VerificationRecord(
        check="check_frac_ladder", eq_tag="fractional-ladder", lam=lam, n_max=params.n_max,
        omega=params.omega, window=str(params.full_window), residual=res, raw_residual=raw,
        tolerance=params.tol_exact, passed=bool(res <= params.tol_exact), wall_time=t[0],
        note="Gamma-ratio coefficients extended to real occupations nu > -1 (assumption)",
    )


def check_noncommutation_facts(params: ModelParams, lam: float, m_max: int = 4) -> VerificationRecord:
    """``N^lam`` differs from ``(a^dagger)^lam a^lam``; ``a^lam a^m = a^m a^lam`` only for ``n >= m``.

    For ``n < m`` the order ``a^lam a^m`` annihilates ``|n>`` while ``a^m a^lam``
    leaves the modelled space with the nonzero monomial coefficient
    ``prod_j (n - lam - j)``; those indices are recorded, not asserted equal.
    """
    _check_lambda(lam)
    with stopwatch() as t:
        occ = params.full_window.occupations
        n_pow = occ**lam
        ratio = np.diag((frac_raise(params, lam, -lam) @ frac_lower(params, lam, 0.0)).matrix)
        gap = float(np.max(np.abs(n_pow[1:] - ratio[1:])))
        differs = gap > params.tol_exact

        order_res = 0.0
        pattern = {}
        for m in range(1, m_max + 1):
            image = BasisWindow(0, params.n_max - m)
            first = frac_lower(params, lam, 0.0, image) @ make_lowering(params, m)
            second = sector_lowering(params, m, -lam) @ frac_lower(params, lam, 0.0)
            sub = BasisWindow(m, params.n_max)
            order_res = max(order_res, operator_residual(first, second, sub)[0])
            disagree = []
            for n in range(0, m):
                lhs = first.column(n).norm()
                other = math.prod(n - lam - j for j in range(m))
                if lhs == 0.0 and other != 0.0:
                    disagree.append(n)
            pattern[m] = disagree
        pattern_ok = all(pattern[m] == list(range(m)) for m in pattern)
    passed = differs and order_res <= params.tol_exact and pattern_ok
    return VerificationRecord(
        check="check_noncommutation_facts", eq_tag="fractional-noncommutation", lam=lam,
        n_max=params.n_max, omega=params.omega, window=f"[1,{params.n_max}] & n>=m",
        residual=order_res, raw_residual=order_res, tolerance=params.tol_exact,
        passed=bool(passed), wall_time=t[0],
        note=f"max |N^lam - Gamma ratio| = {gap:.4g}; orders disagree for n<m",
        extra={"disagree": ";".join(f"{m}:{','.join(map(str, v))}" for m, v in pattern.items())},
    )


# ---------------------------------------------------------------------------
# Riemann-Liouville quadrature oracle


@dataclass(frozen=True)
class QuadratureOracle:
    panels: int = 1024
    fd_step: float = 1e-5

    def __post_init__(self) -> None:
        if int(self.panels) != self.panels or self.panels < 64:
            raise ValueError(f"panels must be an integer >= 64, got {self.panels!r}")
        if not 1e-7 <= self.fd_step <= 1e-4:
            raise ValueError(f"fd_step must lie in [1e-7, 1e-4], got {self.fd_step!r}")

    def doubled(self) -> QuadratureOracle:
        return QuadratureOracle(2 * self.panels, self.fd_step)


def _simpson(f: np.ndarray, h: float) -> float:
    return h / 3.0 * (f[0] + f[-1] + 4.0 * f[1:-1:2].sum() + 2.0 * f[2:-1:2].sum())


def beta_integral(n: int, lam: float, panels: int) -> float:
    """``int_0^1 s^n (1-s)^(-lam) ds`` with the endpoint singularity removed.

    Substituting ``1 - s = u^(1/(1-lam))`` gives
    ``1/(1-lam) int_0^1 (1 - u^(1/(1-lam)))^n du``.
    """
    u = np.linspace(0.0, 1.0, 2 * panels + 1)
    s = 1.0 - u ** (1.0 / (1.0 - lam))
    return _simpson(s**n, 1.0 / (2 * panels)) / (1.0 - lam)


def oracle_fractional_derivative(
    oracle: QuadratureOracle, n: int, lam: float, z: float, tol_quad: float = 1e-6
) -> float:
    """Riemann-Liouville derivative of ``z^n`` by quadrature and finite differences.

    ``I(x) = int_0^x t^n (x-t)^(-lam) dt = x^(n+1-lam) J`` with ``J`` the
    integral of :func:`beta_integral`; the result is the central difference of
    ``I`` at ``z`` divided by ``Gamma(1 - lam)``.
    """
    if not 0 < z <= 2:
        raise ValueError(f"z must lie in (0, 2], got {z!r}")
    if int(n) != n or not 0 <= n <= 12:
        raise ValueError(f"n must be an integer in [0, 12], got {n!r}")
    if not 0.05 <= lam <= 0.95:
        raise ValueError(f"lambda must lie in [0.05, 0.95], got {lam!r}")
    j = beta_integral(n, lam, oracle.panels)
    j2 = beta_integral(n, lam, 2 * oracle.panels)
    if abs(j - j2) > tol_quad * abs(j2):
        raise OracleError(
            f"quadrature not converged for n={n}, lambda={lam}: {j!r} vs {j2!r}"
        )
    h = oracle.fd_step * z
    power = n + 1 - lam
    deriv = ((z + h) ** power - (z - h) ** power) * j / (2.0 * h)
    return deriv / math.gamma(1.0 - lam)


def closed_form_derivative(n: int, lam: float, z: float) -> float:
    """``Gamma(n+1)/Gamma(n-lam+1) z^(n-lam)``."""
    return float(np.exp(log_pochhammer(n - lam + 1.0, lam))[0]) * z ** (n - lam)


DEFAULT_LAMBDA_GRID = tuple(round(0.1 * k, 10) for k in range(1, 10))
DEFAULT_Z_GRID = (0.5, 1.0, 1.5)


def oracle_errors(oracle: QuadratureOracle, n_range=range(11), lambda_grid=DEFAULT_LAMBDA_GRID,
                  z_grid=DEFAULT_Z_GRID, tol_quad: float = 1e-6) -> dict[tuple[int, float, float], float]:
    """Relative disagreement between oracle and closed form at each grid point."""
    out = {}
    for lam in lambda_grid:
        for n in n_range:
            for z in z_grid:
                exact = closed_form_derivative(n, lam, z)
                approx = oracle_fractional_derivative(oracle, n, lam, z, tol_quad)
                out[(n, lam, z)] = abs(approx - exact) / abs(exact)
    return out


def check_closed_form_vs_oracle(params: ModelParams, oracle: QuadratureOracle,
                                n_range=range(11), lambda_grid=DEFAULT_LAMBDA_GRID,
                                z_grid=DEFAULT_Z_GRID) -> VerificationRecord:
    with stopwatch() as t:
        failures = []
        errors = {}
        for key in [(n, lam, z) for lam in lambda_grid for n in n_range for z in z_grid]:
            try:
                errors[key] = oracle_errors(oracle, [key[0]], [key[1]], [key[2]], params.tol_quad)[key]
            except OracleError:
                errors[key] = math.inf
            if not errors[key] <= params.tol_quad:
                failures.append(key)
        worst = max(errors, key=errors.get)
    lam = lambda_grid[0] if len(lambda_grid) == 1 else None
    return VerificationRecord(
        check="check_closed_form_vs_oracle", eq_tag="fractional-oracle", lam=lam,
        n_max=params.n_max, omega=params.omega,
        window=f"n<={max(n_range)}, z in {{{','.join(f'{z:g}' for z in z_grid)}}}",
        residual=errors[worst], raw_residual=errors[worst], tolerance=params.tol_quad,
        passed=not failures, wall_time=t[0],
        note=f"panels={oracle.panels}, fd_step={oracle.fd_step:g}",
        extra={"worst": f"n={worst[0]},lambda={worst[1]:g},z={worst[2]:g}",
               "failures": len(failures), "points": len(errors)},
    )
