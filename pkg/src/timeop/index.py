"""Operator index from singular values, and the polar decomposition of ``a^m``."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fock import BasisWindow, ModelParams, WindowedOperator, gamma_ratio_diag, make_lowering
from .records import VerificationRecord, operator_residual, stopwatch

RANK_TOLS = (1e-12, 1e-11, 1e-10, 1e-9, 1e-8)


@dataclass(frozen=True)
class IndexResult:
    dim_ker: int
    dim_coker: int
    index: int
    singular_values: tuple[float, ...]
    rank_tol: float

    @property
    def rank(self) -> int:
        sv = self.singular_values
        if not sv or sv[0] == 0:
            return 0
        return sum(1 for s in sv if s > self.rank_tol * sv[0])

    def __post_init__(self) -> None:
        if self.index != self.dim_ker - self.dim_coker:
            raise ValueError("index must equal dim_ker - dim_coker")


def compute_index(op: WindowedOperator, rank_tol_rel: float = 1e-10) -> IndexResult:
    """``dim ker op - dim ker op^dagger`` from the numerical rank.

    The rank counts singular values above ``rank_tol_rel`` times the largest
    one (LAPACK SVD via numpy).
    """
    if not 0 < rank_tol_rel < 1e-3:
        raise ValueError(f"rank_tol_rel must lie in (0, 1e-3), got {rank_tol_rel!r}")
    mat = op.matrix
    if mat.size == 0:
        sv = np.zeros(0)
    else:
        sv = np.linalg.svd(mat, compute_uv=False)
    top = float(sv[0]) if sv.size else 0.0
    rank = int(np.count_nonzero(sv > rank_tol_rel * top)) if top > 0 else 0
    dim_ker = op.domain.size - rank
    dim_coker = op.codomain.size - rank
    return IndexResult(dim_ker, dim_coker, dim_ker - dim_coker,
                       tuple(float(s) for s in sv), rank_tol_rel)


def restrict_to_subspace(op: WindowedOperator, m: int) -> WindowedOperator:
    """Drop the domain columns below ``m`` (the subspace ``F_m``)."""
    return op.restrict(domain=op.domain.shifted(lo=op.domain.lo + m))


def check_index(params: ModelParams, m: int, rank_tols=RANK_TOLS) -> VerificationRecord:
    """``index a^m = m`` on the full window and ``0`` on ``F_m`` for every tolerance."""
    with stopwatch() as t:
        low = make_lowering(params, m)
        full = [compute_index(low, tol).index for tol in rank_tols]
        sub = [compute_index(restrict_to_subspace(low, m), tol).index for tol in rank_tols]
    res = float(max(abs(i - m) for i in full) + max(abs(i) for i in sub))
    return VerificationRecord(
        check="check_index", eq_tag="operator-index", m=m, n_max=params.n_max,
        omega=params.omega, window=f"{low.domain} & {BasisWindow(m, params.n_max)}",
        residual=res, raw_residual=res, tolerance=0.0, passed=res == 0.0, wall_time=t[0],
        extra={"full": ",".join(map(str, full)), "restricted": ",".join(map(str, sub))},
    )


@dataclass(frozen=True)
class PolarFactors:
    W: WindowedOperator
    U: WindowedOperator


def polar_factors(params: ModelParams, m: int) -> PolarFactors:
    from .time_shift import make_time_shift

    W = gamma_ratio_diag(params, m, -0.5, params.full_window)
    return PolarFactors(W, make_time_shift(params, m).forward)


def check_polar(params: ModelParams, m: int) -> VerificationRecord:
    """Polar factors of ``a^m`` and the index criterion in both directions.

    ``W`` is diagonal, ``W U`` rebuilds ``a^m``; on ``F_m`` the factor ``U`` is
    two-sided unitary (index 0), while on the full window ``U^dagger U``
    misses exactly ``m`` = index dimensions.
    """
    if 2 * m > params.n_max:
        raise ValueError(f"m={m} exceeds n_max/2")
    with stopwatch() as t:
        f = polar_factors(params, m)
        W, U = f.W, f.U
        sym = float(np.max(np.abs(W.matrix - W.matrix.T)))
        off = float(np.max(np.abs(W.matrix - np.diag(np.diag(W.matrix)))))
        rebuild, rebuild_raw = operator_residual(W @ U, make_lowering(params, m))

        Ur = restrict_to_subspace(U, m)
        r1 = operator_residual(Ur @ Ur.adjoint(), WindowedOperator.identity(Ur.codomain))[0]
        r2 = operator_residual(Ur.adjoint() @ Ur, WindowedOperator.identity(Ur.domain))[0]
        r3 = operator_residual(U @ U.adjoint(), WindowedOperator.identity(U.codomain))[0]
        deficiency = float(np.trace(np.eye(U.domain.size) - (U.adjoint() @ U).matrix))
        index_full = compute_index(U).index
        index_sub = compute_index(Ur).index
    res = max(sym, off, rebuild, r1, r2, r3)
    criterion = (index_sub == 0 and index_full == m and abs(deficiency - m) <= params.tol_exact)
    return VerificationRecord(
        check="check_polar", eq_tag="polar-decomposition", m=m, n_max=params.n_max,
        omega=params.omega, window=f"{U.domain} & {Ur.domain}", residual=res,
        raw_residual=max(sym, off, rebuild_raw), tolerance=params.tol_exact,
        passed=bool(res <= params.tol_exact and criterion), wall_time=t[0],
        note=f"full-window U^dagger U deficiency {deficiency:g}",
        extra={"index_full": index_full, "index_restricted": index_sub},
    )
