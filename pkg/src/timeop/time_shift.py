"""Shift unitaries ``exp(+-i m omega T_m)`` and their verification.

The time operator itself is never formed as a matrix logarithm; the forward
shift has an ``m``-dimensional kernel on the full space, so a logarithm only
exists after restriction to ``F_m = span{|n>, n >= m}``.  Every identity is
checked in exponentiated form.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fock import (
    BasisWindow,
    ModelParams,
    WindowedOperator,
    commutator,
    gamma_ratio_diag,
    hamiltonian,
    make_lowering,
)
from .records import VerificationRecord, operator_residual, stopwatch


@dataclass(frozen=True)
class TimeShift:
    m: int
    forward: WindowedOperator
    backward: WindowedOperator
    params: ModelParams


def make_time_shift(params: ModelParams, m: int) -> TimeShift:
    """``exp(i m omega T_m) = [Gamma(N+1)/Gamma(N+m+1)]^(1/2) a^m`` and its adjoint."""
    if int(m) != m or m < 1:
        raise ValueError(f"time-shift order must be a positive integer, got {m!r}")
    lower = make_lowering(params, m)
    diag = gamma_ratio_diag(params, m, 0.5, lower.codomain)
    forward = diag @ lower
    return TimeShift(int(m), forward, forward.adjoint(), params)


def unit_shift(domain: BasisWindow, codomain: BasisWindow, m: int) -> WindowedOperator:
    """Reference matrix sending integer part ``n`` to ``n - m`` with coefficient 1."""
    mat = np.zeros((codomain.size, domain.size))
    for n in range(domain.lo, domain.hi + 1):
        k = n - m
        if codomain.lo <= k <= codomain.hi:
            mat[k - codomain.lo, n - domain.lo] = 1.0
    return WindowedOperator(domain, codomain, mat)


def _record(ts: TimeShift, check: str, tag: str, window: str, res: float, raw: float,
            tol: float | None = None, **kw) -> VerificationRecord:
    p = ts.params
    tol = p.tol_exact if tol is None else tol
    return VerificationRecord(
        check=check, eq_tag=tag, m=ts.m, n_max=p.n_max, omega=p.omega, window=window,
        residual=res, raw_residual=raw, tolerance=tol, passed=bool(res <= tol), **kw,
    )


def check_shift_pattern(ts: TimeShift) -> VerificationRecord:
    """Every column is either zero (``n < m``) or a single unit entry at ``n - m``."""
    with stopwatch() as t:
        ref = unit_shift(ts.forward.domain, ts.forward.codomain, ts.m)
        res, raw = operator_residual(ts.forward, ref)
    return _record(ts, "check_shift_pattern", "shift-action", str(ts.forward.domain),
                   res, raw, wall_time=t[0])


def check_spectral_action(ts: TimeShift) -> VerificationRecord:
    p = ts.params
    with stopwatch() as t:
        F = ts.forward
        HF = hamiltonian(p, F.codomain) @ F
        # E_{n-m} at (n-m, n) for n >= m; zero columns for n < m
        energies = np.diag(p.energy(F.codomain.occupations))
        expected = WindowedOperator(
            F.domain, F.codomain, energies @ unit_shift(F.domain, F.codomain, ts.m).matrix
        )
        res, raw = operator_residual(HF, expected)
    return _record(ts, "check_spectral_action", "spectral-action", str(F.domain),
                   res, raw, wall_time=t[0])


def check_commutator(ts: TimeShift) -> VerificationRecord:
    p = ts.params
    with stopwatch() as t:
        comm = commutator(hamiltonian(p), ts.forward)
        expected = (-ts.m * p.omega) * ts.forward
        res, raw = operator_residual(comm, expected)
    return _record(
        ts, "check_commutator", "shift-commutator", f"{comm.codomain}<-{comm.domain}",
        res, raw, wall_time=t[0],
        note="canonical [T_m, H] = -i verified only in exponentiated form",
    )


def check_isometry(ts: TimeShift) -> VerificationRecord:
    """``U U^dagger = 1`` on ``[0, n_max - m]`` and ``U^dagger U = 1`` on ``F_m``."""
    n_max = ts.params.n_max
    with stopwatch() as t:
        F, B = ts.forward, ts.backward
        fb = F @ B
        left = BasisWindow(0, n_max - ts.m)
        res1, raw1 = operator_residual(fb, WindowedOperator.identity(left), left)
        sub = BasisWindow(ts.m, n_max)
        bf = (B @ F).restrict(sub, sub)
        res2, raw2 = operator_residual(bf, WindowedOperator.identity(sub), sub)
    return _record(
        ts, "check_isometry", "shift-isometry", f"{left} & {sub}",
        max(res1, res2), max(raw1, raw2), wall_time=t[0],
        note="m-order shift used on both sides of the isometry relations",
    )


def check_power_consistency(params: ModelParams, m: int) -> VerificationRecord:
    """``forward(m)`` equals ``forward(1)`` applied ``m`` times on ``[m, n_max]``."""
    with stopwatch() as t:
        ts = make_time_shift(params, m)
        one = make_time_shift(params, 1).forward
        power = one
        for _ in range(m - 1):
            power = one @ power
        sub = BasisWindow(m, params.n_max)
        res, raw = operator_residual(power, ts.forward, sub)
    return _record(ts, "check_power_consistency", "shift-power", str(sub), res, raw,
                   wall_time=t[0])
