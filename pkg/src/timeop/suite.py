"""Suite orchestration: every check across the configured parameter sweep."""

from __future__ import annotations

import itertools
import platform
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from typing import Callable

import numpy as np

from . import __version__
from .config import SuiteConfig
from .energy_shift import (
    ShiftSpec,
    check_active_passive_equivalence,
    check_active_shift,
    check_energy_shift_theorem,
    check_passive_composition,
    check_passive_eigenvalue,
    random_states,
)
from .fock import ModelParams, StateVector, apply_monomial, make_lowering, make_raising
from .fractional import (
    DEFAULT_LAMBDA_GRID,
    check_closed_form_vs_oracle,
    check_frac_commutator,
    check_frac_index,
    check_frac_isometry,
    check_frac_ladder,
    check_frac_shift_action,
    check_noncommutation_facts,
    check_virtual_vacuum,
    make_frac_shift,
)
from .index import check_index, check_polar
from .records import VerificationRecord, VerificationReport, state_residual, stopwatch
from .time_shift import (
    check_commutator,
    check_isometry,
    check_power_consistency,
    check_shift_pattern,
    check_spectral_action,
    make_time_shift,
)
from .virasoro import check_central_charge, check_highest_weight, check_jacobi, check_witt_bracket

Case = Callable[[], VerificationRecord]

FRACTIONAL_M = range(0, 5)
ENERGY_K = range(0, 5)
HIGHEST_WEIGHT_M = 6
JACOBI_INDICES = (1, 2, -1)


def check_monomial(params: ModelParams, p: int, q_max: int = 8) -> VerificationRecord:
    """Closed-form ``a^p (a^dagger)^q |0>`` against the matrix product path."""
    q_max = min(q_max, params.n_max)
    with stopwatch() as t:
        vac = StateVector.basis(params.full_window, 0)
        worst = worst_raw = 0.0
        for q in range(q_max + 1):
            state = vac
            if q:
                state = make_raising(params, q) @ state
            if p:
                state = make_lowering(params, p) @ state
            closed = apply_monomial(params, p, q)
            if not np.any(closed.coeffs):
                raw = float(np.max(np.abs(state.coeffs)))
                res = raw
            else:
                res, raw = state_residual(state, closed)
            worst, worst_raw = max(worst, res), max(worst_raw, raw)
    return VerificationRecord(
        check="check_monomial", eq_tag="ladder-monomial", m=p, n_max=params.n_max,
        omega=params.omega, window=f"q=0..{q_max}", residual=worst, raw_residual=worst_raw,
        tolerance=params.tol_exact, passed=worst <= params.tol_exact, wall_time=t[0],
    )


def structural_cases(params: ModelParams, m_values, lambda_values) -> list[Case]:
    """Identities that are exact in the representation (used by the truncation sweep)."""
    cases: list[Case] = []
    n_max = params.n_max
    ms = [m for m in m_values if 4 * m <= n_max]
    for m in ms:
        ts = make_time_shift(params, m)
        cases += [
            lambda ts=ts: check_shift_pattern(ts),
            lambda ts=ts: check_spectral_action(ts),
            lambda ts=ts: check_commutator(ts),
            lambda ts=ts: check_isometry(ts),
            lambda m=m: check_power_consistency(params, m),
        ]
    for m, n in itertools.product(ms, repeat=2):
        cases.append(lambda m=m, n=n: check_witt_bracket(params, m, n))
        cases.append(lambda m=m, n=n: check_witt_bracket(params, m, -n))
    for lam in lambda_values:
        for m in FRACTIONAL_M:
            if 4 * m > n_max:
                continue
            fs = make_frac_shift(params, m, lam)
            cases += [
                lambda fs=fs: check_frac_shift_action(fs),
                lambda fs=fs: check_frac_commutator(fs),
                lambda fs=fs: check_frac_isometry(fs),
            ]
    for k in ENERGY_K:
        for d in (1, -1):
            if k == 0 and d < 0:
                continue
            cases.append(lambda s=ShiftSpec(k, 0.0, d): check_active_shift(params, s))
    return cases


def suite_cases(config: SuiteConfig) -> list[Case]:
    params = config.params
    n_max = params.n_max
    cases = structural_cases(params, config.m_values, config.lambda_values)

    cases += [lambda p=p: check_monomial(params, p) for p in range(0, min(8, n_max) + 1)]
    for m in config.m_values:
        cases.append(lambda m=m: check_index(params, m))
        cases.append(lambda m=m: check_polar(params, m))
    for triple in itertools.product(JACOBI_INDICES, repeat=3):
        cases.append(lambda t=triple: check_jacobi(params, *t))
    m_max = min(max(config.m_values), n_max // 4)
    if m_max >= 2:
        cases.append(lambda: check_central_charge(params, m_max))
    hw = min(HIGHEST_WEIGHT_M, n_max // 2)
    for lam in (0.0, *config.lambda_values):
        cases.append(lambda lam=lam: check_highest_weight(params, hw, lam))

    vacuum_grid = sorted(set(DEFAULT_LAMBDA_GRID) | set(config.lambda_values))
    for lam in vacuum_grid:
        cases.append(lambda lam=lam: check_virtual_vacuum(params, lam))
    for lam in config.lambda_values:
        cases += [
            lambda lam=lam: check_frac_index(params, lam),
            lambda lam=lam: check_frac_ladder(params, lam),
            lambda lam=lam: check_noncommutation_facts(params, lam),
        ]
    for lam in DEFAULT_LAMBDA_GRID:
        cases.append(lambda lam=lam: check_closed_form_vs_oracle(params, config.oracle, lambda_grid=[lam]))

    specs = [ShiftSpec(k, lam, d) for k in ENERGY_K for lam in (0.0, *config.lambda_values)
             for d in (1, -1) if not (k == 0 and lam == 0 and d < 0)]
    for spec in specs:
        cases.append(lambda s=spec: check_energy_shift_theorem(params, s))
        cases.append(lambda s=spec: check_passive_eigenvalue(params, s))
        cases.append(lambda s=spec: equivalence_over_states(config, s))
    for k1, k2 in ((1, 1), (1, 2), (2, 3)):
        cases.append(lambda a=k1, b=k2: check_passive_composition(params, a, b))
    return cases


def equivalence_over_states(config: SuiteConfig, spec: ShiftSpec) -> VerificationRecord:
    """Active/passive expectation equality over seeded random in-window states."""
    params = config.params
    with stopwatch() as t:
        states = random_states(params, spec, config.random_states, config.seed)
        recs = [check_active_passive_equivalence(params, spec, psi) for psi in states]
    worst = max(recs, key=lambda r: r.residual)
    return replace(
        worst, wall_time=t[0], passed=all(r.passed for r in recs),
        extra={"seed": config.seed, "states": len(states)},
    )


def run_cases(cases: list[Case], workers: int | None = None) -> list[VerificationRecord]:
    with ThreadPoolExecutor(max_workers=workers) as pool:
        records = list(pool.map(lambda c: c(), cases))
    return sorted(records, key=VerificationRecord.sort_key)


def environment() -> dict[str, str]:
    import scipy

    return {
        "timeop": __version__,
        "python": sys.version.split()[0],
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "platform": platform.platform(),
    }


def run_suite(config: SuiteConfig, workers: int | None = None) -> VerificationReport:
    with stopwatch() as t:
        records = run_cases(suite_cases(config), workers)
    meta = {"config": config.as_dict(), "environment": environment(), "elapsed": t[0]}
    return VerificationReport(records, meta)


def sweep_records(config: SuiteConfig, n_max_list=None, workers: int | None = None) -> list[VerificationRecord]:
    """Structurally exact identities evaluated at several truncations."""
    out: list[VerificationRecord] = []
    for n_max in n_max_list or config.sweep_n_max:
        params = replace(config.params, n_max=n_max)
        out += run_cases(structural_cases(params, config.m_values, config.lambda_values), workers)
    return out


def sweep_growth(records: list[VerificationRecord], factor: float = 10.0) -> dict[str, float | str]:
    """Compare structural residuals against a ``factor * eps * n_max`` accumulation budget.

    A length-``n`` sum carries rounding error up to about ``n * eps`` relative
    to its largest term, so residuals may grow linearly with the truncation
    and still be pure rounding.  ``worst_ratio`` is the largest
    ``residual / (eps * n_max)``; the sweep is clean when it stays within
    ``factor``.  ``baseline_ratio`` is the worst growth relative to the
    smallest truncation (floored at eps) and is informational.
    """
    eps = float(np.finfo(float).eps)
    worst, worst_where = 0.0, ""
    groups: dict[tuple, list[VerificationRecord]] = {}
    for r in records:
        ratio = r.residual / (eps * r.n_max)
        if ratio > worst:
            worst, worst_where = ratio, f"{r.check} m={r.m} lambda={r.lam} n_max={r.n_max}"
        groups.setdefault((r.check, r.m, r.lam, repr(sorted(r.extra.items()))), []).append(r)
    baseline = 0.0
    for recs in groups.values():
        recs = sorted(recs, key=lambda r: r.n_max)
        base = max(recs[0].residual, eps)
        baseline = max([baseline] + [max(r.residual, eps) / base for r in recs[1:]])
    return {"worst_ratio": worst, "limit": factor, "where": worst_where,
            "ok": worst <= factor, "baseline_ratio": baseline, "groups": len(groups)}
