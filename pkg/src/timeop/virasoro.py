"""Generators ``M_m = (H U_m + U_m H) / 2`` and the Witt algebra they span.

Only ``m >= 1`` is built from the shift; ``M_0`` is the Hamiltonian and
``M_{-m}`` is the adjoint of ``M_m``.  Mixed-sign brackets hold only away from
the bottom of the spectrum, so every bracket is compared on an interior window
whose headroom is ``|m| + |n| + |m + n|``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import TruncationError
from .fock import BasisWindow, ModelParams, StateVector, WindowedOperator, commutator, hamiltonian
from .records import VerificationRecord, operator_residual, pad, stopwatch
from .time_shift import make_time_shift


@dataclass(frozen=True)
class VirasoroGenerator:
    index: float
    op: WindowedOperator
    params: ModelParams


def _symmetrized(params: ModelParams, shift: WindowedOperator) -> WindowedOperator:
    h_in = hamiltonian(params, shift.domain)
    h_out = hamiltonian(params, shift.codomain)
    return 0.5 * (h_out @ shift + shift @ h_in)


def make_generator(params: ModelParams, m: int) -> VirasoroGenerator:
    if int(m) != m:
        raise ValueError(f"generator index must be an integer, got {m!r}")
    m = int(m)
    if 2 * abs(m) > params.n_max:
        raise TruncationError(f"|m|={abs(m)} exceeds n_max/2={params.n_max / 2:g}")
    if m == 0:
        op = hamiltonian(params)
    elif m > 0:
        op = _symmetrized(params, make_time_shift(params, m).forward)
    else:
        op = make_generator(params, -m).op.adjoint()
    return VirasoroGenerator(m, op, params)


def make_fractional_generator(params: ModelParams, m: int, lam: float) -> VirasoroGenerator:
    """``M_alpha`` for ``alpha = m + lambda`` built from the fractional shift."""
    from .fractional import make_frac_shift

    if lam == 0:
        return make_generator(params, m)
    fs = make_frac_shift(params, m, lam)
    return VirasoroGenerator(m + lam, _symmetrized(params, fs.forward), params)


def interior_window(params: ModelParams, *indices: int) -> BasisWindow:
    """Domain window on which brackets of the given indices are compared.

    Brackets with only nonnegative indices hold on the whole space; any
    negative index moves the lower edge up by the total headroom.
    """
    headroom = sum(abs(i) for i in indices)
    lo = headroom if min(indices) < 0 else 0
    hi = params.n_max - headroom
    if hi < lo:
        raise TruncationError(
            f"no interior window for indices {indices} at n_max={params.n_max}"
        )
    return BasisWindow(lo, hi)


def _check_indices(params: ModelParams, *indices: int) -> None:
    for i in indices:
        if 2 * abs(i) > params.n_max:
            raise TruncationError(f"|{i}| exceeds n_max/2 = {params.n_max / 2:g}")


def bracket(params: ModelParams, m: int, n: int) -> WindowedOperator:
    return commutator(make_generator(params, m).op, make_generator(params, n).op)


def check_witt_bracket(params: ModelParams, m: int, n: int) -> VerificationRecord:
    _check_indices(params, m, n, m + n)
    with stopwatch() as t:
        window = interior_window(params, m, n, m + n)
        lhs = bracket(params, m, n)
        rhs = ((m - n) * params.omega) * make_generator(params, m + n).op
        res, raw = operator_residual(lhs, rhs, window)
        if m == n:
            # reference is identically zero; scale by the generator itself
            scale = make_generator(params, m).op.max_norm() ** 2
            res = raw / scale if scale else raw
    return VerificationRecord(
        check="check_witt_bracket", eq_tag="witt-bracket", m=m, n_max=params.n_max,
        omega=params.omega, window=str(window), residual=res, raw_residual=raw,
        tolerance=params.tol_exact, passed=bool(res <= params.tol_exact),
        wall_time=t[0], extra={"n": n},
        note="adjoint extension M_-m = M_m^dagger" if min(m, n) < 0 else "",
    )


def jacobi_residual(params: ModelParams, a: int, b: int, c: int) -> tuple[float, float, BasisWindow]:
    """Residual of the cyclic Jacobi sum on the interior window."""
    _check_indices(params, a, b, c, a + b, b + c, a + c, a + b + c)
    gens = {i: make_generator(params, i).op for i in {a, b, c}}
    terms = [
        commutator(gens[x], commutator(gens[y], gens[z]))
        for x, y, z in ((a, b, c), (b, c, a), (c, a, b))
    ]
    window = interior_window(params, a, b, c, a + b + c)
    lo = min(t.codomain.lo for t in terms)
    hi = max(t.codomain.hi for t in terms)
    cod = BasisWindow(lo, hi)
    mats = [pad(t, window, cod) for t in terms]
    raw = float(np.max(np.abs(sum(mats))))
    scale = max(float(np.max(np.abs(x))) for x in mats)
    return (raw / scale if scale else raw), raw, window


def check_jacobi(params: ModelParams, a: int, b: int, c: int) -> VerificationRecord:
    with stopwatch() as t:
        res, raw, window = jacobi_residual(params, a, b, c)
    return VerificationRecord(
        check="check_jacobi", eq_tag="witt-jacobi", m=a, n_max=params.n_max,
        omega=params.omega, window=str(window), residual=res, raw_residual=raw,
        tolerance=params.tol_exact, passed=bool(res <= params.tol_exact),
        wall_time=t[0], extra={"indices": f"{a},{b},{c}"},
    )


def central_residuals(params: ModelParams, m_max: int) -> dict[int, tuple[float, float]]:
    """For each ``m``: (mean diagonal, scaled max) of ``[M_m, M_-m] - 2 m w M_0``."""
    out = {}
    for m in range(1, m_max + 1):
        window = interior_window(params, m, -m, 0)
        lhs = bracket(params, m, -m)
        rhs = (2 * m * params.omega) * hamiltonian(params)
        dom = window
        cod = BasisWindow(0, params.n_max)
        diff = pad(lhs, dom, cod) - pad(rhs, dom, cod)
        rows = cod.index_of(dom)
        mean_diag = float(np.mean(np.diag(diff[rows, :])))
        scale = float(np.max(np.abs(pad(rhs, dom, cod))))
        out[m] = (mean_diag / scale, float(np.max(np.abs(diff))) / scale)
    return out


def estimate_central_charge(params: ModelParams, m_max: int) -> float:
    """Least-squares fit of ``[M_m, M_-m] - 2 m w M_0`` against ``(c/12)(m^3 - m) w``.

    The deviation for each ``m`` is the mean diagonal entry of the difference
    on the interior window, scaled like every other residual.
    """
    if m_max < 2:
        raise ValueError("central-charge fit needs m_max >= 2 (m^3 - m vanishes at m = 1)")
    if 4 * m_max > params.n_max:
        raise TruncationError(f"m_max={m_max} exceeds n_max/4")
    res = central_residuals(params, m_max)
    ms = np.arange(2, m_max + 1)
    x = (ms**3 - ms) / 12.0 * params.omega
    r = np.array([res[int(m)][0] for m in ms])
    return float(r @ x / (x @ x))


def check_central_charge(params: ModelParams, m_max: int, tol: float = 1e-8) -> VerificationRecord:
    with stopwatch() as t:
        c = estimate_central_charge(params, m_max)
        worst = max(v[1] for v in central_residuals(params, m_max).values())
    ok = abs(c) <= tol and worst <= params.tol_exact
    return VerificationRecord(
        check="check_central_charge", eq_tag="central-charge", m=m_max, n_max=params.n_max,
        omega=params.omega, window=f"[2m, n_max-2m], m<={m_max}", residual=abs(c),
        raw_residual=worst, tolerance=tol, passed=bool(ok), wall_time=t[0],
        note=f"fitted c = {c:.3e}; max bracket deviation {worst:.3e}",
    )


def check_highest_weight(params: ModelParams, m_max: int, lam: float = 0.0) -> VerificationRecord:
    """Vacuum constraints: ``M_0|0> = E_0|0>`` and ``M_alpha|0> = 0`` for ``m >= 1``.

    For ``lam > 0`` the boundary generator ``M_lam`` must not annihilate the
    vacuum; its image is proportional to ``|-lam>``.
    """
    if 2 * m_max > params.n_max:
        raise TruncationError(f"m_max={m_max} exceeds n_max/2")
    if not 0 <= lam < 1:
        raise ValueError(f"lambda must lie in [0, 1), got {lam!r}")
    with stopwatch() as t:
        vac = StateVector.basis(params.full_window, 0)
        m0 = make_generator(params, 0).op @ vac
        e0 = params.omega / 2
        ground = abs(m0.amplitude(0) - e0) / e0
        ground = max(ground, float(np.max(np.abs(m0.coeffs[1:]))))
        kills = [
            float(np.max(np.abs((make_fractional_generator(params, m, lam).op @ vac).coeffs)))
            for m in range(1, m_max + 1)
        ]
        residual = max([ground, *kills])
        boundary_ok = True
        note = f"M_m|0> exact zero for m=1..{m_max}" if max(kills) == 0.0 else ""
        if lam > 0:
            img = make_fractional_generator(params, 0, lam).op @ vac
            amp = img.amplitude(0)
            rest = float(np.max(np.abs(img.coeffs[1:])))
            boundary_ok = abs(amp) > params.tol_exact and rest == 0.0
            note += f"; boundary M_{lam:g}|0> = {amp:.6g}|{-lam:g}>"
    passed = residual <= params.tol_exact and boundary_ok
    return VerificationRecord(
        check="check_highest_weight", eq_tag="highest-weight", m=m_max, lam=lam,
        n_max=params.n_max, omega=params.omega, window="|0>", residual=residual,
        raw_residual=residual, tolerance=params.tol_exact, passed=bool(passed),
        wall_time=t[0], note=note.lstrip("; "),
        extra={"boundary_nonzero": boundary_ok} if lam > 0 else {},
    )
