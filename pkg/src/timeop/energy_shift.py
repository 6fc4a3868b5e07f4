"""Energy shifts ``H -> H + V`` seen actively (on ``H``) and passively (on states).

A potential ``V = (k + lam) omega`` is realised by ``k`` unit shifts plus at
most one fractional hop.  Upward shifts move integer-sector states into the
``+lam`` sector, downward shifts into the ``-lam`` sector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import TruncationError, UnsupportedShiftError
from .fock import BasisWindow, ModelParams, StateVector, WindowedOperator, hamiltonian
from .fractional import make_frac_shift, raise_shift
from .records import VerificationRecord, operator_residual, state_residual, stopwatch
from .time_shift import make_time_shift


@dataclass(frozen=True)
class ShiftSpec:
    """Potential ``direction * (k + lam) * omega``."""

    k: int
    lam: float = 0.0
    direction: int = 1

    def __post_init__(self) -> None:
        if int(self.k) != self.k or self.k < 0:
            raise UnsupportedShiftError(f"k must be a nonnegative integer, got {self.k!r}")
        if not 0 <= self.lam < 1:
            raise UnsupportedShiftError(f"lambda must lie in [0, 1), got {self.lam!r}")
        if self.direction not in (1, -1):
            raise UnsupportedShiftError("direction must be +1 or -1")

    @property
    def v_over_omega(self) -> float:
        return self.direction * (self.k + self.lam)

    def potential(self, params: ModelParams) -> float:
        return self.v_over_omega * params.omega

    @classmethod
    def from_potential(cls, v: float, omega: float, lam: float = 0.0) -> ShiftSpec:
        """Decompose ``v`` on the lattice ``+-(k + lam) omega``; reject anything else."""
        direction = -1 if v < 0 else 1
        k_real = abs(v) / omega - lam
        k = round(k_real)
        if k < 0 or not math.isclose(k_real, k, abs_tol=1e-12):
            raise UnsupportedShiftError(
                f"V={v!r} is not on the lattice (k + {lam})*{omega} for integer k >= 0"
            )
        if k == 0 and lam == 0:
            direction = 1
        return cls(int(k), lam, direction)


def _integer_power(op: WindowedOperator, k: int) -> WindowedOperator:
    out = op
    for _ in range(k - 1):
        out = op @ out
    return out


def passive_operator(params: ModelParams, spec: ShiftSpec) -> WindowedOperator:
    """``exp(-i V T)`` restricted to integer-sector states whose image is modelled."""
    n_max = params.n_max
    if spec.direction > 0:
        src = BasisWindow(0, n_max - spec.k)
        op = WindowedOperator.identity(src)
        if spec.k:
            back = make_time_shift(params, 1).backward
            op = _integer_power(back, spec.k).restrict(domain=src, codomain=BasisWindow(spec.k, n_max))
        if spec.lam:
            op = raise_shift(params, 0, spec.lam, 0.0) @ op
            op = op.restrict(codomain=op.codomain.shifted(lo=spec.k))
        return op
    src = BasisWindow(spec.k, n_max)
    op = WindowedOperator.identity(src)
    if spec.k:
        fwd = make_time_shift(params, 1).forward
        op = _integer_power(fwd, spec.k).restrict(domain=src, codomain=BasisWindow(0, n_max - spec.k))
    if spec.lam:
        op = make_frac_shift(params, 0, spec.lam).forward @ op
        op = op.restrict(codomain=op.codomain.shifted(hi=n_max - spec.k))
    return op


def apply_passive(params: ModelParams, spec: ShiftSpec, psi: StateVector) -> StateVector:
    """Passive transformation ``|psi> -> exp(-i V T)|psi>``.

    ``psi`` must live in the integer sector with all its weight where the
    shifted occupation stays inside the modelled windows.
    """
    if psi.window.offset != 0:
        raise UnsupportedShiftError("passive shifts start from the integer sector")
    op = passive_operator(params, spec)
    try:
        return op @ psi.embed(op.domain)
    except ValueError as exc:
        raise TruncationError(f"shifted state leaves the window {op.domain}: {exc}") from exc


def apply_active(params: ModelParams, spec: ShiftSpec) -> WindowedOperator:
    """``exp(i V T) H exp(-i V T)`` for integer ``V`` on its interior window.

    For ``V = +k omega`` that window is ``[0, n_max - k]``; for ``V = -k omega``
    it is ``[k, n_max]``.
    """
    if spec.lam != 0:
        raise UnsupportedShiftError(
            "active conjugation for fractional V crosses sectors; only integer V is supported"
        )
    H = hamiltonian(params)
    if spec.k == 0:
        return H
    ts = make_time_shift(params, 1)
    if spec.direction > 0:
        outer, inner = ts.forward, ts.backward
        window = BasisWindow(0, params.n_max - spec.k)
    else:
        outer, inner = ts.backward, ts.forward
        window = BasisWindow(spec.k, params.n_max)
    conj = _integer_power(outer, spec.k) @ H @ _integer_power(inner, spec.k)
    return conj.restrict(window, window)


def _record(params: ModelParams, spec: ShiftSpec, check: str, tag: str, window: str,
            res: float, raw: float, tol: float | None = None, **kw) -> VerificationRecord:
    tol = params.tol_exact if tol is None else tol
    return VerificationRecord(
        check=check, eq_tag=tag, m=spec.direction * spec.k, lam=spec.lam, n_max=params.n_max,
        omega=params.omega, window=window, residual=res, raw_residual=raw, tolerance=tol,
        passed=bool(res <= tol), **kw,
    )


def check_energy_shift_theorem(params: ModelParams, spec: ShiftSpec) -> VerificationRecord:
    """Adding ``V`` to ``H`` keeps every number state and shifts its energy by ``V``."""
    with stopwatch() as t:
        V = spec.potential(params)
        H = hamiltonian(params)
        shifted = H + V * WindowedOperator.identity(H.domain)
        worst = 0.0
        for n in range(params.n_max + 1):
            ket = StateVector.basis(H.domain, n)
            res, _ = state_residual(shifted @ ket, (params.energy(n) + V) * ket)
            worst = max(worst, res)
    return _record(params, spec, "check_energy_shift_theorem", "energy-shift",
                   str(H.domain), worst, worst, wall_time=t[0])


def check_passive_eigenvalue(params: ModelParams, spec: ShiftSpec) -> VerificationRecord:
    """``H exp(-iVT)|n> = (E_n + V) exp(-iVT)|n>`` for every ``n`` with an in-window image."""
    with stopwatch() as t:
        V = spec.potential(params)
        op = passive_operator(params, spec)
        worst = 0.0
        norm_err = 0.0
        for n in range(op.domain.lo, op.domain.hi + 1):
            out = op @ StateVector.basis(op.domain, n)
            Hout = hamiltonian(params, out.window) @ out
            res, _ = state_residual(Hout, (params.energy(n) + V) * out)
            worst = max(worst, res)
            norm_err = max(norm_err, abs(out.norm() - 1.0))
    return _record(params, spec, "check_passive_eigenvalue", "passive-shift",
                   f"{op.codomain}<-{op.domain}", max(worst, norm_err), worst, wall_time=t[0])


def check_passive_composition(params: ModelParams, k1: int, k2: int) -> VerificationRecord:
    """Integer passive shifts by ``k1`` then ``k2`` equal one shift by ``k1 + k2``."""
    with stopwatch() as t:
        a = passive_operator(params, ShiftSpec(k1))
        b = passive_operator(params, ShiftSpec(k2))
        both = passive_operator(params, ShiftSpec(k1 + k2))
        window = both.domain
        res, raw = operator_residual(b @ a, both, window)
    spec = ShiftSpec(k1 + k2)
    return _record(params, spec, "check_passive_composition", "passive-composition",
                   str(window), res, raw, wall_time=t[0], extra={"k1": k1, "k2": k2})


def check_active_shift(params: ModelParams, spec: ShiftSpec) -> VerificationRecord:
    with stopwatch() as t:
        conj = apply_active(params, spec)
        ref = hamiltonian(params, conj.domain) + spec.potential(params) * WindowedOperator.identity(conj.domain)
        res, raw = operator_residual(conj, ref)
    return _record(params, spec, "check_active_shift", "active-shift", str(conj.domain),
                   res, raw, wall_time=t[0])


def expectation(H: WindowedOperator, psi: StateVector) -> float:
    return psi.inner(H @ psi)


def check_active_passive_equivalence(params: ModelParams, spec: ShiftSpec,
                                     psi: StateVector, label: str = "") -> VerificationRecord:
    """``<psi|H'|psi> = <psi'|H|psi'>`` with ``H'`` active and ``psi'`` passive.

    For fractional ``V`` no operator ``H'`` is constructed; the left side is
    taken as ``<psi|H|psi> + V`` and the record says so.
    """
    with stopwatch() as t:
        V = spec.potential(params)
        base = expectation(hamiltonian(params), psi.embed(params.full_window))
        note = ""
        if spec.lam == 0:
            Hp = apply_active(params, spec)
            lhs = expectation(Hp, psi.embed(Hp.domain))
        else:
            lhs = base + V
            note = "fractional V: active operator statement unverified, H' = H + V assumed"
        shifted = apply_passive(params, spec, psi)
        rhs = expectation(hamiltonian(params, shifted.window), shifted)
        raw = abs(lhs - rhs)
        res = raw / (1.0 + abs(base))
    extra = {"state": label} if label else {}
    return _record(params, spec, "check_active_passive_equivalence",
                   "active-passive-equivalence", str(psi.window), res, raw,
                   wall_time=t[0], note=note, extra=extra)


def random_states(params: ModelParams, spec: ShiftSpec, count: int, seed: int) -> list[StateVector]:
    """Normalised integer-sector states supported where both pictures are defined."""
    rng = np.random.default_rng(seed)
    if spec.direction > 0:
        lo, hi = 0, params.n_max - spec.k
    else:
        lo, hi = spec.k, params.n_max
    window = params.full_window
    out = []
    for _ in range(count):
        c = np.zeros(window.size)
        c[lo:hi + 1] = rng.standard_normal(hi - lo + 1)
        out.append(StateVector(window, c / np.linalg.norm(c)))
    return out
