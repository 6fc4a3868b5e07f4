"""Verification records, the check catalogue and residual helpers."""

from __future__ import annotations

import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any, Iterator

import numpy as np

from .errors import WindowError
from .fock import BasisWindow, StateVector, WindowedOperator

# tag -> identity it verifies; every record carries one of these tags
EQ_TAGS: dict[str, str] = {
    "ladder-monomial": "a^p (a^dagger)^q |0> = q!/sqrt((q-p)!) |q-p> for q >= p, else 0",
    "shift-action": "exp(i m w T_m)|n> = |n-m> for n >= m, 0 otherwise",
    "spectral-action": "H exp(i m w T_m)|n> = E_{n-m} |n-m> for n >= m, 0 otherwise",
    "shift-commutator": "[H, exp(i m w T_m)] = -m w exp(i m w T_m) (exponentiated [T_m, H] = -i)",
    "shift-isometry": "U U^dagger = 1 everywhere; U^dagger U = 1 on F_m",
    "shift-power": "exp(i m w T_m) = exp(i w T_1)^m on F_m",
    "witt-bracket": "[M_m, M_n] = (m - n) w M_{m+n}",
    "witt-jacobi": "Jacobi identity for the generators M_m",
    "central-charge": "central extension of [M_m, M_-m] vanishes (c = 0)",
    "highest-weight": "M_0|0> = E_0|0>, M_alpha|0> = 0 for alpha > lambda",
    "operator-index": "index = dim ker - dim ker^dagger of a^m (m on full space, 0 on F_m)",
    "polar-decomposition": "a^m = [Gamma(N+1)/Gamma(N+m+1)]^(-1/2) exp(i m w T_m)",
    "virtual-vacuum": "a^lambda|0> = |-lambda>/sqrt(Gamma(1-lambda))",
    "fractional-ladder": "a^lambda, (a^dagger)^lambda Gamma-ratio action and adjoint pairing",
    "fractional-shift-action": "exp(i(m+lambda) w T)|n> = |n-m-lambda> for n >= m, 0 otherwise",
    "fractional-commutator": "[H, exp(i a w T_a)] = -a w exp(i a w T_a), a = m + lambda",
    "fractional-isometry": "<k|U^dagger U|l> = <k|U U^dagger|l> = delta_kl for k, l >= m",
    "fractional-index": "index of the m = 0 fractional shift between integer and -lambda sectors",
    "fractional-oracle": "Riemann-Liouville quadrature of z^n versus Gamma-ratio closed form",
    "fractional-noncommutation": "N^lambda != (a^dagger)^lambda a^lambda; a^lambda a^m = a^m a^lambda only for n >= m",
    "energy-shift": "H|psi> = E|psi> implies (H + V)|psi> = (E + V)|psi>",
    "passive-shift": "H exp(-i V T)|psi> = (E + V) exp(-i V T)|psi>",
    "passive-composition": "exp(-i V2 T) exp(-i V1 T) = exp(-i (V1 + V2) T)",
    "active-shift": "exp(i V T) H exp(-i V T) = H + V",
    "active-passive-equivalence": "<psi|H'|psi> = <psi'|H|psi'>",
}


@dataclass
class VerificationRecord:
    check: str
    eq_tag: str
    m: float | None = None
    lam: float | None = None
    n_max: int | None = None
    omega: float | None = None
    window: str = ""
    residual: float = 0.0
    raw_residual: float = 0.0
    tolerance: float = 0.0
    passed: bool = False
    wall_time: float = 0.0
    note: str = ""
    extra: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.eq_tag not in EQ_TAGS:
            raise ValueError(f"unknown eq_tag {self.eq_tag!r}")
        self.residual = float(self.residual)
        self.raw_residual = float(self.raw_residual)
        self.tolerance = float(self.tolerance)
        self.passed = bool(self.passed)

    def sort_key(self) -> tuple:
        def num(v):
            return (v is None, 0.0 if v is None else float(v))

        return (
            self.eq_tag,
            self.check,
            num(self.m),
            num(self.lam),
            num(self.n_max),
            num(self.omega),
            repr(sorted(self.extra.items())),
        )

    def as_dict(self) -> dict[str, Any]:
        return {
            "check": self.check,
            "eq_tag": self.eq_tag,
            "m": self.m,
            "lambda": self.lam,
            "n_max": self.n_max,
            "omega": self.omega,
            "window": self.window,
            "residual": self.residual,
            "raw_residual": self.raw_residual,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "wall_time": self.wall_time,
            "note": self.note,
            "extra": self.extra,
        }


@dataclass
class VerificationReport:
    records: list[VerificationRecord] = field(default_factory=list)
    metadata: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(self.records) and all(r.passed for r in self.records)

    def failures(self) -> list[VerificationRecord]:
        return [r for r in self.records if not r.passed]

    def by_tag(self, tag: str) -> list[VerificationRecord]:
        return [r for r in self.records if r.eq_tag == tag]


@contextmanager
def stopwatch() -> Iterator[list[float]]:
    """Yields a one-element list that receives the elapsed seconds."""
    out = [0.0]
    t0 = time.perf_counter()
    try:
        yield out
    finally:
        out[0] = time.perf_counter() - t0


def _union(a: BasisWindow, b: BasisWindow) -> BasisWindow:
    if not a.same_sector(b):
        raise WindowError(f"windows {a} and {b} lie in different sectors")
    return BasisWindow(min(a.lo, b.lo), max(a.hi, b.hi), a.offset)


def pad(op: WindowedOperator, domain: BasisWindow, codomain: BasisWindow) -> np.ndarray:
    """Matrix of ``op`` on ``domain`` embedded in a zero-padded ``codomain``."""
    cols = op.domain.index_of(domain)
    out = np.zeros((codomain.size, domain.size))
    out[codomain.index_of(op.codomain), :] = op.matrix[:, cols]
    return out


def scaled(diff: float, scale: float) -> float:
    return diff / scale if scale > 0 else diff


def operator_residual(
    actual: WindowedOperator,
    reference: WindowedOperator,
    domain: BasisWindow | None = None,
) -> tuple[float, float]:
    """Max-entry residual of ``actual - reference`` on ``domain``.

    Codomains are padded to their union so that any amplitude one operator
    sends outside the other's codomain counts as error.  Returns
    ``(scaled, raw)`` where the scale is the max entry of ``reference``.
    """
    if domain is None:
        domain = actual.domain.intersect(reference.domain)
        if domain is None:
            raise WindowError("operators share no domain")
    cod = _union(actual.codomain, reference.codomain)
    a = pad(actual, domain, cod)
    r = pad(reference, domain, cod)
    raw = float(np.max(np.abs(a - r))) if a.size else 0.0
    ref = float(np.max(np.abs(r))) if r.size else 0.0
    return scaled(raw, ref), raw


def state_residual(actual: StateVector, reference: StateVector) -> tuple[float, float]:
    cod = _union(actual.window, reference.window)
    a = actual.embed(cod).coeffs
    r = reference.embed(cod).coeffs
    raw = float(np.max(np.abs(a - r)))
    ref = float(np.max(np.abs(r)))
    return scaled(raw, ref), raw
