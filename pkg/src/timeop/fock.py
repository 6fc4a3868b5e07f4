"""Truncated Fock-space representation of a single bosonic mode.

Operators are dense real matrices that carry explicit domain and codomain
windows of occupation numbers.  A window ``[lo, hi]`` with ``offset`` holds the
basis states ``|lo + offset>, ..., |hi + offset>``; the integer sector has
``offset == 0`` and the fractional sectors use ``offset = +-lambda``.

Lowering maps ``[0, n_max]`` onto ``[0, n_max - m]`` instead of truncating a
square matrix, so kernels and cokernels are those of the infinite operator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import TruncationError, WindowError
from .special import log_pochhammer

N_MAX_MIN = 8
N_MAX_LIMIT = 512


@dataclass(frozen=True)
class ModelParams:
    """Global configuration read by every operator constructor."""

    omega: float = 1.0
    n_max: int = 64
    tol_exact: float = 1e-10
    tol_quad: float = 1e-6

    def __post_init__(self) -> None:
        if not (self.omega > 0 and math.isfinite(self.omega)):
            raise ValueError(f"omega must be positive, got {self.omega!r}")
        if int(self.n_max) != self.n_max or not N_MAX_MIN <= self.n_max <= N_MAX_LIMIT:
            raise ValueError(
                f"n_max must be an integer in [{N_MAX_MIN}, {N_MAX_LIMIT}], got {self.n_max!r}"
            )
        if not 0 < self.tol_exact < self.tol_quad < 1:
            raise ValueError(
                "tolerances must satisfy 0 < tol_exact < tol_quad < 1, "
                f"got tol_exact={self.tol_exact!r}, tol_quad={self.tol_quad!r}"
            )

    @property
    def full_window(self) -> BasisWindow:
        return BasisWindow(0, self.n_max)

    def energy(self, occupation) -> np.ndarray | float:
        """Oscillator energy ``(nu + 1/2) * omega``."""
        return (np.asarray(occupation, dtype=float) + 0.5) * self.omega


@dataclass(frozen=True)
class BasisWindow:
    lo: int
    hi: int
    offset: float = 0.0

    def __post_init__(self) -> None:
        if int(self.lo) != self.lo or int(self.hi) != self.hi:
            raise WindowError(f"window bounds must be integers: [{self.lo}, {self.hi}]")
        if self.lo < 0 or self.hi < self.lo:
            raise WindowError(f"invalid window [{self.lo}, {self.hi}]")
        if not -1.0 <= self.offset <= 1.0:
            raise WindowError(f"offset must lie in [-1, 1], got {self.offset!r}")
        if self.lo + self.offset <= -1.0:
            raise WindowError(
                f"occupation {self.lo + self.offset!r} leaves the Gamma domain"
            )

    @property
    def size(self) -> int:
        return self.hi - self.lo + 1

    @property
    def occupations(self) -> np.ndarray:
        return np.arange(self.lo, self.hi + 1, dtype=float) + self.offset

    def same_sector(self, other: BasisWindow) -> bool:
        return self.offset == other.offset

    def contains(self, other: BasisWindow) -> bool:
        return self.same_sector(other) and self.lo <= other.lo and other.hi <= self.hi

    def intersect(self, other: BasisWindow) -> BasisWindow | None:
        if not self.same_sector(other):
            return None
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        if hi < lo:
            return None
        return BasisWindow(lo, hi, self.offset)

    def index_of(self, sub: BasisWindow) -> slice:
        """Positions of ``sub`` inside this window."""
        if not self.contains(sub):
            raise WindowError(f"{sub} is not inside {self}")
        return slice(sub.lo - self.lo, sub.hi - self.lo + 1)

    def shifted(self, lo: int | None = None, hi: int | None = None) -> BasisWindow:
        return BasisWindow(self.lo if lo is None else lo, self.hi if hi is None else hi, self.offset)

    def __str__(self) -> str:
        if self.offset == 0:
            return f"[{self.lo},{self.hi}]"
        return f"[{self.lo},{self.hi}]{self.offset:+g}"


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class StateVector:
    window: BasisWindow
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        c = _frozen(self.coeffs)
        if c.shape != (self.window.size,):
            raise ValueError(f"expected {self.window.size} coefficients, got shape {c.shape}")
        if not np.all(np.isfinite(c)):
            raise ValueError("state coefficients must be finite")
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def basis(cls, window: BasisWindow, n: int) -> StateVector:
        """The number state with integer part ``n`` inside ``window``."""
        if not window.lo <= n <= window.hi:
            raise WindowError(f"|{n + window.offset:g}> is outside {window}")
        c = np.zeros(window.size)
        c[n - window.lo] = 1.0
        return cls(window, c)

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def inner(self, other: StateVector) -> float:
        """``<self|other>``; distinct sectors are orthogonal."""
        common = self.window.intersect(other.window)
        if common is None:
            return 0.0
        a = self.coeffs[self.window.index_of(common)]
        b = other.coeffs[other.window.index_of(common)]
        return float(a @ b)

    def amplitude(self, n: int) -> float:
        if not self.window.lo <= n <= self.window.hi:
            return 0.0
        return float(self.coeffs[n - self.window.lo])

    def support(self, atol: float = 0.0) -> list[int]:
        """Integer parts carrying a nonzero amplitude."""
        idx = np.flatnonzero(np.abs(self.coeffs) > atol)
        return [int(i) + self.window.lo for i in idx]

    def embed(self, window: BasisWindow) -> StateVector:
        """Re-express on ``window``; amplitudes outside it must vanish."""
        common = self.window.intersect(window)
        out = np.zeros(window.size)
        kept = np.zeros(self.window.size, dtype=bool)
        if common is not None:
            sl = self.window.index_of(common)
            out[window.index_of(common)] = self.coeffs[sl]
            kept[sl] = True
        if np.any(self.coeffs[~kept] != 0):
            raise WindowError(f"state on {self.window} has weight outside {window}")
        return StateVector(window, out)

    def __add__(self, other: StateVector) -> StateVector:
        if self.window != other.window:
            raise WindowError(f"cannot add states on {self.window} and {other.window}")
        return StateVector(self.window, self.coeffs + other.coeffs)

    def __sub__(self, other: StateVector) -> StateVector:
        return self + (-1.0) * other

    def __rmul__(self, c: float) -> StateVector:
        return StateVector(self.window, c * self.coeffs)


@dataclass(frozen=True)
class WindowedOperator:
    """Dense real matrix mapping ``domain`` into ``codomain``."""

    domain: BasisWindow
    codomain: BasisWindow
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        m = _frozen(self.matrix)
        if m.shape != (self.codomain.size, self.domain.size):
            raise ValueError(
                f"matrix shape {m.shape} does not match windows "
                f"{self.codomain} <- {self.domain}"
            )
        if not np.all(np.isfinite(m)):
            raise ValueError("operator entries must be finite")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def diagonal(cls, window: BasisWindow, entries) -> WindowedOperator:
        return cls(window, window, np.diag(np.asarray(entries, dtype=float)))

    @classmethod
    def identity(cls, window: BasisWindow) -> WindowedOperator:
        return cls(window, window, np.eye(window.size))

    @classmethod
    def zeros(cls, domain: BasisWindow, codomain: BasisWindow) -> WindowedOperator:
        return cls(domain, codomain, np.zeros((codomain.size, domain.size)))

    def adjoint(self) -> WindowedOperator:
        return WindowedOperator(self.codomain, self.domain, self.matrix.T)

    @property
    def H(self) -> WindowedOperator:  # noqa: N802
        return self.adjoint()

    def restrict(
        self, domain: BasisWindow | None = None, codomain: BasisWindow | None = None
    ) -> WindowedOperator:
        """Compress onto sub-windows of the current domain and codomain."""
        domain = self.domain if domain is None else domain
        codomain = self.codomain if codomain is None else codomain
        rows = self.codomain.index_of(codomain)
        cols = self.domain.index_of(domain)
        return WindowedOperator(domain, codomain, self.matrix[rows, cols])

    def __matmul__(self, other):
        if isinstance(other, StateVector):
            return self.apply(other)
        if not isinstance(other, WindowedOperator):
            return NotImplemented
        inner = self.domain.intersect(other.codomain)
        if inner is None:
            raise WindowError(
                f"cannot compose: codomain {other.codomain} and domain {self.domain} do not overlap"
            )
        left = self.matrix[:, self.domain.index_of(inner)]
        right = other.matrix[other.codomain.index_of(inner), :]
        return WindowedOperator(other.domain, self.codomain, left @ right)

    def apply(self, state: StateVector) -> StateVector:
        vec = state.embed(self.domain).coeffs
        return StateVector(self.codomain, self.matrix @ vec)

    def _check_same(self, other: WindowedOperator) -> None:
        if self.domain != other.domain or self.codomain != other.codomain:
            raise WindowError(
                f"window mismatch: {self.codomain}<-{self.domain} vs "
                f"{other.codomain}<-{other.domain}"
            )

    def __add__(self, other: WindowedOperator) -> WindowedOperator:
        self._check_same(other)
        return WindowedOperator(self.domain, self.codomain, self.matrix + other.matrix)

    def __sub__(self, other: WindowedOperator) -> WindowedOperator:
        self._check_same(other)
        return WindowedOperator(self.domain, self.codomain, self.matrix - other.matrix)

    def __mul__(self, c: float) -> WindowedOperator:
        return WindowedOperator(self.domain, self.codomain, float(c) * self.matrix)

    __rmul__ = __mul__

    def __neg__(self) -> WindowedOperator:
        return self * -1.0

    def max_norm(self) -> float:
        return float(np.max(np.abs(self.matrix))) if self.matrix.size else 0.0

    def column(self, n: int) -> StateVector:
        """Image of the basis state with integer part ``n``."""
        return self.apply(StateVector.basis(self.domain, n))


def common_windows(a: WindowedOperator, b: WindowedOperator) -> tuple[BasisWindow, BasisWindow]:
    dom = a.domain.intersect(b.domain)
    cod = a.codomain.intersect(b.codomain)
    if dom is None or cod is None:
        raise WindowError(
            f"no common window between {a.codomain}<-{a.domain} and {b.codomain}<-{b.domain}"
        )
    return dom, cod


def on_common_window(a: WindowedOperator, b: WindowedOperator) -> tuple[WindowedOperator, WindowedOperator]:
    dom, cod = common_windows(a, b)
    return a.restrict(dom, cod), b.restrict(dom, cod)


def _check_power(params: ModelParams, m: int) -> None:
    if int(m) != m or m < 1:
        raise ValueError(f"power must be a positive integer, got {m!r}")
    if m > params.n_max:
        raise TruncationError(f"power {m} exceeds n_max={params.n_max}")


def make_lowering(params: ModelParams, m: int) -> WindowedOperator:
    """``a^m`` as a map ``[0, n_max] -> [0, n_max - m]``."""
    _check_power(params, m)
    n_max = params.n_max
    mat = np.zeros((n_max - m + 1, n_max + 1))
    n = np.arange(m, n_max + 1)
    # sqrt(n! / (n - m)!)
    mat[n - m, n] = np.exp(0.5 * log_pochhammer(n - m + 1, m))
    return WindowedOperator(BasisWindow(0, n_max), BasisWindow(0, n_max - m), mat)


def make_raising(params: ModelParams, m: int) -> WindowedOperator:
    """``(a^dagger)^m`` as a map ``[0, n_max - m] -> [0, n_max]``."""
    return make_lowering(params, m).adjoint()


def apply_monomial(params: ModelParams, p: int, q: int) -> StateVector:
    """``a^p (a^dagger)^q |0>`` from the closed-form coefficient."""
    if p < 0 or q < 0:
        raise ValueError("p and q must be nonnegative")
    if q > params.n_max:
        raise TruncationError(f"q={q} exceeds n_max={params.n_max}")
    window = params.full_window
    if q < p:
        return StateVector(window, np.zeros(window.size))
    # q! / sqrt((q - p)!)
    log_coeff = math.fsum(math.log(j) for j in range(1, q + 1))
    log_coeff -= 0.5 * math.fsum(math.log(j) for j in range(1, q - p + 1))
    return math.exp(log_coeff) * StateVector.basis(window, q - p)


def number_op(params: ModelParams, window: BasisWindow | None = None) -> WindowedOperator:
    window = params.full_window if window is None else window
    return WindowedOperator.diagonal(window, window.occupations)


def hamiltonian(params: ModelParams, window: BasisWindow | None = None) -> WindowedOperator:
    """``(N + 1/2) omega`` on ``window`` (default: the integer sector)."""
    window = params.full_window if window is None else window
    return WindowedOperator.diagonal(window, params.energy(window.occupations))


def gamma_ratio_diag(
    params: ModelParams, shift: float, exponent: float, window: BasisWindow | None = None
) -> WindowedOperator:
    """Diagonal ``[Gamma(N + 1) / Gamma(N + shift + 1)] ** exponent``.

    Evaluated as ``exp(-exponent * log_poch(nu + 1, shift))`` so that large
    occupations never overflow.
    """
    if not shift > 0:
        raise ValueError(f"shift must be positive, got {shift!r}")
    window = params.full_window if window is None else window
    log_ratio = -log_pochhammer(window.occupations + 1.0, shift)
    return WindowedOperator.diagonal(window, np.exp(exponent * log_ratio))


def commutator(a: WindowedOperator, b: WindowedOperator) -> WindowedOperator:
    """``a b - b a`` on the largest window where both products are defined."""
    ab = a @ b
    ba = b @ a
    ab, ba = on_common_window(ab, ba)
    return ab - ba
