"""Log-domain Gamma ratios.

Only ``scipy.special.gammaln`` is used for the non-integer remainder of a
shift; integer parts of a shift are summed as logarithms with ``math.fsum`` so
that factorial-like ratios never overflow and stay exact to rounding.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import gammaln

from .errors import GammaDomainError


def _log_poch_scalar(x: float, d: float) -> float:
    # log Gamma(x + d) - log Gamma(x), with x > 0 and x + d > 0
    if d < 0:
        return -_log_poch_scalar(x + d, -d)
    k = int(math.floor(d))
    f = d - k
    total = 0.0
    if f > 0.0:
        total = float(gammaln(x + f) - gammaln(x))
    if k:
        base = x + f
        total = math.fsum([total] + [math.log(base + j) for j in range(k)])
    return total


def log_pochhammer(x, d: float) -> np.ndarray:
    """Return ``log Gamma(x + d) - log Gamma(x)`` elementwise.

    ``x`` may be a scalar or an array; ``d`` is a real scalar shift.  Raises
    :class:`GammaDomainError` unless every ``x`` and ``x + d`` is positive.
    """
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(arr <= 0) or np.any(arr + d <= 0):
        raise GammaDomainError(
            f"Gamma arguments must be positive (x={arr.min()!r}, shift={d!r})"
        )
    return np.array([_log_poch_scalar(float(v), float(d)) for v in arr])
