"""Time operators, Witt-algebra generators and fractional ladder operators on a
truncated Fock space, with numerical verification of their identities."""

__version__ = "0.1.0"

from .errors import (
    ConfigError,
    GammaDomainError,
    OracleError,
    TimeOpError,
    TruncationError,
    UnsupportedShiftError,
    WindowError,
)
from .fock import (
    BasisWindow,
    ModelParams,
    StateVector,
    WindowedOperator,
    apply_monomial,
    commutator,
    gamma_ratio_diag,
    hamiltonian,
    make_lowering,
    make_raising,
    number_op,
)
from .records import EQ_TAGS, VerificationRecord, VerificationReport

__all__ = [
    "BasisWindow",
    "ConfigError",
    "EQ_TAGS",
    "GammaDomainError",
    "ModelParams",
    "OracleError",
    "StateVector",
    "TimeOpError",
    "TruncationError",
    "UnsupportedShiftError",
    "VerificationRecord",
    "VerificationReport",
    "WindowError",
    "WindowedOperator",
    "apply_monomial",
    "commutator",
    "gamma_ratio_diag",
    "hamiltonian",
    "make_lowering",
    "make_raising",
    "number_op",
]
