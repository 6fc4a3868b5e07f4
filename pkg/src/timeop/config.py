"""Suite configuration: a line-oriented ``key = value`` file.

Lines may carry ``#`` comments; list values are comma separated.  Unknown
keys, duplicate keys and malformed values are rejected with the line number.

Example::

    omega = 1.0
    n_max = 64
    m_values = 1, 2, 3, 4, 5
    lambda_values = 0.1, 0.25, 0.5, 0.75, 0.9
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Callable

from .errors import ConfigError
from .fock import N_MAX_LIMIT, N_MAX_MIN, ModelParams
from .fractional import QuadratureOracle

DEFAULT_M = (1, 2, 3, 4, 5)
DEFAULT_LAMBDA = (0.1, 0.25, 0.5, 0.75, 0.9)
DEFAULT_SWEEP = (16, 32, 64, 128)


@dataclass(frozen=True)
class SuiteConfig:
    params: ModelParams = field(default_factory=ModelParams)
    m_values: tuple[int, ...] = DEFAULT_M
    lambda_values: tuple[float, ...] = DEFAULT_LAMBDA
    sweep_n_max: tuple[int, ...] = DEFAULT_SWEEP
    oracle: QuadratureOracle = field(default_factory=QuadratureOracle)
    out_dir: Path = Path("timeop-report")
    seed: int = 20240517
    random_states: int = 20

    def __post_init__(self) -> None:
        validate(self)

    def with_params(self, **changes: Any) -> SuiteConfig:
        return replace(self, params=replace(self.params, **changes))

    def as_dict(self) -> dict[str, Any]:
        p = self.params
        return {
            "omega": p.omega,
            "n_max": p.n_max,
            "tol_exact": p.tol_exact,
            "tol_quad": p.tol_quad,
            "m_values": list(self.m_values),
            "lambda_values": list(self.lambda_values),
            "sweep_n_max": list(self.sweep_n_max),
            "panels": self.oracle.panels,
            "fd_step": self.oracle.fd_step,
            "seed": self.seed,
            "random_states": self.random_states,
        }


def validate(cfg: SuiteConfig) -> None:
    n_max = cfg.params.n_max
    for name in ("m_values", "lambda_values", "sweep_n_max"):
        if not getattr(cfg, name):
            raise ConfigError("must not be empty", field=name)
    for m in cfg.m_values:
        if m < 1 or 4 * m > n_max:
            raise ConfigError(f"{m} outside [1, n_max/4 = {n_max // 4}]", field="m_values")
    for lam in cfg.lambda_values:
        if not 0.05 < lam < 0.95:
            raise ConfigError(f"{lam} outside (0.05, 0.95)", field="lambda_values")
    for n in cfg.sweep_n_max:
        if not N_MAX_MIN <= n <= N_MAX_LIMIT:
            raise ConfigError(f"{n} outside [{N_MAX_MIN}, {N_MAX_LIMIT}]", field="sweep_n_max")
    if cfg.random_states < 1:
        raise ConfigError("must be positive", field="random_states")


def _list(conv: Callable[[str], Any]) -> Callable[[str], tuple]:
    def parse(text: str) -> tuple:
        items = [t.strip() for t in text.split(",")]
        if any(not t for t in items):
            raise ValueError("empty list item")
        return tuple(conv(t) for t in items)

    return parse


def _int(text: str) -> int:
    return int(text, 10)


PARSERS: dict[str, Callable[[str], Any]] = {
    "omega": float,
    "n_max": _int,
    "tol_exact": float,
    "tol_quad": float,
    "m_values": _list(_int),
    "lambda_values": _list(float),
    "sweep_n_max": _list(_int),
    "panels": _int,
    "fd_step": float,
    "out_dir": Path,
    "seed": _int,
    "random_states": _int,
}

PARAM_KEYS = ("omega", "n_max", "tol_exact", "tol_quad")


def parse_config(text: str) -> dict[str, Any]:
    values: dict[str, Any] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", line=lineno)
        key, _, value = (part.strip() for part in line.partition("="))
        if key not in PARSERS:
            raise ConfigError("unknown key", line=lineno, field=key)
        if key in values:
            raise ConfigError("duplicate key", line=lineno, field=key)
        try:
            values[key] = PARSERS[key](value)
        except ValueError as exc:
            raise ConfigError(f"cannot parse {value!r} ({exc})", line=lineno, field=key) from None
    return values


def build_config(values: dict[str, Any]) -> SuiteConfig:
    defaults = ModelParams()
    pvals = {k: values.get(k, getattr(defaults, k)) for k in PARAM_KEYS}
    if not pvals["omega"] > 0:
        raise ConfigError("must be positive", field="omega")
    if not N_MAX_MIN <= pvals["n_max"] <= N_MAX_LIMIT:
        raise ConfigError(f"must lie in [{N_MAX_MIN}, {N_MAX_LIMIT}]", field="n_max")
    if not 0 < pvals["tol_exact"] < pvals["tol_quad"]:
        raise ConfigError("must satisfy 0 < tol_exact < tol_quad", field="tol_exact")
    if not pvals["tol_quad"] < 1:
        raise ConfigError("must be below 1", field="tol_quad")
    params = ModelParams(**pvals)

    oracle_defaults = QuadratureOracle()
    try:
        oracle = QuadratureOracle(
            values.get("panels", oracle_defaults.panels),
            values.get("fd_step", oracle_defaults.fd_step),
        )
    except ValueError as exc:
        name = "panels" if "panels" in str(exc) else "fd_step"
        raise ConfigError(str(exc), field=name) from None

    rest = {k: v for k, v in values.items() if k not in PARAM_KEYS + ("panels", "fd_step")}
    return SuiteConfig(params=params, oracle=oracle, **rest)


def load_config(path: str | Path | None) -> SuiteConfig:
    if path is None:
        return SuiteConfig()
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    return build_config(parse_config(text))
