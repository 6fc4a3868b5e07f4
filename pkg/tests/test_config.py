from pathlib import Path

import pytest

from timeop.config import SuiteConfig, build_config, load_config, parse_config
from timeop.errors import ConfigError


def test_empty_file_gives_defaults(tmp_path):
    path = tmp_path / "empty.cfg"
    path.write_text("")
    assert load_config(path) == SuiteConfig()


def test_comments_and_blank_lines(tmp_path):
    path = tmp_path / "c.cfg"
    path.write_text("# header\n\nomega = 2.0  # trailing\n")
    assert load_config(path).params.omega == 2.0


def test_n_max_below_minimum():
    with pytest.raises(ConfigError, match="n_max"):
        build_config(parse_config("n_max = 4"))


def test_single_lambda():
    cfg = build_config(parse_config("lambda_values = 0.5"))
    assert cfg.lambda_values == (0.5,)


def test_lists_and_paths():
    cfg = build_config(parse_config("m_values = 1, 2\nsweep_n_max = 16,64\nout_dir = somewhere"))
    assert cfg.m_values == (1, 2) and cfg.sweep_n_max == (16, 64) and cfg.out_dir == Path("somewhere")


@pytest.mark.parametrize("text,fragment", [
    ("colour = red", "line 1: colour: unknown key"),
    ("omega = 1\nomega = 2", "line 2: omega: duplicate key"),
    ("n_max = sixty", "line 1: n_max: cannot parse"),
    ("just words", "line 1: expected"),
    ("m_values = 1,,2", "line 1: m_values"),
])
def test_parse_errors_carry_line(text, fragment):
    with pytest.raises(ConfigError) as info:
        parse_config(text)
    assert fragment in str(info.value)


@pytest.mark.parametrize("text,field", [
    ("lambda_values = 0.97", "lambda_values"),
    ("m_values = 20", "m_values"),
    ("omega = 0", "omega"),
    ("tol_exact = 1e-5\ntol_quad = 1e-6", "tol_exact"),
    ("panels = 8", "panels"),
    ("fd_step = 1", "fd_step"),
    ("sweep_n_max = 4", "sweep_n_max"),
    ("random_states = 0", "random_states"),
])
def test_validation_names_field(text, field):
    with pytest.raises(ConfigError, match=field):
        build_config(parse_config(text))


def test_missing_file_is_config_error(tmp_path):
    with pytest.raises(ConfigError, match="cannot read"):
        load_config(tmp_path / "absent.cfg")


def test_round_trip_through_dict():
    cfg = SuiteConfig()
    lines = []
    for key, value in cfg.as_dict().items():
        lines.append(f"{key} = {', '.join(map(str, value)) if isinstance(value, list) else value}")
    assert build_config(parse_config("\n".join(lines))) == cfg
