import json

import pytest

from utils.config import ENV_OUT_DIR, ENV_SEED, deep_merge, dump_settings, load_defaults, load_settings
from utils.errors import (
    AlcpError,
    BlowUp,
    CheckFailure,
    ConfigError,
    NumericalError,
    RouteMismatch,
    exit_code_for,
)


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    monkeypatch.delenv(ENV_SEED, raising=False)
    monkeypatch.delenv(ENV_OUT_DIR, raising=False)


def test_defaults_load_and_validate():
    cfg = load_settings()
    assert cfg["seed"] == 7
    assert cfg["lattice"]["flow"] == [0, 1]
    assert cfg["verify"]["points"] == 100
    assert cfg == load_defaults()


def test_deep_merge_keeps_untouched_keys():
    base = {"lattice": {"n": 64, "dt": 1e-3}, "seed": 7}
    merged = deep_merge(base, {"lattice": {"n": 8}})
    assert merged == {"lattice": {"n": 8, "dt": 1e-3}, "seed": 7}
    assert base["lattice"]["n"] == 64


def test_json_config_file(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"lattice": {"dt": 1e-4}, "tolerances": {"frobenius.wdvv": 1e-12}}))
    cfg = load_settings(path)
    assert cfg["lattice"]["dt"] == 1e-4
    assert cfg["tolerances"]["frobenius.wdvv"] == 1e-12
    assert cfg["lattice"]["n"] == 64


def test_env_and_overrides(monkeypatch):
    monkeypatch.setenv(ENV_SEED, "11")
    monkeypatch.setenv(ENV_OUT_DIR, "elsewhere")
    cfg = load_settings()
    assert cfg["seed"] == 11 and cfg["out_dir"] == "elsewhere"
    assert load_settings(overrides={"seed": 3})["seed"] == 3


def test_bad_env_seed(monkeypatch):
    monkeypatch.setenv(ENV_SEED, "seven")
    with pytest.raises(ConfigError):
        load_settings()


def test_malformed_file_reports_position(tmp_path):
    path = tmp_path / "bad.yaml"
    path.write_text("lattice:\n  n: [1, 2\n")
    with pytest.raises(ConfigError, match="line"):
        load_settings(path)
    broken = tmp_path / "bad.json"
    broken.write_text('{"seed": }')
    with pytest.raises(ConfigError, match="line 1"):
        load_settings(broken)


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        load_settings(tmp_path / "missing.yaml")


@pytest.mark.parametrize("overrides", [
    {"lattice": {"dt": 0}},
    {"lattice": {"n": 2.5}},
    {"lattice": {"boundary": "open"}},
    {"lattice": {"flow": [3, 1]}},
    {"lattice": {"conserved": [[0, 1]]}},
    {"hydro": {"derivative": "chebyshev"}},
    {"hydro": {"epsilons": []}},
    {"verify": {"points": 0}},
    {"periods": {"points": [[0.1]]}},
    {"tolerances": {"lattice.factorization": -1.0}},
    {"seed": "seven"},
])
def test_validation_rejects(overrides):
    with pytest.raises(ConfigError):
        load_settings(overrides=overrides)


def test_dump_is_sorted_json():
    cfg = load_settings()
    text = dump_settings(cfg)
    assert json.loads(text) == cfg
    assert text == json.dumps(cfg, sort_keys=True, indent=2)


def test_exit_codes():
    assert exit_code_for(ConfigError("x")) == 2
    assert exit_code_for(BlowUp("x")) == 3
    assert exit_code_for(RouteMismatch("route", 1.0, 0.1)) == 1
    assert exit_code_for(ZeroDivisionError()) == 3
    assert issubclass(BlowUp, NumericalError) and issubclass(RouteMismatch, CheckFailure)
    assert issubclass(CheckFailure, AlcpError)
