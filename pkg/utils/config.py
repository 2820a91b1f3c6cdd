import copy
import json
import os
from pathlib import Path

import yaml
from dotenv import load_dotenv

from utils.errors import ConfigError


BASE_DIR = Path(__file__).resolve().parent.parent
DEFAULTS_PATH = BASE_DIR / "config" / "settings.yaml"

ENV_SEED = "ALCP1_SEED"
ENV_OUT_DIR = "ALCP1_OUT_DIR"


# ---------------- LOADING ----------------

def _read_document(path: Path) -> dict:
    try:
        text = path.read_text()
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e

    # YAML 1.1 reads exponent floats without a dot (1e-12) as strings
    try:
        doc = json.loads(text) if path.suffix == ".json" else yaml.safe_load(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"malformed config {path} (line {e.lineno}, column {e.colno}): {e.msg}") from e
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        where = f" (line {mark.line + 1}, column {mark.column + 1})" if mark else ""
        raise ConfigError(f"malformed config {path}{where}: {e}") from e

    if doc is None:
        return {}
    if not isinstance(doc, dict):
        raise ConfigError(f"config {path} must be a mapping at top level")
    return doc


def deep_merge(base: dict, extra: dict) -> dict:
    out = copy.deepcopy(base)
    for key, value in extra.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = deep_merge(out[key], value)
        else:
            out[key] = copy.deepcopy(value)
    return out


def load_defaults() -> dict:
    return _read_document(DEFAULTS_PATH)


def load_settings(path: str | Path | None = None, overrides: dict | None = None) -> dict:
    """
    Defaults <- config file (JSON or YAML) <- .env <- explicit overrides.
    """
    load_dotenv(dotenv_path=BASE_DIR / ".env")

    cfg = load_defaults()
    if path is not None:
        cfg = deep_merge(cfg, _read_document(Path(path)))

    if os.getenv(ENV_SEED):
        try:
            cfg["seed"] = int(os.environ[ENV_SEED])
        except ValueError as e:
            raise ConfigError(f"{ENV_SEED} must be an integer") from e
    if os.getenv(ENV_OUT_DIR):
        cfg["out_dir"] = os.environ[ENV_OUT_DIR]

    if overrides:
        cfg = deep_merge(cfg, overrides)

    validate(cfg)
    return cfg


# ---------------- VALIDATION ----------------

def _positive(cfg: dict, section: str, key: str, kind=float):
    value = cfg.get(section, {}).get(key)
    if not isinstance(value, (int, float)) or isinstance(value, bool) or value <= 0:
        raise ConfigError(f"{section}.{key} must be a positive number, got {value!r}")
    if kind is int and int(value) != value:
        raise ConfigError(f"{section}.{key} must be an integer, got {value!r}")


def _valid_flow(flow) -> bool:
    if not isinstance(flow, (list, tuple)) or len(flow) != 2 or not all(isinstance(c, int) for c in flow):
        return False
    k, i = flow
    return (k, i) == (0, 1) or (k in (1, 2) and i >= 1)


def validate(cfg: dict):
    if not isinstance(cfg.get("seed"), int) or isinstance(cfg.get("seed"), bool):
        raise ConfigError(f"seed must be an integer, got {cfg.get('seed')!r}")

    for key in ("dt", "t_final", "amplitude"):
        _positive(cfg, "lattice", key)
    for key in ("n", "buffer", "record_every"):
        _positive(cfg, "lattice", key, int)
    if cfg["lattice"].get("boundary") not in ("periodic", "window", "semi_infinite"):
        raise ConfigError(f"lattice.boundary unknown: {cfg['lattice'].get('boundary')!r}")

    for key in ("length", "t_final", "cfl", "max_gradient", "compare_time", "lattice_dt"):
        _positive(cfg, "hydro", key)
    _positive(cfg, "hydro", "grid", int)
    if cfg["hydro"].get("derivative") not in ("spectral", "fd4"):
        raise ConfigError(f"hydro.derivative unknown: {cfg['hydro'].get('derivative')!r}")
    if not cfg["hydro"].get("epsilons") or any(e <= 0 for e in cfg["hydro"]["epsilons"]):
        raise ConfigError("hydro.epsilons must be a non-empty list of positive numbers")

    for section in ("lattice", "hydro"):
        if not _valid_flow(cfg[section].get("flow")):
            raise ConfigError(f"{section}.flow must be [0, 1] or [k, i] with k in 1, 2 and i >= 1, "
                              f"got {cfg[section].get('flow')!r}")
    for pair in cfg["lattice"].get("conserved") or []:
        if not _valid_flow(pair) or tuple(pair) == (0, 1):
            raise ConfigError(f"lattice.conserved entries must be [k, i], got {pair!r}")

    _positive(cfg, "verify", "points", int)

    periods = cfg.get("periods") or {}
    if not all(isinstance(z, (int, float)) for z in periods.get("z") or []):
        raise ConfigError("periods.z must be a list of numbers")
    for pt in periods.get("points") or []:
        if not isinstance(pt, (list, tuple)) or len(pt) != 2:
            raise ConfigError(f"periods.points entries must be [v, w], got {pt!r}")

    for name, tol in (cfg.get("tolerances") or {}).items():
        if not isinstance(tol, (int, float)) or tol <= 0:
            raise ConfigError(f"tolerance for {name} must be > 0, got {tol!r}")


def dump_settings(cfg: dict) -> str:
    return json.dumps(cfg, sort_keys=True, indent=2)
