"""Run configuration: one INI-style key/value file per run.

Sections: [model] (kind + its parameters, rates in units of gamma, angles in
radians), and per-command sections [sweep], [scgf], [rate_function],
[trajectories], [output].
"""

import configparser

from .errors import ConfigError
from .sweep import Axis, SweepSpec, model_param_names
from .trajectories import TrajectoryConfig


def load_config(path) -> configparser.ConfigParser:
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    read = parser.read(path)
    if not read:
        raise ConfigError(f"config file not found: {path}")
    return parser


_REQUIRED = object()


def _get(section, key, cast=str, default=_REQUIRED):
    if key not in section:
        if default is _REQUIRED:
            raise ConfigError(f"missing key '{key}' in section [{section.name}]")
        return default
    raw = section[key].strip()
    try:
        return cast(raw)
    except ValueError as exc:
        raise ConfigError(f"bad value for '{key}' in [{section.name}]: {raw!r}") from exc


def _require_section(cfg, name):
    if not cfg.has_section(name):
        raise ConfigError(f"missing section [{name}]")
    return cfg[name]


def parse_model(cfg):
    """Returns (kind, params dict) from [model]."""
    section = _require_section(cfg, "model")
    kind = _get(section, "kind")
    names = model_param_names(kind)
    params = {}
    for key in section:
        if key == "kind":
            continue
        if key not in names:
            raise ConfigError(f"parameter '{key}' is not valid for model kind '{kind}'")
        params[key] = _get(section, key, float)
    return kind, params


def _parse_axis(raw: str) -> Axis:
    parts = [p.strip() for p in raw.split(",")]
    if len(parts) != 4:
        raise ConfigError(f"axis must be 'name, lo, hi, n_points', got {raw!r}")
    try:
        return Axis(name=parts[0], lo=float(parts[1]), hi=float(parts[2]), n_points=int(parts[3]))
    except ValueError as exc:
        raise ConfigError(f"bad axis spec {raw!r}") from exc


def parse_sweep(cfg, kind, fixed, variant_override=None) -> SweepSpec:
    section = _require_section(cfg, "sweep")
    axis1 = _parse_axis(_get(section, "axis1"))
    axis2 = _parse_axis(_get(section, "axis2"))
    variant = variant_override or _get(section, "variant", default="appendix")
    fd_step = _get(section, "fd_step", float, default=1e-3)
    fixed = {k: v for k, v in fixed.items() if k not in (axis1.name, axis2.name)}
    return SweepSpec(kind=kind, fixed=fixed, axis1=axis1, axis2=axis2, variant=variant, fd_step=fd_step)


def parse_tilt_fields(cfg, n_fields) -> list:
    section = _require_section(cfg, "scgf")
    raw = _get(section, "s")
    try:
        s = [float(p) for p in raw.split(",")]
    except ValueError as exc:
        raise ConfigError(f"bad tilt fields {raw!r}") from exc
    if len(s) != n_fields:
        raise ConfigError(f"model has {n_fields} counting fields but s has {len(s)} entries")
    return s


def parse_trajectories(cfg, seed_override=None) -> tuple:
    """Returns (TrajectoryConfig, dump_samples flag)."""
    section = _require_section(cfg, "trajectories")
    seed = seed_override if seed_override is not None else _get(section, "seed", int, default=0)
    cfg_out = TrajectoryConfig(
        t_final=_get(section, "t_final", float),
        n_traj=_get(section, "n_traj", int),
        seed=int(seed),
        dt_max=_get(section, "dt_max", float, default=None),
    )
    dump = _get(section, "dump_samples", str, default="false").lower() in ("1", "true", "yes")
    return cfg_out, dump


def parse_rate_function(cfg) -> dict:
    section = _require_section(cfg, "rate_function")
    bracket_raw = _get(section, "bracket", default="-10, 20")
    parts = [p.strip() for p in bracket_raw.split(",")]
    if len(parts) != 2:
        raise ConfigError(f"bracket must be 'lo, hi', got {bracket_raw!r}")
    return {
        "x_min": _get(section, "x_min", float),
        "x_max": _get(section, "x_max", float),
        "n_points": _get(section, "n_points", int),
        "bracket": (float(parts[0]), float(parts[1])),
        "channel": _get(section, "channel", default=None),
    }


def output_prefix(cfg, default):
    if cfg.has_section("output"):
        return _get(cfg["output"], "prefix", default=default)
    return default
