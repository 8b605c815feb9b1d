"""Quantum-jump Monte Carlo unraveling with per-channel click counting.

The per-trajectory inner loop exists twice: a Cython extension (fast path)
and a pure-Python mirror with identical arithmetic.  The compiled kernel is
selected at import when available; set ``PHOTONFCS_PURE_PYTHON=1`` to force
the fallback.  Both backends draw from the same counter-based Philox streams
and produce identical counts for a fixed seed.
"""

import os

from ._driver import (
    BISECT_ITERS,
    DT_RATE_FACTOR,
    CountSample,
    EmpiricalStats,
    KernelPlan,
    TrajectoryConfig,
    counts_matrix,
    dump_samples_csv,
    empirical_stats,
    make_plan,
    max_channel_rate,
    philox_stream,
    run_range,
)

_FORCE_PY = os.environ.get("PHOTONFCS_PURE_PYTHON", "0").lower() not in ("", "0", "false")

if _FORCE_PY:
    from . import _kernel_py as _kernel

    BACKEND = "python"
else:
    try:
        from . import _kernel_cy as _kernel

        BACKEND = "cython"
    except ImportError:
        from . import _kernel_py as _kernel

        BACKEND = "python"


def backend() -> str:
    """Name of the active kernel backend: 'cython' or 'python'."""
    return BACKEND


def available_backends() -> dict:
    """All importable kernel modules keyed by name."""
    from . import _kernel_py

    out = {"python": _kernel_py}
    try:
        from . import _kernel_cy

        out["cython"] = _kernel_cy
    except ImportError:
        pass
    return out


def simulate_counts(model, scheme, cfg: TrajectoryConfig, kernel=None):
    """n_traj independent trajectories; returns a list of CountSample.

    Deterministic in (model, scheme, cfg): trajectory ti draws from the
    Philox stream keyed by (cfg.seed, ti) on either backend.
    """
    kern = kernel if kernel is not None else _kernel
    return run_range(kern, model, scheme, cfg, 0, cfg.n_traj)


__all__ = [
    "BACKEND",
    "BISECT_ITERS",
    "DT_RATE_FACTOR",
    "CountSample",
    "EmpiricalStats",
    "KernelPlan",
    "TrajectoryConfig",
    "available_backends",
    "backend",
    "counts_matrix",
    "dump_samples_csv",
    "empirical_stats",
    "make_plan",
    "max_channel_rate",
    "philox_stream",
    "run_range",
    "simulate_counts",
]
