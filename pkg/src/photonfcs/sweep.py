"""Two-dimensional parameter sweeps of the witness with CSV/JSON/SVG outputs.

Grid points are pure-function evaluations, optionally farmed out to a process
pool; rows are always emitted in grid order (axis1 outer, axis2 inner), so
outputs are byte-identical run to run for a fixed configuration.
"""

import dataclasses
import json
import subprocess
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import __version__
from .errors import ConfigError, PhotonFCSError
from .ldt import cumulants_fd
from .models import (
    CircuitParams,
    CoupledAtomsParams,
    build_circuit_atoms,
    build_coupled_atoms,
    build_driven_qubit,
)
from .witness import evaluate_witness

CSV_SCHEMA = "photonfcs sweep csv schema v1"

MODEL_KINDS = ("coupled_atoms", "circuit", "driven_qubit")

_PARAM_FIELDS = {
    # "r" is reflectivity sin(zeta)^2, accepted as an alias axis for the circuit
    "coupled_atoms": tuple(f.name for f in dataclasses.fields(CoupledAtomsParams)),
    "circuit": tuple(f.name for f in dataclasses.fields(CircuitParams)) + ("r",),
    "driven_qubit": ("omega", "gamma"),
}


def build_model(kind: str, params: dict):
    """Model + default counting scheme for a CLI model kind."""
    if kind == "coupled_atoms":
        return build_coupled_atoms(CoupledAtomsParams(**params))
    if kind == "circuit":
        params = dict(params)
        if "r" in params:
            if "zeta" in params:
                raise ConfigError("give either 'r' or 'zeta' for the circuit, not both")
            r = params.pop("r")
            if not 0.0 <= r <= 1.0:
                raise ConfigError(f"reflectivity r must lie in [0, 1], got {r}")
            params["zeta"] = float(np.arcsin(np.sqrt(r)))
        return build_circuit_atoms(CircuitParams(**params))
    if kind == "driven_qubit":
        return build_driven_qubit(**params)
    raise ConfigError(f"unknown model kind '{kind}' (expected one of {MODEL_KINDS})")


def model_param_names(kind: str):
    try:
        return _PARAM_FIELDS[kind]
    except KeyError:
        raise ConfigError(f"unknown model kind '{kind}'") from None


@dataclass(frozen=True)
class Axis:
    name: str
    lo: float
    hi: float
    n_points: int

    def __post_init__(self):
        # n_points = 1 gives a degenerate single-value axis (point evaluation)
        if self.n_points < 1:
            raise ConfigError(f"axis '{self.name}' needs n_points >= 1")
        if self.n_points == 1 and self.lo != self.hi:
            raise ConfigError(f"single-point axis '{self.name}' needs lo == hi")
        if not self.lo <= self.hi:
            raise ConfigError(f"axis '{self.name}' has lo > hi")

    @property
    def values(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.n_points)


@dataclass(frozen=True)
class SweepSpec:
    kind: str
    fixed: dict
    axis1: Axis
    axis2: Axis
    variant: str = "appendix"
    fd_step: float = 1e-3

    def __post_init__(self):
        if self.kind not in MODEL_KINDS:
            raise ConfigError(f"unknown model kind '{self.kind}'")
        if self.variant not in ("appendix", "direct", "both"):
            raise ConfigError(f"unknown witness variant '{self.variant}'")
        names = model_param_names(self.kind)
        for ax in (self.axis1, self.axis2):
            if ax.name not in names:
                raise ConfigError(f"axis parameter '{ax.name}' not valid for '{self.kind}'")
        if self.axis1.name == self.axis2.name:
            raise ConfigError("axis parameters must be distinct")
        for key in self.fixed:
            if key not in names:
                raise ConfigError(f"fixed parameter '{key}' not valid for '{self.kind}'")


_ROW_FIELDS = (
    "kappa10",
    "kappa01",
    "kappa20",
    "kappa11",
    "kappa02",
    "m2",
    "m3_direct",
    "m3_appendix",
)


@dataclass
class SweepResult:
    spec: SweepSpec
    axis1_values: np.ndarray
    axis2_values: np.ndarray
    rows: list  # dicts in grid order
    n_failures: int
    wall_time_s: float

    def grid(self, fieldname: str) -> np.ndarray:
        """(n1, n2) array of one row field; NaN where a point failed."""
        n1, n2 = len(self.axis1_values), len(self.axis2_values)
        out = np.full((n1, n2), np.nan)
        for idx, row in enumerate(self.rows):
            if row["status"] == "ok":
                out[idx // n2, idx % n2] = row[fieldname]
        return out


def _evaluate_point(args):
    kind, params, fd_step = args
    try:
        model, scheme = build_model(kind, params)
        table = cumulants_fd(model, scheme, step=fd_step)
        report = evaluate_witness(table)
        row = {"status": "ok"}
        row.update({k: v for k, v in report.to_dict().items() if k in _ROW_FIELDS})
        return row
    except PhotonFCSError as exc:
        return {"status": f"error:{type(exc).__name__}", **{k: None for k in _ROW_FIELDS}}
    except np.linalg.LinAlgError:
        return {"status": "error:LinAlgError", **{k: None for k in _ROW_FIELDS}}


def run_sweep(spec: SweepSpec, threads: int = 1) -> SweepResult:
    """Evaluate cumulants and witness on the full grid.

    Individual solver failures flag their row and the sweep continues; the
    caller decides what failure fraction is fatal (the CLI allows 10%).
    """
    t0 = time.perf_counter()
    jobs = []
    for v1 in spec.axis1.values:
        for v2 in spec.axis2.values:
            params = dict(spec.fixed)
            params[spec.axis1.name] = float(v1)
            params[spec.axis2.name] = float(v2)
            jobs.append((spec.kind, params, spec.fd_step))
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(_evaluate_point, jobs, chunksize=max(1, len(jobs) // (4 * threads))))
    else:
        rows = [_evaluate_point(j) for j in jobs]
    n_fail = sum(1 for r in rows if r["status"] != "ok")
    return SweepResult(
        spec=spec,
        axis1_values=spec.axis1.values,
        axis2_values=spec.axis2.values,
        rows=rows,
        n_failures=n_fail,
        wall_time_s=time.perf_counter() - t0,
    )


def _fmt(x) -> str:
    if x is None:
        return ""
    return repr(float(x))


def write_sweep_csv(result: SweepResult, path):
    """One row per grid point, shortest-roundtrip floats, stable column order."""
    spec = result.spec
    header = [spec.axis1.name, spec.axis2.name, *_ROW_FIELDS, "status"]
    lines = [f"# {CSV_SCHEMA}", ",".join(header)]
    n2 = len(result.axis2_values)
    for idx, row in enumerate(result.rows):
        v1 = result.axis1_values[idx // n2]
        v2 = result.axis2_values[idx % n2]
        cells = [_fmt(v1), _fmt(v2)]
        cells += [_fmt(row[k]) for k in _ROW_FIELDS]
        cells.append(row["status"])
        lines.append(",".join(cells))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def git_hash() -> str:
    try:
        out = subprocess.run(
            ["git", "rev-parse", "HEAD"],
            capture_output=True,
            text=True,
            timeout=5,
            check=False,
        )
        return out.stdout.strip() or "unknown"
    except OSError:
        return "unknown"


def run_manifest(command: str, parameters: dict, wall_time_s: float, seed=None, extra=None) -> dict:
    """JSON-serializable record of one run; the only place timestamps appear."""
    from .trajectories import backend

    manifest = {
        "tool": "photonfcs",
        "version": __version__,
        "git_hash": git_hash(),
        "command": command,
        "parameters": parameters,
        "seed": seed,
        "trajectory_backend": backend(),
        "wall_time_s": wall_time_s,
        "timestamp_utc": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
    }
    if extra:
        manifest.update(extra)
    return manifest


def write_manifest(manifest: dict, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def spec_to_jsonable(spec: SweepSpec) -> dict:
    return {
        "kind": spec.kind,
        "fixed": dict(spec.fixed),
        "axis1": dataclasses.asdict(spec.axis1),
        "axis2": dataclasses.asdict(spec.axis2),
        "variant": spec.variant,
        "fd_step": spec.fd_step,
    }
