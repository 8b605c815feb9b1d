"""Spectral vs Monte Carlo cross-validation of the counting cumulants.

Spectral means come from the steady state, second cumulants from finite
differences of the generating function; the trajectory ensemble must agree
within three jackknife standard errors entry by entry.  A small absolute
floor keeps exactly-zero comparisons (dark models) meaningful.
"""

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .ldt import cumulants_fd, first_cumulants_analytic
from .trajectories import TrajectoryConfig, empirical_stats, run_range, simulate_counts

N_SIGMA = 3.0
ABS_FLOOR = 1e-9


@dataclass(frozen=True)
class ValidationEntry:
    name: str
    spectral: float
    empirical: float
    std_error: float
    passed: bool

    def to_dict(self):
        return {
            "name": self.name,
            "spectral": self.spectral,
            "empirical": self.empirical,
            "std_error": self.std_error,
            "passed": self.passed,
        }


@dataclass(frozen=True)
class ValidationReport:
    entries: tuple
    passed: bool
    n_traj: int
    t_final: float
    seed: int
    wall_time_s: float

    def to_dict(self):
        return {
            "entries": [e.to_dict() for e in self.entries],
            "passed": self.passed,
            "n_traj": self.n_traj,
            "t_final": self.t_final,
            "seed": self.seed,
            "wall_time_s": self.wall_time_s,
            "criterion": f"|spectral - empirical| <= {N_SIGMA} * SE + {ABS_FLOOR}",
        }


def _parallel_samples(model, scheme, cfg, threads):
    from . import trajectories as traj

    if threads <= 1:
        return simulate_counts(model, scheme, cfg)
    bounds = [
        (cfg.n_traj * k // threads, cfg.n_traj * (k + 1) // threads) for k in range(threads)
    ]
    jobs = [(traj._kernel.__name__, model, scheme, cfg, lo, hi) for lo, hi in bounds]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        blocks = list(pool.map(_run_block, jobs))
    out = []
    for block in blocks:
        out.extend(block)
    return out


def _run_block(args):
    import importlib

    kernel_name, model, scheme, cfg, lo, hi = args
    kernel = importlib.import_module(kernel_name)
    return run_range(kernel, model, scheme, cfg, lo, hi)


def run_validate(
    model,
    scheme,
    cfg: TrajectoryConfig,
    mc_model=None,
    mc_scheme=None,
    threads: int = 1,
):
    """Compare spectral cumulants of (model, scheme) against a trajectory run.

    ``mc_model``/``mc_scheme`` default to the spectral pair; passing a
    different model is a fault-injection hook (a mismatch must FAIL).
    Returns (report, samples).
    """
    t0 = time.perf_counter()
    mc_model = model if mc_model is None else mc_model
    mc_scheme = scheme if mc_scheme is None else mc_scheme

    k1 = first_cumulants_analytic(model, scheme)
    table = cumulants_fd(model, scheme)
    m = scheme.n_fields
    spectral_cov = {
        (0, 0): table.kappa20,
        (0, 1): table.kappa11,
        (1, 1): table.kappa02,
    }

    samples = _parallel_samples(mc_model, mc_scheme, cfg, threads)
    stats = empirical_stats(samples, cfg.t_final)

    entries = []
    for i in range(m):
        tol = N_SIGMA * stats.se_means[i] + ABS_FLOOR
        diff = abs(k1[i] - stats.means[i])
        entries.append(
            ValidationEntry(
                name=f"kappa1[{i + 1}]",
                spectral=float(k1[i]),
                empirical=float(stats.means[i]),
                std_error=float(stats.se_means[i]),
                passed=bool(diff <= tol),
            )
        )
    for i in range(m):
        for j in range(i, m):
            spec_val = spectral_cov.get((i, j))
            if spec_val is None:
                continue
            tol = N_SIGMA * stats.se_cov[i, j] + ABS_FLOOR
            diff = abs(spec_val - stats.cov[i, j])
            entries.append(
                ValidationEntry(
                    name=f"kappa2[{i + 1}{j + 1}]",
                    spectral=float(spec_val),
                    empirical=float(stats.cov[i, j]),
                    std_error=float(stats.se_cov[i, j]),
                    passed=bool(diff <= tol),
                )
            )
    report = ValidationReport(
        entries=tuple(entries),
        passed=all(e.passed for e in entries),
        n_traj=cfg.n_traj,
        t_final=cfg.t_final,
        seed=cfg.seed,
        wall_time_s=time.perf_counter() - t0,
    )
    return report, samples
