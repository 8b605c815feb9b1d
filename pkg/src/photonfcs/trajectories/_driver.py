"""Preparation and aggregation around the per-trajectory jump kernels.

Everything stochastic happens inside a kernel against a counter-based Philox
stream keyed by ``(seed, trajectory index)``, so results are bit-reproducible
for a fixed seed regardless of execution order or backend, and trajectories
may be distributed across processes freely.
"""

import logging
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from ..errors import DegenerateSteadyStateError, ModelError
from ..liouville import CountingScheme, Lindbladian, build_liouvillian, steady_state

logger = logging.getLogger("photonfcs.trajectories")

#: integrator step cap: dt <= DT_RATE_FACTOR / (largest single-channel rate)
DT_RATE_FACTOR = 0.01
#: binary jump-time refinement levels; 2^-27 < 1e-8 relative time resolution.
#: The propagator ladder holds U(dt * 2^-k) for k = 0..BISECT_ITERS, computed
#: by Pade approximation, which stays accurate at exceptional points of the
#: effective Hamiltonian where eigendecomposition would break down.
BISECT_ITERS = 27


@dataclass(frozen=True)
class TrajectoryConfig:
    """Monte Carlo run settings.

    ``initial_state=None`` draws each trajectory's pure initial state from the
    eigenensemble of the steady state, which makes time-window averages of
    monitored counts unbiased estimators of the stationary rates.
    """

    t_final: float
    n_traj: int
    seed: int
    dt_max: float | None = None
    initial_state: np.ndarray | None = None

    def __post_init__(self):
        if self.t_final <= 0:
            raise ModelError("t_final must be positive")
        if self.n_traj < 1:
            raise ModelError("n_traj must be at least 1")
        if not 0 <= int(self.seed) < 2**64:
            raise ModelError("seed must fit in 64 unsigned bits")
        if self.dt_max is not None and self.dt_max <= 0:
            raise ModelError("dt_max must be positive")


@dataclass(frozen=True)
class CountSample:
    """Per-trajectory click counts: one entry per monitored subset."""

    counts: tuple
    unmonitored: int


@dataclass(frozen=True)
class KernelPlan:
    dim: int
    n_channels: int
    n_subsets: int
    dt: float
    t_final: float
    sample_initial: bool
    ladder: np.ndarray  # (BISECT_ITERS + 1, d, d): U(dt * 2^-k)
    l_ops: np.ndarray
    subset_idx: np.ndarray
    init_states: np.ndarray
    init_cdf: np.ndarray


@dataclass(frozen=True)
class EmpiricalStats:
    """Sample estimates of scaled cumulants with jackknife standard errors."""

    means: np.ndarray
    cov: np.ndarray
    se_means: np.ndarray
    se_cov: np.ndarray
    n_samples: int


def max_channel_rate(model: Lindbladian) -> float:
    """Largest eigenvalue of any L^+ L: the fastest single-channel jump rate."""
    best = 0.0
    for _, op in model.jumps:
        evals = np.linalg.eigvalsh(op.conj().T @ op)
        best = max(best, float(evals[-1].real))
    return best


def make_plan(model: Lindbladian, scheme: CountingScheme, cfg: TrajectoryConfig) -> KernelPlan:
    scheme.validate_for(model)
    d = model.dim

    rate = max_channel_rate(model)
    dt_cap = DT_RATE_FACTOR / rate if rate > 0 else cfg.t_final
    if cfg.dt_max is not None:
        if cfg.dt_max > dt_cap * (1 + 1e-12):
            raise ModelError(
                f"dt_max {cfg.dt_max} exceeds step cap {dt_cap:.3e} "
                f"(= {DT_RATE_FACTOR}/max rate)"
            )
        dt = cfg.dt_max
    else:
        dt = dt_cap
    dt = min(dt, cfg.t_final)

    h_eff = model.hamiltonian.astype(complex).copy()
    for _, op in model.jumps:
        h_eff -= 0.5j * (op.conj().T @ op)
    ladder = np.stack(
        [expm(-1j * h_eff * (dt * 0.5**k)) for k in range(BISECT_ITERS + 1)]
    )

    labels = model.labels
    subset_idx = np.full(len(labels), -1, dtype=np.int64)
    for si, subset in enumerate(scheme.subsets):
        for lbl in subset:
            subset_idx[labels.index(lbl)] = si
    l_ops = np.stack([op for _, op in model.jumps]).astype(complex)

    if cfg.initial_state is not None:
        psi0 = np.asarray(cfg.initial_state, dtype=complex).reshape(-1)
        if psi0.size != d:
            raise ModelError(f"initial state has length {psi0.size}, expected {d}")
        nrm = float(np.linalg.norm(psi0))
        if nrm <= 0:
            raise ModelError("initial state has zero norm")
        init_states = (psi0 / nrm)[None, :]
        init_cdf = np.array([1.0])
        sample_initial = False
        try:
            steady_state(build_liouvillian(model))
        except DegenerateSteadyStateError as exc:
            warnings.warn(str(exc), RuntimeWarning, stacklevel=3)
    else:
        rho = steady_state(build_liouvillian(model))  # degenerate -> raises
        probs, vecs = np.linalg.eigh(rho)
        order = np.argsort(-probs)
        probs = np.clip(probs[order], 0.0, None)
        probs = probs / probs.sum()
        init_states = np.ascontiguousarray(vecs[:, order].T)
        init_cdf = np.cumsum(probs)
        sample_initial = True

    return KernelPlan(
        dim=d,
        n_channels=len(labels),
        n_subsets=scheme.n_fields,
        dt=float(dt),
        t_final=float(cfg.t_final),
        sample_initial=sample_initial,
        ladder=np.ascontiguousarray(ladder),
        l_ops=np.ascontiguousarray(l_ops),
        subset_idx=subset_idx,
        init_states=np.ascontiguousarray(init_states),
        init_cdf=np.ascontiguousarray(init_cdf),
    )


def philox_stream(seed: int, traj_index: int) -> np.random.Philox:
    """Counter-based stream for one trajectory: key = seed << 64 | index."""
    return np.random.Philox(key=(int(seed) << 64) + int(traj_index))


def run_range(kernel, model, scheme, cfg, start, stop):
    """Run trajectories [start, stop) on the given kernel module."""
    plan = make_plan(model, scheme, cfg)
    prepared = kernel.prepare(plan)
    samples = []
    renorms = 0
    for ti in range(start, stop):
        counts, rn = kernel.run_trajectory(prepared, philox_stream(cfg.seed, ti))
        renorms += rn
        samples.append(
            CountSample(counts=tuple(counts[: plan.n_subsets]), unmonitored=counts[plan.n_subsets])
        )
    if renorms:
        logger.warning("renormalized %d vanishing-rate jump events", renorms)
    return samples


def counts_matrix(samples) -> np.ndarray:
    """(n_traj, M) int matrix of monitored counts."""
    return np.array([s.counts for s in samples], dtype=np.int64)


def _jackknife_mean_se(x: np.ndarray) -> np.ndarray:
    n = x.shape[0]
    total = x.sum(axis=0)
    loo = (total[None, :] - x) / (n - 1)
    return np.sqrt((n - 1) / n * ((loo - loo.mean(axis=0)) ** 2).sum(axis=0))


def _jackknife_cov_se(y: np.ndarray) -> np.ndarray:
    n, m = y.shape
    out = np.full((m, m), np.nan)
    if n < 3:
        return out
    total = y.sum(axis=0)
    for a in range(m):
        for b in range(m):
            xa, yb = y[:, a], y[:, b]
            sxy = float(xa @ yb)
            mx = (total[a] - xa) / (n - 1)
            my = (total[b] - yb) / (n - 1)
            cov_i = (sxy - xa * yb - (n - 1) * mx * my) / (n - 2)
            out[a, b] = math.sqrt((n - 1) / n * float(((cov_i - cov_i.mean()) ** 2).sum()))
    return out


def empirical_stats(samples, t_final: float) -> EmpiricalStats:
    """Sample means of K/t and unbiased covariance of K/sqrt(t), with jackknife SEs.

    The scaled covariance estimates the second scaled cumulants at finite t;
    jackknife covariance errors need at least 3 samples (NaN below that).
    """
    if len(samples) < 2:
        raise ModelError("need at least 2 samples")
    k = counts_matrix(samples).astype(float)
    n, m = k.shape
    x = k / t_final
    y = k / math.sqrt(t_final)
    means = x.mean(axis=0)
    dev = y - y.mean(axis=0)
    cov = (dev.T @ dev) / (n - 1)
    return EmpiricalStats(
        means=means,
        cov=cov,
        se_means=_jackknife_mean_se(x),
        se_cov=_jackknife_cov_se(y),
        n_samples=n,
    )


def dump_samples_csv(path, samples, t_final: float, seed: int):
    """Raw per-trajectory counts: traj_id, K1..KM, t_final, seed."""
    m = len(samples[0].counts) if samples else 0
    header = "traj_id," + ",".join(f"K{i + 1}" for i in range(m)) + ",t_final,seed"
    lines = [header]
    for ti, s in enumerate(samples):
        ks = ",".join(str(c) for c in s.counts)
        lines.append(f"{ti},{ks},{t_final!r},{seed}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
