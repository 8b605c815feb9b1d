#!/usr/bin/env python3
"""Benchmark the compiled jump kernel against the pure-Python fallback.

Runs the same seeded workloads on every available backend, checks that the
counts agree bit for bit, and reports throughput.

    python benchmarks/bench_trajectories.py [--n-traj N] [--t-final T]
"""

import argparse
import time

from photonfcs import (
    CircuitParams,
    CoupledAtomsParams,
    TrajectoryConfig,
    build_circuit_atoms,
    build_coupled_atoms,
    build_driven_qubit,
)
from photonfcs.trajectories import available_backends, simulate_counts

WORKLOADS = [
    ("driven_qubit", lambda: build_driven_qubit(0.5, 1.0)),
    ("coupled_atoms", lambda: build_coupled_atoms(CoupledAtomsParams(0.5, 0.1, 1.0, 0.1))),
    ("circuit_5050", lambda: build_circuit_atoms(CircuitParams(0.5, 1.0, 1.0, 0.1, 0.7853981633974483, 0.0))),
]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n-traj", type=int, default=200)
    parser.add_argument("--t-final", type=float, default=50.0)
    parser.add_argument("--seed", type=int, default=1)
    args = parser.parse_args()

    backends = available_backends()
    print(f"backends: {', '.join(backends)}")
    print(f"workload: n_traj={args.n_traj}, t_final={args.t_final}\n")
    header = f"{'model':<15}" + "".join(f"{name + ' [s]':>14}" for name in backends) + f"{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for label, builder in WORKLOADS:
        model, scheme = builder()
        cfg = TrajectoryConfig(t_final=args.t_final, n_traj=args.n_traj, seed=args.seed)
        timings, results = {}, {}
        for name, kernel in backends.items():
            t0 = time.perf_counter()
            results[name] = simulate_counts(model, scheme, cfg, kernel=kernel)
            timings[name] = time.perf_counter() - t0
        firsts = list(results.values())
        if not all(r == firsts[0] for r in firsts):
            raise SystemExit(f"BACKEND MISMATCH on {label}: counts differ between backends")
        row = f"{label:<15}" + "".join(f"{timings[name]:>14.3f}" for name in backends)
        if "cython" in timings and "python" in timings:
            row += f"{timings['python'] / timings['cython']:>9.1f}x"
        print(row)
    print("\ncounts agree bit-for-bit across backends")


if __name__ == "__main__":
    main()
