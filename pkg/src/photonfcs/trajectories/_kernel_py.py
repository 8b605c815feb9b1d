"""Pure-Python quantum-jump kernel (fallback backend).

Operation-for-operation mirror of the compiled kernel: identical arithmetic
order, identical RNG draw sequence, and jump-time refinement by composing a
ladder of exact dyadic propagators U(dt * 2^-k), so no transcendental calls
appear in the inner loop at all.  A fixed seed therefore produces the same
counts on either backend; a cross-backend equality test enforces this.

Between jumps the unnormalized state evolves under the exact propagator of
the effective (non-Hermitian) Hamiltonian; a jump fires when the squared norm
crosses a pre-drawn uniform threshold, with the crossing time bracketed to
dt * 2^-(n_levels-1) by binary window halving.
"""

import math

import numpy as np


class _Prepared:
    __slots__ = (
        "dim",
        "n_channels",
        "n_subsets",
        "n_levels",
        "dt",
        "t_final",
        "sample_initial",
        "ladder",
        "l_ops",
        "subset_idx",
        "init_states",
        "init_cdf",
    )


def prepare(plan):
    """Convert a kernel plan's arrays to nested Python lists of complex."""
    p = _Prepared()
    p.dim = int(plan.dim)
    p.n_channels = int(plan.n_channels)
    p.n_subsets = int(plan.n_subsets)
    p.n_levels = int(plan.ladder.shape[0])
    p.dt = float(plan.dt)
    p.t_final = float(plan.t_final)
    p.sample_initial = bool(plan.sample_initial)
    p.ladder = plan.ladder.tolist()
    p.l_ops = plan.l_ops.tolist()
    p.subset_idx = [int(x) for x in plan.subset_idx]
    p.init_states = plan.init_states.tolist()
    p.init_cdf = [float(x) for x in plan.init_cdf]
    return p


def _matvec(m, vec, d):
    out = [0j] * d
    for i in range(d):
        row = m[i]
        acc = 0j
        for k in range(d):
            acc = acc + row[k] * vec[k]
        out[i] = acc
    return out


def _norm2(vec, d):
    acc = 0.0
    for i in range(d):
        z = vec[i]
        acc = acc + (z.real * z.real + z.imag * z.imag)
    return acc


def _pick_cdf(cdf, u):
    for i in range(len(cdf)):
        if u < cdf[i]:
            return i
    return len(cdf) - 1


def run_trajectory(p, bitgen):
    """One trajectory; returns (counts list of length n_subsets+1, renorms).

    counts[:n_subsets] are monitored-subset click counts, counts[-1] the total
    over unmonitored channels.
    """
    next_double = np.random.Generator(bitgen).random
    d = p.dim
    top = p.n_levels - 1  # finest level index
    if p.sample_initial:
        u0 = next_double()
        psi = list(p.init_states[_pick_cdf(p.init_cdf, u0)])
    else:
        psi = list(p.init_states[0])
    counts = [0] * (p.n_subsets + 1)
    renorms = 0
    t = 0.0
    t_final = p.t_final
    r = next_double()
    while True:
        rem = t_final - t
        if rem <= 0.0:
            break
        # widest dyadic window dt * 2^-k that fits into the remaining time
        k = 0
        width = p.dt
        while width > rem:
            k += 1
            width = width * 0.5
        if k > top:
            break  # leftover below the time resolution
        cand = _matvec(p.ladder[k], psi, d)
        if _norm2(cand, d) > r:
            psi = cand
            t = t + width
            continue

        # threshold crossed inside (t, t + width]: binary window refinement
        tau = 0.0
        kk = k
        sub = width
        while kk < top:
            kk += 1
            sub = sub * 0.5
            trial = _matvec(p.ladder[kk], psi, d)
            if _norm2(trial, d) > r:
                psi = trial
                tau = tau + sub
        at_jump = _matvec(p.ladder[top], psi, d)
        tau = tau + sub

        total = 0.0
        weights = [0.0] * p.n_channels
        amps = [None] * p.n_channels
        for c in range(p.n_channels):
            a = _matvec(p.l_ops[c], at_jump, d)
            wgt = _norm2(a, d)
            amps[c] = a
            weights[c] = wgt
            total = total + wgt
        t = t + tau
        if total <= 0.0:
            # vanishing total jump rate at the crossing: renormalize, keep going
            nrm = math.sqrt(_norm2(at_jump, d))
            psi = [complex(z.real / nrm, z.imag / nrm) for z in at_jump]
            renorms += 1
            r = next_double()
            continue
        u2 = next_double()
        target = u2 * total
        pick = p.n_channels - 1
        acc = 0.0
        for c in range(p.n_channels):
            acc = acc + weights[c]
            if target < acc:
                pick = c
                break
        nrm = math.sqrt(weights[pick])
        src = amps[pick]
        psi = [complex(z.real / nrm, z.imag / nrm) for z in src]
        sub_idx = p.subset_idx[pick]
        if sub_idx >= 0:
            counts[sub_idx] += 1
        else:
            counts[p.n_subsets] += 1
        r = next_double()
    return counts, renorms
