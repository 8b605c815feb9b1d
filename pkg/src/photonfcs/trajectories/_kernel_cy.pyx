# cython: boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled quantum-jump kernel (primary backend).

Arithmetic mirror of ``_kernel_py``: the loops below perform the same
floating-point operations in the same order, complex products use the plain
(ac - bd, ad + bc) formula, and jump times come from composing the same
dyadic propagator ladder, so the inner loop is free of transcendental calls.
Uniform deviates come straight from the bit generator's ``next_double``,
matching ``numpy.random.Generator.random``.  The build disables FMA
contraction to keep results bit-compatible with the fallback.
"""

from cpython.pycapsule cimport PyCapsule_GetPointer, PyCapsule_IsValid
from libc.math cimport sqrt

import numpy as np

from numpy.random cimport bitgen_t

ctypedef double complex c128

cdef const char *CAPSULE_NAME = "BitGenerator"


def prepare(plan):
    """Pack a kernel plan into contiguous arrays plus reusable scratch."""
    d = int(plan.dim)
    n_channels = int(plan.n_channels)
    arrays = (
        np.ascontiguousarray(plan.ladder, dtype=np.complex128),
        np.ascontiguousarray(plan.l_ops, dtype=np.complex128),
        np.ascontiguousarray(plan.subset_idx, dtype=np.int64),
        np.ascontiguousarray(plan.init_states, dtype=np.complex128),
        np.ascontiguousarray(plan.init_cdf, dtype=np.float64),
    )
    scratch = (
        np.empty(d, dtype=np.complex128),                # psi
        np.empty(d, dtype=np.complex128),                # candidate / jump state
        np.empty((n_channels, d), dtype=np.complex128),  # channel amplitudes
        np.empty(n_channels, dtype=np.float64),          # channel weights
    )
    meta = (
        d,
        n_channels,
        int(plan.n_subsets),
        float(plan.dt),
        float(plan.t_final),
        bool(plan.sample_initial),
    )
    return (meta, arrays, scratch)


cdef inline void _matvec(c128[:, :, ::1] mats, Py_ssize_t level, c128 *vec,
                         c128 *out, Py_ssize_t d) noexcept:
    cdef Py_ssize_t i, k
    cdef c128 acc
    for i in range(d):
        acc = 0
        for k in range(d):
            acc = acc + mats[level, i, k] * vec[k]
        out[i] = acc


cdef inline double _norm2(c128 *vec, Py_ssize_t d) noexcept:
    cdef Py_ssize_t i
    cdef double acc = 0.0
    cdef c128 z
    for i in range(d):
        z = vec[i]
        acc = acc + (z.real * z.real + z.imag * z.imag)
    return acc


def run_trajectory(prepared, bitgen):
    """One trajectory; returns (counts list of length n_subsets+1, renorms)."""
    meta, arrays, scratch = prepared
    cdef Py_ssize_t d = meta[0]
    cdef Py_ssize_t n_channels = meta[1]
    cdef Py_ssize_t n_subsets = meta[2]
    cdef double dt = meta[3]
    cdef double t_final = meta[4]
    cdef bint sample_initial = meta[5]

    cdef c128[:, :, ::1] ladder = arrays[0]
    cdef c128[:, :, ::1] l_ops = arrays[1]
    cdef long long[::1] subset_idx = arrays[2]
    cdef c128[:, ::1] init_states = arrays[3]
    cdef double[::1] init_cdf = arrays[4]
    cdef Py_ssize_t top = ladder.shape[0] - 1

    cdef c128[::1] psi_mv = scratch[0]
    cdef c128[::1] cand_mv = scratch[1]
    cdef c128[:, ::1] amps_mv = scratch[2]
    cdef double[::1] weights_mv = scratch[3]
    cdef c128 *psi = &psi_mv[0]
    cdef c128 *cand = &cand_mv[0]
    cdef double *weights = &weights_mv[0]

    capsule = bitgen.capsule
    if not PyCapsule_IsValid(capsule, CAPSULE_NAME):
        raise ValueError("invalid bit generator capsule")
    cdef bitgen_t *rng = <bitgen_t *> PyCapsule_GetPointer(capsule, CAPSULE_NAME)

    cdef Py_ssize_t i, k2, c, pick, init_row, level, kk
    cdef double t, rem, width, r, u0, sub, tau, total, wgt, u2
    cdef double target, acc_w, nrm
    cdef c128 z, acc
    cdef int renorms = 0

    counts_arr = np.zeros(n_subsets + 1, dtype=np.int64)
    cdef long long[::1] counts = counts_arr

    init_row = 0
    if sample_initial:
        u0 = rng.next_double(rng.state)
        init_row = init_cdf.shape[0] - 1
        for i in range(init_cdf.shape[0]):
            if u0 < init_cdf[i]:
                init_row = i
                break
    for i in range(d):
        psi[i] = init_states[init_row, i]

    t = 0.0
    r = rng.next_double(rng.state)
    while True:
        rem = t_final - t
        if rem <= 0.0:
            break
        # widest dyadic window dt * 2^-k that fits into the remaining time
        level = 0
        width = dt
        while width > rem:
            level += 1
            width = width * 0.5
        if level > top:
            break  # leftover below the time resolution
        _matvec(ladder, level, psi, cand, d)
        if _norm2(cand, d) > r:
            for i in range(d):
                psi[i] = cand[i]
            t = t + width
            continue

        # threshold crossed inside (t, t + width]: binary window refinement
        tau = 0.0
        kk = level
        sub = width
        while kk < top:
            kk += 1
            sub = sub * 0.5
            _matvec(ladder, kk, psi, cand, d)
            if _norm2(cand, d) > r:
                for i in range(d):
                    psi[i] = cand[i]
                tau = tau + sub
        _matvec(ladder, top, psi, cand, d)  # cand = state at the jump
        tau = tau + sub

        total = 0.0
        for c in range(n_channels):
            for i in range(d):
                acc = 0
                for k2 in range(d):
                    acc = acc + l_ops[c, i, k2] * cand[k2]
                amps_mv[c, i] = acc
            wgt = 0.0
            for i in range(d):
                z = amps_mv[c, i]
                wgt = wgt + (z.real * z.real + z.imag * z.imag)
            weights[c] = wgt
            total = total + wgt
        t = t + tau
        if total <= 0.0:
            nrm = sqrt(_norm2(cand, d))
            for i in range(d):
                z = cand[i]
                psi[i] = z.real / nrm + 1j * (z.imag / nrm)
            renorms += 1
            r = rng.next_double(rng.state)
            continue
        u2 = rng.next_double(rng.state)
        target = u2 * total
        pick = n_channels - 1
        acc_w = 0.0
        for c in range(n_channels):
            acc_w = acc_w + weights[c]
            if target < acc_w:
                pick = c
                break
        nrm = sqrt(weights[pick])
        for i in range(d):
            z = amps_mv[pick, i]
            psi[i] = z.real / nrm + 1j * (z.imag / nrm)
        if subset_idx[pick] >= 0:
            counts[subset_idx[pick]] += 1
        else:
            counts[n_subsets] += 1
        r = rng.next_double(rng.state)
    return [int(counts[i]) for i in range(n_subsets + 1)], renorms
