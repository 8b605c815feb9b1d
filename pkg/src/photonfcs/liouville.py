"""Lindblad generators, their tilted deformations, and dense spectral solves.

Vectorization is column-stacking: the superoperator of ``rho -> A rho B`` is
``kron(B.T, A)``.  The generator built here is

    d rho / dt = -i [H, rho] + sum_mu ( L_mu rho L_mu^+
                                        - (1/2) {L_mu^+ L_mu, rho} )

and the tilted deformation multiplies the jump-sandwich term of every
monitored channel in subset ``i`` by ``exp(-s_i)``.  The leading eigenvalue of
the tilted generator is the scaled cumulant generating function of the
time-integrated counts.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from .algebra import MAX_DIM, as_operator, frobenius_norm
from .errors import (
    DegenerateSteadyStateError,
    DimensionError,
    GuardRangeError,
    ModelError,
    SolverError,
)

HERMITICITY_TOL = 1e-10
TILT_GUARD = 20.0
DEGENERACY_TOL = 1e-9


@dataclass(frozen=True)
class Lindbladian:
    """Hamiltonian plus labelled jump operators (rates absorbed, hbar = 1)."""

    hamiltonian: np.ndarray
    jumps: tuple  # of (label, operator) pairs

    def __post_init__(self):
        h = as_operator(self.hamiltonian)
        if h.shape[0] > MAX_DIM:
            raise DimensionError(
                f"dimension {h.shape[0]} exceeds the dense-storage cap {MAX_DIM}"
            )
        if frobenius_norm(h - h.conj().T) > HERMITICITY_TOL:
            raise ModelError("Hamiltonian is not Hermitian within 1e-10")
        jumps = tuple((str(lbl), as_operator(op)) for lbl, op in self.jumps)
        for lbl, op in jumps:
            if op.shape != h.shape:
                raise DimensionError(f"jump '{lbl}' has dimension {op.shape[0]} != {h.shape[0]}")
        labels = [lbl for lbl, _ in jumps]
        if len(set(labels)) != len(labels):
            raise ModelError(f"duplicate jump labels: {labels}")
        object.__setattr__(self, "hamiltonian", h)
        object.__setattr__(self, "jumps", jumps)

    @property
    def dim(self) -> int:
        return self.hamiltonian.shape[0]

    @property
    def labels(self) -> tuple:
        return tuple(lbl for lbl, _ in self.jumps)

    def jump(self, label: str) -> np.ndarray:
        for lbl, op in self.jumps:
            if lbl == label:
                return op
        raise KeyError(label)


@dataclass(frozen=True)
class CountingScheme:
    """Ordered monitored subsets of jump labels; conjugate field s_i per subset."""

    subsets: tuple  # of tuples of labels

    def __post_init__(self):
        subsets = tuple(tuple(str(l) for l in sub) for sub in self.subsets)
        if len(subsets) < 1:
            raise ModelError("counting scheme needs at least one subset")
        seen = set()
        for sub in subsets:
            for lbl in sub:
                if lbl in seen:
                    raise ModelError(f"label '{lbl}' appears in more than one subset")
                seen.add(lbl)
        object.__setattr__(self, "subsets", subsets)

    @property
    def n_fields(self) -> int:
        return len(self.subsets)

    def validate_for(self, model: Lindbladian):
        unknown = [l for sub in self.subsets for l in sub if l not in model.labels]
        if unknown:
            raise ModelError(f"scheme references unknown jump labels {unknown}")


@dataclass(frozen=True)
class SpectralResult:
    """Leading eigenpair of a generator, biorthogonally normalized <l|r> = 1."""

    eigenvalue: complex
    right: np.ndarray
    left: np.ndarray
    gap: float = field(default=np.nan)


def vectorize(rho) -> np.ndarray:
    """Column-stack a d x d matrix into a length d^2 vector."""
    return as_operator(rho).reshape(-1, order="F")


def devectorize(v) -> np.ndarray:
    """Inverse of :func:`vectorize`."""
    v = np.asarray(v, dtype=complex).reshape(-1)
    d = int(round(np.sqrt(v.size)))
    if d * d != v.size:
        raise DimensionError(f"vector of length {v.size} is not a stacked square matrix")
    return v.reshape(d, d, order="F")


def _spre_spost(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix of rho -> a rho b in the column-stacked representation."""
    return np.kron(b.T, a)


def _jump_superop(op: np.ndarray) -> np.ndarray:
    """Matrix of the sandwich rho -> L rho L^+."""
    return np.kron(op.conj(), op)


def build_liouvillian(model: Lindbladian) -> np.ndarray:
    """Dense matrix of the Lindblad generator acting on vectorized states."""
    d = model.dim
    eye = np.eye(d, dtype=complex)
    h = model.hamiltonian
    gen = -1j * (_spre_spost(h, eye) - _spre_spost(eye, h))
    for _, op in model.jumps:
        ada = op.conj().T @ op
        gen += _jump_superop(op)
        gen -= 0.5 * (_spre_spost(ada, eye) + _spre_spost(eye, ada))
    return gen


def build_tilted(model: Lindbladian, scheme: CountingScheme, s) -> np.ndarray:
    """Tilted generator: monitored jump sandwiches weighted by exp(-s_i).

    ``s = 0`` reproduces :func:`build_liouvillian` entrywise (the deformation
    term vanishes identically rather than being rebuilt).
    """
    s = np.atleast_1d(np.asarray(s, dtype=float))
    if s.shape != (scheme.n_fields,):
        raise DimensionError(f"expected {scheme.n_fields} tilt fields, got {s.shape}")
    if np.any(np.abs(s) > TILT_GUARD):
        raise GuardRangeError(f"tilt fields must satisfy |s| <= {TILT_GUARD}, got {s}")
    scheme.validate_for(model)
    gen = build_liouvillian(model)
    for si, subset in zip(s, scheme.subsets):
        weight = 1.0 - np.exp(-si)
        if weight == 0.0:
            continue
        for lbl in subset:
            gen -= weight * _jump_superop(model.jump(lbl))
    return gen


def adjoint_identity_residual(gen) -> float:
    """Frobenius norm of the adjoint generator applied to the identity.

    Zero (to rounding) iff the generator is trace preserving; a tilt of any
    active channel makes it strictly positive.
    """
    gen = np.asarray(gen, dtype=complex)
    d2 = gen.shape[0]
    d = int(round(np.sqrt(d2)))
    ident = np.eye(d, dtype=complex)
    return frobenius_norm(devectorize(gen.conj().T @ vectorize(ident)))


def _eig_sorted(gen):
    try:
        w, v = np.linalg.eig(gen)
    except np.linalg.LinAlgError as exc:  # QR iteration failed to converge
        raise SolverError(f"dense eigensolver did not converge: {exc}") from exc
    order = np.argsort(-w.real)
    return w[order], v[:, order]


def leading_eigenvalue(gen) -> complex:
    """Eigenvalue of largest real part, without eigenvectors (sweep fast path)."""
    gen = np.asarray(gen, dtype=complex)
    try:
        w = np.linalg.eigvals(gen)
    except np.linalg.LinAlgError as exc:
        raise SolverError(f"dense eigensolver did not converge: {exc}") from exc
    order = np.argsort(-w.real)
    w = w[order]
    lam = w[0]
    if w.size > 1 and w[0].real - w[1].real <= DEGENERACY_TOL:
        tied = np.nonzero(w.real >= lam.real - DEGENERACY_TOL)[0]
        lam = w[tied[np.argmax(np.abs(w[tied].imag))]]
    return complex(lam)


def leading_eigenpair(gen) -> SpectralResult:
    """Eigenvalue of largest real part with right/left eigenvectors, <l|r> = 1.

    The left vector comes from the eigendecomposition of the transposed
    generator; the right vector's phase is fixed so its first significant
    component is real positive.
    """
    gen = np.asarray(gen, dtype=complex)
    w, v = _eig_sorted(gen)
    lam = w[0]
    gap = float(w[0].real - w[1].real) if w.size > 1 else np.inf
    if w.size > 1 and gap <= DEGENERACY_TOL:
        # tie on the real part: prefer larger |Im| for definiteness
        tied = np.nonzero(w.real >= lam.real - DEGENERACY_TOL)[0]
        pick = tied[np.argmax(np.abs(w[tied].imag))]
        lam = w[pick]
        right = v[:, pick]
        warnings.warn(
            f"near-degenerate leading eigenvalues (gap {gap:.2e}); "
            "tie broken by max |Im|",
            RuntimeWarning,
            stacklevel=2,
        )
    else:
        right = v[:, 0]

    # phase fix: first component above threshold made real positive
    idx = int(np.argmax(np.abs(right) > 1e-12 * np.max(np.abs(right))))
    phase = right[idx] / abs(right[idx])
    right = right / phase

    wt, vt = _eig_sorted(gen.T)
    k = int(np.argmin(np.abs(wt - lam)))
    if abs(wt[k] - lam) > 1e-6 * max(1.0, abs(lam)):
        raise SolverError(
            f"left/right eigenvalue mismatch: {wt[k]} vs {lam}",
            residual=abs(wt[k] - lam),
        )
    left = vt[:, k].conj()
    ip = np.vdot(left, right)
    if abs(ip) < 1e-12:
        raise SolverError("left/right eigenvectors are numerically orthogonal")
    left = left / np.conj(ip)

    nrm = frobenius_norm(gen)
    residual = float(np.linalg.norm(gen @ right - lam * right))
    if residual > 1e-8 * max(nrm, 1.0):
        raise SolverError(
            f"eigenpair residual {residual:.3e} exceeds tolerance", residual=residual
        )
    return SpectralResult(eigenvalue=complex(lam), right=right, left=left, gap=gap)


def steady_state(gen) -> np.ndarray:
    """Unit-trace Hermitian PSD null state of an untilted generator.

    Raises :class:`DegenerateSteadyStateError` when the zero eigenvalue is not
    simple, and :class:`SolverError` when fed a generator that is not trace
    preserving (e.g. a tilted one).
    """
    gen = np.asarray(gen, dtype=complex)
    if adjoint_identity_residual(gen) > 1e-8 * max(frobenius_norm(gen), 1.0):
        raise SolverError("generator is not trace preserving; was it tilted?")
    w, v = _eig_sorted(gen)
    mult = int(np.sum(np.abs(w) <= DEGENERACY_TOL))
    if mult > 1:
        raise DegenerateSteadyStateError(mult)
    if mult == 0 or abs(w[0]) > 1e-7:
        raise SolverError(f"no zero eigenvalue found (leading {w[0]})")
    rho = devectorize(v[:, 0])
    rho = 0.5 * (rho + rho.conj().T)
    tr = float(np.trace(rho).real)
    if abs(tr) < 1e-12:
        raise SolverError("null vector has vanishing trace")
    rho = rho / tr
    evals = np.linalg.eigvalsh(rho)
    if evals.min() < -1e-9:
        raise SolverError(f"steady state not PSD: min eigenvalue {evals.min():.3e}")
    return rho
