"""Dense complex matrix algebra and composite-system operator construction.

Conventions fixed here and relied on everywhere else:

* local qubit basis: index 0 = ground ``|g>``, index 1 = excited ``|e>``;
* ``sigma_minus = |g><e|``, ``sigma_z = diag(-1, +1)`` in ``(|g>, |e>)`` order;
* composite index is big-endian over sites (site 1 most significant).
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError

IDENTITY_2 = np.eye(2, dtype=complex)
SIGMA_MINUS = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
SIGMA_PLUS = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)
SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Z = np.diag([-1.0, 1.0]).astype(complex)


def as_operator(op) -> np.ndarray:
    """Validate a dense square finite complex matrix and return it as complex128."""
    a = np.asarray(op, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"operator must be square, got shape {a.shape}")
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise ValueError("operator has non-finite entries")
    return a


#: dense storage throughout: Hilbert dimensions beyond this (superoperators
#: beyond 4096 x 4096) are out of scope
MAX_DIM = 64


@dataclass(frozen=True)
class SiteSpec:
    """Composite system of ``n_sites`` identical sites of dimension ``local_dim``."""

    n_sites: int
    local_dim: int = 2

    def __post_init__(self):
        if self.n_sites < 1 or self.local_dim < 1:
            raise DimensionError("n_sites and local_dim must be positive")
        if self.local_dim**self.n_sites > MAX_DIM:
            raise DimensionError(
                f"total dimension {self.local_dim**self.n_sites} exceeds the "
                f"dense-storage cap {MAX_DIM}"
            )

    @property
    def dim(self) -> int:
        return self.local_dim**self.n_sites


def kron_embed(op, site: int, spec: SiteSpec) -> np.ndarray:
    """Embed a single-site operator at 1-based position ``site``: I x .. x op x .. x I."""
    a = as_operator(op)
    if a.shape[0] != spec.local_dim:
        raise DimensionError(
            f"operator dimension {a.shape[0]} != local dimension {spec.local_dim}"
        )
    if not 1 <= site <= spec.n_sites:
        raise DimensionError(f"site {site} out of range 1..{spec.n_sites}")
    out = np.ones((1, 1), dtype=complex)
    for k in range(1, spec.n_sites + 1):
        out = np.kron(out, a if k == site else np.eye(spec.local_dim, dtype=complex))
    return out


def adjoint(op) -> np.ndarray:
    """Conjugate transpose."""
    return as_operator(op).conj().T


def expectation(op, rho) -> complex:
    """Tr(op rho)."""
    a, r = as_operator(op), as_operator(rho)
    if a.shape != r.shape:
        raise DimensionError(f"dimension mismatch: {a.shape} vs {r.shape}")
    return complex(np.trace(a @ r))


def frobenius_norm(op) -> float:
    return float(np.linalg.norm(np.asarray(op), "fro"))
