"""Exception types raised by the library."""


class PhotonFCSError(Exception):
    """Base class for library errors."""


class DimensionError(PhotonFCSError, ValueError):
    """Operator or vector dimensions are inconsistent."""


class ModelError(PhotonFCSError, ValueError):
    """A model definition violates its invariants."""


class GuardRangeError(PhotonFCSError, ValueError):
    """A tilt field or finite-difference step lies outside the guarded range."""


class SolverError(PhotonFCSError, RuntimeError):
    """A spectral solve failed or produced an invalid result."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class DegenerateSteadyStateError(SolverError):
    """The zero eigenvalue of the generator is not simple."""

    def __init__(self, multiplicity):
        super().__init__(
            f"degenerate steady state: zero-eigenvalue multiplicity {multiplicity}"
        )
        self.multiplicity = multiplicity


class BracketError(PhotonFCSError, ValueError):
    """A minimization bracket does not contain the minimum."""


class ConfigError(PhotonFCSError, ValueError):
    """A run configuration file is invalid."""
