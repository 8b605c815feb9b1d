"""Moment-matrix non-classicality witness on time-integrated count statistics.

The matrix collects scaled moments of the bivariate count distribution in
ascending total degree, rows/columns indexed (0,0), (1,0), (0,1) at third
order, with the t = 1 time convention.

Two third-order evaluations are provided:

* :func:`m3_direct` -- determinant of the 3 x 3 moment matrix; algebraically
  the determinant of the second-cumulant block, hence nonnegative for any
  convex generating function.
* :func:`m3_appendix` -- a five-term expansion in raw theta-derivatives that
  differs from the determinant by using the mixed second derivative where the
  determinant has d^2 theta / d s2^2; it simplifies to t12 * (t11 - t12) and
  is the only variant that can go negative on physical cumulant tables.

Both are kept as first-class outputs; sweeps default to the appendix variant.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, ModelError
from .ldt import CumulantTable, cumulants_to_moments

#: total degree of the third-order determinant under the t-rescaling of moments
SCALING_EXPONENT_N3 = 4

INDEX_MAP_N3 = ((0, 0), (1, 0), (0, 1))


@dataclass(frozen=True)
class MomentMatrix:
    order: int
    entries: np.ndarray
    index_map: tuple


@dataclass(frozen=True)
class WitnessReport:
    """Second- and third-order witness values for one cumulant table."""

    m2: float
    m3_direct: float
    m3_appendix: float
    cumulants: CumulantTable
    scaling_exponent: int = SCALING_EXPONENT_N3

    def to_dict(self):
        c = self.cumulants
        return {
            "kappa10": c.kappa10,
            "kappa01": c.kappa01,
            "kappa20": c.kappa20,
            "kappa11": c.kappa11,
            "kappa02": c.kappa02,
            "m2": self.m2,
            "m3_direct": self.m3_direct,
            "m3_appendix": self.m3_appendix,
            "scaling_exponent": self.scaling_exponent,
        }


def moment_matrix(c: CumulantTable, order: int = 3) -> MomentMatrix:
    """Moment matrix of the given order (<= 3) at the t = 1 convention."""
    if order < 1:
        raise DimensionError("order must be >= 1")
    if order > 3:
        raise ModelError("unsupported order: entries beyond N=3 need higher cumulants")
    m10, m01, m20, m11, m02 = cumulants_to_moments(c)
    full = np.array(
        [
            [1.0, m10, m01],
            [m10, m20, m11],
            [m01, m11, m02],
        ]
    )
    return MomentMatrix(order=order, entries=full[:order, :order], index_map=INDEX_MAP_N3[:order])


def principal_minor(m: MomentMatrix, k: int) -> float:
    """Determinant of the leading k x k block, by cofactor expansion."""
    if not 1 <= k <= m.order:
        raise DimensionError(f"minor order {k} out of range 1..{m.order}")
    e = m.entries
    if k == 1:
        return float(e[0, 0])
    if k == 2:
        return float(e[0, 0] * e[1, 1] - e[0, 1] * e[1, 0])
    return float(
        e[0, 0] * (e[1, 1] * e[2, 2] - e[1, 2] * e[2, 1])
        - e[0, 1] * (e[1, 0] * e[2, 2] - e[1, 2] * e[2, 0])
        + e[0, 2] * (e[1, 0] * e[2, 1] - e[1, 1] * e[2, 0])
    )


def m3_appendix(c: CumulantTable) -> float:
    """Five-term third-order witness in raw theta-derivatives, term by term.

    Simplifies to t12 * (t11 - t12); the expansion is kept literal and the
    simplification is enforced by tests instead.
    """
    t1, t2, t11, t12, _t22 = c.theta_derivatives()
    term1 = 2.0 * (t1 * t2) * (t12 + t1 * t2)
    term2 = -((t12 + t1 * t2) ** 2)
    term3 = -(t1**2) * (t12 + t2**2)
    term4 = -(t2**2) * (t11 + t1**2)
    term5 = (t12 + t2**2) * (t11 + t1**2)
    return float(term1 + term2 + term3 + term4 + term5)


def m3_direct(c: CumulantTable) -> float:
    """Determinant of the full 3 x 3 moment matrix (covariance-block determinant)."""
    m10, m01, m20, m11, m02 = cumulants_to_moments(c)
    return float(
        m20 * m02 - m11**2 - m10**2 * m02 + 2.0 * m10 * m01 * m11 - m01**2 * m20
    )


def evaluate_witness(c: CumulantTable) -> WitnessReport:
    m2 = principal_minor(moment_matrix(c, 2), 2)
    return WitnessReport(m2=m2, m3_direct=m3_direct(c), m3_appendix=m3_appendix(c), cumulants=c)


def _scaled_table(c: CumulantTable, t: float) -> CumulantTable:
    """Homogeneous t-rescaling: first cumulants by t, second by t^2.

    Under this rescaling every moment-matrix element of row/column degrees
    (d_i, d_j) picks up exactly t^(d_i + d_j), which is the scaling used in
    the degree-counting argument for the witness determinants.
    """
    return CumulantTable(
        kappa10=t * c.kappa10,
        kappa01=t * c.kappa01,
        kappa20=t * t * c.kappa20,
        kappa11=t * t * c.kappa11,
        kappa02=t * t * c.kappa02,
    )


def scaling_check(c: CumulantTable, t: float, variant: str = "direct"):
    """Sign and ratio of the witness determinant after the t-rescaling.

    Returns ``(sign, factor)`` where ``factor = value(t) / value(1)``; for the
    third-order witness the factor is t**4.  Zero determinants scale to zero,
    for which the factor is reported as 1.
    """
    if t <= 0:
        raise ModelError(f"scaling time must be positive, got {t}")
    fn = {"direct": m3_direct, "appendix": m3_appendix}.get(variant)
    if fn is None:
        raise ModelError(f"unknown witness variant '{variant}'")
    base = fn(c)
    scaled = fn(_scaled_table(c, t))
    sign = 0 if scaled == 0.0 else (1 if scaled > 0.0 else -1)
    factor = 1.0 if (base == 0.0 and scaled == 0.0) else scaled / base
    return sign, float(factor)
