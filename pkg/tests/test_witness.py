"""Moment matrix assembly, principal minors, and witness identities."""

import numpy as np
import pytest

from conftest import random_cumulant_table
from photonfcs import (
    CumulantTable,
    m3_appendix,
    m3_direct,
    moment_matrix,
    principal_minor,
    scaling_check,
)
from photonfcs.errors import DimensionError, ModelError
from photonfcs.witness import MomentMatrix, evaluate_witness


def test_moment_matrix_zero_cumulants():
    m = moment_matrix(CumulantTable(0, 0, 0, 0, 0), 3)
    expected = np.zeros((3, 3))
    expected[0, 0] = 1.0
    assert np.array_equal(m.entries, expected)


def test_moment_matrix_symmetric_table_golden():
    a, v, c = 0.3, 0.2, 0.05
    m = moment_matrix(CumulantTable(a, a, v, c, v), 3)
    expected = np.array(
        [
            [1, a, a],
            [a, v + a * a, c + a * a],
            [a, c + a * a, v + a * a],
        ]
    )
    assert np.allclose(m.entries, expected, atol=1e-15)
    assert np.array_equal(m.entries, m.entries.T)


def test_moment_matrix_index_map_ascending_order():
    m = moment_matrix(CumulantTable(0.1, 0.1, 0.1, 0.0, 0.1), 3)
    assert m.index_map == ((0, 0), (1, 0), (0, 1))


def test_moment_matrix_order_guard():
    with pytest.raises(ModelError):
        moment_matrix(CumulantTable(0, 0, 0, 0, 0), 4)


def test_principal_minor_goldens():
    m1 = moment_matrix(CumulantTable(0.2, 0.0, 0.1, 0.0, 0.0), 2)
    assert principal_minor(m1, 1) == pytest.approx(1.0)
    # [[1, 0.2], [0.2, 0.14]] -> 0.14 - 0.04 = 0.1
    assert principal_minor(m1, 2) == pytest.approx(0.1)

    hand = MomentMatrix(order=3, entries=np.array([[1, 0, 0], [0, 2, 1], [0, 1, 2]], float), index_map=())
    assert principal_minor(hand, 3) == pytest.approx(3.0)

    with pytest.raises(DimensionError):
        principal_minor(m1, 3)


def test_m2_equals_kappa20():
    rng = np.random.default_rng(31)
    for _ in range(200):
        t = random_cumulant_table(rng)
        report = evaluate_witness(t)
        scale = max(1.0, abs(t.kappa20), t.kappa10**2)
        assert abs(report.m2 - t.kappa20) <= 1e-12 * scale
        assert report.m2 >= -1e-9


def test_m3_appendix_theta_goldens():
    # theta derivatives: t1 = t2 = -0.2, t11 = 0.05, t12 = 0.01
    # cumulants flip the first-derivative signs
    t = CumulantTable(0.2, 0.2, 0.05, 0.01, 0.05)
    assert m3_appendix(t) == pytest.approx(4.0e-4, rel=1e-12)

    # t12 = 0 -> 0 regardless of the rest
    assert m3_appendix(CumulantTable(0.4, 0.1, 0.3, 0.0, 0.2)) == pytest.approx(0.0, abs=1e-15)

    # t11 == t12 -> 0
    assert m3_appendix(CumulantTable(0.1, 0.5, 0.07, 0.07, 0.4)) == pytest.approx(0.0, abs=1e-15)


def test_identity_a_appendix_simplification():
    rng = np.random.default_rng(101)
    for _ in range(1000):
        t = random_cumulant_table(rng)
        t1, t2, t11, t12, _ = t.theta_derivatives()
        scale = max(
            abs(2 * t1 * t2 * (t12 + t1 * t2)),
            (t12 + t1 * t2) ** 2,
            t1 * t1 * abs(t12 + t2 * t2),
            t2 * t2 * abs(t11 + t1 * t1),
            abs((t12 + t2 * t2) * (t11 + t1 * t1)),
            1e-30,
        )
        assert abs(m3_appendix(t) - t12 * (t11 - t12)) <= 1e-12 * scale


def test_identity_b_direct_simplification():
    rng = np.random.default_rng(202)
    for _ in range(1000):
        t = random_cumulant_table(rng)
        m10, m01, m20, m11, m02 = (
            t.kappa10,
            t.kappa01,
            t.kappa20 + t.kappa10**2,
            t.kappa11 + t.kappa10 * t.kappa01,
            t.kappa02 + t.kappa01**2,
        )
        scale = max(abs(m20 * m02), m11**2, m10**2 * m02, abs(2 * m10 * m01 * m11), m01**2 * m20, 1e-30)
        assert abs(m3_direct(t) - (t.kappa20 * t.kappa02 - t.kappa11**2)) <= 1e-12 * scale


def test_m3_direct_goldens():
    assert m3_direct(CumulantTable(0.3, 0.7, 2.0, 1.0, 2.0)) == pytest.approx(3.0, rel=1e-12)
    assert m3_direct(CumulantTable(0.1, 0.9, 0.5, 0.0, 0.5)) == pytest.approx(0.25, rel=1e-12)
    assert m3_direct(CumulantTable(0, 0, 0, 0, 0)) == pytest.approx(0.0, abs=1e-15)


def test_m3_direct_matches_cofactor_determinant():
    rng = np.random.default_rng(303)
    for _ in range(100):
        t = random_cumulant_table(rng)
        det = principal_minor(moment_matrix(t, 3), 3)
        assert m3_direct(t) == pytest.approx(det, rel=1e-10, abs=1e-14)


def test_scaling_check_goldens():
    t = CumulantTable(0.3, 0.2, 0.2, 0.05, 0.3)
    sign1, factor1 = scaling_check(t, 1.0)
    assert factor1 == pytest.approx(1.0)
    assert sign1 == (1 if m3_direct(t) > 0 else -1)

    _, factor2 = scaling_check(t, 2.0)
    assert factor2 == pytest.approx(16.0, rel=1e-9)

    signs = {scaling_check(t, tt, variant="appendix")[0] for tt in (0.5, 1.0, 2.0, 10.0)}
    assert len(signs) == 1


def test_scaling_check_both_variants_t4():
    rng = np.random.default_rng(404)
    for _ in range(50):
        t = random_cumulant_table(rng)
        for variant in ("direct", "appendix"):
            base_sign, _ = scaling_check(t, 1.0, variant=variant)
            for tt in (0.5, 2.0, 10.0):
                sign, factor = scaling_check(t, tt, variant=variant)
                assert sign == base_sign
                assert factor == pytest.approx(tt**4, rel=1e-9)


def test_scaling_check_guard():
    with pytest.raises(ModelError):
        scaling_check(CumulantTable(0, 0, 0, 0, 0), -1.0)
    with pytest.raises(ModelError):
        scaling_check(CumulantTable(0, 0, 0, 0, 0), 1.0, variant="nope")
