"""SCGF evaluation, cumulants, moments, and the rate function."""

import numpy as np
import pytest

from photonfcs import (
    CountingScheme,
    CoupledAtomsParams,
    CumulantTable,
    build_coupled_atoms,
    build_driven_qubit,
    build_liouvillian,
    build_tilted,
    cumulants_fd,
    cumulants_to_moments,
    first_cumulants_analytic,
    hellmann_feynman_rates,
    rate_function,
    scgf,
)
from photonfcs.errors import BracketError, GuardRangeError, ModelError
from photonfcs.liouville import _jump_superop, leading_eigenvalue


# ------------------------------------------------------------------- scgf


def test_scgf_zero_everywhere_on_fleet(fleet):
    for name, model, scheme in fleet:
        assert abs(scgf(model, scheme, [0.0] * scheme.n_fields)) <= 1e-10, name


def test_scgf_dark_qubit_zero_for_all_s():
    model, scheme = build_driven_qubit(0.0, 1.0)
    for s in (-5.0, -1.0, 0.7, 10.0, 20.0):
        assert abs(scgf(model, scheme, [s])) <= 1e-12


def test_scgf_nonincreasing_in_s():
    model, scheme = build_driven_qubit(0.5, 1.0)
    grid = [0.0, 0.25, 0.5, 1.0, 2.0, 4.0]
    vals = [scgf(model, scheme, [s]) for s in grid]
    assert all(b <= a + 1e-12 for a, b in zip(vals, vals[1:]))


def test_scgf_monotone_grid_two_fields(fleet):
    grid = [0.0, 0.5, 1.0, 2.0]
    for name, model, scheme in fleet:
        if scheme.n_fields != 2:
            continue
        for other in (0.0, 1.0):
            v1 = [scgf(model, scheme, [s, other]) for s in grid]
            v2 = [scgf(model, scheme, [other, s]) for s in grid]
            for vals in (v1, v2):
                assert all(b <= a + 1e-12 for a, b in zip(vals, vals[1:])), name


def test_scgf_midpoint_convexity_random_pairs(fleet):
    rng = np.random.default_rng(17)
    for name, model, scheme in fleet:
        m = scheme.n_fields
        for _ in range(40):
            s1 = rng.uniform(-1.0, 1.0, size=m)
            s2 = rng.uniform(-1.0, 1.0, size=m)
            mid = scgf(model, scheme, 0.5 * (s1 + s2))
            avg = 0.5 * scgf(model, scheme, s1) + 0.5 * scgf(model, scheme, s2)
            assert mid <= avg + 1e-9, name


def test_scgf_exchange_symmetry_coupled():
    model, scheme = build_coupled_atoms(CoupledAtomsParams(0.6, 0.25, 1.0, 0.2))
    rng = np.random.default_rng(23)
    for _ in range(10):
        a, b = rng.uniform(-1.5, 1.5, size=2)
        assert scgf(model, scheme, [a, b]) == pytest.approx(
            scgf(model, scheme, [b, a]), abs=1e-10
        )


# ------------------------------------------------------------ cumulants_fd


def test_driven_qubit_rate_both_routes():
    model, scheme = build_driven_qubit(0.5, 1.0)
    analytic = first_cumulants_analytic(model, scheme)
    assert analytic[0] == pytest.approx(1.0 / 6.0, abs=1e-10)
    table = cumulants_fd(model, scheme)
    assert table.kappa10 == pytest.approx(1.0 / 6.0, abs=1e-6)


def test_dark_qubit_all_cumulants_zero():
    model, scheme = build_driven_qubit(0.0, 1.0)
    t = cumulants_fd(model, scheme)
    for v in (t.kappa10, t.kappa01, t.kappa20, t.kappa11, t.kappa02):
        assert abs(v) <= 1e-10


def test_symmetric_uncoupled_atoms_equal_rates():
    model, scheme = build_coupled_atoms(CoupledAtomsParams(0.5, 0.0, 1.0, 0.1))
    t = cumulants_fd(model, scheme)
    assert t.kappa10 == pytest.approx(t.kappa01, abs=1e-9)


def test_fd_step_guard():
    model, scheme = build_driven_qubit(0.5, 1.0)
    with pytest.raises(GuardRangeError):
        cumulants_fd(model, scheme, step=1e-6)
    with pytest.raises(GuardRangeError):
        cumulants_fd(model, scheme, step=0.5)


def test_fd_matches_analytic_first_cumulants(fleet):
    for name, model, scheme in fleet:
        table = cumulants_fd(model, scheme)
        analytic = first_cumulants_analytic(model, scheme)
        fd = [table.kappa10, table.kappa01][: scheme.n_fields]
        for a, b in zip(fd, analytic):
            assert a == pytest.approx(b, abs=1e-6), name


def test_cumulant_table_invariants_on_fleet(fleet):
    for name, model, scheme in fleet:
        table = cumulants_fd(model, scheme)
        table.validate()  # raises on violation


def test_hellmann_feynman_matches_analytic(fleet):
    for name, model, scheme in fleet:
        hf = hellmann_feynman_rates(model, scheme, [0.0] * scheme.n_fields)
        analytic = first_cumulants_analytic(model, scheme)
        assert np.allclose(hf, analytic, atol=1e-8), name


# ---------------------------------------------------------- rate_function


def test_rate_function_zero_at_mean():
    model, scheme = build_driven_qubit(0.5, 1.0)
    sample = rate_function(model, scheme, 1.0 / 6.0)
    assert abs(sample.phi) <= 1e-6
    assert abs(sample.argmin_s) <= 1e-6


def test_rate_function_dark_origin():
    model, scheme = build_driven_qubit(0.0, 1.0)
    sample = rate_function(model, scheme, 0.0)
    assert abs(sample.phi) <= 1e-9


def test_rate_function_no_click_limit_matches_stripped_generator():
    # phi(0) equals the leading eigenvalue of the generator with the monitored
    # jump sandwich removed entirely (s -> infinity limit).  At omega = gamma/2
    # that generator is defective and theta approaches the limit only as
    # exp(-s/4), so the edge value at s = 20 carries an O(1e-3) tail; away from
    # the exceptional point the agreement is sharp.
    for omega, tol in ((1.5, 1e-6), (0.5, 5e-3)):
        model, scheme = build_driven_qubit(omega, 1.0)
        sample = rate_function(model, scheme, 0.0, bracket=(-10.0, 20.0))
        gen_inf = build_liouvillian(model) - _jump_superop(model.jump("D1"))
        lam = leading_eigenvalue(gen_inf)
        assert sample.phi == pytest.approx(lam.real, abs=tol)
        assert sample.phi < 0.0


def test_rate_function_nonpositive_and_bracket_error():
    model, scheme = build_driven_qubit(0.5, 1.0)
    for x in (0.05, 1.0 / 6.0, 0.3):
        assert rate_function(model, scheme, x).phi <= 1e-12
    with pytest.raises(BracketError):
        rate_function(model, scheme, 0.0, bracket=(-1.0, 0.5))


def test_rate_function_requires_single_field():
    model, scheme = build_coupled_atoms(CoupledAtomsParams(0.5, 0.1, 1.0, 0.1))
    with pytest.raises(ModelError):
        rate_function(model, scheme, 0.1)
    single = CountingScheme(subsets=(("D1",),))
    sample = rate_function(model, single, 0.0)
    assert sample.phi <= 0.0


def test_fd_stencil_against_analytic_function():
    # separable exponential: every mixed derivative at 0 is 0.3^i * 0.15^j
    from photonfcs.ldt import _fd_derivative

    f = lambda a, b: np.exp(0.3 * a) * np.exp(0.15 * b)
    for orders in ((1, 0), (0, 1), (2, 0), (1, 1), (0, 2), (3, 0), (2, 1)):
        exact = 0.3 ** orders[0] * 0.15 ** orders[1]
        got = _fd_derivative(f, orders, 1e-2)
        assert got == pytest.approx(exact, rel=1e-7), orders


def test_generic_stencil_consistency_and_higher_order():
    model, scheme = build_driven_qubit(0.5, 1.0)
    from photonfcs import scaled_cumulant

    table = cumulants_fd(model, scheme)
    assert scaled_cumulant(model, scheme, (1,)) == pytest.approx(table.kappa10, abs=1e-10)
    assert scaled_cumulant(model, scheme, (2,)) == pytest.approx(table.kappa20, abs=1e-10)
    # third scaled cumulant: finite, and zero for the dark model
    k3 = scaled_cumulant(model, scheme, (3,), step=5e-3)
    assert np.isfinite(k3)
    dark, dark_scheme = build_driven_qubit(0.0, 1.0)
    assert scaled_cumulant(dark, dark_scheme, (3,), step=5e-3) == pytest.approx(0.0, abs=1e-8)

    two, two_scheme = build_coupled_atoms(CoupledAtomsParams(0.5, 0.0, 1.0, 0.0))
    # mixed third cumulant vanishes for independent channels
    assert scaled_cumulant(two, two_scheme, (2, 1), step=5e-3) == pytest.approx(0.0, abs=1e-6)


# ----------------------------------------------------- cumulants_to_moments


def test_moment_conversion_goldens():
    t = CumulantTable(0.2, 0.0, 0.1, 0.0, 0.0)
    m10, m01, m20, m11, m02 = cumulants_to_moments(t)
    assert m20 == pytest.approx(0.14)

    zero = CumulantTable(0, 0, 0, 0, 0)
    assert cumulants_to_moments(zero) == (0, 0, 0, 0, 0)

    t2 = CumulantTable(0.2, 0.2, 0.0, 0.05, 0.0)
    assert cumulants_to_moments(t2)[3] == pytest.approx(0.09)


def test_cumulant_table_validation():
    with pytest.raises(ModelError):
        CumulantTable(-1e-3, 0.0, 0.1, 0.0, 0.1).validate()
    with pytest.raises(ModelError):
        CumulantTable(0.1, 0.1, 0.1, 0.5, 0.1).validate()  # breaks convexity
