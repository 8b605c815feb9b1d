"""Shared fixtures: the model fleet and random-table helpers."""

import numpy as np
import pytest

from photonfcs import (
    CircuitParams,
    CoupledAtomsParams,
    CumulantTable,
    build_circuit_atoms,
    build_coupled_atoms,
    build_driven_qubit,
)


def make_fleet():
    """Named (model, scheme) pairs covering the source zoo used across tests."""
    return [
        ("driven_qubit", *build_driven_qubit(0.5, 1.0)),
        ("dark_qubit", *build_driven_qubit(0.0, 1.0)),
        ("coupled_base", *build_coupled_atoms(CoupledAtomsParams(0.5, 0.1, 1.0, 0.1))),
        ("coupled_j0", *build_coupled_atoms(CoupledAtomsParams(0.5, 0.0, 1.0, 0.1))),
        ("coupled_strong", *build_coupled_atoms(CoupledAtomsParams(1.2, 0.5, 1.0, 0.3))),
        ("circuit_5050", *build_circuit_atoms(CircuitParams(0.5, 1.0, 1.0, 0.1, np.pi / 4, 0.0))),
        ("circuit_asym", *build_circuit_atoms(CircuitParams(0.8, 1.0, 1.5, 0.05, 0.6, 1.0))),
    ]


@pytest.fixture(scope="session")
def fleet():
    return make_fleet()


def random_cumulant_table(rng) -> CumulantTable:
    """Random table satisfying the physicality invariants (PSD second block)."""
    k10, k01 = rng.uniform(0.0, 0.5, size=2)
    k20, k02 = rng.uniform(1e-6, 0.5, size=2)
    rho = rng.uniform(-0.999, 0.999)
    k11 = rho * np.sqrt(k20 * k02)
    return CumulantTable(k10, k01, k20, k11, k02).validate()
