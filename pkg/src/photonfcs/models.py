"""Benchmark photon sources: coupled driven atoms and a beam-splitter circuit.

All rates are in units of the single-atom decay rate gamma; angles are in
radians.  Dephasing is modelled as a sigma_z jump of amplitude sqrt(gamma_phi)
per atom, which damps single-atom coherences at rate 2 gamma_phi.  Dephasing
channels carry labels "phi1"/"phi2" and are never monitored by the default
counting schemes.
"""

from dataclasses import dataclass

import numpy as np

from .algebra import SIGMA_MINUS, SIGMA_PLUS, SIGMA_Z, SiteSpec, kron_embed
from .errors import ModelError
from .liouville import CountingScheme, Lindbladian

TWO_QUBITS = SiteSpec(n_sites=2, local_dim=2)


@dataclass(frozen=True)
class CoupledAtomsParams:
    """Two driven atoms with excitation exchange J, decay gamma, dephasing gamma_phi."""

    omega: float = 0.5
    j: float = 0.1
    gamma: float = 1.0
    gamma_phi: float = 0.1

    def __post_init__(self):
        if self.gamma <= 0:
            raise ModelError("gamma must be positive")
        if self.gamma_phi < 0:
            raise ModelError("gamma_phi must be nonnegative")
        if self.omega < 0 or self.j < 0:
            raise ModelError("omega and j must be nonnegative (phases absorbed)")


@dataclass(frozen=True)
class CircuitParams:
    """Two non-interacting atoms mixed by a beam splitter and phase shifter.

    Reflectivity R = sin(zeta)^2; the phase shifter multiplies the atom-2
    amplitude by exp(i delta) ahead of the beam splitter in both outputs.
    """

    omega: float = 0.5
    gamma1: float = 1.0
    gamma2: float = 1.0
    gamma_phi: float = 0.1
    zeta: float = np.pi / 4
    delta: float = 0.0

    def __post_init__(self):
        if self.gamma1 <= 0 or self.gamma2 <= 0:
            raise ModelError("gamma1 and gamma2 must be positive")
        if self.gamma_phi < 0:
            raise ModelError("gamma_phi must be nonnegative")
        if not 0 <= self.zeta <= np.pi / 2:
            raise ModelError(f"zeta must lie in [0, pi/2], got {self.zeta}")
        if self.omega < 0:
            raise ModelError("omega must be nonnegative")

    @property
    def reflectivity(self) -> float:
        return float(np.sin(self.zeta) ** 2)


def _two_atom_ops():
    sm1 = kron_embed(SIGMA_MINUS, 1, TWO_QUBITS)
    sm2 = kron_embed(SIGMA_MINUS, 2, TWO_QUBITS)
    sp1 = kron_embed(SIGMA_PLUS, 1, TWO_QUBITS)
    sp2 = kron_embed(SIGMA_PLUS, 2, TWO_QUBITS)
    sz1 = kron_embed(SIGMA_Z, 1, TWO_QUBITS)
    sz2 = kron_embed(SIGMA_Z, 2, TWO_QUBITS)
    return sm1, sm2, sp1, sp2, sz1, sz2


def _drive(omega, sp_ops, sm_ops):
    h = np.zeros_like(sp_ops[0])
    for sp, sm in zip(sp_ops, sm_ops):
        h = h + (omega / 2.0) * (sp + sm)
    return h


def build_coupled_atoms(p: CoupledAtomsParams):
    """Coupled-atom source with direct per-atom detection channels D1, D2."""
    sm1, sm2, sp1, sp2, sz1, sz2 = _two_atom_ops()
    h = _drive(p.omega, (sp1, sp2), (sm1, sm2))
    h = h + p.j * (sp1 @ sm2 + sm1 @ sp2)
    root_g = np.sqrt(p.gamma)
    root_phi = np.sqrt(p.gamma_phi)
    jumps = (
        ("D1", root_g * sm1),
        ("D2", root_g * sm2),
        ("phi1", root_phi * sz1),
        ("phi2", root_phi * sz2),
    )
    model = Lindbladian(hamiltonian=h, jumps=jumps)
    scheme = CountingScheme(subsets=(("D1",), ("D2",)))
    return model, scheme


def build_circuit_atoms(p: CircuitParams):
    """Non-interacting atoms whose emissions interfere on a beam splitter.

    Monitored channels J1, J2 are the circuit outputs; the mixing matrix is
    unitary, so sum_mu J_mu^+ J_mu equals the unmixed total and the summed
    emission rate is independent of (zeta, delta).
    """
    sm1, sm2, sp1, sp2, sz1, sz2 = _two_atom_ops()
    h = _drive(p.omega, (sp1, sp2), (sm1, sm2))
    c, s = np.cos(p.zeta), np.sin(p.zeta)
    a1 = np.sqrt(p.gamma1)
    a2 = np.sqrt(p.gamma2) * np.exp(1j * p.delta)
    j1 = a1 * c * sm1 + 1j * a2 * s * sm2
    j2 = 1j * a1 * s * sm1 + a2 * c * sm2
    root_phi = np.sqrt(p.gamma_phi)
    jumps = (
        ("J1", j1),
        ("J2", j2),
        ("phi1", root_phi * sz1),
        ("phi2", root_phi * sz2),
    )
    model = Lindbladian(hamiltonian=h, jumps=jumps)
    scheme = CountingScheme(subsets=(("J1",), ("J2",)))
    return model, scheme


def build_driven_qubit(omega: float = 0.5, gamma: float = 1.0):
    """Single resonantly driven qubit with one monitored decay channel D1.

    Test and validation workhorse: the stationary emission rate is
    gamma * omega^2 / (gamma^2 + 2 omega^2).
    """
    if gamma <= 0:
        raise ModelError("gamma must be positive")
    if omega < 0:
        raise ModelError("omega must be nonnegative")
    h = (omega / 2.0) * (SIGMA_PLUS + SIGMA_MINUS)
    model = Lindbladian(hamiltonian=h, jumps=(("D1", np.sqrt(gamma) * SIGMA_MINUS),))
    scheme = CountingScheme(subsets=(("D1",),))
    return model, scheme


def total_emission_rate(model: Lindbladian, scheme: CountingScheme, rho) -> float:
    """Summed Tr(L^+ L rho) over all monitored jump operators."""
    scheme.validate_for(model)
    rho = np.asarray(rho, dtype=complex)
    total = 0.0
    for subset in scheme.subsets:
        for lbl in subset:
            op = model.jump(lbl)
            total += float(np.trace(op.conj().T @ op @ rho).real)
    return total
