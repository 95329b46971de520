"""Brute-force exact evolution for small systems.

Everything here goes through one dense diagonalization of the 2**N x 2**N
Hamiltonian, so the accuracy is machine-level and independent of time; this
is the ground truth the hierarchy machinery is tested against.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import pauli
from .density import DENSE_SITE_CAP, DensityMatrix, extract_correlators
from .errors import SizeCapError
from .hamiltonian import SpinHamiltonian


@dataclass(frozen=True)
class EigenSystem:
    """Ascending eigenvalues and the unitary of eigenvectors of H."""

    energies: np.ndarray
    vectors: np.ndarray

    def propagator(self, t: float) -> np.ndarray:
        """U(t) = exp(-i H t)."""
        return (self.vectors * np.exp(-1j * self.energies * t)) @ self.vectors.conj().T


def build_hamiltonian_matrix(h: SpinHamiltonian) -> np.ndarray:
    """Dense matrix of H with site 0 on the least-significant qubit."""
    if h.n_sites > DENSE_SITE_CAP:
        raise SizeCapError(
            f"dense Hamiltonians support at most {DENSE_SITE_CAP} sites, got {h.n_sites}"
        )
    dim = 2**h.n_sites
    out = np.zeros((dim, dim), dtype=complex)
    for i in range(h.n_sites):
        for a in range(3):
            hv = h.fields[i, a]
            if hv:
                out += 0.5 * hv * pauli.PauliString.from_axes(
                    h.n_sites, {i: "xyz"[a]}
                ).matrix()
    for (i, j), v in h.couplings.items():
        for a in range(3):
            for b in range(3):
                if v[a, b]:
                    out += 0.5 * v[a, b] * pauli.PauliString.from_axes(
                        h.n_sites, {i: "xyz"[a], j: "xyz"[b]}
                    ).matrix()
    return out


def eigensystem(h: SpinHamiltonian) -> EigenSystem:
    energies, vectors = np.linalg.eigh(build_hamiltonian_matrix(h))
    return EigenSystem(energies, vectors)


def energy_differences(es: EigenSystem) -> np.ndarray:
    """All positive level differences E_n - E_m, sorted, with multiplicity."""
    diffs = es.energies[None, :] - es.energies[:, None]
    return np.sort(diffs[diffs > 0.0])


def evolve_exact(h: SpinHamiltonian, rho0: DensityMatrix, times) -> list[DensityMatrix]:
    """rho(t) = U(t) rho0 U(t)^dagger at each requested time."""
    if rho0.n_sites != h.n_sites:
        raise ValueError("state and Hamiltonian site counts differ")
    es = eigensystem(h)
    basis0 = es.vectors.conj().T @ rho0.data @ es.vectors
    out = []
    for t in np.asarray(times, dtype=float):
        phase = np.exp(-1j * es.energies * t)
        rot = (phase[:, None] * basis0) * phase.conj()[None, :]
        out.append(DensityMatrix(h.n_sites, es.vectors @ rot @ es.vectors.conj().T))
    return out


def correlator_trajectory(h: SpinHamiltonian, rho0: DensityMatrix, times):
    """Exact correlator supervector along the trajectory.

    Returns a dynamics.Trajectory; reference output for the hierarchy
    integrators.
    """
    from .dynamics import Trajectory

    times = np.asarray(times, dtype=float)
    rows = [extract_correlators(r).values for r in evolve_exact(h, rho0, times)]
    return Trajectory(h.n_sites, times, np.array(rows))
