import numpy as np
import pytest

from corrdyn.density import DensityMatrix


def random_mixed_state(rng: np.random.Generator, n_sites: int) -> DensityMatrix:
    dim = 2**n_sites
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    return DensityMatrix(n_sites, rho / np.trace(rho))


def random_pure_state(rng: np.random.Generator, n_sites: int) -> DensityMatrix:
    dim = 2**n_sites
    psi = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    psi /= np.linalg.norm(psi)
    return DensityMatrix(n_sites, np.outer(psi, psi.conj()))


def up_right_mixture() -> DensityMatrix:
    """Equal mixture of both spins up and both spins along +x."""
    up = np.zeros((4, 4), dtype=complex)
    up[0, 0] = 1.0
    plus = np.full((2, 2), 0.5, dtype=complex)
    right = np.kron(plus, plus)
    return DensityMatrix(2, 0.5 * (up + right))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)
