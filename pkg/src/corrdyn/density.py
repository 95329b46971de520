"""Dense density matrices and their Pauli-correlator representation.

An N-site state is equivalently a 2**N x 2**N Hermitian unit-trace matrix or
the real table of all 4**N Pauli-string expectations

    rho = 2**-N * sum_c  v[c] * P_c,        v[c] = tr(rho P_c),

with slot 0 (the identity string) pinned to 1.  Site 0 is the
least-significant qubit of the matrix index, matching the base-4 digit
convention of the correlator index.

All dense work is capped at DENSE_SITE_CAP sites; this module is desk-scale
machinery, not a large-N code path.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import pauli
from .combinatorics import bit_indices
from .errors import SizeCapError

DENSE_SITE_CAP = 12

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-12
_VALUE_SLACK = 1e-6


def _check_cap(n_sites: int) -> None:
    if n_sites > DENSE_SITE_CAP:
        raise SizeCapError(
            f"dense operations support at most {DENSE_SITE_CAP} sites, got {n_sites}"
        )


@dataclass(frozen=True)
class CorrelatorVector:
    """All 4**N Pauli-string expectations of a state, indexed by string code."""

    n_sites: int
    values: np.ndarray

    def __post_init__(self):
        _check_cap(self.n_sites)
        v = np.asarray(self.values, dtype=float)
        if v.shape != (4**self.n_sites,):
            raise ValueError(f"expected {4 ** self.n_sites} values, got {v.shape}")
        if abs(v[0] - 1.0) > 1e-9:
            raise ValueError("slot 0 (identity expectation) must be 1")
        # every Pauli string has eigenvalues +-1; allow integrator-level slack
        if np.max(np.abs(v)) > 1.0 + _VALUE_SLACK:
            raise ValueError("correlator magnitudes cannot exceed 1")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def value(self, label: str) -> complex:
        """Expectation of a label in the string grammar (ladder tokens allowed)."""
        return pauli.parse_label(label, self.n_sites).expectation(self.values)

    def to_ladder(self) -> np.ndarray:
        return pauli.to_ladder(self.values)


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian unit-trace matrix on n_sites qubits (positivity not enforced)."""

    n_sites: int
    data: np.ndarray

    def __post_init__(self):
        _check_cap(self.n_sites)
        d = np.asarray(self.data, dtype=complex)
        dim = 2**self.n_sites
        if d.shape != (dim, dim):
            raise ValueError(f"expected a {dim}x{dim} matrix, got {d.shape}")
        if np.max(np.abs(d - d.conj().T)) > HERMITICITY_TOL:
            raise ValueError("matrix is not Hermitian")
        if abs(np.trace(d).real - 1.0) > TRACE_TOL or abs(np.trace(d).imag) > TRACE_TOL:
            raise ValueError("matrix does not have unit trace")
        d = d.copy()
        d.setflags(write=False)
        object.__setattr__(self, "data", d)


# Correlator <-> matrix transforms work on the "pair digit" e = 2*col_bit +
# row_bit of each site, so both directions are a per-site 4x4 map.
_B_EXTRACT = np.array(
    [[pauli.PAULI[d][c, r] for c in (0, 1) for r in (0, 1)] for d in range(4)]
)
_B_BUILD = np.array(
    [[pauli.PAULI[d][r, c] for d in range(4)] for c in (0, 1) for r in (0, 1)]
)


def _pair_order(n: int) -> list[int]:
    order = []
    for k in range(n):
        order += [n + k, k]
    return order


def _to_pair_digits(mat: np.ndarray, n: int) -> np.ndarray:
    w = mat.reshape((2,) * (2 * n))
    return np.transpose(w, _pair_order(n)).reshape((4,) * n).reshape(-1)


def _from_pair_digits(vec: np.ndarray, n: int) -> np.ndarray:
    w = vec.reshape((2,) * (2 * n))
    w = np.transpose(w, np.argsort(_pair_order(n)))
    return w.reshape(2**n, 2**n)


def extract_correlators(rho: DensityMatrix) -> CorrelatorVector:
    """Read off v[c] = tr(rho P_c) for every string code c."""
    n = rho.n_sites
    v = pauli._apply_site_map(_to_pair_digits(rho.data, n), _B_EXTRACT)
    if np.max(np.abs(v.imag)) > 1e-10:
        raise ValueError("matrix is not Hermitian enough for real correlators")
    return CorrelatorVector(n, v.real)


def from_correlators(v: CorrelatorVector) -> DensityMatrix:
    """Assemble rho = 2**-N sum_c v[c] P_c (inverse of extract_correlators)."""
    n = v.n_sites
    w = pauli._apply_site_map(v.values, _B_BUILD) / 2**n
    return DensityMatrix(n, _from_pair_digits(w, n))


def partial_trace_array(data: np.ndarray, n_sites: int, keep: int) -> np.ndarray:
    """Partial trace of a raw operator matrix; kept sites renumber ascending.

    No Hermiticity or trace validation, so this also serves the zero-trace
    correlated components.
    """
    kept = bit_indices(keep)
    if keep >> n_sites:
        raise ValueError("keep mask references sites beyond the system")
    traced = [i for i in range(n_sites) if not keep >> i & 1]
    w = np.asarray(data).reshape((2,) * (2 * n_sites))
    # row axis of site i sits at n_sites-1-i, column axis at 2*n_sites-1-i
    letters = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
    row = {i: letters[k] for k, i in enumerate(range(n_sites))}
    col = {i: letters[n_sites + k] for k, i in enumerate(range(n_sites))}
    for i in traced:
        col[i] = row[i]
    sub_in = "".join(row[i] for i in reversed(range(n_sites))) + "".join(
        col[i] for i in reversed(range(n_sites))
    )
    sub_out = "".join(row[i] for i in reversed(kept)) + "".join(
        col[i] for i in reversed(kept)
    )
    out = np.einsum(f"{sub_in}->{sub_out}", w)
    dim = 2 ** len(kept)
    return out.reshape(dim, dim)


def partial_trace(rho: DensityMatrix, keep: int) -> DensityMatrix:
    """Reduced state on the sites in `keep` (ascending renumbering).

    keep = 0 yields the trivial 0-site state, the 1x1 matrix [[1]].
    """
    return DensityMatrix(
        len(bit_indices(keep)), partial_trace_array(rho.data, rho.n_sites, keep)
    )


def purity(rho: DensityMatrix) -> float:
    """tr(rho^2), equal to the squared Frobenius norm for Hermitian rho."""
    return float(np.vdot(rho.data, rho.data).real)


def purity_from_correlators(v: CorrelatorVector) -> float:
    """tr(rho^2) = 2**-N sum_c v[c]^2, the correlator-side route."""
    return float(np.dot(v.values, v.values) / 2**v.n_sites)


class PositivityReport(NamedTuple):
    min_eigenvalue: float
    is_positive: bool


def diagnose_positivity(rho: DensityMatrix, tol: float = 1e-10) -> PositivityReport:
    """Smallest eigenvalue and whether the state is positive within tol.

    Positivity is reported, never enforced: hierarchy integration error can
    transiently produce slightly unphysical correlator vectors, and silently
    projecting them back would mask bugs.
    """
    w = np.linalg.eigvalsh(rho.data)
    lo = float(w[0])
    return PositivityReport(lo, lo >= -tol)


class PureTwoQubitResiduals(NamedTuple):
    """Residuals of the four pure-state constraints on two-qubit correlators.

    `norm` is signed (it equals 3 for the maximally mixed state); the other
    three are max-abs over their free indices.  All four vanish iff the state
    is pure.
    """

    norm: float
    site0: float
    site1: float
    tensor: float

    @property
    def max_abs(self) -> float:
        return max(abs(self.norm), self.site0, self.site1, self.tensor)


def check_pure_two_qubit(v: CorrelatorVector) -> PureTwoQubitResiduals:
    """Evaluate the pure-state constraints for a two-site correlator table.

    With a = <sigma_0>, b = <sigma_1> and T[mu, nu] = <sigma_0^mu sigma_1^nu>:

        3 - (a.a + b.b + sum T^2)                  (norm constraint)
        a - T b                                    (per axis of site 0)
        b - T^T a                                  (per axis of site 1)
        T - a b^T + (1/2) eps eps : T T            (tensor constraint)
    """
    if v.n_sites != 2:
        raise ValueError("pure-state constraint check requires exactly 2 sites")
    vals = v.values
    a = np.array([vals[pauli.with_digit(0, 0, d)] for d in (1, 2, 3)])
    b = np.array([vals[pauli.with_digit(0, 1, d)] for d in (1, 2, 3)])
    t = np.array(
        [
            [vals[pauli.with_digit(pauli.with_digit(0, 0, d0), 1, d1)] for d1 in (1, 2, 3)]
            for d0 in (1, 2, 3)
        ]
    )
    norm = 3.0 - (a @ a + b @ b + np.sum(t * t))
    site0 = float(np.max(np.abs(a - t @ b)))
    site1 = float(np.max(np.abs(b - t.T @ a)))
    eps = np.zeros((3, 3, 3))
    for perm, s in (((0, 1, 2), 1.0), ((1, 2, 0), 1.0), ((2, 0, 1), 1.0),
                    ((0, 2, 1), -1.0), ((2, 1, 0), -1.0), ((1, 0, 2), -1.0)):
        eps[perm] = s
    quad = 0.5 * np.einsum("mal,nbg,ab,lg->mn", eps, eps, t, t)
    tensor = float(np.max(np.abs(t - np.outer(a, b) + quad)))
    return PureTwoQubitResiduals(float(norm), site0, site1, tensor)
