"""The linear generator of the correlator hierarchy.

For a pairwise spin Hamiltonian the full table X of Pauli-string expectations
obeys the closed linear system dX/dt = M X.  Reading the equation of motion
for a target string with support A and axes {mu_i}, row entries come from

  (a) local fields:   eps(mu_i, a, n) h_i^a,       same support, mu_i -> n at i;
  (b) intra-subset:   eps(mu_i, a, n) V_ij^{a mu_j},   support A without j;
  (c) growth:         eps(mu_i, a, n) V_il^{a l'},     support A plus l,

so every entry of M is +-h or +-V and the matrix is real, sparse and
antisymmetric (norm conservation of the nonidentity sector, equivalently
purity conservation).  Row and column 0 stay empty: the identity slot is
inert and pinned to 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .combinatorics import bit_indices
from .density import DensityMatrix, partial_trace_array
from .hamiltonian import SpinHamiltonian, restrict
from .oracle import build_hamiltonian_matrix
from .pauli import _EPS_TERMS, PauliString, digit, with_digit

_AXES = "xyz"


@dataclass
class Generator:
    """Sparse generator matrix over the 4**N correlator slots."""

    n_sites: int
    matrix: sp.csr_matrix
    _eigvals: np.ndarray | None = field(default=None, repr=False, compare=False)

    @property
    def dim(self) -> int:
        return 4**self.n_sites

    def infinity_norm(self) -> float:
        if self.matrix.nnz == 0:
            return 0.0
        return float(abs(self.matrix).sum(axis=1).max())


def antisymmetry_defect(gen: Generator) -> float:
    """max |M + M^T|, zero for an exactly antisymmetric generator."""
    d = (gen.matrix + gen.matrix.T).tocoo()
    return float(np.max(np.abs(d.data))) if d.nnz else 0.0


def build_generator(h: SpinHamiltonian) -> Generator:
    n = h.n_sites
    dim = 4**n
    rows: list[int] = []
    cols: list[int] = []
    vals: list[float] = []

    # per site and target axis: nonzero (nu, eps*h) field contractions
    field_terms = [
        [
            [
                (nu, s * h.fields[i, alpha - 1])
                for alpha, nu, s in _EPS_TERMS[mu]
                if h.fields[i, alpha - 1]
            ]
            for mu in (1, 2, 3)
        ]
        for i in range(n)
    ]

    for code in range(1, dim):
        support = [i for i in range(n) if digit(code, i)]
        for i in support:
            mu = digit(code, i)
            for nu, coeff in field_terms[i][mu - 1]:
                rows.append(code)
                cols.append(with_digit(code, i, nu))
                vals.append(coeff)
            for j in h.partners(i):
                v = h.coupling(i, j)
                if digit(code, j):
                    muj = digit(code, j)
                    dropped = with_digit(code, j, 0)
                    for alpha, nu, s in _EPS_TERMS[mu]:
                        coeff = s * v[alpha - 1, muj - 1]
                        if coeff:
                            rows.append(code)
                            cols.append(with_digit(dropped, i, nu))
                            vals.append(coeff)
                else:
                    for alpha, nu, s in _EPS_TERMS[mu]:
                        for lam in (1, 2, 3):
                            coeff = s * v[alpha - 1, lam - 1]
                            if coeff:
                                rows.append(code)
                                cols.append(
                                    with_digit(with_digit(code, j, lam), i, nu)
                                )
                                vals.append(coeff)

    matrix = sp.coo_matrix(
        (np.array(vals), (np.array(rows, dtype=np.int64), np.array(cols, dtype=np.int64))),
        shape=(dim, dim),
    ).tocsr()
    matrix.sum_duplicates()
    return Generator(n, matrix)


def single_site_row(h: SpinHamiltonian, i: int) -> dict[str, list[tuple[float, int]]]:
    """Rows of M for the three single-site expectations of site i.

    Written directly from the one-spin equation of motion (precession in
    the local field plus growth into pair correlators through every
    coupling), independently of build_generator, as a consistency check.
    Returns, per target axis, (coefficient, column code) pairs sorted by code.
    """
    if not 0 <= i < h.n_sites:
        raise ValueError(f"site {i} out of range")
    out: dict[str, list[tuple[float, int]]] = {}
    for mu in (1, 2, 3):
        entries: dict[int, float] = {}
        for alpha, nu, s in _EPS_TERMS[mu]:
            hv = h.fields[i, alpha - 1]
            if hv:
                code = with_digit(0, i, nu)
                entries[code] = entries.get(code, 0.0) + s * hv
            for ell in h.partners(i):
                v = h.coupling(i, ell)
                for lam in (1, 2, 3):
                    coeff = s * v[alpha - 1, lam - 1]
                    if coeff:
                        code = with_digit(with_digit(0, i, nu), ell, lam)
                        entries[code] = entries.get(code, 0.0) + coeff
        out[_AXES[mu - 1]] = [(c, code) for code, c in sorted(entries.items()) if c]
    return out


def _pair_operator(h: SpinHamiltonian, sites: list[int], j: int, ell: int) -> np.ndarray:
    """(1/2) V_{j ell}^{mu nu} sigma_j^mu sigma_ell^nu on the listed sites."""
    pos = {s: k for k, s in enumerate(sites)}
    v = h.coupling(j, ell)
    dim = 2 ** len(sites)
    out = np.zeros((dim, dim), dtype=complex)
    if v is None:
        return out
    for a in range(3):
        for b in range(3):
            if v[a, b]:
                out += 0.5 * v[a, b] * PauliString.from_axes(
                    len(sites), {pos[j]: _AXES[a], pos[ell]: _AXES[b]}
                ).matrix()
    return out


def reduced_eom_residual(
    h: SpinHamiltonian, times, rhos: list[DensityMatrix], subset: int
) -> float:
    """Centered-difference defect of the reduced equation of motion on a subset.

    Checks i d/dt rbar_A = [Hbar_A, rbar_A] + sum_{l not in A} tr_l
    sum_{j in A} [Vhat_jl, rbar_{A+l}] along a uniformly sampled exact
    trajectory; the result is O(dt^2) purely from the finite difference.
    """
    times = np.asarray(times, dtype=float)
    if len(times) < 3:
        raise ValueError("need at least 3 trajectory points")
    steps = np.diff(times)
    dt = steps[0]
    if np.max(np.abs(steps - dt)) > 1e-12 * max(abs(dt), 1.0):
        raise ValueError("trajectory must be uniformly sampled")
    if subset == 0 or subset >> h.n_sites:
        raise ValueError("bad subset")

    n = h.n_sites
    a_sites = bit_indices(subset)
    h_eff = build_hamiltonian_matrix(restrict(h, subset))

    outside = [
        ell
        for ell in range(n)
        if not subset >> ell & 1 and any(j in h.partners(ell) for j in a_sites)
    ]
    couplers = {}
    for ell in outside:
        big = subset | (1 << ell)
        sites = bit_indices(big)
        w = np.zeros((2 ** len(sites),) * 2, dtype=complex)
        for j in a_sites:
            w += _pair_operator(h, sites, j, ell)
        keep = sum(1 << sites.index(s) for s in a_sites)
        couplers[ell] = (big, w, keep, len(sites))

    red_a = [partial_trace_array(r.data, n, subset) for r in rhos]
    worst = 0.0
    for k in range(1, len(times) - 1):
        lhs = 1j * (red_a[k + 1] - red_a[k - 1]) / (2.0 * dt)
        rhs = h_eff @ red_a[k] - red_a[k] @ h_eff
        for ell, (big, w, keep, n_big) in couplers.items():
            r_big = partial_trace_array(rhos[k].data, n, big)
            rhs += partial_trace_array(w @ r_big - r_big @ w, n_big, keep)
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst


@dataclass(frozen=True)
class CoupledSplit:
    """Sector classification of correlator slots for two coupled systems.

    Slots whose support lies inside system 1 form X1, inside the complement
    X2, and every mixed-support slot lands in the joint sector Y.  Y is
    ordered with the X2 factor fastest, so the uncoupled Y generator is
    kron(M1, I) + kron(I, M2).
    """

    n_sites: int
    system1: int
    x1_codes: tuple[int, ...]
    y_codes: tuple[int, ...]
    x2_codes: tuple[int, ...]

    @property
    def dims(self) -> tuple[int, int, int]:
        return len(self.x1_codes), len(self.y_codes), len(self.x2_codes)

    @property
    def order(self) -> np.ndarray:
        """Codes in (X1, Y, X2) sector order."""
        return np.array(self.x1_codes + self.y_codes + self.x2_codes)


def split_sectors(n_sites: int, system1: int) -> CoupledSplit:
    full = (1 << n_sites) - 1
    if system1 == 0 or system1 & ~full or system1 == full:
        raise ValueError("system1 must be a nonempty proper subset of the sites")
    x1 = []
    x2 = []
    for code in range(1, 4**n_sites):
        support = 0
        for i in range(n_sites):
            if digit(code, i):
                support |= 1 << i
        if not support & ~system1:
            x1.append(code)
        elif not support & system1:
            x2.append(code)
    y = tuple(a + b for a in x1 for b in x2)
    split = CoupledSplit(n_sites, system1, tuple(x1), y, tuple(x2))
    n1 = system1.bit_count()
    n2 = n_sites - n1
    assert split.dims == (4**n1 - 1, (4**n1 - 1) * (4**n2 - 1), 4**n2 - 1)
    return split


_SECTORS = ("1", "m", "2")


@dataclass(frozen=True)
class BlockStructure:
    """Dense sector blocks of a generator in the (X1, Y, X2) layout."""

    split: CoupledSplit
    blocks: dict[tuple[str, str], np.ndarray]

    def block(self, row: str, col: str) -> np.ndarray:
        return self.blocks[(row, col)]

    def reassemble(self) -> np.ndarray:
        """Dense generator (full 4**N layout) rebuilt from the blocks."""
        d1, dm, d2 = self.split.dims
        perm = np.concatenate(([0], self.split.order))
        dense = np.zeros((len(perm), len(perm)))
        offs = {"1": 1, "m": 1 + d1, "2": 1 + d1 + dm}
        sizes = {"1": d1, "m": dm, "2": d2}
        for (r, c), b in self.blocks.items():
            dense[offs[r] : offs[r] + sizes[r], offs[c] : offs[c] + sizes[c]] = b
        out = np.zeros_like(dense)
        out[np.ix_(perm, perm)] = dense
        return out


def block_structure(gen: Generator, split: CoupledSplit) -> BlockStructure:
    """Partition M into the 3x3 sector layout, checking the empty corners.

    Pairwise interactions only create or annihilate mixed correlators, so the
    direct X1 <-> X2 blocks must vanish identically.
    """
    if split.n_sites != gen.n_sites:
        raise ValueError("split and generator site counts differ")
    order = split.order
    dense = gen.matrix[order][:, order].toarray()
    d1, dm, d2 = split.dims
    sl = {"1": slice(0, d1), "m": slice(d1, d1 + dm), "2": slice(d1 + dm, d1 + dm + d2)}
    blocks = {}
    for r in _SECTORS:
        for c in _SECTORS:
            blocks[(r, c)] = dense[sl[r], sl[c]]
    for corner in (("1", "2"), ("2", "1")):
        if blocks[corner].size and np.max(np.abs(blocks[corner])) > 1e-12:
            raise ValueError("Hamiltonian violates pairwise sector structure")
    return BlockStructure(split, blocks)


def decompose_blocks(
    gen: Generator, split: CoupledSplit
) -> tuple[dict[str, np.ndarray], dict[tuple[str, str], np.ndarray]]:
    """Split M into uncoupled sector blocks and the interaction remainder.

    The uncoupled diagonal is (M1, kron(M1, I) + kron(I, M2), M2); whatever
    the cross-system couplings add on top of it is returned as the
    interaction blocks (1,m), (m,1), (m,m), (m,2), (2,m).
    """
    bs = block_structure(gen, split)
    m1 = bs.block("1", "1")
    m2 = bs.block("2", "2")
    mixed0 = np.kron(m1, np.eye(len(m2))) + np.kron(np.eye(len(m1)), m2)
    diag = {"1": m1, "m": mixed0, "2": m2}
    inter = {
        ("1", "m"): bs.block("1", "m"),
        ("m", "1"): bs.block("m", "1"),
        ("m", "m"): bs.block("m", "m") - mixed0,
        ("m", "2"): bs.block("m", "2"),
        ("2", "m"): bs.block("2", "m"),
    }
    return diag, inter
