"""Correlated and cumulant components of partitioned density matrices.

A subset A of cells carries two natural "interaction parts" of the state:

* the correlated component rho^C_A, fixed uniquely by the expansion

      rho = sum_{A subset S} (prod_{j not in A} rbar_j) rho^C_A

  together with the requirement that tracing any single cell out of rho^C_A
  gives zero (conventions: rho^C of the empty set is 1, of a single cell 0);

* the cumulant component rho^CC_A, defined through the partition expansion

      rho = sum_{partitions p of S} prod_{B in p} rho^CC_B,

  with rho^CC of a single cell equal to its reduced matrix.

Both coincide for |A| in {2, 3} and differ from order 4 on by products of
pair terms.  Components are stored on their own subset's Hilbert space;
products across disjoint subsets tensor-order sites ascending.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from . import pauli
from .combinatorics import bit_indices, enumerate_partitions, enumerate_subsets
from .density import CorrelatorVector, DensityMatrix, partial_trace_array

TRACE_ZERO_TOL = 1e-12


@dataclass(frozen=True)
class CorrelatedPart:
    """Zero-trace correlated component of a subset (|subset| >= 2)."""

    subset: int
    matrix: np.ndarray


@dataclass(frozen=True)
class CumulantPart:
    """Cumulant component of a subset; equals the reduced matrix for one cell."""

    subset: int
    matrix: np.ndarray


def permute_sites(mat: np.ndarray, sites: list[int]) -> np.ndarray:
    """Reorder the qubits of `mat` from the given order to ascending order.

    `sites[k]` is the site living on qubit k (least-significant first) of the
    input matrix.
    """
    n = len(sites)
    target = sorted(sites)
    # qubit position of each site, most-significant axis first
    src = [n - 1 - sites.index(s) for s in reversed(target)]
    perm = src + [n + a for a in src]
    w = mat.reshape((2,) * (2 * n))
    return np.transpose(w, perm).reshape(2**n, 2**n)


def embed_product(factors: Iterable[tuple[int, np.ndarray]]) -> tuple[int, np.ndarray]:
    """Tensor product of operators on pairwise-disjoint subsets.

    Returns (union mask, matrix) with the union's sites ordered ascending.
    """
    site_order: list[int] = []
    mat = np.array([[1.0 + 0.0j]])
    union = 0
    for mask, block in factors:
        if mask & union:
            raise ValueError("factors must live on disjoint subsets")
        union |= mask
        # np.kron(block, mat) keeps the accumulated qubits on the low end
        mat = np.kron(block, mat)
        site_order = site_order + bit_indices(mask)
    return union, permute_sites(mat, site_order)


def reduced_matrices(rho: DensityMatrix) -> dict[int, np.ndarray]:
    """Reduced matrix of every nonempty subset, keyed by mask."""
    full = (1 << rho.n_sites) - 1
    return {
        mask: partial_trace_array(rho.data, rho.n_sites, mask)
        for mask in enumerate_subsets(full)
        if mask
    }


def _correlated_matrix(subset: int, red: Mapping[int, np.ndarray]) -> np.ndarray:
    cells = bit_indices(subset)
    n = len(cells)
    singles = {j: red[1 << j] for j in cells}
    out = np.zeros((2**n, 2**n), dtype=complex)
    for core in enumerate_subsets(subset):
        m = core.bit_count()
        if m < 2:
            continue
        sign = -1.0 if (n - m) % 2 else 1.0
        factors = [(core, red[core])]
        factors += [(1 << j, singles[j]) for j in cells if not core >> j & 1]
        out += sign * embed_product(factors)[1]
    sign_full = -1.0 if n % 2 == 0 else 1.0  # -(-1)^n
    out += sign_full * (n - 1) * embed_product(
        [(1 << j, singles[j]) for j in cells]
    )[1]
    return out


def correlated_part(rho: DensityMatrix, subset: int) -> CorrelatedPart:
    """rho^C of a subset with at least two cells.

    The single-cell component is identically zero by convention and is an
    error here so that callers handle it explicitly.
    """
    if subset.bit_count() < 2:
        raise ValueError("correlated component needs a subset of >= 2 cells")
    if subset >> rho.n_sites:
        raise ValueError("subset references sites beyond the system")
    red = {
        mask: partial_trace_array(rho.data, rho.n_sites, mask)
        for mask in enumerate_subsets(subset)
        if mask
    }
    return CorrelatedPart(subset, _correlated_matrix(subset, red))


def correlated_parts(rho: DensityMatrix) -> dict[int, CorrelatedPart]:
    """rho^C for every subset with >= 2 cells, keyed by mask."""
    red = reduced_matrices(rho)
    full = (1 << rho.n_sites) - 1
    return {
        mask: CorrelatedPart(mask, _correlated_matrix(mask, red))
        for mask in enumerate_subsets(full)
        if mask.bit_count() >= 2
    }


def _cumulant_matrix(subset: int, red: Mapping[int, np.ndarray], memo: dict) -> np.ndarray:
    if subset in memo:
        return memo[subset]
    if subset.bit_count() == 1:
        memo[subset] = red[subset]
        return memo[subset]
    out = np.array(red[subset], dtype=complex, copy=True)
    for p in enumerate_partitions(subset):
        if len(p) < 2:
            continue
        out -= embed_product(
            [(b, _cumulant_matrix(b, red, memo)) for b in p.blocks]
        )[1]
    memo[subset] = out
    return out


def cumulant_part(rho: DensityMatrix, subset: int) -> CumulantPart:
    """rho^CC of a nonempty subset, via the partition recursion."""
    if subset == 0:
        raise ValueError("cumulant component of the empty set is undefined")
    if subset >> rho.n_sites:
        raise ValueError("subset references sites beyond the system")
    red = {
        mask: partial_trace_array(rho.data, rho.n_sites, mask)
        for mask in enumerate_subsets(subset)
        if mask
    }
    return CumulantPart(subset, _cumulant_matrix(subset, red, {}))


def cumulant_parts(rho: DensityMatrix) -> dict[int, CumulantPart]:
    """rho^CC for every nonempty subset, keyed by mask."""
    red = reduced_matrices(rho)
    memo: dict[int, np.ndarray] = {}
    full = (1 << rho.n_sites) - 1
    return {
        mask: CumulantPart(mask, _cumulant_matrix(mask, red, memo))
        for mask in enumerate_subsets(full)
        if mask
    }


def trace_defect(part: CorrelatedPart) -> float:
    """Largest |entry| left after tracing any single cell out of rho^C."""
    cells = bit_indices(part.subset)
    n = len(cells)
    worst = 0.0
    for k in range(n):
        keep = ((1 << n) - 1) ^ (1 << k)
        t = partial_trace_array(part.matrix, n, keep)
        worst = max(worst, float(np.max(np.abs(t))))
    return worst


def reconstruct(
    n_sites: int,
    singles: Mapping[int, np.ndarray],
    parts: Mapping[int, CorrelatedPart],
) -> DensityMatrix:
    """Reassemble rho from single-cell reduced matrices and all rho^C.

    The sum runs over the power set; single-cell subsets drop out, leaving
    2**N - N contributing terms.
    """
    if set(singles) != set(range(n_sites)):
        raise ValueError("need exactly one reduced matrix per site")
    full = (1 << n_sites) - 1
    if any(mask >> n_sites or mask.bit_count() < 2 for mask in parts):
        raise ValueError("correlated parts inconsistent with site count")
    out = np.zeros((2**n_sites, 2**n_sites), dtype=complex)
    terms = 0
    for sub in enumerate_subsets(full):
        size = sub.bit_count()
        if size == 1:
            continue
        factors = [(1 << j, singles[j]) for j in range(n_sites) if not sub >> j & 1]
        if size >= 2:
            factors.append((sub, parts[sub].matrix))
        out += embed_product(factors)[1]
        terms += 1
    assert terms == 2**n_sites - n_sites
    return DensityMatrix(n_sites, out)


def cumulant_reconstruct(
    n_sites: int, parts: Mapping[int, CumulantPart]
) -> DensityMatrix:
    """Reassemble rho as the sum over all B_N partitions of cumulant products."""
    full = (1 << n_sites) - 1
    out = np.zeros((2**n_sites, 2**n_sites), dtype=complex)
    for p in enumerate_partitions(full):
        out += embed_product([(b, parts[b].matrix) for b in p.blocks])[1]
    return DensityMatrix(n_sites, out)


def connected_pair(v: CorrelatorVector, i: int, j: int, mu: str, nu: str) -> float:
    """<<s_i^mu s_j^nu>> = <s_i^mu s_j^nu> - <s_i^mu><s_j^nu>."""
    if i == j:
        raise ValueError("connected pair needs two distinct sites")
    ci = pauli.PauliString.from_axes(v.n_sites, {i: mu}).code
    cj = pauli.PauliString.from_axes(v.n_sites, {j: nu}).code
    return float(v.values[ci | cj] - v.values[ci] * v.values[cj])


def connected_triple(
    v: CorrelatorVector, sites: tuple[int, int, int], axes: tuple[str, str, str]
) -> float:
    """Third-order connected correlator of three distinct single-site operators.

    Equals the three-point coefficient of rho^C over the three cells:
    <abc> - sum_cyc <a><<bc>> - <a><b><c>.
    """
    i, j, k = sites
    if len({i, j, k}) != 3:
        raise ValueError("connected triple needs three distinct sites")
    c = [pauli.PauliString.from_axes(v.n_sites, {s: a}).code for s, a in zip(sites, axes)]
    one = [float(v.values[x]) for x in c]
    pair = {
        (0, 1): float(v.values[c[0] | c[1]]),
        (0, 2): float(v.values[c[0] | c[2]]),
        (1, 2): float(v.values[c[1] | c[2]]),
    }
    triple = float(v.values[c[0] | c[1] | c[2]])
    return (
        triple
        - one[0] * pair[(1, 2)]
        - one[1] * pair[(0, 2)]
        - one[2] * pair[(0, 1)]
        + 2.0 * one[0] * one[1] * one[2]
    )
