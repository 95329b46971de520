"""Subset and set-partition enumeration over bitmask-encoded site sets.

Sets of cells are plain Python ints used as bitmasks (bit i set = site i is a
member), which keeps all set algebra O(1).  Masks are limited to MAX_BITS
sites, far beyond anything the dense machinery downstream can handle.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

MAX_BITS = 24


def mask_of(sites) -> int:
    """Bitmask with the given site indices set."""
    mask = 0
    for s in sites:
        mask |= 1 << s
    return mask


def bit_indices(mask: int) -> list[int]:
    """Ascending list of site indices contained in the mask."""
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


def _check_mask(mask: int) -> None:
    if mask < 0 or mask >= 1 << MAX_BITS:
        raise ValueError(f"mask {mask:#x} outside the supported {MAX_BITS}-bit range")


def enumerate_subsets(mask: int) -> Iterator[int]:
    """Yield every submask of `mask` exactly once, in increasing-mask order.

    The empty set is yielded first and `mask` itself last; a mask with n bits
    produces 2**n submasks.
    """
    _check_mask(mask)
    sub = 0
    while True:
        yield sub
        if sub == mask:
            return
        # next submask in increasing numeric order
        sub = (sub - mask) & mask


@dataclass(frozen=True)
class Partition:
    """A set partition: pairwise-disjoint nonempty blocks covering the input set.

    Blocks are ordered by their smallest element, which is the canonical order
    produced by restricted-growth enumeration.
    """

    blocks: tuple[int, ...]

    def __post_init__(self):
        seen = 0
        prev_low = -1
        for b in self.blocks:
            if b == 0:
                raise ValueError("partition blocks must be nonempty")
            if b & seen:
                raise ValueError("partition blocks must be disjoint")
            low = b & -b
            if low <= prev_low:
                raise ValueError("blocks must be ordered by smallest element")
            prev_low = low
            seen |= b

    @property
    def union(self) -> int:
        u = 0
        for b in self.blocks:
            u |= b
        return u

    def __len__(self) -> int:
        return len(self.blocks)


def enumerate_partitions(mask: int) -> Iterator[Partition]:
    """Yield every partition of the sites in `mask` exactly once.

    Enumeration follows restricted-growth strings in lexicographic order, so
    the output order is canonical and duplicate-free by construction.  The
    number of partitions of an n-element set is the Bell number B_n.
    """
    _check_mask(mask)
    sites = bit_indices(mask)
    n = len(sites)
    if n == 0:
        raise ValueError("cannot partition empty set")
    # a = restricted-growth string, m[k] = max(a[:k]) so a[k] may grow to m[k]+1
    a = [0] * n
    m = [0] * n
    while True:
        nblocks = max(a) + 1
        blocks = [0] * nblocks
        for k, s in enumerate(sites):
            blocks[a[k]] |= 1 << s
        yield Partition(tuple(blocks))
        k = n - 1
        while k > 0 and a[k] > m[k]:
            k -= 1
        # a[k] > m[k] can only fail the loop at k == 0
        if k == 0:
            return
        a[k] += 1
        mk = max(m[k], a[k])
        for j in range(k + 1, n):
            a[j] = 0
            m[j] = mk
