"""Basis combinatorics of the exterior algebra on dx_1, ..., dx_n."""
from __future__ import annotations

import itertools
from dataclasses import dataclass


@dataclass(frozen=True, order=True)
class MultiIndex:
    """A strictly increasing tuple of 1-based indices in ``1..n``."""

    n: int
    indices: tuple = ()

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        object.__setattr__(self, "indices", idx)
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise ValueError(f"indices must be strictly increasing: {idx}")
        if idx and (idx[0] < 1 or idx[-1] > self.n):
            raise ValueError(f"indices {idx} out of range 1..{self.n}")

    @property
    def degree(self) -> int:
        return len(self.indices)

    def __len__(self):
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def __str__(self):
        if not self.indices:
            return "1"
        return "^".join(f"dx{i}" for i in self.indices)


def basis(n: int, p: int) -> list[MultiIndex]:
    if p < 0 or p > n:
        return []
    return [MultiIndex(n, c) for c in itertools.combinations(range(1, n + 1), p)]


def merge_sign(a, b) -> int:
    """Sign of sorting the concatenation ``a + b`` of two sorted tuples; 0 on overlap."""
    if set(a) & set(b):
        return 0
    # each pair (x in a, y in b) with x > y is one inversion
    inv = 0
    j = 0
    for x in a:
        while j < len(b) and b[j] < x:
            j += 1
        inv += j
    return -1 if inv % 2 else 1


def wedge_basis(a: MultiIndex, b: MultiIndex) -> tuple[int, MultiIndex]:
    if a.n != b.n:
        raise ValueError(f"ambient dimensions differ: {a.n} vs {b.n}")
    s = merge_sign(a.indices, b.indices)
    if s == 0:
        return 0, MultiIndex(a.n, ())
    return s, MultiIndex(a.n, tuple(sorted(a.indices + b.indices)))
