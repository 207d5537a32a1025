"""Ground-truth subset-sum counters: exhaustive enumeration and dynamic programming.

Both treat the instance as a multiset, so repeated elements give distinct
subsets. Counts here never include the empty set.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import CountOverflowError, InstanceSizeError, SubsetSumInstance

MAX_BRUTEFORCE_N = 25
MAX_EXACT_N = 63


def _check_exact_size(instance: SubsetSumInstance):
    if instance.n > MAX_EXACT_N:
        raise CountOverflowError(
            f"n={instance.n} exceeds {MAX_EXACT_N}: subset counts would overflow 64 bits"
        )


def generating_counts(instance: SubsetSumInstance) -> tuple[int, np.ndarray]:
    """Coefficients of prod_j (1 + x**a_j), empty set included.

    Returns ``(offset, counts)`` where ``counts[s + offset]`` is the number of
    subsets (including the empty one) summing to ``s`` and ``offset`` is the
    magnitude of the negative-element sum. One pass per element, O(n*A).
    """
    _check_exact_size(instance)
    offset = instance.negative_sum
    size = offset + instance.positive_sum + 1
    counts = np.zeros(size, dtype=np.uint64)
    counts[offset] = 1
    for a in instance.elements:
        shifted = counts.copy()
        if a > 0:
            shifted[a:] += counts[: size - a]
        else:
            shifted[: size + a] += counts[-a:]
        counts = shifted
    return offset, counts


@dataclass(frozen=True)
class CountTable:
    n: int
    offset: int
    raw: np.ndarray  # non-empty subset counts indexed by s + offset

    def __getitem__(self, s: int) -> int:
        i = s + self.offset
        if 0 <= i < len(self.raw):
            return int(self.raw[i])
        return 0

    @property
    def counts(self) -> dict[int, int]:
        nz = np.nonzero(self.raw)[0]
        return {int(i) - self.offset: int(self.raw[i]) for i in nz}

    @property
    def total(self) -> int:
        return sum(int(c) for c in self.raw)

    @property
    def sum_range(self) -> tuple[int, int]:
        return -self.offset, len(self.raw) - 1 - self.offset


def full_count_table(instance: SubsetSumInstance) -> CountTable:
    offset, counts = generating_counts(instance)
    counts[offset] -= 1
    return CountTable(instance.n, offset, counts)


def count_subsets_dp(instance: SubsetSumInstance, s: int) -> int:
    return full_count_table(instance)[s]


def bruteforce_subset_sums(instance: SubsetSumInstance) -> np.ndarray:
    """Sum of every subset, one entry per subset (index bit j selects element j)."""
    if instance.n > MAX_BRUTEFORCE_N:
        raise InstanceSizeError(
            f"n={instance.n} exceeds {MAX_BRUTEFORCE_N}; refusing 2**n enumeration"
        )
    sums = np.zeros(1, dtype=np.int64)
    for a in instance.elements:
        sums = np.concatenate([sums, sums + a])
    return sums


def bruteforce_count_table(instance: SubsetSumInstance) -> dict[int, int]:
    sums = bruteforce_subset_sums(instance)[1:]  # drop the empty subset
    values, counts = np.unique(sums, return_counts=True)
    return {int(v): int(c) for v, c in zip(values, counts)}


def count_subsets_bruteforce(instance: SubsetSumInstance, s: int) -> int:
    sums = bruteforce_subset_sums(instance)
    return int(np.count_nonzero(sums[1:] == s))
