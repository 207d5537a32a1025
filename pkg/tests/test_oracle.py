import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from memssp.core import CountOverflowError, InstanceSizeError, SubsetSumInstance
from memssp.oracle import (
    bruteforce_count_table,
    count_subsets_bruteforce,
    count_subsets_dp,
    full_count_table,
)

from conftest import TABLE1_COUNTS, enumerate_sums

small_sets = st.lists(st.integers(-200, 200).filter(bool), min_size=1, max_size=12)


def test_bruteforce_examples(table1):
    assert count_subsets_bruteforce(table1, 0) == 1
    assert count_subsets_bruteforce(table1, -146) == 2
    assert count_subsets_bruteforce(SubsetSumInstance((1,)), 2) == 0


def test_bruteforce_refuses_large_n():
    with pytest.raises(InstanceSizeError):
        count_subsets_bruteforce(SubsetSumInstance(tuple(range(1, 27))), 3)


def test_dp_examples(table1):
    assert count_subsets_dp(table1, 248) == 1
    assert count_subsets_dp(SubsetSumInstance((2, 2)), 2) == 2


def test_dp_overflow_guard():
    with pytest.raises(CountOverflowError):
        full_count_table(SubsetSumInstance((1,) * 64))
    # 63 ones: the count at 31 is C(63, 31), well inside uint64
    table = full_count_table(SubsetSumInstance((1,) * 63))
    from math import comb

    assert table[31] == comb(63, 31)
    assert table.total == 2**63 - 1


def test_full_table_small():
    assert full_count_table(SubsetSumInstance((1, 2))).counts == {1: 1, 2: 1, 3: 1}


def test_full_table_matches_bench_counts(table1):
    table = full_count_table(table1)
    for s, (plus, minus) in TABLE1_COUNTS.items():
        assert (table[s], table[-s]) == (plus, minus)


def test_raw_array_offset_indexing(table1):
    table = full_count_table(table1)
    assert table.offset == 486  # 130 + 146 + 166 + 44
    assert table.sum_range == (-486, 248)
    assert int(table.raw[-486 + table.offset]) == 1


@given(small_sets)
@settings(max_examples=200, deadline=None)
def test_dp_equals_bruteforce(xs):
    inst = SubsetSumInstance(tuple(xs))
    table = full_count_table(inst)
    reference = enumerate_sums(xs, include_empty=False)
    assert table.counts == dict(reference)
    assert bruteforce_count_table(inst) == dict(reference)
    assert table.total == 2 ** len(xs) - 1
    lo, hi = table.sum_range
    for s in (lo - 1, hi + 1):
        assert table[s] == 0


@given(small_sets)
@settings(deadline=None)
def test_sign_symmetry(xs):
    inst = SubsetSumInstance(tuple(xs))
    a, b = full_count_table(inst), full_count_table(inst.negated())
    assert {-s: c for s, c in a.counts.items()} == b.counts


@given(small_sets)
@settings(max_examples=30, deadline=None)
def test_table_agrees_with_single_query(xs):
    inst = SubsetSumInstance(tuple(xs))
    table = full_count_table(inst)
    lo, hi = table.sum_range
    for s in range(lo, hi + 1, max(1, (hi - lo) // 25)):
        assert table[s] == count_subsets_dp(inst, s) == count_subsets_bruteforce(inst, s)


def test_random_n12_every_sum():
    rng = np.random.default_rng(3)
    xs = tuple(int(x) for x in rng.integers(1, 201, 12) * rng.choice([-1, 1], 12))
    inst = SubsetSumInstance(xs)
    table = full_count_table(inst)
    brute = bruteforce_count_table(inst)
    lo, hi = table.sum_range
    assert all(table[s] == brute.get(s, 0) for s in range(lo, hi + 1))
