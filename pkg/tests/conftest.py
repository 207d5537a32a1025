import itertools
from collections import Counter

import pytest

from memssp.core import MachineConfig, SubsetSumInstance

TABLE1 = (130, -130, -146, -166, -44, 118)
TABLE1_TARGETS = (0, 74, 130, 146, 248, 485, 486)
# (count for s, count for -s), last two columns of the bench table
TABLE1_COUNTS = {0: (1, 1), 74: (2, 0), 130: (1, 1), 146: (0, 2), 248: (1, 0), 485: (0, 0), 486: (0, 1)}


def enumerate_sums(elements, include_empty=True):
    """Reference tally of subset sums by explicit itertools enumeration."""
    c = Counter()
    start = 0 if include_empty else 1
    for r in range(start, len(elements) + 1):
        for combo in itertools.combinations(elements, r):
            c[sum(combo)] += 1
    return c


@pytest.fixture
def table1():
    return SubsetSumInstance(TABLE1)


@pytest.fixture
def bench():
    return MachineConfig(f0=100.0, gen_resolution=1e-6, gen_bandwidth=20e6, amp_max_freq=10e6, max_samples=100_000)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
