import numpy as np
import pytest
from functools import reduce


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def dense_ladder(m, cutoff):
    """Annihilators on the truncated full Fock space ``cutoff^m`` (mode 1 most significant)."""
    a = np.diag(np.sqrt(np.arange(1, cutoff)), 1)
    eye = np.eye(cutoff)
    return [reduce(np.kron, [a if k == j else eye for k in range(m)]) for j in range(m)]


def full_index(occ, cutoff):
    k = 0
    for n in occ:
        k = k * cutoff + n
    return k


def pytest_terminal_summary(terminalreporter):
    """Echo the acceptance PASS/FAIL lines, which capture would otherwise hide."""
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
