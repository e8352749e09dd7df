import cmath
import math

import numpy as np
import pytest

from gabor_blocks.core import GaborSystem


def dft_oracle(v):
    """Direct summation of the normalized DFT with cmath, no numpy matmul."""
    n = len(v)
    return np.array([
        sum(v[j] * cmath.exp(-2j * math.pi * k * j / n) for j in range(n)) / math.sqrt(n)
        for k in range(n)
    ])


def frame_vectors_oracle(g, L, K):
    """M_l T_k g built entry by entry from the definitions."""
    n = len(g)
    out = []
    for k in sorted(set(K)):
        for l in sorted(set(L)):
            out.append(np.array([cmath.exp(2j * math.pi * l * j / n) * g[(j - k) % n] for j in range(n)]))
    return out


def frame_operator_oracle(g, L, K):
    f = np.stack(frame_vectors_oracle(g, L, K), axis=1)
    return f @ f.conj().T


def subgroup(n, order):
    return [t * (n // order) for t in range(order)]


def subgroups(n):
    return [subgroup(n, d) for d in range(1, n + 1) if n % d == 0]


def random_window(rng, n):
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)


def random_subset(rng, n, size=None):
    size = size if size is not None else int(rng.integers(1, n + 1))
    return sorted(int(x) for x in rng.choice(n, size=size, replace=False))


def random_system(rng, n, L=None, K=None):
    return GaborSystem(
        random_window(rng, n),
        L if L is not None else random_subset(rng, n),
        K if K is not None else random_subset(rng, n),
    )


def offdiag_max(a):
    a = np.asarray(a)
    return float(np.max(np.abs(a - np.diag(np.diag(a))))) if a.shape[0] > 1 else 0.0


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


_ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_line():
    """Record a one-line verdict; printed in the terminal summary."""

    def record(number, passed, detail):
        line = f"ACCEPTANCE {number}: {'PASS' if passed else 'FAIL'} {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
