import math

import numpy as np
import pytest


def poisson_partial_sum(q, beta, t, terms=400):
    """Direct partial sum of sum_k q^k cos(k t - beta pi/2)."""
    k = np.arange(1, terms + 1)
    t = np.atleast_1d(np.asarray(t, dtype=float))
    return (q ** k * np.cos(np.outer(t, k) - beta * math.pi / 2)).sum(axis=1)


def sine_partial_sum(r, t, terms=200_000):
    k = np.arange(1, terms + 1, dtype=float)
    t = np.atleast_1d(np.asarray(t, dtype=float))
    return np.array([np.sum(np.sin(k * x) / k ** r) for x in t])


@pytest.fixture
def rng():
    return np.random.default_rng(42)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
