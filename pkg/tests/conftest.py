import numpy as np
import pytest

from scldpc.core import SymbolicMatrix


def random_exponents(rng: np.random.Generator, c: int, a: int, m_max: int, null_prob: float = 0.0) -> np.ndarray:
    """Random exponent matrix; every column keeps at least one entry."""
    p = rng.integers(0, m_max + 1, size=(c, a))
    if null_prob:
        drop = rng.random((c, a)) < null_prob
        for j in range(a):
            if drop[:, j].all():
                drop[rng.integers(c), j] = False
        p = np.where(drop, -1, p)
    return p


def random_symbolic(rng: np.random.Generator, c: int, a: int, m_max: int, max_terms: int = 2) -> SymbolicMatrix:
    rows = []
    for _ in range(c):
        row = []
        for _ in range(a):
            k = int(rng.integers(0, max_terms + 1))
            row.append(tuple(rng.choice(m_max + 1, size=min(k, m_max + 1), replace=False).tolist()))
        rows.append(row)
    for j in range(a):
        if not any(rows[i][j] for i in range(c)):
            rows[int(rng.integers(c))][j] = (int(rng.integers(m_max + 1)),)
    return SymbolicMatrix(tuple(tuple(r) for r in rows))


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
