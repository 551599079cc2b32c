"""Explicit girth-6 families with ``w = c = 3`` and small memory order."""

from __future__ import annotations

import math

import numpy as np

from scldpc import corpus
from scldpc.core import SymbolicMatrix, hstack
from scldpc.cycles import girth_at_least

FAMILIES = ("type1", "type2", "type3", "mixed")


def _type1_block(k: int) -> np.ndarray:
    """The ``a = 2k + 1`` monomial matrix; layout depends on the parity of ``k``."""
    up = np.arange(k + 1)
    if k % 2 == 0:
        row0 = [k] * (k + 1) + [0] * k
        row1 = list(up) + list(range(1, k + 1))
        row2 = list(up[::-1]) + list(range(k, 0, -1))
    else:
        row0 = [k] * k + [0] * (k + 1)
        row1 = list(range(k)) + list(up)
        row2 = list(range(k - 1, -1, -1)) + list(up[::-1])
    return np.array([row0, row1, row2], dtype=np.int64)


def construct_type1_g6(a: int) -> np.ndarray:
    """Monomial exponent matrix with girth >= 6 and ``m_h = ceil((a-1)/2)``.

    Odd ``a = 2k+1`` is built directly; even ``a`` drops the rightmost column
    of the ``a + 1`` matrix.
    """
    if a < 3:
        raise ValueError("type1 construction needs a >= 3")
    k = a // 2
    p = _type1_block(k)
    return p[:, :a]


def _binomial_blocks(k: int) -> list[list[list[tuple[int, ...]]]]:
    """Rows 1 and 2 of the first binomial block; the other two are row rotations."""
    if k % 2 == 0:
        left = [(t, k + 1 - t) for t in range(1, k // 2 + 1)]
        right = [(t, k - t) for t in range(0, k // 2)]
    else:
        left = [(t, k + 1 - t) for t in range(1, (k - 1) // 2 + 1)]
        right = [(t, k - t) for t in range(0, (k + 1) // 2)]
    null = [()] * k
    row_a = left + [(0,)] * len(right)
    row_b = [(0,)] * len(left) + right
    return [
        [null, row_a, row_b],
        [row_b, null, row_a],
        [row_a, row_b, null],
    ]


def type2_blocks(k: int) -> list[SymbolicMatrix]:
    return [SymbolicMatrix(tuple(tuple(r) for r in blk)) for blk in _binomial_blocks(k)]


def construct_type2_g6(a: int) -> SymbolicMatrix:
    """Mixed monomial/binomial matrix with three ``3 x k`` blocks, ``k = ceil(a/3)``.

    Surplus columns are dropped from the right, i.e. from the last block first.
    """
    if a < 3:
        raise ValueError("type2 construction needs a >= 3")
    k = math.ceil(a / 3)
    full = hstack(*type2_blocks(k))
    return full.select_columns(range(a))


def trinomial_block(group: list[tuple[int, int, int]]) -> SymbolicMatrix:
    """Each trinomial placed once per row, on a block diagonal."""
    n = len(group)
    rows = []
    for r in range(3):
        row = [()] * (3 * n)
        for t, tri in enumerate(group):
            row[r * n + t] = tri
        rows.append(tuple(row))
    return SymbolicMatrix(tuple(rows))


def construct_type3_g6(a: int) -> SymbolicMatrix:
    groups = corpus.trinomial_groups()
    if a not in groups:
        raise ValueError(f"no PDF group in corpus for a = {a}; available: {sorted(groups)}")
    return trinomial_block(groups[a])


def construct_mixed_g6(a_trinomial: int, k_monomial: int) -> SymbolicMatrix:
    """Trinomial block followed by the ``2k + 1``-column monomial matrix."""
    if k_monomial < 1:
        raise ValueError("monomial part needs k >= 1")
    tri = construct_type3_g6(a_trinomial)
    mono = SymbolicMatrix.from_exponents(_type1_block(k_monomial))
    return hstack(tri, mono)


def construct(family: str, a: int, k: int | None = None) -> SymbolicMatrix:
    """Dispatch by family name and check the girth-6 guarantee before returning."""
    if family == "type1":
        h = SymbolicMatrix.from_exponents(construct_type1_g6(a))
    elif family == "type2":
        h = construct_type2_g6(a)
    elif family == "type3":
        h = construct_type3_g6(a)
    elif family == "mixed":
        if k is None:
            raise ValueError("mixed construction needs k")
        h = construct_mixed_g6(a, k)
    else:
        raise ValueError(f"unknown family {family!r}; choose from {FAMILIES}")
    if not girth_at_least(h, 6):
        raise RuntimeError(f"{family} construction for a={a} produced a 4-cycle")
    return h
