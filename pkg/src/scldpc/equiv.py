"""Equivalence transformations of exponent matrices and Min-Max reduction.

Three operations leave the cycle structure of a quasi-cyclic code with
circulant size ``p`` unchanged: permuting rows or columns, adding a constant
to a row or a column, and multiplying every entry by a unit modulo ``p``.
Min-Max searches that group for the representative with the smallest
largest entry, which is the memory order of the convolutional code it
defines.
"""

from __future__ import annotations

import itertools
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

BUDGETS = ("exact", "heuristic")


@dataclass(frozen=True)
class Transform:
    """``P -> (d * P[row_perm][:, col_perm] + r_i + c_j) mod p`` on non-null entries."""

    row_perm: tuple[int, ...]
    col_perm: tuple[int, ...]
    row_offsets: tuple[int, ...]
    col_offsets: tuple[int, ...]
    multiplier: int
    modulus: int

    def __post_init__(self):
        p = int(self.modulus)
        if p < 1:
            raise ValueError("modulus must be positive")
        if math.gcd(int(self.multiplier), p) != 1:
            raise ValueError(f"multiplier {self.multiplier} is not a unit modulo {p}")
        c, a = len(self.row_perm), len(self.col_perm)
        if sorted(self.row_perm) != list(range(c)) or sorted(self.col_perm) != list(range(a)):
            raise ValueError("row_perm and col_perm must be permutations")
        if len(self.row_offsets) != c or len(self.col_offsets) != a:
            raise ValueError("offset lengths must match the permutations")
        object.__setattr__(self, "modulus", p)
        object.__setattr__(self, "multiplier", int(self.multiplier) % p)
        for name in ("row_perm", "col_perm"):
            object.__setattr__(self, name, tuple(int(v) for v in getattr(self, name)))
        for name in ("row_offsets", "col_offsets"):
            object.__setattr__(self, name, tuple(int(v) % p for v in getattr(self, name)))

    @classmethod
    def identity(cls, c: int, a: int, modulus: int) -> Transform:
        return cls(tuple(range(c)), tuple(range(a)), (0,) * c, (0,) * a, 1, modulus)

    def compose(self, first: Transform) -> Transform:
        """The transform equal to applying ``first`` and then ``self``."""
        if first.modulus != self.modulus:
            raise ValueError("cannot compose transforms with different moduli")
        p, d2 = self.modulus, self.multiplier
        rp = tuple(first.row_perm[i] for i in self.row_perm)
        cp = tuple(first.col_perm[j] for j in self.col_perm)
        ro = tuple((d2 * first.row_offsets[self.row_perm[i]] + self.row_offsets[i]) % p
                   for i in range(len(rp)))
        co = tuple((d2 * first.col_offsets[self.col_perm[j]] + self.col_offsets[j]) % p
                   for j in range(len(cp)))
        return Transform(rp, cp, ro, co, (d2 * first.multiplier) % p, p)

    def to_dict(self) -> dict:
        return {
            "row_perm": list(self.row_perm),
            "col_perm": list(self.col_perm),
            "row_offsets": list(self.row_offsets),
            "col_offsets": list(self.col_offsets),
            "multiplier": self.multiplier,
            "modulus": self.modulus,
        }


@dataclass(frozen=True)
class MinMaxResult:
    matrix: np.ndarray
    m_h: int
    transform: Transform
    complete: bool = True
    evaluated: int = 0
    wall_ms: float = field(default=0.0, compare=False)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MinMaxResult):
            return NotImplemented
        return (np.array_equal(self.matrix, other.matrix) and self.m_h == other.m_h
                and self.transform == other.transform and self.complete == other.complete
                and self.evaluated == other.evaluated)

    def to_dict(self) -> dict:
        return {
            "m_h": self.m_h,
            "matrix": self.matrix.tolist(),
            "transform": self.transform.to_dict(),
            "complete": self.complete,
            "evaluated": self.evaluated,
            "wall_ms": round(self.wall_ms, 3),
        }


def _as_exponents(p) -> np.ndarray:
    p = np.asarray(p, dtype=np.int64)
    if p.ndim != 2:
        raise ValueError("exponent matrix must be two-dimensional")
    if (p < -1).any():
        raise ValueError("exponent entries must be >= -1")
    return p


def apply_transform(p, t: Transform) -> np.ndarray:
    p = _as_exponents(p)
    c, a = p.shape
    if (len(t.row_perm), len(t.col_perm)) != (c, a):
        raise ValueError(f"transform shape {(len(t.row_perm), len(t.col_perm))} does not match {p.shape}")
    null = p < 0
    if null.any() and t.multiplier != 1:
        raise ValueError("multiplier must be 1 for matrices with null entries")
    if p.max() >= t.modulus:
        raise ValueError("modulus must exceed every entry")
    q = p[np.ix_(t.row_perm, t.col_perm)]
    out = (t.multiplier * q + np.array(t.row_offsets)[:, None] + np.array(t.col_offsets)[None, :]) % t.modulus
    out[q < 0] = -1
    return out


def _masked_min(x: np.ndarray, axis: int) -> np.ndarray:
    big = np.iinfo(np.int64).max
    m = np.where(x >= 0, x, big).min(axis=axis)
    return np.where(m == big, 0, m)


def normalize(p) -> np.ndarray:
    """Subtract row minima, then column minima, so every line holds a zero."""
    p = _as_exponents(p)
    null = p < 0
    q = p - _masked_min(p, 1)[:, None]
    q = q - _masked_min(np.where(null, -1, q), 0)[None, :]
    q[null] = -1
    return q


def is_normalized(p) -> bool:
    p = _as_exponents(p)
    has = p >= 0
    rows_ok = all((p[i][has[i]] == 0).any() for i in range(p.shape[0]) if has[i].any())
    cols_ok = all((p[:, j][has[:, j]] == 0).any() for j in range(p.shape[1]) if has[:, j].any())
    return rows_ok and cols_ok


def units(modulus: int) -> list[int]:
    return [d for d in range(1, modulus) if math.gcd(d, modulus) == 1] or [1]


def _column_costs(v: np.ndarray, mask: np.ndarray, modulus: int) -> tuple[np.ndarray, np.ndarray]:
    """Per column, the smallest achievable max after a cyclic shift and that shift.

    ``v`` has shape ``(batch, c, a)`` with values in ``[0, modulus)``; masked
    entries are ignored.  Shifting the start of the widest circular gap to
    zero leaves ``modulus - gap`` as the largest value.
    """
    big = 2 * modulus
    s = np.sort(np.where(mask, v, big), axis=1)
    # a sentinel row keeps the gap axis non-empty for single-row matrices
    s = np.concatenate([s, np.full_like(s[:, :1, :], big)], axis=1)
    n = mask.sum(axis=0)
    first = s[:, 0, :]
    gaps = np.diff(s, axis=1)
    nxt = s[:, 1:, :]
    # the cyclic gap from the largest valid value back round to the smallest
    last_idx = (n - 1)[None, None, :]
    last = np.take_along_axis(s, np.broadcast_to(last_idx, (s.shape[0], 1, s.shape[2])), axis=1)[:, 0, :]
    wrap = first + modulus - last
    valid = np.arange(1, s.shape[1])[:, None] < n[None, :]
    gaps = np.where(valid[None], gaps, -1)
    k = gaps.argmax(axis=1)
    inner = np.take_along_axis(gaps, k[:, None, :], axis=1)[:, 0, :]
    start_inner = np.take_along_axis(nxt, k[:, None, :], axis=1)[:, 0, :]
    use_wrap = wrap >= inner
    gap = np.where(use_wrap, wrap, inner)
    start = np.where(use_wrap, first, start_inner)
    cost = modulus - gap
    shift = (modulus - start) % modulus
    return cost, shift


def _best_over_rows(q: np.ndarray, mask: np.ndarray, modulus: int, r_batch: np.ndarray):
    v = (q[None, :, :] + r_batch[:, :, None]) % modulus
    cost, shift = _column_costs(v, mask, modulus)
    total = cost.max(axis=1)
    k = int(total.argmin())
    return int(total[k]), r_batch[k], shift[k]


def _exact_for_d(q, mask, modulus, chunk, limit):
    c = q.shape[0]
    best = (np.iinfo(np.int64).max, None, None)
    n_total = modulus ** (c - 1)
    evaluated = 0
    lo = 0
    while lo < n_total:
        step = chunk if limit is None else min(chunk, limit - evaluated)
        if step <= 0:
            return best, evaluated, False
        idx = np.arange(lo, min(n_total, lo + step), dtype=np.int64)
        lo += idx.size
        r = np.zeros((idx.size, c), dtype=np.int64)
        rem = idx
        for i in range(c - 1, 0, -1):
            r[:, i] = rem % modulus
            rem = rem // modulus
        val, rv, sh = _best_over_rows(q, mask, modulus, r)
        evaluated += idx.size
        if val < best[0]:
            best = (val, rv.copy(), sh.copy())
            if val == 0:
                break
    return best, evaluated, True


def _heuristic_for_d(q, mask, modulus, rng, restarts):
    """Coordinate descent on the row offsets from random starts."""
    c = q.shape[0]
    best = (np.iinfo(np.int64).max, None, None)
    evaluated = 0
    cand = np.arange(modulus, dtype=np.int64)
    for _ in range(restarts):
        r = rng.integers(0, modulus, size=c)
        r[0] = 0
        cur, _, sh = _best_over_rows(q, mask, modulus, r[None, :])
        improved = True
        while improved:
            improved = False
            for i in range(1, c):
                batch = np.repeat(r[None, :], modulus, axis=0)
                batch[:, i] = cand
                val, rv, shv = _best_over_rows(q, mask, modulus, batch)
                evaluated += modulus
                if val < cur:
                    cur, r, sh, improved = val, rv.copy(), shv, True
        if cur < best[0]:
            best = (cur, r.copy(), sh.copy())
    return best, evaluated


def minmax_reduce(p, modulus: int, budget: str = "exact", restarts: int = 20, seed: int = 0,
                  threads: int = 1, node_limit: int | None = None, chunk: int = 4096) -> MinMaxResult:
    """Smallest largest entry over unit multipliers and row/column offsets mod ``modulus``.

    Row offsets are searched (``r_0 = 0`` without loss of generality) and the
    best column offsets follow in closed form.  ``budget="exact"`` enumerates
    every offset vector unless ``node_limit`` offset vectors per multiplier
    are exceeded; ``"heuristic"`` runs seeded coordinate descent.  The input
    itself is always a candidate, so the result never gets worse.
    """
    if budget not in BUDGETS:
        raise ValueError(f"budget must be one of {BUDGETS}")
    p = _as_exponents(p)
    c, a = p.shape
    if p.max() >= modulus:
        raise ValueError(f"modulus {modulus} must exceed the largest entry {int(p.max())}")
    t0 = time.perf_counter()
    mask = p >= 0
    if not mask.any(axis=0).all():
        raise ValueError("every column needs a non-null entry")
    ds = units(modulus) if mask.all() else [1]

    def run(d):
        q = np.where(mask, (d * p) % modulus, 0)
        if budget == "exact":
            best, n, done = _exact_for_d(q, mask, modulus, chunk, node_limit)
            return d, best, n, done
        rng = np.random.default_rng([seed, d])
        best, n = _heuristic_for_d(q, mask, modulus, rng, restarts)
        return d, best, n, False

    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            results = list(pool.map(run, ds))
    else:
        results = [run(d) for d in ds]

    ident = Transform.identity(c, a, modulus)
    best_t, best_val = ident, int(p.max())
    evaluated, complete = 0, budget == "exact"
    # deterministic reduction: smallest value, then smallest multiplier
    for d, (val, r, shift), n, done in results:
        evaluated += n
        complete = complete and done
        if r is not None and val < best_val:
            best_val = val
            best_t = Transform(tuple(range(c)), tuple(range(a)), tuple(int(x) for x in r),
                               tuple(int(x) for x in shift), d, modulus)
    out = apply_transform(p, best_t)
    return MinMaxResult(out, int(out.max()), best_t, complete, evaluated,
                        (time.perf_counter() - t0) * 1e3)


def brute_force_minmax(p, modulus: int) -> int:
    """Minimum largest entry over the full group, permutations included; toy sizes only."""
    p = _as_exponents(p)
    c, a = p.shape
    mask = p >= 0
    ds = units(modulus) if mask.all() else [1]
    offsets = np.array(list(itertools.product(range(modulus), repeat=c + a)), dtype=np.int64)
    best = int(p.max())
    for rp in itertools.permutations(range(c)):
        for cp in itertools.permutations(range(a)):
            q = p[np.ix_(rp, cp)]
            m = mask[np.ix_(rp, cp)]
            for d in ds:
                v = (d * q[None] + offsets[:, :c, None] + offsets[:, None, c:]) % modulus
                v = np.where(m[None], v, -1)
                best = min(best, int(v.reshape(len(offsets), -1).max(axis=1).min()))
    return best
