"""Exhaustive and heuristic searches for the smallest memory at a target girth.

Both exhaustive searches share one engine: candidate columns are listed in
a fixed order, a partial solution is an increasing sequence of candidate
indices (so each unordered column set is visited once), and the set of
still-admissible candidates is kept as a Python integer bitmask.  Adding a
column removes every candidate that would close a short cycle with the
columns chosen so far; the removal masks come from precomputed tables
indexed by difference value, so each node costs a handful of big-integer
operations.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from scldpc import bounds
from scldpc.core import SymbolicMatrix, SyndromeFormer, symbolic_from_syndrome_former
from scldpc.cycles import girth_at_least, shortest_cycle

STATUSES = ("found", "exhausted_no_solution", "budget_exceeded")


@dataclass(frozen=True)
class SearchSpec:
    representation: str
    a: int
    c: int
    w: int
    g: int
    lo: int | None = None
    hi: int | None = None
    node_limit: int | None = None
    time_limit: float | None = None
    mode: str = "exhaustive"
    seed: int = 0
    restarts: int = 50

    def __post_init__(self):
        if self.representation not in ("binary", "symbolic"):
            raise ValueError("representation must be 'binary' or 'symbolic'")
        if self.mode not in ("exhaustive", "heuristic"):
            raise ValueError("mode must be 'exhaustive' or 'heuristic'")
        if self.a < 1 or self.c < 1 or self.w < 1:
            raise ValueError("a, c and w must be positive")
        if self.g % 2 or not 4 <= self.g <= 12:
            raise ValueError("girth target must be even, between 4 and 12")


@dataclass
class SearchOutcome:
    status: str
    value: int | None
    quantity: str
    witness: SymbolicMatrix | None
    nodes: int
    wall_ms: float
    scanned: list[int] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "quantity": self.quantity,
            "value": self.value,
            "witness": None if self.witness is None else str(self.witness),
            "nodes": self.nodes,
            "wall_ms": round(self.wall_ms, 3),
            "scanned": self.scanned,
        }


class _Budget(Exception):
    pass


class _Engine:
    """Depth-first search for ``a`` mutually compatible candidates.

    ``kill(chosen, y)`` returns the bitmask of candidates that become
    inadmissible once ``y`` joins ``chosen``; ``accept(chosen, y)``, when
    given, is an extra test run on the partial solution before descending.
    """

    def __init__(self, n_cand: int, a: int, kill: Callable, accept: Callable | None = None,
                 node_limit: int | None = None, deadline: float | None = None):
        self.n_cand = n_cand
        self.a = a
        self.kill = kill
        self.accept = accept
        self.node_limit = node_limit
        self.deadline = deadline
        self.nodes = 0

    def run(self, roots: Sequence[int], admissible: int) -> list[int] | None:
        for y in roots:
            mask = admissible & ~((2 << y) - 1)
            res = self._descend([], y, mask)
            if res is not None:
                return res
        return None

    def _descend(self, chosen: list[int], y: int, mask: int) -> list[int] | None:
        self.nodes += 1
        if self.node_limit is not None and self.nodes > self.node_limit:
            raise _Budget
        if self.deadline is not None and not self.nodes & 1023 and time.perf_counter() > self.deadline:
            raise _Budget
        if self.accept is not None and not self.accept(chosen, y):
            return None
        mask &= ~self.kill(chosen, y)
        chosen = chosen + [y]
        need = self.a - len(chosen)
        if need == 0:
            return chosen
        while mask and mask.bit_count() >= need:
            low = mask & -mask
            z = low.bit_length() - 1
            mask ^= low
            res = self._descend(chosen, z, mask)
            if res is not None:
                return res
        return None


def _by_value(values: Sequence[int]) -> dict[int, int]:
    table: dict[int, int] = {}
    for idx, v in enumerate(values):
        table[v] = table.get(v, 0) | (1 << idx)
    return table


# -- symbolic (monomial, w = c) ----------------------------------------------

def _monomial_columns(c: int, m: int) -> list[tuple[int, ...]]:
    """Exponent columns with entries in ``[0, m]`` and at least one zero, sorted."""
    return [col for col in itertools.product(range(m + 1), repeat=c) if min(col) == 0]


def _c3_orbit_min(cols: list[tuple[int, int, int]], index: dict) -> list[int]:
    """Smallest index in each column's orbit under row permutations and time reversal."""
    out = []
    for col in cols:
        best = index[col]
        top = max(col)
        for perm in itertools.permutations(range(3)):
            img = tuple(col[i] for i in perm)
            rev = tuple(top - v for v in img)
            rev = tuple(v - min(rev) for v in rev)
            best = min(best, index[img], index[rev])
        out.append(best)
    return out


def _c3_engine(m: int, a: int, g: int, node_limit, deadline):
    """Monomial ``c = 3`` search with the difference-chain conditions of girth 6 and 8."""
    cols = _monomial_columns(3, m)
    index = {col: k for k, col in enumerate(cols)}
    A = [p1 - p0 for p0, p1, _ in cols]
    B = [p2 - p1 for _, p1, p2 in cols]
    S = [p2 - p0 for p0, _, p2 in cols]
    tA, tB, tS = _by_value(A), _by_value(B), _by_value(S)
    orbit = _c3_orbit_min(cols, index)

    def kill(chosen, y):
        if g <= 6:
            return tA.get(A[y], 0) | tB.get(B[y], 0) | tS.get(S[y], 0)
        ay, by, sy = A[y], B[y], S[y]
        out = 0
        for j in chosen + [y]:
            out |= tA.get(sy - B[j], 0) | tA.get(S[j] - by, 0)
            out |= tB.get(sy - A[j], 0) | tB.get(S[j] - ay, 0)
            out |= tS.get(A[j] + by, 0) | tS.get(ay + B[j], 0)
        return out

    accept = None
    if g > 8:
        def accept(chosen, y):
            h = SymbolicMatrix.from_exponents(np.array([cols[k] for k in chosen + [y]]).T)
            return shortest_cycle(h, g - 2, starts=[len(chosen)]) is None

    engine = _Engine(len(cols), a, kill, accept, node_limit, deadline)

    def solve():
        for y in range(len(cols)):
            if orbit[y] != y:
                continue
            admissible = sum(1 << z for z in range(y + 1, len(cols)) if orbit[z] >= y)
            res = engine.run([y], admissible | (1 << y))
            if res is not None:
                return [cols[k] for k in res]
        return None

    return engine, solve


def _generic_engine(c: int, m: int, a: int, g: int, node_limit, deadline):
    """Monomial search for any ``c``; row-pair differences plus an explicit cycle test."""
    cols = _monomial_columns(c, m)
    pairs = list(itertools.combinations(range(c), 2))
    keys = [[(i1, i2, col[i2] - col[i1]) for i1, i2 in pairs] for col in cols]
    table: dict = {}
    for idx, ks in enumerate(keys):
        for k in ks:
            table[k] = table.get(k, 0) | (1 << idx)

    def kill(chosen, y):
        out = 0
        for k in keys[y]:
            out |= table[k]
        return out

    accept = None
    if g > 6:
        def accept(chosen, y):
            h = SymbolicMatrix.from_exponents(np.array([cols[k] for k in chosen + [y]]).T)
            return shortest_cycle(h, g - 2, starts=[len(chosen)]) is None

    engine = _Engine(len(cols), a, kill, accept, node_limit, deadline)

    def solve():
        # some column can be shifted to hold a zero in the first row
        roots = [k for k, col in enumerate(cols) if col[0] == 0]
        res = engine.run(roots, (1 << len(cols)) - 1)
        return None if res is None else [cols[k] for k in res]

    return engine, solve


def _scan(spec: SearchSpec, lo: int, hi: int, build, quantity: str) -> SearchOutcome:
    if hi < lo:
        raise ValueError(f"empty scan range [{lo}, {hi}]")
    t0 = time.perf_counter()
    deadline = None if spec.time_limit is None else t0 + spec.time_limit
    nodes = 0
    scanned = []
    for value in range(lo, hi + 1):
        left = None if spec.node_limit is None else spec.node_limit - nodes
        engine, solve = build(value, left, deadline)
        scanned.append(value)
        try:
            witness = solve()
        except _Budget:
            nodes += engine.nodes
            return SearchOutcome("budget_exceeded", None, quantity, None, nodes,
                                 (time.perf_counter() - t0) * 1e3, scanned)
        nodes += engine.nodes
        if witness is not None:
            if not girth_at_least(witness, spec.g):
                raise AssertionError("search produced a witness below the girth target")
            return SearchOutcome("found", value, quantity, witness, nodes,
                                 (time.perf_counter() - t0) * 1e3, scanned)
    return SearchOutcome("exhausted_no_solution", None, quantity, None, nodes,
                         (time.perf_counter() - t0) * 1e3, scanned)


def _symbolic_lower(spec: SearchSpec) -> int:
    try:
        return bounds.memory_bound(bounds.BoundQuery("type1", spec.a, spec.c, spec.w, spec.g))
    except bounds.NoBoundError:
        try:
            return bounds.memory_bound(bounds.BoundQuery("typez", spec.a, spec.c, spec.w, spec.g))
        except bounds.NoBoundError:
            return 0


def exhaustive_min_mh(spec: SearchSpec) -> SearchOutcome:
    """Smallest ``m_h`` of a monomial ``w = c`` code with girth at least ``spec.g``.

    Columns are taken with a zero entry (column offsets), as an unordered set
    (column permutations), and for ``c = 3`` additionally modulo row
    permutations and time reversal.  The scan starts at the bound, so the
    first hit is the minimum.
    """
    if spec.representation != "symbolic":
        raise ValueError("exhaustive_min_mh needs a symbolic spec")
    if spec.w != spec.c:
        raise ValueError("monomial search needs w = c")
    lo = _symbolic_lower(spec) if spec.lo is None else spec.lo
    hi = lo + 64 if spec.hi is None else spec.hi
    if lo < _symbolic_lower(spec):
        raise ValueError("scan must start at or above the lower bound")

    def build(m, left, deadline):
        def wrap(solve):
            def inner():
                cols = solve()
                return None if cols is None else SymbolicMatrix.from_exponents(np.array(cols).T)
            return inner

        if spec.c == 3 and spec.g <= 10:
            engine, solve = _c3_engine(m, spec.a, spec.g, left, deadline)
        else:
            engine, solve = _generic_engine(spec.c, m, spec.a, spec.g, left, deadline)
        return engine, wrap(solve)

    return _scan(spec, lo, hi, build, "m_h")


def _rcc_mask(batch: np.ndarray) -> np.ndarray:
    """Vectorized 4-cycle test for a stack of null-free exponent matrices."""
    n, c, a = batch.shape
    ok = np.ones(n, dtype=bool)
    for i1, i2 in itertools.combinations(range(c), 2):
        d = np.sort(batch[:, i2, :] - batch[:, i1, :], axis=1)
        ok &= ~(np.diff(d, axis=1) == 0).any(axis=1)
    return ok


def brute_force_min_mh(c: int, a: int, g: int, m_max: int, chunk: int = 1 << 16) -> int | None:
    """Smallest ``m_h`` by testing every ``c x a`` exponent matrix; tiny shapes only.

    No symmetry is used.  A vectorized 4-cycle filter discards most matrices
    before the exact girth test.
    """
    for m in range(m_max + 1):
        total = (m + 1) ** (c * a)
        for lo in range(0, total, chunk):
            idx = np.arange(lo, min(total, lo + chunk), dtype=np.int64)
            digits = np.empty((idx.size, c * a), dtype=np.int64)
            rem = idx
            for k in range(c * a - 1, -1, -1):
                digits[:, k] = rem % (m + 1)
                rem = rem // (m + 1)
            batch = digits.reshape(-1, c, a)
            if g > 4:
                batch = batch[_rcc_mask(batch)]
            for p in batch:
                if girth_at_least(SymbolicMatrix.from_exponents(p), g):
                    return m
    return None


# -- binary syndrome former ---------------------------------------------------

def _binary_columns(L: int, w: int, c: int) -> list[tuple[int, ...]]:
    """Weight-``w`` row sets of ``[0, L)`` whose first one lies in the first block."""
    return [s for s in itertools.combinations(range(L), w) if s[0] < c]


def _binary_engine(L: int, a: int, w: int, c: int, g: int, node_limit, deadline):
    cols = _binary_columns(L, w, c)
    keys = []
    valid = []
    for col in cols:
        ks = [(r2 - r1, r1 % c) for r1, r2 in itertools.combinations(col, 2)]
        keys.append(ks)
        valid.append(len(set(ks)) == len(ks))
    table: dict = {}
    for idx, ks in enumerate(keys):
        for k in ks:
            table[k] = table.get(k, 0) | (1 << idx)

    def kill(chosen, y):
        out = 0
        for k in keys[y]:
            out |= table[k]
        return out

    def to_symbolic(idxs):
        bits = np.zeros((L, len(idxs)), dtype=np.uint8)
        for j, k in enumerate(idxs):
            bits[list(cols[k]), j] = 1
        return symbolic_from_syndrome_former(SyndromeFormer(bits, c))

    accept = None
    if g > 6:
        def accept(chosen, y):
            return shortest_cycle(to_symbolic(chosen + [y]), g - 2, starts=[len(chosen)]) is None

    engine = _Engine(len(cols), a, kill, accept, node_limit, deadline)
    admissible = sum(1 << k for k, ok in enumerate(valid) if ok)

    def solve():
        # a global row shift puts a one in row 0, and that column sorts first
        roots = [k for k, col in enumerate(cols) if col[0] == 0 and valid[k]]
        res = engine.run(roots, admissible)
        return None if res is None else to_symbolic(res)

    return engine, solve


def exhaustive_min_Lh(spec: SearchSpec) -> SearchOutcome:
    """Smallest height ``L_h`` of ``H_s^T`` with all columns of weight ``w`` and girth ``>= g``.

    A column's ones can be moved by whole blocks, so each column starts in the
    first ``c`` rows; a global row shift puts a one in row 0; columns form an
    unordered set.  ``L_h`` is scanned upwards from the bound.
    """
    if spec.representation != "binary":
        raise ValueError("exhaustive_min_Lh needs a binary spec")
    bound_lo = bounds.bound(bounds.BoundQuery("typez", spec.a, spec.c, spec.w, spec.g)).value
    lo = bound_lo if spec.lo is None else spec.lo
    if lo < bound_lo:
        raise ValueError("scan must start at or above the lower bound")
    hi = lo + 64 if spec.hi is None else spec.hi

    def build(L, left, deadline):
        return _binary_engine(L, spec.a, spec.w, spec.c, spec.g, left, deadline)

    return _scan(spec, lo, hi, build, "L_h")


def height_of(h: SymbolicMatrix) -> int:
    """Rows of ``H_s^T`` actually spanned: last one's row index plus one."""
    return max(e * h.c + i for i, _, e in h.edges()) + 1


# -- heuristic ----------------------------------------------------------------

def _greedy_fill(cols, kill, a, rng, accept=None) -> list[int] | None:
    """Random-order greedy insertion of compatible columns."""
    order = rng.permutation(len(cols)).tolist()
    banned = 0
    chosen: list[int] = []
    for y in order:
        if banned >> y & 1:
            continue
        if accept is not None and not accept(chosen, y):
            banned |= 1 << y
            continue
        banned |= kill(chosen, y) | (1 << y)
        chosen.append(y)
        if len(chosen) == a:
            return chosen
    return None


def heuristic_min_mh(spec: SearchSpec, start: int | None = None) -> SearchOutcome:
    """Seeded randomized greedy search, lowering ``m_h`` until a level fails.

    The outcome never claims minimality; ``value`` is the best level found.
    """
    if spec.w != spec.c:
        raise ValueError("heuristic search builds monomial codes and needs w = c")
    t0 = time.perf_counter()
    rng = np.random.default_rng(spec.seed)
    lower = _symbolic_lower(spec)
    m = start if start is not None else (spec.hi if spec.hi is not None else max(lower, 1) * 4 + 8)
    best = None
    nodes = 0
    scanned = []
    deadline = None if spec.time_limit is None else t0 + spec.time_limit
    while m >= lower:
        cols = _monomial_columns(spec.c, m)
        pairs = list(itertools.combinations(range(spec.c), 2))
        keys = [[(i1, i2, col[i2] - col[i1]) for i1, i2 in pairs] for col in cols]
        table: dict = {}
        for idx, ks in enumerate(keys):
            for k in ks:
                table[k] = table.get(k, 0) | (1 << idx)

        def kill(chosen, y, keys=keys, table=table):
            out = 0
            for k in keys[y]:
                out |= table[k]
            return out

        accept = None
        if spec.g > 6:
            def accept(chosen, y, cols=cols):
                h = SymbolicMatrix.from_exponents(np.array([cols[k] for k in chosen + [y]]).T)
                return shortest_cycle(h, spec.g - 2, starts=[len(chosen)]) is None

        scanned.append(m)
        hit = None
        for _ in range(spec.restarts):
            nodes += 1
            res = _greedy_fill(cols, kill, spec.a, rng, accept)
            if res is not None:
                hit = SymbolicMatrix.from_exponents(np.array([cols[k] for k in res]).T)
                break
            if deadline is not None and time.perf_counter() > deadline:
                break
        if hit is None:
            break
        best = hit
        m = hit.m_h - 1
        if deadline is not None and time.perf_counter() > deadline:
            break
    wall = (time.perf_counter() - t0) * 1e3
    if best is None:
        return SearchOutcome("budget_exceeded", None, "m_h", None, nodes, wall, scanned)
    if not girth_at_least(best, spec.g):
        raise AssertionError("heuristic produced a witness below the girth target")
    return SearchOutcome("found", best.m_h, "m_h", best, nodes, wall, scanned)


# -- search-space sizes -------------------------------------------------------

@dataclass(frozen=True)
class SpaceSize:
    stages: tuple[int, ...]
    clamped: bool = False

    @property
    def final(self) -> int:
        return self.stages[-1]

    def to_dict(self) -> dict:
        return {"stages": [str(s) for s in self.stages], "final": str(self.final), "clamped": self.clamped}


def _comb(n: int, k: int) -> int:
    return math.comb(n, k) if 0 <= k <= n else 0


def search_space_size(representation: str, a: int, c: int, w: int | None = None,
                      m_h: int | None = None, L_h: int | None = None,
                      variant: str = "printed") -> SpaceSize:
    """Matrix counts after each successive symmetry reduction, exact integers.

    A negative argument inside the final binomial (possible for small
    parameters) is clamped to zero and flagged.  For the binary count,
    ``variant="corrected"`` replaces the per-column term ``C(L_h - i, w - i)``
    by ``C(L_h - i, w - 1)``, the number of columns whose first one sits in
    row ``i - 1``; the printed term undercounts whenever ``c >= 2``.
    """
    if variant not in ("printed", "corrected"):
        raise ValueError("variant must be 'printed' or 'corrected'")
    if a < 1 or c < 1:
        raise ValueError("a and c must be positive")
    clamped = False
    if representation == "binary":
        if w is None or L_h is None or w < 1 or L_h < w:
            raise ValueError("binary count needs 1 <= w <= L_h")
        first = _comb(L_h - 1, w - 1)
        lower = (lambda i: w - i) if variant == "printed" else (lambda i: w - 1)
        per_col = sum(_comb(L_h - i, lower(i)) for i in range(1, c + 1))
        s1 = _comb(_comb(L_h, w), a)
        s2 = first * _comb(_comb(L_h, w), a - 1)
        s3 = first * _comb(per_col, a - 1)
        inner = sum(per_col - j for j in range(1, first + 1))
        if inner < 0:
            inner, clamped = 0, True
        s4 = _comb(inner, a - 1)
        return SpaceSize((s1, s2, s3, s4), clamped)
    if representation == "symbolic":
        if m_h is None or m_h < 0:
            raise ValueError("symbolic count needs m_h >= 0")
        q = m_h + 1
        with_zero = q ** c - m_h ** c
        s1 = q ** (a * c)
        s2 = _comb(q ** c, a)
        s3 = _comb(with_zero, a)
        s4 = q ** (c - 1) * _comb(with_zero, a - 1)
        inner = sum(with_zero - j for j in range(1, q ** (c - 1) + 1))
        if inner < 0:
            inner, clamped = 0, True
        s5 = _comb(inner, a - 1)
        return SpaceSize((s1, s2, s3, s4, s5), clamped)
    raise ValueError("representation must be 'binary' or 'symbolic'")


def enumerate_binary_classes(a: int, c: int, w: int, L_h: int) -> int:
    """Count column sets surviving the binary reductions, by explicit enumeration."""
    cols = _binary_columns(L_h, w, c)
    count = 0
    for combo in itertools.combinations(range(len(cols)), a):
        if cols[combo[0]][0] == 0:
            count += 1
    return count


def enumerate_symbolic_classes(a: int, c: int, m_h: int) -> int:
    """Count column sets surviving the symbolic reductions, by explicit enumeration."""
    cols = _monomial_columns(c, m_h)
    count = 0
    for combo in itertools.combinations(range(len(cols)), a):
        if cols[combo[0]][0] == 0:
            count += 1
    return count
