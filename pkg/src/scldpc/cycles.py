"""Cycles of the Tanner graph of a time-invariant SC-LDPC-CC.

The infinite Tanner graph is a cover of the small base graph with ``c`` check
nodes and ``a`` variable nodes, where the edge for exponent ``e`` of entry
``(i, j)`` carries the label ``e``: variable ``(j, t)`` is joined to check
``(i, t + e)``.  A cycle of length ``2L`` in the cover projects to a closed,
non-backtracking walk of ``2L`` steps whose signed label sum is zero, and any
such walk lifts to a closed non-backtracking walk that contains a cycle no
longer than itself.  Girth is therefore the length of the shortest zero-sum
closed non-backtracking walk, which we find by meeting two half-walks of
``L`` steps in the middle.
"""

from __future__ import annotations

import itertools
from collections import defaultdict, deque
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from scldpc.core import SymbolicMatrix, SyndromeFormer, expand_parity_check

MAX_CAP = 12


@dataclass(frozen=True)
class DifferenceRecord:
    column: int
    start_row: int
    delta: int
    start_level: int
    end_level: int


def differences(hs: SyndromeFormer, c: int | None = None) -> list[DifferenceRecord]:
    """All position differences between pairs of ones in each column of ``H_s^T``."""
    c = hs.c if c is None else c
    out = []
    for col in range(hs.a):
        ones = np.flatnonzero(hs.bits[:, col]).tolist()
        for r1, r2 in itertools.combinations(ones, 2):
            out.append(DifferenceRecord(col, r1, r2 - r1, r1 % c, r2 % c))
    return out


def _check_cap(g_cap: int) -> None:
    if g_cap % 2 or not 4 <= g_cap <= MAX_CAP:
        raise ValueError(f"girth cap must be an even number in [4, {MAX_CAP}], got {g_cap}")


class _BaseGraph:
    """Labelled base graph; edge ids index ``h.edges()``."""

    def __init__(self, h: SymbolicMatrix):
        self.h = h
        self.var_adj = [[] for _ in range(h.a)]
        self.chk_adj = [[] for _ in range(h.c)]
        for eid, (i, j, e) in enumerate(h.edges()):
            self.var_adj[j].append((eid, i, e))
            self.chk_adj[i].append((eid, j, e))

    def step(self, layer, modulus):
        """Extend every half-walk by one non-backtracking step."""
        out = []
        for on_var, node, volt, first, last in layer:
            if on_var:
                for eid, i, e in self.var_adj[node]:
                    if eid != last:
                        v = volt + e
                        out.append((False, i, v % modulus if modulus else v, eid if first < 0 else first, eid))
            else:
                for eid, j, e in self.chk_adj[node]:
                    if eid != last:
                        v = volt - e
                        out.append((True, j, v % modulus if modulus else v, first, eid))
        return out


def _closes(layer) -> bool:
    """Do two half-walks meet with distinct first and distinct last edges?"""
    seen = {}
    for on_var, node, volt, first, last in layer:
        key = (on_var, node, volt)
        st = seen.get(key)
        if st is None:
            seen[key] = [first, last, False, False]
            continue
        if first != st[0]:
            st[2] = True
        if last != st[1]:
            st[3] = True
        if st[2] and st[3]:
            return True
    return False


def shortest_cycle(h: SymbolicMatrix, g_cap: int = MAX_CAP, starts: Iterable[int] | None = None,
                   modulus: int | None = None) -> int | None:
    """Length of the shortest cycle through any variable node in ``starts``.

    Returns ``None`` when no cycle of length ``<= g_cap`` passes through them.
    With ``modulus`` the labels are taken modulo ``p``, which gives the
    tail-biting (quasi-cyclic) graph with circulant size ``p`` instead.
    """
    graph = _BaseGraph(h)
    starts = range(h.a) if starts is None else list(starts)
    layers = {s: [(True, s, 0, -1, -1)] for s in starts}
    for half in range(1, g_cap // 2 + 1):
        for s in starts:
            layers[s] = graph.step(layers[s], modulus)
        if half >= 2 and any(_closes(layers[s]) for s in starts):
            return 2 * half
    return None


def girth(h: SymbolicMatrix, g_cap: int = MAX_CAP, modulus: int | None = None) -> int | None:
    """Girth of the infinite Tanner graph, or ``None`` if it exceeds ``g_cap``."""
    _check_cap(g_cap)
    return shortest_cycle(h, g_cap, modulus=modulus)


def girth_at_least(h: SymbolicMatrix, g: int) -> bool:
    if g <= 4:
        return True
    found = shortest_cycle(h, g - 2)
    return found is None


def cycle_spectrum(h: SymbolicMatrix, max_len: int = MAX_CAP, return_cycles: bool = False):
    """Count cycles of each length up to ``max_len``, one per translation class.

    A cycle is represented by its lexicographically smallest variable vertex
    ``(t, j)``, shifted to ``t = 0``; the two arcs from that vertex to its
    antipode are simple half-paths that avoid smaller variable vertices.
    With ``return_cycles`` the vertex sequences are returned too, as lists of
    ``('v', j, t)`` / ``('c', i, t)`` tuples starting at the anchor.
    """
    _check_cap(max_len)
    graph = _BaseGraph(h)
    counts = {length: 0 for length in range(4, max_len + 1, 2)}
    cycles = {length: [] for length in counts}
    for j0 in range(h.a):
        start = ("v", j0, 0)
        anchor = (0, j0)
        paths = [(start,)]
        for half in range(1, max_len // 2 + 1):
            nxt = []
            for path in paths:
                kind, node, t = path[-1]
                on_path = set(path)
                if kind == "v":
                    for _, i, e in graph.var_adj[node]:
                        vtx = ("c", i, t + e)
                        if vtx not in on_path:
                            nxt.append(path + (vtx,))
                else:
                    for _, j, e in graph.chk_adj[node]:
                        vtx = ("v", j, t - e)
                        if (t - e, j) > anchor and vtx not in on_path:
                            nxt.append(path + (vtx,))
            paths = nxt
            if half < 2:
                continue
            groups = defaultdict(list)
            for path in paths:
                groups[path[-1]].append(path)
            for group in groups.values():
                for p1, p2 in itertools.combinations(group, 2):
                    if set(p1[1:-1]).isdisjoint(p2[1:-1]):
                        counts[2 * half] += 1
                        if return_cycles:
                            cycles[2 * half].append(list(p1) + list(reversed(p2[1:-1])))
    if return_cycles:
        return counts, cycles
    return counts


def brute_force_girth_oracle(h: SymbolicMatrix, blocks: int | None = None, g_cap: int = MAX_CAP) -> int | None:
    """Girth of a terminated section of the code by breadth-first search.

    Independent of the walk calculus above: it expands the binary
    parity-check matrix and searches it as an ordinary bipartite graph.
    """
    _check_cap(g_cap)
    horizon = 3 * (h.m_h + 1)
    if blocks is None:
        blocks = horizon
    if blocks < horizon:
        raise ValueError("window smaller than cycle horizon")
    H = expand_parity_check(h, blocks).tocsr()
    Hc = H.tocsc()
    n_chk, n_var = H.shape
    var_nbrs = [Hc.indices[Hc.indptr[v]:Hc.indptr[v + 1]] + n_var for v in range(n_var)]
    chk_nbrs = [H.indices[H.indptr[k]:H.indptr[k + 1]] for k in range(n_chk)]

    def nbrs(u):
        return var_nbrs[u] if u < n_var else chk_nbrs[u - n_var]

    best = g_cap + 1
    for root in range(n_var):
        dist = {root: 0}
        parent = {root: -1}
        queue = deque([root])
        while queue:
            u = queue.popleft()
            du = dist[u]
            if 2 * du + 1 >= best:
                break
            for v in nbrs(u):
                v = int(v)
                if v == parent[u]:
                    continue
                if v in dist:
                    best = min(best, du + dist[v] + 1)
                else:
                    dist[v] = du + 1
                    parent[v] = u
                    queue.append(v)
    return best if best <= g_cap else None


# -- exponent-domain tests for monomial codes ---------------------------------

def type1_delta_matrix(p) -> np.ndarray:
    """Row differences ``p1 - p0``, ``p2 - p1`` and ``p2 - p0`` of a 3-row exponent matrix."""
    p = np.asarray(p, dtype=np.int64)
    if p.ndim != 2 or p.shape[0] != 3:
        raise ValueError("delta matrix needs a 3-row exponent matrix")
    if (p < 0).any():
        raise ValueError("delta matrix needs a matrix without null entries")
    return np.stack([p[1] - p[0], p[2] - p[1], p[2] - p[0]])


def _rcc_ok(p: np.ndarray) -> bool:
    c = p.shape[0]
    for i1, i2 in itertools.combinations(range(c), 2):
        both = (p[i1] >= 0) & (p[i2] >= 0)
        d = (p[i2] - p[i1])[both]
        if len(np.unique(d)) != len(d):
            return False
    return True


def type1_girth_test(p, g_target: int) -> bool:
    """Closed-form test of ``girth >= g_target`` for monomial exponent matrices.

    ``g_target = 6`` is the row-column constraint and works for any ``c``;
    8 and 10 need ``w = c = 3`` and use the difference-matrix conditions.
    """
    p = np.asarray(p, dtype=np.int64)
    if p.ndim != 2:
        raise ValueError("exponent matrix must be two-dimensional")
    if g_target not in (6, 8, 10):
        raise ValueError("g_target must be 6, 8 or 10")
    if not _rcc_ok(p):
        return False
    if g_target == 6:
        return True
    dp = type1_delta_matrix(p)
    a = p.shape[1]
    if g_target == 8:
        for j1, j2, j3 in itertools.permutations(range(a), 3):
            if dp[0, j1] + dp[1, j2] == dp[2, j3]:
                return False
        return True
    seen = set()
    for row in dp:
        for j1, j2 in itertools.permutations(range(a), 2):
            v = int(row[j1] - row[j2])
            if v == 0 or v in seen:
                return False
            seen.add(v)
    return True
