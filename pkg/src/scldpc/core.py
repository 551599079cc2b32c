"""Matrix representations of time-invariant SC-LDPC convolutional codes.

A code is described by a ``c x a`` symbolic matrix whose entries are sets of
exponents of ``x`` (polynomials over GF(2)), by the equivalent transposed
syndrome former ``H_s^T`` (an ``L_h x a`` binary matrix), or, for monomial
codes, by an integer exponent matrix with ``-1`` marking null entries.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp


class ParseError(ValueError):
    """Malformed matrix text; carries the 1-based line and column."""

    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


def _check_columns(entries: tuple[tuple[tuple[int, ...], ...], ...], a: int) -> None:
    for j in range(a):
        if not any(row[j] for row in entries):
            raise ValueError(f"zero-weight variable node: column {j} is empty, matrix defines no code")


@dataclass(frozen=True)
class SymbolicMatrix:
    """``c x a`` matrix of exponent sets; the empty tuple is the null polynomial."""

    entries: tuple[tuple[tuple[int, ...], ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(tuple(sorted(set(int(e) for e in cell))) for cell in row) for row in self.entries)
        if not rows or not rows[0]:
            raise ValueError("symbolic matrix must have at least one row and one column")
        a = len(rows[0])
        if any(len(row) != a for row in rows):
            raise ValueError("ragged symbolic matrix")
        for row in rows:
            for cell in row:
                if cell and cell[0] < 0:
                    raise ValueError("exponents must be non-negative")
        _check_columns(rows, a)
        object.__setattr__(self, "entries", rows)

    @classmethod
    def from_exponents(cls, p) -> SymbolicMatrix:
        """Build from an integer exponent matrix (``-1`` = null)."""
        p = np.asarray(p, dtype=np.int64)
        if p.ndim != 2:
            raise ValueError("exponent matrix must be two-dimensional")
        if (p < -1).any():
            raise ValueError("exponent entries must be >= -1")
        return cls(tuple(tuple(() if v < 0 else (int(v),) for v in row) for row in p))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[Iterable[int]]]) -> SymbolicMatrix:
        """Build from a list of columns, each a list of ``c`` exponent sets."""
        c = len(columns[0])
        return cls(tuple(tuple(tuple(col[i]) for col in columns) for i in range(c)))

    @property
    def c(self) -> int:
        return len(self.entries)

    @property
    def a(self) -> int:
        return len(self.entries[0])

    @property
    def shape(self) -> tuple[int, int]:
        return self.c, self.a

    @property
    def m_h(self) -> int:
        return max(cell[-1] for row in self.entries for cell in row if cell)

    @property
    def code_type(self) -> int:
        """Largest number of terms in any entry (1 = monomial, 2 = binomial, ...)."""
        return max(len(cell) for row in self.entries for cell in row)

    @property
    def column_weights(self) -> tuple[int, ...]:
        return tuple(sum(len(self.entries[i][j]) for i in range(self.c)) for j in range(self.a))

    def column(self, j: int) -> tuple[tuple[int, ...], ...]:
        return tuple(self.entries[i][j] for i in range(self.c))

    def exponents(self) -> np.ndarray:
        """Exponent matrix with ``-1`` for null entries; only for Type-1 codes."""
        if self.code_type > 1:
            raise ValueError("exponent matrix only exists for monomial (Type-1) codes")
        return np.array([[cell[0] if cell else -1 for cell in row] for row in self.entries], dtype=np.int64)

    def edges(self) -> list[tuple[int, int, int]]:
        """All ``(row, column, exponent)`` triples, i.e. the labelled edges of the base graph."""
        return [(i, j, e) for i, row in enumerate(self.entries) for j, cell in enumerate(row) for e in cell]

    def select_columns(self, cols: Sequence[int]) -> SymbolicMatrix:
        return SymbolicMatrix(tuple(tuple(row[j] for j in cols) for row in self.entries))

    def __str__(self) -> str:
        return format_matrix(self)


def hstack(*blocks: SymbolicMatrix) -> SymbolicMatrix:
    if len({b.c for b in blocks}) != 1:
        raise ValueError("blocks must have the same number of rows")
    return SymbolicMatrix(tuple(sum((b.entries[i] for b in blocks), ()) for i in range(blocks[0].c)))


@dataclass(frozen=True)
class SyndromeFormer:
    """Transposed syndrome former ``H_s^T`` (``L_h`` rows, ``a`` columns) for ``c`` checks per block."""

    bits: np.ndarray
    c: int

    def __post_init__(self):
        bits = np.array(self.bits, dtype=np.uint8)
        if bits.ndim != 2 or bits.shape[0] < 1 or bits.shape[1] < 1:
            raise ValueError("syndrome former must be a non-empty 2-D binary matrix")
        if ((bits != 0) & (bits != 1)).any():
            raise ValueError("syndrome former must be binary")
        if self.c < 1:
            raise ValueError("c must be positive")
        if (bits.sum(axis=0) == 0).any():
            raise ValueError("zero-weight variable node in syndrome former")
        bits.setflags(write=False)
        object.__setattr__(self, "bits", bits)

    @property
    def L_h(self) -> int:
        return self.bits.shape[0]

    @property
    def a(self) -> int:
        return self.bits.shape[1]


def symbolic_from_syndrome_former(hs: SyndromeFormer, c: int | None = None) -> SymbolicMatrix:
    """Row ``m*c + i`` of ``H_s^T`` holds the coefficient of ``x^m`` in row ``i``."""
    c = hs.c if c is None else c
    if c <= 0:
        raise ValueError("c must be positive")
    entries = [[[] for _ in range(hs.a)] for _ in range(c)]
    rows, cols = np.nonzero(hs.bits)
    for r, j in zip(rows.tolist(), cols.tolist()):
        m, i = divmod(r, c)
        entries[i][j].append(m)
    return SymbolicMatrix(tuple(tuple(tuple(cell) for cell in row) for row in entries))


def syndrome_former_from_symbolic(h: SymbolicMatrix) -> SyndromeFormer:
    bits = np.zeros(((h.m_h + 1) * h.c, h.a), dtype=np.uint8)
    for i, j, e in h.edges():
        bits[e * h.c + i, j] = 1
    return SyndromeFormer(bits, h.c)


def expand_parity_check(h: SymbolicMatrix, blocks: int) -> sp.csr_matrix:
    """Terminated parity-check matrix with ``blocks`` block columns.

    Shape is ``((blocks + m_h) * c, blocks * a)``; block ``(r, t)`` equals
    ``H_{r-t}`` for ``0 <= r - t <= m_h``.
    """
    if blocks < 1:
        raise ValueError("blocks must be >= 1")
    c, a, m_h = h.c, h.a, h.m_h
    base = h.edges()
    rows = np.array([e * c + i for i, _, e in base], dtype=np.int64)
    cols = np.array([j for _, j, _ in base], dtype=np.int64)
    t = np.arange(blocks, dtype=np.int64)
    all_rows = (rows[None, :] + c * t[:, None]).ravel()
    all_cols = (cols[None, :] + a * t[:, None]).ravel()
    data = np.ones(all_rows.size, dtype=np.uint8)
    shape = ((blocks + m_h) * c, blocks * a)
    return sp.csr_matrix((data, (all_rows, all_cols)), shape=shape)


@dataclass(frozen=True)
class CodeProfile:
    a: int
    c: int
    w: tuple[int, ...]
    m_h: int
    L_h: int
    v_s: int
    rate: Fraction
    girth: int | None = None

    @property
    def regular(self) -> bool:
        return len(set(self.w)) == 1

    @property
    def has_weight_one_columns(self) -> bool:
        return min(self.w) < 2

    def to_dict(self) -> dict:
        out = {
            "a": self.a,
            "c": self.c,
            "w": list(self.w),
            "m_h": self.m_h,
            "L_h": self.L_h,
            "v_s": self.v_s,
            "rate_num": self.rate.numerator,
            "rate_den": self.rate.denominator,
            "regular": self.regular,
        }
        if self.girth is not None:
            out["girth"] = self.girth
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def profile(h: SymbolicMatrix, girth: int | None = None) -> CodeProfile:
    """Derived code parameters; ``m_h`` is the largest exponent in ``h``."""
    m_h = h.m_h
    return CodeProfile(
        a=h.a,
        c=h.c,
        w=h.column_weights,
        m_h=m_h,
        L_h=(m_h + 1) * h.c,
        v_s=(m_h + 1) * h.a,
        rate=Fraction(h.a - h.c, h.a),
        girth=girth,
    )


def memory_from_height(L_h: int, c: int) -> int:
    return math.ceil(L_h / c) - 1


# -- text format -------------------------------------------------------------

def _parse_entry(token: str, line: int, col: int) -> tuple[int, ...]:
    if token in ("-", "-1"):
        return ()
    try:
        values = [int(v) for v in token.split(",")]
    except ValueError:
        raise ParseError(f"bad entry {token!r}", line, col) from None
    if any(v < 0 for v in values):
        raise ParseError(f"negative exponent in {token!r}", line, col)
    if len(set(values)) != len(values):
        raise ParseError(f"repeated exponent in {token!r}", line, col)
    return tuple(values)


def parse_matrix(text: str) -> SymbolicMatrix:
    """Parse the ``c a`` header plus ``c`` rows format; ``#`` starts a comment."""
    lines = []
    for n, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if body.strip():
            lines.append((n, body))
    if not lines:
        raise ParseError("empty matrix file", 1)
    n0, header = lines[0]
    parts = header.split()
    if len(parts) != 2:
        raise ParseError("header must be 'c a'", n0)
    try:
        c, a = int(parts[0]), int(parts[1])
    except ValueError:
        raise ParseError("header must hold two integers", n0) from None
    if c < 1 or a < 1:
        raise ParseError("c and a must be positive", n0)
    if len(lines) - 1 != c:
        last = lines[-1][0]
        raise ParseError(f"expected {c} rows, found {len(lines) - 1}", last)
    rows = []
    for n, body in lines[1:]:
        tokens = []
        pos = 0
        for tok in body.split():
            col = body.index(tok, pos) + 1
            pos = col - 1 + len(tok)
            tokens.append(_parse_entry(tok, n, col))
        if len(tokens) != a:
            raise ParseError(f"expected {a} entries, found {len(tokens)}", n)
        rows.append(tuple(tokens))
    try:
        return SymbolicMatrix(tuple(rows))
    except ValueError as exc:
        raise ParseError(str(exc), lines[1][0]) from None


def format_matrix(h: SymbolicMatrix, integer_style: bool | None = None) -> str:
    """Inverse of :func:`parse_matrix`; monomial codes use bare integers by default."""
    if integer_style is None:
        integer_style = h.code_type <= 1
    out = [f"{h.c} {h.a}"]
    for row in h.entries:
        if integer_style:
            cells = [str(cell[0]) if cell else "-1" for cell in row]
        else:
            cells = [",".join(map(str, cell)) if cell else "-" for cell in row]
        out.append(" ".join(cells))
    return "\n".join(out) + "\n"


def read_matrix(path: str | Path) -> SymbolicMatrix:
    return parse_matrix(Path(path).read_text())


def write_matrix(h: SymbolicMatrix, path: str | Path, header: str = "") -> None:
    prefix = "".join(f"# {line}\n" for line in header.splitlines()) if header else ""
    Path(path).write_text(prefix + format_matrix(h))
