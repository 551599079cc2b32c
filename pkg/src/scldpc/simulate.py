"""Monte Carlo BER over BPSK/AWGN with flooding sum-product decoding.

The all-zero codeword is transmitted: the code is linear and both the
channel and the decoder are symmetric, so the error rate does not depend on
the codeword.  BPSK maps bit 0 to +1, so a positive LLR favours 0.
"""

from __future__ import annotations

import math
import time
from collections import namedtuple
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import scipy.sparse as sp

from scldpc.core import SymbolicMatrix, expand_parity_check

DecodeResult = namedtuple("DecodeResult", ["bits", "iterations"])

_PHI_MIN, _PHI_MAX = 1e-12, 60.0


def noise_variance(rate, ebno_db: float) -> float:
    """``sigma^2 = 1 / (2 R Eb/N0)`` for unit-energy BPSK."""
    rate = float(rate)
    if rate <= 0:
        raise ValueError("code rate must be positive")
    return 1.0 / (2.0 * rate * 10.0 ** (ebno_db / 10.0))


def awgn_llr_stream(n_bits: int, rate, ebno_db: float, rng: np.random.Generator | int | tuple) -> np.ndarray:
    """Channel LLRs ``2y / sigma^2`` for the all-zero codeword."""
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    var = noise_variance(rate, ebno_db)
    y = 1.0 + math.sqrt(var) * rng.standard_normal(n_bits)
    return 2.0 * y / var


def _phi(x: np.ndarray) -> np.ndarray:
    x = np.clip(x, _PHI_MIN, _PHI_MAX)
    return -np.log(np.tanh(0.5 * x))


class _Graph:
    """Edge lists of a sparse parity-check matrix, sorted by check then by variable."""

    def __init__(self, H: sp.spmatrix):
        H = sp.csr_matrix(H)
        H.sum_duplicates()
        self.shape = H.shape
        coo = H.tocoo()
        order = np.lexsort((coo.col, coo.row))
        self.rows = coo.row[order].astype(np.int64)
        self.cols = coo.col[order].astype(np.int64)
        self.by_col = np.argsort(self.cols, kind="stable")
        self.row_ptr = np.searchsorted(self.rows, np.arange(H.shape[0] + 1))
        self.col_ptr = np.searchsorted(self.cols[self.by_col], np.arange(H.shape[1] + 1))


def _check_update(v2c: np.ndarray, rows_local: np.ndarray, n_rows: int) -> np.ndarray:
    """Sum-product check-node rule on a contiguous block of check rows."""
    mag = _phi(np.abs(v2c))
    total = np.bincount(rows_local, weights=mag, minlength=n_rows)
    neg = (v2c < 0).astype(np.int64)
    parity = np.bincount(rows_local, weights=neg, minlength=n_rows).astype(np.int64)
    ext = np.maximum(total[rows_local] - mag, _PHI_MIN)
    sign = 1 - 2 * ((parity[rows_local] - neg) & 1)
    return sign * _phi(ext)


def _syndrome_ok(graph: _Graph, hard: np.ndarray, lo: int, hi: int) -> bool:
    """Are checks ``lo..hi-1`` satisfied by the hard decisions?"""
    e0, e1 = graph.row_ptr[lo], graph.row_ptr[hi]
    if e0 == e1:
        return True
    s = np.bincount(graph.rows[e0:e1] - lo, weights=hard[graph.cols[e0:e1]], minlength=hi - lo)
    return not (s.astype(np.int64) & 1).any()


def _run_window(graph: _Graph, llr, c2v, v2c, hard, row_lo, row_hi, var_lo, var_hi, iterations):
    """Flooding iterations on checks ``[row_lo, row_hi)`` and variables ``[var_lo, var_hi)``.

    Edges from checks in the range to variables outside it read the stored
    variable-to-check messages; those messages are not updated.  ``hard``
    holds the decisions used for the stopping test; entries outside the
    variable range are left alone.  Returns the number of iterations run.
    """
    e0, e1 = graph.row_ptr[row_lo], graph.row_ptr[row_hi]
    rows_local = graph.rows[e0:e1] - row_lo
    n_rows = row_hi - row_lo
    k0, k1 = graph.col_ptr[var_lo], graph.col_ptr[var_hi]
    var_edges = graph.by_col[k0:k1]
    var_cols = graph.cols[var_edges]
    n_vars = var_hi - var_lo
    chan = llr[var_lo:var_hi]

    def posterior():
        return chan + np.bincount(var_cols - var_lo, weights=c2v[var_edges], minlength=n_vars)

    hard[var_lo:var_hi] = posterior() < 0
    if _syndrome_ok(graph, hard, row_lo, row_hi):
        return 0
    for it in range(1, iterations + 1):
        c2v[e0:e1] = _check_update(v2c[e0:e1], rows_local, n_rows)
        post = posterior()
        v2c[var_edges] = post[var_cols - var_lo] - c2v[var_edges]
        hard[var_lo:var_hi] = post < 0
        if _syndrome_ok(graph, hard, row_lo, row_hi):
            return it
    return iterations


def bp_decode_full(H: sp.spmatrix, llrs: np.ndarray, iterations: int = 100) -> DecodeResult:
    """Flooding sum-product over the whole matrix, stopping once all checks hold."""
    llrs = np.asarray(llrs, dtype=np.float64)
    if llrs.shape != (H.shape[1],):
        raise ValueError(f"expected {H.shape[1]} LLRs, got {llrs.shape}")
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    graph = _Graph(H)
    c2v = np.zeros(graph.rows.size)
    v2c = llrs[graph.cols].copy()
    hard = np.zeros(H.shape[1], dtype=np.int64)
    used = _run_window(graph, llrs, c2v, v2c, hard, 0, H.shape[0], 0, H.shape[1], iterations)
    post = llrs + np.bincount(graph.cols, weights=c2v, minlength=H.shape[1])
    return DecodeResult((post < 0).astype(np.uint8), used)


def bp_decode_sliding_window(h: SymbolicMatrix, llrs: np.ndarray, blocks: int, window: int,
                             iterations: int = 100, reset: int = 0) -> DecodeResult:
    """Sliding-window decoding of a terminated frame of ``blocks`` block columns.

    The window holds ``window`` block columns of variables and the check rows
    whose blocks start there.  After at most ``iterations`` flooding rounds the
    leftmost ``a`` bits are decided and the window moves one block; decided
    bits keep their last messages.  Once the window reaches the end of the
    frame it absorbs the termination checks and every remaining bit is
    decided.  With ``reset > 0`` all stored messages return to the channel
    values every ``reset`` slides.
    """
    a, c, m_h = h.a, h.c, h.m_h
    if window < m_h + 1:
        raise ValueError(f"window below decoding horizon: need at least {m_h + 1} blocks, got {window}")
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    H = expand_parity_check(h, blocks)
    llrs = np.asarray(llrs, dtype=np.float64)
    if llrs.shape != (H.shape[1],):
        raise ValueError(f"expected {H.shape[1]} LLRs, got {llrs.shape}")
    graph = _Graph(H)
    c2v = np.zeros(graph.rows.size)
    v2c = llrs[graph.cols].copy()
    bits = np.zeros(H.shape[1], dtype=np.uint8)
    hard = np.zeros(H.shape[1], dtype=np.int64)
    total_iters = 0
    t = 0
    while t < blocks:
        if reset and t and t % reset == 0:
            c2v[:] = 0.0
            v2c[:] = llrs[graph.cols]
        last = t + window >= blocks
        row_hi = H.shape[0] if last else (t + window) * c
        var_hi = blocks * a if last else (t + window) * a
        total_iters += _run_window(graph, llrs, c2v, v2c, hard, t * c, row_hi, t * a, var_hi, iterations)
        done_hi = var_hi if last else (t + 1) * a
        k0, k1 = graph.col_ptr[t * a], graph.col_ptr[done_hi]
        edges = graph.by_col[k0:k1]
        post = llrs[t * a:done_hi] + np.bincount(graph.cols[edges] - t * a, weights=c2v[edges],
                                                 minlength=done_hi - t * a)
        bits[t * a:done_hi] = post < 0
        hard[t * a:done_hi] = bits[t * a:done_hi]
        if last:
            break
        t += 1
    return DecodeResult(bits, total_iters)


# -- Monte Carlo -------------------------------------------------------------

@dataclass(frozen=True)
class SimulationSpec:
    code: SymbolicMatrix
    blocks: int
    ebno_db: tuple[float, ...]
    window: int | None = None
    iterations: int = 100
    reset: int = 0
    min_errors: int = 100
    max_frames: int = 10_000
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "ebno_db", tuple(float(x) for x in self.ebno_db))
        if self.blocks < 1:
            raise ValueError("blocks must be >= 1")
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.window is not None and self.window < self.code.m_h + 1:
            raise ValueError(f"window below decoding horizon: need at least {self.code.m_h + 1} blocks")
        if self.max_frames < 1 or self.min_errors < 1 or self.workers < 1:
            raise ValueError("min_errors, max_frames and workers must be >= 1")

    @property
    def rate(self) -> Fraction:
        return Fraction(self.code.a - self.code.c, self.code.a)

    @property
    def window_bits(self) -> int | None:
        return None if self.window is None else self.window * self.code.a


@dataclass
class BerPoint:
    ebno_db: float
    errors: int
    bits: int
    frames: int
    wall_ms: float = field(default=0.0, compare=False)

    @property
    def ber(self) -> float:
        return self.errors / self.bits if self.bits else float("nan")

    def interval(self, z: float = 1.96) -> tuple[float, float]:
        """Wilson score interval for the bit error probability."""
        n, k = self.bits, self.errors
        if n == 0:
            return 0.0, 1.0
        p = k / n
        den = 1 + z * z / n
        mid = (p + z * z / (2 * n)) / den
        half = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / den
        return max(0.0, mid - half), min(1.0, mid + half)

    def to_dict(self) -> dict:
        lo, hi = self.interval()
        return {"ebno_db": self.ebno_db, "bits": self.bits, "errors": self.errors, "ber": self.ber,
                "frames": self.frames, "wall_ms": round(self.wall_ms, 3), "ci_low": lo, "ci_high": hi}


def simulate_frame(spec: SimulationSpec, point: int, frame: int, H=None) -> int:
    """Bit errors in one frame; the noise depends only on ``(seed, point, frame)``."""
    n = spec.blocks * spec.code.a
    llr = awgn_llr_stream(n, spec.rate, spec.ebno_db[point], (spec.seed, point, frame))
    if spec.window is None:
        if H is None:
            H = expand_parity_check(spec.code, spec.blocks)
        bits = bp_decode_full(H, llr, spec.iterations).bits
    else:
        bits = bp_decode_sliding_window(spec.code, llr, spec.blocks, spec.window,
                                        spec.iterations, spec.reset).bits
    return int(bits.sum())


def monte_carlo_ber(spec: SimulationSpec, progress=None) -> list[BerPoint]:
    """Run each grid point until ``min_errors`` bit errors or ``max_frames`` frames.

    Frames are simulated in batches of ``workers`` and accumulated in frame
    order, so a fixed seed and worker count give identical results.
    """
    H = expand_parity_check(spec.code, spec.blocks) if spec.window is None else None
    n = spec.blocks * spec.code.a
    out = []
    pool = ThreadPoolExecutor(spec.workers) if spec.workers > 1 else None
    try:
        for k, ebno in enumerate(spec.ebno_db):
            t0 = time.perf_counter()
            errors = frames = 0
            while errors < spec.min_errors and frames < spec.max_frames:
                batch = range(frames, min(frames + spec.workers, spec.max_frames))
                if pool is None:
                    results = [simulate_frame(spec, k, f, H) for f in batch]
                else:
                    results = list(pool.map(lambda f: simulate_frame(spec, k, f, H), batch))
                errors += sum(results)
                frames += len(results)
            point = BerPoint(ebno, errors, frames * n, frames, (time.perf_counter() - t0) * 1e3)
            out.append(point)
            if progress is not None:
                progress(point)
    finally:
        if pool is not None:
            pool.shutdown()
    return out
