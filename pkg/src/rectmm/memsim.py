"""Two-level memory traffic of the recursive algorithm.

Two estimators of the words moved W between a fast memory of M words and
infinite slow memory:

* ``recurrence_cost``: the analytic recurrence
  W(h) = q W(h-1) + (per-level encode/decode words) while the three
  matrices do not fit (3 (N*)^h > M), and 3 (N*)^h once they do.  The
  per-level term is pinned to the exact word count of this module's
  schedule, computed from nnz(U), nnz(V), nnz(W).

* ``simulate_lru``: replays the executor's exact recursion schedule as a
  word-granular address stream through a fully associative LRU cache.
  A read miss moves one word in; writes allocate without a fetch; a dirty
  eviction and the final flush of dirty words move one word out each, so
  W = read misses + dirty evictions + final flush.

The trace is streamed in chunks and can be teed into several cache states
at once, so an M-sweep costs one generation pass.  Temporaries live in a
bump-allocated stack region: fresh addresses per recursion node, reused
across sibling nodes.
"""

from __future__ import annotations

import array
import math
from dataclasses import dataclass

from . import _kernels
from .bilinear import BilinearAlgorithm


class ConfigError(ValueError):
    pass


class FitError(ValueError):
    pass


LAYOUTS = ("recursive-blocked", "row-major")


@dataclass(frozen=True)
class MemConfig:
    M: int
    replacement: str = "lru"
    layout: str = "recursive-blocked"
    cutoff: int = 0  # switch to classical loops at recursion height <= cutoff

    def __post_init__(self):
        if self.M < 3:
            raise ConfigError("M must be >= 3 (two operands and a result word)")
        if self.replacement != "lru":
            raise ConfigError(f"unsupported replacement {self.replacement!r}")
        if self.layout not in LAYOUTS:
            raise ConfigError(f"layout must be one of {LAYOUTS}")
        if self.cutoff < 0:
            raise ConfigError("cutoff must be >= 0")


@dataclass
class TraceStats:
    alg: str
    t: int
    M: int
    layout: str
    W: int
    reads: int
    writes: int
    accesses: int
    flops: int
    read_misses: int
    write_misses: int
    dirty_evictions: int
    flushed: int

    CSV_HEADER = "alg,t,M,layout,W,reads,writes,flops"

    def csv_row(self):
        return f"{self.alg},{self.t},{self.M},{self.layout},{self.W},{self.reads},{self.writes},{self.flops}"


# ---------------------------------------------------------------------------
# Analytic recurrence
# ---------------------------------------------------------------------------


def per_level_words(alg: BilinearAlgorithm, h: int) -> int:
    """Exact encode+decode word count of one recursion node at height h."""
    nnz_u, nnz_v, nnz_w = alg.nnz()
    mn = (alg.m * alg.n) ** (h - 1)
    np_ = (alg.n * alg.p) ** (h - 1)
    mp = (alg.m * alg.p) ** (h - 1)
    return (nnz_u + alg.q) * mn + (nnz_v + alg.q) * np_ + 3 * nnz_w * mp


def recurrence_cost(alg: BilinearAlgorithm, t: int, M: int) -> int:
    """W(t) = q W(t-1) + per_level_words(t) while 3 (N*)^t > M, else 3 (N*)^t."""
    ns = alg.nstar
    if 3 * ns**t <= M:
        return 3 * ns**t
    if t == 0:
        return 3
    return alg.q * recurrence_cost(alg, t - 1, M) + per_level_words(alg, t)


def footprint(alg: BilinearAlgorithm, t: int) -> int:
    """Distinct words touched: the three matrices plus the temporary stack
    (one (encoded-A, encoded-B, product) buffer triple per recursion level;
    iterations and sibling nodes reuse addresses)."""
    mn, np_, mp = alg.m * alg.n, alg.n * alg.p, alg.m * alg.p
    main = mn**t + np_**t + mp**t
    stack = sum(mn ** (h - 1) + np_ ** (h - 1) + mp ** (h - 1) for h in range(1, t + 1))
    return main + stack


# ---------------------------------------------------------------------------
# Trace generation
# ---------------------------------------------------------------------------

_CHUNK = 1 << 16


def _column_structure(alg):
    ucols = alg.column_rows(alg.U)
    vcols = alg.column_rows(alg.V)
    wcols = [
        [o for o in range(alg.m * alg.p) if not alg.W[o][k].is_zero()]
        for k in range(alg.q)
    ]
    return ucols, vcols, wcols


def _stream_trace(alg: BilinearAlgorithm, t: int, cfg: MemConfig, consume):
    """Walk the recursion schedule, feeding (ops, addrs) chunks to consume.

    Returns (reads, writes, flops).  Addresses: A at 0, B, C, then the
    temporary stack.  recursive-blocked layout is the identity on the
    schedule's block-recursive index; row-major maps block coordinates to
    row-major offsets of the full matrix.
    """
    m, n, p, q = alg.m, alg.n, alg.p, alg.q
    mn, np_, mp = m * n, n * p, m * p
    ucols, vcols, wcols = _column_structure(alg)
    base_a = 0
    base_b = mn**t
    base_c = base_b + np_**t
    stack_base = base_c + mp**t
    rowmajor = cfg.layout == "row-major"
    cutoff = cfg.cutoff

    ops = []
    addrs = []
    counts = [0, 0, 0]  # reads, writes, flops

    def flush():
        if ops:
            counts[0] += ops.count(0)
            counts[1] += len(ops) - ops.count(0)
            consume(ops, addrs)
            ops.clear()
            addrs.clear()

    # Operand descriptors.
    #   flat:      ("f", base)                  entry y -> base + y
    #   row-major: ("r", base, r0, c0, ncols_h, rows_dim, cols_dim, stride)
    # where (rows_dim, cols_dim) are the base-case block grid (m x n etc.)
    # and stride is the full matrix's column count.

    def entry_addr(desc, y):
        if desc[0] == "f":
            return desc[1] + y
        _, base, r0, c0, ncols_h, _rd, _cd, stride = desc
        return base + (r0 + y // ncols_h) * stride + (c0 + y % ncols_h)

    def make_desc(role, base, h):
        if not rowmajor:
            return ("f", base)
        if role == "A":
            return ("r", base, 0, 0, n**h, m, n, n**t)
        if role == "B":
            return ("r", base, 0, 0, p**h, n, p, p**t)
        return ("r", base, 0, 0, p**h, m, p, p**t)

    def child(desc, slot, h, unit):
        # unit = child flat block size, rows x cols of child = from role dims
        if desc[0] == "f":
            return ("f", desc[1] + slot * unit)
        _, base, r0, c0, ncols_h, rd, cd, stride = desc
        bi, bj = divmod(slot, cd)
        child_cols = ncols_h // cd
        child_rows = unit // child_cols
        return ("r", base, r0 + bi * child_rows, c0 + bj * child_cols, child_cols, rd, cd, stride)

    def emit_encode(cols, sources, dest_base, size):
        # dest is always a flat temporary
        append_op = ops.append
        append_addr = addrs.append
        for y in range(size):
            for src in sources:
                if src[0] == "f":
                    append_op(0)
                    append_addr(src[1] + y)
                else:
                    append_op(0)
                    append_addr(entry_addr(src, y))
            append_op(1)
            append_addr(dest_base + y)

    def emit_classical(h, Ad, Bd, Cd):
        rows, inner, colsn = m**h, n**h, p**h
        for i in range(rows):
            for j in range(colsn):
                for l in range(inner):
                    ops.append(0)
                    addrs.append(entry_addr(Ad, i * inner + l))
                    ops.append(0)
                    addrs.append(entry_addr(Bd, l * colsn + j))
                ops.append(1)
                addrs.append(entry_addr(Cd, i * colsn + j))
        counts[2] += rows * inner * colsn

    def walk(h, Ad, Bd, Cd, sp):
        if h == 0:
            ops.append(0)
            addrs.append(entry_addr(Ad, 0))
            ops.append(0)
            addrs.append(entry_addr(Bd, 0))
            ops.append(1)
            addrs.append(entry_addr(Cd, 0))
            counts[2] += 1
            return
        if h <= cutoff:
            emit_classical(h, Ad, Bd, Cd)
            if len(ops) >= _CHUNK:
                flush()
            return
        size_a = mn ** (h - 1)
        size_b = np_ ** (h - 1)
        size_c = mp ** (h - 1)
        # one (encoded-A, encoded-B, product) triple per node; the k
        # iterations have disjoint lifetimes and reuse it, as do sibling
        # nodes, so the live temporary set stays one triple per level
        t_base, s_base, p_base = sp, sp + size_a, sp + size_a + size_b
        child_sp = p_base + size_c
        written = [False] * mp
        for k in range(q):
            emit_encode(
                ucols[k],
                [child(Ad, i, h - 1, size_a) for i in ucols[k]],
                t_base,
                size_a,
            )
            emit_encode(
                vcols[k],
                [child(Bd, i, h - 1, size_b) for i in vcols[k]],
                s_base,
                size_b,
            )
            if len(ops) >= _CHUNK:
                flush()
            walk(h - 1, ("f", t_base), ("f", s_base), ("f", p_base), child_sp)
            # decode: stream the product block once, scattering each word
            # into every C sub-block this multiplication contributes to
            dests = [child(Cd, o, h - 1, size_c) for o in wcols[k]]
            firsts = [not written[o] for o in wcols[k]]
            for o in wcols[k]:
                written[o] = True
            for y in range(size_c):
                ops.append(0)
                addrs.append(p_base + y)
                for dest, first in zip(dests, firsts):
                    a = entry_addr(dest, y)
                    if not first:
                        ops.append(0)
                        addrs.append(a)
                    ops.append(1)
                    addrs.append(a)
            if len(ops) >= _CHUNK:
                flush()

    walk(
        t,
        make_desc("A", base_a, t),
        make_desc("B", base_b, t),
        make_desc("C", base_c, t),
        stack_base,
    )
    flush()
    return counts[0], counts[1], counts[2]


def simulate_sweep(alg: BilinearAlgorithm, t: int, Ms, cfg: MemConfig, seed: int = 0):
    """One trace pass teed into an LRU state per M.  Returns TraceStats per M
    in the given order.  The schedule is data-oblivious, so the seed only
    labels the run; identical configurations give identical stats."""
    del seed
    caches = [_kernels.LruCache(M) for M in Ms]

    def consume(ops, addrs):
        oarr = array.array("b", ops)
        aarr = array.array("q", addrs)
        for cache in caches:
            cache.process(oarr, aarr)

    reads, writes, flops = _stream_trace(alg, t, cfg, consume)
    out = []
    for M, cache in zip(Ms, caches):
        W = cache.finalize()
        out.append(
            TraceStats(
                alg=alg.name,
                t=t,
                M=M,
                layout=cfg.layout,
                W=W,
                reads=reads,
                writes=writes,
                accesses=reads + writes,
                flops=flops,
                read_misses=cache.read_misses,
                write_misses=cache.write_misses,
                dirty_evictions=cache.dirty_evictions,
                flushed=cache.flushed,
            )
        )
    return out


def simulate_lru(alg: BilinearAlgorithm, t: int, cfg: MemConfig, seed: int = 0) -> TraceStats:
    """Replay the recursion schedule through one LRU of capacity cfg.M."""
    return simulate_sweep(alg, t, [cfg.M], cfg, seed)[0]


# ---------------------------------------------------------------------------
# Exponent fitting
# ---------------------------------------------------------------------------


def fit_exponent(points, mode: str = "slope-logx"):
    """Least-squares slope with standard error.

    slope-logx: slope of ln(y) against ln(x) (power-law exponent).
    slope-x:    slope of ln(y) against x (growth rate per unit x).
    """
    if mode not in ("slope-logx", "slope-x"):
        raise FitError(f"unknown mode {mode!r}")
    if len(points) < 3:
        raise FitError("need at least 3 points")
    xs = []
    ys = []
    for x, y in points:
        if y <= 0 or (mode == "slope-logx" and x <= 0):
            raise FitError("points must be positive")
        xs.append(math.log(x) if mode == "slope-logx" else float(x))
        ys.append(math.log(y))
    n = len(xs)
    mean_x = sum(xs) / n
    mean_y = sum(ys) / n
    sxx = sum((x - mean_x) ** 2 for x in xs)
    if sxx == 0:
        raise FitError("degenerate x values")
    sxy = sum((x - mean_x) * (y - mean_y) for x, y in zip(xs, ys))
    slope = sxy / sxx
    if n > 2:
        sse = sum(
            (y - (mean_y + slope * (x - mean_x))) ** 2 for x, y in zip(xs, ys)
        )
        stderr = math.sqrt(sse / (n - 2) / sxx)
    else:
        stderr = float("nan")
    return slope, stderr


def sweep_m_values(spec: str):
    """Parse an M sweep: 'A..B' doubles from A to B inclusive; 'A,B,C' lists."""
    if ".." in spec:
        lo_s, _, hi_s = spec.partition("..")
        lo, hi = int(lo_s), int(hi_s)
        if lo < 3 or hi < lo:
            raise ConfigError(f"bad sweep range {spec!r}")
        out = []
        M = lo
        while M <= hi:
            out.append(M)
            M *= 2
        return out
    out = [int(x) for x in spec.split(",") if x]
    if not out:
        raise ConfigError("empty M sweep")
    return out
