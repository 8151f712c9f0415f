"""Recursive execution of a bilinear algorithm on concrete matrices.

Matrices are dense row-major lists of lists over an exact scalar domain
(int/Fraction) or floats.  A depth-t run multiplies m^t x n^t by n^t x p^t
by recursing on the base algorithm; the approximation parameter, if any, is
substituted numerically before execution so the scalar domain stays a plain
field.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction

from .bilinear import BilinearAlgorithm


class ExecutionError(ValueError):
    pass


@dataclass
class ExecStats:
    scalar_mults: int
    scalar_adds: int
    t: int
    elapsed: float


def classical_multiply(A, B):
    """Triple-loop product; the oracle every recursive run is checked against."""
    rows, inner, cols = len(A), len(B), len(B[0])
    if any(len(r) != inner for r in A):
        raise ExecutionError("inner dimensions do not match")
    C = [[0] * cols for _ in range(rows)]
    for i in range(rows):
        Ai = A[i]
        Ci = C[i]
        for l in range(inner):
            a = Ai[l]
            if a == 0:
                continue
            Bl = B[l]
            for j in range(cols):
                Ci[j] += a * Bl[j]
    return C


def _substituted(alg: BilinearAlgorithm, lambda_value):
    if alg.is_approximate() and lambda_value is None:
        raise ExecutionError(
            f"{alg.name} is approximate: a lambda value is required"
        )
    sub = lambda mat: [[x.substitute(lambda_value) for x in row] for row in mat]
    try:
        return sub(alg.U), sub(alg.V), sub(alg.W)
    except ValueError as exc:
        raise ExecutionError(str(exc)) from None


class _Counter:
    __slots__ = ("mults", "adds")

    def __init__(self):
        self.mults = 0
        self.adds = 0


def multiply_recursive(
    alg: BilinearAlgorithm, A, B, t: int, lambda_value=None, cutoff: int = 0
):
    """Multiply A (m^t x n^t) by B (n^t x p^t) with the recursive scheme.

    Returns (C, ExecStats).  ``cutoff`` switches to classical loops for
    recursion heights <= cutoff (a speed knob; 0 in all correctness tests).
    At each level the q products are formed in ascending k order and
    accumulated into C in that same order.
    """
    m, n, p, q = alg.m, alg.n, alg.p, alg.q
    if len(A) != m**t or (A and len(A[0]) != n**t):
        raise ExecutionError(f"A must be {m**t} x {n**t}")
    if len(B) != n**t or (B and len(B[0]) != p**t):
        raise ExecutionError(f"B must be {n**t} x {p**t}")
    U, V, W = _substituted(alg, lambda_value)
    ucols = [[(r, U[r][k]) for r in range(m * n) if U[r][k] != 0] for k in range(q)]
    vcols = [[(r, V[r][k]) for r in range(n * p) if V[r][k] != 0] for k in range(q)]
    wcols = [[(r, W[r][k]) for r in range(m * p) if W[r][k] != 0] for k in range(q)]

    counter = _Counter()
    started = time.perf_counter()

    def block(M, i, j, rb, cb):
        return [row[j * cb : (j + 1) * cb] for row in M[i * rb : (i + 1) * rb]]

    def combine(col, blocks, rb, cb):
        first_r, first_c = col[0]
        out = [
            [first_c * x for x in row] for row in blocks[first_r]
        ] if first_c != 1 else [list(row) for row in blocks[first_r]]
        for r, c in col[1:]:
            src = blocks[r]
            for i in range(rb):
                orow, srow = out[i], src[i]
                if c == 1:
                    for j in range(cb):
                        orow[j] += srow[j]
                else:
                    for j in range(cb):
                        orow[j] += c * srow[j]
            counter.adds += rb * cb
        return out

    def recurse(A, B, h):
        if h == 0:
            counter.mults += 1
            return [[A[0][0] * B[0][0]]]
        if h <= cutoff:
            counter.mults += len(A) * len(B) * len(B[0])
            counter.adds += len(A) * len(B[0]) * (len(B) - 1)
            return classical_multiply(A, B)
        ra, ca = m ** (h - 1), n ** (h - 1)
        rb, cb = n ** (h - 1), p ** (h - 1)
        rc, cc = m ** (h - 1), p ** (h - 1)
        ablocks = [block(A, i, j, ra, ca) for i in range(m) for j in range(n)]
        bblocks = [block(B, i, j, rb, cb) for i in range(n) for j in range(p)]
        C = [[0] * (p**h) for _ in range(m**h)]
        written = [False] * (m * p)
        for k in range(q):
            Tk = combine(ucols[k], ablocks, ra, ca)
            Sk = combine(vcols[k], bblocks, rb, cb)
            Pk = recurse(Tk, Sk, h - 1)
            for r, c in wcols[k]:
                e, f = divmod(r, p)
                if written[r]:
                    counter.adds += rc * cc
                written[r] = True
                for i in range(rc):
                    crow = C[e * rc + i]
                    prow = Pk[i]
                    base = f * cc
                    if c == 1:
                        for j in range(cc):
                            crow[base + j] += prow[j]
                    else:
                        for j in range(cc):
                            crow[base + j] += c * prow[j]
        return C

    C = recurse(A, B, t)
    stats = ExecStats(
        scalar_mults=counter.mults,
        scalar_adds=counter.adds,
        t=t,
        elapsed=time.perf_counter() - started,
    )
    return C, stats


def max_abs_diff(X, Y):
    return max(
        (abs(x - y) for rx, ry in zip(X, Y) for x, y in zip(rx, ry)),
        default=0,
    )


def random_sign_matrix(rows, cols, rng):
    return [[rng.choice((-1, 1)) for _ in range(cols)] for _ in range(rows)]


def approximation_error(
    alg: BilinearAlgorithm, t: int, lambda_values, trials: int, seed: int
):
    """Exact error scan of an approximate algorithm.

    For each lambda (largest first) returns
    ``(lambda, max_error, ratio_to_previous)`` where max_error is the exact
    max-abs entry of C(lambda) - A*B over ``trials`` random +-1 integer
    matrix pairs (the same pairs for every lambda), and ratio_to_previous
    is a float (None for the first entry).
    """
    rng = random.Random(seed)
    pairs = [
        (
            random_sign_matrix(alg.m**t, alg.n**t, rng),
            random_sign_matrix(alg.n**t, alg.p**t, rng),
        )
        for _ in range(trials)
    ]
    exacts = [classical_multiply(A, B) for A, B in pairs]
    lams = sorted((Fraction(l) for l in lambda_values), reverse=True)
    out = []
    prev = None
    for lam in lams:
        err = Fraction(0)
        for (A, B), CE in zip(pairs, exacts):
            C, _ = multiply_recursive(alg, A, B, t, lambda_value=lam)
            err = max(err, max_abs_diff(C, CE))
        ratio = None if prev in (None, 0) else float(err / prev)
        out.append((lam, err, ratio))
        prev = err
    return out
