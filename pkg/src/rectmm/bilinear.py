"""Bilinear matrix-multiplication algorithms as (U, V, W) triples.

An algorithm for multiplying an m x n matrix A by an n x p matrix B with q
scalar multiplications is encoded by three coefficient matrices:

* U (mn x q): column k gives the linear combination of A entries fed into
  multiplication k,
* V (np x q): the same for B,
* W (mp x q): column k says to which C entries product k contributes, and
  with which coefficient.

Rows correspond to matrix entries in row-major order: A[i,j] <-> row i*n+j
of U, B[i,j] <-> row i*p+j of V, C[i,j] <-> row i*p+j of W.  Entries are
`LaurentScalar`s so approximate (lambda-parameterised) algorithms are
representable exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .laurent import ZERO, LaurentScalar


class MalformedAlgorithmError(ValueError):
    """Raised when a (U, V, W) triple does not have consistent shapes."""


def _as_laurent(x):
    if isinstance(x, LaurentScalar):
        return x
    return LaurentScalar.rational(Fraction(x))


def _freeze_matrix(rows, nrows, ncols, name):
    rows = [list(r) for r in rows]
    if len(rows) != nrows:
        raise MalformedAlgorithmError(f"{name} must have {nrows} rows, got {len(rows)}")
    out = []
    for r in rows:
        if len(r) != ncols:
            raise MalformedAlgorithmError(f"{name} rows must have {ncols} columns, got {len(r)}")
        out.append(tuple(_as_laurent(x) for x in r))
    return tuple(out)


@dataclass(frozen=True)
class BilinearAlgorithm:
    """Immutable (U, V, W) triple with dimensions ``<m,n,p> = q``."""

    name: str
    m: int
    n: int
    p: int
    q: int
    U: tuple = field(repr=False)
    V: tuple = field(repr=False)
    W: tuple = field(repr=False)

    def __post_init__(self):
        for d, label in ((self.m, "m"), (self.n, "n"), (self.p, "p"), (self.q, "q")):
            if not isinstance(d, int) or d < 1:
                raise MalformedAlgorithmError(f"{label} must be a positive integer")
        object.__setattr__(self, "U", _freeze_matrix(self.U, self.m * self.n, self.q, "U"))
        object.__setattr__(self, "V", _freeze_matrix(self.V, self.n * self.p, self.q, "V"))
        object.__setattr__(self, "W", _freeze_matrix(self.W, self.m * self.p, self.q, "W"))

    # -- basic derived quantities -------------------------------------------

    @property
    def shape(self):
        return (self.m, self.n, self.p)

    @property
    def nstar(self) -> int:
        """max(mn, np, mp), the size of the largest of the three matrices."""
        return max(self.m * self.n, self.n * self.p, self.m * self.p)

    def is_approximate(self) -> bool:
        """True if any coefficient has a nonzero term of degree != 0."""
        for mat in (self.U, self.V, self.W):
            for row in mat:
                for x in row:
                    if not x.is_constant():
                        return True
        return False

    def nnz(self):
        """(nnz(U), nnz(V), nnz(W))."""
        return tuple(
            sum(1 for row in mat for x in row if not x.is_zero())
            for mat in (self.U, self.V, self.W)
        )

    def column_rows(self, mat):
        """For each column k, the list of row indices with a nonzero entry."""
        cols = [[] for _ in range(self.q)]
        for r, row in enumerate(mat):
            for k, x in enumerate(row):
                if not x.is_zero():
                    cols[k].append(r)
        return cols

    def renamed(self, name: str) -> "BilinearAlgorithm":
        return BilinearAlgorithm(name, self.m, self.n, self.p, self.q, self.U, self.V, self.W)


@dataclass(frozen=True)
class ValidationReport:
    """Result of checking a triple against the matrix-multiplication tensor.

    ``exact``: the computed tensor equals the target as Laurent polynomials.
    ``lambda_exact``: the degree-0 part equals the target and no negative
    degrees remain (residuals of strictly positive degree are allowed; these
    vanish as lambda -> 0).
    ``failures`` lists the index 6-tuples whose residual violates
    lambda-exactness, with the offending residual.
    """

    exact: bool
    lambda_exact: bool
    failures: tuple = ()

    def __post_init__(self):
        # exact implies lambda_exact by construction; guard against misuse.
        if self.exact and not self.lambda_exact:
            raise ValueError("inconsistent report: exact implies lambda_exact")


def validate(alg: BilinearAlgorithm) -> ValidationReport:
    """Brute-force check of the generalized Brent condition.

    For every index tuple (a,b,c,d,e,f) the triple sum
    ``T = sum_k U[a*n+b,k] * V[c*p+d,k] * W[e*p+f,k]`` must equal
    ``delta(b==c) * delta(a==e) * delta(d==f)``.
    """
    m, n, p, q = alg.m, alg.n, alg.p, alg.q
    U, V, W = alg.U, alg.V, alg.W
    w_nonzero_cols = [
        [k for k in range(q) if not row[k].is_zero()] for row in W
    ]
    exact = True
    lambda_exact = True
    failures = []
    for a in range(m):
        for b in range(n):
            urow = U[a * n + b]
            u_cols = [k for k in range(q) if not urow[k].is_zero()]
            for c in range(n):
                for d in range(p):
                    vrow = V[c * p + d]
                    uv = [(k, urow[k] * vrow[k]) for k in u_cols if not vrow[k].is_zero()]
                    uv = [(k, x) for k, x in uv if not x.is_zero()]
                    for e in range(m):
                        for f in range(p):
                            wrow = W[e * p + f]
                            total = ZERO
                            if uv and w_nonzero_cols[e * p + f]:
                                for k, x in uv:
                                    wk = wrow[k]
                                    if not wk.is_zero():
                                        total = total + x * wk
                            delta = 1 if (b == c and a == e and d == f) else 0
                            residual = total - delta
                            if residual.is_zero():
                                continue
                            exact = False
                            if residual.has_negative_degree() or residual.degree0() != 0:
                                lambda_exact = False
                                failures.append(((a, b, c, d, e, f), residual))
    return ValidationReport(exact=exact, lambda_exact=lambda_exact, failures=tuple(failures))


# ---------------------------------------------------------------------------
# Symmetry transforms
# ---------------------------------------------------------------------------
#
# <m,n,p> = <n,p,m> = <p,m,n> = <m,p,n> = <p,n,m> = <n,m,p>.  The group is
# generated by the cyclic rotation (trace symmetry of the matmul tensor) and
# the transposition C = A*B  <->  C^T = B^T * A^T.  The concrete row
# permutations below are pinned by golden tests against the known variant
# listings of the Bini and Hopcroft-Kerr base cases.


@dataclass(frozen=True)
class Symmetry:
    """Group element ``cyclic^rot o transpose^f`` (transpose applied first)."""

    rot: int
    flip: bool

    def __post_init__(self):
        object.__setattr__(self, "rot", self.rot % 3)

    def compose(self, other: "Symmetry") -> "Symmetry":
        """self o other (apply ``other`` first).

        Uses transpose.cyclic = cyclic^-1.transpose, so
        cyc^r t^f . cyc^s t^g = cyc^(r + s*(-1)^f) t^(f xor g).
        """
        rot = (self.rot + (-other.rot if self.flip else other.rot)) % 3
        return Symmetry(rot, self.flip != other.flip)

    def apply_shape(self, m, n, p):
        if self.flip:
            m, n, p = p, n, m
        for _ in range(self.rot):
            m, n, p = n, p, m
        return m, n, p

    @property
    def label(self) -> str:
        return f"cyc{self.rot}" + ("T" if self.flip else "")


IDENTITY = Symmetry(0, False)
ALL_SYMMETRIES = tuple(Symmetry(r, f) for f in (False, True) for r in (0, 1, 2))


def _transpose_reindex(mat, rows_a, rows_b):
    """Reorder rows of an (rows_a x rows_b)-indexed matrix to (rows_b x rows_a)."""
    return [mat[i * rows_b + j] for j in range(rows_b) for i in range(rows_a)]


def _cyclic(alg: BilinearAlgorithm) -> BilinearAlgorithm:
    # <m,n,p> -> <n,p,m>: U' = V, V'[(l,i)] = W[(i,l)], W'[(j,i)] = U[(i,j)]
    m, n, p = alg.m, alg.n, alg.p
    return BilinearAlgorithm(
        alg.name,
        n, p, m, alg.q,
        list(alg.V),
        _transpose_reindex(alg.W, m, p),
        _transpose_reindex(alg.U, m, n),
    )


def _transpose(alg: BilinearAlgorithm) -> BilinearAlgorithm:
    # <m,n,p> -> <p,n,m>: U'[(l,j)] = V[(j,l)], V'[(j,i)] = U[(i,j)], W'[(l,i)] = W[(i,l)]
    m, n, p = alg.m, alg.n, alg.p
    return BilinearAlgorithm(
        alg.name,
        p, n, m, alg.q,
        _transpose_reindex(alg.V, n, p),
        _transpose_reindex(alg.U, m, n),
        _transpose_reindex(alg.W, m, p),
    )


def transform(alg: BilinearAlgorithm, sym: Symmetry) -> BilinearAlgorithm:
    """Apply a shape symmetry, remapping U/V/W roles and row orders."""
    out = alg
    if sym.flip:
        out = _transpose(out)
    for _ in range(sym.rot % 3):
        out = _cyclic(out)
    if sym != IDENTITY:
        out = out.renamed(f"{alg.name}[{sym.label}]")
    return out


# ---------------------------------------------------------------------------
# Tensor product
# ---------------------------------------------------------------------------


def tensor_product(a1: BilinearAlgorithm, a2: BilinearAlgorithm) -> BilinearAlgorithm:
    """Kronecker product: <m1 m2, n1 n2, p1 p2> = q1 q2.

    Row indices follow the row-major convention of the product operands:
    the A-entry ((i1,i2),(j1,j2)) of the (m1 m2) x (n1 n2) product matrix
    sits at row (i1*m2+i2)*(n1*n2) + (j1*n2+j2), and similarly for B and C.
    Multiplication (k1,k2) sits at column k1*q2 + k2.
    """

    def kron(mat1, mat2, r1, c1, r2, c2):
        # mat indexed by (row-pair, col-pair) with the row-major block layout
        rows = []
        for i1 in range(r1):
            for i2 in range(r2):
                for j1 in range(c1):
                    for j2 in range(c2):
                        row1 = mat1[i1 * c1 + j1]
                        row2 = mat2[i2 * c2 + j2]
                        rows.append(
                            [x1 * x2 for x1 in row1 for x2 in row2]
                        )
        return rows

    return BilinearAlgorithm(
        f"{a1.name}(x){a2.name}",
        a1.m * a2.m,
        a1.n * a2.n,
        a1.p * a2.p,
        a1.q * a2.q,
        kron(a1.U, a2.U, a1.m, a1.n, a2.m, a2.n),
        kron(a1.V, a2.V, a1.n, a1.p, a2.n, a2.p),
        kron(a1.W, a2.W, a1.m, a1.p, a2.m, a2.p),
    )
