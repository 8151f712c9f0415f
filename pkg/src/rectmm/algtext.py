"""Plain-text serialization of bilinear algorithms (.alg files).

Grammar (one definition, used by both parser and printer; round-trips are
bit-exact)::

    file    := header block(U) block(V) block(W)
    header  := m SP n SP p SP q NL          (positive decimal integers)
    block   := ("U"|"V"|"W") NL row*
    row     := ROWIDX ":" (SP COLIDX "=" coeff)+ NL
    coeff   := term ("+" term)*
    term    := rational ["*l^" int]         (int may be negative)
    rational:= ["-"] digits ["/" digits]

Indices are 0-based.  Rows appear in ascending order and rows whose entries
are all zero are omitted; within a row, columns appear in ascending order.
Lines starting with ``#`` and blank lines are ignored when parsing.
"""

from __future__ import annotations

from .bilinear import BilinearAlgorithm, MalformedAlgorithmError
from .laurent import ZERO, LaurentScalar


def dumps(alg: BilinearAlgorithm) -> str:
    lines = [f"{alg.m} {alg.n} {alg.p} {alg.q}"]
    for label, mat in (("U", alg.U), ("V", alg.V), ("W", alg.W)):
        lines.append(label)
        for r, row in enumerate(mat):
            cells = [
                f"{k}={x.to_text()}" for k, x in enumerate(row) if not x.is_zero()
            ]
            if cells:
                lines.append(f"{r}: " + " ".join(cells))
    return "\n".join(lines) + "\n"


def loads(text: str, name: str = "unnamed") -> BilinearAlgorithm:
    lines = [
        ln.strip()
        for ln in text.splitlines()
        if ln.strip() and not ln.lstrip().startswith("#")
    ]
    if not lines:
        raise MalformedAlgorithmError("empty algorithm file")
    head = lines[0].split()
    if len(head) != 4:
        raise MalformedAlgorithmError(f"bad header {lines[0]!r}, expected 'm n p q'")
    m, n, p, q = (int(x) for x in head)

    blocks = {}
    current = None
    for ln in lines[1:]:
        if ln in ("U", "V", "W"):
            if ln in blocks:
                raise MalformedAlgorithmError(f"duplicate block {ln}")
            current = blocks.setdefault(ln, [])
            continue
        if current is None:
            raise MalformedAlgorithmError(f"row line before any block: {ln!r}")
        current.append(ln)
    for label in ("U", "V", "W"):
        if label not in blocks:
            raise MalformedAlgorithmError(f"missing block {label}")

    shapes = {"U": m * n, "V": n * p, "W": m * p}

    def parse_block(label):
        nrows = shapes[label]
        mat = [[ZERO] * q for _ in range(nrows)]
        for ln in blocks[label]:
            ridx_s, _, rest = ln.partition(":")
            try:
                r = int(ridx_s)
            except ValueError:
                raise MalformedAlgorithmError(f"bad row index in {ln!r}") from None
            if not 0 <= r < nrows:
                raise MalformedAlgorithmError(f"row {r} out of range for {label}")
            for cell in rest.split():
                col_s, _, coeff_s = cell.partition("=")
                if not coeff_s:
                    raise MalformedAlgorithmError(f"bad cell {cell!r} in {ln!r}")
                k = int(col_s)
                if not 0 <= k < q:
                    raise MalformedAlgorithmError(f"column {k} out of range")
                mat[r][k] = LaurentScalar.from_text(coeff_s)
        return mat

    return BilinearAlgorithm(
        name, m, n, p, q, parse_block("U"), parse_block("V"), parse_block("W")
    )


def dump(alg: BilinearAlgorithm, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps(alg))


def load(path, name: str | None = None) -> BilinearAlgorithm:
    import os

    if name is None:
        name = os.path.splitext(os.path.basename(str(path)))[0]
    with open(path) as fh:
        return loads(fh.read(), name=name)
