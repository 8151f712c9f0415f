"""Built-in algorithm catalog.

Non-classical entries are stored as .alg data files under
``rectmm/catalog_data`` in the text format of :mod:`rectmm.algtext`, so new
algorithms can be added by dropping in a file.  ``classical(m,n,p)`` is
parametric and generated on the fly.
"""

from __future__ import annotations

import re
from importlib import resources

from . import algtext
from .bilinear import BilinearAlgorithm

_FILE_NAMES = (
    "strassen",
    "bini-322-encA",
    "bini-322-decC",
    "bini-232-encA",
    "bini-232-encB",
    "bini-223-encB",
    "bini-223-decC",
    "hk-323",
    "hk-233",
    "hk-332",
)

_CLASSICAL_RE = re.compile(r"^classical\((\d+),(\d+),(\d+)\)$")


class UnknownAlgorithmError(KeyError):
    pass


def classical(m: int, n: int, p: int) -> BilinearAlgorithm:
    """The definition-level algorithm: q = mnp, one product per (i,j,l)."""
    q = m * n * p
    U = [[0] * q for _ in range(m * n)]
    V = [[0] * q for _ in range(n * p)]
    W = [[0] * q for _ in range(m * p)]
    for i in range(m):
        for j in range(n):
            for l in range(p):
                k = (i * n + j) * p + l
                U[i * n + j][k] = 1
                V[j * p + l][k] = 1
                W[i * p + l][k] = 1
    return BilinearAlgorithm(f"classical({m},{n},{p})", m, n, p, q, U, V, W)


def catalog_names():
    """All loadable names (classical listed once, parametrically)."""
    return ("classical(m,n,p)",) + _FILE_NAMES


def canonical_catalog():
    """The eleven concrete catalog algorithms used by the test batteries."""
    return [load_catalog("classical(2,2,2)")] + [load_catalog(n) for n in _FILE_NAMES]


def load_catalog(name: str) -> BilinearAlgorithm:
    match = _CLASSICAL_RE.match(name.replace(" ", ""))
    if match:
        m, n, p = (int(g) for g in match.groups())
        return classical(m, n, p)
    if name in _FILE_NAMES:
        ref = resources.files("rectmm") / "catalog_data" / f"{name}.alg"
        return algtext.loads(ref.read_text(), name=name)
    raise UnknownAlgorithmError(
        f"unknown algorithm {name!r}; known: {', '.join(catalog_names())}"
    )
