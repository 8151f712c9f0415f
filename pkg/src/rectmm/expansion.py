"""Edge expansion: exact enumeration, spectral bounds, and the segment
argument turning an expansion profile into a words-moved lower bound.

Expansion is taken over the undirected graph, degree-regularized by adding
(< d) loops to vertices of degree < d, where d is the maximum degree; a
loop raises the degree by 1 but never crosses a cut, so cut sizes are
computed on the loop-free edge set and h(U) = cut(U) / (d |U|).

Exact minima are found by enumerating connected subsets only: a
disconnected candidate U splits into components C with no edges between
them, so cut(U) = sum cut(C) and cut(U)/(d|U|) >= min_C cut(C)/(d|C|) with
each |C| <= |U|; the minimum over sets of size <= s is therefore attained
on a connected set (see docs/expansion-notes.md).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _kernels


class CapacityError(ValueError):
    """Graph too large for the requested exact mode; use cheeger_bound."""


@dataclass
class Graph:
    """Simple undirected graph; vertices 0..n-1, edges deduped, no loops."""

    n: int
    edges: list

    def __post_init__(self):
        seen = set()
        clean = []
        for u, v in self.edges:
            if u == v:
                continue
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u},{v}) out of range")
            key = (u, v) if u < v else (v, u)
            if key not in seen:
                seen.add(key)
                clean.append(key)
        self.edges = clean

    @property
    def degrees(self):
        deg = [0] * self.n
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    @property
    def max_degree(self):
        return max(self.degrees, default=0)

    def adjacency_masks(self):
        adj = [0] * self.n
        for u, v in self.edges:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return adj

    def component_sizes(self):
        parent = list(range(self.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v in self.edges:
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
        counts = {}
        for v in range(self.n):
            r = find(v)
            counts[r] = counts.get(r, 0) + 1
        return sorted(counts.values())

    def is_connected(self):
        return self.n <= 1 or len(self.component_sizes()) == 1

    @classmethod
    def from_cdag(cls, cdag, subgraph=None):
        n, edges = cdag.undirected_simple(subgraph)
        return cls(n, edges)

    @classmethod
    def from_edge_text(cls, text):
        """Parse the cdag module's export format (v/e lines)."""
        ids = {}
        edges = []
        for ln in text.splitlines():
            ln = ln.strip()
            if not ln or ln.startswith("#"):
                continue
            parts = ln.split()
            if parts[0] == "v":
                ids[int(parts[1])] = len(ids)
            elif parts[0] == "e":
                edges.append((int(parts[1]), int(parts[2])))
        remapped = [(ids[u], ids[v]) for u, v in edges]
        return cls(len(ids), remapped)


def cut_size(g: Graph, subset_mask: int) -> int:
    """|E(U, V \\ U)| on the loop-free edge set."""
    cut = 0
    for u, v in g.edges:
        if ((subset_mask >> u) & 1) != ((subset_mask >> v) & 1):
            cut += 1
    return cut


@dataclass
class ExpansionProfile:
    """(s, h_s) pairs with the regularized degree d used to normalize."""

    d: int
    entries: list = field(default_factory=list)  # (s, h_s, method)
    graph_size: int = 0

    def h(self):
        """h(G) = h_s at the largest recorded s."""
        return self.entries[-1][1] if self.entries else None

    def to_csv(self):
        lines = ["s,h_s,method"]
        for s, h, method in self.entries:
            lines.append(f"{s},{float(h):.12g},{method}")
        return "\n".join(lines) + "\n"


def edge_expansion_exact(
    g: Graph,
    s_max: int | None = None,
    exhaustive_limit: int = 22,
    small_set_limit: int = 8,
) -> ExpansionProfile:
    """Exact h_s for s = 1 .. cap by connected-subset enumeration.

    Full mode (s_max None) computes h(G) itself (cap = |V|/2) and requires
    |V| <= exhaustive_limit; small-set mode requires s_max <= small_set_limit.
    Both limits are defaults that callers may raise explicitly at their own
    expense.
    """
    if g.n == 0:
        raise ValueError("empty graph")
    if s_max is None:
        if g.n > exhaustive_limit:
            raise CapacityError(
                f"|V|={g.n} exceeds exhaustive limit {exhaustive_limit}; "
                "use cheeger_bound for an interval"
            )
        cap = g.n // 2
    else:
        if s_max > small_set_limit:
            raise CapacityError(
                f"s_max={s_max} exceeds small-set limit {small_set_limit}; "
                "use cheeger_bound for an interval"
            )
        cap = min(s_max, g.n // 2)
    cap = max(cap, 1)
    d = g.max_degree
    if d == 0:
        return ExpansionProfile(d=0, entries=[(1, Fraction(0), "exact")], graph_size=g.n)
    mincut = _kernels.min_cut_per_size(g.adjacency_masks(), cap)
    entries = []
    best = None
    for s in range(1, cap + 1):
        if mincut[s] >= 0:
            ratio = Fraction(mincut[s], d * s)
            if best is None or ratio < best:
                best = ratio
        entries.append((s, best, "exact"))
    return ExpansionProfile(d=d, entries=entries, graph_size=g.n)


@dataclass
class CheegerInterval:
    lower: float
    upper: float
    connected: bool
    lambda2: float | None = None


def cheeger_bound(g: Graph, dense_limit: int = 512, tol: float = 1e-8) -> CheegerInterval:
    """Interval [lambda2/2, sqrt(2 lambda2)] containing h(G).

    lambda2 is the algebraic connectivity of the loop-regularized d-regular
    graph's normalized Laplacian, which equals (Laplacian of G)/d.  Dense
    eigensolve up to dense_limit vertices, Lanczos above (relative
    eigenvalue tolerance ``tol``).
    """
    if not g.is_connected():
        return CheegerInterval(0.0, 0.0, connected=False)
    if g.n == 1:
        return CheegerInterval(0.0, 0.0, connected=True, lambda2=0.0)
    d = g.max_degree
    deg = g.degrees
    if g.n <= dense_limit:
        lap = np.zeros((g.n, g.n))
        for u, v in g.edges:
            lap[u, v] -= 1.0
            lap[v, u] -= 1.0
        lap[np.diag_indices(g.n)] = deg
        vals = np.linalg.eigvalsh(lap / d)
        lam2 = float(vals[1])
    else:
        import scipy.sparse as sp
        import scipy.sparse.linalg as spla

        rows = [u for u, _ in g.edges] + [v for _, v in g.edges]
        cols = [v for _, v in g.edges] + [u for u, _ in g.edges]
        data = [-1.0] * (2 * len(g.edges))
        lap = sp.coo_matrix((data, (rows, cols)), shape=(g.n, g.n)).tolil()
        lap.setdiag(deg)
        lap = (lap / d).tocsr()
        vals = spla.eigsh(lap, k=2, sigma=0, which="LM", tol=tol,
                          return_eigenvectors=False)
        lam2 = float(max(vals))
    lam2 = max(lam2, 0.0)
    return CheegerInterval(lam2 / 2.0, (2.0 * lam2) ** 0.5, connected=True, lambda2=lam2)


def bound_from_expansion(profile: ExpansionProfile, v_count: int, M: int):
    """Partition-argument bound: find the minimal recorded s with
    h_s * s / 2 >= 3M and return (|V|/s) * M; 0 if no entry qualifies."""
    for s, h, _method in profile.entries:
        if h is None:
            continue
        if h * s >= 6 * M:
            return v_count * M / s
    return 0
