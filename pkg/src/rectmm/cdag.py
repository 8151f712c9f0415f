"""Computational DAGs of recursive bilinear algorithms.

A depth-t run has four parts: the encoding graphs of A and B (linear
combinations feeding the q^t scalar multiplications), the multiplication
vertices, and the decoding graph assembling C.  Each subgraph is layered:
level 1 is the matrix side and level t+1 the multiplication side, so a
decoding graph has level sizes (mp)^t, (mp)^(t-1) q, ..., q^t.

Construction follows the recursive identification scheme: at the boundary
between levels l and l+1 there are q^(l-1) * N^(t-l) instances of the base
graph (N = mn, np or mp), and the j-th interface vertex of one copy is the
j-th output of the matching copy one level down.  Interface vertex ids are
therefore pure arithmetic in (level, prefix, position); only the vertices
inside a base-graph instance (binary add chains expanding fan-in > 2) are
allocated dynamically.

Fan-in-1 outputs are where the relaxed/non-relaxed split lives: the true
CDAG reuses the source vertex across levels (no arithmetic happens, so no
vertex exists, and degrees can grow with t), while the relaxed variant
inserts a per-level copy vertex, keeping degrees bounded by base-graph
quantities.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bilinear import BilinearAlgorithm

KIND_UNSET = -1
KIND_INPUT = 0
KIND_ADD = 1
KIND_COPY = 2
KIND_MULT = 3
KIND_NAMES = ("input", "add", "copy", "mult")

SUBGRAPHS = ("EncA", "EncB", "DecC")


@dataclass
class _SubMeta:
    name: str
    N: int                # base-graph matrix-side width (mn, np or mp)
    decoder: bool
    level_base: list      # [unused, base(level 1), ..., base(level t+1)]
    level_slots: list     # slot counts per level (same indexing)


class Cdag:
    """Array-backed layered DAG. Vertices with ``alias[v] != v`` are slots
    that were identified with a reused vertex and do not exist themselves."""

    def __init__(self, alg_name, t, relaxed):
        self.alg_name = alg_name
        self.t = t
        self.relaxed = relaxed
        self.kind = []        # KIND_* per vertex
        self.layer = []
        self.sub = []         # index into SUBGRAPHS
        self.interface = []
        self.alias = []
        self.is_output = []
        self.edge_u = []      # directed u -> v, endpoints always resolved
        self.edge_v = []
        self.meta = {}        # name -> _SubMeta

    # -- construction helpers (used by the builder functions below) ---------

    def _alloc_block(self, count, layer, sub_idx, interface):
        base = len(self.kind)
        self.kind.extend([KIND_UNSET] * count)
        self.layer.extend([layer] * count)
        self.sub.extend([sub_idx] * count)
        self.interface.extend([interface] * count)
        self.is_output.extend([False] * count)
        start = len(self.alias)
        self.alias.extend(range(start, start + count))
        return base

    def _new_internal(self, layer, sub_idx):
        v = self._alloc_block(1, layer, sub_idx, False)
        self.kind[v] = KIND_ADD
        return v

    def resolve(self, v):
        alias = self.alias
        root = v
        while alias[root] != root:
            root = alias[root]
        while alias[v] != root:
            alias[v], v = root, alias[v]
        return root

    def add_edge(self, u, v):
        self.edge_u.append(u)
        self.edge_v.append(v)

    # -- queries -------------------------------------------------------------

    def is_real(self, v):
        return self.alias[v] == v

    @property
    def num_slots(self):
        return len(self.kind)

    def real_vertices(self):
        return [v for v in range(len(self.kind)) if self.alias[v] == v]

    def vertex_count(self):
        return sum(1 for v in range(len(self.kind)) if self.alias[v] == v)

    def edge_count(self):
        return len(self.edge_u)

    def degrees(self):
        """Undirected degree (in + out) per vertex id."""
        deg = [0] * len(self.kind)
        for u in self.edge_u:
            deg[u] += 1
        for v in self.edge_v:
            deg[v] += 1
        return deg

    def in_degrees(self):
        deg = [0] * len(self.kind)
        for v in self.edge_v:
            deg[v] += 1
        return deg

    def level_sizes(self, subgraph):
        """Real-vertex count per level, in level order 1..t+1."""
        meta = self.meta[subgraph]
        out = []
        for lvl in range(1, self.t + 2):
            base = meta.level_base[lvl]
            count = meta.level_slots[lvl]
            out.append(
                sum(1 for v in range(base, base + count) if self.alias[v] == v)
            )
        return out

    def subgraph_index(self, subgraph):
        return SUBGRAPHS.index(subgraph)

    def max_degree(self, subgraph=None):
        deg = self.degrees()
        if subgraph is None:
            verts = self.real_vertices()
        else:
            si = self.subgraph_index(subgraph)
            verts = [
                v
                for v in range(len(self.kind))
                if self.alias[v] == v and self.sub[v] == si
            ]
        return max((deg[v] for v in verts), default=0)

    def component_labels(self, subgraph=None):
        """Union-find labels over edges internal to ``subgraph`` (or all)."""
        parent = list(range(len(self.kind)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        si = None if subgraph is None else self.subgraph_index(subgraph)
        for u, v in zip(self.edge_u, self.edge_v):
            if si is not None and (self.sub[u] != si or self.sub[v] != si):
                continue
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
        return find

    def component_count(self, subgraph=None):
        find = self.component_labels(subgraph)
        si = None if subgraph is None else self.subgraph_index(subgraph)
        roots = set()
        for v in range(len(self.kind)):
            if self.alias[v] != v:
                continue
            if si is not None and self.sub[v] != si:
                continue
            roots.add(find(v))
        return len(roots)

    def component_io_sizes(self, subgraph):
        """Per component: (#matrix-side slots, #mult-side slots), sorted."""
        meta = self.meta[subgraph]
        find = self.component_labels(subgraph)
        t = self.t
        lo, hi = (1, t + 1)
        counts = {}
        for lvl, pos in ((lo, 0), (hi, 1)):
            base = meta.level_base[lvl]
            for v in range(base, base + meta.level_slots[lvl]):
                root = find(self.resolve(v))
                entry = counts.setdefault(root, [0, 0])
                entry[pos] += 1
        if meta.decoder:
            # decoder inputs are the mult side, outputs the matrix side
            return tuple(sorted((b, a) for a, b in counts.values()))
        return tuple(sorted((a, b) for a, b in counts.values()))

    def undirected_simple(self, subgraph=None):
        """(n, edges) with vertices relabelled 0..n-1, parallels deduped.

        Restricted to one subgraph if given (bridge edges dropped).
        """
        si = None if subgraph is None else self.subgraph_index(subgraph)
        keep = [
            v
            for v in range(len(self.kind))
            if self.alias[v] == v and (si is None or self.sub[v] == si)
        ]
        index = {v: i for i, v in enumerate(keep)}
        seen = set()
        edges = []
        for u, v in zip(self.edge_u, self.edge_v):
            iu = index.get(u)
            iv = index.get(v)
            if iu is None or iv is None or iu == iv:
                continue
            key = (iu, iv) if iu < iv else (iv, iu)
            if key in seen:
                continue
            seen.add(key)
            edges.append(key)
        return len(keep), edges

    def vertex_label(self, v):
        sub = SUBGRAPHS[self.sub[v]] if self.sub[v] >= 0 else "?"
        if self.interface[v]:
            meta = self.meta[sub]
            for lvl in range(1, self.t + 2):
                base = meta.level_base[lvl]
                if base <= v < base + meta.level_slots[lvl]:
                    return f"{sub}.l{lvl}.{v - base}"
        return f"{sub}.x{v}"

    def export_text(self):
        """Edge-list export with a vertex-attribute header."""
        lines = [
            f"# cdag alg={self.alg_name} t={self.t} relaxed={self.relaxed}",
            "# v <id> <kind> <layer> <subgraph> <interface> <label>",
        ]
        for v in range(len(self.kind)):
            if self.alias[v] != v:
                continue
            lines.append(
                "v {} {} {} {} {} {}".format(
                    v,
                    KIND_NAMES[self.kind[v]],
                    self.layer[v],
                    SUBGRAPHS[self.sub[v]],
                    int(self.interface[v]),
                    self.vertex_label(v),
                )
            )
        for u, v in zip(self.edge_u, self.edge_v):
            lines.append(f"e {u} {v}")
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Builders
# ---------------------------------------------------------------------------


def _tree_programs(alg: BilinearAlgorithm, which):
    """Leaf index lists, one per base-graph output of the subgraph."""
    if which == "EncA":
        mat, q = alg.U, alg.q
        return [[r for r in range(alg.m * alg.n) if not mat[r][k].is_zero()] for k in range(q)]
    if which == "EncB":
        mat, q = alg.V, alg.q
        return [[r for r in range(alg.n * alg.p) if not mat[r][k].is_zero()] for k in range(q)]
    if which == "DecC":
        return [
            [k for k in range(alg.q) if not alg.W[o][k].is_zero()]
            for o in range(alg.m * alg.p)
        ]
    raise ValueError(f"unknown subgraph {which!r}")


def _side_width(alg, which):
    return {"EncA": alg.m * alg.n, "EncB": alg.n * alg.p, "DecC": alg.m * alg.p}[which]


def _build_subgraph_into(g: Cdag, alg, which, t, relaxed, source_kind):
    q = alg.q
    N = _side_width(alg, which)
    decoder = which == "DecC"
    sub_idx = SUBGRAPHS.index(which)
    trees = _tree_programs(alg, which)
    for idx, leaves in enumerate(trees):
        if not leaves:
            raise ValueError(f"{alg.name}: empty column/row {idx} in {which}")

    level_base = [None] * (t + 2)
    level_slots = [None] * (t + 2)
    for lvl in range(1, t + 2):
        count = N ** (t - lvl + 1) * q ** (lvl - 1)
        level_base[lvl] = g._alloc_block(count, lvl, sub_idx, True)
        level_slots[lvl] = count
    g.meta[which] = _SubMeta(which, N, decoder, level_base, level_slots)

    kind = g.kind
    if decoder:
        base = level_base[t + 1]
        for v in range(base, base + level_slots[t + 1]):
            kind[v] = source_kind
        base1 = level_base[1]
        for v in range(base1, base1 + level_slots[1]):
            g.is_output[v] = True
    else:
        base = level_base[1]
        for v in range(base, base + level_slots[1]):
            kind[v] = KIND_INPUT

    resolve = g.resolve
    add_edge = g.add_edge

    def emit_tree(leaves, root, root_layer):
        f = len(leaves)
        if f == 1:
            if relaxed:
                kind[root] = KIND_COPY
                add_edge(leaves[0], root)
            else:
                g.alias[root] = leaves[0]
            return
        prev = leaves[0]
        for leaf in leaves[1:-1]:
            nv = g._new_internal(root_layer, sub_idx)
            add_edge(prev, nv)
            add_edge(leaf, nv)
            prev = nv
        kind[root] = KIND_ADD
        add_edge(prev, root)
        add_edge(leaves[-1], root)

    boundaries = range(t, 0, -1) if decoder else range(1, t + 1)
    for lvl in boundaries:
        stride = N ** (t - lvl)
        n_prefix = q ** (lvl - 1)
        if decoder:
            in_level, out_level = lvl + 1, lvl
        else:
            in_level, out_level = lvl, lvl + 1
        for c in range(n_prefix):
            if decoder:
                in_base = level_base[lvl + 1] + c * q * stride
                out_base = level_base[lvl] + c * N * stride
            else:
                in_base = level_base[lvl] + c * N * stride
                out_base = level_base[lvl + 1] + c * q * stride
            for y in range(stride):
                for tree_idx, leaves in enumerate(trees):
                    root = out_base + tree_idx * stride + y
                    leaf_vids = [
                        resolve(in_base + i * stride + y) for i in leaves
                    ]
                    emit_tree(leaf_vids, root, out_level)


def build_subgraph(alg: BilinearAlgorithm, which, t, relaxed=False) -> Cdag:
    """Standalone Enc_tA / Enc_tB / Dec_tC with plain input sources."""
    g = Cdag(alg.name, t, relaxed)
    source = KIND_MULT if which == "DecC" else KIND_INPUT
    _build_subgraph_into(g, alg, which, t, relaxed, source)
    _check_complete(g)
    return g


def build_base_graphs(alg: BilinearAlgorithm):
    """(Enc_1A, Enc_1B, Dec_1C) with fan-in-1 outputs as explicit copies."""
    return tuple(build_subgraph(alg, which, 1, relaxed=True) for which in SUBGRAPHS)


def compose_recursive(alg: BilinearAlgorithm, t: int, relaxed=False) -> Cdag:
    """The full depth-t graph H_t: both encoders, multiplications, decoder."""
    if t < 0:
        raise ValueError("t must be >= 0")
    g = Cdag(alg.name, t, relaxed)
    if t == 0:
        # trivial graph: inputs are outputs, no arithmetic
        for which in SUBGRAPHS:
            N = _side_width(alg, which)
            base = g._alloc_block(N, 1, SUBGRAPHS.index(which), True)
            for v in range(base, base + N):
                g.kind[v] = KIND_INPUT
            g.meta[which] = _SubMeta(which, N, which == "DecC", [None, base], [None, N])
        return g
    _build_subgraph_into(g, alg, "EncA", t, relaxed, KIND_INPUT)
    _build_subgraph_into(g, alg, "EncB", t, relaxed, KIND_INPUT)
    _build_subgraph_into(g, alg, "DecC", t, relaxed, KIND_MULT)
    qt = alg.q**t
    a_out = g.meta["EncA"].level_base[t + 1]
    b_out = g.meta["EncB"].level_base[t + 1]
    c_in = g.meta["DecC"].level_base[t + 1]
    for k in range(qt):
        g.add_edge(g.resolve(a_out + k), c_in + k)
        g.add_edge(g.resolve(b_out + k), c_in + k)
    _check_complete(g)
    return g


def _check_complete(g: Cdag):
    for v, k in enumerate(g.kind):
        if g.alias[v] == v and k == KIND_UNSET:
            raise AssertionError(f"vertex {v} left unset")


# ---------------------------------------------------------------------------
# Structural reporting
# ---------------------------------------------------------------------------


@dataclass
class SubgraphStats:
    name: str
    n_inputs: int                 # base-graph matrix-side width (mn, np, mp)
    level_sizes: list
    max_degree: int
    components: int
    component_io: tuple           # per component (inputs, outputs), sorted
    multiply_copied: bool | None  # encoders only


@dataclass
class StructStats:
    alg_name: str
    t: int
    relaxed: bool
    subs: dict

    def __getitem__(self, key):
        return self.subs[key]


def multiply_copied(alg: BilinearAlgorithm, which) -> bool:
    """True if some input of the base encoding graph is copied (fan-in-1
    output) to two or more outputs."""
    if which == "DecC":
        mat = alg.W
        cols = [[k for k in range(alg.q) if not row[k].is_zero()] for row in mat]
        singles = [c[0] for c in cols if len(c) == 1]
    else:
        mat = alg.U if which == "EncA" else alg.V
        nrows = len(mat)
        col_rows = [
            [r for r in range(nrows) if not mat[r][k].is_zero()] for k in range(alg.q)
        ]
        singles = [c[0] for c in col_rows if len(c) == 1]
    return len(singles) != len(set(singles))


def base_structure(alg: BilinearAlgorithm) -> StructStats:
    """StructStats of the three base graphs (t = 1, explicit copy vertices)."""
    subs = {}
    for which in SUBGRAPHS:
        g = build_subgraph(alg, which, 1, relaxed=True)
        deg = g.degrees()
        subs[which] = SubgraphStats(
            name=which,
            n_inputs=_side_width(alg, which),
            level_sizes=g.level_sizes(which),
            max_degree=max((deg[v] for v in g.real_vertices()), default=0),
            components=g.component_count(which),
            component_io=g.component_io_sizes(which),
            multiply_copied=multiply_copied(alg, which) if which != "DecC" else None,
        )
    return StructStats(alg_name=alg.name, t=1, relaxed=True, subs=subs)


def structural_report(g: Cdag, alg: BilinearAlgorithm, t: int) -> StructStats:
    """Per-subgraph level sizes, degrees, components, and copy structure."""
    if t != g.t:
        raise ValueError(f"graph was built at t={g.t}, not {t}")
    subs = {}
    deg = g.degrees()
    for which in SUBGRAPHS:
        if which not in g.meta:
            continue
        si = g.subgraph_index(which)
        maxdeg = max(
            (
                deg[v]
                for v in range(len(g.kind))
                if g.alias[v] == v and g.sub[v] == si
            ),
            default=0,
        )
        subs[which] = SubgraphStats(
            name=which,
            n_inputs=_side_width(alg, which),
            level_sizes=g.level_sizes(which) if g.t >= 1 else [g.meta[which].level_slots[1]],
            max_degree=maxdeg,
            components=g.component_count(which),
            component_io=g.component_io_sizes(which) if g.t >= 1 else (),
            multiply_copied=multiply_copied(alg, which) if which != "DecC" else None,
        )
    return StructStats(alg_name=g.alg_name, t=g.t, relaxed=g.relaxed, subs=subs)
