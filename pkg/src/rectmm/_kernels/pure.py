"""Pure-Python twins of the compiled kernels.

Same contracts as rectmm._kernels._core; used when the extension is not
built (or when RECTMM_PURE_PYTHON=1).  The compiled and pure versions are
cross-checked by the test suite and the benchmark script.
"""

from __future__ import annotations

from collections import OrderedDict

IMPLEMENTATION = "pure"


class LruCache:
    """Fully associative LRU over word addresses.

    Counts word traffic: a read miss brings one word in; a write miss
    allocates without a fetch; evicting or finally flushing a dirty word
    moves one word out.
    """

    __slots__ = ("capacity", "_map", "reads", "writes", "read_misses",
                 "write_misses", "dirty_evictions", "flushed")

    def __init__(self, capacity: int):
        if capacity < 1:
            raise ValueError("capacity must be positive")
        self.capacity = capacity
        self._map = OrderedDict()  # addr -> dirty flag
        self.reads = 0
        self.writes = 0
        self.read_misses = 0
        self.write_misses = 0
        self.dirty_evictions = 0
        self.flushed = 0

    def process(self, ops, addrs):
        """ops[i]: 0 = read, 1 = write of word addrs[i]."""
        cache = self._map
        cap = self.capacity
        for op, addr in zip(ops, addrs):
            if op:
                self.writes += 1
            else:
                self.reads += 1
            if addr in cache:
                dirty = cache.pop(addr)
                cache[addr] = dirty or bool(op)
                continue
            if op:
                self.write_misses += 1
            else:
                self.read_misses += 1
            if len(cache) >= cap:
                _, ev_dirty = cache.popitem(last=False)
                if ev_dirty:
                    self.dirty_evictions += 1
            cache[addr] = bool(op)

    def finalize(self):
        """Flush remaining dirty words; returns words moved W."""
        self.flushed += sum(1 for d in self._map.values() if d)
        self._map.clear()
        return self.words_moved

    @property
    def words_moved(self):
        return self.read_misses + self.dirty_evictions + self.flushed

    @property
    def resident(self):
        return len(self._map)


def min_cut_per_size(adj_masks, cap):
    """Minimum cut over connected vertex subsets, by subset size.

    adj_masks[v] is the neighbor bitmask of v (no self-loops).  Returns
    mincut[1..cap] (index 0 unused, -1 where no connected subset of that
    size exists).  Connected subsets are enumerated once each via the
    lowest-vertex pivot rule.
    """
    n = len(adj_masks)
    cap = min(cap, n)
    best = [-1] * (cap + 1)
    deg = [m.bit_count() for m in adj_masks]

    def record(size, cut):
        if best[size] < 0 or cut < best[size]:
            best[size] = cut

    def rec(smask, size, cut, ext, forbidden):
        record(size, cut)
        if size == cap:
            return
        banned = forbidden
        e = ext
        while e:
            ubit = e & (-e)
            e &= e - 1
            u = ubit.bit_length() - 1
            ncut = cut + deg[u] - 2 * (adj_masks[u] & smask).bit_count()
            next_ext = (e | adj_masks[u]) & ~(smask | ubit | banned)
            rec(smask | ubit, size + 1, ncut, next_ext, banned)
            banned |= ubit
    for v in range(n):
        vbit = 1 << v
        forbidden = vbit - 1  # subsets whose minimum vertex is v
        ext = adj_masks[v] & ~forbidden
        rec(vbit, 1, deg[v], ext, forbidden)
    return best
