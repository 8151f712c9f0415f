# cython: boundscheck=False, wraparound=False, cdivision=True
# cython: language_level=3
"""Compiled kernels: LRU trace replay and connected-subset cut enumeration.

Contracts match rectmm._kernels.pure exactly; the test suite and
benchmarks/bench_kernels.py cross-check the two.
"""

import array as _pyarray

from cpython cimport array

IMPLEMENTATION = "compiled"

cdef unsigned long long _HASH_MULT = 11400714819323198485


cdef extern from *:
    """
    #if defined(__GNUC__) || defined(__clang__)
    #define RMM_POPCOUNT(x) __builtin_popcountll(x)
    #define RMM_CTZ(x) __builtin_ctzll(x)
    #else
    static int RMM_POPCOUNT(unsigned long long x) {
        int c = 0; while (x) { x &= x - 1; ++c; } return c;
    }
    static int RMM_CTZ(unsigned long long x) {
        int c = 0; while (!(x & 1ULL)) { x >>= 1; ++c; } return c;
    }
    #endif
    """
    int RMM_POPCOUNT(unsigned long long x) noexcept nogil
    int RMM_CTZ(unsigned long long x) noexcept nogil


cdef class LruCache:
    """Fully associative LRU over word addresses; write-allocate, no fetch
    on write misses, write-back on eviction plus a final dirty flush."""

    cdef readonly long long capacity
    cdef readonly long long reads, writes
    cdef readonly long long read_misses, write_misses, dirty_evictions, flushed
    cdef long long count
    cdef long long head, tail            # slot list: head = LRU, tail = MRU
    cdef long long[::1] key
    cdef char[::1] dirty
    cdef long long[::1] nxt, prv
    cdef long long[::1] table            # slot+1; 0 empty, -1 tombstone
    cdef long long tsize, tmask, tombstones
    cdef long long free_top
    cdef long long[::1] free_slots

    def __init__(self, capacity):
        if capacity < 1:
            raise ValueError("capacity must be positive")
        self.capacity = capacity
        self.reads = self.writes = 0
        self.read_misses = self.write_misses = 0
        self.dirty_evictions = self.flushed = 0
        self.count = 0
        self.head = self.tail = -1
        cdef long long cap = capacity
        self.key = array.array("q", bytes(8 * cap))
        self.dirty = array.array("b", bytes(cap))
        self.nxt = array.array("q", bytes(8 * cap))
        self.prv = array.array("q", bytes(8 * cap))
        cdef long long ts = 4
        while ts < 4 * cap:
            ts <<= 1
        self.tsize = ts
        self.tmask = ts - 1
        self.table = array.array("q", bytes(8 * ts))
        self.tombstones = 0
        self.free_slots = array.array("q", bytes(8 * cap))
        cdef long long i
        for i in range(cap):
            self.free_slots[i] = cap - 1 - i
        self.free_top = cap

    cdef inline long long _find(self, long long addr) noexcept nogil:
        cdef long long h = <long long>(((<unsigned long long> addr) * _HASH_MULT) & (<unsigned long long> self.tmask))
        cdef long long probe = self.table[h]
        while probe != 0:
            if probe > 0 and self.key[probe - 1] == addr:
                return h
            h = (h + 1) & self.tmask
            probe = self.table[h]
        return -(h + 1) - 1  # encoded empty position

    cdef void _rehash(self):
        cdef long long i, slot, h
        for i in range(self.tsize):
            self.table[i] = 0
        self.tombstones = 0
        slot = self.head
        while slot != -1:
            h = (self.key[slot] * 0x9E3779B97F4A7C15) & self.tmask
            while self.table[h] != 0:
                h = (h + 1) & self.tmask
            self.table[h] = slot + 1
            slot = self.nxt[slot]

    cdef inline void _unlink(self, long long slot) noexcept nogil:
        if self.prv[slot] != -1:
            self.nxt[self.prv[slot]] = self.nxt[slot]
        else:
            self.head = self.nxt[slot]
        if self.nxt[slot] != -1:
            self.prv[self.nxt[slot]] = self.prv[slot]
        else:
            self.tail = self.prv[slot]

    cdef inline void _push_mru(self, long long slot) noexcept nogil:
        self.prv[slot] = self.tail
        self.nxt[slot] = -1
        if self.tail != -1:
            self.nxt[self.tail] = slot
        self.tail = slot
        if self.head == -1:
            self.head = slot

    def process(self, ops, addrs):
        cdef array.array oarr = ops if type(ops) is _pyarray.array else _pyarray.array("b", ops)
        cdef array.array aarr = addrs if type(addrs) is _pyarray.array else _pyarray.array("q", addrs)
        cdef char[::1] ov = oarr
        cdef long long[::1] av = aarr
        cdef Py_ssize_t n = av.shape[0], i
        cdef long long addr, pos, slot, victim, h
        cdef char op
        for i in range(n):
            op = ov[i]
            addr = av[i]
            if op:
                self.writes += 1
            else:
                self.reads += 1
            pos = self._find(addr)
            if pos >= 0:
                slot = self.table[pos] - 1
                if op:
                    self.dirty[slot] = 1
                if slot != self.tail:
                    self._unlink(slot)
                    self._push_mru(slot)
                continue
            if op:
                self.write_misses += 1
            else:
                self.read_misses += 1
            if self.count >= self.capacity:
                victim = self.head
                if self.dirty[victim]:
                    self.dirty_evictions += 1
                self._unlink(victim)
                h = self._find(self.key[victim])
                self.table[h] = -1
                self.tombstones += 1
                self.free_slots[self.free_top] = victim
                self.free_top += 1
                self.count -= 1
                if self.tombstones * 4 > self.tsize:
                    self._rehash()
            self.free_top -= 1
            slot = self.free_slots[self.free_top]
            self.key[slot] = addr
            self.dirty[slot] = 1 if op else 0
            self._push_mru(slot)
            self.count += 1
            h = self._insert_pos(addr)
            self.table[h] = slot + 1

    cdef inline long long _insert_pos(self, long long addr) noexcept nogil:
        cdef long long h = <long long>(((<unsigned long long> addr) * _HASH_MULT) & (<unsigned long long> self.tmask))
        while self.table[h] > 0:
            h = (h + 1) & self.tmask
        if self.table[h] == -1:
            self.tombstones -= 1
        return h

    def finalize(self):
        cdef long long slot = self.head
        while slot != -1:
            if self.dirty[slot]:
                self.flushed += 1
            slot = self.nxt[slot]
        self.head = self.tail = -1
        self.count = 0
        return self.words_moved

    @property
    def words_moved(self):
        return self.read_misses + self.dirty_evictions + self.flushed

    @property
    def resident(self):
        return self.count


cdef void _rec(unsigned long long smask, int size, long long cut,
               unsigned long long ext, unsigned long long banned,
               unsigned long long* adj, long long* deg,
               long long* best, int cap) noexcept nogil:
    if best[size] < 0 or cut < best[size]:
        best[size] = cut
    if size == cap:
        return
    cdef unsigned long long e = ext
    cdef unsigned long long ubit
    cdef int u
    cdef long long ncut
    while e:
        ubit = e & (~e + 1)
        e &= e - 1
        u = RMM_CTZ(ubit)
        ncut = cut + deg[u] - 2 * RMM_POPCOUNT(adj[u] & smask)
        _rec(smask | ubit, size + 1, ncut,
             (e | adj[u]) & ~(smask | ubit | banned),
             banned, adj, deg, best, cap)
        banned |= ubit


def min_cut_per_size(adj_masks, cap):
    """Minimum cut over connected subsets by size; see the pure twin."""
    n = len(adj_masks)
    if n > 64:
        from . import pure

        return pure.min_cut_per_size(adj_masks, cap)
    cap = min(cap, n)
    cdef unsigned long long adj[64]
    cdef long long deg[64]
    cdef long long best[65]
    cdef int i
    for i in range(n):
        adj[i] = adj_masks[i]
        deg[i] = RMM_POPCOUNT(adj[i])
    for i in range(cap + 1):
        best[i] = -1
    cdef int v
    cdef unsigned long long vbit, forbidden
    for v in range(n):
        vbit = 1ULL << v
        forbidden = vbit - 1
        _rec(vbit, 1, deg[v], adj[v] & ~forbidden, forbidden,
             adj, deg, best, cap)
    return [best[i] for i in range(cap + 1)]
