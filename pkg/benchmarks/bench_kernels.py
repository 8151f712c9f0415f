#!/usr/bin/env python3
"""Benchmark the compiled kernels against their pure-Python twins.

Runs the same workloads through both implementations, asserts identical
results, and reports throughput.  Workloads:

* LRU trace replay on a real simulator trace (hk-323, configurable t)
* connected-subset cut enumeration on the hk-323 base decoding graph

Usage: python benchmarks/bench_kernels.py [--t 4] [--M 512]
"""

import argparse
import time

from rectmm._kernels import implementations
from rectmm.catalog import load_catalog
from rectmm.cdag import build_base_graphs
from rectmm.expansion import Graph
from rectmm.memsim import MemConfig, _stream_trace


def bench_lru(t: int, M: int):
    alg = load_catalog("hk-323")
    chunks = []
    _stream_trace(alg, t, MemConfig(M=M), lambda o, a: chunks.append((list(o), list(a))))
    events = sum(len(o) for o, _ in chunks)
    print(f"LRU replay: hk-323 t={t}, M={M}, {events} events")
    results = {}
    for name, impl in implementations().items():
        cache = impl.LruCache(M)
        start = time.perf_counter()
        for ops, addrs in chunks:
            cache.process(ops, addrs)
        W = cache.finalize()
        elapsed = time.perf_counter() - start
        results[name] = (W, cache.read_misses, cache.dirty_evictions, cache.flushed)
        print(f"  {name:9s} {events / elapsed / 1e6:7.2f} M events/s  (W={W})")
    assert len(set(results.values())) == 1, f"implementations disagree: {results}"


def bench_mincut():
    alg = load_catalog("hk-323")
    _, _, dc = build_base_graphs(alg)
    g = Graph.from_cdag(dc)
    masks = g.adjacency_masks()
    cap = g.n // 2
    print(f"connected-subset min cut: hk-323 Dec1C, |V|={g.n}, sizes up to {cap}")
    results = {}
    for name, impl in implementations().items():
        start = time.perf_counter()
        best = impl.min_cut_per_size(masks, cap)
        elapsed = time.perf_counter() - start
        results[name] = tuple(best)
        print(f"  {name:9s} {elapsed:7.3f}s")
    assert len(set(results.values())) == 1, f"implementations disagree: {results}"


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--t", type=int, default=4)
    ap.add_argument("--M", type=int, default=512)
    args = ap.parse_args()
    impls = implementations()
    print(f"available kernels: {', '.join(impls)}")
    if len(impls) == 1:
        print("note: compiled extension not built; benchmarking pure only")
    bench_lru(args.t, args.M)
    bench_mincut()


if __name__ == "__main__":
    main()
