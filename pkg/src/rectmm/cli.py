"""Command-line front end.

Subcommands: validate, variants, tensor, multiply, error-scan, cdag-stats,
expansion, simulate, recurrence, bounds, table1, blackbox.  Reports go to
stdout as aligned text; --csv/--json write machine-readable copies.  Exit
codes: 0 ok, 2 validation failure, 3 configuration error, 4 capacity error.

Sweep commands fan out one worker per t over the (t, M) grid (an M-sweep
at fixed t is a single trace pass); RECTMM_WORKERS caps the pool.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import algtext
from .bilinear import (
    ALL_SYMMETRIES,
    MalformedAlgorithmError,
    tensor_product,
    transform,
    validate,
)
from .catalog import UnknownAlgorithmError, load_catalog
from .cdag import base_structure, compose_recursive, structural_report
from .executor import ExecutionError, approximation_error, classical_multiply, max_abs_diff, multiply_recursive
from .expansion import CapacityError, Graph, cheeger_bound, edge_expansion_exact
from .memsim import (
    ConfigError,
    MemConfig,
    fit_exponent,
    footprint,
    recurrence_cost,
    simulate_sweep,
    sweep_m_values,
)
from . import bounds as bounds_mod

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_CONFIG = 3
EXIT_CAPACITY = 4


def _load(name_or_path):
    if os.path.sep in name_or_path or name_or_path.endswith(".alg"):
        return algtext.load(name_or_path)
    try:
        return load_catalog(name_or_path)
    except UnknownAlgorithmError:
        try:
            return bounds_mod.build_construction(name_or_path)
        except KeyError:
            raise UnknownAlgorithmError(name_or_path) from None


def _write_outputs(args, payload, csv_text=None):
    if getattr(args, "json", None):
        with open(args.json, "w") as fh:
            json.dump(payload, fh, indent=2, default=str)
            fh.write("\n")
    if getattr(args, "csv", None) and csv_text is not None:
        with open(args.csv, "w") as fh:
            fh.write(csv_text)


def _workers():
    cap = os.environ.get("RECTMM_WORKERS")
    return max(1, int(cap)) if cap else None


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_validate(args):
    alg = _load(args.algorithm)
    rep = validate(alg)
    status = "exact" if rep.exact else ("lambda-exact" if rep.lambda_exact else "INVALID")
    print(f"{alg.name}: <{alg.m},{alg.n},{alg.p}> = {alg.q}  status={status}")
    for idx, res in rep.failures[:10]:
        print(f"  residual at {idx}: {res.to_text()}")
    payload = {
        "algorithm": alg.name,
        "shape": [alg.m, alg.n, alg.p],
        "q": alg.q,
        "exact": rep.exact,
        "lambda_exact": rep.lambda_exact,
        "failures": len(rep.failures),
    }
    _write_outputs(args, payload)
    return EXIT_OK if rep.lambda_exact else EXIT_VALIDATION


def cmd_variants(args):
    alg = _load(args.algorithm)
    payload = []
    for sym in ALL_SYMMETRIES:
        out = transform(alg, sym)
        rep = validate(out)
        status = "exact" if rep.exact else ("lambda-exact" if rep.lambda_exact else "INVALID")
        print(f"{sym.label:7s} -> <{out.m},{out.n},{out.p}> = {out.q}  {status}")
        payload.append({"sym": sym.label, "shape": [out.m, out.n, out.p], "status": status})
        if args.write_dir:
            algtext.dump(out, os.path.join(args.write_dir, f"{alg.name}-{sym.label}.alg"))
    _write_outputs(args, payload)
    return EXIT_OK


def cmd_tensor(args):
    algs = [_load(n) for n in args.algorithms]
    out = algs[0]
    for a in algs[1:]:
        out = tensor_product(out, a)
    print(f"{out.name}: <{out.m},{out.n},{out.p}> = {out.q}")
    if args.output:
        algtext.dump(out, args.output)
        print(f"wrote {args.output}")
    if args.check:
        rep = validate(out)
        status = "exact" if rep.exact else ("lambda-exact" if rep.lambda_exact else "INVALID")
        print(f"validation: {status}")
        if not rep.lambda_exact:
            return EXIT_VALIDATION
    return EXIT_OK


def cmd_multiply(args):
    import random

    alg = _load(args.algorithm)
    rng = random.Random(args.seed)
    A = [[rng.randint(-9, 9) for _ in range(alg.n**args.t)] for _ in range(alg.m**args.t)]
    B = [[rng.randint(-9, 9) for _ in range(alg.p**args.t)] for _ in range(alg.n**args.t)]
    lam = Fraction(args.lam) if args.lam else None
    C, stats = multiply_recursive(alg, A, B, args.t, lambda_value=lam, cutoff=args.cutoff)
    err = max_abs_diff(C, classical_multiply(A, B))
    print(
        f"{alg.name} t={args.t}: scalar_mults={stats.scalar_mults} (q^t={alg.q**args.t}) "
        f"adds={stats.scalar_adds} elapsed={stats.elapsed:.3f}s max|C-AB|={float(err):.3g}"
    )
    _write_outputs(
        args,
        {
            "algorithm": alg.name,
            "t": args.t,
            "scalar_mults": stats.scalar_mults,
            "scalar_adds": stats.scalar_adds,
            "max_error": str(err),
        },
    )
    return EXIT_OK


def cmd_error_scan(args):
    alg = _load(args.algorithm)
    lams = [Fraction(1, 2**k) for k in range(args.kmin, args.kmax + 1)]
    scan = approximation_error(alg, args.t, lams, args.trials, args.seed)
    print("lambda,max_error,ratio_to_previous")
    csv_lines = ["lambda,max_error,ratio_to_previous"]
    payload = []
    for lam, err, ratio in scan:
        rtxt = "" if ratio is None else f"{ratio:.6f}"
        line = f"{lam},{float(err):.6g},{rtxt}"
        print(line)
        csv_lines.append(line)
        payload.append({"lambda": str(lam), "max_error": str(err), "ratio": ratio})
    _write_outputs(args, payload, "\n".join(csv_lines) + "\n")
    return EXIT_OK


def cmd_cdag_stats(args):
    alg = _load(args.algorithm)
    g = compose_recursive(alg, args.t, relaxed=args.relaxed)
    rep = structural_report(g, alg, args.t)
    print(f"{alg.name} t={args.t} relaxed={args.relaxed}: |V|={g.vertex_count()} |E|={g.edge_count()}")
    payload = {"algorithm": alg.name, "t": args.t, "relaxed": args.relaxed, "subgraphs": {}}
    for which in ("EncA", "EncB", "DecC"):
        s = rep[which]
        print(
            f"  {which}: levels={s.level_sizes} max_degree={s.max_degree} "
            f"components={s.components} multiply_copied={s.multiply_copied}"
        )
        payload["subgraphs"][which] = {
            "level_sizes": s.level_sizes,
            "max_degree": s.max_degree,
            "components": s.components,
            "component_io": list(s.component_io),
            "multiply_copied": s.multiply_copied,
        }
    if args.export:
        with open(args.export, "w") as fh:
            fh.write(g.export_text())
        print(f"wrote edge list to {args.export}")
    _write_outputs(args, payload)
    return EXIT_OK


def cmd_expansion(args):
    if args.graph_file:
        with open(args.graph_file) as fh:
            graph = Graph.from_edge_text(fh.read())
        label, which = args.graph_file, "file"
    else:
        alg = _load(args.algorithm)
        g = compose_recursive(alg, args.t, relaxed=args.relaxed)
        which = args.subgraph
        graph = Graph.from_cdag(g, which)
        label = f"{alg.name} t={args.t}"
    print(f"{label} {which}: |V|={graph.n} |E|={len(graph.edges)}")
    payload = {"source": label, "subgraph": which, "n": graph.n}
    csv_text = None
    if args.mode in ("exact", "both"):
        prof = edge_expansion_exact(
            graph,
            s_max=args.s_max,
            exhaustive_limit=args.exhaustive_limit,
            small_set_limit=args.s_max or 8,
        )
        h = prof.h()
        print(f"  exact: d={prof.d} h_s(s={prof.entries[-1][0]}) = {h} = {float(h):.6f}")
        payload["exact_h"] = str(h)
        payload["d"] = prof.d
        csv_text = prof.to_csv()
    if args.mode in ("spectral", "both"):
        cb = cheeger_bound(graph)
        print(f"  spectral interval: [{cb.lower:.6f}, {cb.upper:.6f}] connected={cb.connected}")
        payload["cheeger"] = [cb.lower, cb.upper]
        payload["connected"] = cb.connected
    _write_outputs(args, payload, csv_text)
    return EXIT_OK


def _simulate_one(job):
    name, t, Ms, layout, cutoff, seed = job
    alg = _load(name)
    cfg = MemConfig(M=Ms[0], layout=layout, cutoff=cutoff)
    return [s.__dict__ for s in simulate_sweep(alg, t, Ms, cfg, seed)]


def cmd_simulate(args):
    alg = _load(args.algorithm)
    Ms = sweep_m_values(args.M)
    ts = [int(x) for x in str(args.t).split(",")]
    jobs = [(args.algorithm, t, Ms, args.layout, args.cutoff, args.seed) for t in ts]
    if len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=_workers()) as pool:
            results = list(pool.map(_simulate_one, jobs))
    else:
        results = [_simulate_one(jobs[0])]
    rows = [r for group in results for r in group]
    rows.sort(key=lambda r: (r["t"], r["M"]))
    print("alg,t,M,layout,W,reads,writes,flops")
    csv_lines = ["alg,t,M,layout,W,reads,writes,flops"]
    for r in rows:
        line = f"{r['alg']},{r['t']},{r['M']},{r['layout']},{r['W']},{r['reads']},{r['writes']},{r['flops']}"
        print(line)
        csv_lines.append(line)
    payload = {"rows": rows}
    if args.fit:
        for t in ts:
            pts = [(r["M"], r["W"]) for r in rows if r["t"] == t]
            slope, stderr = fit_exponent(pts, "slope-logx")
            target = -(math.log(alg.q) / math.log(alg.m * alg.p) - 1.0)
            verdict = "within" if abs(slope - target) <= args.fit_tolerance else "OUTSIDE"
            print(
                f"t={t}: fitted slope {slope:.5f} +- {stderr:.5f}; "
                f"target -(log_mp(q)-1) = {target:.5f}; {verdict} tolerance {args.fit_tolerance}"
            )
            payload.setdefault("fits", []).append(
                {"t": t, "slope": slope, "stderr": stderr, "target": target, "verdict": verdict}
            )
    _write_outputs(args, payload, "\n".join(csv_lines) + "\n")
    return EXIT_OK


def cmd_recurrence(args):
    alg = _load(args.algorithm)
    Ms = sweep_m_values(args.M)
    print("alg,t,M,recurrence_words,footprint")
    csv_lines = ["alg,t,M,recurrence_words,footprint"]
    fp = footprint(alg, args.t)
    payload = []
    for M in Ms:
        w = recurrence_cost(alg, args.t, M)
        line = f"{alg.name},{args.t},{M},{w},{fp}"
        print(line)
        csv_lines.append(line)
        payload.append({"M": M, "recurrence_words": w, "footprint": fp})
    _write_outputs(args, payload, "\n".join(csv_lines) + "\n")
    return EXIT_OK


def cmd_bounds(args):
    alg = _load(args.algorithm)
    stats = base_structure(alg)
    reports = bounds_mod.theorem_bounds(stats, (alg.m, alg.n, alg.p, alg.q))
    print(f"{alg.name}: <{alg.m},{alg.n},{alg.p}> = {alg.q}")
    payload = []
    for r in reports:
        e = r.exponent()
        etxt = "-" if e is None else f"{e:.6f}"
        print(f"  {r.formula:15s} {r.subgraph or '-':4s} exponent={etxt:10s} "
              f"tightness={r.tightness:20s} {r.expression()}")
        entry = {
            "formula": r.formula,
            "subgraph": r.subgraph,
            "exponent": e,
            "polylog_exponent": r.polylog_exponent() if r.applicable else None,
            "tightness": r.tightness,
            "expression": r.expression(),
            "note": r.note,
        }
        if args.t is not None and args.M is not None:
            entry["value"] = r.value(args.t, args.M)
            entry["valid_regime"] = r.valid(args.t, args.M)
            print(f"      value(t={args.t}, M={args.M}) = {entry['value']}")
        payload.append(entry)
    _write_outputs(args, payload)
    return EXIT_OK


def cmd_table1(args):
    rows = bounds_mod.table1_report()
    header = bounds_mod.Table1Row.CSV_HEADER
    print(header)
    csv_lines = [header]
    for r in rows:
        line = r.csv_row()
        print(line)
        csv_lines.append(line)
    _write_outputs(args, [r.__dict__ for r in rows], "\n".join(csv_lines) + "\n")
    return EXIT_OK


def cmd_blackbox(args):
    alg = _load(args.algorithm) if args.algorithm else None
    if alg is not None:
        m, n, p, q = alg.m, alg.n, alg.p, alg.q
    else:
        m, n, p, q = args.m, args.n, args.p, args.q
    w0 = math.log2(7) if args.omega0 == "strassen" else float(args.omega0)
    cmp_ = bounds_mod.blackbox_compare(m, n, p, q, w0, t=args.t, M=args.M)
    print(f"rectangular <{m},{n},{p}> = {q} vs square blackbox omega0 = {w0:.4f}")
    print(f"  flops per level: {cmp_.flop_base_rect:.4f} vs {cmp_.flop_base_square:.4f} "
          f"-> rectangular wins flops: {cmp_.rect_wins_flops}")
    print(f"  communication exponents: log_mp(q) = {cmp_.comm_exponent_rect:.4f} vs "
          f"omega0/2 = {cmp_.comm_exponent_square:.4f} -> rectangular wins: {cmp_.rect_wins_comm}")
    if cmp_.square_can_win_comm:
        print("  note: omega0/2 > log_mp(q): for some (t, M) the square blackbox moves fewer words")
    if cmp_.words_rect is not None:
        print(f"  at t={args.t}, M={args.M}: flops {cmp_.flops_rect:.4g} vs {cmp_.flops_square:.4g}; "
              f"words {cmp_.words_rect:.4g} vs {cmp_.words_square:.4g}")
    _write_outputs(args, cmp_.__dict__)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser():
    ap = argparse.ArgumentParser(
        prog="rectmm",
        description="Bilinear rectangular matrix multiplication: validation, "
        "execution, CDAG structure, expansion, and memory-traffic analysis.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--csv", help="write CSV report to this path")
        p.add_argument("--json", help="write JSON report to this path")

    p = sub.add_parser("validate", help="check an algorithm against the multiplication tensor")
    p.add_argument("algorithm")
    common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("variants", help="the six symmetry variants and their validation status")
    p.add_argument("algorithm")
    p.add_argument("--write-dir", help="write each variant as an .alg file here")
    common(p)
    p.set_defaults(func=cmd_variants)

    p = sub.add_parser("tensor", help="tensor product of algorithms")
    p.add_argument("algorithms", nargs="+")
    p.add_argument("-o", "--output", help="write product as .alg")
    p.add_argument("--check", action="store_true", help="validate the product (brute force)")
    common(p)
    p.set_defaults(func=cmd_tensor)

    p = sub.add_parser("multiply", help="run the recursive executor on random matrices")
    p.add_argument("algorithm")
    p.add_argument("--t", type=int, default=1)
    p.add_argument("--lam", help="lambda value for approximate algorithms, e.g. 1/1000")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cutoff", type=int, default=0)
    common(p)
    p.set_defaults(func=cmd_multiply)

    p = sub.add_parser("error-scan", help="exact approximation-error scan over lambda = 2^-k")
    p.add_argument("algorithm")
    p.add_argument("--t", type=int, default=1)
    p.add_argument("--kmin", type=int, default=4)
    p.add_argument("--kmax", type=int, default=8)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    common(p)
    p.set_defaults(func=cmd_error_scan)

    p = sub.add_parser("cdag-stats", help="build the depth-t CDAG and report structure")
    p.add_argument("algorithm")
    p.add_argument("--t", type=int, default=1)
    p.add_argument("--relaxed", action="store_true")
    p.add_argument("--export", help="write the edge-list export here")
    common(p)
    p.set_defaults(func=cmd_cdag_stats)

    p = sub.add_parser("expansion", help="edge expansion of a CDAG subgraph")
    p.add_argument("algorithm", nargs="?")
    p.add_argument("--graph-file", help="analyze an edge-list export instead of building a CDAG")
    p.add_argument("--t", type=int, default=1)
    p.add_argument("--subgraph", choices=["EncA", "EncB", "DecC"], default="DecC")
    p.add_argument("--relaxed", action="store_true")
    p.add_argument("--mode", choices=["exact", "spectral", "both"], default="both")
    p.add_argument("--s-max", type=int, default=None)
    p.add_argument("--exhaustive-limit", type=int, default=22)
    common(p)
    p.set_defaults(func=cmd_expansion)

    p = sub.add_parser("simulate", help="LRU trace simulation over an M sweep")
    p.add_argument("algorithm")
    p.add_argument("--t", default="4", help="recursion depth, or comma list for a grid")
    p.add_argument("--M", required=True, help="M sweep: 'lo..hi' (doubling) or comma list")
    p.add_argument("--layout", choices=["recursive-blocked", "row-major"], default="recursive-blocked")
    p.add_argument("--cutoff", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--fit", action="store_true", help="fit log W vs log M and compare to theory")
    p.add_argument("--fit-tolerance", type=float, default=0.08)
    common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("recurrence", help="analytic words-moved recurrence")
    p.add_argument("algorithm")
    p.add_argument("--t", type=int, default=4)
    p.add_argument("--M", required=True)
    common(p)
    p.set_defaults(func=cmd_recurrence)

    p = sub.add_parser("bounds", help="bound formulas applicable to an algorithm")
    p.add_argument("algorithm")
    p.add_argument("--t", type=int, default=None)
    p.add_argument("--M", type=int, default=None)
    common(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("table1", help="bound summary table over the built-in constructions")
    common(p)
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("blackbox", help="rectangular vs square-blackbox comparison")
    p.add_argument("--algorithm", help="base case to compare (e.g. hk-323)")
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--p", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("--omega0", default="strassen", help="'strassen' or a number in (2,3]")
    p.add_argument("--t", type=int, default=None)
    p.add_argument("--M", type=int, default=None)
    common(p)
    p.set_defaults(func=cmd_blackbox)

    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (UnknownAlgorithmError, MalformedAlgorithmError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION if isinstance(exc, MalformedAlgorithmError) else EXIT_CONFIG
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (ConfigError, ExecutionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
