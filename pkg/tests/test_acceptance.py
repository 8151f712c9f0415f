"""Acceptance battery: one test per criterion, each printing a PASS/FAIL
line with its runtime.  Tolerances are pinned here, not configurable."""

import math
import random
import time
from fractions import Fraction

from rectmm.bilinear import validate
from rectmm.bounds import omega0, table1_report
from rectmm.catalog import canonical_catalog, load_catalog
from rectmm.cdag import base_structure, build_base_graphs, compose_recursive, structural_report
from rectmm.executor import approximation_error, classical_multiply, multiply_recursive
from rectmm.expansion import Graph, cheeger_bound, edge_expansion_exact
from rectmm.memsim import MemConfig, fit_exponent, footprint, recurrence_cost, simulate_sweep

from conftest import random_connected_graph


def _finish(num, ok, detail, started, budget):
    elapsed = time.perf_counter() - started
    status = "PASS" if ok and elapsed < budget else "FAIL"
    line = f"[criterion {num}] {status} in {elapsed:.1f}s (budget {budget:.0f}s): {detail}"
    print(line)
    assert ok, line
    assert elapsed < budget, line


def test_criterion_1_catalog_validation():
    started = time.perf_counter()
    exact_names = {"classical(2,2,2)", "strassen", "hk-323", "hk-233", "hk-332"}
    checked = 0
    ok = True
    for alg in canonical_catalog():
        rep = validate(alg)
        if alg.name in exact_names:
            ok &= rep.exact
        else:
            ok &= rep.lambda_exact and not rep.exact
        ok &= not rep.failures  # no residuals at degree <= 0 anywhere
        checked += 1
    _finish(1, ok and checked == 11, f"{checked} catalog algorithms validated", started, 10.0)


def test_criterion_2_omega0():
    started = time.perf_counter()
    w_bini = omega0((12, 12, 12, 1000))
    w_hk = omega0((18, 18, 18, 3375))
    ok = abs(w_bini - 2.7799) <= 1e-3 and abs(w_hk - 2.8108) <= 1e-3
    _finish(
        2,
        ok,
        f"omega0 square products: {w_bini:.4f} (target 2.7799+-0.001), "
        f"{w_hk:.4f} (target 2.8108+-0.001)",
        started,
        60.0,
    )


def test_criterion_3_table1_golden():
    started = time.perf_counter()
    L = math.log
    # (construction, formula, exponent, polylog exponent, tightness); dual
    # rows appear twice, matching the published table
    expected = [
        ("bini-322-encA", "thm-dec-con", L(10, 6) - 1, 0.0, "tight"),
        ("bini-322-decC", "thm-enc-con", L(10, 6) - 1, L(10, 6), "tight-up-to-polylog"),
        ("bini-322-decC", "cor-dec-discon", L(5, 3) - 1, 0.0, "not-tight"),
        ("bini-232-encA", "thm-dec-con", L(10, 4) - 1, 0.0, "not-tight"),
        ("bini-232-encA", "thm-enc-con", L(10, 6) - 1, L(10, 6), "tight-up-to-polylog"),
        ("bini-232-encB", "thm-dec-con", L(10, 4) - 1, 0.0, "not-tight"),
        ("bini-232-encB", "thm-enc-con", L(10, 6) - 1, L(10, 6), "tight-up-to-polylog"),
        ("bini-223-encB", "thm-dec-con", L(10, 6) - 1, 0.0, "tight"),
        ("bini-223-decC", "thm-enc-con", L(10, 6) - 1, L(10, 6), "tight-up-to-polylog"),
        ("bini-223-decC", "cor-dec-discon", L(5, 3) - 1, 0.0, "not-tight"),
        ("bini-664", "thm-dec-con", L(100, 24) - 1, 0.0, "not-tight"),
        ("bini-664", "cor-enc-discon", L(50, 18) - 1, L(50, 18), "not-tight"),
        ("bini-121212", "thm-dec-con", L(1000, 144) - 1, 0.0, "tight"),
        ("hk-323", "thm-dec-con", L(15, 9) - 1, 0.0, "tight"),
        ("hk-332", "thm-dec-con", L(15, 6) - 1, 0.0, "not-tight"),
        ("hk-332", "thm-enc-con", L(15, 9) - 1, L(15, 9), "tight-up-to-polylog"),
        ("hk-233", "thm-dec-con", L(15, 6) - 1, 0.0, "not-tight"),
        ("hk-233", "thm-enc-con", L(15, 9) - 1, L(15, 9), "tight-up-to-polylog"),
        ("hk-966", "thm-dec-con", L(225, 54) - 1, 0.0, "tight"),
        ("hk-669", "thm-dec-con", L(225, 54) - 1, 0.0, "tight"),
        ("hk-696", "thm-dec-con", L(225, 36) - 1, 0.0, "not-tight"),
        ("hk-696", "thm-enc-con", L(225, 54) - 1, L(225, 54), "tight-up-to-polylog"),
        ("hk-181818", "thm-dec-con", L(3375, 324) - 1, 0.0, "tight"),
    ]
    rows = table1_report()
    ok = len(rows) == len(expected)
    mismatches = []
    for row, (cons, formula, e, pl, tight) in zip(rows, expected):
        good = (
            row.construction == cons
            and row.formula == formula
            and abs(row.exponent - e) <= 1e-12 * max(1.0, abs(e))
            and abs(row.polylog_exponent - pl) <= 1e-12 * max(1.0, abs(pl))
            and row.tightness == tight
        )
        if not good:
            mismatches.append((row.construction, row.formula))
        ok &= good
    _finish(
        3,
        ok,
        f"{len(rows)} table rows; exponents at 1e-12 relative; mismatches: {mismatches}",
        started,
        120.0,
    )


def test_criterion_4_cdag_structural_laws():
    started = time.perf_counter()
    ok = True
    details = []
    for alg in canonical_catalog():
        mp, q = alg.m * alg.p, alg.q
        base = base_structure(alg)
        x_a, x_b, x_c = (base[s].components for s in ("EncA", "EncB", "DecC"))
        for t in (1, 2, 3, 4):
            g = compose_recursive(alg, t)
            rep = structural_report(g, alg, t)
            want_levels = [mp ** (t - i + 1) * q ** (i - 1) for i in range(1, t + 2)]
            if rep["DecC"].level_sizes != want_levels:
                ok = False
                details.append(f"{alg.name} t={t} level sizes")
            if alg.n > 1 and rep["DecC"].max_degree > mp + 2:
                ok = False
                details.append(f"{alg.name} t={t} degree {rep['DecC'].max_degree}")
            for sub, x1 in (("EncA", x_a), ("EncB", x_b), ("DecC", x_c)):
                if rep[sub].components != x1**t:
                    ok = False
                    details.append(f"{alg.name} t={t} {sub} components")
        mc = base["EncA"].multiply_copied or base["EncB"].multiply_copied
        if alg.name.startswith("classical"):
            ok &= mc
        else:
            ok &= not mc
    bini = load_catalog("bini-322-encA")
    enc_counts = [
        structural_report(compose_recursive(bini, t), bini, t)["EncA"].components
        for t in (1, 2, 3, 4)
    ]
    ok &= enc_counts == [2, 4, 8, 16]
    _finish(
        4,
        ok,
        f"level sizes, degree <= mp+2, components X^t (Bini EncA {enc_counts}), "
        f"copy flags; issues: {details}",
        started,
        60.0,
    )


def test_criterion_5_expansion():
    started = time.perf_counter()
    ok = True
    details = []

    bini = load_catalog("bini-322-encA")
    ea, _, _ = build_base_graphs(bini)
    h_bini = edge_expansion_exact(Graph.from_cdag(ea), exhaustive_limit=16).h()
    if h_bini != 0:
        ok = False
        details.append(f"bini Enc1A h={h_bini}")

    for alg in canonical_catalog():
        for which, g in zip(("EncA", "EncB", "DecC"), build_base_graphs(alg)):
            graph = Graph.from_cdag(g)
            if not graph.is_connected():
                continue
            if graph.n <= 36:
                positive = edge_expansion_exact(graph, exhaustive_limit=36).h() > 0
            else:
                positive = cheeger_bound(graph).lower > 0
            if not positive:
                ok = False
                details.append(f"{alg.name} {which} h=0 though connected")

    hk = load_catalog("hk-323")
    _, _, dc = build_base_graphs(hk)
    gdc = Graph.from_cdag(dc)
    prof = edge_expansion_exact(gdc, exhaustive_limit=36)
    cb = cheeger_bound(gdc)
    inside = cb.lower <= float(prof.h()) <= cb.upper
    if not (prof.h() == Fraction(2, 27) and inside):
        ok = False
        details.append(f"hk Dec1C h={prof.h()} interval=({cb.lower:.4f},{cb.upper:.4f})")

    rng = random.Random(12345)
    for _ in range(100):
        n = rng.randint(4, 12)
        g = Graph(n, random_connected_graph(rng, n, rng.randint(0, n)))
        hs = [h for _, h, _ in edge_expansion_exact(g, exhaustive_limit=16).entries]
        if not all(a >= b for a, b in zip(hs, hs[1:])):
            ok = False
            details.append("monotonicity")
            break

    _finish(
        5,
        ok,
        f"bini Enc1A h=0; connected subgraphs h>0; hk Dec1C h=2/27 in "
        f"[{cb.lower:.4f},{cb.upper:.4f}]; h_s monotone on 100 graphs; {details}",
        started,
        300.0,
    )


def test_criterion_6_communication_exponent_fit():
    started = time.perf_counter()
    alg = load_catalog("hk-323")
    t = 5  # the criterion allows 4 or 5; 5 is used since runtime permits
    Ms = [2**k for k in range(8, 14)]
    stats = simulate_sweep(alg, t, Ms, MemConfig(M=Ms[0], layout="recursive-blocked"))
    slope, stderr = fit_exponent([(s.M, s.W) for s in stats], "slope-logx")
    target = -(math.log(15, 9) - 1)
    slope_ok = abs(slope - target) <= 0.08

    fp = footprint(alg, t)
    e = math.log(15, 9) - 1
    sandwich_ok = True
    for s in stats:
        if s.M >= fp / 4:
            continue
        lower = (15.0**t / s.M**e) / 16.0
        upper = recurrence_cost(alg, t, s.M)
        if not (lower <= s.W <= upper):
            sandwich_ok = False
    detail = (
        f"hk-323 t={t} M=2^8..2^13: slope {slope:.5f} +- {stderr:.5f} vs "
        f"target {target:.5f} (tol 0.08) -> {'ok' if slope_ok else 'OUT OF BAND'}; "
        f"sandwich 2^-4*thm <= W <= recurrence for M < footprint/4 ({fp//4}): "
        f"{'ok' if sandwich_ok else 'violated'}; "
        f"W={[s.W for s in stats]}"
    )
    _finish(6, slope_ok and sandwich_ok, detail, started, 900.0)


def test_criterion_7_executor_oracle():
    started = time.perf_counter()
    ok = True
    details = []
    rng = random.Random(20240809)

    def rand_rational(rows, cols):
        return [
            [Fraction(rng.randint(-6, 6), rng.choice((1, 2, 3))) for _ in range(cols)]
            for _ in range(rows)
        ]

    for name in ("hk-323", "hk-233", "hk-332", "classical(2,2,2)"):
        alg = load_catalog(name)
        for t in (1, 2, 3):
            for _ in range(20):
                A = rand_rational(alg.m**t, alg.n**t)
                B = rand_rational(alg.n**t, alg.p**t)
                C, st = multiply_recursive(alg, A, B, t)
                if C != classical_multiply(A, B) or st.scalar_mults != alg.q**t:
                    ok = False
                    details.append(f"{name} t={t}")
                    break

    bini = load_catalog("bini-322-encA")
    lams = [Fraction(1, 2**k) for k in range(4, 9)]
    scan = approximation_error(bini, 1, lams, 10, seed=7)
    ratios = [r for _, _, r in scan[1:]]
    if not all(0.4 <= r <= 0.6 for r in ratios):
        ok = False
        details.append(f"ratios {ratios}")

    _finish(
        7,
        ok,
        f"exact oracle equality for HK/classical, t<=3, 20 rational pairs each; "
        f"bini error ratios {['%.3f' % r for r in ratios]} in [0.4,0.6]; {details}",
        started,
        300.0,
    )


def test_criterion_8_blackbox():
    started = time.perf_counter()
    from rectmm.bounds import blackbox_compare

    bb = blackbox_compare(3, 2, 3, 15, math.log2(7))
    # exact values: m p n^(omega0-2) = 9 * 7/4 = 15.75, log_9(15) = 1.2325,
    # omega0/2 = 1.4037 (to 4 decimals)
    ok = (
        bb.rect_wins_flops
        and bb.flop_base_rect == 15.0
        and abs(bb.flop_base_square - 15.75) < 1e-12
        and abs(bb.comm_exponent_rect - 1.2325) < 5e-5
        and abs(bb.comm_exponent_square - 1.4037) < 5e-5
        and bb.rect_wins_comm
    )
    _finish(
        8,
        ok,
        f"rectangular wins flops ({bb.flop_base_rect:.4f} < {bb.flop_base_square:.4f}) "
        f"and communication exponent ({bb.comm_exponent_rect:.4f} < {bb.comm_exponent_square:.4f})",
        started,
        60.0,
    )
