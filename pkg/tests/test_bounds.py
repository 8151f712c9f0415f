import math

import pytest

from rectmm.bilinear import transform, Symmetry
from rectmm.bounds import (
    LogRatio,
    blackbox_compare,
    build_construction,
    omega0,
    symmetry_exponent_multisets,
    table1_report,
    theorem_bounds,
)
from rectmm.catalog import load_catalog
from rectmm.cdag import base_structure


def _reports(name):
    alg = load_catalog(name) if "(" in name or "-" in name else build_construction(name)
    stats = base_structure(alg)
    return {
        (r.formula, r.subgraph): r
        for r in theorem_bounds(stats, (alg.m, alg.n, alg.p, alg.q))
    }


# ---------------------------------------------------------------------------
# exact exponent comparison
# ---------------------------------------------------------------------------


def test_log_ratio_identities():
    assert LogRatio(4, 2) == LogRatio(16, 4) == LogRatio(64, 8)
    assert LogRatio(8, 4) == LogRatio(64, 16)  # both 3/2
    assert LogRatio(10, 6) != LogRatio(5, 3)
    assert LogRatio(15, 9) != LogRatio(15, 6)
    assert LogRatio(1000, 144) == LogRatio(1000, 144)
    assert LogRatio(1, 2).value() == 0.0


def test_log_ratio_value():
    assert LogRatio(15, 9).value() == pytest.approx(math.log(15, 9), abs=1e-15)


# ---------------------------------------------------------------------------
# per-algorithm reports
# ---------------------------------------------------------------------------


def test_bini_322_enca_reports():
    reps = _reports("bini-322-encA")
    dec = reps[("thm-dec-con", "DecC")]
    assert dec.exponent() == pytest.approx(math.log(10, 6) - 1, abs=1e-12)
    assert dec.tightness == "tight"
    enc_a = reps[("cor-enc-discon", "EncA")]  # disconnected encoder
    assert enc_a.base == 3 and enc_a.log_num == 5
    enc_b = reps[("thm-enc-con", "EncB")]
    assert enc_b.exponent() == pytest.approx(math.log(10, 4) - 1, abs=1e-12)
    assert enc_b.tightness == "not-tight"


def test_bini_322_decc_dual_bounds():
    reps = _reports("bini-322-decC")
    enc = reps[("thm-enc-con", "EncA")]
    assert enc.exponent() == pytest.approx(math.log(10, 6) - 1, abs=1e-12)
    assert enc.polylog_exponent() == pytest.approx(math.log(10, 6), abs=1e-12)
    assert enc.tightness == "tight-up-to-polylog"
    dec = reps[("cor-dec-discon", "DecC")]
    assert dec.exponent() == pytest.approx(math.log(5, 3) - 1, abs=1e-12)
    assert dec.tightness == "not-tight"


def test_hk_323_report():
    reps = _reports("hk-323")
    dec = reps[("thm-dec-con", "DecC")]
    assert dec.exponent() == pytest.approx(math.log(15, 9) - 1, abs=1e-12)
    assert dec.tightness == "tight"


def test_classical_multiply_copied_guard():
    reps = _reports("classical(2,2,2)")
    enc = reps[("thm-enc-con", "EncA")]
    assert not enc.applicable
    assert enc.tightness == "n/a"
    assert "multiply-copied" in enc.note


def test_report_value_monotone_in_m():
    reps = _reports("hk-323")
    dec = reps[("thm-dec-con", "DecC")]
    vals = [dec.value(4, M) for M in (64, 256, 1024)]
    assert vals[0] >= vals[1] >= vals[2]


def test_upper_and_trivial_present():
    reps = _reports("hk-323")
    up = reps[("upper-recursive", None)]
    assert up.base == 9 and up.log_num == 15
    triv = reps[("trivial-io", None)]
    assert triv.value(2, 10) == 9**2 * 1.0


def test_validity_predicate_for_corollaries():
    reps = _reports("bini-322-decC")
    dec = reps[("cor-dec-discon", "DecC")]
    assert dec.valid(4, 10)        # M well below (mp/X)^t = 81
    assert not dec.valid(4, 100)   # regime where the trivial bound wins


# ---------------------------------------------------------------------------
# the published-table golden (also exercised by test_acceptance)
# ---------------------------------------------------------------------------


def test_table1_row_count_and_duals():
    rows = table1_report()
    assert len(rows) == 23
    by_construction = {}
    for r in rows:
        by_construction.setdefault(r.construction, []).append(r)
    assert len(by_construction["bini-322-decC"]) == 2
    assert len(by_construction["hk-323"]) == 1


def test_omega0_values():
    assert omega0((12, 12, 12, 1000)) == pytest.approx(2.7799, abs=1e-3)
    assert omega0((18, 18, 18, 3375)) == pytest.approx(2.8108, abs=1e-3)
    with pytest.raises(ValueError):
        omega0((3, 2, 3, 15))


def test_square_constructions():
    b = build_construction("bini-121212")
    assert (b.m, b.n, b.p, b.q) == (12, 12, 12, 1000)
    h = build_construction("hk-181818")
    assert (h.m, h.n, h.p, h.q) == (18, 18, 18, 3375)


def test_symmetry_coherence():
    for name in ("bini-322-encA", "hk-323", "strassen"):
        ms = symmetry_exponent_multisets(load_catalog(name))
        assert len(set(ms.values())) == 1, name


def test_transformed_bounds_relabel():
    # the decoder bound of the base case becomes an encoder bound of the
    # rotated variant, with the same (num, base)
    alg = load_catalog("hk-323")
    rot = transform(alg, Symmetry(1, False))  # <2,3,3>
    reps = {
        (r.formula, r.subgraph): r
        for r in theorem_bounds(base_structure(rot), (rot.m, rot.n, rot.p, rot.q))
    }
    enc_b = reps[("thm-enc-con", "EncB")]
    assert (enc_b.log_num, enc_b.base) == (15, 9)


# ---------------------------------------------------------------------------
# blackbox comparison
# ---------------------------------------------------------------------------


def test_blackbox_hk_vs_strassen():
    bb = blackbox_compare(3, 2, 3, 15, math.log2(7), t=3, M=256)
    assert bb.flop_base_square == pytest.approx(15.75, abs=1e-12)  # 9 * 7/4
    assert bb.rect_wins_flops
    assert bb.comm_exponent_rect == pytest.approx(1.2325, abs=5e-5)
    assert bb.comm_exponent_square == pytest.approx(1.4037, abs=5e-5)
    assert bb.rect_wins_comm
    assert bb.square_can_win_comm  # omega0/2 exceeds log_mp(q)
    assert bb.flops_rect == 15.0**3
    assert bb.words_square > 0


def test_blackbox_classical_omega0():
    bb = blackbox_compare(3, 2, 3, 15, 3.0)
    assert bb.flop_base_square == pytest.approx(3 * 3 * 2.0)  # mnp
    assert bb.rect_wins_flops  # q=15 < 18


def test_blackbox_guards():
    with pytest.raises(ValueError):
        blackbox_compare(2, 3, 3, 15, 2.8)  # n > m
    with pytest.raises(ValueError):
        blackbox_compare(3, 2, 3, 15, 3.2)


def test_exponent_consistency_when_decoder_largest():
    # whenever the decoder is connected and mp = N*, the decoder bound's
    # exponent equals the recursive upper bound's: tight
    from rectmm.bounds import TABLE1_CONSTRUCTIONS

    seen = 0
    for label, _ in TABLE1_CONSTRUCTIONS:
        alg = build_construction(label)
        stats = base_structure(alg)
        if stats["DecC"].components != 1:
            continue
        if alg.m * alg.p != alg.nstar:
            continue
        reps = {
            (r.formula, r.subgraph): r
            for r in theorem_bounds(stats, (alg.m, alg.n, alg.p, alg.q))
        }
        assert reps[("thm-dec-con", "DecC")].tightness == "tight", label
        seen += 1
    assert seen >= 5  # hk-323/966/669/181818, bini-322-encA, 223-encB, 121212


def test_measured_expansion_reproduces_decoder_m_exponent():
    # cross-module check: anchor the decoder profile at the measured base
    # expansion, decay at rate mp/q, take |V| from the level-size formula,
    # and the partition-argument bound must reproduce the decoder bound's
    # M-exponent within fitting tolerance
    from rectmm.cdag import build_base_graphs
    from rectmm.expansion import Graph, edge_expansion_exact, ExpansionProfile, bound_from_expansion
    from rectmm.memsim import fit_exponent

    alg = load_catalog("hk-323")
    _, _, dc = build_base_graphs(alg)
    h1 = float(edge_expansion_exact(Graph.from_cdag(dc), exhaustive_limit=36).h())
    mp, q, t = 9, 15, 9
    v_count = sum(mp ** (t - i + 1) * q ** (i - 1) for i in range(1, t + 2))
    entries = []
    s = 1.0
    while s < q**t:
        si = int(math.ceil(s))
        entries.append((si, h1 * (mp / q) ** (math.log(si, q) - 1.0), "exact"))
        s *= 1.1
    profile = ExpansionProfile(d=mp + 2, entries=entries, graph_size=v_count)
    pts = [(M, bound_from_expansion(profile, v_count, M)) for M in (64, 256, 1024, 4096)]
    assert all(b > 0 for _, b in pts)
    slope, _ = fit_exponent(pts, "slope-logx")
    assert abs(slope - (-(math.log(15, 9) - 1.0))) < 0.03
