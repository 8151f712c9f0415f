"""Communication bound formulas, tightness classification, and the summary
table over the built-in algorithm families.

Which formula applies to an algorithm is decided purely by structural
predicates of its base graphs:

* decoder connected          -> W = Omega(q^t / M^(log_mp q - 1))
* encoder connected, no multiply-copied inputs
                             -> W = Omega(q^t / (t^(log_N q) M^(log_N q - 1)))
* decoder disconnected, X equal components
                             -> W = Omega(q^t / M^(log_{mp/X}(q/X) - 1))
* encoder disconnected, X equal components, no multiply-copied inputs
                             -> W = Omega(q^t / (t^e M^(e - 1))), e = log_{N/X}(q/X)

plus the recursive upper bound q^t / M^(log_{N*} q - 1) and the trivial
read/write floor max((mn)^t, (np)^t, (mp)^t).  A lower bound is tight when
its M-exponent equals the upper bound's; exponent equality is decided
symbolically on the integer pairs (num, base), never on floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .bilinear import BilinearAlgorithm, transform, ALL_SYMMETRIES
from .cdag import StructStats, base_structure
from .catalog import load_catalog
from .bilinear import tensor_product

FORMULAS = (
    "thm-dec-con",
    "thm-enc-con",
    "cor-dec-discon",
    "cor-enc-discon",
    "upper-recursive",
    "trivial-io",
)

TIGHT = "tight"
TIGHT_POLYLOG = "tight-up-to-polylog"
NOT_TIGHT = "not-tight"
NA = "n/a"


def _factorize(n: int) -> dict:
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@dataclass(frozen=True)
class LogRatio:
    """log_base(num), compared exactly.

    log_a(b) == log_c(d) iff ln(b) ln(c) == ln(d) ln(a); with prime-exponent
    vectors v(x) this is equality of the symmetric forms
    v(b) v(c)^T + v(c) v(b)^T  ==  v(d) v(a)^T + v(a) v(d)^T,
    which is integer arithmetic only.
    """

    num: int
    base: int

    def __post_init__(self):
        if self.num < 1 or self.base < 2:
            raise ValueError("need num >= 1 and base >= 2")

    def value(self) -> float:
        return math.log(self.num) / math.log(self.base)

    @staticmethod
    def _form(x: int, y: int):
        vx, vy = _factorize(x), _factorize(y)
        form = {}
        for p, a in vx.items():
            for r, b in vy.items():
                key = (p, r) if p <= r else (r, p)
                form[key] = form.get(key, 0) + a * b
        return {k: v for k, v in form.items() if v}

    def __eq__(self, other):
        if not isinstance(other, LogRatio):
            return NotImplemented
        return self._form(self.num, other.base) == self._form(other.num, self.base)

    def __hash__(self):
        return hash((self.num, self.base))


@dataclass
class BoundReport:
    """One evaluated bound formula for a fixed base algorithm."""

    formula: str
    subgraph: str | None
    q: int
    dims: tuple               # (m, n, p)
    base: int | None          # effective log base; None for trivial-io
    log_num: int | None       # q or q/X
    polylog: bool
    tightness: str
    note: str = ""
    applicable: bool = True

    def log_ratio(self):
        if self.base is None or not self.applicable:
            return None
        return LogRatio(self.log_num, self.base)

    def exponent(self):
        """M-exponent e in q^t / (t^pl * M^e)."""
        lr = self.log_ratio()
        return None if lr is None else lr.value() - 1.0

    def polylog_exponent(self):
        if not self.polylog or not self.applicable:
            return 0.0
        return self.log_ratio().value()

    def value(self, t: int, M: int):
        """Numeric bound at (t, M); constants are taken as 1."""
        if not self.applicable:
            return None
        m, n, p = self.dims
        if self.formula == "trivial-io":
            return float(max((m * n) ** t, (n * p) ** t, (m * p) ** t))
        e = self.exponent()
        pl = self.polylog_exponent()
        return float(self.q) ** t / (float(t) ** pl * float(M) ** e)

    def valid(self, t: int, M: int) -> bool:
        """Memory-regime caveat for the disconnected-case formulas: they add
        nothing once M = Omega((base)^t), where the trivial bound is stronger."""
        if self.formula in ("cor-dec-discon", "cor-enc-discon") and self.applicable:
            return M < self.base**t
        return True

    def expression(self) -> str:
        if not self.applicable:
            return f"{self.formula}: n/a ({self.note})"
        if self.formula == "trivial-io":
            return "max((mn)^t, (np)^t, (mp)^t)"
        e = f"log_{self.base}({self.log_num})-1"
        if self.polylog:
            return f"{self.q}^t / (t^(log_{self.base}({self.log_num})) * M^({e}))"
        if self.formula == "upper-recursive":
            return f"O({self.q}^t / M^({e}))"
        return f"{self.q}^t / M^({e})"


def _upper_ratio(m, n, p, q):
    return LogRatio(q, max(m * n, n * p, m * p))


def _classify(lr: LogRatio, polylog: bool, upper: LogRatio) -> str:
    if lr == upper:
        return TIGHT_POLYLOG if polylog else TIGHT
    return NOT_TIGHT


def theorem_bounds(stats: StructStats, dims, t: int | None = None, M: int | None = None):
    """All applicable bound formulas for a base case with the given
    structural report (components, component balance, copy structure).

    ``stats`` must describe the base graphs (t = 1).  ``t`` and ``M`` are
    only used by callers via report.value(t, M).
    """
    del t, M
    m, n, p, q = dims
    upper = _upper_ratio(m, n, p, q)
    reports = []

    dec = stats["DecC"]
    mp = m * p
    if dec.components == 1:
        lr = LogRatio(q, mp)
        reports.append(
            BoundReport(
                formula="thm-dec-con",
                subgraph="DecC",
                q=q,
                dims=(m, n, p),
                base=mp,
                log_num=q,
                polylog=False,
                tightness=_classify(lr, False, upper),
            )
        )
    else:
        X = dec.components
        balanced = len(set(dec.component_io)) == 1
        if balanced and mp // X < 2:
            reports.append(
                BoundReport(
                    formula="cor-dec-discon",
                    subgraph="DecC",
                    q=q,
                    dims=(m, n, p),
                    base=None,
                    log_num=None,
                    polylog=False,
                    tightness=NA,
                    note=f"X={X}: single-output components; no nontrivial bound",
                    applicable=False,
                )
            )
        elif balanced:
            lr = LogRatio(q // X, mp // X)
            reports.append(
                BoundReport(
                    formula="cor-dec-discon",
                    subgraph="DecC",
                    q=q,
                    dims=(m, n, p),
                    base=mp // X,
                    log_num=q // X,
                    polylog=False,
                    tightness=_classify(lr, False, upper),
                    note=f"X={X}; applies in the regime M < (mp/X)^t",
                )
            )
        else:
            reports.append(
                BoundReport(
                    formula="cor-dec-discon",
                    subgraph="DecC",
                    q=q,
                    dims=(m, n, p),
                    base=None,
                    log_num=None,
                    polylog=False,
                    tightness=NA,
                    note="decoder components of unequal size; bound not applicable",
                    applicable=False,
                )
            )

    for which, N in (("EncA", m * n), ("EncB", n * p)):
        enc = stats[which]
        if enc.multiply_copied:
            reports.append(
                BoundReport(
                    formula="thm-enc-con",
                    subgraph=which,
                    q=q,
                    dims=(m, n, p),
                    base=None,
                    log_num=None,
                    polylog=True,
                    tightness=NA,
                    note="multiply-copied inputs; encoder bound not applicable",
                    applicable=False,
                )
            )
            continue
        if enc.components == 1:
            lr = LogRatio(q, N)
            reports.append(
                BoundReport(
                    formula="thm-enc-con",
                    subgraph=which,
                    q=q,
                    dims=(m, n, p),
                    base=N,
                    log_num=q,
                    polylog=True,
                    tightness=_classify(lr, True, upper),
                )
            )
        else:
            X = enc.components
            balanced = len(set(enc.component_io)) == 1
            if balanced and N // X < 2:
                reports.append(
                    BoundReport(
                        formula="cor-enc-discon",
                        subgraph=which,
                        q=q,
                        dims=(m, n, p),
                        base=None,
                        log_num=None,
                        polylog=True,
                        tightness=NA,
                        note=f"X={X}: single-input components; no nontrivial bound",
                        applicable=False,
                    )
                )
            elif balanced:
                lr = LogRatio(q // X, N // X)
                reports.append(
                    BoundReport(
                        formula="cor-enc-discon",
                        subgraph=which,
                        q=q,
                        dims=(m, n, p),
                        base=N // X,
                        log_num=q // X,
                        polylog=True,
                        tightness=_classify(lr, True, upper),
                        note=f"X={X}; applies in the regime M < (N/X)^t",
                    )
                )
            else:
                reports.append(
                    BoundReport(
                        formula="cor-enc-discon",
                        subgraph=which,
                        q=q,
                        dims=(m, n, p),
                        base=None,
                        log_num=None,
                        polylog=True,
                        tightness=NA,
                        note="encoder components of unequal size; bound not applicable",
                        applicable=False,
                    )
                )

    nstar = max(m * n, n * p, m * p)
    reports.append(
        BoundReport(
            formula="upper-recursive",
            subgraph=None,
            q=q,
            dims=(m, n, p),
            base=nstar,
            log_num=q,
            polylog=False,
            tightness=NA,
            note="matching recursive algorithm, see memsim.recurrence_cost",
        )
    )
    reports.append(
        BoundReport(
            formula="trivial-io",
            subgraph=None,
            q=q,
            dims=(m, n, p),
            base=None,
            log_num=None,
            polylog=False,
            tightness=NA,
            note="inputs must be read, outputs written",
        )
    )
    return reports


def omega0(dims_q) -> float:
    """Square exponent log_n(q) of an <n,n,n> = q algorithm."""
    m, n, p, q = dims_q
    if not (m == n == p):
        raise ValueError("omega0 is defined for square shapes")
    return math.log(q) / math.log(n)


# ---------------------------------------------------------------------------
# The bound-summary table over the built-in families
# ---------------------------------------------------------------------------


def _product(*names):
    algs = [load_catalog(n) for n in names]
    out = algs[0]
    for a in algs[1:]:
        out = tensor_product(out, a)
    return out


TABLE1_CONSTRUCTIONS = (
    ("bini-322-encA", ("bini-322-encA",)),
    ("bini-322-decC", ("bini-322-decC",)),
    ("bini-232-encA", ("bini-232-encA",)),
    ("bini-232-encB", ("bini-232-encB",)),
    ("bini-223-encB", ("bini-223-encB",)),
    ("bini-223-decC", ("bini-223-decC",)),
    ("bini-664", ("bini-322-encA", "bini-232-encB")),
    ("bini-121212", ("bini-322-encA", "bini-232-encB", "bini-223-encB")),
    ("hk-323", ("hk-323",)),
    ("hk-332", ("hk-332",)),
    ("hk-233", ("hk-233",)),
    ("hk-966", ("hk-323", "hk-332")),
    ("hk-669", ("hk-233", "hk-323")),
    ("hk-696", ("hk-233", "hk-332")),
    ("hk-181818", ("hk-323", "hk-233", "hk-332")),
)

# Which of the computed bounds each published table row lists:
# (construction, [(formula, subgraph), ...])
_TABLE1_ROWS = (
    ("bini-322-encA", (("thm-dec-con", "DecC"),)),
    ("bini-322-decC", (("thm-enc-con", "EncA"), ("cor-dec-discon", "DecC"))),
    ("bini-232-encA", (("thm-dec-con", "DecC"), ("thm-enc-con", "EncB"))),
    ("bini-232-encB", (("thm-dec-con", "DecC"), ("thm-enc-con", "EncA"))),
    ("bini-223-encB", (("thm-dec-con", "DecC"),)),
    ("bini-223-decC", (("thm-enc-con", "EncB"), ("cor-dec-discon", "DecC"))),
    ("bini-664", (("thm-dec-con", "DecC"), ("cor-enc-discon", "EncA"))),
    ("bini-121212", (("thm-dec-con", "DecC"),)),
    ("hk-323", (("thm-dec-con", "DecC"),)),
    ("hk-332", (("thm-dec-con", "DecC"), ("thm-enc-con", "EncA"))),
    ("hk-233", (("thm-dec-con", "DecC"), ("thm-enc-con", "EncB"))),
    ("hk-966", (("thm-dec-con", "DecC"),)),
    ("hk-669", (("thm-dec-con", "DecC"),)),
    ("hk-696", (("thm-dec-con", "DecC"), ("thm-enc-con", "EncA"))),
    ("hk-181818", (("thm-dec-con", "DecC"),)),
)


@dataclass
class Table1Row:
    construction: str
    shape: tuple
    q: int
    disconnected: str
    formula: str
    subgraph: str
    exponent: float
    polylog_exponent: float
    tightness: str
    expression: str

    CSV_HEADER = "construction,shape,q,disconnected,formula,subgraph,exponent,polylog_exponent,tightness,expression"

    def csv_row(self):
        shape = "x".join(str(d) for d in self.shape)
        return (
            f"{self.construction},{shape},{self.q},{self.disconnected or 'none'},"
            f"{self.formula},{self.subgraph},{self.exponent:.12f},"
            f"{self.polylog_exponent:.12f},{self.tightness},{self.expression}"
        )


@lru_cache(maxsize=None)
def build_construction(name: str) -> BilinearAlgorithm:
    for label, factors in TABLE1_CONSTRUCTIONS:
        if label == name:
            return _product(*factors).renamed(label)
    raise KeyError(name)


def table1_report():
    """The bound-summary rows for all built-in constructions (base variants,
    rectangular products, and the square products)."""
    rows = []
    for label, listed in _TABLE1_ROWS:
        alg = build_construction(label)
        stats = base_structure(alg)
        disconnected = ",".join(
            s for s in ("EncA", "EncB", "DecC") if stats[s].components > 1
        )
        reports = {
            (r.formula, r.subgraph): r for r in theorem_bounds(stats, (alg.m, alg.n, alg.p, alg.q))
        }
        for formula, subgraph in listed:
            rep = reports[(formula, subgraph)]
            rows.append(
                Table1Row(
                    construction=label,
                    shape=(alg.m, alg.n, alg.p),
                    q=alg.q,
                    disconnected=disconnected,
                    formula=formula,
                    subgraph=subgraph,
                    exponent=rep.exponent(),
                    polylog_exponent=rep.polylog_exponent(),
                    tightness=rep.tightness,
                    expression=rep.expression(),
                )
            )
    return rows


# ---------------------------------------------------------------------------
# Blackbox square-algorithm comparison
# ---------------------------------------------------------------------------


@dataclass
class BlackboxComparison:
    dims: tuple
    q: int
    omega0: float
    flop_base_rect: float       # q
    flop_base_square: float     # m p n^(omega0 - 2)
    rect_wins_flops: bool
    comm_exponent_rect: float   # log_mp(q)
    comm_exponent_square: float # omega0 / 2
    rect_wins_comm: bool
    square_can_win_comm: bool   # crossover: omega0/2 > log_mp(q)
    t: int | None = None
    M: int | None = None
    flops_rect: float | None = None
    flops_square: float | None = None
    words_rect: float | None = None
    words_square: float | None = None


def blackbox_compare(m, n, p, q, omega0_value, t=None, M=None) -> BlackboxComparison:
    """Rectangular base case vs blackbox use of a square algorithm with
    exponent omega0 on the same <m^t, n^t, p^t> problem.

    The square route splits the problem into (m/n)^t (p/n)^t square chunks,
    costing Theta((m p n^(omega0-2))^t) flops and
    Theta((m p n^(omega0-2))^t / M^(omega0/2 - 1)) words.
    """
    if not (n <= m and n <= p):
        raise ValueError(
            "blackbox comparison assumes n <= m and n <= p "
            "(the inner dimension is the smallest)"
        )
    if not 2.0 < omega0_value <= 3.0:
        raise ValueError("omega0 must be in (2, 3]")
    flop_base_square = m * p * float(n) ** (omega0_value - 2.0)
    comm_rect = math.log(q) / math.log(m * p)
    comm_square = omega0_value / 2.0
    out = BlackboxComparison(
        dims=(m, n, p),
        q=q,
        omega0=omega0_value,
        flop_base_rect=float(q),
        flop_base_square=flop_base_square,
        rect_wins_flops=q < flop_base_square,
        comm_exponent_rect=comm_rect,
        comm_exponent_square=comm_square,
        rect_wins_comm=comm_rect < comm_square,
        square_can_win_comm=comm_square > comm_rect,
        t=t,
        M=M,
    )
    if t is not None and M is not None:
        out.flops_rect = float(q) ** t
        out.flops_square = flop_base_square**t
        out.words_rect = float(q) ** t / float(M) ** (comm_rect - 1.0)
        out.words_square = flop_base_square**t / float(M) ** (comm_square - 1.0)
    return out


def symmetry_exponent_multisets(alg: BilinearAlgorithm):
    """Multiset of applicable bound exponents (log_num, base) per symmetry.

    The formula kinds permute with the subgraph roles (a decoder bound of
    one variant is an encoder bound of another), but the exponent multiset
    over the three subgraphs is a shape invariant."""
    out = {}
    for sym in ALL_SYMMETRIES:
        talg = transform(alg, sym)
        stats = base_structure(talg)
        reports = theorem_bounds(stats, (talg.m, talg.n, talg.p, talg.q))
        entries = sorted(
            (r.log_num, r.base)
            for r in reports
            if r.applicable and r.formula not in ("upper-recursive", "trivial-io")
        )
        out[sym.label] = tuple(entries)
    return out
