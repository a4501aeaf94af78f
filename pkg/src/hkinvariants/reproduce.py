"""Batch verification of every published number the library can recompute.

Each check returns a ``CheckResult`` with exact values rendered as strings.
``data_dir`` points at an alternative copy of the shipped ``data`` directory
(subfolders ``manifolds`` and ``profiles``); this is how corrupted fixtures
are detected.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations

from .catalog import (
    ch4_ratio,
    conj_ch4_value,
    enumerate_betti,
    enumerate_fourfold_tables,
    load_entry,
    og10_sequential_solve,
    rr_arith,
    table_from_mu,
    verify_q_structure,
)
from .errors import HKError
from .exactcore import CycloElem, cyclo_det_inverse, format_rational
from .genus import evaluate, sqrt_todd_component, todd_component
from .orbifold import (
    CyclicStratum,
    OrbifoldProfile,
    builtin_profile,
    chi_line_bundle,
    derive,
    k4_fixed_points,
    k4_solve,
    symplectic_weight_sets,
)
from .rrfujiki import (
    C2,
    C2SQ,
    C4,
    RRPoly,
    b2_bound_from_coeffs,
    b2_bound_from_rr,
    ch4_constant,
    degree4_from_rr,
    dispersion_bound,
    hitchin_sawon_check,
    rr_k3n,
    rr_kumn,
    rr_scale,
    sqrt_todd_constant,
)


@dataclass
class CheckResult:
    id: str
    title: str
    ok: bool
    values: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        extra = "" if self.ok else "  <- " + "; ".join(self.failures)
        return f"[{status}] {self.id}: {self.title} ({self.seconds:.3f}s){extra}"


class _Recorder:
    def __init__(self):
        self.values = {}
        self.failures = []

    def expect(self, key, got, want):
        self.values[key] = _fmt(got)
        if got != want:
            self.failures.append(f"{key}: got {_fmt(got)}, expected {_fmt(want)}")

    def record(self, key, got):
        self.values[key] = _fmt(got)


def _fmt(x) -> str:
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return format_rational(x)
    if isinstance(x, tuple):
        return "(" + ", ".join(_fmt(v) for v in x) + ")"
    if isinstance(x, list):
        return "[" + ", ".join(_fmt(v) for v in x) + "]"
    return str(x)


def _degree4_tuple(t):
    return (t.C1, t.value(C2), t.value(C2SQ), t.value(C4))


# ---------------------------------------------------------------------------


def check_degree4(r, data_dir=None):
    r.expect("k3n(2)", _degree4_tuple(degree4_from_rr(rr_k3n(2))), (3, 30, 828, 324))
    r.expect("kumn(2)", _degree4_tuple(degree4_from_rr(rr_kumn(2))), (9, 54, 756, 108))


def check_bounds(r, data_dir=None):
    for n in range(2, 9):
        r.expect(f"k3n({n})", b2_bound_from_rr(rr_k3n(n)).bound, n + 17 + Fraction(12, n + 1))
        r.expect(f"kumn({n})", b2_bound_from_rr(rr_kumn(n)).bound, Fraction(n + 5))
    r.expect("nikulin coefficients", b2_bound_from_coeffs(2, Fraction(1, 4), Fraction(3, 2), Fraction(17, 8)).bound, 16)
    inv = derive(builtin_profile("nikulin_m_prime", data_dir))
    r.expect("nikulin profile", inv.bound.bound, 16)


def check_hitchin_sawon(r, data_dir=None):
    for n in range(2, 9):
        for name, make in (("k3n", rr_k3n), ("kumn", rr_kumn)):
            r.expect(f"{name}({n})", hitchin_sawon_check(degree4_from_rr(make(n))), 0)
    for name in ("og6", "og10", "k3_2", "kum_2"):
        r.expect(name, hitchin_sawon_check(load_entry(name, data_dir).table), 0)


def check_sqrt_todd(r, data_dir=None):
    t = load_entry("k3_2", data_dir).table
    closed = sqrt_todd_constant(2, 2, t.C1, t.value(C2))
    expanded = 7 * t.value(C2SQ) / 5760 - t.value(C4) / 1440
    r.expect("k3_2 power formula", closed, Fraction(25, 32))
    r.expect("k3_2 genus expansion", expanded, Fraction(25, 32))
    r.expect("k3_2 genus module", evaluate(sqrt_todd_component(2), t), Fraction(25, 32))
    for name in ("og6", "og10"):
        t = load_entry(name, data_dir).table
        for k in range(1, t.n + 1):
            want = sqrt_todd_constant(t.n, k, t.C1, t.value(C2))
            r.expect(f"{name} k={k}", evaluate(sqrt_todd_component(k), t), want)


_ORBIFOLD_EXPECTED = {
    # name: (C(c4), C(td4), C(c2^2), C(c2) or symbolic, bound)
    "nikulin_m_prime": (198, Fraction(17, 8), 576, 36, 16),
    "kummer_k_prime": (90, Fraction(15, 8), 480, 40, 8),
    "dual_kum2": (12, Fraction(1, 3), 84, 6, 7),
    "k4_prime": (45, Fraction(15, 16), 240, "10*sqrt(C1)", 8),
    "k3_prime": (100, None, 540, "26*sqrt(C1/3)", Fraction(135, 17)),
    "y_k3_z4": (Fraction(261, 2), None, 486, "8*sqrt(3*C1)", Fraction(54, 5)),
    "y_k3_z2z2": (162, None, 504, "8*sqrt(3*C1)", 14),
}


def check_orbifold(r, data_dir=None):
    for name, (c4, td4, c2sq, c2, bound) in _ORBIFOLD_EXPECTED.items():
        inv = derive(builtin_profile(name, data_dir))
        r.expect(f"{name} C(c4)", inv.C_c4, c4)
        if td4 is not None:
            r.expect(f"{name} C(td4)", inv.C_td4, td4)
        r.expect(f"{name} C(c2^2)", inv.C_c2sq, c2sq)
        got_c2 = inv.C_c2 if isinstance(c2, int) else inv.C_c2_surd.render("C1")
        r.expect(f"{name} C(c2)", got_c2, c2)
        r.expect(f"{name} bound", inv.bound.bound, bound)
    kim = derive(builtin_profile("dual_kum2", data_dir))
    r.expect("dual_kum2 chi(L) at q=6", chi_line_bundle(kim, 6), 6)
    base = rr_k3n(2)
    for name, m in (("m3", 3), ("m7", 7), ("m11", 11)):
        inv = derive(builtin_profile(name, data_dir))
        want = tuple(c * Fraction(m) ** (2 - i) / m for i, c in enumerate(base.coeffs))
        r.expect(f"{name} RR = RR_K3[2](mq)/m", inv.rr.coeffs, want)


def appendix_k4(data_dir=None) -> tuple:
    fp = k4_fixed_points()
    sol = k4_solve(a4=fp["a4"], sigma2_fixed=fp["sigma2_fixed"])
    prof = OrbifoldProfile(
        "k4_prime",
        b2=6,
        chi_top=sol["chi"],
        strata=(CyclicStratum(2, int(sol["a2"])), CyclicStratum(4, fp["a4"])),
    )
    inv = derive(prof)
    return (fp["sigma2_fixed"], fp["a4"], sol["R"], sol["a2"], sol["chi"], inv.C_c4, inv.C_td4, inv.C_c2sq), inv


def check_appendix_k4(r, data_dir=None):
    tup, inv = appendix_k4(data_dir)
    r.expect("(sigma2-fixed, a4, R, a2, chi, C(c4), C(td4), C(c2^2))", tup,
             (36, 8, 24, 30, 66, 45, Fraction(15, 16), 240))
    r.expect("C(c2)", inv.C_c2_surd.render("C1"), "10*sqrt(C1)")


def check_q_structure(r, data_dir=None):
    for name in ("og6", "og10"):
        e = load_entry(name, data_dir)
        res = verify_q_structure(e)
        bad = [m for m, v in res if v != 0]
        r.expect(f"{name} q-power residuals ({len(res)} entries)", bad, [])
        r.expect(f"{name} td_{2 * e.n}", evaluate(todd_component(e.n), e.table), e.n + 1)


def check_og10_solve(r, data_dir=None):
    mu = og10_sequential_solve()
    r.expect("(mu3, mu4, mu5)", (mu[3], mu[4], mu[5]),
             (Fraction(21, 64), Fraction(237, 3328), Fraction(27, 2560)))
    e = load_entry("og10", data_dir)
    regen = table_from_mu(5, 24, e.table.C1, mu)
    r.expect("regenerated og10 table", regen == e.table, True)


def check_conjectures(r, data_dir=None):
    want = {"og10": Fraction(10, 21), "og6": Fraction(4, 3), "k3_2": Fraction(5), "kum_2": Fraction(5)}
    for name, v in want.items():
        t = load_entry(name, data_dir).table
        r.expect(f"{name} C(ch4)/C(1)", ch4_ratio(t), v)
        r.expect(f"{name} conjectured", conj_ch4_value(t.n), v)
    bad = []
    for n in range(3, 9):
        for a in (Fraction(1), Fraction(3), Fraction(7, 2), Fraction(-1, 3), Fraction(10)):
            t = degree4_from_rr(rr_arith(n, a, 5))
            if ch4_constant(t) / t.C1 != conj_ch4_value(n):
                bad.append((n, a))
    r.expect("rr_arith offset independence failures", bad, [])
    rows = [_degree4_tuple(t)[1:] + (t.C1,) for t in enumerate_fourfold_tables()]
    r.expect("fourfold tables (C(c2), C(c2^2), C(c4), C(1))", rows,
             [(30, 828, 324, 3), (54, 756, 108, 9)])
    r.expect("betti tuples", enumerate_betti(), [(23, 0, 276), (5, 0, 96), (6, 4, 102), (7, 8, 108)])


def check_graphs_basic(r, data_dir=None):
    from .graphpair import GraphVector, expected_wheeling, glue, strut, wheel, wheeling_expansion

    T = GraphVector.basis
    r.expect("<w2,l>", glue(wheel(2), strut()), T("Theta") * 2)
    r.expect("<w2,w2>", glue(wheel(2), wheel(2)), T("Theta2") * 2)
    r.expect("<w4,l^2>", glue(wheel(4), strut() ** 2), T("Theta2") * 20)
    r.expect("<w2^2,l^2>", glue(wheel(2) * wheel(2), strut() ** 2), T("Theta", "Theta") * 8 + T("Theta2") * 16)
    for n in (1, 2):
        r.expect(f"wheeling n={n}", wheeling_expansion(n), expected_wheeling(n))


def check_graphs_extended(r, data_dir=None):
    from .graphpair import expected_wheeling, sawon_identities, wheeling_expansion

    for n in (3, 4):
        r.expect(f"wheeling n={n}", wheeling_expansion(n), expected_wheeling(n))
    for key, (lhs, rhs, _res) in sawon_identities().items():
        r.expect(f"<{key},l^4>/384", lhs, rhs)


def check_properties(r, data_dir=None):
    """Deterministic samples of the structural properties."""
    from .graphpair import glue, strut, wheel

    fails = []
    for n in range(2, 9):
        for make in (rr_k3n, rr_kumn):
            p = make(n)
            t = degree4_from_rr(p)
            head = tuple(
                evaluate(todd_component(i), t) / math.factorial(2 * n - 2 * i) for i in range(3)
            )
            if head != p.coeffs[:3]:
                fails.append(f"round trip {make.__name__}({n})")
            for m in (2, 3, 5):
                if b2_bound_from_rr(rr_scale(p, m)) != b2_bound_from_rr(p):
                    fails.append(f"scale {make.__name__}({n}) m={m}")
    lams = [Fraction(2), Fraction(3), Fraction(7)]
    for t in (Fraction(1, 3), Fraction(5), Fraction(11, 2)):
        if dispersion_bound([x * t for x in lams], 3) != dispersion_bound(lams, 3):
            fails.append(f"dispersion homogeneity t={t}")
    for k in range(0, 6):
        sq = todd_component(0) * 0
        for i in range(k + 1):
            sq = sq + sqrt_todd_component(i) * sqrt_todd_component(k - i)
        if sq.terms != todd_component(k).terms:
            fails.append(f"td = (td^1/2)^2 at weight {2 * k}")
    count = 0
    for m in range(2, 21):
        for w in symplectic_weight_sets(m):
            if any(math.gcd(x, m) != 1 for x in w):
                continue
            total = CycloElem.const(m, 0)
            for j in range(1, m):
                total = total + cyclo_det_inverse(m, w, j)
            count += 1
            if not total.is_rational():
                fails.append(f"galois sum m={m} weights {w}")
    r.record("admissible weight pairs tested", count)
    for d1, d2 in ((wheel(2), strut()), (wheel(4), wheel(2) * wheel(2)), (wheel(2) * wheel(2), strut() ** 2)):
        if glue(d1, d2) != glue(d2, d1):
            fails.append("glue symmetry")
    r.expect("property failures", fails, [])


CHECKS = [
    ("degree4-tables", "degree-4 tables from Riemann-Roch", check_degree4),
    ("b2-bounds", "b2 bounds of the known series and the Nikulin orbifold", check_bounds),
    ("hitchin-sawon", "Hitchin-Sawon relation on all tables", check_hitchin_sawon),
    ("sqrt-todd", "square-root Todd constants, power formula vs genus expansion", check_sqrt_todd),
    ("orbifold-examples", "orbifold pipeline on the shipped profiles", check_orbifold),
    ("appendix-k4", "K4' fixed points, singularity counts and invariants", check_appendix_k4),
    ("q-structure", "OG6/OG10 tables from q-powers, Todd genus n+1", check_q_structure),
    ("og10-solve", "OG10 sequential solve", check_og10_solve),
    ("conjectures", "conjecture evaluators and enumerations", check_conjectures),
    ("graphs-basic", "basic gluing identities, wheeling n=1,2", check_graphs_basic),
    ("graphs-extended", "wheeling n=3,4 and the two 8-vertex identities", check_graphs_extended),
    ("properties", "structural property samples", check_properties),
]

CHECK_IDS = [c[0] for c in CHECKS]


def run_check(check_id: str, data_dir=None) -> CheckResult:
    for cid, title, fn in CHECKS:
        if cid == check_id:
            break
    else:
        raise KeyError(check_id)
    rec = _Recorder()
    t0 = time.perf_counter()
    try:
        fn(rec, data_dir)
    except (HKError, ValueError, KeyError, ZeroDivisionError, OSError, AssertionError) as exc:
        rec.failures.append(f"{type(exc).__name__}: {exc}")
    dt = time.perf_counter() - t0
    return CheckResult(cid, title, not rec.failures, rec.values, rec.failures, dt)


def reproduce(only=None, data_dir=None) -> list[CheckResult]:
    ids = CHECK_IDS if not only else list(only)
    for i in ids:
        if i not in CHECK_IDS:
            raise KeyError(i)
    return [run_check(i, data_dir) for i in ids]
