"""Known deformation types, their Fujiki constant tables, and checks on them.

The shipped tables (K3[2], Kum2, OG6, OG10) live in ``data/manifolds``.  For
the infinite series ``k3n(N)`` and ``kumn(N)`` only the weight <= 4 part is
available, derived from the Riemann-Roch polynomial.

When every Chern class lies in the subalgebra generated by H^2 we record
c_{2k} = mu_k q^k, and every Chern number follows from the q-power formula.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path

import jsonschema

from .errors import FixtureError, InvalidInput, SolveFailure, UnknownEntry
from .exactcore import ChernMonomial, Poly, Q, chern_monomials, partitions, sqrt_rational
from .genus import chern_character, evaluate, sqrt_todd_component
from .rrfujiki import (
    C2,
    C2SQ,
    C4,
    ONE,
    FujikiTable,
    RRPoly,
    b2_bound_from_table,
    ch4_constant,
    degree4_from_rr,
    fujiki_q_power,
    rr_k3n,
    rr_kumn,
    sqrt_todd_constant,
)

SERIES = {"k3n": (rr_k3n, 23), "kumn": (rr_kumn, 7)}

ENTRY_SCHEMA = {
    "type": "object",
    "required": ["name", "half_dim_n", "b2", "table"],
    "properties": {
        "name": {"type": "string"},
        "half_dim_n": {"type": "integer", "minimum": 1},
        "b2": {"type": "integer", "minimum": 1},
        "table": {
            "type": "object",
            "additionalProperties": {
                "type": "object",
                "required": ["value"],
                "properties": {
                    "value": {"type": "string", "pattern": r"^-?[0-9]+(/[0-9]+)?$"},
                    "provenance": {"type": "string"},
                },
                "additionalProperties": False,
            },
        },
        "chern_q_coeffs": {
            "type": "object",
            "patternProperties": {r"^[0-9]+$": {"type": "string"}},
            "additionalProperties": False,
        },
        "rr_series": {"enum": ["k3n", "kumn"]},
        "notes": {"type": "string"},
    },
    "additionalProperties": False,
}


@dataclass
class ManifoldEntry:
    name: str
    n: int
    b2: int
    table: FujikiTable
    chern_q_coeffs: dict | None = None
    provenance: dict = field(default_factory=dict)
    rr: RRPoly | None = None


def shipped_names() -> list[str]:
    return ["k3_2", "kum_2", "og6", "og10"]


def _read_fixture(name: str, data_dir=None) -> dict:
    try:
        if data_dir is not None:
            text = (Path(data_dir) / "manifolds" / f"{name}.json").read_text(encoding="utf-8")
        else:
            text = (resources.files("hkinvariants") / "data" / "manifolds" / f"{name}.json").read_text(
                encoding="utf-8"
            )
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise FixtureError(f"cannot read fixture {name!r}: {exc}") from None


@lru_cache(maxsize=None)
def _validator():
    return jsonschema.Draft202012Validator(ENTRY_SCHEMA)


def entry_from_dict(data: dict) -> ManifoldEntry:
    try:
        _validator().validate(data)
    except jsonschema.ValidationError as exc:
        raise FixtureError(f"fixture {data.get('name', '?')!r}: {exc.message}") from None
    n, b2 = data["half_dim_n"], data["b2"]
    table = FujikiTable(n, {k: v["value"] for k, v in data["table"].items()}, b2)
    mu = None
    if "chern_q_coeffs" in data:
        mu = {int(k): Q(v) for k, v in data["chern_q_coeffs"].items()}
    rr = None
    if "rr_series" in data:
        rr = SERIES[data["rr_series"]][0](n)
    prov = {str(ChernMonomial.parse(k)): v.get("provenance", "") for k, v in data["table"].items()}
    return ManifoldEntry(data["name"], n, b2, table, mu, prov, rr)


def load_entry(name: str, data_dir=None) -> ManifoldEntry:
    """Load a shipped fixture or build ``k3n(N)`` / ``kumn(N)`` from its RR polynomial."""
    if name in shipped_names():
        return entry_from_dict(_read_fixture(name, data_dir))
    m = re.fullmatch(r"(k3n|kumn)\((\d+)\)", name.strip())
    if m:
        kind, n = m.group(1), int(m.group(2))
        if n < 2:
            raise InvalidInput(f"{kind} needs n >= 2")
        make, b2 = SERIES[kind]
        rr = make(n)
        table = degree4_from_rr(rr, b2)
        prov = {str(k): "degree-4 inversion of the Riemann-Roch polynomial" for k in table.entries}
        return ManifoldEntry(name, n, b2, table, None, prov, rr)
    raise UnknownEntry(f"unknown entry {name!r}; known: {', '.join(shipped_names())}, k3n(N), kumn(N)")


# ---------------------------------------------------------------------------
# q-power structure


def q_structure_value(mon: ChernMonomial, n: int, b2: int, C1, mu: dict) -> Fraction:
    """(prod mu_k^e_k) C(q^w) for c_lambda = prod c_{2k}^e_k of weight 2w."""
    coeff = Fraction(1)
    for idx, e in mon.exps:
        k = idx // 2
        if k not in mu:
            raise InvalidInput(f"no coefficient mu_{k} for c{idx}")
        coeff *= Q(mu[k]) ** e
    return coeff * fujiki_q_power(mon.weight // 2, n, b2, C1)


def verify_q_structure(entry: ManifoldEntry) -> list[tuple[str, Fraction]]:
    """Residual C(c_lambda) - (prod mu) C(q^k) for every monomial of the table."""
    if not entry.chern_q_coeffs:
        raise InvalidInput(f"{entry.name} carries no q-coefficients")
    t = entry.table
    out = []
    for mon, val in t.items():
        out.append((str(mon), val - q_structure_value(mon, t.n, entry.b2, t.C1, entry.chern_q_coeffs)))
    return out


def table_from_mu(n: int, b2: int, C1, mu: dict) -> FujikiTable:
    """Full table to weight 2n from the q-coefficients."""
    entries = {}
    for w in range(0, 2 * n + 1, 2):
        for mon in chern_monomials(w):
            entries[mon] = q_structure_value(mon, n, b2, C1, mu)
    return FujikiTable(n, entries, b2)


def sequential_solve(rr: RRPoly, b2: int) -> dict:
    """Solve c_{2k} = mu_k q^k for k = 1..n.

    mu_1, mu_2 come from the degree-4 constants.  For k >= 3 the constant of
    td^(1/2)_{2k} is fixed by the n-th power factorization; every monomial in
    it except c_{2k} is known from earlier mu's, leaving one linear unknown.
    """
    n = rr.n
    t4 = degree4_from_rr(rr, b2)
    C1 = t4.C1
    mu = {
        1: t4.value(C2) / fujiki_q_power(1, n, b2, C1),
        2: t4.value(C4) / fujiki_q_power(2, n, b2, C1),
    }
    Cc2 = t4.value(C2)
    for k in range(3, n + 1):
        cp = sqrt_todd_component(k)
        top = ChernMonomial(((2 * k, 1),))
        a = cp.coefficient(top)
        if a == 0:
            raise SolveFailure(f"c{2 * k} does not occur in td^(1/2)_{2 * k}")
        known = sum(
            c * q_structure_value(mon, n, b2, C1, mu) for mon, c in cp.terms.items() if mon != top
        )
        target = sqrt_todd_constant(n, k, C1, Cc2)
        mu[k] = (target - known) / (a * fujiki_q_power(k, n, b2, C1))
    return mu


def og10_sequential_solve(rr: RRPoly | None = None, b2: int = 24) -> dict:
    return sequential_solve(rr_k3n(5) if rr is None else rr, b2)


# ---------------------------------------------------------------------------
# Conjectural relations


def conj_ch4_value(n: int) -> Fraction:
    """Conjectured C(ch_4)/C(1) = 5(n+1)/((2n-1)(2n-3))."""
    if n < 2:
        raise InvalidInput("needs n >= 2")
    return Fraction(5 * (n + 1), (2 * n - 1) * (2 * n - 3))


def conj_ch8_value(n: int) -> Fraction:
    if n < 4:
        raise InvalidInput("needs n >= 4")
    return Fraction((5 * n + 7) * (2 * n - 1) * (2 * n - 3), 5 * (n + 1) * (2 * n - 5) * (2 * n - 7))


def conj_ch8_report(entry: ManifoldEntry) -> dict:
    """C(ch4^2 + 120 ch8) C(1) / C(ch4)^2 against its conjectured value."""
    t = entry.table
    if t.n < 4:
        raise InvalidInput("needs 2n >= 8")
    ch4 = chern_character(2)
    num = evaluate(ch4 * ch4 + chern_character(4) * 120, t)
    den = evaluate(ch4, t)
    ratio = num * t.C1 / (den * den)
    conj = conj_ch8_value(t.n)
    return {"ratio": ratio, "conjectured": conj, "match": ratio == conj}


def rr_arith(n: int, a, C1) -> RRPoly:
    """C1/(2n)! (q + a)(q + a + 2)...(q + a + 2n - 2)."""
    if n < 2:
        raise InvalidInput("rr_arith expects n >= 2")
    a = Q(a)
    p = Poly.from_roots([-(a + 2 * j) for j in range(n)], Q(C1) / math.factorial(2 * n))
    return RRPoly.from_poly(p, n, smooth=False)


def enumerate_fourfold_tables() -> list[FujikiTable]:
    """Degree-4 tables with C(1) in (1/3)Z, -120 <= C(c4) <= 324 and C(c2) rational.

    Along the family C(c2^2) = 864 - 12 C(1), C(c4) = 432 - 36 C(1) and
    C(c2) = 2 sqrt(C(1)^2 + 72 C(1)).
    """
    rows = []
    lo, hi = Fraction(432 - 324, 36), Fraction(432 + 120, 36)
    k = math.ceil(lo * 3)
    while Fraction(k, 3) <= hi:
        c1 = Fraction(k, 3)
        k += 1
        root = sqrt_rational(c1 * c1 + 72 * c1)
        if root is None:
            continue
        rows.append(FujikiTable(2, {ONE: c1, C2: 2 * root, C2SQ: 864 - 12 * c1, C4: 432 - 36 * c1}))
    return rows


def enumerate_betti(tables: list[FujikiTable] | None = None) -> list[tuple[int, int, int]]:
    """(b2, b3, b4) compatible with each table.

    C(c4) = chi = 48 + 12 b2 - 3 b3 (Salamon), b3 a multiple of 4, b2 >= 3 and
    b2 at most the bound from the table's RR coefficients.
    """
    tables = enumerate_fourfold_tables() if tables is None else tables
    out = []
    for t in tables:
        c4 = t.value(C4)
        rep = b2_bound_from_table(t)
        if not rep.condition_holds:
            continue
        bmax = math.floor(rep.bound)
        rhs = (c4 - 48) / 3  # 4 b2 - b3
        for b2 in range(3, bmax + 1):
            b3 = 4 * b2 - rhs
            if b3 < 0 or b3.denominator != 1 or b3 % 4:
                continue
            b3 = int(b3)
            b4 = c4 - 2 - 2 * b2 + 2 * b3
            out.append((b2, b3, int(b4)))
    return out


def ch_monomials(max_k: int):
    """Tuples (k_1 >= ... >= k_r) indexing ch_{2k_1}...ch_{2k_r} with sum k_i <= max_k."""
    for k in range(1, max_k + 1):
        yield from partitions(k)


def conj_positivity_sc(table: FujikiTable) -> list[tuple[str, Fraction]]:
    """Sign violations of (-1)^k C(ch_{2k_1}...ch_{2k_r}) > 0 and C(c_lambda) > 0."""
    n = table.n
    table.require(2 * n)
    bad = []
    for lam in ch_monomials(n):
        cp = chern_character(lam[0])
        for part in lam[1:]:
            cp = cp * chern_character(part)
        v = evaluate(cp, table)
        if (-1) ** sum(lam) * v <= 0:
            bad.append(("ch" + ".ch".join(str(2 * p) for p in lam), v))
    for w in range(2, 2 * n + 1, 2):
        for mon in chern_monomials(w):
            v = table.value(mon)
            if v <= 0:
                bad.append((str(mon), v))
    return bad


def ch4_ratio(table: FujikiTable) -> Fraction:
    return ch4_constant(table) / table.C1
