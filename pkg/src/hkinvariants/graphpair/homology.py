"""Closed trivalent graphs modulo AS and IHX, up to 8 vertices.

Every connected graph is reduced to a fixed basis:

    2 vertices  Theta
    4 vertices  Theta2
    6 vertices  Theta3
    8 vertices  Theta4, Xi

Theta_k is the 2k-wheel with adjacent spokes joined in pairs, Xi the
8-wheel with spokes joined as (0,3), (1,6), (2,5), (4,7) (the cube graph).
The reduction of every other graph is obtained by exact linear algebra on
all IHX relations among graphs of that size, so no coefficient is fitted.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from ..errors import UnreducibleGraph
from .diagram import canonical, close_by_matching, ihx_relations, wheel

BASIS_ORDER = ("Theta", "Theta2", "Theta3", "Theta4", "Xi")
PRETTY = {"Theta": "Θ", "Theta2": "Θ₂", "Theta3": "Θ₃", "Theta4": "Θ₄", "Xi": "Ξ"}
XI_CHORDS = ((0, 3), (1, 6), (2, 5), (4, 7))


class GraphVector:
    """Rational combination of products of basis graphs.

    Keys are sorted tuples of basis ids; the empty tuple is the empty graph.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for k, v in dict(terms or {}).items():
            key = tuple(sorted(k, key=BASIS_ORDER.index))
            clean[key] = clean.get(key, 0) + Fraction(v)
        self.terms = {k: v for k, v in clean.items() if v}

    @classmethod
    def basis(cls, *ids) -> "GraphVector":
        return cls({tuple(ids): 1})

    @classmethod
    def one(cls) -> "GraphVector":
        return cls({(): 1})

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return GraphVector(out)

    def __neg__(self):
        return GraphVector({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return GraphVector({k: v * other for k, v in self.terms.items()})
        out = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = tuple(sorted(k1 + k2, key=BASIS_ORDER.index))
                out[k] = out.get(k, 0) + v1 * v2
        return GraphVector(out)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self * (1 / Fraction(c))

    def __pow__(self, k: int):
        out = GraphVector.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        return isinstance(other, GraphVector) and self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    def coefficient(self, *ids) -> Fraction:
        return self.terms.get(tuple(sorted(ids, key=BASIS_ORDER.index)), Fraction(0))

    def homogeneous(self, vertices: int) -> "GraphVector":
        return GraphVector({k: v for k, v in self.terms.items() if vertex_count(k) == vertices})

    def items(self):
        return sorted(self.terms.items(), key=lambda kv: (vertex_count(kv[0]), [BASIS_ORDER.index(x) for x in kv[0]]))

    @staticmethod
    def monomial_name(key, pretty=False) -> str:
        if not key:
            return "1"
        names = PRETTY if pretty else {b: b for b in BASIS_ORDER}
        parts = []
        for b in BASIS_ORDER:
            e = key.count(b)
            if e:
                parts.append(names[b] if e == 1 else f"{names[b]}^{e}")
        return "*".join(parts)

    def as_strings(self) -> dict:
        from ..exactcore import format_rational

        return {self.monomial_name(k): format_rational(v) for k, v in self.items()}

    def __str__(self):
        from ..exactcore import format_rational

        if not self.terms:
            return "0"
        return " + ".join(f"({format_rational(v)})*{self.monomial_name(k)}" for k, v in self.items())

    __repr__ = __str__


def vertex_count(key) -> int:
    sizes = {"Theta": 2, "Theta2": 4, "Theta3": 6, "Theta4": 8, "Xi": 8}
    return sum(sizes[b] for b in key)


def theta_graph(k: int):
    """Canonical (code, sign) of Theta_k: 2k-wheel, spokes 2i and 2i+1 joined."""
    return _single(close_by_matching(wheel(2 * k), [(2 * i, 2 * i + 1) for i in range(k)]))


def xi_graph():
    return _single(close_by_matching(wheel(8), XI_CHORDS))


def _single(closed):
    r = canonical(*closed)
    if r is None or len(r[0]) != 1:
        raise AssertionError("basis graph must be connected and nonzero")
    return r[0][0], r[1]


@lru_cache(maxsize=None)
def basis_graphs(vertices: int) -> dict:
    """Canonical codes of the basis graphs with this many vertices -> (id, sign).

    The sign s means: the oriented basis graph equals s times the canonical code.
    """
    out = {}
    if vertices in (2, 4, 6, 8):
        k = vertices // 2
        code, s = theta_graph(k)
        out[code] = ("Theta" if k == 1 else f"Theta{k}", s)
    if vertices == 8:
        code, s = xi_graph()
        out[code] = ("Xi", s)
    return out


def ihx_closure(seeds):
    """All connected codes reachable from ``seeds`` through IHX relations, with the relations."""
    classes = set(seeds)
    todo = list(seeds)
    rels = []
    while todo:
        c = todo.pop()
        for terms in ihx_relations(c):
            rel = {}
            for t in terms:
                if t is None:
                    continue
                (codes, s) = t
                k = codes[0]
                rel[k] = rel.get(k, 0) + s
                if k not in classes:
                    classes.add(k)
                    todo.append(k)
            rel = {k: v for k, v in rel.items() if v}
            if rel:
                rels.append(rel)
    return classes, rels


def _quotient(classes, rels, preferred):
    """Row-reduce the relations with the preferred codes as last columns.

    Returns (free codes, map code -> {free code: coefficient}).
    """
    cols = sorted(c for c in classes if c not in preferred) + list(preferred)
    idx = {c: i for i, c in enumerate(cols)}
    rows = []
    for rel in rels:
        row = {idx[k]: Fraction(v) for k, v in rel.items()}
        rows.append(row)
    pivots = {}  # column -> reduced row (dict)
    for row in rows:
        # pivot rows only involve their pivot and non-pivot columns, so one
        # pass removes every pivot column from the new row
        for col in [c for c in row if c in pivots]:
            f = row.get(col)
            if not f:
                continue
            for c2, v2 in pivots[col].items():
                row[c2] = row.get(c2, 0) - f * v2
        row = {c: v for c, v in row.items() if v}
        if not row:
            continue
        lead = min(row)
        inv = 1 / row[lead]
        row = {c: v * inv for c, v in row.items()}
        # back-substitute into earlier pivot rows
        for pc, prow in pivots.items():
            if prow.get(lead):
                f = prow[lead]
                for c2, v2 in row.items():
                    prow[c2] = prow.get(c2, 0) - f * v2
                pivots[pc] = {c: v for c, v in prow.items() if v}
        pivots[lead] = row
    free = [cols[j] for j in range(len(cols)) if j not in pivots]
    red = {}
    for pc, prow in pivots.items():
        red[cols[pc]] = {cols[j]: -v for j, v in prow.items() if j != pc}
    for f in free:
        red[f] = {f: Fraction(1)}
    return free, red


@lru_cache(maxsize=None)
def reduction_table(vertices: int) -> dict:
    """Map canonical connected code -> GraphVector in the basis, for one size.

    Raises AssertionError if the basis graphs are dependent or do not span.
    """
    basis = basis_graphs(vertices)
    if not basis:
        raise UnreducibleGraph(f"no basis for connected graphs with {vertices} vertices")
    classes, rels = ihx_closure(list(basis))
    free, red = _quotient(classes, rels, list(basis))
    if set(free) != set(basis):
        raise AssertionError(
            f"basis at {vertices} vertices is inconsistent: quotient has dimension {len(free)}"
        )
    table = {}
    for code, combo in red.items():
        vec = {}
        for fcode, c in combo.items():
            bid, s = basis[fcode]
            # oriented basis graph = s * [fcode]  =>  [fcode] = s * basis graph
            vec[(bid,)] = vec.get((bid,), 0) + c * s
        table[code] = GraphVector(vec)
    return table


def reduce_connected(code) -> GraphVector:
    v = len(code) // 3
    if v not in (2, 4, 6, 8):
        raise UnreducibleGraph(f"connected graph with {v} vertices is beyond the reduction table")
    table = reduction_table(v)
    if code not in table:
        raise UnreducibleGraph(f"graph {code} not reached by the reduction table")
    return table[code]


def reduce_closed(canon) -> GraphVector:
    """GraphVector of a canonical closed graph (codes, sign); None is zero."""
    if canon is None:
        return GraphVector()
    codes, sign = canon
    out = GraphVector.one() * sign
    for code in codes:
        out = out * reduce_connected(code)
    return out


def table_size(vertices: int) -> int:
    return len(reduction_table(vertices))
