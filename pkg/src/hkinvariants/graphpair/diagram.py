"""Unitrivalent diagrams and canonical forms of closed trivalent graphs.

A diagram is stored through half-edges ("darts").  Each trivalent vertex is a
triple of darts in cyclic order; ``partner`` pairs darts into edges.  Legs
are darts that belong to no vertex: a leg is the free end of the edge whose
other end is ``partner[leg]``.  A strut is the edge with two legs.

Closed trivalent graphs are brought to a canonical code: vertex i gets the
darts 3i, 3i+1, 3i+2 in cyclic order and the code lists partner labels.
Antisymmetry (reversing the cyclic order at a vertex flips the sign) is
tracked by the sign returned with the code; a graph isomorphic to minus
itself has no code and is zero.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Diagram:
    vd: tuple          # tuple of (d0, d1, d2) cyclically ordered vertex darts
    legs: tuple        # ordered leg darts
    partner: tuple     # sorted (dart, dart) pairs, both directions

    @classmethod
    def make(cls, vd, legs, partner: dict) -> "Diagram":
        darts = {d for t in vd for d in t} | set(legs)
        if set(partner) != darts:
            raise ValueError("partner map must cover exactly the vertex darts and legs")
        for a, b in partner.items():
            if partner[b] != a or a == b:
                raise ValueError("partner map must be a fixed-point free involution")
        if len(set(legs)) != len(legs):
            raise ValueError("legs must be distinct")
        if any(len(t) != 3 for t in vd):
            raise ValueError("every vertex must be trivalent")
        return cls(tuple(tuple(t) for t in vd), tuple(legs), tuple(sorted(partner.items())))

    @property
    def pmap(self) -> dict:
        return dict(self.partner)

    @property
    def size(self) -> int:
        return len(self.partner)

    @property
    def n_vertices(self) -> int:
        return len(self.vd)

    def shift(self, k: int) -> "Diagram":
        return Diagram(
            tuple(tuple(x + k for x in t) for t in self.vd),
            tuple(x + k for x in self.legs),
            tuple((a + k, b + k) for a, b in self.partner),
        )

    def __mul__(self, other: "Diagram") -> "Diagram":
        """Disjoint union; legs of ``self`` come first."""
        o = other.shift(self.size)
        return Diagram(self.vd + o.vd, self.legs + o.legs, tuple(sorted(self.partner + o.partner)))

    def __pow__(self, k: int) -> "Diagram":
        out = empty()
        for _ in range(k):
            out = out * self
        return out

    def is_strut_power(self) -> bool:
        return not self.vd


def empty() -> Diagram:
    return Diagram((), (), ())


def strut() -> Diagram:
    return Diagram.make([], [0, 1], {0: 1, 1: 0})


def wheel(m: int) -> Diagram:
    """The wheel with m spokes.

    Rim vertex i has darts (3i: towards i-1, 3i+1: towards i+1, 3i+2: spoke);
    spoke i ends in the leg dart 3m + i.  For m = 1 the rim is a loop.
    """
    if m < 1:
        raise ValueError("a wheel needs at least one spoke")
    vd = [(3 * i, 3 * i + 1, 3 * i + 2) for i in range(m)]
    p = {}
    for i in range(m):
        j = (i + 1) % m
        p[3 * i + 1] = 3 * j
        p[3 * j] = 3 * i + 1
        p[3 * i + 2] = 3 * m + i
        p[3 * m + i] = 3 * i + 2
    return Diagram.make(vd, [3 * m + i for i in range(m)], p)


class ClosedLoop(ValueError):
    """Gluing produced a circle without vertices."""


def close(d1: Diagram, d2: Diagram, sigma) -> tuple[list, dict]:
    """Glue leg i of d1 to leg sigma[i] of d2; return the closed graph (vd, partner).

    Chains of struts are followed until they reach a vertex dart.
    """
    o = d2.shift(d1.size)
    p = d1.pmap
    p.update(o.pmap)
    mate = {}
    for i, j in enumerate(sigma):
        x, y = d1.legs[i], o.legs[j]
        mate[x] = y
        mate[y] = x
    vd = list(d1.vd + o.vd)
    tri = {d for t in vd for d in t}
    newp = {}
    seen = set()
    for s in tri:
        if s in newp:
            continue
        cur = p[s]
        while cur not in tri:
            seen.add(cur)
            nxt = mate[cur]
            seen.add(nxt)
            cur = p[nxt]
        newp[s] = cur
        newp[cur] = s
    if len(seen) != len(mate):
        raise ClosedLoop("gluing produced a closed loop without vertices")
    return vd, newp


def close_by_matching(d: Diagram, matching) -> tuple[list, dict]:
    """Join the legs of ``d`` in pairs (indices into d.legs)."""
    k = len(matching)
    sigma = [None] * (2 * k)
    for idx, (a, b) in enumerate(matching):
        sigma[a] = 2 * idx
        sigma[b] = 2 * idx + 1
    return close(d, strut() ** k, sigma)


# ---------------------------------------------------------------------------
# Canonical forms


def _canon_connected(vd, partner):
    """Minimal code over all labelings by breadth-first search, with its sign.

    Returns None when two labelings with opposite signs give the same minimal
    code, i.e. the graph equals minus itself.
    """
    owner = {d: i for i, t in enumerate(vd) for d in t}
    best = None
    signs = set()
    stack = []
    for t in vd:
        for i in range(3):
            d0, a, b = t[i], t[(i + 1) % 3], t[(i + 2) % 3]
            stack.append(({d0: 0, a: 1, b: 2}, [d0, a, b], [], 1))
            stack.append(({d0: 0, b: 1, a: 2}, [d0, b, a], [], -1))
    n = 3 * len(vd)
    while stack:
        labels, order, code, sign = stack.pop()
        less = False
        if best is not None and code:
            for x, y in zip(code, best):
                if x != y:
                    less = x < y
                    break
            if not less and code != best[: len(code)]:
                continue
        pos = len(code)
        pruned = False
        while pos < n:
            q = partner[order[pos]]
            val = labels.get(q)
            if val is None:
                t = vd[owner[q]]
                i = t.index(q)
                a, b = t[(i + 1) % 3], t[(i + 2) % 3]
                base = len(order)
                alt = dict(labels)
                alt[q], alt[b], alt[a] = base, base + 1, base + 2
                stack.append((alt, order + [q, b, a], list(code), -sign))
                labels[q], labels[a], labels[b] = base, base + 1, base + 2
                order = order + [q, a, b]
                val = base
            if not less and best is not None:
                if val > best[pos]:
                    pruned = True
                    break
                if val < best[pos]:
                    less = True
            code.append(val)
            pos += 1
        if pruned:
            continue
        if best is None or less:
            best = code
            signs = {sign}
        else:
            signs.add(sign)
    if len(signs) == 2:
        return None
    return tuple(best), signs.pop()


def components(vd, partner) -> list[list[int]]:
    owner = {d: i for i, t in enumerate(vd) for d in t}
    seen = set()
    comps = []
    for s in range(len(vd)):
        if s in seen:
            continue
        comp = []
        todo = [s]
        seen.add(s)
        while todo:
            x = todo.pop()
            comp.append(x)
            for d in vd[x]:
                y = owner[partner[d]]
                if y not in seen:
                    seen.add(y)
                    todo.append(y)
        comps.append(sorted(comp))
    return comps


def canonical(vd, partner):
    """(sorted tuple of connected codes, sign), or None for a zero graph."""
    sign = 1
    codes = []
    for comp in components(vd, partner):
        r = _canon_connected([vd[i] for i in comp], partner)
        if r is None:
            return None
        codes.append(r[0])
        sign *= r[1]
    return tuple(sorted(codes)), sign


def from_code(code) -> tuple[list, dict]:
    vd = [(3 * i, 3 * i + 1, 3 * i + 2) for i in range(len(code) // 3)]
    return vd, {d: code[d] for d in range(len(code))}


def ihx_relations(code):
    """IHX relations around each edge of a connected code.

    For an edge joining dart d at u to dart e at v, with u = (a, b, d) and
    v = (e, c, f) in cyclic order, the three graphs

        u = (a, b, d), v = (e, c, f)
        u = (b, c, d), v = (e, a, f)
        u = (c, a, d), v = (e, b, f)

    (same edges otherwise) sum to zero.  Yields lists of three canonical
    results (None for zero graphs).
    """
    vd, partner = from_code(code)
    for d in range(len(code)):
        e = partner[d]
        u, v = d // 3, e // 3
        if d > e or u == v:
            continue
        tu = vd[u]
        i = tu.index(d)
        a, b = tu[(i + 1) % 3], tu[(i + 2) % 3]
        tv = vd[v]
        j = tv.index(e)
        c, f = tv[(j + 1) % 3], tv[(j + 2) % 3]
        terms = []
        for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
            nvd = list(vd)
            nvd[u] = (x, y, d)
            nvd[v] = (e, z, f)
            terms.append(canonical(nvd, partner))
        yield terms


def simple_graph_edges(code) -> list[tuple[int, int]]:
    """Edge list (with multiplicity) of the underlying graph of a code."""
    return [(d // 3, code[d] // 3) for d in range(len(code)) if d < code[d]]
