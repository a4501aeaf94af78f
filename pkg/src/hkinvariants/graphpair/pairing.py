"""Gluing pairing, wheeling expansions and Rozansky-Witten bookkeeping."""

from __future__ import annotations

import math
from collections import Counter
from fractions import Fraction
from itertools import permutations

from ..errors import InvalidInput, UnknownGamma, Unsupported, UnreducibleGraph
from ..exactcore import Poly, Q, Surd, partitions
from ..genus import modified_bernoulli
from ..rrfujiki import C2, C2SQ, C4, RRPoly
from .diagram import ClosedLoop, Diagram, canonical, close, close_by_matching, strut, wheel
from .homology import GraphVector, reduce_closed


def perfect_matchings(items):
    items = list(items)
    if not items:
        yield []
        return
    a = items[0]
    for i in range(1, len(items)):
        rest = items[1:i] + items[i + 1:]
        for m in perfect_matchings(rest):
            yield [(a, items[i])] + m


def _reduce(closed) -> GraphVector:
    return reduce_closed(canonical(*closed))


def glue(d1: Diagram, d2: Diagram) -> GraphVector:
    """Sum over all bijections between the legs of d1 and d2 of the glued graph.

    Diagrams with different numbers of legs pair to zero.  When one side is
    a power of the strut, every perfect matching of the other side's legs
    arises from k! 2^k bijections, so only matchings are enumerated.
    """
    k = len(d1.legs)
    if k != len(d2.legs):
        return GraphVector()
    if d1.is_strut_power() and d2.is_strut_power():
        if k == 0:
            return GraphVector.one()
        raise UnreducibleGraph("pairing two strut powers produces closed loops")
    try:
        if d2.is_strut_power() or d1.is_strut_power():
            d = d1 if d2.is_strut_power() else d2
            mult = math.factorial(k // 2) * 2 ** (k // 2)
            total = GraphVector()
            for m in perfect_matchings(range(k)):
                total = total + _reduce(close_by_matching(d, m))
            return total * mult
        return glue_bruteforce(d1, d2)
    except ClosedLoop as exc:
        raise UnreducibleGraph(str(exc)) from None


def glue_bruteforce(d1: Diagram, d2: Diagram) -> GraphVector:
    """Literal sum over all k! bijections (no matching shortcut)."""
    k = len(d1.legs)
    if k != len(d2.legs):
        return GraphVector()
    counts = Counter()
    zero = 0
    for sigma in permutations(range(k)):
        c = canonical(*close(d1, d2, sigma))
        if c is None:
            zero += 1
            continue
        counts[c[0]] += c[1]
    total = GraphVector()
    for codes, mult in counts.items():
        if mult:
            total = total + reduce_closed((codes, 1)) * mult
    return total


def pair(x, y) -> GraphVector:
    """Bilinear extension of ``glue`` to lists of (coefficient, Diagram)."""
    if isinstance(x, Diagram):
        x = [(1, x)]
    if isinstance(y, Diagram):
        y = [(1, y)]
    total = GraphVector()
    for a, d1 in x:
        for b, d2 in y:
            if a and b:
                total = total + glue(d1, d2) * (Q(a) * Q(b))
    return total


def omega_leg_part(k: int, power: int = 1) -> list:
    """Part of Omega^power = exp(power * sum_j b_{2j} w_{2j}) with 2k legs."""
    out = []
    for lam in partitions(k):
        coeff = Fraction(1)
        d = None
        for j, m in sorted(Counter(lam).items()):
            coeff *= (power * modified_bernoulli(j)) ** m / math.factorial(m)
            for _ in range(m):
                d = wheel(2 * j) if d is None else d * wheel(2 * j)
        out.append((coeff, d))
    if k == 0:
        out = [(Fraction(1), Diagram((), (), ()))]
    return out


def wheeling_term(k: int, power: int = 2) -> GraphVector:
    """<(Omega^power)_{2k legs}, l^k>."""
    return pair(omega_leg_part(k, power), strut() ** k)


def wheeling_expansion(n: int, power: int = 2) -> GraphVector:
    """<Omega^power, (1 + l)^n>, computed for n <= 4."""
    if not 1 <= n <= 4:
        raise Unsupported("wheeling expansions are available for 1 <= n <= 4")
    total = GraphVector()
    for k in range(n + 1):
        total = total + wheeling_term(k, power) * math.comb(n, k)
    return total


def _T(*ids):
    return GraphVector.basis(*ids)


def expected_wheeling(n: int) -> GraphVector:
    """Closed forms of <Omega^2, (1 + l)^n> for n <= 4."""
    th, th2 = _T("Theta"), _T("Theta2")
    terms = [
        GraphVector.one(),
        th / 12,
        (th * th + th2) / 144,
        (th ** 3 + th * th2 * 3) / 12**3,
        (th ** 4 + th * th * th2 * 6 + th2 * th2 * 3 + _T("Xi") * Fraction(144, 25)
         - _T("Theta4") * Fraction(162, 25)) / 12**4,
    ]
    if not 1 <= n <= 4:
        raise Unsupported("closed forms are recorded for 1 <= n <= 4")
    total = GraphVector()
    for k in range(n + 1):
        total = total + terms[k] * math.comb(n, k)
    return total


def sawon_identities() -> dict:
    """Both sides of (1/384)<w4^2, l^4> and (1/384)<w8, l^4>, and residuals."""
    lhs1 = glue(wheel(4) * wheel(4), strut() ** 4) / 384
    lhs2 = glue(wheel(8), strut() ** 4) / 384
    rhs1 = _T("Xi") * 24 + _T("Theta4") * 48 + _T("Theta2", "Theta2") * Fraction(25, 4)
    rhs2 = _T("Xi") * 7 + _T("Theta4") * Fraction(287, 8)
    return {
        "w4^2": (lhs1, rhs1, lhs1 - rhs1),
        "w8": (lhs2, rhs2, lhs2 - rhs2),
    }


def ch8_combination(w4sq: GraphVector, w8: GraphVector) -> GraphVector:
    """Graph class of <ch4^2 + 120 ch8, (2 sigma)^4> given the two wheel pairings over 384.

    Under RW, w_{2k} maps to -(2k)! ch_{2k}, so ch4^2 <-> w4^2/576 and
    120 ch8 <-> -w8/336.
    """
    return w4sq * Fraction(384, 576) - w8 * Fraction(384, 336)


# ---------------------------------------------------------------------------
# Rozansky-Witten numbers


def b_theta(n: int, table) -> Fraction:
    """b_Theta = 2(2n - 1) C(c2) / C(1)."""
    return 2 * (2 * n - 1) * table.value(C2) / table.C1


def b_theta2(n: int, table) -> Fraction:
    """b_Theta2 = -4(2n - 1)(2n - 3) C(c2^2 - 2 c4) / (5 C(1))."""
    ch = table.value(C2SQ) - 2 * table.value(C4)
    return Fraction(-4 * (2 * n - 1) * (2 * n - 3), 5) * ch / table.C1


_B_FUNCS = {"Theta": b_theta, "Theta2": b_theta2}


def b_gamma(gamma, n: int, table) -> Fraction:
    """b for a basis graph id or a product (tuple of ids / GraphVector monomial)."""
    ids = (gamma,) if isinstance(gamma, str) else tuple(gamma)
    out = Fraction(1)
    for g in ids:
        if g not in _B_FUNCS:
            raise UnknownGamma(f"no closed formula for b_{g}")
        out *= _B_FUNCS[g](n, table)
    return out


def rw_evaluate(vec: GraphVector, n: int, table) -> Fraction:
    return sum((c * b_gamma(k, n, table) for k, c in vec.terms.items()), Fraction(0))


def rr_from_b(n: int, C1, b_th, b_th2) -> RRPoly:
    """Riemann-Roch polynomial in terms of b_Theta and b_Theta2 (n = 2, 3, 4)."""
    C1, bt, bt2 = Q(C1), Q(b_th), Q(b_th2)
    lin = Poly([bt / 12, 1])
    if n == 2:
        p = Poly([(bt * bt + bt2) / 144, 2 * bt / 12, 1])
    elif n == 3:
        p = lin * Poly([(bt * bt + 3 * bt2) / 144, 2 * bt / 12, 1])
    elif n == 4:
        p = Poly([(bt * bt + Fraction(3, 5) * bt2) / 144, 2 * bt / 12, 1]) * Poly(
            [(bt * bt + Fraction(27, 5) * bt2) / 144, 2 * bt / 12, 1]
        )
    else:
        raise Unsupported("rr_from_b is available for n = 2, 3, 4")
    return RRPoly.from_poly(p * (C1 / math.factorial(2 * n)), n, smooth=False)


def root_spacing(n: int, b_th2) -> Surd:
    """Common difference of the real roots of rr_from_b when b_Theta2 < 0."""
    bt2 = Q(b_th2)
    if bt2 >= 0:
        raise InvalidInput("real distinct roots need b_Theta2 < 0")
    if n == 3:
        s = Surd.sqrt(-3 * bt2)
        return Surd(s.coeff / 12, s.radicand)
    if n == 4:
        s = Surd.sqrt(-Fraction(3, 5) * bt2)
        return Surd(s.coeff / 6, s.radicand)
    raise Unsupported("root spacing is recorded for n = 3, 4")
