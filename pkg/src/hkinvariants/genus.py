"""Characteristic classes in terms of even Chern classes (c_1 = c_odd = 0).

Everything is derived from power sums.  With Chern roots coming in pairs
+-a_i, Newton's identities with vanishing odd elementary symmetric functions
give p_{2k} as a polynomial in c_2, c_4, ...; then

    ch_{2k}          = p_{2k} / (2k)!
    td               = exp(-sum_k beta_k p_{2k})
    td^(1/2)         = exp(-sum_k beta_k p_{2k} / 2)

where log(sinh(x/2)/(x/2)) = sum_k beta_k x^(2k).  The exponential factor
e^(x/2) of x/(1 - e^-x) cancels against the opposite root.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

from .errors import InvalidInput, MissingMonomial, Unsupported
from .exactcore import ChernMonomial, Q, format_rational

MAX_K = 5


class ChernPolynomial:
    """Homogeneous polynomial in even Chern classes with rational coefficients."""

    __slots__ = ("terms", "weight")

    def __init__(self, terms: Mapping = (), weight: int | None = None):
        clean = {}
        for mon, c in dict(terms).items():
            mon = ChernMonomial.parse(mon)
            c = Q(c)
            if c:
                clean[mon] = clean.get(mon, 0) + c
        clean = {m: c for m, c in clean.items() if c}
        weights = {m.weight for m in clean}
        if len(weights) > 1:
            raise InvalidInput(f"inhomogeneous Chern polynomial, weights {sorted(weights)}")
        if weights:
            w = weights.pop()
            if weight is not None and weight != w:
                raise InvalidInput(f"expected weight {weight}, got {w}")
            weight = w
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "weight", weight)

    def __setattr__(self, name, value):
        raise AttributeError("ChernPolynomial is immutable")

    def coefficient(self, mon) -> Fraction:
        return self.terms.get(ChernMonomial.parse(mon), Fraction(0))

    def __eq__(self, other):
        if isinstance(other, ChernPolynomial):
            return self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return ChernPolynomial(out)

    def __neg__(self):
        return ChernPolynomial({m: -c for m, c in self.terms.items()}, self.weight)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return ChernPolynomial({m: c * other for m, c in self.terms.items()}, self.weight)
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = m1 * m2
                out[m] = out.get(m, 0) + c1 * c2
        w = None if self.weight is None or other.weight is None else self.weight + other.weight
        return ChernPolynomial(out, w)

    __rmul__ = __mul__

    def items(self):
        """Terms sorted with the largest Chern class first."""
        return sorted(self.terms.items(), key=lambda t: t[0].sort_key(), reverse=True)

    def lines(self) -> list[str]:
        return [f"{format_rational(c)} * {m}" for m, c in self.items()]

    def __str__(self):
        return " + ".join(f"({format_rational(c)})*{m}" for m, c in self.items()) or "0"

    def __repr__(self):
        return f"ChernPolynomial({{{', '.join(repr(str(m)) + ': ' + repr(format_rational(c)) for m, c in self.items())}}})"


# Internal graded arithmetic: a graded element is a list indexed by k (weight
# 2k) of dicts ChernMonomial -> Fraction.

def _gexp(y, top):
    """exp of a graded element with zero constant term, via E' = Y' E."""
    e = [dict() for _ in range(top + 1)]
    e[0] = {ChernMonomial(): Fraction(1)}
    for m in range(1, top + 1):
        acc = {}
        for j in range(1, m + 1):
            for m1, c1 in y[j].items():
                for m2, c2 in e[m - j].items():
                    mon = m1 * m2
                    acc[mon] = acc.get(mon, 0) + j * c1 * c2
        e[m] = {mon: c / m for mon, c in acc.items() if c}
    return e


def _c(k: int):
    return ChernMonomial(((2 * k, 1),))


@lru_cache(maxsize=None)
def _power_sums(top: int):
    """p_{2k} for k = 1..top in even Chern classes.

    Newton: p_m = sum_{i=1}^{m-1} (-1)^(i-1) e_i p_{m-i} + (-1)^(m-1) m e_m,
    with e_odd = 0 and e_{2k} = c_{2k}.
    """
    p = {}
    for m in range(1, 2 * top + 1):
        acc = {}
        for i in range(1, m):
            if i % 2 or (m - i) % 2:
                continue
            sign = -1 if i % 2 == 0 else 1
            for mon, c in p[m - i].items():
                key = _c(i // 2) * mon
                acc[key] = acc.get(key, 0) + sign * c
        if m % 2 == 0:
            key = _c(m // 2)
            acc[key] = acc.get(key, 0) + (-1) ** (m - 1) * m
        p[m] = {k: v for k, v in acc.items() if v}
    return [dict()] + [p[2 * k] for k in range(1, top + 1)]


@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """Bernoulli number B_n with B_1 = -1/2."""
    if n == 0:
        return Fraction(1)
    return -sum(math.comb(n + 1, j) * bernoulli(j) for j in range(n)) / (n + 1)


def log_sinhc_coeff(k: int) -> Fraction:
    """Coefficient of x^(2k) in log(sinh(x/2)/(x/2)), i.e. B_2k / (2k (2k)!)."""
    return bernoulli(2 * k) / (2 * k * math.factorial(2 * k))


def modified_bernoulli(k: int) -> Fraction:
    """b_{2k}: coefficient of x^(2k) in (1/2) log(sinh(x/2)/(x/2))."""
    return log_sinhc_coeff(k) / 2


@lru_cache(maxsize=None)
def _series(kind: str):
    top = MAX_K
    p = _power_sums(top)
    if kind == "ch":
        return [
            {m: Fraction(c, math.factorial(2 * k)) for m, c in p[k].items()} for k in range(top + 1)
        ]
    scale = {"td": 1, "td-half": Fraction(1, 2)}[kind]
    y = [dict()] + [
        {m: -scale * log_sinhc_coeff(k) * c for m, c in p[k].items()} for k in range(1, top + 1)
    ]
    return _gexp(y, top)


def _component(kind: str, k: int) -> ChernPolynomial:
    if not isinstance(k, int) or k < 0:
        raise InvalidInput(f"k must be a non-negative integer, got {k!r}")
    if k > MAX_K:
        raise Unsupported(f"expansions are available up to weight {2 * MAX_K} (k <= {MAX_K})")
    if kind == "ch" and k == 0:
        raise InvalidInput("chern_character expects k >= 1")
    return ChernPolynomial(_series(kind)[k], 2 * k)


def chern_character(k: int) -> ChernPolynomial:
    """ch_{2k}, the weight-2k part of the Chern character."""
    return _component("ch", k)


def todd_component(k: int) -> ChernPolynomial:
    """td_{2k}, the weight-2k part of the Todd class."""
    return _component("td", k)


def sqrt_todd_component(k: int) -> ChernPolynomial:
    """Weight-2k part of the square root of the Todd class."""
    return _component("td-half", k)


GENUS_KINDS = {"ch": chern_character, "td": todd_component, "td-half": sqrt_todd_component}


def evaluate(cp: ChernPolynomial, table) -> Fraction:
    """Sum of coeff * C(c_lambda) over the terms of ``cp``.

    ``table`` is anything with a ``value(monomial)`` method raising
    MissingMonomial, or a plain mapping from monomials to rationals.
    """
    total = Fraction(0)
    for mon, c in cp.terms.items():
        if hasattr(table, "value"):
            v = table.value(mon)
        else:
            try:
                v = table[mon]
            except KeyError:
                raise MissingMonomial(str(mon)) from None
        total += c * Q(v)
    return total
