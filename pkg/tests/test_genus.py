"""Genus expansions checked against an independent Chern-root computation.

The oracle expands products over formal roots +-x_i in sympy, rewrites the
result in elementary symmetric functions of y_i = x_i^2 and uses
c_{2j} = (-1)^j e_j(y).
"""

from fractions import Fraction
from functools import lru_cache

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st
from sympy.polys.polyfuncs import symmetrize

from hkinvariants.errors import InvalidInput, MissingMonomial, Unsupported
from hkinvariants.exactcore import ChernMonomial
from hkinvariants.genus import (
    ChernPolynomial,
    bernoulli,
    chern_character,
    evaluate,
    modified_bernoulli,
    sqrt_todd_component,
    todd_component,
)

t = sympy.Symbol("t")


def _even_series(expr, k):
    """Coefficients a_0..a_k of expr = sum a_j t^(2j)."""
    s = sympy.series(expr, t, 0, 2 * k + 2).removeO()
    return [sympy.Rational(s.coeff(t, 2 * j)) for j in range(k + 1)]


@lru_cache(maxsize=None)
def oracle(kind: str, k: int) -> dict:
    ys = sympy.symbols(f"y1:{k + 1}")
    if kind == "ch":
        part = sum(2 * y**k for y in ys) / sympy.factorial(2 * k)
    else:
        f = {"td": (t / 2 / sympy.sinh(t / 2)) ** 2, "td-half": t / 2 / sympy.sinh(t / 2)}[kind]
        a = _even_series(f, k)
        total = sympy.Integer(1)
        for y in ys:
            total = sympy.expand(total * sum(a[j] * y**j for j in range(k + 1)))
        part = sympy.Poly(total, *ys)
        part = sum(
            c * sympy.prod([y**e for y, e in zip(ys, mon)])
            for mon, c in part.terms()
            if sum(mon) == k
        )
    sym, rem, defs = symmetrize(sympy.expand(part), *ys, formal=True)
    assert rem == 0
    svars = [s for s, _ in defs]
    poly = sympy.Poly(sym, *svars)
    out = {}
    for mon, c in poly.terms():
        exps = {}
        sign = 1
        for j, e in enumerate(mon, 1):
            if e:
                exps[2 * j] = e
                sign *= (-1) ** (j * e)
        out[ChernMonomial(tuple(exps.items()))] = Fraction(int(sympy.numer(c)), int(sympy.denom(c))) * sign
    return out


KINDS = {"ch": chern_character, "td": todd_component, "td-half": sqrt_todd_component}


@pytest.mark.parametrize("kind", ["ch", "td", "td-half"])
@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_against_chern_root_oracle(kind, k):
    assert KINDS[kind](k).terms == oracle(kind, k)


def test_frozen_low_weight_values():
    assert todd_component(2).terms == {ChernMonomial.parse("c2^2"): Fraction(1, 240),
                                       ChernMonomial.parse("c4"): Fraction(-1, 720)}
    assert sqrt_todd_component(2).terms == {ChernMonomial.parse("c2^2"): Fraction(7, 5760),
                                            ChernMonomial.parse("c4"): Fraction(-1, 1440)}
    assert chern_character(2).terms == {ChernMonomial.parse("c2^2"): Fraction(1, 12),
                                        ChernMonomial.parse("c4"): Fraction(-1, 6)}
    assert todd_component(1).terms == {ChernMonomial.parse("c2"): Fraction(1, 12)}
    assert chern_character(1).terms == {ChernMonomial.parse("c2"): -1}


def test_modified_bernoulli():
    assert [modified_bernoulli(k) for k in (1, 2, 3, 4)] == [
        Fraction(1, 48), Fraction(-1, 5760), Fraction(1, 362880), Fraction(-1, 19353600)]
    assert bernoulli(2) == Fraction(1, 6) and bernoulli(12) == Fraction(-691, 2730)


def test_modified_bernoulli_generating_series():
    # sum_k b_{2k} x^{2k} = (1/2) log(sinh(x/2)/(x/2))
    coeffs = _even_series(sympy.log(sympy.sinh(t / 2) / (t / 2)) / 2, 4)
    for k in range(1, 5):
        assert modified_bernoulli(k) == Fraction(int(sympy.numer(coeffs[k])), int(sympy.denom(coeffs[k])))


@pytest.mark.parametrize("k", range(0, 6))
def test_todd_is_square_of_sqrt_todd(k):
    acc = ChernPolynomial({}, 2 * k)
    for i in range(k + 1):
        acc = acc + sqrt_todd_component(i) * sqrt_todd_component(k - i)
    assert acc == todd_component(k)


def test_ranges():
    with pytest.raises(Unsupported):
        todd_component(6)
    with pytest.raises(InvalidInput):
        chern_character(0)
    with pytest.raises(InvalidInput):
        todd_component(-1)


@given(st.integers(1, 5), st.fractions(max_denominator=20))
def test_scaling_homogeneity(k, s):
    """Scaling every c_{2j} by s^j scales a weight-2k polynomial by s^k."""
    cp = todd_component(k)
    base = {m: Fraction(3) ** len(m.exps) + m.weight for m in cp.terms}
    scaled = {m: v * s ** (m.weight // 2) for m, v in base.items()}
    assert evaluate(cp, scaled) == s**k * evaluate(cp, base)


def test_evaluate_missing_monomial():
    with pytest.raises(MissingMonomial):
        evaluate(todd_component(2), {ChernMonomial.parse("c4"): 1})


def test_lines_format():
    assert todd_component(2).lines() == ["1/240 * c2^2", "-1/720 * c4"]
