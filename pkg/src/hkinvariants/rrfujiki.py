"""Riemann-Roch polynomials and generalized Fujiki constants.

Conventions: X has complex dimension 2n.  RR_X(q) = sum_i A_i q^(n-i) with
A_i = C(td_{2i}) / (2n-2i)!, and C(alpha) is the generalized Fujiki constant
of a class alpha of degree 4k, so that int alpha * beta^(2n-2k) equals
C(alpha) * q(beta)^(n-k).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from typing import Mapping

from .errors import (
    AllRootsEqual,
    DegreeOverflow,
    InequalityViolated,
    InvalidInput,
    MissingMonomial,
)
from .exactcore import ChernMonomial, Poly, Q, binomial_poly, chern_monomials, format_rational
from .genus import evaluate, todd_component

ONE = ChernMonomial()
C2 = ChernMonomial.parse("c2")
C4 = ChernMonomial.parse("c4")
C2SQ = ChernMonomial.parse("c2^2")

SYM2_FLAG = "c2 in Sym^2 H^2"


@dataclass(frozen=True)
class RRPoly:
    """Coefficients A_0..A_n; A_i multiplies q^(n-i).

    ``smooth`` enables the check A_n = n + 1, which fails for orbifolds.
    """

    n: int
    coeffs: tuple
    smooth: bool = True

    def __post_init__(self):
        cs = tuple(Q(c) for c in self.coeffs)
        object.__setattr__(self, "coeffs", cs)
        if self.n < 1:
            raise InvalidInput(f"half-dimension must be >= 1, got {self.n}")
        if len(cs) != self.n + 1:
            raise InvalidInput(f"expected {self.n + 1} coefficients, got {len(cs)}")
        if cs[0] <= 0:
            raise InvalidInput("leading coefficient A_0 must be positive")

    def A(self, i: int) -> Fraction:
        return self.coeffs[i]

    def poly(self) -> Poly:
        return Poly(reversed(self.coeffs))

    def __call__(self, q) -> Fraction:
        return self.poly()(q)

    def is_smooth_consistent(self) -> bool:
        return self.coeffs[-1] == self.n + 1

    @classmethod
    def from_poly(cls, p: Poly, n: int | None = None, smooth: bool = True) -> "RRPoly":
        n = p.degree if n is None else n
        return cls(n, tuple(p[n - i] for i in range(n + 1)), smooth)

    def __str__(self):
        return str(self.poly())


class FujikiTable:
    """Generalized Fujiki constants C(c_lambda) of a 2n-dimensional variety."""

    def __init__(self, n: int, entries: Mapping, b2: int | None = None):
        if n < 1:
            raise InvalidInput(f"half-dimension must be >= 1, got {n}")
        self.n = n
        self.b2 = b2
        self.entries = {}
        for k, v in dict(entries).items():
            mon = ChernMonomial.parse(k)
            if mon.weight > 2 * n:
                raise InvalidInput(f"{mon} has weight {mon.weight} > 2n = {2 * n}")
            self.entries[mon] = Q(v)
        if ONE in self.entries and self.entries[ONE] <= 0:
            raise InvalidInput("C(1) must be positive")

    def value(self, mon) -> Fraction:
        mon = ChernMonomial.parse(mon)
        try:
            return self.entries[mon]
        except KeyError:
            raise MissingMonomial(str(mon)) from None

    __getitem__ = value

    def __contains__(self, mon):
        return ChernMonomial.parse(mon) in self.entries

    @property
    def C1(self) -> Fraction:
        return self.value(ONE)

    def complete_to(self) -> int:
        """Largest even weight w such that every monomial of weight <= w is present."""
        w = 0
        while w + 2 <= 2 * self.n and all(m in self.entries for m in chern_monomials(w + 2)):
            w += 2
        return w if ONE in self.entries else -1

    def require(self, weight: int):
        for w in range(0, weight + 1, 2):
            for m in chern_monomials(w):
                if m not in self.entries:
                    raise MissingMonomial(str(m))

    def with_value(self, mon, value) -> "FujikiTable":
        entries = dict(self.entries)
        entries[ChernMonomial.parse(mon)] = Q(value)
        return FujikiTable(self.n, entries, self.b2)

    def items(self):
        return sorted(self.entries.items(), key=lambda t: t[0].sort_key())

    def as_strings(self) -> dict:
        return {str(m): format_rational(v) for m, v in self.items()}

    def __eq__(self, other):
        return (
            isinstance(other, FujikiTable)
            and self.n == other.n
            and self.entries == other.entries
        )

    def __repr__(self):
        return f"FujikiTable(n={self.n}, b2={self.b2}, {json.dumps(self.as_strings())})"


@dataclass(frozen=True)
class BoundReport:
    condition_holds: bool
    bound: Fraction | None = None
    attained_iff: str = SYM2_FLAG
    mu: Fraction | None = None

    def __post_init__(self):
        if self.condition_holds != (self.bound is not None):
            raise InvalidInput("bound must be present exactly when the condition holds")


@dataclass(frozen=True)
class VerbitskyReport:
    lhs: Fraction
    rhs: Fraction
    is_in_verbitsky: bool


# ---------------------------------------------------------------------------
# Riemann-Roch polynomials of the known series


@lru_cache(maxsize=None)
def rr_k3n(n: int) -> RRPoly:
    """binom(q/2 + n + 1, n)."""
    if n < 2:
        raise InvalidInput("rr_k3n expects n >= 2")
    return RRPoly.from_poly(binomial_poly(Fraction(1, 2), n + 1, n), n)


@lru_cache(maxsize=None)
def rr_kumn(n: int) -> RRPoly:
    """(n + 1) binom(q/2 + n, n)."""
    if n < 2:
        raise InvalidInput("rr_kumn expects n >= 2")
    return RRPoly.from_poly(binomial_poly(Fraction(1, 2), n, n) * (n + 1), n)


def rr_scale(p: RRPoly, m: int) -> RRPoly:
    """(1/m) p(m q)."""
    if m < 1:
        raise InvalidInput("scale factor must be >= 1")
    coeffs = tuple(a * Fraction(m) ** (p.n - i) / m for i, a in enumerate(p.coeffs))
    return RRPoly(p.n, coeffs, p.smooth and m == 1)


# ---------------------------------------------------------------------------
# Fujiki constants


def degree4_from_rr(p: RRPoly, b2: int | None = None) -> FujikiTable:
    """C(1), C(c2), C(c2^2), C(c4) from the three leading RR coefficients."""
    n = p.n
    if n < 2:
        raise InvalidInput("degree4_from_rr needs n >= 2")
    A0, A1, A2 = p.coeffs[:3]
    f4 = math.factorial(2 * n - 4)
    corr = (n - 1) * A1 * A1 / (n * A0)
    return FujikiTable(
        n,
        {
            ONE: math.factorial(2 * n) * A0,
            C2: 12 * math.factorial(2 * n - 2) * A1,
            C2SQ: 144 * f4 * (4 * A2 - corr),
            C4: 144 * f4 * (7 * A2 - 3 * corr),
        },
        b2,
    )


def rr_head(table: FujikiTable) -> tuple:
    """(A_0, A_1, A_2) recomputed from a table complete to weight 4."""
    n = table.n
    return (
        table.C1 / math.factorial(2 * n),
        evaluate(todd_component(1), table) / math.factorial(2 * n - 2),
        evaluate(todd_component(2), table) / math.factorial(2 * n - 4),
    )


def fujiki_q_mult(C_alpha, k: int, n: int, b2: int) -> Fraction:
    """C(q * alpha) for alpha of degree 4k: (b + 2n - 2k - 2)/(2n - 2k - 1) C(alpha)."""
    if k >= n:
        raise DegreeOverflow(f"q * alpha exceeds top degree (k={k}, n={n})")
    if k < 0:
        raise InvalidInput("k must be non-negative")
    return Q(C_alpha) * Fraction(b2 + 2 * n - 2 * k - 2, 2 * n - 2 * k - 1)


def fujiki_q_power(k: int, n: int, b2: int, C1) -> Fraction:
    """C(q^k) = prod_{i=1}^k (b + 2n - 2i)/(1 + 2n - 2i) C(1)."""
    if not 0 <= k <= n:
        raise DegreeOverflow(f"q^{k} exceeds top degree for n={n}")
    out = Q(C1)
    for i in range(1, k + 1):
        out *= Fraction(b2 + 2 * n - 2 * i, 1 + 2 * n - 2 * i)
    return out


def eval_fujiki_integral(C_alpha, q_beta, n: int, k: int) -> Fraction:
    """int alpha * beta^(2n-2k) = C(alpha) q(beta)^(n-k)."""
    if not 0 <= k <= n:
        raise InvalidInput("need 0 <= k <= n")
    return Q(C_alpha) * Q(q_beta) ** (n - k)


def hitchin_sawon_check(table: FujikiTable) -> Fraction:
    """7C(c2^2) - 4C(c4) - 5(2n-1) C(c2)^2 / ((2n-3) C(1)); zero when the relation holds."""
    n = table.n
    if n < 2:
        raise InvalidInput("the relation needs n > 1")
    c1, c2, c2sq, c4 = table.C1, table.value(C2), table.value(C2SQ), table.value(C4)
    return 7 * c2sq - 4 * c4 - Fraction(5 * (2 * n - 1), 2 * n - 3) * c2 * c2 / c1


def r_x(n: int, C1, Cc2) -> Fraction:
    """(2n - 1) C(c2) / (24 C(1))."""
    return (2 * n - 1) * Q(Cc2) / (24 * Q(C1))


def sqrt_todd_constant(n: int, k: int, C1, Cc2) -> Fraction:
    """C(td^(1/2)_{2k}) predicted by the n-th power factorization."""
    r = r_x(n, C1, Cc2)
    return Fraction(math.factorial(2 * n - 2 * k) * math.comb(n, k), math.factorial(2 * n)) * Q(C1) * (2 * r) ** k


def rr_half(n: int, C1, Cc2) -> RRPoly:
    """C(td^(1/2)_{2n}) (1 + q/(2 r_X))^n as an RRPoly."""
    if n < 2:
        raise InvalidInput("rr_half expects n >= 2")
    C1, Cc2 = Q(C1), Q(Cc2)
    if C1 <= 0 or Cc2 <= 0:
        raise InvalidInput("rr_half needs C(1) > 0 and C(c2) > 0")
    r = r_x(n, C1, Cc2)
    top = C1 * (2 * r) ** n / math.factorial(2 * n)
    return RRPoly(n, tuple(top * math.comb(n, i) / (2 * r) ** (n - i) for i in range(n + 1)), False)


def verbitsky_rhs(table: FujikiTable, b2: int) -> Fraction:
    n = table.n
    c1, c2 = table.C1, table.value(C2)
    return Fraction((2 * n - 1) * (b2 + 2 * n - 4), (2 * n - 3) * (b2 + 2 * n - 2)) * c2 * c2 / c1


def c2_verbitsky_check(table: FujikiTable, b2: int | None = None) -> VerbitskyReport:
    """Compare C(c2^2) with the value forced by c2 lying in the Verbitsky component."""
    b2 = table.b2 if b2 is None else b2
    if b2 is None or b2 < 3:
        raise InvalidInput("c2_verbitsky_check needs b2 >= 3")
    lhs = table.value(C2SQ)
    rhs = verbitsky_rhs(table, b2)
    if lhs < rhs:
        raise InequalityViolated(f"C(c2^2) = {format_rational(lhs)} < {format_rational(rhs)}")
    return VerbitskyReport(lhs, rhs, lhs == rhs)


def b2_bound_from_coeffs(n: int, A0, A1, A2, mu=None) -> BoundReport:
    """Bound 1/(1 - 2n A0 A2 / ((n-1) A1^2)) - (2n - 2), valid when the ratio is < 1."""
    if n < 2:
        raise InvalidInput("the b2 bound needs n >= 2")
    A0, A1, A2 = Q(A0), Q(A1), Q(A2)
    if A1 == 0:
        return BoundReport(False, None, mu=mu)
    ratio = 2 * n * A0 * A2 / ((n - 1) * A1 * A1)
    if ratio >= 1:
        return BoundReport(False, None, mu=mu)
    return BoundReport(True, 1 / (1 - ratio) - (2 * n - 2), mu=mu)


def _mu(table: FujikiTable):
    c4 = table.value(C4)
    return table.value(C2SQ) / c4 if c4 else None


def b2_bound_from_rr(p: RRPoly) -> BoundReport:
    """Upper bound on b2 from the three leading RR coefficients."""
    if p.n < 2:
        raise InvalidInput("b2_bound_from_rr needs n >= 2")
    n = p.n
    A0, A1, A2 = p.coeffs[:3]
    # mu = C(c2^2)/C(c4) read off degree4_from_rr without building the table
    corr = (n - 1) * A1 * A1 / (n * A0)
    c4 = 7 * A2 - 3 * corr
    mu = (4 * A2 - corr) / c4 if c4 else None
    return b2_bound_from_coeffs(n, A0, A1, A2, mu=mu)


def b2_bound_from_table(table: FujikiTable) -> BoundReport:
    return b2_bound_from_coeffs(table.n, *rr_head(table), mu=_mu(table))


def b2_bound_from_mu(n: int, mu) -> BoundReport:
    """Bound 9 - 2n + 10/(mu - 2), mu = C(c2^2)/C(c4); valid when mu > 2."""
    mu = Q(mu)
    if mu <= 2:
        return BoundReport(False, None, mu=mu)
    return BoundReport(True, 9 - 2 * n + 10 / (mu - 2), mu=mu)


def dispersion_bound(roots, n: int) -> Fraction:
    """Bound in terms of the positive numbers lambda_i = -root_i."""
    lams = [Q(x) for x in roots]
    if len(lams) != n:
        raise InvalidInput(f"expected {n} roots, got {len(lams)}")
    if any(x <= 0 for x in lams):
        raise InvalidInput("all lambda_i must be positive")
    if len(set(lams)) == 1:
        raise AllRootsEqual("all roots equal: the dispersion vanishes")
    s1 = sum(lams)
    s2 = sum(x * x for x in lams)
    return (n - 1) / (n * s2 / (s1 * s1) - 1) - (2 * n - 2)


def positivity_report(table: FujikiTable, b2: int | None = None) -> dict:
    b2 = table.b2 if b2 is None else b2
    if b2 is None:
        raise InvalidInput("positivity_report needs b2")
    table.require(4)
    return {
        "c2sq_positive": table.value(C2SQ) > 0,
        "c4_positive_guaranteed": b2 + 2 * table.n > 9,
    }


def small_fujiki(n: int, C1) -> Fraction:
    """c_X with C(1) = (2n)!/(2^n n!) c_X."""
    return Q(C1) * 2**n * math.factorial(n) / math.factorial(2 * n)


def ch4_constant(table: FujikiTable) -> Fraction:
    """C(ch_4) = (C(c2^2) - 2 C(c4)) / 12."""
    return (table.value(C2SQ) - 2 * table.value(C4)) / 12
