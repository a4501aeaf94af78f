"""Exact arithmetic substrate.

Scalars are ``fractions.Fraction``.  On top of that this module provides
univariate polynomials over Q, elements of the cyclotomic rings
Q[x]/(Phi_m), Chern monomials in even Chern classes, square roots of
rationals and a small exact linear solver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator

from .errors import (
    InvalidInput,
    NotRational,
    SingularSystem,
    VanishingDeterminant,
)

NEG_INF = float("-inf")


def Q(x) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise InvalidInput(f"not a rational: {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError):
            raise InvalidInput(f"not a rational: {x!r}") from None
    raise InvalidInput(f"not an exact rational: {x!r}")


def format_rational(x) -> str:
    x = Q(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


parse_rational = Q


# ---------------------------------------------------------------------------
# Polynomials


class Poly:
    """Univariate polynomial with rational coefficients, lowest degree first.

    Instances are immutable; trailing zeros are trimmed so the zero
    polynomial has an empty coefficient tuple and degree ``NEG_INF``.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [Q(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def monomial(cls, deg: int, c=1) -> "Poly":
        return cls([0] * deg + [c])

    @classmethod
    def from_roots(cls, roots: Iterable, lead=1) -> "Poly":
        p = cls([lead])
        for r in roots:
            p = p * cls([-Q(r), 1])
        return p

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __getitem__(self, i: int) -> Fraction:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Fraction(0)

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly([other])
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly({[format_rational(c) for c in self.coeffs]})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mon = "" if i == 0 else ("q" if i == 1 else f"q^{i}")
            if mon and c == 1:
                terms.append(mon)
            elif mon and c == -1:
                terms.append("-" + mon)
            else:
                terms.append(format_rational(c) + ("*" + mon if mon else ""))
        return " + ".join(terms).replace("+ -", "- ")

    def _coerce(self, other) -> "Poly":
        return other if isinstance(other, Poly) else Poly([other])

    def __add__(self, other):
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self[i] + other[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        if not self.coeffs or not other.coeffs:
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise InvalidInput("negative power of a polynomial")
        out = Poly([1])
        for _ in range(k):
            out = out * self
        return out

    def __divmod__(self, other):
        other = self._coerce(other)
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(self.coeffs) - len(other.coeffs)
        if dq < 0:
            return Poly(), self
        quot = [Fraction(0)] * (dq + 1)
        lc = other.coeffs[-1]
        for k in range(dq, -1, -1):
            c = rem[k + len(other.coeffs) - 1] / lc
            quot[k] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= c * b
        return Poly(quot), Poly(rem[: len(other.coeffs) - 1])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __call__(self, x):
        return poly_eval(self, x)

    def derivative(self) -> "Poly":
        return Poly(i * c for i, c in enumerate(self.coeffs) if i)

    def compose_linear(self, a, b=0) -> "Poly":
        """Return p(a*q + b)."""
        lin = Poly([b, a])
        out = Poly()
        for c in reversed(self.coeffs):
            out = out * lin + c
        return out

    def monic(self) -> "Poly":
        return self * (1 / self.lead()) if self else self


def poly_eval(p: Poly, x) -> Fraction:
    """Horner evaluation."""
    x = Q(x)
    acc = Fraction(0)
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return acc


def poly_xgcd(a: Poly, b: Poly):
    """Return (g, s, t) with s*a + t*b = g and g monic (or zero)."""
    r0, r1 = a, b
    s0, s1 = Poly([1]), Poly()
    t0, t1 = Poly(), Poly([1])
    while r1:
        qt, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - qt * s1
        t0, t1 = t1, t0 - qt * t1
    if r0:
        inv = 1 / r0.lead()
        return r0 * inv, s0 * inv, t0 * inv
    return r0, s0, t0


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def even_integer_roots(p: Poly) -> list[Fraction]:
    """All even integer roots of ``p`` with multiplicity, sorted ascending.

    Candidates come from the rational root theorem applied to the primitive
    integer multiple of ``p``; each is confirmed by exact division.
    """
    if not p:
        raise InvalidInput("even_integer_roots of the zero polynomial")
    roots: list[Fraction] = []
    while p.degree > 0 and p[0] == 0:
        roots.append(Fraction(0))
        p = Poly(p.coeffs[1:])
    if p.degree <= 0:
        return sorted(roots)
    den = math.lcm(*(c.denominator for c in p.coeffs))
    const = int(p[0] * den)
    for d in _divisors(const):
        if d % 2:
            continue
        for cand in (Fraction(d), Fraction(-d)):
            while p.degree > 0 and poly_eval(p, cand) == 0:
                roots.append(cand)
                p = divmod(p, Poly([-cand, 1]))[0]
    return sorted(roots)


# ---------------------------------------------------------------------------
# Square roots


def _squarefree_split(n: int) -> tuple[int, int]:
    """Write n > 0 as f*f*s with s squarefree; return (f, s)."""
    f, s = 1, 1
    d = 2
    while d * d <= n:
        e = 0
        while n % d == 0:
            n //= d
            e += 1
        f *= d ** (e // 2)
        if e % 2:
            s *= d
        d += 1
    return f, s * n


def sqrt_rational(x) -> Fraction | None:
    """Exact square root of a non-negative rational, or None if irrational."""
    x = Q(x)
    if x < 0:
        return None
    a, b = x.numerator, x.denominator
    ra, rb = math.isqrt(a), math.isqrt(b)
    if ra * ra == a and rb * rb == b:
        return Fraction(ra, rb)
    return None


@dataclass(frozen=True)
class Surd:
    """The real number ``coeff * sqrt(radicand)``.

    The radicand is normalised to a/b with a, b coprime squarefree positive
    integers, so e.g. sqrt(676/3) is stored as 26*sqrt(1/3).
    """

    coeff: Fraction
    radicand: Fraction

    @classmethod
    def sqrt(cls, x, symbol_factor=1) -> "Surd":
        x = Q(x)
        if x < 0:
            raise InvalidInput("square root of a negative rational")
        if x == 0:
            return cls(Fraction(0), Fraction(1))
        fa, sa = _squarefree_split(x.numerator)
        fb, sb = _squarefree_split(x.denominator)
        g = math.gcd(sa, sb)
        # sqrt(sa/sb) with common factor g: sqrt(g*a'/(g*b')) = sqrt(a'/b')
        return cls(Fraction(fa, fb), Fraction(sa // g, sb // g))

    def is_rational(self) -> bool:
        return self.radicand == 1 or self.coeff == 0

    def square(self) -> Fraction:
        return self.coeff * self.coeff * self.radicand

    def __float__(self):
        return float(self.coeff) * math.sqrt(self.radicand)

    def render(self, symbol: str | None = None) -> str:
        """Format as e.g. ``26*sqrt(C1/3)``; ``symbol`` multiplies the radicand."""
        c = format_rational(self.coeff)
        r = self.radicand
        if symbol is None:
            if r == 1:
                return c
            return f"{c}*sqrt({format_rational(r)})"
        if r == 1:
            inner = symbol
        elif r.denominator == 1:
            inner = f"{r.numerator}*{symbol}"
        elif r.numerator == 1:
            inner = f"{symbol}/{r.denominator}"
        else:
            inner = f"{r.numerator}*{symbol}/{r.denominator}"
        return f"{c}*sqrt({inner})"

    def __str__(self):
        return self.render()


# ---------------------------------------------------------------------------
# Cyclotomic rings


@lru_cache(maxsize=None)
def cyclotomic_poly(m: int) -> Poly:
    """The m-th cyclotomic polynomial Phi_m."""
    if m < 1:
        raise InvalidInput("cyclotomic order must be positive")
    p = Poly([-1] + [0] * (m - 1) + [1])
    for d in _divisors(m):
        if d < m:
            p = p // cyclotomic_poly(d)
    return p


def euler_phi(m: int) -> int:
    return cyclotomic_poly(m).degree


def _common_denominator(coords) -> tuple[list[int], int]:
    den = 1
    for c in coords:
        den = math.lcm(den, c.denominator)
    return [c.numerator * (den // c.denominator) for c in coords], den


def _cyclo_reduce(m: int, coeffs: list) -> tuple:
    """Reduce modulo x^m - 1, then modulo the monic integer polynomial Phi_m."""
    acc = [Fraction(0)] * m
    for i, c in enumerate(coeffs):
        if c:
            acc[i % m] += c
    phi = cyclotomic_poly(m)
    d = phi.degree
    low = [int(c) for c in phi.coeffs[:d]]
    for top in range(m - 1, d - 1, -1):
        c = acc[top]
        if c:
            base = top - d
            for i, p in enumerate(low):
                if p:
                    acc[base + i] -= c * p
            acc[top] = Fraction(0)
    return tuple(acc[:d])


class CycloElem:
    """Element of Q(zeta_m) = Q[x]/(Phi_m) in the reduced power basis."""

    __slots__ = ("m", "coords")

    def __init__(self, m: int, coords: Iterable = ()):
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "coords", _cyclo_reduce(m, [Q(c) for c in coords]))

    def __setattr__(self, name, value):
        raise AttributeError("CycloElem is immutable")

    @classmethod
    def zeta_power(cls, m: int, k: int) -> "CycloElem":
        return cls(m, [0] * (k % m) + [1])

    @classmethod
    def const(cls, m: int, c) -> "CycloElem":
        return cls(m, [c])

    def poly(self) -> Poly:
        return Poly(self.coords)

    def _check(self, other):
        if isinstance(other, (int, Fraction)):
            return CycloElem.const(self.m, other)
        if other.m != self.m:
            raise InvalidInput("cyclotomic elements of different orders")
        return other

    def __add__(self, other):
        other = self._check(other)
        return CycloElem(self.m, [a + b for a, b in zip(self.coords, other.coords)])

    __radd__ = __add__

    def __neg__(self):
        return CycloElem(self.m, [-a for a in self.coords])

    def __sub__(self, other):
        return self + (-self._check(other))

    def __mul__(self, other):
        other = self._check(other)
        # integer convolution over a common denominator
        m = self.m
        ia, da = _common_denominator(self.coords)
        ib, db = _common_denominator(other.coords)
        acc = [0] * m
        for i, a in enumerate(ia):
            if a:
                for j, b in enumerate(ib):
                    if b:
                        acc[(i + j) % m] += a * b
        den = da * db
        return CycloElem(m, [Fraction(c, den) for c in acc])

    __rmul__ = __mul__

    def inverse(self) -> "CycloElem":
        g, s, _ = poly_xgcd(self.poly(), cyclotomic_poly(self.m))
        if g != Poly([1]):
            raise ZeroDivisionError("zero divisor in cyclotomic ring")
        return CycloElem(self.m, s.coeffs)

    def __truediv__(self, other):
        return self * self._check(other).inverse()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycloElem.const(self.m, other)
        return isinstance(other, CycloElem) and (self.m, self.coords) == (other.m, other.coords)

    def __hash__(self):
        return hash((self.m, self.coords))

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coords[1:])

    def __repr__(self):
        return f"CycloElem({self.m}, {[format_rational(c) for c in self.coords]})"


def rational_part(x: CycloElem) -> Fraction:
    """The value of a cyclotomic element known to be rational."""
    if not x.is_rational():
        raise NotRational(f"{x!r} is not rational")
    return x.coords[0]


def cyclo_det_factor(m: int, weights: Iterable[int], j: int) -> CycloElem:
    """prod_i (1 - zeta_m^(j*w_i)) in Q(zeta_m)."""
    weights = tuple(weights)
    if not 1 <= j <= m - 1:
        raise InvalidInput(f"j={j} outside 1..{m - 1}")
    for w in weights:
        if not 0 <= w <= m - 1:
            raise InvalidInput(f"weight {w} outside 0..{m - 1}")
        if (j * w) % m == 0:
            raise VanishingDeterminant(f"zeta_{m}^{j * w} = 1 for weight {w}, j={j}")
    out = CycloElem.const(m, 1)
    for w in weights:
        out = out * (CycloElem.const(m, 1) - CycloElem.zeta_power(m, j * w))
    return out


@lru_cache(maxsize=None)
def _one_minus_zeta_inverse(m: int, k: int) -> CycloElem:
    return (CycloElem.const(m, 1) - CycloElem.zeta_power(m, k)).inverse()


def cyclo_det_inverse(m: int, weights: Iterable[int], j: int) -> CycloElem:
    """1 / prod_i (1 - zeta_m^(j*w_i)), from cached inverses of the linear factors."""
    weights = tuple(weights)
    cyclo_det_factor(m, weights, j)  # validation
    out = _one_minus_zeta_inverse(m, (j * weights[0]) % m)
    for w in weights[1:]:
        out = out * _one_minus_zeta_inverse(m, (j * w) % m)
    return out


# ---------------------------------------------------------------------------
# Chern monomials


@dataclass(frozen=True, order=True)
class ChernMonomial:
    """Product c_2^e2 c_4^e4 ...; ``exps`` is a sorted tuple of (index, exponent)."""

    exps: tuple = ()

    def __post_init__(self):
        clean = {}
        for idx, e in self.exps:
            if idx <= 0 or idx % 2:
                raise InvalidInput(f"Chern index must be even and positive, got c{idx}")
            if e < 0:
                raise InvalidInput("negative exponent in Chern monomial")
            if e:
                clean[idx] = clean.get(idx, 0) + e
        object.__setattr__(self, "exps", tuple(sorted(clean.items())))

    @classmethod
    def of(cls, mapping=None, **kw) -> "ChernMonomial":
        items = dict(mapping or {})
        for k, v in kw.items():
            items[int(k.lstrip("c"))] = v
        return cls(tuple(items.items()))

    @classmethod
    def parse(cls, text) -> "ChernMonomial":
        """Parse "1", "c4", "c2^2.c4" (also accepts "*" as separator)."""
        if isinstance(text, ChernMonomial):
            return text
        s = str(text).strip().replace("*", ".").replace(" ", "")
        if s in ("1", ""):
            return cls()
        exps = []
        for part in s.split("."):
            base, _, e = part.partition("^")
            if not base.startswith("c") or not base[1:].isdigit():
                raise InvalidInput(f"bad Chern monomial {text!r}")
            if e and not e.isdigit():
                raise InvalidInput(f"bad Chern monomial {text!r}")
            exps.append((int(base[1:]), int(e) if e else 1))
        return cls(tuple(exps))

    @property
    def weight(self) -> int:
        return sum(i * e for i, e in self.exps)

    def exponent(self, idx: int) -> int:
        return dict(self.exps).get(idx, 0)

    def __mul__(self, other: "ChernMonomial") -> "ChernMonomial":
        return ChernMonomial(self.exps + other.exps)

    def __str__(self):
        if not self.exps:
            return "1"
        return ".".join(f"c{i}" if e == 1 else f"c{i}^{e}" for i, e in reversed(self.exps))

    def sort_key(self):
        return (self.weight, tuple(-i for i, e in reversed(self.exps) for _ in range(e)))


def partitions(n: int, max_part: int | None = None) -> Iterator[tuple[int, ...]]:
    """Integer partitions of n as non-increasing tuples."""
    if max_part is None:
        max_part = n
    if n == 0:
        yield ()
        return
    for p in range(min(n, max_part), 0, -1):
        for rest in partitions(n - p, p):
            yield (p,) + rest


def chern_monomials(weight: int) -> list[ChernMonomial]:
    """All Chern monomials of the given (even) weight, largest class first."""
    if weight % 2:
        return []
    out = []
    for lam in partitions(weight // 2):
        exps = {}
        for part in lam:
            exps[2 * part] = exps.get(2 * part, 0) + 1
        out.append(ChernMonomial(tuple(exps.items())))
    return out


# ---------------------------------------------------------------------------
# Linear algebra


def solve_linear(A, b) -> list[Fraction]:
    """Solve the square system A x = b exactly by Gauss-Jordan elimination."""
    n = len(A)
    if any(len(row) != n for row in A) or len(b) != n:
        raise InvalidInput("solve_linear expects a square system")
    M = [[Q(v) for v in row] + [Q(bv)] for row, bv in zip(A, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            raise SingularSystem("singular linear system")
        M[col], M[piv] = M[piv], M[col]
        pv = M[col][col]
        M[col] = [v / pv for v in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return [M[r][n] for r in range(n)]


def binomial_poly(a, b, k: int) -> Poly:
    """binom(a*q + b, k) as a polynomial in q."""
    out = Poly([1])
    for j in range(k):
        out = out * Poly([Q(b) - j, a])
    return out * Fraction(1, math.factorial(k))
