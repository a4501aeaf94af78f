"""Symplectic fourfold orbifolds with isolated cyclic quotient singularities.

Local corrections to Gauss-Bonnet and Riemann-Roch at a point with stabiliser
Z/m acting with weights (w_1..w_4):

    euler:  1 - 1/m
    rr:     (1/m) sum_{j=1}^{m-1} 1 / prod_i (1 - zeta^(j w_i))

From chi_top, chi(O) and the singularity counts this derives C(c4), C(td4),
C(c2^2) and, given C(1), C(c2) through the Hitchin-Sawon relation.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path

import jsonschema

from .errors import FixtureError, InvalidInput, IrrationalC2
from .exactcore import CycloElem, Q, Surd, cyclo_det_inverse, format_rational, rational_part, solve_linear
from .rrfujiki import (
    C2,
    C2SQ,
    C4,
    ONE,
    BoundReport,
    FujikiTable,
    RRPoly,
    b2_bound_from_coeffs,
    b2_bound_from_mu,
)

DEFAULT_WEIGHTS = {2: (1, 1, 1, 1), 3: (1, 2, 1, 2), 4: (1, 3, 1, 3)}
DEFAULT_SALAMON = {2: Fraction(-1), 4: Fraction(-3)}


@dataclass(frozen=True)
class CyclicStratum:
    order: int
    count: int
    weights: tuple = ()

    def __post_init__(self):
        m = self.order
        if m < 2:
            raise InvalidInput(f"singularity order must be >= 2, got {m}")
        if self.count < 1:
            raise InvalidInput("singularity count must be >= 1")
        w = tuple(self.weights) or DEFAULT_WEIGHTS.get(m)
        if w is None:
            raise InvalidInput(f"no default local weights for order {m}; give them explicitly")
        object.__setattr__(self, "weights", tuple(w))
        check_weights(m, self.weights)


def check_weights(m: int, weights) -> None:
    """Four weights in [1, m-1] forming two inverse pairs {w, m - w}."""
    weights = tuple(weights)
    if len(weights) != 4:
        raise InvalidInput("a fourfold stratum needs exactly 4 weights")
    if any(not 1 <= w <= m - 1 for w in weights):
        raise InvalidInput(f"weights must lie in 1..{m - 1}")
    rest = list(weights)
    while rest:
        w = rest.pop(0)
        if (m - w) % m not in rest:
            raise InvalidInput(f"weights {weights} are not a symplectic set mod {m}")
        rest.remove((m - w) % m)


@dataclass(frozen=True)
class OrbifoldProfile:
    name: str
    b2: int
    chi_top: Fraction
    strata: tuple
    C1: Fraction | None = None
    chi_structure: Fraction = Fraction(3)
    salamon_contrib: dict = field(default_factory=lambda: dict(DEFAULT_SALAMON))
    n: int = 2

    def __post_init__(self):
        if self.n != 2:
            raise InvalidInput("orbifold derivations are implemented for n = 2 only")
        object.__setattr__(self, "chi_top", Q(self.chi_top))
        object.__setattr__(self, "chi_structure", Q(self.chi_structure))
        if self.C1 is not None:
            object.__setattr__(self, "C1", Q(self.C1))
            if self.C1 <= 0:
                raise InvalidInput("C(1) must be positive")
        object.__setattr__(self, "strata", tuple(self.strata))
        if self.chi_top < sum(s.count * euler_point_correction(s.order) for s in self.strata):
            raise InvalidInput("chi_top is smaller than the singular contribution")


@dataclass(frozen=True)
class DerivedInvariants:
    C_c4: Fraction
    C_td4: Fraction
    C_c2sq: Fraction
    c2_squared_over_C1: Fraction
    C_c2: Fraction | None
    C_c2_surd: Surd
    rr: RRPoly | None
    bound: BoundReport
    chi_structure: Fraction
    salamon_residual: Fraction | None = None

    def __post_init__(self):
        if 3 * self.C_c2sq - self.C_c4 != 720 * self.C_td4:
            raise AssertionError("3 C(c2^2) - C(c4) != 720 C(td4)")

    @property
    def mu(self):
        return self.bound.mu

    def table(self) -> FujikiTable | None:
        if self.C_c2 is None or self.rr is None:
            return None
        return FujikiTable(2, {ONE: 24 * self.rr.A(0), C2: self.C_c2, C2SQ: self.C_c2sq, C4: self.C_c4})


@lru_cache(maxsize=None)
def rr_point_correction_weights(m: int, weights: tuple) -> Fraction:
    total = CycloElem.const(m, 0)
    for j in range(1, m):
        total = total + cyclo_det_inverse(m, weights, j)
    return rational_part(total) / m


def rr_point_correction(s: CyclicStratum) -> Fraction:
    """Riemann-Roch contribution of one point of the stratum."""
    return rr_point_correction_weights(s.order, s.weights)


def euler_point_correction(m: int) -> Fraction:
    if m < 2:
        raise InvalidInput("singularity order must be >= 2")
    return 1 - Fraction(1, m)


def symplectic_weight_sets(m: int):
    """All (a, m-a, b, m-b) with 1 <= a <= b <= m/2."""
    for a in range(1, m // 2 + 1):
        for b in range(a, m // 2 + 1):
            yield (a, m - a, b, m - b)


def search_weights(m: int, target) -> list[tuple]:
    """Symplectic weight sets whose point correction equals ``target``."""
    target = Q(target)
    hits = []
    for w in symplectic_weight_sets(m):
        try:
            if rr_point_correction_weights(m, w) == target:
                hits.append(w)
        except ZeroDivisionError:
            continue
    return hits


def derive(profile: OrbifoldProfile) -> DerivedInvariants:
    """Degree-4 Fujiki constants, RR polynomial and b2 bound of a fourfold orbifold."""
    c4 = profile.chi_top - sum(s.count * euler_point_correction(s.order) for s in profile.strata)
    td4 = profile.chi_structure - sum(s.count * rr_point_correction(s) for s in profile.strata)
    c2sq = (720 * td4 + c4) / 3
    # Hitchin-Sawon at n = 2: 7 C(c2^2) - 4 C(c4) = 15 C(c2)^2 / C(1)
    k = (7 * c2sq - 4 * c4) / 15
    if k <= 0:
        raise IrrationalC2(f"C(c2)^2/C(1) = {format_rational(k)} is not positive")
    surd = Surd.sqrt(k)
    c2 = rr = None
    if profile.C1 is not None:
        root = Surd.sqrt(k * profile.C1)
        if not root.is_rational():
            raise IrrationalC2(f"C(c2) = sqrt({format_rational(k * profile.C1)}) is irrational")
        c2 = root.coeff
        rr = RRPoly(2, (profile.C1 / 24, c2 / 24, td4), smooth=False)
    mu = c2sq / c4 if c4 else None
    if rr is not None:
        bound = b2_bound_from_coeffs(2, *rr.coeffs, mu=mu)
    elif mu is not None:
        bound = b2_bound_from_mu(2, mu)
    else:
        bound = BoundReport(False)
    salamon = None
    if all(s.order in profile.salamon_contrib for s in profile.strata):
        expected = 48 + 12 * profile.b2 + sum(
            s.count * Q(profile.salamon_contrib[s.order]) for s in profile.strata
        )
        salamon = profile.chi_top - expected
    return DerivedInvariants(c4, td4, c2sq, k, c2, surd, rr, bound, profile.chi_structure, salamon)


def chi_line_bundle(inv: DerivedInvariants, q) -> Fraction:
    """chi(X, L) = RR_X(q(L)) + (chi(O) - C(td4))."""
    if inv.rr is None:
        raise InvalidInput("chi_line_bundle needs C(1) in the profile")
    return inv.rr(q) + inv.chi_structure - inv.C_td4


# ---------------------------------------------------------------------------
# K4' singularity count


def _two_torsion():
    # E[2] = F_2^2, T = E x E so T[2] = F_2^4; encode (a, b) with a, b in E[2]
    pts = [(x, y) for x in range(4) for y in range(4)]
    return pts


def _add(p, r):
    return (p[0] ^ r[0], p[1] ^ r[1])


def k4_triples():
    """Unordered triples {x, y, x + y} of distinct nonzero 2-torsion points of T."""
    zero = (0, 0)
    nonzero = [p for p in _two_torsion() if p != zero]
    out = set()
    for x, y in itertools.combinations(nonzero, 2):
        z = _add(x, y)
        if z != zero and z not in (x, y):
            out.add(frozenset((x, y, z)))
    return out


def k4_fixed_points() -> dict:
    """Fixed points of sigma^2 and of sigma = (a, b) -> (-b, a) on the 36 points."""
    triples = k4_triples()

    def sigma(p):
        a, b = p
        return (b, a)  # -b = b on 2-torsion

    invariant = [t for t in triples if frozenset(sigma(p) for p in t) == t]
    # the vertex supported at the origin is also fixed by both
    return {
        "triples": len(triples),
        "sigma2_fixed": len(triples) + 1,
        "sigma_invariant_triples": len(invariant),
        "a4": len(invariant) + 1,
    }


def k4_solve(a4: int = 8, sigma2_fixed: int = 36, chi_cover: int = 108, b2: int = 6,
             salamon=None) -> dict:
    """Solve for the ramification count R, a2 and chi_top of the Z/2 quotient.

    Equations: 2 chi - R = chi_cover;  a2 = (sigma2_fixed - a4)/2 + (R - a4);
    chi = 48 + 12 b2 + s_2 a2 + s_4 a4.
    """
    s = dict(DEFAULT_SALAMON if salamon is None else salamon)
    s2, s4 = Q(s[2]), Q(s[4])
    # unknowns (R, a2, chi)
    A = [
        [-1, 0, 2],
        [-1, 1, 0],
        [0, -s2, 1],
    ]
    b = [
        chi_cover,
        Fraction(sigma2_fixed - a4, 2) - a4,
        48 + 12 * b2 + s4 * a4,
    ]
    R, a2, chi = solve_linear(A, b)
    return {"R": R, "a2": a2, "chi": chi}


# ---------------------------------------------------------------------------
# Profile files

PROFILE_SCHEMA = {
    "type": "object",
    "required": ["name", "half_dim_n", "b2", "chi_top", "singularities"],
    "properties": {
        "name": {"type": "string"},
        "half_dim_n": {"const": 2},
        "b2": {"type": "integer", "minimum": 1},
        "chi_top": {"type": ["string", "integer"]},
        "fujiki_c1": {"type": ["string", "integer", "null"]},
        "chi_structure": {"type": ["string", "integer"]},
        "singularities": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["order", "count"],
                "properties": {
                    "order": {"type": "integer", "minimum": 2},
                    "count": {"type": "integer", "minimum": 1},
                    "weights": {
                        "type": "array",
                        "items": {"type": "integer", "minimum": 1},
                        "minItems": 4,
                        "maxItems": 4,
                    },
                },
            },
        },
        "salamon_contrib": {
            "type": "object",
            "patternProperties": {"^[0-9]+$": {"type": ["string", "integer"]}},
            "additionalProperties": False,
        },
        "notes": {"type": "string"},
    },
    "additionalProperties": False,
}


@lru_cache(maxsize=None)
def _validator():
    return jsonschema.Draft202012Validator(PROFILE_SCHEMA)


def profile_from_dict(data: dict) -> OrbifoldProfile:
    try:
        _validator().validate(data)
    except jsonschema.ValidationError as exc:
        raise FixtureError(f"profile {data.get('name', '?')!r}: {exc.message}") from None
    strata = [
        CyclicStratum(s["order"], s["count"], tuple(s.get("weights", ())))
        for s in data["singularities"]
    ]
    kw = {}
    if "salamon_contrib" in data:
        kw["salamon_contrib"] = {int(k): Q(v) for k, v in data["salamon_contrib"].items()}
    if "chi_structure" in data:
        kw["chi_structure"] = Q(data["chi_structure"])
    c1 = data.get("fujiki_c1")
    return OrbifoldProfile(
        name=data["name"],
        b2=data["b2"],
        chi_top=Q(data["chi_top"]),
        strata=tuple(strata),
        C1=None if c1 is None else Q(c1),
        **kw,
    )


def load_profile(path) -> OrbifoldProfile:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise FixtureError(f"cannot read profile {path}: {exc}") from None
    return profile_from_dict(data)


def builtin_profile_names() -> list[str]:
    d = resources.files("hkinvariants") / "data" / "profiles"
    return sorted(p.name[:-5] for p in d.iterdir() if p.name.endswith(".json"))


def builtin_profile_data(name: str, data_dir=None) -> dict:
    if data_dir is not None:
        path = Path(data_dir) / "profiles" / f"{name}.json"
        text = path.read_text(encoding="utf-8")
    else:
        text = (resources.files("hkinvariants") / "data" / "profiles" / f"{name}.json").read_text(
            encoding="utf-8"
        )
    return json.loads(text)


def builtin_profile(name: str, data_dir=None) -> OrbifoldProfile:
    return profile_from_dict(builtin_profile_data(name, data_dir))


def derived_as_strings(inv: DerivedInvariants) -> dict:
    out = {
        "C(c4)": format_rational(inv.C_c4),
        "C(td4)": format_rational(inv.C_td4),
        "C(c2^2)": format_rational(inv.C_c2sq),
        "C(c2)^2/C(1)": format_rational(inv.c2_squared_over_C1),
        "C(c2)": format_rational(inv.C_c2) if inv.C_c2 is not None else inv.C_c2_surd.render("C1"),
        "bound_condition": str(inv.bound.condition_holds).lower(),
    }
    if inv.bound.bound is not None:
        out["b2_bound"] = format_rational(inv.bound.bound)
    if inv.mu is not None:
        out["mu"] = format_rational(inv.mu)
    if inv.rr is not None:
        for i, a in enumerate(inv.rr.coeffs):
            out[f"A{i}"] = format_rational(a)
    if inv.salamon_residual is not None:
        out["salamon_residual"] = format_rational(inv.salamon_residual)
    return out
