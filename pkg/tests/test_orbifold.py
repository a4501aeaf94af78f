import json
import math
from fractions import Fraction

import pytest

from hkinvariants.errors import FixtureError, InvalidInput, IrrationalC2
from hkinvariants.orbifold import (
    DEFAULT_SALAMON,
    CyclicStratum,
    OrbifoldProfile,
    builtin_profile,
    builtin_profile_names,
    check_weights,
    chi_line_bundle,
    derive,
    derived_as_strings,
    euler_point_correction,
    k4_fixed_points,
    k4_solve,
    load_profile,
    profile_from_dict,
    rr_point_correction_weights,
    search_weights,
)
from hkinvariants.rrfujiki import rr_k3n

# name: (C(c4), C(td4), C(c2^2), C(c2) or its symbolic form, bound)
EXPECTED = {
    "nikulin_m_prime": (198, Fraction(17, 8), 576, 36, 16),
    "kummer_k_prime": (90, Fraction(15, 8), 480, 40, 8),
    "dual_kum2": (12, Fraction(1, 3), 84, 6, 7),
    "k4_prime": (45, Fraction(15, 16), 240, "10*sqrt(C1)", 8),
    "k3_prime": (100, None, 540, "26*sqrt(C1/3)", Fraction(135, 17)),
    "y_k3_z4": (Fraction(261, 2), None, 486, "8*sqrt(3*C1)", Fraction(54, 5)),
    "y_k3_z2z2": (162, None, 504, "8*sqrt(3*C1)", 14),
}


@pytest.mark.parametrize("name", sorted(EXPECTED))
def test_derive_examples(name):
    c4, td4, c2sq, c2, bound = EXPECTED[name]
    inv = derive(builtin_profile(name))
    assert inv.C_c4 == c4
    if td4 is not None:
        assert inv.C_td4 == td4
    assert inv.C_c2sq == c2sq
    if isinstance(c2, int):
        assert inv.C_c2 == c2
    else:
        assert inv.C_c2_surd.render("C1") == c2
    assert inv.bound.bound == bound


def test_mu_pairs():
    pairs = {"k4_prime": (240, 45), "k3_prime": (540, 100), "y_k3_z4": (486, Fraction(261, 2)),
             "y_k3_z2z2": (504, 162)}
    for name, (a, b) in pairs.items():
        assert derive(builtin_profile(name)).mu == Fraction(a) / b


@pytest.mark.parametrize("name,m", [("m3", 3), ("m7", 7), ("m11", 11)])
def test_cyclic_quotients_of_k3_2(name, m):
    inv = derive(builtin_profile(name))
    base = rr_k3n(2).poly()
    assert inv.rr.poly() == base.compose_linear(m) * Fraction(1, m)
    assert inv.bound.bound == 23


def test_dual_kummer_chi():
    inv = derive(builtin_profile("dual_kum2"))
    assert chi_line_bundle(inv, 6) == 6


def test_point_corrections():
    assert rr_point_correction_weights(2, (1, 1, 1, 1)) == Fraction(1, 32)
    assert rr_point_correction_weights(3, (1, 2, 1, 2)) == Fraction(2, 27)
    assert rr_point_correction_weights(4, (1, 3, 1, 3)) == Fraction(9, 64)
    assert euler_point_correction(2) == Fraction(1, 2)
    with pytest.raises(InvalidInput):
        euler_point_correction(1)


def _orbit(m, w):
    out = set()
    for k in range(1, m):
        if math.gcd(k, m) == 1:
            pairs = sorted(tuple(sorted((k * a % m, k * b % m))) for a, b in (w[:2], w[2:]))
            out.add(tuple(pairs))
    return out


def _key(w):
    return tuple(sorted(tuple(sorted(p)) for p in (w[:2], w[2:])))


@pytest.mark.parametrize("m,target,w", [(7, Fraction(2, 7), (1, 6, 2, 5)), (11, Fraction(6, 11), (1, 10, 3, 8))])
def test_weight_search_is_unique_up_to_galois(m, target, w):
    hits = search_weights(m, target)
    assert w in hits
    orbit = _orbit(m, w)
    assert {_key(h) for h in hits} <= orbit


def test_weight_validation():
    check_weights(7, (1, 6, 2, 5))
    for bad in ((1, 2, 3, 4), (1, 6, 2), (0, 7, 1, 6)):
        with pytest.raises(InvalidInput):
            check_weights(7, bad)
    with pytest.raises(InvalidInput):
        CyclicStratum(7, 3)  # no default weights
    with pytest.raises(InvalidInput):
        CyclicStratum(1, 3)


def test_salamon_residuals():
    for name in ("nikulin_m_prime", "kummer_k_prime", "k4_prime", "y_k3_z4", "y_k3_z2z2"):
        assert derive(builtin_profile(name)).salamon_residual == 0
    # no default for order 3
    assert derive(builtin_profile("k3_prime")).salamon_residual is None
    assert 3 not in DEFAULT_SALAMON


def test_k4_appendix():
    fp = k4_fixed_points()
    assert fp == {"triples": 35, "sigma2_fixed": 36, "sigma_invariant_triples": 7, "a4": 8}
    assert k4_solve() == {"R": 24, "a2": 30, "chi": 66}


def test_c2_irrational_with_c1():
    data = {"name": "x", "b2": 6, "chi_top": 66, "C1": Fraction(2),
            "strata": (CyclicStratum(2, 30), CyclicStratum(4, 8))}
    with pytest.raises(IrrationalC2):
        derive(OrbifoldProfile(**data))


def test_derived_invariant_assertion():
    inv = derive(builtin_profile("k4_prime"))
    assert 3 * inv.C_c2sq - inv.C_c4 == 720 * inv.C_td4


def test_profile_files(tmp_path):
    names = builtin_profile_names()
    assert len(names) == 10 and "m11" in names
    p = tmp_path / "prof.json"
    p.write_text(json.dumps({
        "name": "nik", "half_dim_n": 2, "b2": 16, "chi_top": 212, "fujiki_c1": "6",
        "singularities": [{"order": 2, "count": 28}],
    }))
    inv = derive(load_profile(p))
    assert derived_as_strings(inv)["b2_bound"] == "16"
    bad = dict(json.loads(p.read_text()), half_dim_n=3)
    with pytest.raises(FixtureError):
        profile_from_dict(bad)
    with pytest.raises(FixtureError):
        profile_from_dict({"name": "x"})
    p.write_text("{not json")
    with pytest.raises(FixtureError):
        load_profile(p)


def test_chi_top_too_small():
    with pytest.raises(InvalidInput):
        OrbifoldProfile("x", 3, 1, (CyclicStratum(2, 28),))
