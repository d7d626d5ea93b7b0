from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ffzeta import fpoly
from ffzeta.places import (
    PLACE_AT_INFINITY,
    Place,
    RatFunc,
    lift_residue,
    local_valuation,
    necklace_count,
    places_up_to,
    residue,
)

Q = 5


def ratfuncs(q=Q, max_deg=4):
    coeff = st.lists(st.integers(0, q - 1), min_size=1, max_size=max_deg + 1)
    nonzero = coeff.filter(lambda c: any(c))
    return st.tuples(nonzero, nonzero).map(lambda nd: RatFunc.make(q, nd[0], nd[1]))


def support(f: RatFunc) -> list[Place]:
    F = f.F
    out = {PLACE_AT_INFINITY}
    for poly in (f.num, f.den):
        if fpoly.deg(poly) >= 1:
            out.update(Place("finite", g) for g, _ in fpoly.factor(F, poly))
    return list(out)


@pytest.mark.parametrize("q", [5, 7, 25])
def test_necklace_counts_match_enumeration(q):
    d = 2 if q < 25 else 1
    found = places_up_to(q, d)
    assert found[-1] == PLACE_AT_INFINITY
    for e in range(1, d + 1):
        assert sum(1 for v in found if v.degree == e and not v.is_infinite) == necklace_count(q, e)
    # q^n = sum_{e | n} e * N_e
    for n in range(1, 7):
        assert sum(e * necklace_count(q, e) for e in range(1, n + 1) if n % e == 0) == q**n


@given(ratfuncs())
def test_product_formula(f):
    assert sum(v.degree * local_valuation(f, v) for v in support(f)) == 0


@given(ratfuncs(), ratfuncs())
def test_valuation_is_additive(f, g):
    for v in set(support(f)) | set(support(g)):
        assert local_valuation(f * g, v) == local_valuation(f, v) + local_valuation(g, v)


@given(ratfuncs(), ratfuncs(), ratfuncs())
def test_rational_function_field_axioms(f, g, h):
    assert (f + g) * h == f * h + g * h
    assert (f / g) * g == f
    assert f - f == RatFunc.make(Q, ())
    assert f.subs_shift(2).subs_shift(3) == f


def test_residue_at_degree_two_place_is_a_homomorphism():
    v = next(v for v in places_up_to(Q, 2) if v.degree == 2)
    f = RatFunc.make(Q, (1, 2, 3))
    g = RatFunc.make(Q, (4, 0, 1, 1))
    assert residue(f * g, v) == residue(f, v) * residue(g, v)
    assert residue(f + g, v) == residue(f, v) + residue(g, v)
    assert residue(RatFunc.make(Q, v.poly), v).code == 0
    for code in range(Q * Q):
        assert residue(lift_residue(Q, v, code), v).code == code


def test_place_json_and_labels():
    v = Place("finite", (2, 0, 1))
    assert Place.from_json(v.to_json()) == v
    assert v.norm(5) == 25
    assert PLACE_AT_INFINITY.label() == "inf"
    with pytest.raises(ValueError):
        Place("finite", (2, 3))
