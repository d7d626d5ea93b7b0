from __future__ import annotations

import random
from collections import Counter

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from ffzeta.fields import field_of_order
from ffzeta.places import PLACE_AT_INFINITY, RatFunc, leading_residue, local_valuation
from ffzeta.reduction import (
    CurveOverK,
    SingularCurve,
    UnsupportedCharacteristic,
    bad_places,
    component_module,
    conductor_degree,
    expected_component_count,
    minimal_disc_degree,
    parse_kodaira,
)

from oracles import projective_count

PHI = {"II": 1, "II*": 1, "III": 2, "III*": 2, "IV": 3, "IV*": 3}


@st.composite
def curves(draw, q=5, deg_a=4, deg_b=6):
    a = draw(st.lists(st.integers(0, q - 1), min_size=1, max_size=deg_a + 1))
    b = draw(st.lists(st.integers(0, q - 1), min_size=1, max_size=deg_b + 1))
    try:
        return CurveOverK.make(q, a, b)
    except SingularCurve:
        assume(False)


def signature(E):
    return Counter((d.kodaira, d.place.degree, d.conductor_exp, d.split) for d in bad_places(E))


def invert(E):
    """The curve with t replaced by 1/t, rescaled to polynomial coefficients."""
    q = E.q
    a, b = list(E.a.num), list(E.b.num)
    k = max(-(-(len(a) - 1) // 4), -(-(len(b) - 1) // 6), 0)
    A = [0] * (4 * k + 1)
    B = [0] * (6 * k + 1)
    for i, c in enumerate(a):
        A[4 * k - i] = c
    for i, c in enumerate(b):
        B[6 * k - i] = c
    return CurveOverK.make(q, A, B)


def twist_at(E, c):
    """Quadratic twist by (t - c)."""
    q = E.q
    lin = RatFunc.make(q, ((-c) % E.p, 1))
    return CurveOverK(q, E.a * lin**2, E.b * lin**3)


@settings(max_examples=40)
@given(curves())
def test_local_invariants(E):
    total = 0
    for d in bad_places(E):
        kind, n = parse_kodaira(d.kodaira)
        m = d.component_count_geom
        assert m == expected_component_count(d.kodaira)
        # Ogg's formula in the tame case
        assert d.disc_val == d.conductor_exp + m - 1
        assert d.conductor_exp == (1 if kind == "In" else 2)
        perm = d.component_frobenius
        assert sorted(perm) == list(range(m)) and perm[0] == 0
        if kind == "In":
            assert d.phi_order == (n if d.split else (1 if n % 2 else 2))
        elif d.kodaira in PHI and d.split is not False:
            assert d.phi_order == PHI[d.kodaira]
        assert component_module(d).dim == (m - 1) * d.place.degree
        total += d.disc_val * d.place.degree
    assert total == minimal_disc_degree(E)
    # Noether: e(S) = 12 chi(O_S)
    assert total % 12 == 0


@settings(max_examples=25)
@given(curves(), st.integers(1, 4))
def test_shift_invariance(E, c):
    assert signature(E.shift(c)) == signature(E)
    assert conductor_degree(E.shift(c)) == conductor_degree(E)


@settings(max_examples=25)
@given(curves())
def test_inversion_invariance(E):
    assert signature(invert(E)) == signature(E)


@settings(max_examples=40)
@given(curves())
def test_multiplicative_split_matches_nodal_count(E):
    q = E.q
    F = field_of_order(q)
    for d in bad_places(E):
        if d.conductor_exp != 1 or d.place.degree != 1 or d.place.is_infinite:
            continue
        c = (-d.place.poly[0]) % q
        v = d.place
        # at a multiplicative place ord a = 0, so the given model is minimal
        assert local_valuation(E.a, v) == 0
        N = projective_count(F, E.a.evaluate(c), E.b.evaluate(c))
        assert N == (q if d.split else q + 2)


def even_instar_cases(n_cases=12, seed=5):
    """Twists by (t - c) of random curves with an even I_n fibre at c."""
    rng = random.Random(seed)
    out = []
    for _ in range(4000):
        a = [rng.randrange(5) for _ in range(3)]
        b = [rng.randrange(5) for _ in range(4)]
        try:
            E0 = CurveOverK.make(5, a, b)
        except SingularCurve:
            continue
        for d in bad_places(E0):
            kind, n = parse_kodaira(d.kodaira)
            if kind == "In" and n % 2 == 0 and d.place.degree == 1 and not d.place.is_infinite:
                out.append((E0, (-d.place.poly[0]) % 5))
                break
        if len(out) >= n_cases:
            break
    return out


@pytest.mark.parametrize("E0,c", even_instar_cases())
def test_even_instar_split_rule(E0, c):
    E = twist_at(E0, c)
    d = next(d for d in bad_places(E) if not d.place.is_infinite and d.place.poly == (-c % 5, 1))
    kind, n = parse_kodaira(d.kodaira)
    assert kind == "In*" and n % 2 == 0
    u = leading_residue(-E.discriminant, d.place, 6 + n).code
    assert d.split == (field_of_order(5).chi(u) == 1)


def test_legendre_fibres():
    E = CurveOverK.make(5, [3, 2, 3], [4, 4, 4, 4])
    tags = [(d.place.label(), d.kodaira) for d in bad_places(E)]
    assert [t for _, t in tags] == ["I2", "I2", "I2*"]
    assert bad_places(E)[-1].place == PLACE_AT_INFINITY
    assert minimal_disc_degree(E) == 12 and conductor_degree(E) == 4


def test_unsupported_inputs():
    with pytest.raises(UnsupportedCharacteristic):
        CurveOverK.make(9, [1], [0, 1])
    with pytest.raises(SingularCurve):
        CurveOverK.make(5, [0], [0])
