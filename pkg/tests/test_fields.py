from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ffzeta.fields import TABLE_LIMIT, field_of_order, is_prime, make_field, prime_power
from ffzeta.places import embedding_table

FIELDS = [(5, 1), (7, 1), (5, 2), (7, 2), (5, 3), (11, 2), (3, 4)]


def naive_mul(F, a, b):
    """Schoolbook product of coefficient vectors reduced by the modulus."""
    p, n, mod = F.p, F.n, F.modulus
    x, y = F.coeffs(a), F.coeffs(b)
    prod = [0] * (2 * n - 1)
    for i, u in enumerate(x):
        for j, v in enumerate(y):
            prod[i + j] = (prod[i + j] + u * v) % p
    for k in range(len(prod) - 1, n - 1, -1):
        c = prod[k]
        if c:
            for i in range(n + 1):
                prod[k - n + i] = (prod[k - n + i] - c * mod[i]) % p
    return F.encode(prod[:n])


def elements(draw, F):
    return draw(st.integers(0, F.order - 1))


@st.composite
def field_and_elems(draw, k=3):
    p, n = draw(st.sampled_from(FIELDS))
    F = make_field(p, n)
    return F, [elements(draw, F) for _ in range(k)]


def test_prime_power_and_primality():
    assert prime_power(125) == (5, 3)
    assert prime_power(7) == (7, 1)
    assert [n for n in range(2, 30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    with pytest.raises(ValueError):
        prime_power(12)


@pytest.mark.parametrize("p,n", FIELDS)
def test_modulus_is_irreducible_and_generator_primitive(p, n):
    F = make_field(p, n)
    assert F.order == p**n
    # the table generator has full multiplicative order
    g = int(F.tables.exp[1])
    order = F.order - 1
    seen = {F.pow(g, k) for k in range(order)}
    assert len(seen) == order


@given(field_and_elems())
def test_ring_axioms_against_schoolbook(data):
    F, (a, b, c) = data
    assert F.mul(a, b) == naive_mul(F, a, b)
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.add(a, F.neg(a)) == 0
    if a:
        assert F.mul(a, F.inv(a)) == 1


@given(field_and_elems())
def test_frobenius_is_a_ring_homomorphism(data):
    F, (a, b, _) = data
    assert F.frob(F.add(a, b)) == F.add(F.frob(a), F.frob(b))
    assert F.frob(F.mul(a, b)) == F.mul(F.frob(a), F.frob(b))
    x = a
    for _ in range(F.n):
        x = F.frob(x)
    assert x == a


@given(field_and_elems())
def test_quadratic_character(data):
    F, (a, b, _) = data
    assert F.chi(F.mul(a, b)) == F.chi(a) * F.chi(b)
    if a:
        euler = F.pow(a, (F.order - 1) // 2)
        assert (euler == 1) == (F.chi(a) == 1)
    r = F.sqrt(a)
    if F.chi(a) >= 0:
        assert r is not None and F.mul(r, r) == a
    else:
        assert r is None


def test_character_sums_to_zero():
    for p, n in FIELDS:
        F = make_field(p, n)
        assert sum(F.chi(a) for a in range(F.order)) == 0


def test_element_wrapper():
    F = make_field(5, 2)
    x = F([1, 2])
    y = F(3)
    assert ((x + y) * x - x * x - y * x).code == 0
    assert (x / x).code == 1
    assert (x ** (F.order - 1)).code == 1


@pytest.mark.parametrize("q,d", [(5, 2), (5, 3), (7, 2), (25, 2)])
def test_embedding_is_a_field_homomorphism(q, d):
    small = field_of_order(q)
    big = field_of_order(q**d)
    tab = embedding_table(q, d)
    assert len(set(tab)) == q
    for a in range(q):
        assert big.pow(tab[a], q) == tab[a]
        for b in range(q):
            assert tab[small.add(a, b)] == big.add(tab[a], tab[b])
            assert tab[small.mul(a, b)] == big.mul(tab[a], tab[b])


def test_large_field_without_tables():
    F = make_field(2**31 - 1)
    assert not F.has_tables and F.order > TABLE_LIMIT
    a = 123456789
    assert F.mul(a, F.inv(a)) == 1
    assert F.chi(F.mul(a, a)) == 1
