from __future__ import annotations

from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st
from sympy import Matrix, Poly, symbols

from ffzeta.motive import (
    FrobeniusModule,
    K0Class,
    induce,
    k0_equal,
    k0_zfunction,
    twist,
    zfunction,
)
from ffzeta.reduction import LocalReductionData, component_module
from ffzeta.places import Place
from ffzeta.series import pmul, psubs_scale, ptrim

x = symbols("x")


@st.composite
def modules(draw, weight=None, max_dim=3):
    n = draw(st.integers(1, max_dim))
    row = st.lists(st.integers(-3, 3), min_size=n, max_size=n)
    rows = draw(st.lists(row, min_size=n, max_size=n))
    w = draw(st.integers(0, 3)) if weight is None else weight
    return FrobeniusModule.make(rows, w)


def sympy_inverse_charpoly(M):
    """det(1 - F t): the coefficients of det(x - F), leading first, read as ascending."""
    cp = Poly(Matrix([[int(v) for v in r] for r in M.frobenius]).charpoly(x), x).all_coeffs()
    return ptrim([Fraction(int(c)) for c in cp])


@given(modules())
def test_charpoly_against_sympy(M):
    assert ptrim(M.charpoly()) == sympy_inverse_charpoly(M)


@given(modules(weight=1), modules(weight=1))
def test_direct_sum_is_multiplicative(A, B):
    assert ptrim((A + B).charpoly()) == ptrim(pmul(A.charpoly(), B.charpoly()))
    assert zfunction(A + B) == zfunction(A) * zfunction(B)


@given(modules(), st.integers(2, 3))
def test_induction_substitutes_t_to_the_d(M, d):
    P = M.charpoly()
    expected = [Fraction(0)] * (d * (len(P) - 1) + 1)
    for i, c in enumerate(P):
        expected[d * i] = c
    assert ptrim(induce(M, d).charpoly()) == ptrim(expected)


@given(modules(), st.integers(1, 2))
def test_twist_scales_t(M, n):
    q = 5
    T = twist(M, n, q)
    assert T.weight == M.weight + 2 * n
    assert ptrim(T.charpoly()) == ptrim(psubs_scale(M.charpoly(), q**n))


@given(modules(weight=2), modules(weight=2), modules(weight=1))
def test_k0_relations(A, B, C):
    lhs = K0Class.of(A + B) + K0Class.of(C)
    rhs = K0Class.of(A) + K0Class.of(B) + K0Class.of(C)
    assert k0_equal(lhs, rhs)
    assert k0_zfunction(lhs - rhs).is_one()
    assert lhs.euler_characteristic() == A.dim + B.dim - C.dim


@given(st.lists(st.integers(-5, 5), min_size=1, max_size=4))
def test_companion_module_round_trip(tail):
    P = ptrim([1] + tail)
    assert FrobeniusModule.from_charpoly(P, 1).charpoly() == tuple(Fraction(c) for c in P)


def test_component_module_of_permutation():
    # nonsplit I4: components 1 and 3 swapped, 2 fixed
    d = LocalReductionData(Place("finite", (0, 1)), "I4", 1, 4, (0, 3, 2, 1), False, 2, 4, 5)
    D = component_module(d)
    assert D.dim == 3
    assert D.charpoly() == ptrim(pmul((1, -1), (1, 0, -1)))
    # at a degree-two place the module is induced
    d2 = LocalReductionData(Place("finite", (2, 0, 1)), "I4", 1, 4, (0, 3, 2, 1), False, 2, 4, 25)
    assert component_module(d2).charpoly() == ptrim(pmul((1, 0, -1), (1, 0, 0, 0, -1)))
