"""Brute-force reference computations, independent of the counting kernels."""

from __future__ import annotations

from ffzeta.fields import field_of_order
from ffzeta.places import embedding_table


def affine_count(F, A: int, B: int) -> int:
    """#{(x, y) in F^2 : y^2 = x^3 + A x + B} by listing all squares."""
    squares = {}
    for y in range(F.order):
        s = F.mul(y, y)
        squares[s] = squares.get(s, 0) + 1
    total = 0
    for x in range(F.order):
        rhs = F.add(F.add(F.pow(x, 3), F.mul(A, x)), B)
        total += squares.get(rhs, 0)
    return total


def projective_count(F, A: int, B: int) -> int:
    return affine_count(F, A, B) + 1


def _horner(F, coeffs, x):
    acc = 0
    for c in reversed(coeffs):
        acc = F.add(F.mul(acc, x), c)
    return acc


def _poly_coeffs(f, what):
    if f.den != (1,):
        raise ValueError(f"{what} must be a polynomial for the oracle")
    return list(f.num)


def _at_infinity(a, b):
    """Integral coefficients of s^{4k} a(1/s), s^{6k} b(1/s) with k minimal."""
    da, db = len(a) - 1, len(b) - 1
    k = max(-(-da // 4) if a else 0, -(-db // 6) if b else 0)
    A = [0] * (4 * k + 1)
    B = [0] * (6 * k + 1)
    for i, c in enumerate(a):
        A[4 * k - i] = c
    for i, c in enumerate(b):
        B[6 * k - i] = c
    return A, B


def weierstrass_counts(E, n: int) -> dict:
    """t -> #W_t(F_{q^n}) over P^1(F_{q^n}), W_t the minimal Weierstrass fibre.

    The given model is used at finite t (it must be integral and minimal
    there, which holds for the bundled curves); at infinity the model is
    rescaled.  Infinity is keyed by None.
    """
    q = E.q
    F = field_of_order(q**n)
    tab = embedding_table(q, n)
    a = [tab[c] for c in _poly_coeffs(E.a, "a")]
    b = [tab[c] for c in _poly_coeffs(E.b, "b")]
    out = {}
    for t in range(F.order):
        out[t] = projective_count(F, _horner(F, a, t), _horner(F, b, t))
    A, B = _at_infinity(a, b)
    out[None] = projective_count(F, A[0] if A else 0, B[0] if B else 0)
    return out


def log_l_coefficient(E, n: int) -> int:
    """n times the t^n coefficient of log L(E, t), by a double loop over (t, x).

    Good, multiplicative and additive fibres all satisfy
    a = Q + 1 - #W(F_Q) for the minimal Weierstrass fibre W, so the sum runs
    over every point of P^1 uniformly.
    """
    Q = E.q**n
    return sum(Q + 1 - N for N in weierstrass_counts(E, n).values())
