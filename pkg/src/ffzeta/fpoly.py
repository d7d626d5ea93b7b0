"""Univariate polynomials over a finite field, as tuples of element codes.

Coefficients are little-endian and trimmed (no trailing zeros); the zero
polynomial is ``()``.  All functions take the coefficient field first.
"""

from __future__ import annotations

import random
from typing import Sequence

import numpy as np

from .fields import FieldDesc, prime_factors

Poly = tuple[int, ...]


def trim(c: Sequence[int]) -> Poly:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def deg(f: Poly) -> int:
    return len(f) - 1


def const(F: FieldDesc, c: int) -> Poly:
    return trim([c])


X: Poly = (0, 1)


def add(F: FieldDesc, f: Poly, g: Poly) -> Poly:
    if len(f) < len(g):
        f, g = g, f
    out = list(f)
    for i, c in enumerate(g):
        out[i] = F.add(out[i], c)
    return trim(out)


def neg(F: FieldDesc, f: Poly) -> Poly:
    return tuple(F.neg(c) for c in f)


def sub(F: FieldDesc, f: Poly, g: Poly) -> Poly:
    return add(F, f, neg(F, g))


def scale(F: FieldDesc, f: Poly, c: int) -> Poly:
    if c == 0:
        return ()
    return trim([F.mul(x, c) for x in f])


def mul(F: FieldDesc, f: Poly, g: Poly) -> Poly:
    if not f or not g:
        return ()
    out = [0] * (len(f) + len(g) - 1)
    for i, x in enumerate(f):
        if x:
            for j, y in enumerate(g):
                if y:
                    out[i + j] = F.add(out[i + j], F.mul(x, y))
    return trim(out)


def power(F: FieldDesc, f: Poly, e: int) -> Poly:
    result: Poly = (1,)
    while e:
        if e & 1:
            result = mul(F, result, f)
        f = mul(F, f, f)
        e >>= 1
    return result


def divmod_(F: FieldDesc, f: Poly, g: Poly) -> tuple[Poly, Poly]:
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(f)
    inv = F.inv(g[-1])
    q = [0] * max(len(f) - len(g) + 1, 0)
    dg = len(g) - 1
    while len(r) - 1 >= dg and r:
        c = F.mul(r[-1], inv)
        shift = len(r) - 1 - dg
        q[shift] = c
        for i, y in enumerate(g):
            if y:
                r[shift + i] = F.sub(r[shift + i], F.mul(c, y))
        r = list(trim(r))
    return trim(q), trim(r)


def mod(F: FieldDesc, f: Poly, g: Poly) -> Poly:
    return divmod_(F, f, g)[1]


def monic(F: FieldDesc, f: Poly) -> Poly:
    if not f:
        return f
    return scale(F, f, F.inv(f[-1]))


def gcd(F: FieldDesc, f: Poly, g: Poly) -> Poly:
    while g:
        f, g = g, mod(F, f, g)
    return monic(F, f)


def powmod(F: FieldDesc, f: Poly, e: int, m: Poly) -> Poly:
    result: Poly = (1,)
    f = mod(F, f, m)
    while e:
        if e & 1:
            result = mod(F, mul(F, result, f), m)
        f = mod(F, mul(F, f, f), m)
        e >>= 1
    return mod(F, result, m)


def derivative(F: FieldDesc, f: Poly) -> Poly:
    out = []
    for i in range(1, len(f)):
        c = f[i]
        k = i % F.p
        out.append(F.mul(c, k) if k else 0)
    return trim(out)


def evaluate(F: FieldDesc, f: Poly, x: int) -> int:
    acc = 0
    for c in reversed(f):
        acc = F.add(F.mul(acc, x), c)
    return acc


def evaluate_array(F: FieldDesc, f: Sequence[int], xs: np.ndarray) -> np.ndarray:
    """Horner evaluation at many points using the field tables."""
    T = F.tables
    acc = np.zeros_like(xs)
    for c in reversed(list(f)):
        acc = T.add_codes(T.mul_codes(acc, xs), np.int64(c))
    return acc


def is_irreducible(F: FieldDesc, f: Poly) -> bool:
    """Rabin's irreducibility test over F = F_q."""
    n = deg(f)
    if n < 1:
        return False
    if n == 1:
        return True
    f = monic(F, f)
    q = F.order
    xq = powmod(F, X, q, f)
    cur = xq
    powers = {1: xq}
    for k in range(2, n + 1):
        cur = powmod(F, cur, q, f)
        powers[k] = cur
    if sub(F, powers[n], X):
        return False
    for r in prime_factors(n):
        if deg(gcd(F, f, sub(F, powers[n // r], X))) != 0:
            return False
    return True


def pth_root(F: FieldDesc, f: Poly) -> Poly:
    """g with g(x)**p == f(x), for f with zero derivative."""
    p = F.p
    inv_frob_exp = F.order // p  # x -> x**(q/p) inverts x -> x**p
    return trim([F.pow(f[i], inv_frob_exp) for i in range(0, len(f), p)])


def squarefree_decomposition(F: FieldDesc, f: Poly) -> list[tuple[Poly, int]]:
    """Pairs (g, e) with f = lc * prod g**e, g squarefree and coprime."""
    f = monic(F, f)
    if deg(f) < 1:
        return []
    out: list[tuple[Poly, int]] = []
    df = derivative(F, f)
    if not df:
        return [(g, e * F.p) for g, e in squarefree_decomposition(F, pth_root(F, f))]
    c = gcd(F, f, df)
    w = divmod_(F, f, c)[0]
    i = 1
    while deg(w) > 0:
        y = gcd(F, w, c)
        z = divmod_(F, w, y)[0]
        if deg(z) > 0:
            out.append((monic(F, z), i))
        i += 1
        w = y
        c = divmod_(F, c, y)[0]
    if deg(c) > 0:
        out.extend((g, e * F.p) for g, e in squarefree_decomposition(F, pth_root(F, c)))
    return out


def distinct_degree(F: FieldDesc, f: Poly) -> list[tuple[Poly, int]]:
    """Split a squarefree monic f into products of irreducibles of equal degree."""
    out = []
    q = F.order
    h = X
    d = 0
    f = monic(F, f)
    while deg(f) >= 2 * (d + 1):
        d += 1
        h = powmod(F, h, q, f)
        g = gcd(F, f, sub(F, h, X))
        if deg(g) > 0:
            out.append((g, d))
            f = divmod_(F, f, g)[0]
            h = mod(F, h, f)
    if deg(f) > 0:
        out.append((f, deg(f)))
    return out


def equal_degree(F: FieldDesc, f: Poly, d: int, rng: random.Random | None = None) -> list[Poly]:
    """Cantor-Zassenhaus splitting (odd q) of a product of degree-d irreducibles."""
    if F.p == 2:
        raise ValueError("equal-degree splitting implemented for odd characteristic")
    f = monic(F, f)
    if deg(f) == d:
        return [f]
    rng = rng or random.Random(0)
    q = F.order
    e = (q**d - 1) // 2
    while True:
        a = trim([rng.randrange(q) for _ in range(deg(f))])
        if deg(a) < 1:
            continue
        g = gcd(F, f, a)
        if 0 < deg(g) < deg(f):
            break
        b = sub(F, powmod(F, a, e, f), (1,))
        g = gcd(F, f, b)
        if 0 < deg(g) < deg(f):
            break
    h = divmod_(F, f, g)[0]
    return equal_degree(F, g, d, rng) + equal_degree(F, h, d, rng)


def _code_key(f: Poly) -> tuple:
    return (len(f), tuple(reversed(f)))


def factor(F: FieldDesc, f: Poly) -> list[tuple[Poly, int]]:
    """Monic irreducible factors with multiplicity, sorted by (degree, coefficients)."""
    out = []
    for g, e in squarefree_decomposition(F, f):
        for h, d in distinct_degree(F, g):
            for irr in equal_degree(F, h, d):
                out.append((irr, e))
    merged: dict[Poly, int] = {}
    for g, e in out:
        merged[g] = merged.get(g, 0) + e
    return sorted(merged.items(), key=lambda ge: _code_key(ge[0]))


def roots(F: FieldDesc, f: Poly) -> list[int]:
    """All roots in F of a polynomial with coefficients in F, sorted by code."""
    if not f:
        raise ValueError("zero polynomial")
    f = monic(F, f)
    if deg(f) < 1:
        return []
    if F.p == 2:
        return sorted(x for x in range(F.order) if evaluate(F, f, x) == 0)
    g = gcd(F, f, sub(F, powmod(F, X, F.order, f), X))
    out = []
    for h, _ in squarefree_decomposition(F, g):
        for lin in equal_degree(F, h, 1):
            out.append(F.neg(lin[0]))
    return sorted(set(out))


def sort_key(f: Poly) -> tuple:
    """Order by degree, then lexicographically from the top coefficient."""
    return _code_key(f)
