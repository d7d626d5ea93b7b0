"""Places of K = F_q(t), rational functions in t, valuations and residues.

The base curve is P^1: finite places are monic irreducible polynomials in t,
plus the place at infinity.  The residue field at a place of degree d is
``make_field(p, m*d)`` (q = p^m), reached through an explicit embedding of
F_q followed by the smallest root of the place polynomial.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Sequence

from . import fpoly
from .fields import FieldDesc, FieldElem, field_of_order, make_field, prime_power

INFINITY = "infinity"
FINITE = "finite"


@dataclass(frozen=True, order=False)
class Place:
    kind: str
    poly: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in (FINITE, INFINITY):
            raise ValueError(f"bad place kind {self.kind!r}")
        if self.kind == FINITE and (len(self.poly) < 2 or self.poly[-1] != 1):
            raise ValueError("finite places need a monic polynomial of positive degree")

    @property
    def degree(self) -> int:
        return 1 if self.kind == INFINITY else len(self.poly) - 1

    @property
    def is_infinite(self) -> bool:
        return self.kind == INFINITY

    def norm(self, q: int) -> int:
        return q**self.degree

    def sort_key(self):
        if self.is_infinite:
            return (10**9, ())
        return (self.degree, tuple(reversed(self.poly)))

    def to_json(self) -> dict:
        return {"kind": self.kind, "poly": list(self.poly)}

    @classmethod
    def from_json(cls, d: dict) -> "Place":
        return cls(d["kind"], tuple(d.get("poly", ())))

    def label(self) -> str:
        if self.is_infinite:
            return "inf"
        return "(" + " ".join(str(c) for c in reversed(self.poly)) + ")"

    def __str__(self):
        return self.label()


PLACE_AT_INFINITY = Place(INFINITY)


def finite_place(F: FieldDesc, poly: Sequence[int]) -> Place:
    f = fpoly.monic(F, fpoly.trim(poly))
    if not fpoly.is_irreducible(F, f):
        raise ValueError(f"{f} is not irreducible over F_{F.order}")
    return Place(FINITE, f)


def necklace_count(q: int, e: int) -> int:
    """Number of monic irreducibles of degree e over F_q."""
    total = 0
    for f in range(1, e + 1):
        if e % f == 0:
            total += _mobius(f) * q ** (e // f)
    return total // e


def _mobius(n: int) -> int:
    res, d = 1, 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            res = -res
        d += 1
    return -res if n > 1 else res


def places_up_to(q: int, d: int) -> list[Place]:
    """Finite places of degree <= d sorted by (degree, coefficients), then infinity."""
    if d < 1:
        raise ValueError("degree bound must be >= 1")
    F = field_of_order(q)
    out = []
    for e in range(1, d + 1):
        for code in range(q**e):
            low = []
            c = code
            for _ in range(e):
                c, r = divmod(c, q)
                low.append(r)
            f = tuple(low) + (1,)
            if fpoly.is_irreducible(F, f):
                out.append(Place(FINITE, f))
    out.sort(key=Place.sort_key)
    out.append(PLACE_AT_INFINITY)
    return out


# -- embeddings and residue fields -------------------------------------------


@functools.lru_cache(maxsize=None)
def embedding_table(q: int, d: int) -> tuple[int, ...]:
    """Codes in F_{q^d} of the elements of F_q (indexed by their F_q code)."""
    p, m = prime_power(q)
    small = make_field(p, m)
    big = make_field(p, m * d)
    if m == 1 or d == 1:
        return tuple(range(q))
    r = fpoly.roots(big, small.modulus)[0]
    table = []
    for code in range(q):
        acc = 0
        for c in reversed(small.coeffs(code)):
            acc = big.add(big.mul(acc, r), c)
        table.append(acc)
    return tuple(table)


def embed_poly(q: int, d: int, f: Sequence[int]) -> tuple[int, ...]:
    tab = embedding_table(q, d)
    return tuple(tab[c] for c in f)


@functools.lru_cache(maxsize=None)
def residue_field(q: int, place: Place) -> tuple[FieldDesc, int | None]:
    """(F_{q^deg v}, code of the chosen root of the place polynomial)."""
    p, m = prime_power(q)
    F = make_field(p, m * place.degree)
    if place.is_infinite:
        return F, None
    roots = fpoly.roots(F, embed_poly(q, place.degree, place.poly))
    return F, roots[0]


# -- rational functions ---------------------------------------------------------


@dataclass(frozen=True)
class RatFunc:
    """num/den over F_q with den monic and gcd(num, den) = 1."""

    q: int
    num: tuple[int, ...]
    den: tuple[int, ...] = (1,)

    @property
    def F(self) -> FieldDesc:
        return field_of_order(self.q)

    @classmethod
    def make(cls, q: int, num: Sequence[int], den: Sequence[int] = (1,)) -> "RatFunc":
        F = field_of_order(q)
        num, den = fpoly.trim(num), fpoly.trim(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            return cls(q, (), (1,))
        g = fpoly.gcd(F, num, den)
        if fpoly.deg(g) > 0:
            num = fpoly.divmod_(F, num, g)[0]
            den = fpoly.divmod_(F, den, g)[0]
        lc = F.inv(den[-1])
        return cls(q, fpoly.scale(F, num, lc), fpoly.scale(F, den, lc))

    @classmethod
    def const(cls, q: int, c: int) -> "RatFunc":
        return cls.make(q, (c,))

    @classmethod
    def t(cls, q: int) -> "RatFunc":
        return cls.make(q, (0, 1))

    def is_zero(self) -> bool:
        return not self.num

    def is_constant(self) -> bool:
        return len(self.num) <= 1 and self.den == (1,)

    def __add__(self, other: "RatFunc") -> "RatFunc":
        F = self.F
        return RatFunc.make(
            self.q,
            fpoly.add(F, fpoly.mul(F, self.num, other.den), fpoly.mul(F, other.num, self.den)),
            fpoly.mul(F, self.den, other.den),
        )

    def __neg__(self) -> "RatFunc":
        return RatFunc(self.q, fpoly.neg(self.F, self.num), self.den)

    def __sub__(self, other: "RatFunc") -> "RatFunc":
        return self + (-other)

    def __mul__(self, other) -> "RatFunc":
        F = self.F
        if isinstance(other, int):
            other = RatFunc.const(self.q, other % F.p)
        return RatFunc.make(self.q, fpoly.mul(F, self.num, other.num), fpoly.mul(F, self.den, other.den))

    __rmul__ = __mul__

    def __truediv__(self, other: "RatFunc") -> "RatFunc":
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        F = self.F
        return RatFunc.make(self.q, fpoly.mul(F, self.num, other.den), fpoly.mul(F, self.den, other.num))

    def __pow__(self, e: int) -> "RatFunc":
        F = self.F
        if e < 0:
            return RatFunc.make(self.q, fpoly.power(F, self.den, -e), fpoly.power(F, self.num, -e))
        return RatFunc.make(self.q, fpoly.power(F, self.num, e), fpoly.power(F, self.den, e))

    def subs_shift(self, c: int) -> "RatFunc":
        """f(t + c)."""
        F = self.F
        return RatFunc.make(self.q, _shift(F, self.num, c), _shift(F, self.den, c))

    def evaluate(self, x: int) -> int:
        """Value at a point of F_q (raises on a pole)."""
        F = self.F
        d = fpoly.evaluate(F, self.den, x)
        if d == 0:
            raise ZeroDivisionError("pole")
        return F.div(fpoly.evaluate(F, self.num, x), d)

    def to_json(self) -> dict:
        return {"num": list(self.num), "den": list(self.den)}

    @classmethod
    def from_json(cls, q: int, d) -> "RatFunc":
        if isinstance(d, (int, list)):
            return cls.make(q, [d] if isinstance(d, int) else d)
        return cls.make(q, d["num"], d.get("den", [1]))

    def __str__(self):
        def show(f):
            return " + ".join(f"{c}*t^{i}" for i, c in enumerate(f) if c) or "0"

        return show(self.num) if self.den == (1,) else f"({show(self.num)})/({show(self.den)})"


def _shift(F: FieldDesc, f, c) -> tuple[int, ...]:
    out: tuple[int, ...] = ()
    lin = fpoly.trim((c, 1))
    for coef in reversed(f):
        out = fpoly.add(F, fpoly.mul(F, out, lin), fpoly.trim((coef,)))
    return out


def _poly_val(F: FieldDesc, f, pi) -> int:
    if not f:
        raise ValueError("valuation of zero")
    v = 0
    while True:
        qt, r = fpoly.divmod_(F, f, pi)
        if r:
            return v
        f = qt
        v += 1


def local_valuation(f: RatFunc, v: Place) -> int:
    if f.is_zero():
        raise ValueError("valuation of the zero function")
    if v.is_infinite:
        return fpoly.deg(f.den) - fpoly.deg(f.num)
    F = f.F
    return _poly_val(F, f.num, v.poly) - _poly_val(F, f.den, v.poly)


def strip_place(f: RatFunc, v: Place) -> tuple[int, RatFunc]:
    """(e, g) with f = pi_v^e * g and g a v-unit; pi_inf = 1/t."""
    e = local_valuation(f, v)
    if v.is_infinite:
        return e, f * RatFunc.t(f.q) ** e
    pi = RatFunc.make(f.q, v.poly)
    return e, f / pi**e


def residue(f: RatFunc, v: Place) -> FieldElem:
    """Image of f in the residue field at v."""
    F, root = residue_field(f.q, v)
    if f.is_zero():
        return FieldElem(F, 0)
    e = local_valuation(f, v)
    if e < 0:
        raise ValueError(f"pole of order {-e} at {v}")
    if e > 0:
        return FieldElem(F, 0)
    Fq = f.F
    if v.is_infinite:
        # deg num == deg den; residue is the ratio of leading coefficients
        return FieldElem(F, embed_poly(f.q, 1, (Fq.div(f.num[-1], f.den[-1]),))[0] if f.num else 0)
    num = embed_poly(f.q, v.degree, f.num)
    den = embed_poly(f.q, v.degree, f.den)
    return FieldElem(F, F.div(fpoly.evaluate(F, num, root), fpoly.evaluate(F, den, root)))


def leading_residue(f: RatFunc, v: Place, e: int) -> FieldElem:
    """Residue of f / pi_v^e (f must have valuation >= e)."""
    if v.is_infinite:
        g = f * RatFunc.t(f.q) ** e
    else:
        g = f / RatFunc.make(f.q, v.poly) ** e
    return residue(g, v)


def _solve_mod_p(rows: list[list[int]], rhs: list[int], p: int) -> list[int]:
    """Solve a square nonsingular system over F_p."""
    n = len(rows)
    m = [list(r) + [b] for r, b in zip(rows, rhs)]
    for col in range(n):
        piv = next(i for i in range(col, n) if m[i][col] % p)
        m[col], m[piv] = m[piv], m[col]
        inv = pow(m[col][col], p - 2, p)
        m[col] = [x * inv % p for x in m[col]]
        for i in range(n):
            if i != col and m[i][col]:
                f = m[i][col]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[col])]
    return [m[i][n] for i in range(n)]


@functools.lru_cache(maxsize=None)
def _lift_basis(q: int, place: Place) -> tuple[tuple[tuple[int, ...], ...], tuple[tuple[int, int], ...]]:
    """F_p-coordinates of gamma^j * root^i in the residue field, with their (i, j)."""
    p, m = prime_power(q)
    F, root = residue_field(q, place)
    emb = embedding_table(q, place.degree)
    cols, labels = [], []
    for i in range(place.degree):
        ri = F.pow(root, i)
        for j in range(m):
            cols.append(F.coeffs(F.mul(emb[p**j], ri)))
            labels.append((i, j))
    rows = tuple(tuple(col[r] for col in cols) for r in range(len(cols)))
    return rows, tuple(labels)


def lift_residue(q: int, place: Place, code: int) -> "RatFunc":
    """A polynomial of degree < deg v (a constant at infinity) with the given residue."""
    if place.degree == 1:
        return RatFunc.const(q, code)
    p, _ = prime_power(q)
    F, _ = residue_field(q, place)
    rows, labels = _lift_basis(q, place)
    sol = _solve_mod_p([list(r) for r in rows], list(F.coeffs(code)), p)
    coeffs = [0] * place.degree
    for (i, j), c in zip(labels, sol):
        coeffs[i] += c * p**j
    return RatFunc.make(q, coeffs)


def uniformizer(q: int, place: Place) -> RatFunc:
    """pi_v: the place polynomial, or 1/t at infinity."""
    if place.is_infinite:
        return RatFunc.make(q, (1,), (0, 1))
    return RatFunc.make(q, place.poly)
