"""Frobenius modules: a rational vector space, an operator and a weight.

These stand in for pure motive classes.  Everything that is compared is a
Z-function, ``det(1 - F t)`` or its inverse depending on the parity of the
weight, so formal sums of modules (``K0Class``) are compared through the
rational functions they produce.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .series import ZRational, as_int_poly, pmul, ptrim

Matrix = tuple[tuple[Fraction, ...], ...]


def as_matrix(rows: Iterable[Iterable]) -> Matrix:
    return tuple(tuple(Fraction(x) for x in r) for r in rows)


def identity(n: int) -> Matrix:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if not a:
        return ()
    cols = list(zip(*b)) if b else [()] * 0
    return tuple(tuple(sum((x * y for x, y in zip(r, c)), Fraction(0)) for c in cols) for r in a)


def block_diag(*mats: Matrix) -> Matrix:
    n = sum(len(m) for m in mats)
    out = [[Fraction(0)] * n for _ in range(n)]
    off = 0
    for m in mats:
        for i, r in enumerate(m):
            for j, x in enumerate(r):
                out[off + i][off + j] = x
        off += len(m)
    return tuple(tuple(r) for r in out)


def inverse_charpoly(F: Matrix) -> tuple[Fraction, ...]:
    """Coefficients of det(1 - F t), ascending (Faddeev-LeVerrier)."""
    n = len(F)
    c = [Fraction(0)] * (n + 1)
    c[0] = Fraction(1)
    M = tuple(tuple(Fraction(0) for _ in range(n)) for _ in range(n))
    I = identity(n)
    for k in range(1, n + 1):
        M = tuple(
            tuple(x + c[k - 1] * i for x, i in zip(r, ir)) for r, ir in zip(mat_mul(F, M), I)
        )
        FM = mat_mul(F, M)
        c[k] = -sum(FM[i][i] for i in range(n)) / k
    return tuple(c)


@dataclass(frozen=True)
class FrobeniusModule:
    dim: int
    frobenius: Matrix
    weight: int
    label: str = field(default="", compare=False)

    def __post_init__(self):
        if len(self.frobenius) != self.dim or any(len(r) != self.dim for r in self.frobenius):
            raise ValueError("frobenius must be a dim x dim matrix")

    @classmethod
    def make(cls, frobenius, weight: int, label: str = "") -> "FrobeniusModule":
        m = as_matrix(frobenius)
        return cls(len(m), m, weight, label)

    @classmethod
    def zero(cls, weight: int = 0, label: str = "") -> "FrobeniusModule":
        return cls(0, (), weight, label)

    @classmethod
    def unit(cls) -> "FrobeniusModule":
        return cls.make([[1]], 0, "1")

    @classmethod
    def lefschetz(cls, q: int) -> "FrobeniusModule":
        return cls.make([[q]], 2, "L")

    @classmethod
    def from_charpoly(cls, poly: Sequence[int], weight: int, label: str = "") -> "FrobeniusModule":
        """Companion-matrix module with det(1 - F t) = poly (poly[0] == 1)."""
        poly = ptrim([Fraction(x) for x in poly])
        if not poly or poly[0] != 1:
            raise ValueError("need constant term 1")
        n = len(poly) - 1
        # det(1 - C t) = poly for C with char poly x^n + poly[1] x^{n-1} + ... + poly[n]
        rows = [[Fraction(0)] * n for _ in range(n)]
        for i in range(1, n):
            rows[i][i - 1] = Fraction(1)
        for i in range(n):
            rows[i][n - 1] = -poly[n - i]
        return cls.make(rows, weight, label)

    def charpoly(self) -> tuple[Fraction, ...]:
        """det(1 - F t), ascending."""
        return inverse_charpoly(self.frobenius)

    def charpoly_int(self) -> tuple[int, ...]:
        return as_int_poly(self.charpoly())

    def to_json(self) -> dict:
        def enc(x: Fraction):
            return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

        return {"dim": self.dim, "frobenius": [[enc(x) for x in r] for r in self.frobenius], "weight": self.weight}

    @classmethod
    def from_json(cls, d: dict) -> "FrobeniusModule":
        m = as_matrix(d.get("frobenius", []))
        if len(m) != d.get("dim", len(m)):
            raise ValueError("dim does not match the frobenius matrix")
        return cls(len(m), m, int(d.get("weight", 0)))

    def __add__(self, other: "FrobeniusModule") -> "FrobeniusModule":
        """Direct sum (weights must agree)."""
        if self.dim and other.dim and self.weight != other.weight:
            raise ValueError("direct sum of modules of different weight")
        w = self.weight if self.dim else other.weight
        return FrobeniusModule(self.dim + other.dim, block_diag(self.frobenius, other.frobenius), w)


def zfunction(M: FrobeniusModule, q: int | None = None) -> ZRational:
    """det(1 - F t) for odd weight, its inverse for even weight."""
    P = M.charpoly()
    return ZRational.make(P, (1,)) if M.weight % 2 else ZRational.make((1,), P)


def twist(M: FrobeniusModule, n: int, q: int) -> FrobeniusModule:
    """M(-n): Frobenius scaled by q^n, weight raised by 2n."""
    s = Fraction(q) ** n
    return FrobeniusModule(M.dim, tuple(tuple(x * s for x in r) for r in M.frobenius), M.weight + 2 * n, M.label)


def induce(M: FrobeniusModule, d: int) -> FrobeniusModule:
    """Induction from the degree-d extension: det(1 - F t) becomes det(1 - F_M t^d)."""
    if d == 1 or M.dim == 0:
        return M
    n = M.dim
    N = n * d
    rows = [[Fraction(0)] * N for _ in range(N)]
    # block cyclic shift, with the original operator closing the cycle
    for b in range(1, d):
        for i in range(n):
            rows[b * n + i][(b - 1) * n + i] = Fraction(1)
    for i in range(n):
        for j in range(n):
            rows[i][(d - 1) * n + j] = M.frobenius[i][j]
    return FrobeniusModule(N, tuple(tuple(r) for r in rows), M.weight, M.label)


@dataclass(frozen=True)
class K0Class:
    """Formal integer combination of Frobenius modules."""

    terms: tuple[tuple[int, FrobeniusModule], ...] = ()

    @classmethod
    def of(cls, M: FrobeniusModule, mult: int = 1) -> "K0Class":
        return cls(((mult, M),))

    def __add__(self, other: "K0Class") -> "K0Class":
        return K0Class(self.terms + other.terms)

    def __neg__(self) -> "K0Class":
        return K0Class(tuple((-m, M) for m, M in self.terms))

    def __sub__(self, other: "K0Class") -> "K0Class":
        return self + (-other)

    def euler_characteristic(self) -> int:
        """sum of mult * (-1)^w * dim."""
        return sum(m * (-1) ** (M.weight % 2) * M.dim for m, M in self.terms)


def k0_zfunction(c: K0Class, q: int | None = None) -> ZRational:
    out = ZRational.make((1,), (1,))
    for m, M in c.terms:
        out = out * zfunction(M) ** m
    return out


def k0_equal(a: K0Class, b: K0Class) -> bool:
    return k0_zfunction(a) == k0_zfunction(b)


def poly_product(polys: Iterable[Sequence]) -> tuple:
    out: tuple = (1,)
    for p in polys:
        out = pmul(out, p)
    return out
