"""Finite fields F_{p^n} with a deterministic defining modulus.

Elements are stored as integer codes ``sum(c_i * p**i)`` where ``c_i`` are the
coefficients of the element in the power basis of a root of the modulus
(little-endian).  Enumeration order is increasing code, which is the
lexicographic order on coefficient vectors read from the highest coefficient
down; the first element is 0.

Small fields (``p**n <= TABLE_LIMIT``) get log/antilog, addition and
quadratic-character tables, which are also exposed as numpy arrays for the
vectorised counting kernels.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

TABLE_LIMIT = 1 << 22


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def prime_power(q: int) -> tuple[int, int]:
    """Return (p, m) with q = p**m, or raise ValueError."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    p = prime_factors(q)[0]
    m = 0
    r = q
    while r % p == 0:
        r //= p
        m += 1
    if r != 1:
        raise ValueError(f"{q} is not a prime power")
    return p, m


# -- dense polynomial helpers over F_p (coefficient lists, little-endian) --

def _trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _fp_mulmod(a: list[int], b: list[int], mod: tuple[int, ...], p: int) -> list[int]:
    n = len(mod) - 1
    prod = [0] * (len(a) + len(b) - 1 if a and b else 0)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    prod = [c % p for c in prod]
    for k in range(len(prod) - 1, n - 1, -1):
        c = prod[k]
        if c:
            for i in range(n):
                prod[k - n + i] = (prod[k - n + i] - c * mod[i]) % p
            prod[k] = 0
    return _trim(prod[:n])


def _fp_divmod(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int]]:
    a = _trim([x % p for x in a])
    b = _trim([x % p for x in b])
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv = pow(b[-1], -1, p)
    quot = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b):
        c = a[-1] * inv % p
        shift = len(a) - len(b)
        quot[shift] = c
        for i, y in enumerate(b):
            a[shift + i] = (a[shift + i] - c * y) % p
        _trim(a)
    return _trim(quot), a


def _fp_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a = _trim([x % p for x in a])
    b = _trim([x % p for x in b])
    while b:
        a, b = b, _fp_divmod(a, b, p)[1]
    return a


def _fp_powmod_x(e: int, mod: tuple[int, ...], p: int) -> list[int]:
    """x**e modulo ``mod``."""
    result = [1]
    base = _fp_mulmod([0, 1], [1], mod, p) if len(mod) > 2 else [(-mod[0]) % p]
    while e:
        if e & 1:
            result = _fp_mulmod(result, base, mod, p)
        base = _fp_mulmod(base, base, mod, p)
        e >>= 1
    return result


def is_irreducible_fp(mod: tuple[int, ...], p: int) -> bool:
    """Rabin's test for a monic polynomial over the prime field."""
    n = len(mod) - 1
    if n == 1:
        return True
    if mod[0] % p == 0:
        return False
    x = [0, 1]
    if _trim(_fp_divmod(_sub(_fp_powmod_x(p**n, mod, p), x, p), list(mod), p)[1]):
        return False
    for r in prime_factors(n):
        h = _sub(_fp_powmod_x(p ** (n // r), mod, p), x, p)
        if len(_fp_gcd(list(mod), h, p)) != 1:
            return False
    return True


def _sub(a: list[int], b: list[int], p: int) -> list[int]:
    m = max(len(a), len(b))
    a = a + [0] * (m - len(a))
    b = b + [0] * (m - len(b))
    return _trim([(x - y) % p for x, y in zip(a, b)])


def _digits(code: int, p: int, n: int) -> list[int]:
    out = []
    for _ in range(n):
        code, r = divmod(code, p)
        out.append(r)
    return out


def _encode(c, p: int) -> int:
    code = 0
    for x in reversed(list(c)):
        code = code * p + int(x)
    return code


@dataclass(frozen=True, eq=False)
class FieldDesc:
    """The field F_{p^n} = F_p[t]/(modulus)."""

    p: int
    n: int
    modulus: tuple[int, ...]
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __eq__(self, other):
        return isinstance(other, FieldDesc) and (self.p, self.n, self.modulus) == (
            other.p,
            other.n,
            other.modulus,
        )

    def __hash__(self):
        return hash((self.p, self.n, self.modulus))

    @property
    def order(self) -> int:
        return self.p**self.n

    @property
    def characteristic(self) -> int:
        return self.p

    def to_json(self) -> dict:
        return {"p": self.p, "n": self.n, "modulus": list(self.modulus)}

    # -- element construction ------------------------------------------------

    def __call__(self, x) -> "FieldElem":
        if isinstance(x, FieldElem):
            if x.field != self:
                raise ValueError("element belongs to a different field")
            return x
        if isinstance(x, int):
            return FieldElem(self, x % self.p)
        return FieldElem(self, self.encode(x))

    def encode(self, coeffs) -> int:
        c = [int(v) % self.p for v in coeffs]
        if len(c) > self.n:
            raise ValueError("too many coefficients")
        return _encode(c, self.p)

    def coeffs(self, code: int) -> tuple[int, ...]:
        return tuple(_digits(code, self.p, self.n))

    def gen(self) -> int:
        """Code of the root of the modulus."""
        return self.p if self.n > 1 else (-self.modulus[0]) % self.p

    # -- tables ----------------------------------------------------------------

    @property
    def has_tables(self) -> bool:
        return self.order <= TABLE_LIMIT

    @property
    def tables(self) -> "FieldTables":
        t = self._cache.get("tables")
        if t is None:
            if not self.has_tables:
                raise ValueError(f"field of order {self.order} is too large for tables")
            t = FieldTables(self)
            self._cache["tables"] = t
        return t

    # -- scalar arithmetic on codes -------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.n == 1:
            return (a + b) % self.p
        if self.has_tables:
            return int(self.tables.add_codes(a, b))
        p = self.p
        return _encode([(x + y) % p for x, y in zip(_digits(a, p, self.n), _digits(b, p, self.n))], p)

    def neg(self, a: int) -> int:
        if self.n == 1:
            return (-a) % self.p
        p = self.p
        return _encode([(-x) % p for x in _digits(a, p, self.n)], p)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.n == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        if self.has_tables:
            t = self.tables
            return int(t.exp[(int(t.log[a]) + int(t.log[b])) % (self.order - 1)])
        return self._slow_mul(a, b)

    def _slow_mul(self, a: int, b: int) -> int:
        p, n = self.p, self.n
        return _encode(_fp_mulmod(_digits(a, p, n), _digits(b, p, n), self.modulus, p), p)

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("0 has no inverse")
            return 1 if e == 0 else 0
        if self.n == 1:
            return pow(a, e, self.p)
        if self.has_tables:
            t = self.tables
            return int(t.exp[(int(t.log[a]) * e) % (self.order - 1)])
        e %= self.order - 1
        result, base = 1, a
        while e:
            if e & 1:
                result = self._slow_mul(result, base)
            base = self._slow_mul(base, base)
            e >>= 1
        return result

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self.pow(a, -1 if self.n == 1 else self.order - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def frob(self, a: int) -> int:
        return self.pow(a, self.p)

    def chi(self, a: int) -> int:
        if self.p == 2:
            raise ValueError("quadratic character needs odd characteristic")
        if a == 0:
            return 0
        if self.has_tables:
            return int(self.tables.chi[a])
        return 1 if self.pow(a, (self.order - 1) // 2) == 1 else -1

    def sqrt(self, a: int) -> int | None:
        """Smallest-code square root of ``a`` or None."""
        if a == 0:
            return 0
        if self.chi(a) != 1:
            return None
        if self.has_tables:
            t = self.tables
            k = int(t.log[a]) // 2
            r1 = int(t.exp[k])
            return min(r1, self.neg(r1))
        for x in range(1, self.order):
            if self.mul(x, x) == a:
                return x
        return None


@functools.lru_cache(maxsize=None)
def make_field(p: int, n: int = 1) -> FieldDesc:
    """F_{p^n} with the smallest-code monic irreducible modulus."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if n < 1:
        raise ValueError("extension degree must be positive")
    if n == 1:
        return FieldDesc(p, 1, (0, 1))
    for code in range(p**n):
        mod = tuple(_digits(code, p, n)) + (1,)
        if is_irreducible_fp(mod, p):
            return FieldDesc(p, n, mod)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


def field_of_order(q: int) -> FieldDesc:
    p, m = prime_power(q)
    return make_field(p, m)


@dataclass(frozen=True)
class FieldElem:
    field: FieldDesc
    code: int

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field.coeffs(self.code)

    def _other(self, other) -> int:
        if isinstance(other, FieldElem):
            if other.field != self.field:
                raise ValueError("element/field mismatch")
            return other.code
        return int(other) % self.field.p

    def __add__(self, other):
        return FieldElem(self.field, self.field.add(self.code, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElem(self.field, self.field.sub(self.code, self._other(other)))

    def __rsub__(self, other):
        return FieldElem(self.field, self.field.sub(self._other(other), self.code))

    def __neg__(self):
        return FieldElem(self.field, self.field.neg(self.code))

    def __mul__(self, other):
        return FieldElem(self.field, self.field.mul(self.code, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElem(self.field, self.field.div(self.code, self._other(other)))

    def __pow__(self, e: int):
        return FieldElem(self.field, self.field.pow(self.code, e))

    def __bool__(self):
        return self.code != 0

    def __repr__(self):
        return f"FieldElem({self.coeffs})"


def enumerate_field(F: FieldDesc) -> Iterator[FieldElem]:
    """All elements of F in increasing code order, starting with 0."""
    for code in range(F.order):
        yield FieldElem(F, code)


def frobenius(F: FieldDesc, x: FieldElem) -> FieldElem:
    """The absolute Frobenius x -> x**p."""
    if x.field != F:
        raise ValueError("element/field mismatch")
    return FieldElem(F, F.frob(x.code))


def quadratic_character(F: FieldDesc, x: FieldElem) -> int:
    if x.field != F:
        raise ValueError("element/field mismatch")
    return F.chi(x.code)


class FieldTables:
    """Dense numpy tables for a small field.

    ``exp[k] = g**k`` for a primitive element g, ``log`` its inverse (with
    ``log[0] = -1``), ``chi`` the quadratic character, and split addition
    tables: a code is cut into a low part of ``h`` digits and a high part.
    """

    def __init__(self, F: FieldDesc):
        self.F = F
        p, n, Q = F.p, F.n, F.order
        self.h = (n + 1) // 2
        self.lo_size = p**self.h
        self.hi_size = p ** (n - self.h)
        self.add_lo = self._digit_add_table(self.h)
        self.add_hi = self._digit_add_table(n - self.h)
        self.generator = self._find_primitive()
        self.exp = self._build_exp(self.generator)
        log = np.full(Q, -1, dtype=np.int64)
        log[self.exp] = np.arange(Q - 1, dtype=np.int64)
        self.log = log
        chi = np.zeros(Q, dtype=np.int8)
        if p != 2:
            chi[self.exp] = np.where(np.arange(Q - 1) % 2 == 0, 1, -1).astype(np.int8)
        self.chi = chi
        codes = np.arange(Q, dtype=np.int64)
        self.neg = self._neg_array(codes)
        self.frob = self.pow_array(codes, p)

    def _digit_add_table(self, k: int) -> np.ndarray:
        p = self.F.p
        size = p**k
        codes = np.arange(size, dtype=np.int64)
        digits = np.stack([(codes // p**i) % p for i in range(k)], axis=1) if k else np.zeros((1, 0), np.int64)
        s = (digits[:, None, :] + digits[None, :, :]) % p
        weights = p ** np.arange(k, dtype=np.int64)
        return (s * weights).sum(axis=2).astype(np.int64) if k else np.zeros((1, 1), np.int64)

    def _neg_array(self, codes: np.ndarray) -> np.ndarray:
        p, n = self.F.p, self.F.n
        out = np.zeros_like(codes)
        for i in range(n):
            d = (codes // p**i) % p
            out += ((-d) % p) * p**i
        return out

    def add_codes(self, a, b):
        """Elementwise addition of code arrays (broadcasting)."""
        lo_a, hi_a = np.divmod(a, self.lo_size)[::-1]
        lo_b, hi_b = np.divmod(b, self.lo_size)[::-1]
        return self.add_hi[hi_a, hi_b] * self.lo_size + self.add_lo[lo_a, lo_b]

    def mul_codes(self, a, b):
        Q1 = self.F.order - 1
        a = np.asarray(a)
        b = np.asarray(b)
        la = self.log[a]
        lb = self.log[b]
        idx = la + lb
        idx = np.where(idx >= Q1, idx - Q1, idx)
        res = self.exp[np.clip(idx, 0, Q1 - 1)]
        return np.where((a == 0) | (b == 0), 0, res)

    def pow_array(self, a: np.ndarray, e: int) -> np.ndarray:
        Q1 = self.F.order - 1
        la = self.log[a]
        res = self.exp[(la * (e % Q1)) % Q1]
        return np.where(a == 0, 0 if e else 1, res)

    def inv_codes(self, a):
        Q1 = self.F.order - 1
        la = self.log[a]
        return np.where(a == 0, 0, self.exp[(-la) % Q1])

    def _find_primitive(self) -> int:
        F = self.F
        Q = F.order
        if Q == 2:
            return 1
        factors = prime_factors(Q - 1)
        for g in range(1, Q):
            if all(self._slow_pow(g, (Q - 1) // r) != 1 for r in factors):
                return g
        raise AssertionError("no primitive element")  # pragma: no cover

    def _slow_pow(self, a: int, e: int) -> int:
        F = self.F
        if F.n == 1:
            return pow(a, e, F.p)
        result, base = 1, a
        while e:
            if e & 1:
                result = F._slow_mul(result, base)
            base = F._slow_mul(base, base)
            e >>= 1
        return result

    def _mul_by_const(self, codes: np.ndarray, c: int) -> np.ndarray:
        """Multiply every code by the constant c using its F_p-linear matrix."""
        F = self.F
        p, n = F.p, F.n
        if n == 1:
            return codes * c % p
        cols = []
        for j in range(n):
            basis = F.encode([0] * j + [1])
            cols.append(_digits(F._slow_mul(basis, c), p, n))
        M = np.array(cols, dtype=np.int64)  # row j = image of t^j
        digits = np.stack([(codes // p**i) % p for i in range(n)], axis=1)
        out = digits @ M % p
        return (out * p ** np.arange(n, dtype=np.int64)).sum(axis=1)

    def _build_exp(self, g: int) -> np.ndarray:
        Q1 = self.F.order - 1
        exp = np.array([1], dtype=np.int64)
        while len(exp) < Q1:
            c = self._slow_pow(g, len(exp))
            exp = np.concatenate([exp, self._mul_by_const(exp, c)])
        return exp[:Q1]
