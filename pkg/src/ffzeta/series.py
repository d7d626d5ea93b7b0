"""Exact polynomials, truncated power series and rational functions over Q.

Polynomials are tuples of ``int``/``Fraction`` coefficients in ascending
order with trailing zeros removed.  Nothing here uses floating point except
:func:`weil_check`, which needs complex roots.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Iterable, Sequence

import mpmath

QPoly = tuple  # tuple[int | Fraction, ...]


class ReconstructionError(ValueError):
    """No rational function within the degree bounds matches the series."""


def _norm(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c.numerator)
    return c


def ptrim(c: Iterable) -> QPoly:
    c = [_norm(x) for x in c]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def pdeg(f: QPoly) -> int:
    return len(f) - 1


def padd(f: QPoly, g: QPoly) -> QPoly:
    n = max(len(f), len(g))
    return ptrim((f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0) for i in range(n))


def psub(f: QPoly, g: QPoly) -> QPoly:
    return padd(f, tuple(-c for c in g))


def pscale(f: QPoly, c) -> QPoly:
    return ptrim(x * c for x in f)


def pmul(f: QPoly, g: QPoly) -> QPoly:
    if not f or not g:
        return ()
    out = [0] * (len(f) + len(g) - 1)
    for i, x in enumerate(f):
        if x:
            for j, y in enumerate(g):
                out[i + j] += x * y
    return ptrim(out)


def pprod(polys: Iterable[QPoly]) -> QPoly:
    out: QPoly = (1,)
    for f in polys:
        out = pmul(out, f)
    return out


def ppow(f: QPoly, e: int) -> QPoly:
    return pprod([f] * e)


def pdivmod(f: QPoly, g: QPoly) -> tuple[QPoly, QPoly]:
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    r = [Fraction(x) for x in f]
    q = [Fraction(0)] * max(len(f) - len(g) + 1, 0)
    lead = Fraction(g[-1])
    while len(r) >= len(g) and any(r):
        if r[-1] == 0:
            r.pop()
            continue
        c = r[-1] / lead
        shift = len(r) - len(g)
        q[shift] = c
        for i, y in enumerate(g):
            r[shift + i] -= c * y
        r.pop()
    return ptrim(q), ptrim(r)


def pexact_div(f: QPoly, g: QPoly) -> QPoly:
    q, r = pdivmod(f, g)
    if r:
        raise ArithmeticError("polynomial division is not exact")
    return q


def pgcd(f: QPoly, g: QPoly) -> QPoly:
    """Monic gcd over Q."""
    f, g = ptrim(f), ptrim(g)
    while g:
        f, g = g, pdivmod(f, g)[1]
    if not f:
        return ()
    return pscale(f, Fraction(1) / Fraction(f[-1]))


def peval(f: QPoly, x):
    acc = 0
    for c in reversed(f):
        acc = acc * x + c
    return acc


def psubs_scale(f: QPoly, c) -> QPoly:
    """f(c*t)."""
    return ptrim(x * c**i for i, x in enumerate(f))


def is_integral(f: QPoly) -> bool:
    return all(isinstance(_norm(Fraction(x)), int) for x in f)


def as_int_poly(f: QPoly) -> tuple[int, ...]:
    if not is_integral(f):
        raise ArithmeticError(f"non-integral coefficients in {f}")
    return tuple(int(Fraction(x)) for x in f)


def poly_to_str(f: QPoly, var: str = "t") -> str:
    if not f:
        return "0"
    terms = []
    for i, c in enumerate(f):
        if c == 0:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if mono and c == 1:
            terms.append(mono)
        elif mono and c == -1:
            terms.append("-" + mono)
        else:
            terms.append(f"{c}{'*' + mono if mono else ''}")
    return " + ".join(terms).replace("+ -", "- ")


def coeffs_json(f: QPoly) -> list:
    return [int(c) if isinstance(_norm(Fraction(c)), int) else str(c) for c in f]


def coeffs_from_json(c: Sequence) -> QPoly:
    return ptrim(Fraction(x) if isinstance(x, str) else int(x) for x in c)


# -- truncated series ----------------------------------------------------------


@dataclass(frozen=True)
class TruncatedSeries:
    """c_0 + c_1 t + ... + c_N t^N + O(t^{N+1})."""

    coefficients: tuple
    precision: int

    def __post_init__(self):
        if len(self.coefficients) != self.precision + 1:
            raise ValueError("length must be precision + 1")

    @classmethod
    def from_poly(cls, f: QPoly, precision: int) -> "TruncatedSeries":
        c = list(f[: precision + 1]) + [0] * max(0, precision + 1 - len(f))
        return cls(tuple(_norm(Fraction(x)) for x in c), precision)

    @classmethod
    def from_rational(cls, num: QPoly, den: QPoly, precision: int) -> "TruncatedSeries":
        return cls.from_poly(num, precision) * cls.from_poly(den, precision).inverse()

    def __getitem__(self, i: int):
        return self.coefficients[i]

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        N = min(self.precision, other.precision)
        a, b = self.coefficients, other.coefficients
        out = [sum(a[i] * b[k - i] for i in range(k + 1)) for k in range(N + 1)]
        return TruncatedSeries(tuple(_norm(Fraction(x)) for x in out), N)

    def truncate(self, N: int) -> "TruncatedSeries":
        return TruncatedSeries(self.coefficients[: N + 1], N)

    def inverse(self) -> "TruncatedSeries":
        a = self.coefficients
        if a[0] == 0:
            raise ZeroDivisionError("series with zero constant term")
        inv0 = Fraction(1) / Fraction(a[0])
        out = [inv0]
        for k in range(1, self.precision + 1):
            s = sum(a[i] * out[k - i] for i in range(1, k + 1))
            out.append(-s * inv0)
        return TruncatedSeries(tuple(_norm(x) for x in out), self.precision)

    def is_integral(self) -> bool:
        return is_integral(self.coefficients)

    def as_poly(self) -> QPoly:
        return ptrim(self.coefficients)


def zeta_from_counts(counts: Sequence[int]) -> TruncatedSeries:
    """exp(sum_n N_n t^n / n) to precision len(counts)."""
    if len(counts) == 0:
        raise ValueError("need at least one count")
    m = len(counts)
    c = [Fraction(1)]
    for n in range(1, m + 1):
        c.append(sum(Fraction(counts[k - 1]) * c[n - k] for k in range(1, n + 1)) / n)
    return TruncatedSeries(tuple(_norm(x) for x in c), m)


def log_coefficients(s: TruncatedSeries) -> list:
    """N_1..N_m with s = exp(sum N_n t^n / n); inverse of zeta_from_counts."""
    c = s.coefficients
    if c[0] != 1:
        raise ValueError("constant term must be 1")
    out: list = []
    for n in range(1, s.precision + 1):
        val = n * Fraction(c[n]) - sum(out[k - 1] * Fraction(c[n - k]) for k in range(1, n))
        out.append(_norm(val))
    return out


# -- rational functions ---------------------------------------------------------


@dataclass(frozen=True)
class ZRational:
    """num/den in lowest terms with den(0) = 1."""

    num: QPoly
    den: QPoly

    @classmethod
    def make(cls, num: QPoly, den: QPoly = (1,)) -> "ZRational":
        num, den = ptrim(num), ptrim(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            return cls((), (1,))
        g = pgcd(num, den)
        if pdeg(g) > 0:
            num = pexact_div(num, g)
            den = pexact_div(den, g)
        c0 = Fraction(den[0])
        if c0 == 0:
            raise ValueError("denominator vanishes at t = 0")
        return cls(pscale(num, 1 / c0), pscale(den, 1 / c0))

    @classmethod
    def poly(cls, f: QPoly) -> "ZRational":
        return cls.make(f, (1,))

    @classmethod
    def inverse_poly(cls, f: QPoly) -> "ZRational":
        return cls.make((1,), f)

    def __mul__(self, other: "ZRational") -> "ZRational":
        return ZRational.make(pmul(self.num, other.num), pmul(self.den, other.den))

    def __truediv__(self, other: "ZRational") -> "ZRational":
        return ZRational.make(pmul(self.num, other.den), pmul(self.den, other.num))

    def __pow__(self, e: int) -> "ZRational":
        if e >= 0:
            return ZRational.make(ppow(self.num, e), ppow(self.den, e))
        return ZRational.make(ppow(self.den, -e), ppow(self.num, -e))

    def subs_scale(self, c) -> "ZRational":
        """t -> c t."""
        return ZRational.make(psubs_scale(self.num, c), psubs_scale(self.den, c))

    def series(self, precision: int) -> TruncatedSeries:
        return TruncatedSeries.from_rational(self.num, self.den, precision)

    def is_one(self) -> bool:
        return self.num == (1,) and self.den == (1,)

    @property
    def zeta_normalized(self) -> bool:
        return bool(self.num) and self.num[0] in (1, -1)

    def to_json(self) -> dict:
        return {"num": coeffs_json(self.num), "den": coeffs_json(self.den)}

    @classmethod
    def from_json(cls, d: dict) -> "ZRational":
        return cls.make(coeffs_from_json(d["num"]), coeffs_from_json(d["den"]))

    def __str__(self):
        return f"({poly_to_str(self.num)}) / ({poly_to_str(self.den)})"


def _solve_exact(rows: list[list[Fraction]], rhs: list[Fraction], nvars: int):
    """Solve an (over)determined linear system exactly; None if inconsistent.

    Gaussian elimination over Q; returns one solution (free variables 0).
    """
    m = [row[:] + [b] for row, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for col in range(nvars):
        piv = next((i for i in range(r, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][col]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col] != 0:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
    for i in range(r, len(m)):
        if m[i][-1] != 0:
            return None
    x = [Fraction(0)] * nvars
    for i, col in enumerate(pivots):
        x[col] = m[i][-1]
    return x, len(pivots)


def rational_reconstruct(series: TruncatedSeries, deg_num: int, deg_den: int) -> ZRational:
    """The rational function with deg num <= deg_num, deg den <= deg_den matching
    every coefficient of ``series``.

    Requires two coefficients beyond ``deg_num + deg_den`` so that a fit is
    over-determined.  The smallest denominator degree that fits is used.
    """
    N = series.precision
    if N < deg_num + deg_den + 2:
        raise ValueError(
            f"precision {N} too small for bounds ({deg_num}, {deg_den}); need {deg_num + deg_den + 2}"
        )
    c = [Fraction(x) for x in series.coefficients]
    for e in range(deg_den + 1):
        # unknowns q_1..q_e of den = 1 + q_1 t + ... ; rows k = deg_num+1..N:
        # sum_{j=0}^{e} q_j c_{k-j} = 0
        rows, rhs = [], []
        for k in range(deg_num + 1, N + 1):
            rows.append([c[k - j] if k - j >= 0 else Fraction(0) for j in range(1, e + 1)])
            rhs.append(-c[k])
        sol = _solve_exact(rows, rhs, e)
        if sol is None:
            continue
        q, rank = sol
        if rank < e:
            continue
        den = ptrim([1] + q)
        num = ptrim((series * TruncatedSeries.from_poly(den, N)).coefficients[: deg_num + 1])
        return ZRational.make(num, den)
    raise ReconstructionError(
        f"no rational function with degrees <= ({deg_num}, {deg_den}) matches {N + 1} coefficients"
    )


# -- Weil numbers and functional equations ------------------------------------


@dataclass
class WeilReport:
    ok: bool
    weight: int
    q: int
    target: float
    abs_values: list[float]
    offending: list[complex]

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "weight": self.weight,
            "q": self.q,
            "target": self.target,
            "abs_values": self.abs_values,
            "offending": [[z.real, z.imag] for z in self.offending],
        }


def squarefree_part(P: QPoly) -> QPoly:
    """P / gcd(P, P'), normalised to constant term 1 when P(0) != 0."""
    P = ptrim(P)
    if pdeg(P) < 1:
        return P
    dP = ptrim(i * Fraction(c) for i, c in enumerate(P))[1:]
    g = pgcd(P, dP)
    out = pexact_div(P, g) if pdeg(g) > 0 else P
    return pscale(out, 1 / Fraction(out[0])) if out[0] else out


def inverse_roots(P: QPoly, dps: int = 50) -> list[complex]:
    """Distinct complex inverse roots of P (P(0) != 0)."""
    P = squarefree_part(P)
    if len(P) <= 1:
        return []
    with mpmath.workdps(dps):
        # t^d P(1/t) = sum c_i t^{d-i}: its descending coefficient list is P ascending
        coeffs = [mpmath.mpf(Fraction(c).numerator) / Fraction(c).denominator for c in P]
        rts = mpmath.polyroots(coeffs, maxsteps=400, extraprec=4 * dps)
    return [complex(r) for r in rts]


def weil_check(P: QPoly, w: int, q: int, tol: float = 1e-6) -> WeilReport:
    """Do all inverse roots of P have absolute value q^{w/2} within tol?"""
    P = ptrim(P)
    if not P or P[0] != 1:
        raise ValueError("weil_check needs P(0) = 1")
    target = float(mpmath.mpf(q) ** (mpmath.mpf(w) / 2))
    alphas = inverse_roots(P)
    absv = [abs(a) for a in alphas]
    bad = [a for a, v in zip(alphas, absv) if abs(v - target) >= tol]
    return WeilReport(not bad, w, q, target, absv, bad)


def functional_equation_check(P: QPoly, w: int, q: int) -> int | None:
    """The sign e with q^{wd/2} t^d P(1/(q^w t)) = e * P(t), or None.

    Compared coefficientwise: c_i q^{w(d/2 - i)} = e c_{d-i}.  When q^{wd}
    is not a perfect square the left side has an irrational factor and the
    identity cannot hold for rational P.
    """
    P = ptrim(P)
    if not P or P[0] != 1:
        raise ValueError("functional_equation_check needs P(0) = 1")
    d = pdeg(P)
    if d == 0:
        return 1
    root = isqrt(q ** (w * d))
    if root * root != q ** (w * d):
        return None
    for eps in (1, -1):
        if all(
            Fraction(P[i]) * root == eps * Fraction(P[d - i]) * Fraction(q) ** (w * i)
            for i in range(d + 1)
        ):
            return eps
    return None


def fe_complete(known: Sequence, degree: int, w: int, q: int, eps: int) -> QPoly:
    """Fill coefficients of a degree-``degree`` polynomial from its low half
    using c_{d-i} = eps * c_i q^{w(d/2-i)}."""
    d = degree
    root = isqrt(q ** (w * d))
    if root * root != q ** (w * d):
        raise ValueError("q^{wd} must be a perfect square")
    c: list = [None] * (d + 1)
    for i, x in enumerate(known[: d + 1]):
        c[i] = Fraction(x)
    for i in range(d + 1):
        j = d - i
        if c[j] is None and c[i] is not None:
            c[j] = eps * c[i] * root / Fraction(q) ** (w * i)
    if any(x is None for x in c):
        raise ValueError("not enough known coefficients")
    return ptrim(c)


@dataclass(frozen=True)
class FEReconstruction:
    poly: tuple[int, ...]
    sign: int
    filled: bool  # top coefficients came from the functional equation
    checks: int  # counted coefficients verified beyond those used to build poly


def fe_reconstruct(counted: Sequence[int], degree: int, w: int, q: int) -> FEReconstruction:
    """A degree-``degree`` integer polynomial with P(0) = 1 satisfying the
    weight-w functional equation, from its counted coefficients c_0..c_N.

    With N >= degree the polynomial is read off and c_{degree+1..N} must
    vanish.  Otherwise the sign comes from the counted pairs (c_i, c_{d-i})
    and all of them must agree; needs 2N >= degree.
    """
    R = [Fraction(c) for c in counted]
    N, d = len(R) - 1, degree
    if d < 0:
        raise ReconstructionError(f"negative degree {d}")
    if not R or R[0] != 1:
        raise ReconstructionError("constant coefficient must be 1")
    if N >= d:
        P = ptrim(R[: d + 1])
        if any(R[d + 1 :]):
            raise ReconstructionError(f"coefficients beyond degree {d} do not vanish")
        if pdeg(P) != d:
            raise ReconstructionError(f"degree {pdeg(P)} instead of {d}")
        eps = functional_equation_check(P, w, q)
        if eps is None:
            raise ReconstructionError("functional equation fails")
        return FEReconstruction(as_int_poly(P), eps, False, N - d)
    if 2 * N < d:
        raise ReconstructionError(f"{N} coefficients cannot determine degree {d}")
    root = isqrt(q ** (w * d))
    if root * root != q ** (w * d):
        raise ReconstructionError("q^{wd} is not a square")
    # c_{d-i} = eps c_i q^{w(d/2 - i)}
    ratios = set()
    pairs = 0
    for i in range(d - N, N + 1):
        factor = Fraction(root) / Fraction(q) ** (w * i)
        lhs, rhs = R[d - i], R[i] * factor
        pairs += 1
        if rhs != 0:
            ratios.add(lhs / rhs)
        elif lhs != 0:
            raise ReconstructionError("counted coefficients violate the functional equation")
    if not ratios:
        raise ReconstructionError("functional-equation sign is undetermined")
    if len(ratios) != 1 or abs(next(iter(ratios))) != 1:
        raise ReconstructionError("counted coefficients violate the functional equation")
    eps = int(next(iter(ratios)))
    P = fe_complete(R, d, w, q, eps)
    if not is_integral(P):
        raise ReconstructionError("completion is not integral")
    return FEReconstruction(as_int_poly(P), eps, True, pairs - 1)
