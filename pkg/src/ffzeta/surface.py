"""The elliptic surface S -> P^1 of a curve over F_q(t): point counts, zeta
function, and the identities relating zeta(S) to L(A) and the fibre
components.

A point of P^1(F_{q^n}) over a place v of degree d | n sees the special
fibre at v base-changed to the degree-n/d extension of k_v.  Good fibres
contribute q^n + 1 - s_{n/d}(v); bad fibres use the Lefschetz count of the
regular model's special fibre, 1 - tr(F | H^1) + q^n * #(fixed components).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .fields import make_field, prime_power
from .lfunction import LNModule, LSeriesResult, place_traces, trace_data
from .motive import FrobeniusModule, K0Class, k0_zfunction, twist
from .places import PLACE_AT_INFINITY, Place, embedding_table
from .reduction import (
    CurveOverK,
    LocalReductionData,
    bad_places,
    component_module,
    good_reduction_trace,
)
from .series import (
    ReconstructionError,
    TruncatedSeries,
    ZRational,
    fe_reconstruct,
    pdivmod,
    pmul,
    pprod,
    psubs_scale,
    ptrim,
    weil_check,
    zeta_from_counts,
)


# -- fibre counts ---------------------------------------------------------------------


def _power_sum(a: int, norm: int, k: int) -> int:
    s_prev, s = 2, a
    for _ in range(k - 1):
        s_prev, s = s, a * s - norm * s_prev
    return s if k >= 1 else 2


def place_of_point(q: int, m: int, x: int | None) -> Place:
    """The closed point of P^1 under x in P^1(F_{q^m}) (None is infinity)."""
    if x is None:
        return PLACE_AT_INFINITY
    p, e = prime_power(q)
    F = make_field(p, e * m)
    conj = [x]
    while True:
        y = F.pow(conj[-1], q)
        if y == x:
            break
        conj.append(y)
    poly: tuple[int, ...] = (1,)
    for c in conj:
        poly = _mul_linear(F, poly, F.neg(c))
    back = {code: i for i, code in enumerate(embedding_table(q, m))}
    return Place("finite", tuple(back[c] for c in poly))


def _mul_linear(F, f, c):
    # f * (T + c)
    out = [0] * (len(f) + 1)
    for i, a in enumerate(f):
        out[i + 1] = F.add(out[i + 1], a)
        out[i] = F.add(out[i], F.mul(a, c))
    return tuple(out)


def fiber_count(E: CurveOverK, point: int | None, m: int, bad: Sequence[LocalReductionData] | None = None) -> int:
    """#(fibre over the point)(F_{q^m}) on the smooth projective surface."""
    v = place_of_point(E.q, m, point)
    k = m // v.degree
    for d in bad_places(E) if bad is None else bad:
        if d.place == v:
            return d.bad_fiber_count(k)
    a = good_reduction_trace(E, v)
    return E.q**m + 1 - _power_sum(a, v.norm(E.q), k)


class NotEllipticSurface(ValueError):
    """Local data incompatible with Noether's formula."""


@dataclass(frozen=True)
class Corruption:
    """Deliberate damage for negative controls: offsets added to the point
    counts of selected bad fibres (by index in sorted order)."""

    fiber_offsets: Mapping[int, int] = field(default_factory=dict)

    @classmethod
    def parse(cls, spec: str | None) -> "Corruption":
        if not spec:
            return cls()
        kind, _, arg = spec.partition(":")
        if kind != "fiber":
            raise ValueError(f"unknown corruption {spec!r}")
        return cls({int(arg or 0): 1})


def surface_counts(
    E: CurveOverK,
    n_max: int,
    threads: int = 1,
    bad: Sequence[LocalReductionData] | None = None,
    corruption: Corruption | None = None,
) -> list[int]:
    """N_n = #S(F_{q^n}) for n = 1..n_max."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    q = E.q
    tr = place_traces(E, n_max, threads)
    bad = list(tr.bad if bad is None else bad)
    offsets = corruption.fiber_offsets if corruption else {}
    out = []
    for n in range(1, n_max + 1):
        total = 0
        Q = q**n
        for d, traces in tr.good.items():
            if n % d:
                continue
            k = n // d
            Nv = q**d
            total += d * sum(Q + 1 - _power_sum(a, Nv, k) for a in traces)
        for i, bd in enumerate(bad):
            d = bd.place.degree
            if n % d == 0:
                total += d * (bd.bad_fiber_count(n // d) + offsets.get(i, 0))
        out.append(total)
    return out


# -- zeta(S) --------------------------------------------------------------------------


@dataclass
class SurfaceModel:
    curve: CurveOverK
    bad_fibers: tuple[LocalReductionData, ...]
    dimB: int
    h1B: tuple[int, ...]

    @classmethod
    def build(cls, E: CurveOverK, bad: Sequence[LocalReductionData] | None = None) -> "SurfaceModel":
        dimB, h1B = trace_data(E)
        return cls(E, tuple(bad_places(E) if bad is None else bad), dimB, h1B)

    @property
    def euler_number(self) -> int:
        return sum(d.disc_val * d.place.degree for d in self.bad_fibers)

    @property
    def betti(self) -> tuple[int, int, int, int, int]:
        b1 = 2 * self.dimB
        return (1, b1, self.euler_number - 2 + 2 * b1, b1, 1)

    @property
    def n_max(self) -> int:
        b2 = self.betti[2]
        return max(1, -(-b2 // 2) + 2)

    @property
    def noether_ok(self) -> bool:
        """e(S) = 12 chi(O_S) with chi >= 0 for a minimal elliptic surface."""
        return self.euler_number >= 0 and self.euler_number % 12 == 0

    def divisor_module(self) -> FrobeniusModule:
        D = FrobeniusModule.zero(0, "D")
        for d in self.bad_fibers:
            D = D + component_module(d)
        return D


@dataclass
class SurfaceZeta:
    model: SurfaceModel
    counts: list[int]
    P: tuple[tuple[int, ...], ...]  # P0..P4
    zeta: ZRational
    fe_sign: int
    fe_filled: bool
    checks: int

    @property
    def P2(self) -> tuple[int, ...]:
        return self.P[2]

    def to_json(self) -> dict:
        m = self.model
        return {
            "curve": m.curve.to_json(),
            "euler_number": m.euler_number,
            "betti": list(m.betti),
            "n_max": len(self.counts),
            "counts": self.counts,
            "P": [list(p) for p in self.P],
            "zeta": self.zeta.to_json(),
            "P2_fe_sign": self.fe_sign,
            "P2_fe_filled": self.fe_filled,
            "P2_extra_checks": self.checks,
        }


def surface_zeta(
    E: CurveOverK,
    threads: int = 1,
    bad: Sequence[LocalReductionData] | None = None,
    corruption: Corruption | None = None,
) -> SurfaceZeta:
    """zeta(S, t) = P1 P3 / (P0 P2 P4) with P2 solved from point counts."""
    S = SurfaceModel.build(E, bad)
    q = E.q
    if not S.noether_ok:
        raise NotEllipticSurface(f"e(S) = {S.euler_number} is not a non-negative multiple of 12")
    b2 = S.betti[2]
    if b2 < 0:
        raise ReconstructionError(f"negative second Betti number {b2}")
    n = S.n_max
    counts = surface_counts(E, n, threads, S.bad_fibers, corruption)
    P0, P4 = (1, -1), (1, -(q**2))
    P1, P3 = S.h1B, tuple(int(c) for c in psubs_scale(S.h1B, q))
    Z = zeta_from_counts(counts)
    known = TruncatedSeries.from_rational(pmul(P1, P3), pmul(P0, P4), n)
    R = (known * Z.inverse()).coefficients
    if any(Fraction(c).denominator != 1 for c in R):
        raise ReconstructionError("non-integral coefficients in P2(S)")
    rec = fe_reconstruct([int(c) for c in R], b2, 2, q)
    P2 = rec.poly
    zeta = ZRational.make(pmul(P1, P3), pprod([P0, P2, P4]))
    return SurfaceZeta(S, counts, (P0, P1, P2, P3, P4), zeta, rec.sign, rec.filled, rec.checks)


# -- identities -----------------------------------------------------------------------


def _zeta_P1(q: int) -> ZRational:
    return ZRational.inverse_poly(pmul((1, -1), (1, -q)))


def verify_c41(Sz: SurfaceZeta, L: LSeriesResult) -> dict:
    """zeta(S, t) = zeta_C(t) zeta_C(qt) / L_A(t) * det(1 - q t F_D)^{-1}."""
    q = L.q
    D = Sz.model.divisor_module()
    detD = psubs_scale(D.charpoly(), q)
    zc = _zeta_P1(q)
    LA = ZRational.make(L.P1, pmul(L.P0, L.P2))
    rhs = zc * zc.subs_scale(q) / LA * ZRational.inverse_poly(detD)
    ok = Sz.zeta == rhs
    quotient = Sz.zeta / rhs
    return {
        "pass": ok,
        "lhs": Sz.zeta.to_json(),
        "rhs": rhs.to_json(),
        "quotient": quotient.to_json(),
        "dim_D": D.dim,
        "det_1_minus_qtFD": [int(c) for c in detD],
    }


def verify_t12_2(Sz: SurfaceZeta, L: LSeriesResult, LN: LNModule | None = None) -> dict:
    """H - H' = [D(-1)], the h^2 class identity, and the transcendental quotient.

    * h_minus_hprime: zeta(S) / Z(H') = Z(D(-1)) with Z(H') built from
      h(C), h(C)(-1) and the L-function of A.
    * k0_h2: [h^2 S] = 2[L] + [D(-1)] + [ln(-1)] + [sha] via Z-functions.
    * transcendental: P2(S) / ((1 - qt)^2 det(1 - qtF_D) det(1 - qtF_ln))
      equals the sha polynomial extracted from P1.
    """
    q = L.q
    LN = LN or L.LN
    D = Sz.model.divisor_module()
    detD = psubs_scale(D.charpoly(), q)
    detLN = LN.twisted_charpoly(q)
    sha = L.sha_z_inverse
    if sha is None:
        from .lfunction import extract_sha_zfunction

        sha = extract_sha_zfunction(L.P1, LN, q)
    zc = _zeta_P1(q)
    ZH_prime = zc * zc.subs_scale(q) / ZRational.make(L.P1, pmul(L.P0, L.P2))
    ZD1 = ZRational.inverse_poly(detD)
    h_minus_hprime = Sz.zeta / ZH_prime == ZD1

    h2 = FrobeniusModule.from_charpoly(Sz.P2, 2, "h2")
    lhs = K0Class.of(h2)
    rhs = K0Class.of(FrobeniusModule.lefschetz(q), 2) + K0Class.of(twist(D, 1, q))
    rhs = rhs + K0Class.of(twist(LN.module, 1, q)) + K0Class.of(FrobeniusModule.from_charpoly(sha, 2, "sha"))
    k0_ok = k0_zfunction(lhs) == k0_zfunction(rhs)

    ns = pprod([(1, -q), (1, -q), detD, detLN])
    quo, rem = pdivmod(ptrim(Sz.P2), ns)
    transcendental = tuple(int(c) for c in quo) if not rem and all(Fraction(c).denominator == 1 for c in quo) else None
    trans_ok = transcendental is not None and tuple(transcendental) == tuple(sha)
    return {
        "pass": h_minus_hprime and k0_ok and trans_ok,
        "h_minus_hprime": h_minus_hprime,
        "k0_h2": k0_ok,
        "transcendental_eq_sha": trans_ok,
        "P2_S": list(Sz.P2),
        "ns_factor": [int(c) for c in ns],
        "transcendental": list(transcendental) if transcendental is not None else None,
        "sha_z_inverse": list(sha),
        "ns_rank": 2 + LN.rank + D.dim,
    }


def weil_report(Sz: SurfaceZeta) -> dict:
    q = Sz.model.curve.q
    out = {}
    for i, P in enumerate(Sz.P):
        out[f"P{i}"] = bool(weil_check(P, i, q))
    return out


def euler_number_check(Sz: SurfaceZeta) -> dict:
    """e(S) from zeta degrees against sum ord(Delta_min) deg v."""
    degs = [len(P) - 1 for P in Sz.P]
    e_zeta = degs[0] - degs[1] + degs[2] - degs[3] + degs[4]
    e = Sz.model.euler_number
    return {
        "e_from_zeta": e_zeta,
        "e_from_discriminant": e,
        "noether_divisible_by_12": Sz.model.noether_ok,
        "pass": e_zeta == e and Sz.model.noether_ok,
    }


__all__ = [
    "Corruption",
    "NotEllipticSurface",
    "SurfaceModel",
    "SurfaceZeta",
    "euler_number_check",
    "fiber_count",
    "place_of_point",
    "surface_counts",
    "surface_zeta",
    "verify_c41",
    "verify_t12_2",
    "weil_report",
]
