"""Local reduction of y^2 = x^3 + a x + b over F_q(t), p >= 5.

In residue characteristic >= 5 the Kodaira type of a minimal model is read
off from (ord a, ord b, ord Delta).  What needs more work is the Frobenius
action on the components: for I_n the tangent slopes at the node, for IV and
IV* a square test, for I0* the splitting of a cubic, and for I_n* the last
quadratic of the I_n* subprocedure of Tate's algorithm, which we run with
explicit x-translations.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field, replace

from . import fpoly
from .fields import FieldDesc, field_of_order, prime_power
from .motive import FrobeniusModule, induce
from .places import (
    PLACE_AT_INFINITY,
    Place,
    RatFunc,
    leading_residue,
    lift_residue,
    local_valuation,
    residue,
    residue_field,
    uniformizer,
)

INF = 10**9


class UnsupportedCharacteristic(ValueError):
    pass


class SingularCurve(ValueError):
    pass


def _val(f: RatFunc, v: Place) -> int:
    return INF if f.is_zero() else local_valuation(f, v)


@dataclass(frozen=True)
class CurveOverK:
    """y^2 = x^3 + a x + b over F_q(t)."""

    q: int
    a: RatFunc
    b: RatFunc
    name: str = field(default="", compare=False)

    def __post_init__(self):
        p, _ = prime_power(self.q)
        if p < 5:
            raise UnsupportedCharacteristic(f"characteristic {p} is not supported (need p >= 5)")
        if self.discriminant.is_zero():
            raise SingularCurve("discriminant vanishes identically")

    @classmethod
    def make(cls, q: int, a, b, name: str = "") -> "CurveOverK":
        a = a if isinstance(a, RatFunc) else RatFunc.from_json(q, a)
        b = b if isinstance(b, RatFunc) else RatFunc.from_json(q, b)
        return cls(q, a, b, name)

    @property
    def p(self) -> int:
        return prime_power(self.q)[0]

    @property
    def F(self) -> FieldDesc:
        return field_of_order(self.q)

    @functools.cached_property
    def discriminant(self) -> RatFunc:
        a, b = self.a, self.b
        return (a**3 * 4 + b**2 * 27) * (-16)

    @functools.cached_property
    def j_invariant(self) -> RatFunc:
        a3 = self.a**3 * 4
        return (a3 * 1728) / (a3 + self.b**2 * 27)

    @property
    def constant_part(self) -> tuple[int, int] | None:
        """(a, b) in F_q when the curve is constant, else None."""
        if self.a.is_constant() and self.b.is_constant():
            return (self.a.num[0] if self.a.num else 0, self.b.num[0] if self.b.num else 0)
        return None

    def shift(self, c: int) -> "CurveOverK":
        """The curve with t replaced by t + c."""
        return CurveOverK(self.q, self.a.subs_shift(c), self.b.subs_shift(c), self.name)

    def to_json(self) -> dict:
        return {"q": self.q, "a": self.a.to_json(), "b": self.b.to_json(), "constant": self.constant_part is not None}

    @classmethod
    def from_json(cls, d: dict) -> "CurveOverK":
        try:
            q = int(d["q"])
            E = cls.make(q, d["a"], d["b"], d.get("name", ""))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed curve description: {exc}") from exc
        declared = d.get("constant")
        if declared is not None and bool(declared) != (E.constant_part is not None):
            raise ValueError("'constant' flag does not match the coefficients")
        return E


def short_weierstrass(q: int, a2: RatFunc, a4: RatFunc, a6: RatFunc) -> tuple[RatFunc, RatFunc]:
    """(a, b) with y^2 = x^3 + a2 x^2 + a4 x + a6 isomorphic to y^2 = x^3 + a x + b."""
    F = field_of_order(q)
    third = RatFunc.const(q, F.inv(3 % F.p))
    s = a2 * third  # x -> x - a2/3
    a = a4 - a2 * s
    b = a6 - a4 * s + s**3 * 2
    return a, b


# -- minimal models ----------------------------------------------------------------


@dataclass(frozen=True)
class MinimalModel:
    place: Place
    a: RatFunc
    b: RatFunc
    scale: int  # k with (a', b') = (pi^{-4k} a, pi^{-6k} b)
    ord_a: int
    ord_b: int
    disc_val: int


def minimal_model(E: CurveOverK, v: Place) -> MinimalModel:
    va, vb = _val(E.a, v), _val(E.b, v)
    k = min(va // 4, vb // 6)
    pi = uniformizer(E.q, v)
    a, b = E.a, E.b
    if k:
        a = a / pi ** (4 * k) if not a.is_zero() else a
        b = b / pi ** (6 * k) if not b.is_zero() else b
    dv = local_valuation(E.discriminant, v) - 12 * k
    return MinimalModel(v, a, b, k, va - 4 * k if va < INF else INF, vb - 6 * k if vb < INF else INF, dv)


# -- Kodaira types and component data ---------------------------------------------------


@dataclass(frozen=True)
class LocalReductionData:
    place: Place
    kodaira: str
    conductor_exp: int
    component_count_geom: int
    component_frobenius: tuple[int, ...]
    split: bool | None
    phi_order: int
    disc_val: int
    residue_size: int
    multiplicities: tuple[int, ...] = ()

    @property
    def is_good(self) -> bool:
        return self.conductor_exp == 0

    @property
    def is_multiplicative(self) -> bool:
        return self.conductor_exp == 1

    def h1_trace(self, k: int = 1) -> int:
        """Trace of Frobenius^k on H^1 of the geometric special fibre (bad places)."""
        if self.conductor_exp != 1:
            return 0
        return 1 if self.split or k % 2 == 0 else -1

    def fixed_components(self, k: int = 1) -> int:
        perm = self.component_frobenius
        count = 0
        for i in range(len(perm)):
            j = i
            for _ in range(k):
                j = perm[j]
            count += j == i
        return count

    def bad_fiber_count(self, k: int = 1) -> int:
        """Points of the special fibre of the regular model over the degree-k
        extension of the residue field."""
        if self.is_good:
            raise ValueError("good fibres need the trace of Frobenius")
        Q = self.residue_size**k
        return 1 - self.h1_trace(k) + Q * self.fixed_components(k)

    def to_json(self) -> dict:
        return {
            "place": self.place.to_json(),
            "kodaira": self.kodaira,
            "conductor_exp": self.conductor_exp,
            "component_count_geom": self.component_count_geom,
            "component_frobenius": list(self.component_frobenius),
            "split": self.split,
            "phi_order": self.phi_order,
            "disc_val": self.disc_val,
        }

    @classmethod
    def from_json(cls, d: dict, q: int) -> "LocalReductionData":
        kod = d["kodaira"]
        mults, _ = component_layout(kod)
        v = Place.from_json(d["place"])
        return cls(
            v,
            kod,
            int(d["conductor_exp"]),
            int(d["component_count_geom"]),
            tuple(d["component_frobenius"]),
            d.get("split"),
            int(d["phi_order"]),
            int(d["disc_val"]),
            v.norm(q),
            mults,
        )


def parse_kodaira(tag: str) -> tuple[str, int]:
    """('In', n), ('In*', n) or (tag, 0)."""
    if tag.startswith("I") and tag[1:2].isdigit():
        star = tag.endswith("*")
        n = int(tag[1:-1] if star else tag[1:])
        return ("In*" if star else "In", n)
    return (tag, 0)


def component_layout(tag: str) -> tuple[tuple[int, ...], str]:
    """Multiplicities of the components (index 0 meets the zero section)."""
    kind, n = parse_kodaira(tag)
    if tag == "good":
        return (1,), kind
    if kind == "In":
        return (1,) * n, kind
    if kind == "In*":
        # ends: identity, near, far, far; then the chain of double components
        return (1, 1, 1, 1) + (2,) * (n + 1), kind
    table = {
        "II": (1,),
        "III": (1, 1),
        "IV": (1, 1, 1),
        # identity end, its arm, centre, two further arms
        "IV*": (1, 2, 3, 2, 1, 2, 1),
        "III*": (1, 2, 3, 4, 3, 2, 1, 2),
        "II*": (1, 2, 3, 4, 5, 6, 4, 2, 3),
    }
    if tag not in table:
        raise ValueError(f"unknown Kodaira type {tag!r}")
    return table[tag], kind


KODAIRA_COMPONENTS = {"II": 1, "III": 2, "IV": 3, "IV*": 7, "III*": 8, "II*": 9}


def expected_component_count(tag: str) -> int:
    kind, n = parse_kodaira(tag)
    if tag == "good":
        return 1
    if kind == "In":
        return n
    if kind == "In*":
        return n + 5
    return KODAIRA_COMPONENTS[tag]


def _make_data(q, v, tag, f, perm, split, disc_val) -> LocalReductionData:
    mults, _ = component_layout(tag)
    perm = tuple(perm)
    phi = sum(1 for i, m in enumerate(mults) if m == 1 and perm[i] == i)
    if tag == "good":
        phi = 1
    return LocalReductionData(v, tag, f, len(mults), perm, split, phi, disc_val, v.norm(q), mults)


def _identity(n: int) -> list[int]:
    return list(range(n))


def _residue_at(f: RatFunc, v: Place, e: int):
    if f.is_zero():
        return 0
    return leading_residue(f, v, e).code


def tate_algorithm(E: CurveOverK, v: Place) -> LocalReductionData:
    mm = minimal_model(E, v)
    q = E.q
    F, _ = residue_field(q, v)
    al, be, dl = mm.ord_a, mm.ord_b, mm.disc_val
    if dl == 0:
        return _make_data(q, v, "good", 0, [0], None, 0)
    if al == 0:
        # multiplicative: split iff -c6 = 864 b is a square, i.e. 6 b is
        bres = _residue_at(mm.b, v, 0)
        split = F.chi(F.mul(bres, 6 % F.p)) == 1
        n = dl
        perm = _identity(n) if split else [(-i) % n for i in range(n)]
        return _make_data(q, v, f"I{n}", 1, perm, split, dl)
    if dl == 2:
        return _make_data(q, v, "II", 2, [0], None, dl)
    if dl == 3:
        return _make_data(q, v, "III", 2, [0, 1], None, dl)
    if dl == 4:
        split = F.chi(_residue_at(mm.b, v, 2)) == 1
        return _make_data(q, v, "IV", 2, [0, 1, 2] if split else [0, 2, 1], split, dl)
    if dl == 6 and al >= 2 and be >= 3:
        A = _residue_at(mm.a, v, 2)
        B = _residue_at(mm.b, v, 3)
        degs = sorted(fpoly.deg(g) for g, _ in fpoly.factor(F, (B, A, 0, 1)))
        if degs == [1, 1, 1]:
            ends = [1, 2, 3]
        elif degs == [1, 2]:
            ends = [1, 3, 2]
        else:
            ends = [2, 3, 1]
        return _make_data(q, v, "I0*", 2, [0] + ends + [4], None, dl)
    if dl > 6 and al == 2 and be == 3:
        n = dl - 6
        k, split = _istar_split(mm, v)
        if k != n:
            raise ArithmeticError(f"I_n* subprocedure stopped at {k}, discriminant says {n}")
        perm = [0, 1, 2, 3] if split else [0, 1, 3, 2]
        perm += list(range(4, n + 5))
        return _make_data(q, v, f"I{n}*", 2, perm, split, dl)
    if dl == 8:
        split = F.chi(_residue_at(mm.b, v, 4)) == 1
        perm = [0, 1, 2, 3, 4, 5, 6] if split else [0, 1, 2, 5, 6, 3, 4]
        return _make_data(q, v, "IV*", 2, perm, split, dl)
    if dl == 9:
        return _make_data(q, v, "III*", 2, _identity(8), None, dl)
    if dl == 10:
        return _make_data(q, v, "II*", 2, _identity(9), None, dl)
    raise ArithmeticError(f"unexpected valuations (ord a, ord b, ord D) = {(al, be, dl)} at {v}")


def _istar_split(mm: MinimalModel, v: Place) -> tuple[int, bool]:
    """Run the I_n* loop on y^2 = x^3 + a2 x^2 + a4 x + a6; returns (n, far ends rational)."""
    q = mm.a.q
    F, _ = residue_field(q, v)
    pi = uniformizer(q, v)
    a2 = RatFunc.const(q, 0)
    a4, a6 = mm.a, mm.b

    def translate(c: RatFunc):
        nonlocal a2, a4, a6
        a6 = c**3 + a2 * c**2 + a4 * c + a6
        a4 = c**2 * 3 + a2 * c * 2 + a4
        a2 = a2 + c * 3

    A = _residue_at(a4, v, 2)
    B = _residue_at(a6, v, 3)
    # double root of T^3 + A T + B
    r0 = F.div(F.mul(F.neg(3 % F.p), B), F.mul(2, A))
    translate(lift_residue(q, v, r0) * pi)
    a21 = _residue_at(a2, v, 1)
    for k in range(1, 4 * mm.disc_val + 8):
        if k % 2:
            y = _residue_at(a6, v, k + 3)
            if y:
                return k, F.chi(y) == 1
        else:
            m = k // 2 + 2
            a4m = _residue_at(a4, v, m)
            a6m = _residue_at(a6, v, k + 3)
            disc = F.sub(F.mul(a4m, a4m), F.mul(F.mul(4, a21), a6m))
            if disc:
                return k, F.chi(disc) == 1
            root = F.div(F.neg(a4m), F.mul(2, a21))
            translate(lift_residue(q, v, root) * pi ** (k // 2 + 1))
    raise ArithmeticError("I_n* subprocedure did not terminate")


# -- global data ---------------------------------------------------------------------


def candidate_places(E: CurveOverK) -> list[Place]:
    """Places where the given model may fail to be good: zeros of the
    discriminant, poles of a or b, and infinity."""
    F = E.F
    polys = [E.discriminant.num, E.a.den, E.b.den]
    found: set[Place] = set()
    for f in polys:
        if fpoly.deg(f) >= 1:
            for g, _ in fpoly.factor(F, f):
                found.add(Place("finite", g))
    out = sorted(found, key=Place.sort_key)
    out.append(PLACE_AT_INFINITY)
    return out


@functools.lru_cache(maxsize=64)
def local_data(E: CurveOverK) -> tuple[LocalReductionData, ...]:
    """Tate data at every candidate place (good ones included), sorted."""
    return tuple(tate_algorithm(E, v) for v in candidate_places(E))


def bad_places(E: CurveOverK) -> tuple[LocalReductionData, ...]:
    return tuple(d for d in local_data(E) if not d.is_good)


def conductor_degree(E: CurveOverK) -> int:
    return sum(d.conductor_exp * d.place.degree for d in bad_places(E))


def minimal_disc_degree(E: CurveOverK) -> int:
    """sum_v ord_v(Delta_min) deg v."""
    return sum(d.disc_val * d.place.degree for d in bad_places(E))


def good_reduction_trace(E: CurveOverK, v: Place) -> int:
    """a_v = N(v) + 1 - #E_v(k_v) from the minimal model at a good place."""
    from .counting import curve_trace

    mm = minimal_model(E, v)
    if mm.disc_val:
        raise ValueError(f"bad reduction at {v}")
    F, _ = residue_field(E.q, v)
    A = residue(mm.a, v).code if not mm.a.is_zero() else 0
    B = residue(mm.b, v).code if not mm.b.is_zero() else 0
    return curve_trace(F, A, B)


def local_lfactor(d: LocalReductionData, a_v: int | None = None) -> tuple[int, ...]:
    """Local factor as a polynomial in u = t^{deg v}."""
    if d.is_good:
        if a_v is None:
            raise ValueError("a_v is required at a good place")
        return (1, -a_v, d.residue_size)
    if d.is_multiplicative:
        return (1, -1) if d.split else (1, 1)
    return (1,)


def component_module(d: LocalReductionData) -> FrobeniusModule:
    """Components modulo the fibre class, with the induced Frobenius (weight 0).

    Component 0 has multiplicity one and is Frobenius-stable, so the classes
    of the other components form a basis of the quotient.
    """
    n = d.component_count_geom
    if n <= 1:
        return FrobeniusModule.zero(0, "D")
    perm = d.component_frobenius
    rows = [[0] * (n - 1) for _ in range(n - 1)]
    for i in range(1, n):
        rows[perm[i] - 1][i - 1] = 1
    local = FrobeniusModule.make(rows, 0, "D")
    return induce(local, d.place.degree)


def with_overrides(d: LocalReductionData, **changes) -> LocalReductionData:
    """Copy of d with fields replaced (used for mutation tests)."""
    out = replace(d, **changes)
    if "kodaira" in changes and "multiplicities" not in changes:
        try:
            mults, _ = component_layout(out.kodaira)
            out = replace(out, multiplicities=mults)
        except ValueError:
            pass
    return out
