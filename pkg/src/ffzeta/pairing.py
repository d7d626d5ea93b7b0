"""Pairings between finitely generated abelian groups with adjoint operators.

Conventions.  ``M = Z^m / rowspan(relations)``; elements are row vectors and
an operator acts on the right, ``x -> x @ F``.  The pairing is
``<x, y> = x @ G @ y^T``.  Adjointness means ``<xF, y> = <x, yF'>``, that is
``F @ G == G @ F'^T``.

With ``P = det(1 - F T)`` on ``M (x) Q``, ``rho`` its order of vanishing at
``T = 1`` and ``P' = P / (1 - T)^rho``, the report evaluates

* ``rho`` against ``rank M^F``;
* ``|P'(1)|`` against ``det<,>^F / det<,> * |(M^F)_tors| / |(M_F)_tors|``
  (``rhs_printed``) and against the same with the torsion ratio swapped;
* ``|P'(1)|`` against ``|coker| / |ker|`` of ``M^F -> M_F`` and against
  ``det<,>^F / det<,>_F * |(M_F)_tors| / |(M^F)_tors|``, where ``<,>_F`` is
  the pairing on ``(M_F)/tors x M'^F'`` (``rhs_general``).

Only the last two are identities for arbitrary instances.  The swapped form
agrees with them when M and M' are torsion free and the pairing is perfect.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import lattice as lat
from .motive import inverse_charpoly
from .series import as_int_poly, pdivmod, peval, pgcd, ptrim


class PairingPreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class PairingInstance:
    m: int
    relations: tuple[tuple[int, ...], ...]
    m_dual: int
    relations_dual: tuple[tuple[int, ...], ...]
    pairing: tuple[tuple[int, ...], ...]
    F: tuple[tuple[int, ...], ...]
    F_dual: tuple[tuple[int, ...], ...]
    label: str = field(default="", compare=False)

    @classmethod
    def make(cls, m, relations, m_dual, relations_dual, pairing, F, F_dual, label="") -> "PairingInstance":
        t = lambda A: tuple(tuple(int(x) for x in r) for r in A)
        return cls(int(m), t(relations), int(m_dual), t(relations_dual), t(pairing), t(F), t(F_dual), label)

    def to_json(self) -> dict:
        l = lambda A: [list(r) for r in A]
        return {
            "m": self.m, "relations": l(self.relations),
            "m_dual": self.m_dual, "relations_dual": l(self.relations_dual),
            "pairing": l(self.pairing), "F": l(self.F), "F_dual": l(self.F_dual),
        }

    @classmethod
    def from_json(cls, d: dict) -> "PairingInstance":
        return cls.make(d["m"], d.get("relations", []), d["m_dual"], d.get("relations_dual", []),
                        d["pairing"], d["F"], d["F_dual"], d.get("label", ""))


@dataclass(frozen=True)
class _Group:
    """Z^m / rowspan(R) in Smith coordinates."""

    m: int
    R: list
    V: list
    Vinv: list
    r: int  # rank of the relation lattice
    torsion: list

    @property
    def rank(self) -> int:
        return self.m - self.r

    def free_coords(self, x: Sequence[int]) -> list[int]:
        return lat.matmul([list(x)], self.V)[0][self.r:] if self.m else []

    def free_lift(self, f: Sequence[int]) -> list[int]:
        y = [0] * self.r + list(f)
        return lat.matmul([y], self.Vinv)[0]


def _int_inverse(A) -> list:
    n = len(A)
    M = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(A)]
    for c in range(n):
        p = next(r for r in range(c, n) if M[r][c])
        M[c], M[p] = M[p], M[c]
        pv = M[c][c]
        M[c] = [x / pv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c]:
                f = M[r][c]
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    out = [[x for x in r[n:]] for r in M]
    if any(x.denominator != 1 for r in out for x in r):
        raise ValueError("matrix is not unimodular")
    return [[int(x) for x in r] for r in out]


def _group(m: int, R) -> _Group:
    R = [list(r) for r in R if any(r)]
    if not R:
        I = lat.eye(m)
        return _Group(m, [], I, I, 0, [])
    S = lat.smith_normal_form(R, m)
    inv = S.invariants
    return _Group(m, R, S.V, _int_inverse(S.V), len(inv), [d for d in inv if d > 1])


def _sub(A, B):
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def _invariant_lattice(g: _Group, F) -> list:
    """Basis of {x in Z^m : x (F - 1) in rowspan R}."""
    m = g.m
    FmI = _sub(F, lat.eye(m))
    stacked = FmI + [list(r) for r in g.R]
    ker = lat.integer_kernel(stacked, m)
    return lat.hermite_basis([k[:m] for k in ker] + g.R, m)


def _quotient_of_lattices(L: list, R: list, m: int) -> tuple[int, list[int]]:
    """Structure of rowspan(L) / rowspan(R) for R inside L (L a basis)."""
    if not L:
        return 0, []
    if not R:
        return len(L), []
    # coordinates of R in the basis L: solve C L = R over Q
    n = len(L)
    cols = [[Fraction(L[i][j]) for i in range(n)] for j in range(m)]
    coords = []
    for r in R:
        rows = [c[:] + [Fraction(r[j])] for j, c in enumerate(cols)]
        # Gaussian elimination on the (m x n | 1) system
        piv = []
        k = 0
        for c in range(n):
            p = next((i for i in range(k, m) if rows[i][c]), None)
            if p is None:
                continue
            rows[k], rows[p] = rows[p], rows[k]
            pv = rows[k][c]
            rows[k] = [x / pv for x in rows[k]]
            for i in range(m):
                if i != k and rows[i][c]:
                    f = rows[i][c]
                    rows[i] = [a - f * b for a, b in zip(rows[i], rows[k])]
            piv.append(c)
            k += 1
        sol = [Fraction(0)] * n
        for i, c in enumerate(piv):
            sol[c] = rows[i][n]
        if any(x.denominator != 1 for x in sol):
            raise PairingPreconditionError("relation lattice is not contained in the invariant lattice")
        coords.append([int(x) for x in sol])
    return lat.quotient_structure(coords, n)


def _image_basis(g: _Group, L: list) -> list:
    """Lifts of a basis of the image of rowspan(L) in the free quotient."""
    imgs = lat.hermite_basis([g.free_coords(x) for x in L], g.rank)
    return [g.free_lift(f) for f in imgs]


def _gram(B, G, Bd) -> list:
    return lat.matmul(lat.matmul(B, G), lat.transpose(Bd, len(G[0]) if G else 0)) if B and Bd else []


def _free_operator(g: _Group, F) -> list:
    Fy = lat.matmul(lat.matmul(g.Vinv, F), g.V)
    return [r[g.r:] for r in Fy[g.r:]]


def _is_semisimple(A: list) -> bool:
    n = len(A)
    if n == 0:
        return True
    P = inverse_charpoly(tuple(tuple(Fraction(x) for x in r) for r in A))
    # monic characteristic polynomial, ascending: x^n P(1/x)
    chi = ptrim(list(reversed(P)))
    dchi = ptrim([i * c for i, c in enumerate(chi)][1:])
    g = pgcd(chi, dchi)
    rad, rem = pdivmod(chi, g)
    assert not ptrim(rem)
    # evaluate the radical at A (Horner)
    M = [[Fraction(0)] * n for _ in range(n)]
    for c in reversed(rad):
        M = [[sum(M[i][k] * A[k][j] for k in range(n)) + (c if i == j else 0) for j in range(n)] for i in range(n)]
    return all(x == 0 for r in M for x in r)


def finite_order(A: list, bound: int = 60) -> int | None:
    n = len(A)
    if n == 0:
        return 1
    I = lat.eye(n)
    P = I
    for k in range(1, bound + 1):
        P = lat.matmul(P, A)
        if P == I:
            return k
    return None


def validate(inst: PairingInstance) -> tuple[_Group, _Group]:
    m, md = inst.m, inst.m_dual
    G = [list(r) for r in inst.pairing]
    F = [list(r) for r in inst.F]
    Fd = [list(r) for r in inst.F_dual]
    shape_ok = (
        len(G) == m and all(len(r) == md for r in G)
        and len(F) == m and all(len(r) == m for r in F)
        and len(Fd) == md and all(len(r) == md for r in Fd)
        and all(len(r) == m for r in inst.relations)
        and all(len(r) == md for r in inst.relations_dual)
    )
    if not shape_ok:
        raise PairingPreconditionError("matrix shapes are inconsistent")
    g, gd = _group(m, inst.relations), _group(md, inst.relations_dual)
    for name, grp, op in (("F", g, F), ("F'", gd, Fd)):
        for r in grp.R:
            if not lat.in_row_span(lat.matmul([r], op)[0], grp.R):
                raise PairingPreconditionError(f"{name} does not preserve the relations")
    if any(any(x) for x in lat.matmul([list(r) for r in inst.relations], G)):
        raise PairingPreconditionError("pairing does not vanish on the relations of M")
    if any(any(x) for x in lat.matmul(G, lat.transpose([list(r) for r in inst.relations_dual], md))):
        raise PairingPreconditionError("pairing does not vanish on the relations of M'")
    if lat.matmul(F, G) != lat.matmul(G, lat.transpose(Fd, md)):
        raise PairingPreconditionError("F and F' are not adjoint for the pairing")
    if g.rank != gd.rank:
        raise PairingPreconditionError("pairing is degenerate: ranks differ")
    B = [g.free_lift(e) for e in lat.eye(g.rank)]
    Bd = [gd.free_lift(e) for e in lat.eye(gd.rank)]
    if g.rank and lat.det(_gram(B, G, Bd)) == 0:
        raise PairingPreconditionError("pairing is degenerate over Q")
    if not _is_semisimple(_free_operator(g, F)):
        raise PairingPreconditionError("F is not semisimple over Q")
    return g, gd


@dataclass(frozen=True)
class PairingReport:
    rank: int
    rho: int
    rank_invariants: int
    P: tuple[int, ...]
    P_prime_at_1: int
    det_pairing: Fraction
    det_pairing_invariant: Fraction
    det_pairing_coinvariant: Fraction
    torsion_invariants: tuple[int, ...]
    torsion_coinvariants: tuple[int, ...]
    coker_order: int
    ker_order: int

    @property
    def tors_invariants(self) -> int:
        return math.prod(self.torsion_invariants)

    @property
    def tors_coinvariants(self) -> int:
        return math.prod(self.torsion_coinvariants)

    @property
    def lhs(self) -> Fraction:
        return Fraction(abs(self.P_prime_at_1))

    @property
    def rhs_printed(self) -> Fraction:
        """det<,>^F / det<,> * |(M^F)_tors| / |(M_F)_tors|."""
        return self.det_pairing_invariant / self.det_pairing * Fraction(self.tors_invariants, self.tors_coinvariants)

    @property
    def rhs_swapped_torsion(self) -> Fraction:
        """det<,>^F / det<,> * |(M_F)_tors| / |(M^F)_tors|."""
        return self.det_pairing_invariant / self.det_pairing * Fraction(self.tors_coinvariants, self.tors_invariants)

    @property
    def rhs_general(self) -> Fraction:
        """As above with det<,> taken on (M_F)/tors x M'^F'."""
        return self.det_pairing_invariant / self.det_pairing_coinvariant * Fraction(
            self.tors_coinvariants, self.tors_invariants
        )

    @property
    def z_invariant(self) -> Fraction:
        """|coker| / |ker| of the natural map M^F -> M_F."""
        return Fraction(self.coker_order, self.ker_order)

    @property
    def rho_ok(self) -> bool:
        return self.rho == self.rank_invariants

    @property
    def printed_ok(self) -> bool:
        return self.lhs == self.rhs_printed

    @property
    def general_ok(self) -> bool:
        return self.lhs == self.rhs_general == self.z_invariant

    @property
    def holds(self) -> bool:
        return self.rho_ok and self.general_ok

    def to_json(self) -> dict:
        f = str
        return {
            "rank": self.rank, "rho": self.rho, "rank_invariants": self.rank_invariants,
            "P": list(self.P), "P_prime_at_1": self.P_prime_at_1,
            "det_pairing": f(self.det_pairing),
            "det_pairing_invariant": f(self.det_pairing_invariant),
            "det_pairing_coinvariant": f(self.det_pairing_coinvariant),
            "torsion_invariants": list(self.torsion_invariants),
            "torsion_coinvariants": list(self.torsion_coinvariants),
            "coker_order": self.coker_order, "ker_order": self.ker_order,
            "rhs_printed": f(self.rhs_printed), "rhs_swapped_torsion": f(self.rhs_swapped_torsion),
            "rhs_general": f(self.rhs_general),
            "rho_ok": self.rho_ok, "printed_ok": self.printed_ok, "general_ok": self.general_ok,
        }


def _lattice_intersection(A: list, B: list, m: int) -> list:
    if not A or not B:
        return []
    ker = lat.integer_kernel(A + [[-x for x in r] for r in B], m)
    return lat.hermite_basis([lat.matmul([k[: len(A)]], A)[0] for k in ker], m)


def pairing_lemma_check(inst: PairingInstance) -> PairingReport:
    g, gd = validate(inst)
    G = [list(r) for r in inst.pairing]
    F = [list(r) for r in inst.F]
    Fd = [list(r) for r in inst.F_dual]
    m = g.m

    Fbar = _free_operator(g, F)
    P = as_int_poly(inverse_charpoly(tuple(tuple(Fraction(x) for x in r) for r in Fbar)))
    rho, Pp = 0, list(P)
    while len(Pp) > 1 and peval(Pp, 1) == 0:
        Pp, rem = pdivmod(Pp, [1, -1])
        assert not ptrim(rem)
        rho += 1
    P1 = int(peval(Pp, 1))

    L = _invariant_lattice(g, F)
    rank_inv, tors_inv = _quotient_of_lattices(L, g.R, m)
    W = lat.hermite_basis(g.R + _sub(F, lat.eye(m)), m)
    coinv = _group(m, W)

    # the natural map M^F -> M_F
    coker_rank, coker_tors = lat.quotient_structure(W + L, m)
    if coker_rank:
        raise PairingPreconditionError("M^F -> M_F is not a rational isomorphism")
    ker_rank, ker_tors = _quotient_of_lattices(_lattice_intersection(L, W, m), g.R, m)
    assert ker_rank == 0

    B = [g.free_lift(e) for e in lat.eye(g.rank)]
    Bd = [gd.free_lift(e) for e in lat.eye(gd.rank)]
    det_all = abs(lat.det(_gram(B, G, Bd))) if g.rank else Fraction(1)
    BF = _image_basis(g, L)
    BFd = _image_basis(gd, _invariant_lattice(gd, Fd))
    if len(BF) != len(BFd) or coinv.rank != len(BFd):
        raise PairingPreconditionError("invariant ranks of M and M' differ")
    det_F = abs(lat.det(_gram(BF, G, BFd))) if BF else Fraction(1)
    BC = [coinv.free_lift(e) for e in lat.eye(coinv.rank)]
    det_C = abs(lat.det(_gram(BC, G, BFd))) if BC else Fraction(1)
    if det_F == 0 or det_C == 0:
        raise PairingPreconditionError("restricted pairing is degenerate")

    return PairingReport(
        rank=g.rank, rho=rho, rank_invariants=rank_inv, P=tuple(P), P_prime_at_1=P1,
        det_pairing=Fraction(det_all), det_pairing_invariant=Fraction(det_F),
        det_pairing_coinvariant=Fraction(det_C),
        torsion_invariants=tuple(tors_inv), torsion_coinvariants=tuple(coinv.torsion),
        coker_order=math.prod(coker_tors), ker_order=math.prod(ker_tors),
    )


# random instances ---------------------------------------------------------

_BLOCKS: list[tuple[list[list[int]], int]] = [
    ([[1]], 1),
    ([[-1]], 2),
    ([[0, 1], [1, 0]], 2),
    ([[0, -1], [1, -1]], 3),
    ([[0, -1], [1, 0]], 4),
    ([[0, -1], [1, 1]], 6),
    ([[0, 1, 0], [0, 0, 1], [1, 0, 0]], 3),
]

_TORSION_SHAPES = [[], [2], [3], [4], [5], [6], [7], [8], [2, 2], [2, 4], [2, 2, 2]]


def _finite_order_operator(rng: random.Random, r: int, max_order: int) -> tuple[list, int]:
    while True:
        blocks, size, order = [], 0, 1
        while size < r:
            b, o = rng.choice(_BLOCKS)
            if size + len(b) > r:
                continue
            blocks.append(b)
            size += len(b)
            order = math.lcm(order, o)
        if order <= max_order:
            break
    out = [[0] * r for _ in range(r)]
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                out[off + i][off + j] = x
        off += len(b)
    return out, order


def _invariant_form(rng: random.Random, Phi: list, order: int) -> list:
    r = len(Phi)
    A = [[rng.randint(-2, 2) for _ in range(r)] for _ in range(r)]
    K0 = lat.matmul(A, lat.transpose(A, r))
    K0 = [[x + (3 if i == j else 0) for j, x in enumerate(row)] for i, row in enumerate(K0)]
    K = [[0] * r for _ in range(r)]
    g = lat.eye(r)
    for _ in range(order):
        T = lat.matmul(lat.matmul(g, K0), lat.transpose(g, r))
        K = [[a + b for a, b in zip(x, y)] for x, y in zip(K, T)]
        g = lat.matmul(g, Phi)
    return K


def _unimodular(rng: random.Random, n: int, steps: int = 6) -> tuple[list, list]:
    V, Vi = lat.eye(n), lat.eye(n)
    for _ in range(steps if n > 1 else 0):
        i, j = rng.sample(range(n), 2)
        c = rng.choice([-2, -1, 1, 2])
        # V <- V E with E = 1 + c e_ij ; inverse E^-1 = 1 - c e_ij
        for row in V:
            row[j] += c * row[i]
        Vi[i] = [a - c * b for a, b in zip(Vi[i], Vi[j])]
    if n and rng.random() < 0.5:
        V = [[-x if j == 0 else x for j, x in enumerate(r)] for r in V]
        Vi[0] = [-x for x in Vi[0]]
    return V, Vi


def _torsion_operator(rng: random.Random, tors: list[int]) -> list:
    t = len(tors)
    A = [[0] * t for _ in range(t)]
    for i, d in enumerate(tors):
        A[i][i] = rng.choice([u for u in range(1, d) if math.gcd(u, d) == 1] or [1])
    if t >= 2 and tors[0] == tors[1] and rng.random() < 0.5:
        A[0], A[1] = A[1], A[0]
    return A


def _assemble(rng, tors, Phi, extra_rel: bool):
    t, r = len(tors), len(Phi)
    m = t + r
    Fy = [[0] * m for _ in range(m)]
    for i, row in enumerate(_torsion_operator(rng, tors)):
        Fy[i][:t] = row
    for i in range(r):
        Fy[t + i][:t] = [rng.randrange(d) for d in tors]
        Fy[t + i][t:] = Phi[i]
    rel_y = [[d if j == i else 0 for j in range(m)] for i, d in enumerate(tors)]
    if extra_rel and rel_y:
        c = [rng.randint(-2, 2) for _ in rel_y]
        rel_y.append([sum(ci * row[j] for ci, row in zip(c, rel_y)) for j in range(m)])
    V, Vi = _unimodular(rng, m)
    F = lat.matmul(lat.matmul(V, Fy), Vi)
    R = lat.matmul(rel_y, Vi) if rel_y else []
    return m, R, F, V


def random_pairing_instance(
    rng: random.Random,
    max_rank: int = 3,
    max_torsion: int = 8,
    max_order: int = 6,
    unimodular: bool | None = None,
) -> PairingInstance:
    """Random valid instance; ``unimodular=None`` picks the pairing type at random.

    Torsion units and free-to-torsion mixing can raise the order of F on M
    above that of its free part, so such draws are rejected.
    """
    while True:
        inst = _draw_instance(rng, max_rank, max_torsion, max_order, unimodular)
        if all(
            order_on_quotient(op, rel, max_order) is not None
            for op, rel in ((inst.F, inst.relations), (inst.F_dual, inst.relations_dual))
        ):
            return inst


def order_on_quotient(F, relations, bound: int = 60) -> int | None:
    """Order of x -> x F on Z^m / rowspan(relations), if at most ``bound``."""
    F = [list(r) for r in F]
    R = [list(r) for r in relations]
    P = F
    for k in range(1, bound + 1):
        diff = [[a - int(i == j) for j, a in enumerate(row)] for i, row in enumerate(P)]
        if all(not any(d) or (R and lat.in_row_span(d, R)) for d in diff):
            return k
        P = lat.matmul(P, F)
    return None


def _draw_instance(rng, max_rank, max_torsion, max_order, unimodular) -> PairingInstance:
    r = rng.randint(0, max_rank)
    Phi, order = _finite_order_operator(rng, r, max_order)
    Phi_inv = lat.eye(r)
    for _ in range(order - 1):
        Phi_inv = lat.matmul(Phi_inv, Phi)
    if unimodular is None:
        unimodular = rng.random() < 0.5
    if unimodular:
        # any unimodular K works: the adjoint (K^-1 Phi K)^T is integral
        K, Kinv = _unimodular(rng, r)
        Phi_dual = lat.transpose(lat.matmul(lat.matmul(Kinv, Phi), K), r)
    else:
        K = _invariant_form(rng, Phi, order)
        Phi_dual = Phi_inv
    shapes = [s for s in _TORSION_SHAPES if math.prod(s) <= max_torsion]
    tors, tors_d = rng.choice(shapes), rng.choice(shapes)
    m, R, F, V = _assemble(rng, tors, Phi, rng.random() < 0.5)
    md, Rd, Fd, Vd = _assemble(rng, tors_d, Phi_dual, rng.random() < 0.5)
    t, td = len(tors), len(tors_d)
    Gy = [[0] * md for _ in range(m)]
    for i in range(r):
        for j in range(r):
            Gy[t + i][td + j] = K[i][j]
    G = lat.matmul(lat.matmul(V, Gy), lat.transpose(Vd, md)) if m and md else [[0] * md for _ in range(m)]
    return PairingInstance.make(m, R, md, Rd, G, F, Fd, label=f"rank{r}-order{order}-tors{tors}-{'unimodular' if unimodular else 'general'}")


def random_instances(n: int, seed: int, **kw) -> list[PairingInstance]:
    rng = random.Random(seed)
    return [random_pairing_instance(rng, **kw) for _ in range(n)]
