"""Integer lattice linear algebra: Smith and Hermite forms with transforms.

Matrices are lists of lists of Python ints.  Row vectors throughout: a
lattice is the row span of a matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

IntMatrix = list[list[int]]


def copy(A: Sequence[Sequence[int]]) -> IntMatrix:
    return [[int(x) for x in r] for r in A]


def eye(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> IntMatrix:
    if not A:
        return []
    cols = list(zip(*B))
    if not cols:
        return [[] for _ in A]
    return [[sum(x * y for x, y in zip(r, c)) for c in cols] for r in A]


def transpose(A: Sequence[Sequence[int]], ncols: int | None = None) -> IntMatrix:
    if not A:
        return [[] for _ in range(ncols or 0)]
    return [list(c) for c in zip(*A)]


@dataclass(frozen=True)
class SmithForm:
    """U @ A @ V == D with U, V unimodular and D diagonal (d1 | d2 | ...)."""

    D: IntMatrix
    U: IntMatrix
    V: IntMatrix

    @property
    def invariants(self) -> list[int]:
        n = min(len(self.D), len(self.D[0]) if self.D else 0)
        return [abs(self.D[i][i]) for i in range(n) if self.D[i][i] != 0]

    @property
    def rank(self) -> int:
        return len(self.invariants)


def smith_normal_form(A: Sequence[Sequence[int]], ncols: int | None = None) -> SmithForm:
    m = len(A)
    n = len(A[0]) if m else (ncols or 0)
    D = copy(A)
    U = eye(m)
    V = eye(n)

    def swap_rows(M, i, j):
        M[i], M[j] = M[j], M[i]

    def swap_cols(M, i, j):
        for r in M:
            r[i], r[j] = r[j], r[i]

    def add_row(M, src, dst, c):
        if c:
            M[dst] = [a + c * b for a, b in zip(M[dst], M[src])]

    def add_col(M, src, dst, c):
        if c:
            for r in M:
                r[dst] += c * r[src]

    t = 0
    while t < min(m, n):
        # pivot: smallest nonzero entry of the remaining block
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if D[i][j] and (best is None or abs(D[i][j]) < abs(D[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        swap_rows(D, t, i); swap_rows(U, t, i)
        swap_cols(D, t, j); swap_cols(V, t, j)
        while True:
            p = D[t][t]
            dirty = False
            for i in range(t + 1, m):
                c = D[i][t] // p
                add_row(D, t, i, -c); add_row(U, t, i, -c)
                if D[i][t]:
                    dirty = True
            for j in range(t + 1, n):
                c = D[t][j] // p
                add_col(D, t, j, -c); add_col(V, t, j, -c)
                if D[t][j]:
                    dirty = True
            if not dirty:
                # divisibility of the rest of the block
                bad = next(
                    ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % p),
                    None,
                )
                if bad is None:
                    break
                add_row(D, bad[0], t, 1); add_row(U, bad[0], t, 1)
                continue
            # move the smallest remaining entry of row/column t to the pivot
            cand = [(abs(D[i][t]), i, t) for i in range(t, m) if D[i][t]]
            cand += [(abs(D[t][j]), t, j) for j in range(t, n) if D[t][j]]
            _, i, j = min(cand)
            swap_rows(D, t, i); swap_rows(U, t, i)
            swap_cols(D, t, j); swap_cols(V, t, j)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return SmithForm(D, U, V)


def hermite_basis(gens: Sequence[Sequence[int]], n: int) -> IntMatrix:
    """A basis (rows, echelon form) of the lattice spanned by ``gens`` in Z^n."""
    rows = [list(map(int, r)) for r in gens if any(r)]
    basis: IntMatrix = []
    for col in range(n):
        while True:
            nz = [r for r in rows if r[col]]
            if len(nz) <= 1:
                break
            p = min(nz, key=lambda r: abs(r[col]))
            rows = [r if r is p or not r[col] else [a - (r[col] // p[col]) * b for a, b in zip(r, p)] for r in rows]
            rows = [r for r in rows if any(r)]
        if nz:
            p = nz[0]
            rows = [r for r in rows if r is not p]
            basis.append(p if p[col] > 0 else [-x for x in p])
    return basis


def integer_kernel(A: Sequence[Sequence[int]], ncols: int | None = None) -> IntMatrix:
    """Basis of {x in Z^m : x @ A == 0} (left kernel), rows."""
    m = len(A)
    if m == 0:
        return []
    S = smith_normal_form(A, ncols)
    r = S.rank
    return [S.U[i] for i in range(r, m)]


def in_row_span(v: Sequence[int], B: Sequence[Sequence[int]]) -> bool:
    """Is v an integer combination of the rows of B?"""
    if not any(v):
        return True
    if not B:
        return False
    n = len(v)
    S = smith_normal_form(B, n)
    # v = z B  <=>  v V = (z U^-1) D
    w = matmul([list(v)], S.V)[0]
    for j, x in enumerate(w):
        d = S.D[j][j] if j < len(S.D) else 0
        if d == 0:
            if x:
                return False
        elif x % d:
            return False
    return True


def quotient_structure(sub: Sequence[Sequence[int]], n: int) -> tuple[int, list[int]]:
    """Z^n / rowspan(sub) as (free rank, nontrivial torsion invariants)."""
    if not sub:
        return n, []
    S = smith_normal_form(sub, n)
    inv = S.invariants
    return n - len(inv), [d for d in inv if d > 1]


def det(A: Sequence[Sequence]) -> Fraction:
    """Exact determinant over Q."""
    n = len(A)
    M = [[Fraction(x) for x in r] for r in A]
    out = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if M[r][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            M[c], M[p] = M[p], M[c]
            out = -out
        out *= M[c][c]
        for r in range(c + 1, n):
            f = M[r][c] / M[c][c]
            if f:
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    return out
