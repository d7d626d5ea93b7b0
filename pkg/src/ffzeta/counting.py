"""Vectorised point counting for short Weierstrass curves over F_{q^d}.

The trace of Frobenius of y^2 = x^3 + A x + B over a field F is
``-sum_x chi(x^3 + A x + B)``.  For a family over F_q(t) we need this for one
point in every Frobenius orbit of F_{q^d} of exact size d, i.e. for every
closed point of degree d of the base line.  The work is split into shards of
orbit representatives; shard results are merged by key, so the outcome does
not depend on the number of workers.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Sequence

import numba
import numpy as np

from . import fpoly
from .fields import FieldDesc

log = logging.getLogger(__name__)

def zech_table(F: FieldDesc) -> np.ndarray:
    """Z[k] = log(1 + g^k), or -1 where 1 + g^k = 0."""
    cached = F._cache.get("zech")
    if cached is not None:
        return cached
    T = F.tables
    p = F.p
    c0 = T.exp % p
    plus_one = T.exp - c0 + (c0 + 1) % p
    z = T.log[plus_one].astype(np.int64)
    F._cache["zech"] = z
    return z


@numba.njit(cache=True, nogil=True)
def _zadd(a, b, zech, Q1):
    # log-domain addition; -1 encodes zero
    if a < 0:
        return b
    if b < 0:
        return a
    d = b - a
    if d < 0:
        d += Q1
    z = zech[d]
    if z < 0:
        return -1
    s = a + z
    if s >= Q1:
        s -= Q1
    return s


@numba.njit(cache=True, nogil=True)
def _log_character_sums(logA, logB, zech, Q1):
    out = np.zeros(logA.shape[0], dtype=np.int64)
    for r in range(logA.shape[0]):
        la = logA[r]
        lb = logB[r]
        total = 0
        if lb >= 0:
            total += 1 - 2 * (lb & 1)  # x = 0
        u = 0  # log x^3
        w = la  # log A x
        for i in range(Q1):
            s = _zadd(u, w, zech, Q1)
            s = _zadd(s, lb, zech, Q1)
            if s >= 0:
                total += 1 - 2 * (s & 1)
            u += 3
            if u >= Q1:
                u -= Q1
            if w >= 0:
                w += 1
                if w >= Q1:
                    w -= Q1
        out[r] = total
    return out


def curve_trace(F: FieldDesc, A: int, B: int) -> int:
    """Trace of Frobenius of y^2 = x^3 + A x + B over F (must be nonsingular)."""
    return int(-character_sums(F, np.array([A]), np.array([B]))[0])


def character_sums(F: FieldDesc, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """sum_{x in F} chi(x^3 + A_i x + B_i) for each i.

    Works in the log domain with a Zech table, so the only per-field tables
    are of size |F|.  Repeated (A, B) pairs are evaluated once.
    """
    if F.p == 2:
        raise ValueError("character sums need odd characteristic")
    T = F.tables
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if len(A) == 0:
        return np.zeros(0, dtype=np.int64)
    pairs, inverse = np.unique(np.stack([A, B], axis=1), axis=0, return_inverse=True)
    sums = _log_character_sums(T.log[pairs[:, 0]], T.log[pairs[:, 1]], zech_table(F), F.order - 1)
    return sums[inverse.reshape(-1)]


def orbit_representatives(F: FieldDesc, q: int, d: int) -> np.ndarray:
    """Smallest code in each orbit of x -> x^q on F = F_{q^d} of exact size d."""
    T = F.tables
    codes = np.arange(F.order, dtype=np.int64)
    frob = T.pow_array(codes, q)
    m = codes.copy()
    cur = codes
    exact = np.ones(F.order, dtype=bool)
    for i in range(1, d):
        cur = frob[cur]
        m = np.minimum(m, cur)
        if d % i == 0:
            exact &= cur != codes
    return codes[(m == codes) & exact]


def evaluate_ratfunc(F: FieldDesc, num: Sequence[int], den: Sequence[int], xs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(values, den_values) of num/den at xs (values are 0 where den vanishes)."""
    T = F.tables
    n = fpoly.evaluate_array(F, num, xs)
    dv = fpoly.evaluate_array(F, den, xs)
    return T.mul_codes(n, T.inv_codes(dv)), dv


def family_traces(
    F: FieldDesc,
    reps: np.ndarray,
    a: tuple[Sequence[int], Sequence[int]],
    b: tuple[Sequence[int], Sequence[int]],
    threads: int = 1,
) -> dict[int, int]:
    """Traces of Frobenius over F of the fibres at ``reps``.

    ``a`` and ``b`` are (num, den) coefficient codes already embedded in F;
    the caller guarantees the fibres at ``reps`` are smooth.
    """
    A, _ = evaluate_ratfunc(F, a[0], a[1], reps)
    B, _ = evaluate_ratfunc(F, b[0], b[1], reps)
    if threads <= 1 or len(reps) < 2 * threads:
        sums = character_sums(F, A, B)
    else:
        shards = np.array_split(np.arange(len(reps)), threads)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda ix: character_sums(F, A[ix], B[ix]), shards))
        sums = np.concatenate(parts)
    return {int(r): int(-s) for r, s in zip(reps, sums)}


def power_sums(a: int, norm: int, k_max: int) -> list[int]:
    """alpha^k + beta^k for k = 0..k_max where alpha + beta = a, alpha*beta = norm."""
    s = [2, a]
    for _ in range(2, k_max + 1):
        s.append(a * s[-1] - norm * s[-2])
    return s[: k_max + 1]


def elliptic_counts(q: int, A: int, B: int, n_max: int) -> list[int]:
    """#E(F_{q^n}) for n = 1..n_max, E: y^2 = x^3 + A x + B with A, B in F_q.

    Every count is an independent character sum over F_{q^n}; nothing is
    derived from the Weil form.
    """
    from .fields import field_of_order
    from .places import embedding_table

    out = []
    for n in range(1, n_max + 1):
        F = field_of_order(q**n)
        tab = embedding_table(q, n)
        out.append(q**n + 1 - curve_trace(F, tab[A], tab[B]))
    return out


def projective_line_counts(q: int, n_max: int) -> list[int]:
    return [q**n + 1 for n in range(1, n_max + 1)]
