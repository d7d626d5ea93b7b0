"""Time the sharded point counts behind the surface zeta function.

Counts are cleared between runs so each thread setting does the full work,
and the results are compared for equality.
"""

from __future__ import annotations

import argparse
import time

from ffzeta import pipeline as pl
from ffzeta.lfunction import clear_cache
from ffzeta.surface import SurfaceModel, surface_counts


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--curve", default="legendre.json")
    ap.add_argument("--threads", type=int, nargs="+", default=[1, 2, 4])
    ap.add_argument("--repeat", type=int, default=1)
    args = ap.parse_args(argv)

    E, _, _ = pl.load_curve(args.curve)
    S = SurfaceModel.build(E)
    n = S.n_max
    print(f"{E.name}: q = {E.q}, b2 = {S.betti[2]}, counting up to degree {n}")
    reference = None
    for th in args.threads:
        best = float("inf")
        for _ in range(args.repeat):
            clear_cache()
            t0 = time.perf_counter()
            counts = surface_counts(E, n, th, S.bad_fibers)
            best = min(best, time.perf_counter() - t0)
        reference = reference or counts
        same = "ok" if counts == reference else "MISMATCH"
        print(f"threads={th:2d}  {best:8.3f}s  {same}")


if __name__ == "__main__":
    main()
