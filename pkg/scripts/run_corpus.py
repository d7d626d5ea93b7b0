"""Run the full verification pipeline on every bundled curve.

Writes one JSON report per curve into --out and prints a verdict table.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from ffzeta import pipeline as pl

CORPUS = ("constant_e0", "legendre", "e3", "additive_ivstar")


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="corpus_reports")
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("curves", nargs="*", default=list(CORPUS))
    args = ap.parse_args(argv)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    failed = False
    for name in args.curves:
        E, LN, _ = pl.load_curve(f"{name}.json")
        t0 = time.perf_counter()
        report = pl.verify_curve(E, LN, pl.VerifyOptions(threads=args.threads))
        dt = time.perf_counter() - t0
        (out / f"{name}.json").write_text(pl.dumps(report))
        row = " ".join(f"{k}={v}" for k, v in report["verdicts"].items())
        print(f"{name:18s} {dt:6.1f}s  {row}")
        failed |= not report["all_pass"]
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
