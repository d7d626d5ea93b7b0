"""Command-line front end.

Every command writes one JSON document (to ``--out`` or stdout).  Exit
codes: 0 success, 1 an identity or reconstruction failed, 2 malformed or
unsupported input, 3 unsupported characteristic.
"""

from __future__ import annotations

import argparse
import logging
import sys
from typing import Callable

from . import pipeline as pl
from .counting import elliptic_counts, projective_line_counts
from .fields import TABLE_LIMIT, field_of_order, prime_power
from .lfunction import (
    LFunctionError,
    LNModule,
    UnsupportedCurve,
    analytic_rank,
    certified_rank,
    functional_equation_report,
    predicted_degrees,
    reconstruct_L,
    trace_data,
    with_sha,
)
from .pairing import PairingInstance, PairingPreconditionError, pairing_lemma_check, random_instances
from .reduction import (
    UnsupportedCharacteristic,
    bad_places,
    conductor_degree,
    minimal_disc_degree,
)
from .series import ReconstructionError, functional_equation_check, rational_reconstruct, weil_check, zeta_from_counts
from .surface import NotEllipticSurface, euler_number_check, surface_zeta, weil_report

EXIT_OK, EXIT_IDENTITY, EXIT_CONFIG, EXIT_CHAR = 0, 1, 2, 3

log = logging.getLogger("ffzeta")


def _emit(doc: dict, out: str | None) -> None:
    text = pl.dumps(doc)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _curve_and_ln(args) -> tuple:
    E, LN, _ = pl.load_curve(args.curve)
    if getattr(args, "ln", None):
        LN = pl.load_ln(args.ln, E.q)
    return E, LN


def _mutations(args) -> tuple[pl.Mutation, ...]:
    return tuple(pl.Mutation.parse(s) for s in (args.corrupt or []))


# -- commands ----------------------------------------------------------------------


def cmd_field_zeta(args) -> int:
    q = args.q
    p, _ = prime_power(q)
    if p < 5 and args.a is not None:
        raise UnsupportedCharacteristic(f"short Weierstrass models need p >= 5 (got p = {p})")
    F = field_of_order(q)
    genus = 0 if args.a is None else 1
    n = args.n or 2 * genus + 4
    if n < 2 * genus + 4:
        raise pl.ConfigError(f"--n must be at least {2 * genus + 4} to recover the zeta function")
    if genus and q**n > TABLE_LIMIT:
        raise pl.ConfigError(f"q^n = {q}^{n} exceeds the table limit {TABLE_LIMIT}")
    if args.a is None:
        counts = projective_line_counts(q, n)
        name = "P1"
    else:
        A, B = args.a, args.b
        if not (0 <= A < q and 0 <= B < q):
            raise pl.ConfigError(f"--a and --b are field codes in [0, {q})")
        if F.add(F.mul(4, F.pow(A, 3)), F.mul(27 % p, F.mul(B, B))) == 0:
            raise pl.ConfigError("singular curve: 4a^3 + 27b^2 = 0")
        counts = elliptic_counts(q, A, B, n)
        name = f"y^2 = x^3 + {A} x + {B}"
    Z = rational_reconstruct(zeta_from_counts(counts), 2 * genus, 2)
    num = [int(c) for c in Z.num]
    doc = {
        "field": F.to_json(),
        "curve": name,
        "genus": genus,
        "counts": counts,
        "zeta": Z.to_json(),
        "weil": weil_check(num, 1, q).to_json(),
        "fe_sign": functional_equation_check(num, 1, q),
    }
    _emit(doc, args.out)
    return EXIT_OK if doc["weil"]["ok"] and doc["fe_sign"] is not None else EXIT_IDENTITY


def cmd_curve_analyze(args) -> int:
    E, _ = _curve_and_ln(args)
    bad = bad_places(E)
    dimB, h1B = trace_data(E)
    doc = {
        "curve": {"name": E.name, **E.to_json()},
        "field": E.F.to_json(),
        "discriminant": E.discriminant.to_json(),
        "j_invariant": E.j_invariant.to_json(),
        "trace": {"dimB": dimB, "h1B": list(h1B)},
        "bad_fibers": [d.to_json() for d in bad],
        "conductor_degree": conductor_degree(E),
        "euler_number": minimal_disc_degree(E),
        "predicted_degrees": predicted_degrees(E),
    }
    _emit(doc, args.out)
    return EXIT_OK


def cmd_lfunction(args) -> int:
    E, LN = _curve_and_ln(args)
    LN = LN or LNModule.trivial()
    try:
        res = with_sha(reconstruct_L(E, LN, args.threads), LN)
    except (LFunctionError, ArithmeticError) as exc:
        _emit({"curve": {"name": E.name, **E.to_json()}, "error": f"{type(exc).__name__}: {exc}"}, args.out)
        return EXIT_IDENTITY
    fe = functional_equation_report(res, E, LN)
    doc = {
        "curve": {"name": E.name, **E.to_json()},
        **res.to_json(),
        "functional_equation": fe,
        "analytic_rank": analytic_rank(res.P1, E.q),
        "certified_rank": certified_rank(E, LN),
        "weil_P1": weil_check(res.P1, 2, E.q).to_json(),
    }
    _emit(doc, args.out)
    return EXIT_OK if fe["pass"] and doc["weil_P1"]["ok"] else EXIT_IDENTITY


def cmd_surface_zeta(args) -> int:
    E, _ = _curve_and_ln(args)
    bad, corruption = list(bad_places(E)), None
    for m in _mutations(args):
        bad, corruption = m.apply(bad)
    try:
        Sz = surface_zeta(E, args.threads, bad, corruption)
    except (ReconstructionError, NotEllipticSurface) as exc:
        _emit({"curve": {"name": E.name, **E.to_json()}, "error": f"{type(exc).__name__}: {exc}"}, args.out)
        return EXIT_IDENTITY
    doc = {**Sz.to_json(), "weil": weil_report(Sz), "euler": euler_number_check(Sz)}
    _emit(doc, args.out)
    return EXIT_OK if all(doc["weil"].values()) and doc["euler"]["pass"] else EXIT_IDENTITY


def cmd_verify(args) -> int:
    E, LN = _curve_and_ln(args)
    opts = pl.VerifyOptions(threads=args.threads, mutations=_mutations(args), timings=args.timings)
    report = pl.verify_curve(E, LN, opts)
    _emit(report, args.out)
    return EXIT_OK if report["all_pass"] else EXIT_IDENTITY


def cmd_lemma73(args) -> int:
    if args.instance:
        try:
            insts = [PairingInstance.from_json(pl.read_json(args.instance))]
        except (KeyError, TypeError, ValueError) as exc:
            raise pl.ConfigError(f"malformed pairing instance: {exc}") from exc
    else:
        insts = random_instances(args.random, args.seed)
    rows, failures = [], []
    for i, inst in enumerate(insts):
        try:
            rep = pairing_lemma_check(inst)
        except PairingPreconditionError as exc:
            failures.append({"index": i, "error": str(exc)})
            continue
        rows.append(rep)
        if not rep.holds:
            failures.append({"index": i, "report": rep.to_json()})
    doc = {
        "instances": len(insts),
        "seed": None if args.instance else args.seed,
        "rho_ok": sum(r.rho_ok for r in rows),
        "general_identity_ok": sum(r.general_ok for r in rows),
        "printed_identity_ok": sum(r.printed_ok for r in rows),
        "swapped_torsion_identity_ok": sum(r.lhs == r.rhs_swapped_torsion for r in rows),
        "failures": failures,
        "verdict": pl.PASS if not failures else pl.FAIL,
    }
    if args.details:
        doc["reports"] = [r.to_json() for r in rows]
    _emit(doc, args.out)
    return EXIT_OK if not failures else EXIT_IDENTITY


# -- parser --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ffzeta", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name: str, fn: Callable, help: str, curve: bool = True, ln: bool = False, threads: bool = False):
        p = sub.add_parser(name, help=help)
        if curve:
            p.add_argument("--curve", required=True, help="curve JSON (bundled names resolve)")
        if ln:
            p.add_argument("--ln", help="Lang-Neron JSON (rank, frobenius, sections)")
        if threads:
            p.add_argument("--threads", type=int, default=1, help="worker threads for point counting")
        p.add_argument("--out", help="output file (default: stdout)")
        p.set_defaults(func=fn)
        return p

    p = add("field-zeta", cmd_field_zeta, "zeta function of P^1 or of y^2 = x^3 + ax + b over F_q", curve=False)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--a", type=int, help="field code of a (omit for P^1)")
    p.add_argument("--b", type=int, default=0)
    p.add_argument("--n", type=int, help="number of extension degrees to count")

    add("curve-analyze", cmd_curve_analyze, "local reduction data at every bad place")
    add("lfunction", cmd_lfunction, "L-function, sha polynomial and functional equation", ln=True, threads=True)
    p = add("surface-zeta", cmd_surface_zeta, "zeta function of the elliptic surface", threads=True)
    p.add_argument("--corrupt", action="append", help="mutation, e.g. fiber:0 (repeatable)")
    p = add("verify", cmd_verify, "full pipeline with per-theorem verdicts", ln=True, threads=True)
    p.add_argument("--corrupt", action="append", help="mutation, e.g. fiber:0 (repeatable)")
    p.add_argument("--timings", action="store_true", help="include wall-clock timings (not reproducible)")

    p = add("lemma73", cmd_lemma73, "pairing lemma on random or given instances", curve=False)
    p.add_argument("--random", type=int, default=200, help="number of random instances")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--instance", help="JSON file with one instance instead of random ones")
    p.add_argument("--details", action="store_true", help="include every per-instance report")
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except UnsupportedCharacteristic as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CHAR
    except (pl.ConfigError, UnsupportedCurve) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
