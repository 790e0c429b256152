"""Command-line surface.

Subcommands: search, roots, newton, verify, identity-check.  Machine output
(JSONL) goes to the declared output file only; prose goes to stdout, search
progress to stderr.  Exit codes: 0 success / nothing found, 10 a verified
cuboid was found (so wrapper scripts can trap a discovery), 1 a self-check
failed, 2 bad flags, 3 resume mismatch, 4 I/O error.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from decimal import Decimal, getcontext
from fractions import Fraction

from . import asymptotics, cuboid_eqs, search
from .asymptotics import Axis
from .cuboid_eqs import PQPair
from .exact_arith import QuadRational, sturm_count

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_BAD_FLAGS = 2
EXIT_RESUME_MISMATCH = 3
EXIT_IO = 4
EXIT_CUBOID_FOUND = 10

APPROX_DIGITS = 30


def approx_str(x: QuadRational) -> str:
    """Decimal rendering, 30 significant digits, always tagged approximate."""
    getcontext().prec = APPROX_DIGITS
    frac = x.approx(digits=50)
    value = Decimal(frac.numerator) / Decimal(frac.denominator)
    return f"approx {value}"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cuboidsearch",
        description="Exact-arithmetic perfect-cuboid search and root analysis.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p_search = sub.add_parser("search", help="run the pruned (p, q, t) search")
    p_search.add_argument("--p-min", type=int, default=1)
    p_search.add_argument("--p-max", type=int, required=True)
    p_search.add_argument("--mode", choices=("scan", "divisor"), default="scan")
    p_search.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p_search.add_argument("--checkpoint", default=None)
    p_search.add_argument("--out", required=True)
    p_search.add_argument(
        "--sieve-moduli", default=",".join(map(str, search.DEFAULT_SIEVE_MODULI)),
        help="comma-separated residue-filter moduli; empty string disables",
    )
    p_search.add_argument(
        "--faithful", action="store_true",
        help="iterate the literal t < 61 p^2 range (audit mode, much slower)",
    )

    p_roots = sub.add_parser("roots", help="five certified root intervals for one pair")
    p_roots.add_argument("--p", type=int, required=True)
    p_roots.add_argument("--q", type=int, required=True)

    sub.add_parser("newton", help="Newton polygon, exponents, and leading terms")

    p_verify = sub.add_parser("verify", help="check one (p, q, t) candidate")
    p_verify.add_argument("--p", type=int, required=True)
    p_verify.add_argument("--q", type=int, required=True)
    p_verify.add_argument("--t", type=int, required=True)

    p_ident = sub.add_parser(
        "identity-check", help="verify the degree-12 factorization identity"
    )
    p_ident.add_argument("--max-pq", type=int, required=True)

    return parser


def cmd_search(args) -> int:
    try:
        moduli = tuple(
            int(m) for m in args.sieve_moduli.split(",") if m.strip()
        )
        config = search.SearchConfig(
            p_min=args.p_min,
            p_max=args.p_max,
            mode=args.mode,
            sieve_moduli=moduli,
            worker_count=args.threads,
            checkpoint_path=args.checkpoint,
            output_path=args.out,
            faithful=args.faithful,
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_FLAGS

    def progress(p, pairs, evals, hits):
        print(f"p={p} pairs={pairs} evals={evals} hits={hits}", file=sys.stderr)

    try:
        report = search.run_search(config, progress=progress)
    except search.ResumeMismatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESUME_MISMATCH
    except OSError as exc:
        print(f"error: {exc.strerror or exc} ({exc.filename})", file=sys.stderr)
        return EXIT_IO
    print(
        f"pairs={report.pairs_examined} evals={report.t_values_tested} "
        f"sieve_rejections={report.sieve_rejections} hits={len(report.hits)} "
        f"wall={report.wall_time:.2f}s",
        file=sys.stderr,
    )
    return EXIT_CUBOID_FOUND if report.hits else EXIT_OK


def cmd_roots(args) -> int:
    try:
        pair = PQPair(args.p, args.q)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_FLAGS
    if args.q < 59 * args.p:
        print(
            "error: the interval theorems require q >= 59p",
            file=sys.stderr,
        )
        return EXIT_BAD_FLAGS
    intervals = asymptotics.asymptotic_intervals(pair)
    disjoint = asymptotics.check_disjoint(intervals)
    print(f"Root intervals for p={pair.p}, q={pair.q}:")
    for iv in intervals:
        print(f"  {iv.label.value} ({iv.axis.value.lower()} axis):")
        print(f"    lo = {iv.lo}  [{approx_str(iv.lo)}]")
        print(f"    hi = {iv.hi}  [{approx_str(iv.hi)}]")
    print(f"disjoint: {disjoint.ok}")
    print(f"  real gap T3.lo - T2.hi = {disjoint.real_gap}")
    print(f"  imaginary gap T4.lo - T5.hi = {disjoint.imaginary_gap}")
    try:
        certs = asymptotics.certify_roots(pair)
    except asymptotics.CertificationFailed as exc:
        print(f"certification FAILED: {exc}")
        return EXIT_CHECK_FAILED
    for cert in certs:
        extra = f", sturm={cert.sturm_roots}" if cert.sturm_roots is not None else ""
        print(
            f"  {cert.label.value}: PASS (signs {cert.sign_lo}/{cert.sign_hi}{extra})"
        )
    qpoly = cuboid_eqs.build_qpq(pair)
    t3_hi = intervals[2].hi.to_fraction()
    bound = Fraction(math.ceil(t3_hi) + 1)
    pos = sturm_count(qpoly, Fraction(0), bound)
    total = sturm_count(qpoly, -bound, bound)
    print(f"real roots in (0, {bound}): {pos}; in (-{bound}, {bound}): {total}")
    return EXIT_OK if disjoint.ok else EXIT_CHECK_FAILED


GOLDEN_HULL = ((0, 10), (4, 10), (6, 8), (10, 0))
GOLDEN_EXPONENTS = (Fraction(0), Fraction(1), Fraction(2))


def _golden_leading_terms():
    one = QuadRational.of(1)
    return {
        (Fraction(0), one, 2, Axis.REAL, 2),
        (Fraction(1), one, 1, Axis.REAL, 1),
        (Fraction(2), QuadRational.of(1, 1), 0, Axis.IMAGINARY, 1),
        (Fraction(2), QuadRational.of(-1, 1), 0, Axis.IMAGINARY, 1),
    }


def cmd_newton(args) -> int:
    grid = asymptotics.build_newton_grid()
    polygon = asymptotics.upper_hull(grid)
    print("Grid nodes (m, r, coefficient in p):")
    for node in grid:
        terms = [
            f"{c}*p^{i}" if i else str(c)
            for i, c in enumerate(node.coeff_p) if c
        ]
        print(f"  ({node.m}, {node.r}): {' + '.join(terms)}")
    print(f"Upper hull: {' - '.join(str(v) for v in polygon.upper_hull)}")
    print(f"Slopes: {list(polygon.segment_slopes)}")
    print(f"Exponents: {list(polygon.exponents)}")
    found = set()
    for exponent in polygon.exponents:
        for term in asymptotics.leading_coefficients(polygon, exponent):
            axis = "i*" if term.axis is Axis.IMAGINARY else ""
            print(
                f"  exponent {term.exponent}: {axis}({term.magnitude})"
                f" * p^{term.p_power}, multiplicity {term.multiplicity}"
            )
            found.add((
                term.exponent, term.magnitude, term.p_power, term.axis,
                term.multiplicity,
            ))
    ok = (
        polygon.upper_hull == GOLDEN_HULL
        and polygon.exponents == GOLDEN_EXPONENTS
        and found == _golden_leading_terms()
    )
    print(f"golden-data match: {ok}")
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_verify(args) -> int:
    p, q, t = args.p, args.q, args.t
    try:
        pair = PQPair(p, q)
        if t < 1:
            raise ValueError("t must be positive")
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_FLAGS
    value = cuboid_eqs.build_qpq(pair).eval_int(t)
    print(f"Q(t) = {value}" + ("" if value == 0 else " (nonzero: not a root)"))
    lower = t > p * p and t > p * q and t > q * q
    print(f"lower bounds t > p^2, pq, q^2: {'pass' if lower else 'FAIL'}")
    upper = (p * p + t) * (p * q + t) > 2 * t * t
    print(f"(p^2 + t)(pq + t) > 2 t^2: {'pass' if upper else 'FAIL'}")
    if value != 0 or not lower or not upper:
        print("verdict: not a perfect cuboid")
        return EXIT_OK
    for tag in cuboid_eqs.CaseTag:
        witness = cuboid_eqs.reconstruct_cuboid(p, q, t, tag)
        print(f"verified cuboid ({tag.value}): {witness.septuple()}")
        print(f"  primitive form: {witness.reduced()}")
    print("verdict: PERFECT CUBOID")
    return EXIT_CUBOID_FOUND


def cmd_identity_check(args) -> int:
    if args.max_pq < 2:
        print("error: --max-pq must be at least 2", file=sys.stderr)
        return EXIT_BAD_FLAGS
    checked = 0
    for q in range(2, args.max_pq + 1):
        for p in range(1, q):
            if math.gcd(p, q) != 1:
                continue
            checked += 1
            if not cuboid_eqs.factorization_check(PQPair(p, q)):
                print(f"FAIL: factorization identity broken at (p={p}, q={q})")
                return EXIT_CHECK_FAILED
    print(f"identity holds for all {checked} coprime pairs with p < q <= {args.max_pq}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_BAD_FLAGS if exc.code else EXIT_OK
    handlers = {
        "search": cmd_search,
        "roots": cmd_roots,
        "newton": cmd_newton,
        "verify": cmd_verify,
        "identity-check": cmd_identity_check,
    }
    return handlers[args.subcommand](args)


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
