"""main.py
Command-line entry point for building, certifying and comparing KM-arcs.

Usage:
    python main.py construct --family q8 --q 64 --alphas 1,2,4 --out arc.json
    python main.py verify arc.json
    python main.py stabilizer arc.json --budget 2000000
    python main.py equiv a.json b.json
    python main.py translation arc.json --line 1,0,0
    python main.py elation arc.json
    python main.py admissible 128
    python main.py report --q 16 32 64

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 search budget
exhausted.
"""
from __future__ import annotations

import argparse
import json
import logging
import random
import sys
from typing import List, Optional, Sequence

import config
import plane
from arcs import KMArc
from certificates import (CertificateError, certificate_for, check_certificate,
                          read_certificate, write_certificate)
from constructions import (FAMILIES, OPolynomial, admissible_search, build_corpus,
                           construct_gw, construct_km, construct_q4, construct_q8,
                           construct_q16, lunelli_sce, off_nucleus_hyperoval,
                           q4_default_parameters, regular_hyperoval)
from errors import BudgetExceeded, KMArcError
from gf2e import FieldCtx, element_hex, parse_elements
from symmetry import (Collineation, apply_collineation, axis_elation_group,
                      equivalent, is_elation_arc, is_translation_arc, stabilizer,
                      translation_lines)

logger = logging.getLogger("kmarc")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    """Bad command-line parameters; exit code 2."""


def _ctx_for_q(q: int) -> FieldCtx:
    h = q.bit_length() - 1
    if q < 2 or q != 1 << h:
        raise UsageError(f"--q must be a power of two, got {q}")
    return FieldCtx.for_degree(h)


def _hex_list(ctx: FieldCtx, text: Optional[str], n: int, name: str) -> List[int]:
    if text is None:
        raise UsageError(f"--{name} is required")
    vals = parse_elements(ctx, text)
    if len(vals) != n:
        raise UsageError(f"--{name} expects {n} hex elements, got {len(vals)}")
    return vals


def _provenance(argv: Sequence[str]) -> str:
    return " ".join(argv)


# ---------------------------------------------------------------------------
# construct
# ---------------------------------------------------------------------------

def _build(args: argparse.Namespace):
    """(arc, parameters) for the requested family."""
    fam = args.family
    if fam == "lunelli-sce":
        return lunelli_sce(), {}
    ctx = _ctx_for_q(args.q)
    if fam == "regular":
        return regular_hyperoval(ctx), {}
    if fam == "km":
        small = FieldCtx.for_degree(ctx.h - args.i)
        g = OPolynomial.lunelli_sce() if args.opoly == "lunelli-sce" else OPolynomial.translation(small, args.n)
        return construct_km(ctx.h, args.i, g), {"i": args.i, "g": g.describe()}
    if fam.startswith("gw-"):
        variant = fam[-1].upper()
        if args.source:
            H = read_certificate(args.source).arc()
        elif variant == "A":
            H = regular_hyperoval(ctx)
        elif variant == "B":
            H = off_nucleus_hyperoval(ctx)
        else:
            a, b = q4_default_parameters(ctx)
            H = construct_q4(ctx, a, b)
        return construct_gw(H, variant, args.h_ext), {"q_small": H.q, "h": args.h_ext}
    if fam == "q4":
        if args.alpha is None or args.beta is None:
            alpha, beta = q4_default_parameters(ctx)
        else:
            alpha, beta = ctx.parse(args.alpha), ctx.parse(args.beta)
        params = {"alpha": element_hex(alpha), "beta": element_hex(beta), "a": args.a, "b": args.b}
        return construct_q4(ctx, alpha, beta, args.a, args.b), params
    if fam == "q8":
        alphas = _hex_list(ctx, args.alphas, 3, "alphas") if args.alphas else [1, 2, 4]
        return construct_q8(ctx, alphas), {"alphas": [element_hex(a) for a in alphas]}
    if fam == "q16":
        if args.alphas:
            alphas = _hex_list(ctx, args.alphas, 4, "alphas")
        else:
            classes = admissible_search(ctx, args.threads)
            if not classes:
                raise UsageError(f"there exists no admissible tuple in GF({ctx.q})")
            alphas = list(classes[0].admissible_tuple.alphas)
        return construct_q16(ctx, alphas), {"alphas": [element_hex(a) for a in alphas]}
    raise UsageError(f"unknown family {fam!r}")  # pragma: no cover


def cmd_construct(args: argparse.Namespace, argv: Sequence[str]) -> int:
    arc, params = _build(args)
    cert = certificate_for(arc, args.family, params, _provenance(argv))
    if args.out:
        write_certificate(cert, args.out)
        print(f"✅ {args.family}: {arc.report.summary()} -> {args.out}")
    else:
        print(json.dumps(cert.to_dict(), indent=2))
    return EXIT_OK


# ---------------------------------------------------------------------------
# inspection commands
# ---------------------------------------------------------------------------

def cmd_verify(args: argparse.Namespace) -> int:
    cert = read_certificate(args.path)
    result = check_certificate(cert, check_stabilizer=args.stabilizer)
    if result.ok:
        print(f"✅ {result.report.summary()}")
        return EXIT_OK
    print(f"❌ verification failed for {args.path}")
    for m in result.mismatches:
        print(f"   -> {m}")
    return EXIT_FAIL


def _load_arc(path: str) -> KMArc:
    arc = read_certificate(path).arc()
    if not arc.report.is_km:
        raise UsageError(f"{path}: {arc.report.summary()}")
    return arc


def cmd_stabilizer(args: argparse.Namespace) -> int:
    arc = _load_arc(args.path)
    rep = stabilizer(arc, args.budget, args.threads)
    if args.json:
        print(json.dumps(rep.to_dict(), indent=2))
    else:
        print(f"📐 |Stab| = {rep.order}  (projectivities {rep.projectivity_order}, "
              f"elations on one axis {rep.elation_order}, all axes {rep.elation_count})")
        print(f"   orbit sizes on the arc: {rep.orbit_sizes}")
        print(f"   {len(rep.generators)} generators")
    return EXIT_OK


def cmd_equiv(args: argparse.Namespace) -> int:
    a = _load_arc(args.a)
    if args.b:
        b = _load_arc(args.b)
    else:
        rng = random.Random(args.seed)
        b = apply_collineation(a, _random_collineation(a.ctx, rng))
        print("🎲 comparing against a random collineation image of the first arc")
    g = equivalent(a, b, args.budget, args.threads)
    if g is None:
        print("❌ not PGammaL-equivalent")
        return EXIT_FAIL
    print(f"✅ equivalent: matrix {plane.matrix_hex(g.matrix)}, frobenius 2^{g.frob}")
    return EXIT_OK


def _random_collineation(ctx: FieldCtx, rng: random.Random) -> Collineation:
    while True:
        M = tuple(tuple(rng.randrange(ctx.q) for _ in range(3)) for _ in range(3))
        try:
            return Collineation(ctx, M, rng.randrange(ctx.h))  # type: ignore[arg-type]
        except KMArcError:
            continue


def cmd_translation(args: argparse.Namespace) -> int:
    arc = _load_arc(args.path)
    if args.line:
        line = plane.parse_triple(arc.ctx, args.line.split(","))
        if is_translation_arc(arc, line):
            print(f"✅ translation line {plane.triple_hex(line)}")
            return EXIT_OK
        print(f"❌ {plane.triple_hex(line)} is not a translation line")
        return EXIT_FAIL
    lines = translation_lines(arc)
    if lines:
        for line in lines:
            print(f"✅ translation line {plane.triple_hex(line)}")
    else:
        print("❌ no translation line")
    return EXIT_OK


def cmd_elation(args: argparse.Namespace) -> int:
    arc = _load_arc(args.path)
    rep = is_elation_arc(arc)
    if args.json:
        print(json.dumps(rep.to_dict(), indent=2))
        return EXIT_OK
    if not rep.is_elation_arc:
        print("❌ not an elation arc")
    for line, S in rep.elation_lines:
        order = len(axis_elation_group(arc, line))
        flag = "translation" if rep.is_translation[line] else "elation"
        print(f"✅ {flag} line {plane.triple_hex(line)}: S = <{', '.join(S.to_hex())}>, "
              f"axis group order {order}")
    return EXIT_OK


def cmd_admissible(args: argparse.Namespace) -> int:
    ctx = _ctx_for_q(args.q)
    classes = admissible_search(ctx, args.threads)
    if args.json:
        print(json.dumps([c.to_dict() for c in classes], indent=2))
        return EXIT_OK
    if not classes:
        print(f"∅ no admissible tuple in GF({ctx.q})")
    for c in classes:
        print(f"🔹 ({', '.join(c.admissible_tuple.to_hex())})  span <{', '.join(c.representative.to_hex())}>"
              f"  [{len(c.members)} spans in class]")
    return EXIT_OK


def report_rows(qs: Sequence[int], threads: Optional[int] = None) -> List[dict]:
    rows = []
    for entry in build_corpus(qs, threads):
        arc = entry.arc
        elation = translation = None
        if not arc.is_hyperoval:
            elation = is_elation_arc(arc).is_elation_arc
            translation = bool(translation_lines(arc))
        rows.append({"q": arc.q, "t": arc.t, "family": entry.family,
                     "km": arc.report.is_km, "elation": elation, "translation": translation})
    return rows


def cmd_report(args: argparse.Namespace) -> int:
    rows = report_rows(args.q, args.threads)
    if args.json:
        print(json.dumps(rows, indent=2))
        return EXIT_OK
    print(f"{'q':>6} {'t':>6}  {'family':<12} {'KM':<4} {'elation':<8} translation")
    for r in rows:
        def yn(v):
            return "-" if v is None else ("yes" if v else "no")
        print(f"{r['q']:>6} {r['t']:>6}  {r['family']:<12} {yn(r['km']):<4} "
              f"{yn(r['elation']):<8} {yn(r['translation'])}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _add_budget(p: argparse.ArgumentParser) -> None:
    # SUPPRESS keeps the global --budget unless the subcommand repeats it
    p.add_argument("--budget", type=int, default=argparse.SUPPRESS,
                   help="candidate collineations per frame search")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kmarc", description="KM-arcs in PG(2, 2^h)")
    parser.add_argument("--seed", type=int, default=config.SEED, help="seed for randomized paths")
    parser.add_argument("--threads", type=int, default=config.THREADS, help="worker cap")
    parser.add_argument("--budget", type=int, default=config.BUDGET,
                        help="candidate collineations per frame search")
    parser.add_argument("--log-level", default=config.LOG_LEVEL, help="DEBUG, INFO, WARNING, ...")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build an arc and write its certificate")
    p.add_argument("--family", required=True, choices=FAMILIES)
    p.add_argument("--q", type=int, default=16)
    p.add_argument("--alphas", help="comma separated hex elements")
    p.add_argument("--alpha")
    p.add_argument("--beta")
    p.add_argument("--a", type=int, default=0, choices=(0, 1))
    p.add_argument("--b", type=int, default=0, choices=(0, 1))
    p.add_argument("--i", type=int, default=2, help="km: type 2^i")
    p.add_argument("--n", type=int, default=1, help="km: translation o-polynomial x^(2^n)")
    p.add_argument("--opoly", choices=("translation", "lunelli-sce"), default="translation")
    p.add_argument("--h-ext", type=int, default=2, help="gw: extension degree")
    p.add_argument("--source", help="gw: certificate of the input arc")
    p.add_argument("--out")

    p = sub.add_parser("verify", help="re-check a certificate")
    p.add_argument("path")
    p.add_argument("--stabilizer", action="store_true", help="also recompute the stabilizer order")

    p = sub.add_parser("stabilizer", help="collineation stabilizer of an arc")
    p.add_argument("path")
    _add_budget(p)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("equiv", help="PGammaL-equivalence of two arcs")
    p.add_argument("a")
    p.add_argument("b", nargs="?")
    _add_budget(p)

    p = sub.add_parser("translation", help="list translation lines, or test one")
    p.add_argument("path")
    p.add_argument("--line", help="comma separated hex triple of a t-secant")

    p = sub.add_parser("elation", help="elation lines and axis elation groups")
    p.add_argument("path")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("admissible", help="admissible q/16 tuples up to equivalence")
    p.add_argument("q", type=int)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("report", help="census and elation/translation flags over the corpus")
    p.add_argument("--q", type=int, nargs="+", default=[16, 32, 64, 128])
    p.add_argument("--json", action="store_true")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK

    logging.basicConfig(level=str(args.log_level).upper(),
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    config.SEED = args.seed

    try:
        if args.command == "construct":
            return cmd_construct(args, argv)
        handler = {
            "verify": cmd_verify,
            "stabilizer": cmd_stabilizer,
            "equiv": cmd_equiv,
            "translation": cmd_translation,
            "elation": cmd_elation,
            "admissible": cmd_admissible,
            "report": cmd_report,
        }[args.command]
        return handler(args)
    except BudgetExceeded as e:
        print(f"⏳ {e} (found {e.lower_bound} so far)")
        return EXIT_BUDGET
    except (UsageError, CertificateError, KMArcError, ValueError) as e:
        print(f"❌ {e}")
        return EXIT_USAGE
    except KeyboardInterrupt:
        print("\nInterrupted.")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
