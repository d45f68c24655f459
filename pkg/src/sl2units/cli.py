"""Command-line front end emitting and re-checking JSON certificates.

Exit codes: 0 on verified success, 1 on a domain error (with an error JSON
object on standard output), 2 on a usage error.  Standard output carries
JSON only; diagnostics go to standard error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import replace

from . import certs
from .elemgen import (
    DEFAULT_DEPTH_CAP,
    DEFAULT_NODE_CAP,
    decompose,
    expand_diagonals,
    h_decomposition,
)
from .errors import AlgebraError, NoInfiniteOrderUnit, ParseError, UnitCongruenceViolated
from .lemma import (
    ManyUnitsCertificate,
    compute_Y,
    find_unit,
    lemma2_witness,
    verify_certificate,
    verify_witness,
)
from .norms import (
    DEFAULT_TABLE_CAP,
    FiniteGroupTable,
    NormTable,
    bfs_norm,
    check_norm_axioms,
    conjugation_closure,
    lemma_bound_experiment,
)
from .rings import (
    DEFAULT_PELL_CAP,
    PrincipalIdeal,
    exact_quotient,
    infinite_order_unit,
    parse_element,
    parse_ring,
    quotient,
)
from .sl2 import parse_matrix


def _ring(args):
    return parse_ring(args.ring)


def _unit_certificate(c, u) -> ManyUnitsCertificate:
    """Wrap an explicitly supplied unit as a trivial-power certificate."""
    y = exact_quotient(u - 1, c * c)
    if y is None:
        raise UnitCongruenceViolated(
            f"u - 1 = {u - 1} is not divisible by c^2 = {c * c}"
        )
    cert = ManyUnitsCertificate(
        c=c, v=u, u=u, k=1, y=y, check_u8=(u**8 != c.ring.one())
    )
    verify_certificate(cert)
    return cert


# ---------------------------------------------------------------------------
# handlers (each returns the JSON-ready dict to print)


def _cmd_ring_info(args) -> dict:
    ring = _ring(args)
    try:
        v = str(infinite_order_unit(ring, args.pell_cap))
    except NoInfiniteOrderUnit:
        v = None
    return {
        "name": ring.name,
        "kind": ring.kind,
        "param": ring.param,
        "infinite_order_unit": v,
    }


def _cmd_unit_find(args) -> dict:
    ring = _ring(args)
    cert = find_unit(parse_element(ring, args.c), ring, pell_cap=args.pell_cap)
    return certs.make_document("many-units", ring, certs.many_units_payload(cert))


def _cmd_lemma_witness(args) -> dict:
    ring = _ring(args)
    matrix = parse_matrix(ring, args.A)
    if args.u is not None:
        u = parse_element(ring, args.u)
    else:
        u = find_unit(matrix.c, ring, pell_cap=args.pell_cap).u
    witness = lemma2_witness(matrix, u, parse_element(ring, args.z))
    if args.elementary:
        factors = tuple(
            replace(f, conjugator=expand_diagonals(f.conjugator))
            for f in witness.factors
        )
        witness = replace(witness, factors=factors)
        verify_witness(witness)
    return certs.make_document("lemma2-witness", ring, certs.witness_payload(witness))


def _cmd_lemma_y(args) -> dict:
    ring = _ring(args)
    parts = compute_Y(parse_matrix(ring, args.A), parse_element(ring, args.u))
    return {
        "ring": ring.name,
        "Y": str(parts.Y),
        "q": str(parts.q),
        "t": str(parts.t),
        "x": str(parts.x),
        "y": str(parts.y),
    }


def _cmd_decompose(args) -> dict:
    ring = _ring(args)
    dec = decompose(
        parse_matrix(ring, args.A),
        depth_cap=args.depth_cap,
        node_cap=args.node_cap,
    )
    return certs.make_document("decomposition", ring, certs.decomposition_payload(dec))


def _cmd_h_decompose(args) -> dict:
    ring = _ring(args)
    u = parse_element(ring, args.u)
    dec = h_decomposition(u)
    return certs.make_document(
        "h-decomposition", ring, certs.decomposition_payload(dec, unit=u)
    )


def _table(ring, args) -> FiniteGroupTable:
    modulus = parse_element(ring, args.modulus)
    return FiniteGroupTable(quotient(PrincipalIdeal(modulus)), args.table_cap)


def _cmd_norm_bfs(args) -> dict:
    ring = _ring(args)
    table = _table(ring, args)
    seed = [table.from_matrix(parse_matrix(ring, text)) for text in args.gen]
    gens = conjugation_closure(table, seed) if args.closure else frozenset(seed)
    g = table.from_matrix(parse_matrix(ring, args.element))
    norm = bfs_norm(table, gens, g)
    return {
        "ring": ring.name,
        "modulus": str(parse_element(ring, args.modulus)),
        "group_order": len(table),
        "generator_count": len(gens),
        "element": args.element,
        "norm": "inf" if norm == float("inf") else norm,
    }


def _cmd_norm_lemma_bound(args) -> dict:
    ring = _ring(args)
    matrix = parse_matrix(ring, args.A)
    if args.u is not None:
        cert = _unit_certificate(matrix.c, parse_element(ring, args.u))
    else:
        cert = find_unit(matrix.c, ring, pell_cap=args.pell_cap)
    report = lemma_bound_experiment(
        matrix,
        cert,
        PrincipalIdeal(parse_element(ring, args.modulus)),
        args.samples,
        rng=random.Random(args.seed),
        require_nontrivial=not args.allow_degenerate,
        table_cap=args.table_cap,
    )
    return certs.make_document(
        "norm-experiment", ring, certs.experiment_payload(report, matrix, cert)
    )


def _cmd_norm_axioms(args) -> dict:
    ring = _ring(args)
    table = _table(ring, args)
    seed = [table.from_matrix(parse_matrix(ring, text)) for text in args.gen]
    gens = conjugation_closure(table, seed)
    report = check_norm_axioms(NormTable(table, gens, check=False))
    payload = certs.axiom_report_payload(
        modulus_text=str(parse_element(ring, args.modulus)),
        seed_texts=[str(parse_matrix(ring, text)) for text in args.gen],
        group_order=len(table),
        generator_count=len(gens),
        report=report,
    )
    return certs.make_document("axiom-report", ring, payload)


def _cmd_verify(args) -> dict:
    if args.file == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(args.file, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ParseError(f"cannot read {args.file}: {exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    return certs.verify_document(doc)


# ---------------------------------------------------------------------------
# parser


def _add_ring_flag(p):
    p.add_argument("--ring", required=True, help="ring descriptor, e.g. Z, Z[1/6], Z[sqrt2]")


def _add_table_cap(p):
    p.add_argument(
        "--table-cap",
        type=int,
        default=DEFAULT_TABLE_CAP,
        help="refuse quotients whose group table would exceed this size",
    )


def _add_pell_cap(p):
    p.add_argument(
        "--pell-cap",
        type=int,
        default=DEFAULT_PELL_CAP,
        help="search bound for the fundamental unit of a quadratic ring",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sl2units",
        description="exact SL2 certificates over Z, Z[1/m], and real quadratic rings",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    ring = sub.add_parser("ring", help="ring utilities").add_subparsers(
        dest="subcommand", required=True
    )
    p = ring.add_parser("info", help="describe a ring and its canonical infinite-order unit")
    _add_ring_flag(p)
    _add_pell_cap(p)
    p.set_defaults(handler=_cmd_ring_info)

    unit = sub.add_parser("unit", help="unit certificates").add_subparsers(
        dest="subcommand", required=True
    )
    p = unit.add_parser("find", help="certify u with c^2 | (u - 1) and u^8 != 1")
    _add_ring_flag(p)
    p.add_argument("--c", required=True, help="nonzero ring element")
    _add_pell_cap(p)
    p.set_defaults(handler=_cmd_unit_find)

    lemma = sub.add_parser("lemma", help="conjugation-witness constructions").add_subparsers(
        dest="subcommand", required=True
    )
    p = lemma.add_parser(
        "witness",
        help="four-factor witness writing E12((u^4 - u^-4) z) as a product of conjugates",
    )
    _add_ring_flag(p)
    p.add_argument("--A", required=True, help="matrix [[a,b],[c,d]] with nonzero corner c")
    p.add_argument("--z", required=True, help="target multiplier, must lie in (c)")
    p.add_argument("--u", help="unit to use; derived from the corner via unit find when omitted")
    p.add_argument(
        "--elementary",
        action="store_true",
        help="expand diagonal conjugator factors into elementary ones",
    )
    _add_pell_cap(p)
    p.set_defaults(handler=_cmd_lemma_witness)
    p = lemma.add_parser("y", help="the upper-triangular conjugate product and its scalars")
    _add_ring_flag(p)
    p.add_argument("--A", required=True, help="matrix [[a,b],[c,d]] with nonzero corner c")
    p.add_argument("--u", required=True, help="unit with u - 1 in (c^2)")
    p.set_defaults(handler=_cmd_lemma_y)

    p = sub.add_parser("decompose", help="write a matrix as elementary transvections")
    _add_ring_flag(p)
    p.add_argument("--A", required=True, help="matrix [[a,b],[c,d]] with determinant 1")
    p.add_argument("--depth-cap", type=int, default=DEFAULT_DEPTH_CAP)
    p.add_argument("--node-cap", type=int, default=DEFAULT_NODE_CAP)
    p.set_defaults(handler=_cmd_decompose)

    p = sub.add_parser("h-decompose", help="six-factor elementary form of diag(u, 1/u)")
    _add_ring_flag(p)
    p.add_argument("--u", required=True, help="unit of the ring")
    p.set_defaults(handler=_cmd_h_decompose)

    norm = sub.add_parser("norm", help="word norms in finite quotients").add_subparsers(
        dest="subcommand", required=True
    )
    p = norm.add_parser("bfs", help="word norm of one element over a generating set")
    _add_ring_flag(p)
    p.add_argument("--modulus", required=True, help="generator of the reduction ideal")
    p.add_argument(
        "--gen",
        action="append",
        required=True,
        help="generator matrix; repeat for several",
    )
    p.add_argument("--element", required=True, help="matrix whose norm to compute")
    p.add_argument(
        "--closure",
        action="store_true",
        help="replace the generators by their conjugation closure first",
    )
    _add_table_cap(p)
    p.set_defaults(handler=_cmd_norm_bfs)

    p = norm.add_parser(
        "lemma-bound",
        help="sample the scaled ideal and check the 4-ball bound in a finite quotient",
    )
    _add_ring_flag(p)
    p.add_argument("--A", required=True, help="matrix [[a,b],[c,d]] with nonzero corner c")
    p.add_argument("--modulus", required=True, help="generator of the reduction ideal")
    p.add_argument("--u", help="unit to use; derived from the corner when omitted")
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--seed", type=int, default=0, help="seed for the sampling RNG")
    p.add_argument(
        "--allow-degenerate",
        action="store_true",
        help="count trivial images as vacuous passes instead of failing",
    )
    _add_pell_cap(p)
    _add_table_cap(p)
    p.set_defaults(handler=_cmd_norm_lemma_bound)

    p = norm.add_parser("axioms", help="exhaustive norm-axiom report for a BFS word norm")
    _add_ring_flag(p)
    p.add_argument("--modulus", required=True, help="generator of the reduction ideal")
    p.add_argument(
        "--gen",
        action="append",
        required=True,
        help="seed generator matrix; the conjugation closure is taken",
    )
    _add_table_cap(p)
    p.set_defaults(handler=_cmd_norm_axioms)

    p = sub.add_parser("verify", help="re-check a certificate document")
    p.add_argument("file", help="path to a certificate JSON file, or - for stdin")
    p.set_defaults(handler=_cmd_verify)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        result = args.handler(args)
    except AlgebraError as exc:
        print(json.dumps({"error": exc.name, "message": str(exc)}, sort_keys=True, indent=2))
        return 1
    print(json.dumps(result, sort_keys=True, indent=2))
    return 0


def console_main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    console_main()
