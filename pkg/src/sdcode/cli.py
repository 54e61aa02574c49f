"""Command-line surface.

Every failure class maps to a stable exit code: 2 for parse errors, 3
for validation errors, 4 for exceeded budgets, 5 for classifications
that end without their completeness certificate.  Coordinates in output
are 1-indexed; file formats are described in the records and store
modules.
"""

from __future__ import annotations

import argparse
import sys

from .classify import (
    MassAccount,
    census,
    classify_doubly_even,
    covering_radius,
    mass,
)
from .codes import LinearCode, shadow_decomposition
from .construct import bp_lift, glue_family, subtraction_candidates
from .equiv import automorphism_group, is_equivalent
from .errors import IncompleteCatalogError, SdcodeError
from .store import CatalogStore, load_gm_codes


def _load_one(path) -> LinearCode:
    codes = load_gm_codes(path)
    return codes[0]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sdcode",
        description="Classify and inspect binary doubly even self-dual codes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mass", help="count of distinct codes at a length")
    p.add_argument("n", type=int)

    p = sub.add_parser("classify", help="classify a length up to equivalence")
    p.add_argument("n", type=int)
    p.add_argument(
        "--method",
        choices=["neighbor", "glue", "lift-chain"],
        default="neighbor",
    )
    p.add_argument("--out", help="catalog store directory to write")
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--checkpoint", help="resumable shard cache directory")
    p.add_argument(
        "--budget",
        type=int,
        default=None,
        help="maximum shards this invocation may process",
    )

    p = sub.add_parser("equiv", help="decide equivalence of two codes")
    p.add_argument("a")
    p.add_argument("b")

    p = sub.add_parser("aut", help="automorphism group order and generators")
    p.add_argument("a")

    p = sub.add_parser("covrad", help="covering radius with witness")
    p.add_argument("a")

    p = sub.add_parser("weights", help="weight distribution")
    p.add_argument("a")

    p = sub.add_parser("shadow", help="shadow weight distribution")
    p.add_argument("a")

    p = sub.add_parser("lift", help="two-coordinate doubly even lift")
    p.add_argument("a")

    p = sub.add_parser("glue", help="glue two components along an isometry")
    p.add_argument("c1")
    p.add_argument("c2")
    p.add_argument(
        "--all",
        action="store_true",
        help="emit one code per inequivalent gluing, not just the first",
    )

    p = sub.add_parser("subtract", help="two-coordinate subtraction")
    p.add_argument("d")
    p.add_argument("i", type=int, nargs="?")
    p.add_argument("j", type=int, nargs="?")
    p.add_argument(
        "--extremal-pairs",
        action="store_true",
        help="list the pairs whose subtraction is extremal",
    )

    p = sub.add_parser("verify-catalog", help="re-verify a catalog store")
    p.add_argument("dir")
    p.add_argument(
        "--mass",
        action="store_true",
        help="also check the mass certificate per length",
    )

    p = sub.add_parser("census", help="invariant histograms of a store")
    p.add_argument("dir")
    p.add_argument(
        "--no-covering-radius",
        action="store_true",
        help="skip the covering radius histogram",
    )

    return parser


def _cmd_classify(args) -> int:
    store = CatalogStore(args.out) if args.out else None

    def emit(records):
        if store is not None:
            for rec in records:
                store.add(rec)

    try:
        records, account = classify_doubly_even(
            args.n,
            {"neighbor": "neighbor-closure"}.get(args.method, args.method),
            threads=args.threads,
            checkpoint=args.checkpoint,
            budget=args.budget,
        )
    except IncompleteCatalogError as exc:
        if exc.records is not None:
            emit(exc.records)
            print(f"{len(exc.records)} records (incomplete)")
        print(str(exc), file=sys.stderr)
        return exc.exit_code
    emit(records)
    print(f"{len(records)} records")
    print("mass certificate: ok")
    return 0


def _cmd_verify_catalog(args) -> int:
    store = CatalogStore(args.dir)
    problems = store.verify()
    for p in problems:
        print(p, file=sys.stderr)
    if problems:
        return 3
    records = store.records()
    print(f"{len(records)} records")
    if args.mass:
        by_n: dict[int, list] = {}
        for rec in records:
            by_n.setdefault(rec.n, []).append(rec)
        for n in sorted(by_n):
            if n % 8:
                print(f"n={n}: no mass formula (length not 0 mod 8)")
                continue
            account = MassAccount.from_records(n, by_n[n])
            if not account.complete:
                print(
                    f"n={n}: mass certificate FAILED, deficit "
                    f"{account.expected - account.total}",
                    file=sys.stderr,
                )
                return 5
            print(f"n={n}: mass certificate ok")
    return 0


def cli_dispatch(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "mass":
            print(mass(args.n))
        elif args.command == "classify":
            return _cmd_classify(args)
        elif args.command == "equiv":
            a, b = _load_one(args.a), _load_one(args.b)
            witness = is_equivalent(a, b)
            if witness is None:
                print("inequivalent")
                return 1
            print(witness.perm.cycle_string())
        elif args.command == "aut":
            group = automorphism_group(_load_one(args.a))
            print(group.order())
            for g in group.generators:
                print(g.cycle_string())
        elif args.command == "covrad":
            result = covering_radius(_load_one(args.a))
            print(f"radius {result.radius}")
            support = [
                str(i + 1)
                for i in range(result.witness_syndrome.bit_length())
                if (result.witness_syndrome >> i) & 1
            ]
            print("witness_support " + " ".join(support))
        elif args.command == "weights":
            dist = _load_one(args.a).weight_distribution()
            for w, count in enumerate(dist):
                if count:
                    print(f"{w} {count}")
        elif args.command == "shadow":
            sd = shadow_decomposition(_load_one(args.a))
            for w, count in enumerate(sd.shadow_weights):
                if count:
                    print(f"{w} {count}")
        elif args.command == "lift":
            print(bp_lift(_load_one(args.a)).gm(), end="")
        elif args.command == "glue":
            c1, c2 = _load_one(args.c1), _load_one(args.c2)
            family = glue_family(c1, c2)
            if not args.all:
                family = family[:1]
            print("\n".join(code.gm() for code in family), end="")
        elif args.command == "subtract":
            code = _load_one(args.d)
            if args.extremal_pairs:
                for i, j in subtraction_candidates(code):
                    print(f"{i + 1} {j + 1}")
            else:
                if args.i is None or args.j is None:
                    parser.error("subtract needs i j or --extremal-pairs")
                print(code.subtract(args.i - 1, args.j - 1).gm(), end="")
        elif args.command == "verify-catalog":
            return _cmd_verify_catalog(args)
        elif args.command == "census":
            store = CatalogStore(args.dir)
            print(
                census(
                    store.records(),
                    include_covering_radius=not args.no_covering_radius,
                ),
                end="",
            )
    except SdcodeError as exc:
        print(str(exc), file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    return 0


def main() -> int:
    return cli_dispatch()
