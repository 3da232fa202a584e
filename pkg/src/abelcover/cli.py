"""Command-line interface: ``abelcover analyze|scan|hasse-witt|classify``.

Exit codes: 0 success, 1 internal or IO error, 2 validation or argument
error, 3 corrupt checkpoint.
"""

from __future__ import annotations

import argparse
import itertools
import json
import logging
import os
import sys
from collections import Counter

from . import __version__
from .charp import (
    PrimeError,
    check_prime,
    divisibility_exponents,
    four_point_pairs,
    hasse_witt_block,
    obstruction_check,
    ordinary_fraction,
    restricted_block,
)
from .cover import CoverFamily, InvariantError, ValidationReport, genus, ramification_order, validate
from .documents import DocumentError, FamilyDocument, load_inputs
from .hodge import character, eigen_table, eigensheaf_degrees, dim_SG, eigenspace_dim
from .monodromy import distinct_factors, large_s_check, row_reduction_rule, sf_lower_bound
from .scan import CheckpointError, ScanBounds, classify, scan

EXIT_OK, EXIT_INTERNAL, EXIT_INVALID, EXIT_CHECKPOINT = 0, 1, 2, 3
SCHEMA = 1

ANALYZE_TSV_COLUMNS = ("label", "N", "m", "s", "degree", "group", "genus",
                       "dim_SG", "dim_Z", "verdict", "rule")
SCAN_TSV_COLUMNS = ("key", "N", "s", "matrix", "group", "genus", "dim_SG", "verdict", "rule")
CLASSIFY_TSV_COLUMNS = ("label", "dim_SG", "s_minus_3", "verdict", "rule")


class UsageError(Exception):
    """Bad argument value; maps to exit code 2."""


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True)


def _err(msg: str) -> None:
    print(f"abelcover: {msg}", file=sys.stderr)


def _parse_int_list(text: str, what: str) -> tuple[int, ...]:
    """``2,3,4`` or ``2..12`` or a mix like ``2..4,6``."""
    out = []
    try:
        for part in text.split(","):
            part = part.strip()
            if ".." in part:
                lo, hi = part.split("..")
                lo, hi = int(lo), int(hi)
                if hi < lo:
                    raise UsageError(f"empty range {part} for {what}")
                out.extend(range(lo, hi + 1))
            else:
                out.append(int(part))
    except ValueError as exc:
        raise UsageError(f"cannot parse {what} {text!r}") from exc
    return tuple(sorted(set(out)))


def _family_from(doc: FamilyDocument) -> CoverFamily | ValidationReport:
    return validate(doc.N, doc.matrix, label=doc.label)


def _single_input(arg: str) -> tuple[str, FamilyDocument]:
    inputs = load_inputs(arg)
    if len(inputs) != 1:
        raise DocumentError(f"expected one family, found {len(inputs)} in {arg}")
    name, doc = inputs[0]
    if isinstance(doc, Exception):
        raise doc
    return name, doc


def _violation_json(report: ValidationReport) -> list[dict]:
    return [{"tag": v.tag, "index": v.index, "detail": v.detail} for v in report.violations]


# --------------------------------------------------------------------------
# analyze


def _charp_section(f: CoverFamily, p: int) -> dict:
    section = {"prime": p, "q": (p - 1) // f.N, "blocks": []}
    for e in eigen_table(f):
        if e.d_plus == 0:
            continue
        block = hasse_witt_block(f, e.character, p)
        section["blocks"].append({
            "alpha": list(e.character.alpha),
            "size": block.size,
            "terms": [[len(block.entry(i, j)) for j in range(1, block.size + 1)]
                      for i in range(1, block.size + 1)],
        })
    if f.s == 4:
        pairs = four_point_pairs(f)
        section["pairs"] = [list(c.alpha) for c in pairs]
        section["divisibility"] = [
            {"alpha": list(c.alpha), "h": d.h, "r_a": d.r_a, "r_minus_a": d.r_minus_a, "r_pm": d.r_pm}
            for c in pairs for d in (divisibility_exponents(f, c, p, h) for h in (2, 3, 4))
        ]
        section["obstruction"] = []
        for c, c2 in itertools.combinations(pairs, 2):
            res = obstruction_check(f, c, c2, p)
            section["obstruction"].append({
                "c": list(c.alpha), "c2": list(c2.alpha),
                "result": "IdentityHolds" if res.holds else "IdentityFails",
                "scalar": res.scalar,
                "witness": list(res.witness) if res.witness is not None else None,
            })
    return section


def _monodromy_section(f: CoverFamily) -> dict:
    return {
        "factors": [{"kind": d.kind, "type": [d.a, d.b], "delta": d.delta,
                     "alpha": list(d.source_character.alpha), "name": str(d)}
                    for d in distinct_factors(f)],
        "sf_lower_bound": sf_lower_bound(f),
        "row_reduction": row_reduction_rule(f),
        "large_s": large_s_check(f),
    }


def analysis_report(doc: FamilyDocument, f: CoverFamily, charp: int | None = None,
                    monodromy: bool = False, ordinary: tuple[int, int] | None = None) -> dict:
    """Build the schema-1 report; ``ordinary`` is (trials, seed) and needs ``charp``."""
    table = []
    for e in eigen_table(f):
        deg_L, deg_omega = eigensheaf_degrees(f, e.character)
        table.append({
            "representative": list(e.character.representative),
            "alpha": list(e.character.alpha),
            "order": e.character.order,
            "d_plus": e.d_plus,
            "d_minus": e.d_minus,
            "two_torsion": e.two_torsion,
            "deg_L": deg_L,
            "deg_omega": deg_omega,
        })
    verdict = classify(f)
    report = {
        "schema": SCHEMA,
        "input": doc.to_json(),
        "valid": True,
        "warnings": list(f.warnings),
        "m": f.m,
        "s": f.s,
        "key": f.key,
        "degree": f.degree,
        "group": list(f.group.invariant_factors),
        "genus": genus(f),
        "ramification": [ramification_order(f, j) for j in range(1, f.s + 1)],
        "characters": table,
        "dim_SG": dim_SG(f),
        "dim_Z": f.dim_Z,
        "verdict": {"kind": verdict.kind, "rule": verdict.rule, "evidence": verdict.evidence},
    }
    if charp is not None:
        report["charp"] = _charp_section(f, charp)
        if ordinary is not None:
            trials, seed = ordinary
            frac = ordinary_fraction(f, charp, trials, seed)
            report["charp"]["ordinary"] = {"trials": trials, "seed": seed,
                                           "fraction": [frac.numerator, frac.denominator]}
    if monodromy:
        report["monodromy"] = _monodromy_section(f)
    return report


def _tsv(values) -> str:
    def cell(v):
        if isinstance(v, (list, tuple)):
            return ",".join(map(str, v))
        return "" if v is None else str(v)
    return "\t".join(cell(v) for v in values)


def cmd_analyze(args) -> int:
    try:
        name, doc = _single_input(args.input)
    except (OSError, DocumentError) as exc:
        _err(str(exc))
        return EXIT_INTERNAL
    if doc.label is None:
        doc = FamilyDocument(doc.N, doc.matrix, name)
    result = _family_from(doc)
    if isinstance(result, ValidationReport):
        if args.format == "json":
            print(_dump({"schema": SCHEMA, "input": doc.to_json(), "valid": False,
                         "violations": _violation_json(result)}))
        else:
            print("tag\tindex\tdetail")
            for v in result.violations:
                print(_tsv((v.tag, v.index, v.detail)))
        return EXIT_INVALID
    ordinary = None
    if args.ordinary is not None:
        if args.charp is None or args.seed is None:
            raise UsageError("--ordinary needs --charp and an explicit --seed")
        if args.ordinary < 1:
            raise UsageError("--ordinary needs a positive trial count")
        ordinary = (args.ordinary, args.seed)
    if args.charp is not None:
        check_prime(result.N, args.charp)
    report = analysis_report(doc, result, args.charp, args.monodromy, ordinary)
    if args.format == "json":
        print(_dump(report))
    else:
        print("\t".join(ANALYZE_TSV_COLUMNS))
        v = report["verdict"]
        print(_tsv((doc.label, result.N, result.m, result.s, report["degree"], report["group"],
                    report["genus"], report["dim_SG"], report["dim_Z"], v["kind"], v["rule"])))
    return EXIT_OK


# --------------------------------------------------------------------------
# scan


def cmd_scan(args) -> int:
    N_set = _parse_int_list(args.N, "--N")
    s_range = _parse_int_list(args.s, "--s")
    try:
        bounds = ScanBounds(
            N_set=N_set,
            m_max=args.m,
            s_range=s_range,
            require_noncyclic=not args.include_cyclic,
            require_reduced_presentation=args.reduced,
            all_verdicts=args.all_verdicts,
        )
    except ValueError as exc:
        _err(f"bad bounds: {exc}")
        return EXIT_INTERNAL
    jobs = args.jobs if args.jobs is not None else int(os.environ.get("ABELCOVER_JOBS", "1") or 1)
    try:
        records = list(scan(bounds, jobs=max(1, jobs), checkpoint=args.checkpoint))
    except CheckpointError as exc:
        _err(str(exc))
        return EXIT_CHECKPOINT
    lines = []
    if args.format == "tsv":
        lines.append("\t".join(SCAN_TSV_COLUMNS))
        for r in records:
            matrix = " / ".join(",".join(map(str, row)) for row in r.matrix)
            lines.append(_tsv((r.key, r.N, len(r.matrix[0]), matrix, r.group, r.genus,
                               r.dim_SG, r.verdict, r.rule)))
    else:
        lines += [_dump(dict(r.to_json(), schema=SCHEMA)) for r in records]
    text = "".join(line + "\n" for line in lines)
    if args.out:
        try:
            with open(args.out, "w") as fh:
                fh.write(text)
        except OSError as exc:
            _err(str(exc))
            return EXIT_INTERNAL
    else:
        sys.stdout.write(text)
    counts = Counter(r.verdict for r in records)
    summary = " ".join(f"{k}={counts[k]}" for k in sorted(counts))
    print(f"summary: classes={len(records)} {summary}".rstrip(), file=sys.stderr)
    return EXIT_OK


# --------------------------------------------------------------------------
# hasse-witt


def _parse_restrict(text: str) -> int:
    var, _, value = text.partition("=")
    if var.strip() != "z1" or value.strip() != "0":
        raise UsageError("only --restrict z1=0 is supported")
    return 0


def cmd_hasse_witt(args) -> int:
    try:
        _, doc = _single_input(args.input)
    except (OSError, DocumentError) as exc:
        _err(str(exc))
        return EXIT_INTERNAL
    result = _family_from(doc)
    if isinstance(result, ValidationReport):
        _err("invalid family: " + "; ".join(str(v) for v in result.violations))
        return EXIT_INVALID
    f = result
    functional = _parse_int_list_ordered(args.char)
    if len(functional) != f.m:
        raise UsageError(f"--char needs {f.m} entries")
    check_prime(f.N, args.prime)
    c = character(f, functional)
    if c.is_trivial or eigenspace_dim(f, c) == 0:
        raise UsageError(f"character {list(c.alpha)} has an empty eigenspace")
    if args.restrict:
        _parse_restrict(args.restrict)
        print(f"B = {restricted_block(f, c, args.prime)}")
        if f.s == 4 and eigenspace_dim(f, c.inverse()) == 1 and eigenspace_dim(f, c) == 1:
            for h in (2, 3, 4):
                d = divisibility_exponents(f, c, args.prime, h)
                print(f"r_a({h}) = {d.r_a}\tr_-a({h}) = {d.r_minus_a}\tr_pm({h}) = {d.r_pm}")
        return EXIT_OK
    block = hasse_witt_block(f, c, args.prime)
    if block.size == 1:
        print(block.entry(1, 1))
    else:
        for nu in range(1, block.size + 1):
            for iota in range(1, block.size + 1):
                print(f"h[{nu},{iota}] = {block.entry(nu, iota)}")
    return EXIT_OK


def _parse_int_list_ordered(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise UsageError(f"cannot parse --char {text!r}") from exc


# --------------------------------------------------------------------------
# classify


def cmd_classify(args) -> int:
    inputs = load_inputs(args.input)
    if not inputs:
        _err("no inputs")
        return EXIT_INTERNAL
    failures = 0
    if args.format == "tsv":
        print("\t".join(CLASSIFY_TSV_COLUMNS))
    for name, doc in inputs:
        if isinstance(doc, Exception):
            _err(f"{name}: {doc}")
            failures += 1
            continue
        result = _family_from(doc)
        if isinstance(result, ValidationReport):
            _err(f"{name}: invalid family: " + "; ".join(str(v) for v in result.violations))
            failures += 1
            continue
        label = doc.label or name
        v = classify(result)
        dim = v.evidence["dim_SG"]
        if args.format == "json":
            print(_dump({"schema": SCHEMA, "label": label, "dim_SG": dim,
                         "s_minus_3": result.s - 3, "verdict": v.kind, "rule": v.rule}))
        else:
            print(_tsv((label, dim, result.s - 3, v.kind, v.rule)))
    if failures == len(inputs):
        return EXIT_INTERNAL
    return EXIT_OK


# --------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        _err(message)
        raise SystemExit(EXIT_INVALID)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="abelcover", description="Abelian covers of the projective line.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    fmt = dict(choices=("json", "tsv"), default="json")

    p = sub.add_parser("analyze", help="invariants, eigenspace table and verdict for one family")
    p.add_argument("input", help="JSON document path or inline 'N=4; 2,2,0,0 / 0,1,1,2'")
    p.add_argument("--charp", type=int, metavar="P", help="add Hasse-Witt evidence at prime P")
    p.add_argument("--monodromy", action="store_true", help="add monodromy factor bounds")
    p.add_argument("--ordinary", type=int, metavar="TRIALS",
                   help="with --charp, sample branch tuples for ordinariness")
    p.add_argument("--seed", type=int, help="sampling seed (required with --ordinary)")
    p.add_argument("--format", **fmt)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("scan", help="exhaustive search over a bounded box")
    p.add_argument("--N", required=True, help="moduli, e.g. 2,3,4 or 2..12")
    p.add_argument("--m", type=int, default=2, help="number of rows (default 2)")
    p.add_argument("--s", required=True, help="branch point counts, e.g. 4 or 4..6")
    p.add_argument("--all-verdicts", action="store_true",
                   help="emit every class, not only those with dim S(G) = s - 3")
    p.add_argument("--include-cyclic", action="store_true", help="keep cyclic groups")
    p.add_argument("--reduced", action="store_true", help="require independent rows")
    p.add_argument("--checkpoint", metavar="PATH", help="resumable progress file")
    p.add_argument("--jobs", type=int, help="worker processes (default $ABELCOVER_JOBS or 1)")
    p.add_argument("--out", metavar="PATH", help="write records here instead of stdout")
    p.add_argument("--format", **fmt)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("hasse-witt", help="print a Hasse-Witt block")
    p.add_argument("input")
    p.add_argument("--char", required=True, help="functional a1,...,am")
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--restrict", metavar="z1=0", help="set z1 = 0 and print divisibility data")
    p.set_defaults(func=cmd_hasse_witt)

    p = sub.add_parser("classify", help="one verdict line per family")
    p.add_argument("input", help="document, directory of *.json, or inline text")
    p.add_argument("--format", choices=("json", "tsv"), default="tsv")
    p.set_defaults(func=cmd_classify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (UsageError, PrimeError) as exc:
        _err(str(exc))
        return EXIT_INVALID
    except (InvariantError, ValueError, OSError) as exc:
        _err(f"error: {exc}")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
