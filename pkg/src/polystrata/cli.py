"""Command-line entry point: ``polystrata <command> [options]``.

Exit status: 0 success, 1 verification failure, 2 parse error,
3 validation error, 4 integrity error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from .complexes import IntegrityError, build_quotient_complex, dump
from .composition import enumerate_patterns, format_composition
from .homology import reduced_cohomology_of_complement, reduced_homology_of_complement
from .invariants import (
    bouquet_count,
    kappa,
    load_appendix,
    stability_check,
    theta_shift_comparison,
    vassiliev_ranks,
    verify_appendix,
)
from .poset import (
    PosetError,
    SpecParseError,
    complement_basis,
    format_spec,
    from_spec,
    is_profinite,
    maximal_elements,
    parse_spec,
)

MAX_D = 13
CSV_COLUMNS = ["d", "theta", "degree", "rank", "torsion", "classification"]


class UsageError(Exception):
    pass


def _threads(args) -> int:
    n = args.threads
    if n is None:
        env = os.environ.get("THREADS")
        n = int(env) if env else (os.cpu_count() or 1)
    if n < 1:
        raise UsageError(f"--threads must be >= 1, got {n}")
    return n


def _check_d(args, d: int, low: int = 2) -> None:
    if d < low:
        raise PosetError(f"d must be >= {low}, got {d}")
    if d > MAX_D:
        if not args.allow_large:
            raise PosetError(f"d={d} exceeds the supported cap {MAX_D}; pass --allow-large to override")
        print(f"warning: d={d} above {MAX_D}; memory and time grow like 2^d", file=sys.stderr)


def _csv(rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for row in rows:
        w.writerow(row)
    return buf.getvalue().rstrip("\n")


def _json(obj) -> str:
    return json.dumps(obj, sort_keys=True)


def _emit(text: str) -> None:
    sys.stdout.write(text + "\n")


def cmd_enumerate(args) -> int:
    _check_d(args, args.d, low=1)
    parity = args.parity or ("even" if args.d % 2 == 0 else "odd")
    items = enumerate_patterns(args.d, parity, exclude_basepoint=not args.include_basepoint)
    if args.format == "json":
        _emit(_json({"d": args.d, "parity": parity, "count": len(items), "compositions": [format_composition(w) for w in items]}))
    elif args.format == "csv":
        _emit(_csv([["composition", "norm", "reduced_norm", "support"]] + [[format_composition(w), w.norm, w.reduced_norm, w.support] for w in items]))
    else:
        for w in items:
            _emit(f"({format_composition(w)})")
        _emit(f"# {len(items)} compositions")
    return 0


def cmd_poset(args) -> int:
    _check_d(args, args.d)
    spec = parse_spec(args.theta)
    theta = from_spec(spec, args.d)
    maximal = maximal_elements(theta) if theta.elements else []
    profinite, note = is_profinite(spec)
    comp = complement_basis(theta)
    data = {
        "d": args.d,
        "theta": format_spec(spec),
        "size": len(theta),
        "elements": [format_composition(w) for w in theta.sorted()],
        "maximal": [format_composition(w) for w in maximal],
        "complement_size": len(comp),
        "profinite": profinite,
        "profinite_note": note,
    }
    if args.format == "json":
        _emit(_json(data))
    elif args.format == "csv":
        rows = [["composition", "norm", "reduced_norm", "maximal"]]
        rows += [[format_composition(w), w.norm, w.reduced_norm, int(w in maximal)] for w in theta.sorted()]
        _emit(_csv(rows))
    else:
        _emit(f"theta = {data['theta']}  d = {args.d}  |theta| = {data['size']}  |complement| = {data['complement_size']}")
        _emit("maximal: " + " ".join(f"({m})" for m in data["maximal"]))
        _emit("elements: " + " ".join(f"({m})" for m in data["elements"]))
        verdict = {True: "yes", False: "no", None: "indeterminate"}[profinite]
        _emit(f"profinite: {verdict} ({note})")
    return 0


def _table_rows(t) -> list[list]:
    label = t.classification()
    if not t.groups:
        return [[t.d, t.theta, "", 0, "", label]]
    return [[t.d, t.theta, j, r, ";".join(map(str, tor)), label] for j, (r, tor) in t.groups.items()]


def cmd_homology(args) -> int:
    _check_d(args, args.d)
    spec = parse_spec(args.theta)
    theta = from_spec(spec, args.d)
    if args.dump:
        _emit(dump(build_quotient_complex(theta)))
        return 0
    if args.indexing == "homology":
        t = reduced_homology_of_complement(theta)
    else:
        t = reduced_cohomology_of_complement(theta)
    if args.format == "json":
        _emit(t.to_json())
    elif args.format == "csv":
        _emit(_csv([CSV_COLUMNS] + _table_rows(t)))
    else:
        sym = "H^" if t.indexing == "reducedCohomologyOfComplement" else "H_"
        _emit(f"d={t.d} theta={t.theta} ({t.indexing})")
        if not t.groups:
            _emit("  all reduced groups vanish")
        for j, (r, tor) in t.groups.items():
            parts = ([f"Z^{r}" if r > 1 else "Z"] if r else []) + [f"Z/{x}" for x in tor]
            _emit(f"  {sym}{j} = " + " + ".join(parts))
        _emit(f"classification: {t.classification()}")
    return 0


def cmd_appendix(args) -> int:
    max_d = args.max_d if args.max_d is not None else (13 if args.stretch else 11)
    if not 4 <= max_d <= 13:
        raise UsageError(f"--max-d must lie in [4, 13] (the table starts at d=4), got {max_d}")
    entries = load_appendix(args.expected) if args.expected else None
    rows = verify_appendix(max_d, negative_max_d=max_d if args.stretch else 8, entries=entries, workers=_threads(args))
    failed = [r for r in rows if not r.passed]
    listed = [r for r in rows if r.kind == "listed"]
    negative = [r for r in rows if r.kind == "negative"]
    if args.format == "json":
        _emit(_json([r.to_dict() for r in rows]))
    elif args.format == "csv":
        out = [["d", "omega", "kind", "expected", "computed", "status"]]
        out += [[r.d, format_composition(r.omega, compact=True), r.kind, r.expected, r.computed, "PASS" if r.passed else "FAIL"] for r in rows]
        _emit(_csv(out))
    else:
        _emit(f"{'d':>3}  {'omega':<22} {'expected':<9} {'computed':<9} status")
        for r in listed + [r for r in negative if not r.passed]:
            _emit(f"{r.d:>3}  {'(' + format_composition(r.omega, compact=True) + ')':<22} {r.expected:<9} {r.computed:<9} {'PASS' if r.passed else 'FAIL'}")
        bad_neg = sum(not r.passed for r in negative)
        _emit(f"negative control: {len(negative)} unlisted generators, {len(negative) - bad_neg} trivial, {bad_neg} FAIL")
        _emit(f"{len(rows) - len(failed)}/{len(rows)} PASS")
    if failed:
        for r in failed:
            print(_json({"error": "verification", "row": r.to_dict()}), file=sys.stderr)
        return 1
    return 0


def cmd_bouquet(args) -> int:
    _check_d(args, args.d)
    a = bouquet_count(args.d, args.k, args.q)
    note = "q=0 with odd d" if args.q == 0 and args.d % 2 else ""
    if args.format == "json":
        _emit(_json({"d": args.d, "k": args.k, "q": args.q, "A": a, "note": note}))
    elif args.format == "csv":
        _emit(_csv([["d", "k", "q", "A"], [args.d, args.k, args.q, a]]))
    else:
        _emit(f"A = {a}" + (f"  ({note})" if note else ""))
    return 0


def cmd_stability(args) -> int:
    _check_d(args, args.d)
    spec = parse_spec(args.theta)
    if args.shift:
        _emit(_json(theta_shift_comparison(spec, args.d)))
        return 0
    report = stability_check(spec, args.d)
    data = report.to_dict()
    if args.format == "json":
        _emit(_json(data))
    elif args.format == "csv":
        body = [[args.d, data["theta"], j, "agree"] for j in data["verified_range"]]
        body += [[args.d, data["theta"], f["degree"], "differ"] for f in data["failures"]]
        _emit(_csv([["d", "theta", "degree", "status"]] + sorted(body, key=lambda r: r[2])))
    else:
        _emit(f"theta={data['theta']} d={args.d} maximal={data['maximal']} eta={data['eta']} psi={data['psi']}")
        _emit(f"at d+2: eta={data['eta_next']} psi={data['psi_next']} xi={data['xi']}")
        _emit(f"agree for j in {data['verified_range']}")
        for f in data["failures"]:
            _emit(f"  j={f['degree']}: d -> {f['at_d']}  d+2 -> {f['at_d_plus_2']}")
    return 1 if report.failures else 0


def cmd_kappa(args) -> int:
    value = kappa(args.d)
    if args.format == "json":
        _emit(_json({"d": args.d, "kappa": value}))
    elif args.format == "csv":
        _emit(_csv([["d", "kappa"], [args.d, value]]))
    else:
        _emit(str(value))
    return 0


def cmd_vassiliev(args) -> int:
    ranks = vassiliev_ranks(args.d, args.k)
    if args.format == "json":
        _emit(_json({"d": args.d, "k": args.k, "groups": [{"degree": j, "rank": r} for j, r in ranks.items()]}))
    elif args.format == "csv":
        _emit(_csv([["degree", "rank"]] + [[j, r] for j, r in ranks.items()]))
    else:
        for j, r in ranks.items():
            _emit(f"degree {j}: rank {r}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "table"), default="table")
    common.add_argument("--threads", type=int, default=None, help="worker count (env THREADS, default: CPU count)")
    common.add_argument("--allow-large", action="store_true", help=f"allow d > {MAX_D}")

    p = argparse.ArgumentParser(prog="polystrata", description="Homology of spaces of real polynomials with forbidden root patterns.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("enumerate", parents=[common], help="list patterns of norm <= d")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--parity", choices=("even", "odd"))
    s.add_argument("--include-basepoint", action="store_true")
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("poset", parents=[common], help="materialize a closed poset")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--theta", required=True)
    s.set_defaults(func=cmd_poset)

    s = sub.add_parser("homology", parents=[common], help="reduced (co)homology of the complement")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--theta", required=True)
    s.add_argument("--indexing", choices=("cohomology", "homology"), default="cohomology")
    s.add_argument("--dump", action="store_true", help="print the quotient complex instead")
    s.set_defaults(func=cmd_homology)

    s = sub.add_parser("appendix", parents=[common], help="verify the golden table of homology spheres")
    s.add_argument("--max-d", type=int, default=None)
    s.add_argument("--stretch", action="store_true", help="run to d=13 with full negative control")
    s.add_argument("--expected", default=None, help="path to an alternative golden table")
    s.set_defaults(func=cmd_appendix)

    s = sub.add_parser("bouquet", parents=[common], help="sphere count A(d, k, q)")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--q", type=int, default=0)
    s.set_defaults(func=cmd_bouquet)

    s = sub.add_parser("stability", parents=[common], help="compare complement homology at d and d+2")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--theta", required=True)
    s.add_argument("--shift", action="store_true", help="experimental shifted comparison of subcomplex homology")
    s.set_defaults(func=cmd_stability)

    s = sub.add_parser("kappa", parents=[common], help="free-group rank kappa(d)")
    s.add_argument("--d", type=int, required=True)
    s.set_defaults(func=cmd_kappa)

    s = sub.add_parser("vassiliev", parents=[common], help="ranks of the moderate-singularity cohomology")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.set_defaults(func=cmd_vassiliev)
    return p


def _fail(kind: str, code: int, exc: BaseException) -> int:
    print(_json({"error": kind, "message": str(exc)}), file=sys.stderr)
    return code


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SpecParseError as exc:
        return _fail("parse", 2, exc)
    except UsageError as exc:
        return _fail("usage", 2, exc)
    except IntegrityError as exc:
        return _fail("integrity", 4, exc)
    except (PosetError, ValueError) as exc:
        return _fail("validation", 3, exc)


if __name__ == "__main__":
    sys.exit(main())
