"""Command-line front end.

Exit status is 0 when the produced report passes, 1 when it fails, and 2 on
usage errors or unsupported input.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import designs, king, mub, search
from .errors import MeanKingError, UnsupportedDimension
from .gf import prime_power
from .linalg import DEFAULT_TOL
from .report import SCHEMA_VERSION, ProtocolReport

NO_SOLUTION = {
    6: "M(6)=3: no complete set of 7 orthogonal 6x6 striations exists",
    10: "M(10)<11: no complete set of 11 orthogonal 10x10 striations exists",
}


class UsageError(Exception):
    pass


def _dims(text: str) -> tuple[int, int]:
    try:
        d1, d2 = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected two dimensions as d1,d2") from None
    return d1, d2


def _positive_float(text: str) -> float:
    x = float(text)
    if not x > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return x


def _positive_int(text: str) -> int:
    x = int(text)
    if x < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return x


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--dim", type=int, help="dimension d")
    common.add_argument("--dims", type=_dims, help="composite factors d1,d2")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=_positive_int, default=10_000)
    common.add_argument("--tolerance", type=_positive_float, default=DEFAULT_TOL)
    common.add_argument("--budget", type=_positive_int, default=search.DEFAULT_BUDGET)
    common.add_argument("--format", choices=("table", "json"), default="table")
    common.add_argument("--in", dest="input", help="input document")
    common.add_argument("--mub", help="MUB document to use instead of the built-in family")
    common.add_argument("--out", help="output path")
    common.add_argument("--all-squares", action="store_true",
                        help="search: run over every reduced third square (complete d=6 search)")

    parser = argparse.ArgumentParser(prog="meanking", description="Mean king's problem verification toolkit")
    groups = parser.add_subparsers(dest="group", required=True)
    commands = {
        "mub": ("build", "verify", "export"),
        "mols": ("build", "verify", "render"),
        "strings": ("verify",),
        "equiv": ("check",),
        "king": ("verify", "simulate"),
        "composite": ("simulate",),
        "search": ("max",),
    }
    for group, actions in commands.items():
        g = groups.add_parser(group)
        sub = g.add_subparsers(dest="action", required=True)
        for action in actions:
            sub.add_parser(action, parents=[common])
    return parser


def _need_dim(args) -> int:
    if args.dim is None:
        raise UsageError("--dim is required")
    return args.dim


def _family(args, d=None) -> mub.MubFamily:
    if args.mub:
        return mub.load_mub(args.mub, args.tolerance)
    if args.input and d is None:
        return mub.load_mub(args.input, args.tolerance)
    d = d if d is not None else _need_dim(args)
    _refuse_unsolvable(d)
    return mub.build_mub(d, args.tolerance)


def _table(args) -> designs.StriationTable:
    if args.input:
        return designs.load_table(args.input)
    d = _need_dim(args)
    _refuse_unsolvable(d)
    return designs.build_striations(d)


def _refuse_unsolvable(d: int) -> None:
    if d in NO_SOLUTION:
        raise UnsupportedDimension(
            d, f"no maximal MUB/MOLS construction; {NO_SOLUTION[d]}, so the problem has no solution "
               f"of this type (see `composite simulate --dims` for a product-basis workaround)")
    if prime_power(d) is None:
        raise UnsupportedDimension(d, "no maximal MUB/MOLS construction outside prime powers")


def _write(args, text: str) -> None:
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _emit(args, report: ProtocolReport) -> int:
    if args.format == "json":
        sys.stdout.write(report.to_json() + "\n")
    else:
        sys.stdout.write(report.summary() + "\n")
        for key, value in report.details.items():
            if value is not None and not isinstance(value, dict):
                sys.stdout.write(f"  {key}: {value}\n")
        for key in ("success_count", "trials", "analytic_success"):
            if key in report.metadata:
                sys.stdout.write(f"  {key}: {report.metadata[key]}\n")
    return 0 if report.passed else 1


def _search_report(res: search.SearchResult) -> ProtocolReport:
    return ProtocolReport(
        check="search",
        passed=res.proven,
        max_deviation=0.0,
        witness=None if res.proven else {"reason": "budget exhausted", "nodes": res.nodes},
        details={"count": res.count, "proven": res.proven, "upper_bound": res.d + 1,
                 "bruck_ryser_excludes": res.bruck_ryser_excludes,
                 "squares_examined": res.squares_examined, "nodes": res.nodes},
        metadata={"d": res.d, "budget": res.budget, "all_squares": res.all_squares},
    )


def dispatch(args) -> int:
    cmd = (args.group, args.action)
    if cmd == ("mub", "export"):
        family = _family(args)
        text = json.dumps(mub.mub_to_dict(family))
        _write(args, text)
        return 0
    if cmd in (("mub", "build"), ("mub", "verify")):
        family = _family(args)
        if cmd == ("mub", "build") and args.out:
            mub.save_mub(family, args.out)
        return _emit(args, mub.verify_mub(family, args.tolerance))
    if cmd == ("mols", "build"):
        t = _table(args)
        _write(args, json.dumps(designs.table_to_dict(t)))
        return 0
    if cmd == ("mols", "verify"):
        return _emit(args, designs.verify_mols(_table(args)))
    if cmd == ("mols", "render"):
        t = _table(args)
        if args.format == "json":
            doc = {"schema": SCHEMA_VERSION, **designs.table_to_dict(t), "strings": t.strings()}
            sys.stdout.write(json.dumps(doc) + "\n")
        else:
            sys.stdout.write(designs.render(t) + "\n")
        return 0
    if cmd == ("strings", "verify"):
        return _emit(args, designs.verify_strings(_table(args)))
    if cmd == ("equiv", "check"):
        return _emit(args, designs.verify_equivalence(_table(args), args.tolerance))
    if cmd in (("king", "verify"), ("king", "simulate")):
        t = _table(args)
        family = _family(args, t.d)
        if cmd[1] == "verify":
            return _emit(args, king.verify_solution(family, t, args.tolerance))
        return _emit(args, king.simulate(family, t, args.trials, args.seed, args.tolerance))
    if cmd == ("composite", "simulate"):
        if args.dims is None:
            raise UsageError("--dims d1,d2 is required")
        proto = king.composite_build(*args.dims, tol=args.tolerance)
        report = king.composite_simulate(proto, args.trials, args.seed, args.tolerance)
        scan = king.unbiasedness_scan(proto.bases, args.tolerance)
        report.details["not_mub"] = scan.passed
        report.details["zero_overlap"] = scan.details["zero_overlap"]
        report.details["num_bases"] = int(proto.bases.shape[0])
        return _emit(args, report)
    if cmd == ("search", "max"):
        d = _need_dim(args)

        def progress(msg):
            print(msg, file=sys.stderr)

        res = search.max_striations(d, args.budget, args.all_squares, progress=progress)
        if args.out:
            with open(args.out, "w") as fh:
                json.dump({"dimension": d, "table": [list(r) for r in zip(*res.design.columns)],
                           "columns": res.count}, fh)
        return _emit(args, _search_report(res))
    raise UsageError(f"unknown command {cmd}")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return dispatch(args)
    except (UsageError, MeanKingError, OSError) as exc:
        print(f"meanking: error: {exc}", file=sys.stderr)
        return 2


run = main

if __name__ == "__main__":
    sys.exit(main())
