"""``perfcode`` command line: analyze, survey, verify."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict

from .errors import CapExceeded, ParseError, PerfCodeError
from .report import (
    SCHEMA_VERSION,
    format_record,
    format_summary,
    iter_survey,
    records_to_csv,
    run_analyze,
    run_verify,
    summarize,
)

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_CAP = 0, 1, 2, 3
EXIT_INTERRUPTED = 130


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="perfcode", description="Subgroup perfect codes of small finite groups.")
    sub = parser.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="analyze one group given by a spec string")
    a.add_argument("spec")
    fmt = a.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--csv", action="store_true")
    a.add_argument("--audit", action="store_true", help="also run the transversal and Cayley-graph routes")
    a.add_argument("--cap", type=int, default=None, help="lattice cap (group cap raised to match)")

    s = sub.add_parser("survey", help="analyze the default catalogue")
    s.add_argument("--max-order", type=int, required=True)
    s.add_argument("--filter", choices=["solvable", "nonsolvable"], default=None)
    s.add_argument("--json", action="store_true")
    s.add_argument("--workers", type=int, default=1)

    v = sub.add_parser("verify", help="run the verification suite")
    v.add_argument("--include-stretch", action="store_true")
    v.add_argument("--json", action="store_true")
    return parser


def _analyze(args) -> int:
    try:
        rec = run_analyze(args.spec, audit=args.audit, cap=args.cap)
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except CapExceeded as e:
        print(f"cap exceeded: {e}", file=sys.stderr)
        return EXIT_CAP
    if args.json:
        print(rec.to_json(indent=2))
    elif args.csv:
        sys.stdout.write(records_to_csv([rec]))
    else:
        print(format_record(rec))
    return EXIT_OK


def _survey(args) -> int:
    records = []
    interrupted = False
    try:
        for rec in iter_survey(args.max_order, args.filter, args.workers):
            records.append(rec)
            if not args.json:
                print(f"{rec.order:>5}  {rec.spec:<52} delta {rec.delta_count:<3} pi {rec.pi}"
                      + (f"  FAILED {','.join(rec.checks_failed)}" if rec.checks_failed else ""), flush=True)
    except CapExceeded as e:
        print(f"cap exceeded: {e}", file=sys.stderr)
        return EXIT_CAP
    except KeyboardInterrupt:
        interrupted = True
    summary = summarize(records, interrupted)
    if args.json:
        doc = {"schema_version": SCHEMA_VERSION, "records": [r.to_dict() for r in records],
               "summary": asdict(summary)}
        print(json.dumps(doc, indent=2), flush=True)
    else:
        print(format_summary(summary), flush=True)
    if interrupted:
        return EXIT_INTERRUPTED
    return EXIT_OK


def _verify(args) -> int:
    def show(row):
        if not args.json:
            print(f"{row.status.upper():<15} {row.name:<34} {row.seconds:>7.1f}s  {row.details}", flush=True)
            if row.witness:
                print(f"{'':15} witness: {row.witness}", flush=True)

    rows = run_verify(args.include_stretch, on_row=show)
    failed = [r for r in rows if r.status == "fail"]
    if args.json:
        print(json.dumps({"schema_version": SCHEMA_VERSION, "rows": [asdict(r) for r in rows],
                          "failed": len(failed)}, indent=2))
    else:
        print(f"{len(rows) - len(failed)} of {len(rows)} rows passed")
    return EXIT_FAIL if failed else EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "analyze":
            return _analyze(args)
        if args.command == "survey":
            return _survey(args)
        return _verify(args)
    except PerfCodeError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
