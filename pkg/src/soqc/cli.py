"""Command line entry point: ``soqc verify | table | gamma``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .chartable import character_table
from .errors import InvalidParameter, ReportIOError, ResourceLimit
from .field import FieldTable
from .groups import KINDS, build_group
from .report import dumps_json, emit_report, render_markdown
from .verify import VerifyConfig, run_suite
from .zeta import ZetaContext


def _field_args(p: argparse.ArgumentParser, with_l: bool = True) -> None:
    p.add_argument("--p", type=int, default=3, help="odd prime")
    p.add_argument("--r", type=int, default=1, help="extension degree, q = p^r")
    if with_l:
        p.add_argument("--l", type=int, default=2, help="rank: the group is SO_{2l}")
    p.add_argument("--rho", type=int, default=None, help="field code of the nonsquare (default: least)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="soqc", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run the check catalog and write a report")
    _field_args(v)
    v.add_argument("--checks", default="all", help="comma separated names, 'all' or 'weyl-only'")
    v.add_argument("--format", choices=("json", "md"), default="json")
    v.add_argument("--out", type=Path, default=None, help="report path; figures are written next to it")
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--timing", action="store_true", help="include wall-clock timings")
    v.add_argument("--no-figures", action="store_true")

    t = sub.add_parser("table", help="print the exact character table of a group")
    _field_args(t, with_l=False)
    t.add_argument("--group", choices=KINDS, required=True)
    t.add_argument("--size", type=int, required=True, help="n for GL_n and SO_{2n+1}, l for SO_{2l}")
    t.add_argument("--out", type=Path, default=None)

    g = sub.add_parser("gamma", help="gamma factors of generic cuspidal pi against all generic tau")
    _field_args(g)
    g.add_argument("--out", type=Path, default=None)
    g.add_argument("--certificates", action="store_true", help="include the certificate pairs")
    return parser


def _write(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        out.write_text(text)
    except OSError as exc:
        raise ReportIOError(f"cannot write {out}: {exc}") from exc


def cmd_verify(args) -> int:
    config = VerifyConfig(args.p, args.r, args.l, args.rho, VerifyConfig.parse_checks(args.checks),
                          args.format, args.jobs)
    report = run_suite(config)
    if args.out is None:
        text = dumps_json(report, args.timing) if args.format == "json" else render_markdown(report, args.timing)
        sys.stdout.write(text)
    else:
        for path in emit_report(report, args.format, args.out, args.timing, not args.no_figures):
            print(path, file=sys.stderr)
    counts = report.counts()
    print(f"{counts['pass']} pass, {counts['fail']} fail, {counts['skipped']} skipped", file=sys.stderr)
    return 0 if report.passed else 1


def cmd_table(args) -> int:
    F = FieldTable(args.p, args.r, args.rho)
    G = build_group(args.group, F, args.size)
    _write(json.dumps(character_table(G).to_json(), sort_keys=True, indent=2) + "\n", args.out)
    return 0


def cmd_gamma(args) -> int:
    ctx = ZetaContext(FieldTable(args.p, args.r, args.rho), args.l)
    th = ctx.theory
    records = []
    for n in range(1, args.l + 1):
        for pi in th.generic_cuspidal():
            for tau in ctx.taus(n):
                rec = ctx.gamma_factor(th.bessel(pi), tau).to_json()
                if not args.certificates:
                    rec.pop("certificate")
                records.append(rec)
    out = {"q": ctx.F.q, "l": args.l, "conductor": ctx.E, "gamma": records}
    _write(json.dumps(out, sort_keys=True, indent=2) + "\n", args.out)
    return 0


COMMANDS = {"verify": cmd_verify, "table": cmd_table, "gamma": cmd_gamma}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (InvalidParameter, ReportIOError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ResourceLimit as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
