"""Command-line interface: ``quadwaring <subcommand> ...``.

Exit codes: 0 success, 1 verification failure or infeasible system,
2 usage error. ``QUADWARING_OUTPUT_DIR`` sets where certificates go when
``--output`` is not given.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .ansatz import generate, generate_symbolic
from .bounds import CSV_HEADER, bounds_report
from .certify import deserialize, serialize, to_numeric_terms, verify_exact, verify_numeric
from .errors import (
    DomainError,
    InconsistentSystem,
    InvalidArgument,
    InvalidTolerance,
    ParseError,
    RetryExhausted,
    SingularBlock,
    SizeCapExceeded,
    UnknownBuiltin,
    VersionUnsupported,
)
from .formulas import BUILTIN_NAMES, builtin

OUTPUT_DIR_ENV = "QUADWARING_OUTPUT_DIR"
CLOSED_FORM_CAP = 7

USAGE_ERRORS = (InvalidArgument, DomainError, UnknownBuiltin, InvalidTolerance, SizeCapExceeded)
FAILURES = (ParseError, VersionUnsupported, InconsistentSystem, SingularBlock, RetryExhausted)


class UsageError(Exception):
    pass


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _range(text: str) -> range:
    """``a:b`` (inclusive) or a single integer."""
    try:
        if ":" in text:
            a, b = text.split(":", 1)
            lo, hi = int(a), int(b)
        else:
            lo = hi = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a or a:b, got {text!r}") from None
    if lo < 1 or hi < lo:
        raise argparse.ArgumentTypeError(f"bad range {text!r}")
    return range(lo, hi + 1)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="quadwaring", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="subcommand", required=True)

    g = sub.add_parser("generate", help="build a decomposition from the symmetric ansatz")
    g.add_argument("--n", type=_positive, required=True)
    g.add_argument("--s", type=_positive, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--strategy", choices=["sequence", "random"], default="sequence")
    g.add_argument("--no-merge-top", action="store_true",
                   help="use distinct points for arities s and s-1 instead of all-ones")
    g.add_argument("--output", "-o", help="certificate path ('-' for stdout)")
    g.add_argument("--verify", action="store_true", help="verify exactly before writing")

    v = sub.add_parser("verify", help="check a certificate")
    v.add_argument("certificate")
    v.add_argument("--numeric", action="store_true", help="floating check instead of exact")
    v.add_argument("--tol", type=float, default=1e-25)
    v.add_argument("--prec", type=int, default=256)

    b = sub.add_parser("bounds", help="rank bounds for one (n, s)")
    b.add_argument("--n", type=_positive, required=True)
    b.add_argument("--s", type=_positive, required=True)
    b.add_argument("--achieved", type=int)
    b.add_argument("--format", choices=["text", "json", "csv"], default="text")

    t = sub.add_parser("table", help="bounds over ranges of n and s")
    t.add_argument("--n", type=_range, required=True, help="n or a:b")
    t.add_argument("--s", type=_range, required=True, help="s or a:b")
    t.add_argument("--format", choices=["csv", "text", "json"], default="csv")
    t.add_argument("--output", "-o")

    c = sub.add_parser("closed-form", help="weights as polynomials in n")
    c.add_argument("--s", type=_positive, required=True)
    c.add_argument("--format", choices=["text", "json"], default="text")

    bi = sub.add_parser("builtin", help="materialize a named closed formula")
    bi.add_argument("name", help=", ".join(BUILTIN_NAMES))
    bi.add_argument("--n", type=_positive, required=True)
    bi.add_argument("--output", "-o")
    bi.add_argument("--verify", action="store_true")

    cp = sub.add_parser("check-paper", help="run every reproduction check and print a scorecard")
    cp.add_argument("--only", help="comma-separated criterion numbers")
    cp.add_argument("--details", action="store_true")
    return ap


def _default_path(stem: str) -> Path:
    return Path(os.environ.get(OUTPUT_DIR_ENV, ".")) / f"{stem}.json"


def _write(data: bytes, output: str | None, stem: str, out) -> str:
    if output == "-":
        out.write(data.decode("utf-8"))
        return "<stdout>"
    path = Path(output) if output else _default_path(stem)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(data)
    return str(path)


def _summary(d, out, err):
    rep = bounds_report(d.n, d.s, d.size)
    print(f"size {d.size}  (n={d.n}, s={d.s}, field={d.field})", file=err)
    print(f"lower {rep.lower_catalecticant}  upper11 {rep.upper_thm11}  upper42 {rep.upper_thm42}  "
          f"generic {rep.generic_rank_exact} (ceil {rep.generic_rank_ceil})  "
          f"subgeneric {str(rep.subgeneric).lower()}", file=err)


def _emit_decomposition(d, args, stem, out, err) -> int:
    if args.verify:
        o = verify_exact(d)
        if not o.ok:
            print(f"verification failed: {o.describe()}", file=err)
            return 1
    where = _write(serialize(d), args.output, stem, out)
    _summary(d, out, err if args.output == "-" else out)
    if where != "<stdout>":
        print(f"certificate written to {where}", file=out)
    return 0


def cmd_generate(args, out, err) -> int:
    d = generate(args.n, args.s, seed=args.seed, strategy=args.strategy,
                 merge_top=not args.no_merge_top)
    return _emit_decomposition(d, args, f"q_n{args.n}_s{args.s}_seed{args.seed}", out, err)


def cmd_builtin(args, out, err) -> int:
    d = builtin(args.name, args.n)
    return _emit_decomposition(d, args, f"{args.name}_n{args.n}", out, err)


def cmd_verify(args, out, err) -> int:
    try:
        data = Path(args.certificate).read_bytes()
    except OSError as e:
        raise UsageError(f"cannot read {args.certificate}: {e.strerror}") from None
    d = deserialize(data)
    if args.numeric:
        o = verify_numeric(to_numeric_terms(d, args.prec), d.n, d.s, args.tol, args.prec)
    else:
        o = verify_exact(d)
    print(f"{args.certificate}: {o.describe()}", file=out)
    return 0 if o.ok else 1


def _report_rows(ns, ss):
    for s in ss:
        for n in ns:
            yield bounds_report(n, s)


def _csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        d = r.as_dict()
        w.writerow([str(d[k]).lower() if isinstance(d[k], bool) else d[k] for k in CSV_HEADER])
    return buf.getvalue()


def _text(rows) -> str:
    rows = [r.as_dict() for r in rows]
    cols = list(CSV_HEADER)
    cells = [[str(r[c]).lower() if isinstance(r[c], bool) else str(r[c]) for c in cols] for r in rows]
    widths = [max(len(c), *(len(row[i]) for row in cells)) if cells else len(c) for i, c in enumerate(cols)]
    lines = ["  ".join(c.rjust(w) for c, w in zip(cols, widths))]
    lines += ["  ".join(v.rjust(w) for v, w in zip(row, widths)) for row in cells]
    return "\n".join(lines) + "\n"


def _json_rows(rows) -> str:
    return json.dumps([r.as_dict() for r in rows], indent=2, sort_keys=True) + "\n"


def cmd_bounds(args, out, err) -> int:
    r = bounds_report(args.n, args.s, args.achieved)
    if args.format == "json":
        out.write(_json_rows([r]))
    elif args.format == "csv":
        out.write(_csv([r]))
    else:
        d = r.as_dict()
        for k in ("n", "s", "lower", "upper11", "upper42"):
            print(f"{k:>10}: {d[k]}", file=out)
        print(f"{'generic':>10}: {r.generic_rank_exact} (~{float(r.generic_rank_exact):.6g}, "
              f"ceil {r.generic_rank_ceil})", file=out)
        if r.achieved_size is not None:
            print(f"{'achieved':>10}: {r.achieved_size}", file=out)
        print(f"{'subgeneric':>10}: {str(r.subgeneric).lower()}", file=out)
    return 0


def cmd_table(args, out, err) -> int:
    rows = list(_report_rows(args.n, args.s))
    text = {"csv": _csv, "text": _text, "json": _json_rows}[args.format](rows)
    if args.output:
        Path(args.output).write_text(text)
        print(f"{len(rows)} rows written to {args.output}", file=out)
    else:
        out.write(text)
    return 0


def cmd_closed_form(args, out, err) -> int:
    if args.s > CLOSED_FORM_CAP:
        raise UsageError(f"closed-form is limited to s <= {CLOSED_FORM_CAP}")
    sym = generate_symbolic(args.s)
    if args.format == "json":
        scale = sym.scale
        payload = {
            "s": sym.s,
            "scale": str(scale),
            "terms": [{"k": t.k, "point": [str(c) for c in t.point], "weight": w.factored_str()}
                      for t, w in zip(sym.terms, sym.scaled_weights(scale))],
            "size": str(sym.size_polynomial()),
        }
        out.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        print(sym.format(), file=out)
        print(f"size (all weights nonzero): {sym.size_polynomial()}", file=out)
    return 0


def cmd_check_paper(args, out, err) -> int:
    from .reproduce import CRITERIA, run_all

    selected = None
    if args.only:
        try:
            selected = {int(x) for x in args.only.split(",")}
        except ValueError:
            raise UsageError("--only takes comma-separated integers") from None
        if not selected <= set(range(1, len(CRITERIA) + 1)):
            raise UsageError(f"criteria are numbered 1..{len(CRITERIA)}")

    def show(r):
        print(r.line(), file=out)
        if args.details or not r.passed:
            for d in r.details:
                print(f"      {d}", file=out)
        out.flush()

    results = run_all(selected, progress=show)
    passed = sum(r.passed for r in results)
    print(f"{passed}/{len(results)} criteria passed", file=out)
    return 0 if passed == len(results) else 1


COMMANDS = {
    "generate": cmd_generate,
    "verify": cmd_verify,
    "bounds": cmd_bounds,
    "table": cmd_table,
    "closed-form": cmd_closed_form,
    "builtin": cmd_builtin,
    "check-paper": cmd_check_paper,
}


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.subcommand](args, out, err)
    except (UsageError, *USAGE_ERRORS) as e:
        print(f"quadwaring {args.subcommand}: error: {e}", file=err)
        return 2
    except FAILURES as e:
        print(f"quadwaring {args.subcommand}: {e}", file=err)
        return 1


if __name__ == "__main__":
    sys.exit(main())
