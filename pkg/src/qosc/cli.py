"""
Command-line front end.

    qosc verify --suite pw --q 0.5 --modes 3 --dim 8 --format json
    qosc sweep --metric commutator_norm --grid 0.5:0.99:6
    qosc nf --expr "a1 * a1^+" --pres paper
    qosc crosscheck --words 100 --max-len 6

Exit status: 0 all pass, 1 verification failure, 2 usage or configuration error.
"""

import argparse
import json
import sys

import numpy as np

from .errors import QoscError
from .exprs import parse_expr
from .fockrep import MAX_DIM, MAX_MODES
from .ncalg import normal_form, paper, pw
from .verify import METRICS, SUITES, Params, cross_check, limit_sweep, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _q(text):
    v = float(text)
    if not 0.0 < v < 1.0:
        raise argparse.ArgumentTypeError("q must lie in (0,1)")
    return v


def _bounded(lo, hi, name):
    def conv(text):
        v = int(text)
        if not lo <= v <= hi:
            raise argparse.ArgumentTypeError(f"{name} must be in {lo}..{hi}")
        return v
    return conv


def _positive(text):
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("tol must be positive")
    return v


def parse_grid(text):
    """``start:stop:count`` -> list of ``count`` points, endpoints included, inside (0,1)."""
    try:
        start, stop, count = text.split(":")
        start, stop, count = float(start), float(stop), int(count)
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must be start:stop:count, got {text!r}") from None
    if count < 1:
        raise argparse.ArgumentTypeError("grid count must be >= 1")
    if not (0.0 < start < 1.0 and 0.0 < stop < 1.0):
        raise argparse.ArgumentTypeError("grid must lie inside (0,1)")
    return [float(v) for v in np.linspace(start, stop, count)]


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", type=_q, default=0.5, help="deformation parameter in (0,1)")
    common.add_argument("--modes", type=_bounded(1, MAX_MODES, "modes"), default=2)
    common.add_argument("--dim", type=_bounded(2, MAX_DIM, "dim"), default=8, help="Fock cutoff per mode")
    common.add_argument("--tol", type=_positive, default=1e-10)
    common.add_argument("--margin", type=_bounded(0, MAX_DIM, "margin"), default=None,
                        help="override the interior margin (flagged in the report)")
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--out", default=None, help="write output here instead of stdout")

    p = _Parser(prog="qosc", description="Verify q-oscillator algebra relations symbolically and numerically.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", parents=[common], help="run a relation suite")
    v.add_argument("--suite", required=True, choices=sorted(SUITES) + ["all"])

    s = sub.add_parser("sweep", parents=[common], help="q -> 1 limit table")
    s.add_argument("--metric", choices=METRICS, default="commutator_norm")
    s.add_argument("--grid", type=parse_grid, default=parse_grid("0.5:0.99:6"))

    n = sub.add_parser("nf", parents=[common], help="normal form of an expression")
    n.add_argument("--expr", required=True)
    n.add_argument("--pres", choices=("paper", "pw"), default="paper")

    c = sub.add_parser("crosscheck", parents=[common], help="symbolic vs numeric evaluation of random words")
    c.add_argument("--words", type=int, default=100)
    c.add_argument("--max-len", type=_bounded(1, 8, "max-len"), default=6)
    c.add_argument("--pres", choices=("paper", "pw", "both"), default="both")
    return p


def _emit(text, out):
    if out is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        with open(out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")


def _params(args):
    return Params(q=args.q, modes=args.modes, dim=args.dim, margin=args.margin, seed=args.seed, tol=args.tol)


def _report_text(reports, fmt):
    if fmt == "json":
        if len(reports) == 1:
            return reports[0].to_json()
        return json.dumps([r.to_dict() for r in reports], indent=2)
    return "\n".join(r.to_text() for r in reports)


def cmd_verify(args):
    ids = sorted(SUITES) if args.suite == "all" else [args.suite]
    params = _params(args)
    reports = [run_suite(sid, params) for sid in ids]
    _emit(_report_text(reports, args.format), args.out)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def cmd_sweep(args):
    rows = limit_sweep(args.metric, args.grid, modes=1, dim=args.dim)
    if args.format == "json":
        text = json.dumps({"metric": args.metric, "dim": args.dim,
                           "rows": [{"q": q0, "value": v} for q0, v in rows]}, indent=2)
    else:
        text = "q,value\n" + "\n".join(f"{q0!r},{v!r}" for q0, v in rows)
    _emit(text, args.out)
    return EXIT_OK


def cmd_nf(args):
    pres = paper(args.modes) if args.pres == "paper" else pw(args.modes)
    p = parse_expr(args.expr, pres)
    nf = normal_form(p)
    if args.format == "json":
        _emit(json.dumps({"expr": args.expr, "pres": args.pres, "normal_form": str(nf)}), args.out)
    else:
        _emit(str(nf), args.out)
    return EXIT_OK


def cmd_crosscheck(args):
    pres = ("paper", "pw") if args.pres == "both" else (args.pres,)
    rep = cross_check(args.words, args.max_len, args.seed, _params(args), pres)
    _emit(_report_text([rep], args.format), args.out)
    return EXIT_OK if rep.passed else EXIT_FAIL


COMMANDS = {"verify": cmd_verify, "sweep": cmd_sweep, "nf": cmd_nf, "crosscheck": cmd_crosscheck}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except QoscError as exc:
        print(f"qosc {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"qosc {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
