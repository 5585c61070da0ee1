"""Command line front end.

    quasibasis verify --example {ex1,ex2,ex3,all} [--n N] [--format json|csv|text]
                      [--output PATH] [--seed S] [--seq SPEC --op OP] [--tol T]
    quasibasis apply --op OP --vec SPEC [--example EX] [--seq SPEC] [--n N] [--times K]

Exit codes: 0 success, 1 a PASS-contract check failed, 2 usage or domain
error, 3 I/O failure, 4 numerical defect.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import __version__
from .families import DomainError, GaussOp, apply_gauss_operator, example_pair, family_member
from .multipliers import (
    DEFAULT_TAIL_TOL,
    Direction,
    LadderOperator,
    MetricOperator,
    MultiplierOperator,
    ladder_apply,
    metric_apply,
    multiplier_apply,
)
from .seqspace import CoeffVector, GaussPolyVector, ScalarSequence
from .specfun import QuadratureError
from .verify import PROBE_N, PROBE_TOL, Status, dense_definedness_probe, run_suite

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_NUMERICAL = 4

SERIES_OPS = ("Hxy", "Hyx", "Sx", "Sy", "A", "B")
GAUSS_OPS = ("H1", "H2", "T", "Tinv", "hosc")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser():
    p = _Parser(prog="quasibasis", description="Biorthogonal quasi-basis verification suite.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="run the verification suite")
    v.add_argument("--example", choices=("ex1", "ex2", "ex3", "all"), default="all")
    v.add_argument("--n", type=int, default=None, help="truncation (suite default per example)")
    v.add_argument("--format", choices=("json", "csv", "text"), default="json")
    v.add_argument("--output", default=None, help="report path (stdout when omitted)")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--seq", default=None, help="sequence preset for a single dense-definedness probe")
    v.add_argument("--op", choices=("Hxy", "Hyx", "Sx", "Sy"), default=None)
    v.add_argument("--tol", type=float, default=None, help="tail tolerance of the probe")
    v.add_argument("--exact", action=argparse.BooleanOptionalAction, default=True,
                   help="rational arithmetic in the first example checks")

    a = sub.add_parser("apply", help="apply one operator to one vector")
    a.add_argument("--op", required=True, choices=SERIES_OPS + GAUSS_OPS)
    a.add_argument("--vec", required=True, help='family member like "x:3", "e:0" or an inline list')
    a.add_argument("--example", choices=("ex1", "ex2", "ex3"), default="ex1")
    a.add_argument("--seq", default="const:1", help="multiplier or weight sequence")
    a.add_argument("--n", type=int, default=40, help="series truncation")
    a.add_argument("--times", type=int, default=1)
    a.add_argument("--tol", type=float, default=DEFAULT_TAIL_TOL)
    a.add_argument("--format", choices=("json", "text"), default="json")
    return p


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def _plain(obj):
    """JSON-safe copy: complex as [re, im], non-finite floats as strings."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [_plain(float(obj.real)), _plain(float(obj.imag))]
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else repr(x)
    if obj is None or isinstance(obj, str):
        return obj
    if hasattr(obj, "value"):
        return obj.value
    return str(obj)


def dumps_json(payload):
    return json.dumps(_plain(payload), sort_keys=True, indent=2) + "\n"


def _sci(x):
    return "" if x is None else f"{x:.6e}"


def render_csv(reports):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["check_id", "classification", "residual", "tolerance", "inputs", "values", "notes"])
    for r in reports:
        d = _plain(r.as_dict())
        w.writerow([
            d["check_id"], d["classification"], _sci(r.residual), _sci(r.tolerance),
            json.dumps(d["inputs"], sort_keys=True), json.dumps(d["values"], sort_keys=True), d["notes"],
        ])
    return buf.getvalue()


def render_text(reports):
    width = max((len(r.check_id) for r in reports), default=10)
    lines = []
    for r in reports:
        res = "-" if r.residual is None else f"{r.residual:.3e} <= {r.tolerance:.1e}"
        tail = r.values.get("tail") if isinstance(r.values, dict) else None
        extra = f"  series {tail['classification']}" if tail else ""
        lines.append(f"{r.classification.value:<12} {r.check_id:<{width}}  {res}{extra}")
    counts = {s: sum(r.classification is s for r in reports) for s in Status}
    lines.append(", ".join(f"{n} {s.value}" for s, n in counts.items()))
    return "\n".join(lines) + "\n"


def _emit(text, path):
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def _config(args):
    keys = ("example", "n", "seed", "seq", "op", "tol", "exact", "format")
    return {k: getattr(args, k) for k in keys}


def cmd_verify(args):
    if args.n is not None and args.n < 2:
        raise UsageError("--n must be at least 2")
    if args.tol is not None and not args.tol > 0:
        raise UsageError("--tol must be positive")
    if (args.seq is None) != (args.op is None):
        raise UsageError("--seq and --op go together")
    if args.seq is not None:
        try:
            seq = ScalarSequence.from_spec(args.seq)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        examples = ("ex1", "ex2") if args.example == "all" else (args.example,)
        if "ex3" in examples:
            raise UsageError("dense-definedness probes cover ex1 and ex2")
        N = PROBE_N if args.n is None else args.n
        if N < 16:
            raise UsageError("probe truncation must be at least 16")
        tol = PROBE_TOL if args.tol is None else args.tol
        try:
            reports = [dense_definedness_probe(ex, args.op, seq, N, tol) for ex in examples]
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    else:
        reports = run_suite(args.example, args.n, args.seed, exact=args.exact)
    reports = sorted(reports, key=lambda r: r.check_id)
    if args.format == "json":
        text = dumps_json({
            "meta": {"version": __version__, "config": _config(args)},
            "reports": [r.as_dict() for r in reports],
        })
    elif args.format == "csv":
        text = render_csv(reports)
    else:
        text = render_text(reports)
    _emit(text, args.output)
    if args.output is not None and args.format != "text":
        sys.stderr.write(render_text(reports))
    return EXIT_CHECK_FAILED if any(r.classification is Status.FAIL for r in reports) else EXIT_OK


# ---------------------------------------------------------------------------
# apply
# ---------------------------------------------------------------------------


def parse_vector(spec, example):
    """``x:3``, ``y:0``, ``e:2`` or an inline coefficient list.

    Inline lists are coordinates against e_1, e_2, ... for the coefficient
    examples and against the Hermite functions e_0, e_1, ... for ex3.
    """
    spec = spec.strip()
    head, sep, idx = spec.partition(":")
    if sep:
        if head not in ("x", "y", "e"):
            raise UsageError(f"unknown family {head!r} in vector spec (use x, y or e)")
        try:
            n = int(idx)
        except ValueError:
            raise UsageError(f"malformed member index in {spec!r}") from None
        kind = f"{example}_{head}" if head != "e" else ("ref_e_gauss" if example == "ex3" else "ref_e_coeff")
        try:
            return family_member(kind, n)
        except IndexError as exc:
            raise UsageError(str(exc)) from None
    try:
        coeffs = [complex(v.strip().replace("i", "j")) for v in spec.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"malformed vector spec {spec!r}") from None
    if not coeffs:
        raise UsageError("empty vector spec")
    if example != "ex3":
        return CoeffVector(coeffs)
    acc = None
    for k, c in enumerate(coeffs):
        term = c * family_member("ref_e_gauss", k)
        acc = term if acc is None else acc + term
    return acc


def _series_operator(op, example, seq, N):
    xf, yf = example_pair(example)
    if op == "Hxy":
        return MultiplierOperator(xf, yf, seq, N), multiplier_apply
    if op == "Hyx":
        return MultiplierOperator(yf, xf, seq, N), multiplier_apply
    if op == "Sx":
        return MetricOperator(xf, seq, N), metric_apply
    if op == "Sy":
        return MetricOperator(yf, seq, N), metric_apply
    direction = Direction.LOWER if op == "A" else Direction.RAISE
    return LadderOperator(direction, xf, yf, seq, N), ladder_apply


def describe_vector(v):
    if isinstance(v, GaussPolyVector):
        return {"kind": "gauss_poly", "poly": [complex(c) for c in v.poly], "rate": v.rate}
    return {"kind": "coefficients", "coefficients": [complex(c) for c in v.to_float().coefficients]}


def cmd_apply(args):
    if args.times < 1:
        raise UsageError("--times must be at least 1")
    if args.n < 2:
        raise UsageError("--n must be at least 2")
    if args.op in GAUSS_OPS and args.example != "ex3":
        raise UsageError(f"{args.op} acts on the Hermite example only (use --example ex3)")
    vec = parse_vector(args.vec, args.example)
    steps = []
    tail = None
    if args.op in GAUSS_OPS:
        for i in range(args.times):
            try:
                vec = apply_gauss_operator(GaussOp(args.op), vec)
            except DomainError as exc:
                raise DomainError(f"application {i + 1} of {args.op}: {exc}") from None
            steps.append(describe_vector(vec))
    else:
        try:
            seq = ScalarSequence.from_spec(args.seq)
            op, run = _series_operator(args.op, args.example, seq, args.n)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        for _ in range(args.times):
            vec, diag = run(op, vec, tol=args.tol)
            tail = diag.as_dict()
            steps.append(describe_vector(vec))
    result = {"op": args.op, "example": args.example, "vec": args.vec, "times": args.times,
              "result": steps[-1], "tail": tail}
    if args.format == "json":
        sys.stdout.write(dumps_json({"meta": {"version": __version__}, "apply": result}))
    else:
        sys.stdout.write(_apply_text(result))
    return EXIT_OK


def _fmt_c(c):
    c = complex(c)
    return f"{c.real:.12g}" if c.imag == 0 else f"{c.real:.12g}{c.imag:+.12g}j"


def _apply_text(result):
    r = result["result"]
    if r["kind"] == "gauss_poly":
        body = f"poly [{', '.join(_fmt_c(c) for c in r['poly'])}]  rate {r['rate']:g}"
    else:
        body = f"coefficients [{', '.join(_fmt_c(c) for c in r['coefficients'])}]"
    lines = [f"{result['op']} on {result['vec']} ({result['example']}): {body}"]
    if result["tail"]:
        t = result["tail"]
        lines.append(f"tail {t['classification']} at checkpoints {t['checkpoints']}, norms {t['norms']}")
    return "\n".join(lines) + "\n"


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            return cmd_verify(args)
        return cmd_apply(args)
    except (UsageError, DomainError) as exc:
        sys.stderr.write(f"quasibasis: error: {exc}\n")
        return EXIT_USAGE
    except OSError as exc:
        sys.stderr.write(f"quasibasis: I/O error: {exc}\n")
        return EXIT_IO
    except (QuadratureError, np.linalg.LinAlgError, FloatingPointError, ZeroDivisionError) as exc:
        sys.stderr.write(f"quasibasis: numerical defect: {exc}\n")
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
