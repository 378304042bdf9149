"""Command-line front end.

Exit codes: 0 all checks pass, 1 a check failed, 2 schema error, 3 math-domain error.
"""

from __future__ import annotations

import argparse
import logging
import os
import re
import sys
from fractions import Fraction
from pathlib import Path

from . import serialize as ser
from .errors import MathDomainError, SchemaError
from .report import Report, content_hash
from .scalars import EXACT, FLOAT, default_backend, parse_scalar

log = logging.getLogger("yrk")


# -- helpers ----------------------------------------------------------------

def _backend_override() -> str | None:
    """The backend forced by ``YRK_BACKEND``, if set."""
    return default_backend() if os.environ.get("YRK_BACKEND") else None


def _load_rep(path):
    return ser.decode_rep(ser.load(path), _backend_override())


def _scalar(text, backend=None):
    return parse_scalar(text, backend or default_backend())


def _scalar_list(text: str, backend=None) -> list:
    return [_scalar(t, backend) for t in text.split(",") if t.strip()]


def _emit(doc, out: str | None) -> None:
    text = ser.dump(doc, out)
    if out is None:
        print(text)


def _emit_report(rep: Report, args, inputs=()) -> int:
    rep.input_hash = content_hash(*inputs)
    if getattr(args, "format", "json") == "csv":
        text = rep.to_csv()
        if args.output:
            Path(args.output).write_text(text)
        else:
            sys.stdout.write(text)
    else:
        _emit(rep.to_dict(), args.output)
    for c in rep.failures():
        log.warning("check %s failed: residual=%.3e tol=%.1e", c.check_id, c.residual, c.tol)
    return 0 if rep.passed else 1


def _inputs(paths) -> list:
    return [ser.load(p) for p in paths]


# -- subcommands ------------------------------------------------------------

def cmd_rep(args) -> int:
    from .repn import evaluation_rep_sl2, trivial_rep, vector_rep_sl3, verify_relations
    if args.action == "build":
        backend = default_backend()
        a = _scalar(args.a, backend)
        hbar = _scalar(args.hbar, backend)
        if args.type == "sl2-eval":
            V = evaluation_rep_sl2(a, hbar, backend)
        elif args.type == "sl3-vector":
            if backend != EXACT:
                raise SchemaError("the sl3 vector representation is built on the exact backend")
            V = vector_rep_sl3(a, hbar)
        elif args.type == "trivial":
            V = trivial_rep(args.cartan, hbar, backend)
        else:
            raise SchemaError(f"unknown representation type {args.type!r}")
        _emit(ser.encode_rep(V), args.output)
        return 0
    V = _load_rep(args.file)
    rep = verify_relations(V, samples=args.samples, seed=args.seed, tol=args.tol)
    return _emit_report(rep, args, _inputs([args.file]))


def cmd_tensor(args) -> int:
    from .drinfeld import drinfeld_tensor
    from .repn import standard_tensor
    V, W = _load_rep(args.reps[0]), _load_rep(args.reps[1])
    s = _scalar(args.s, V.backend)
    fn = drinfeld_tensor if args.mode == "drinfeld" else standard_tensor
    _emit(ser.encode_rep(fn(V, W, s)), args.output)
    return 0


def cmd_rminus(args) -> int:
    from .rminus import rminus_recursive, rminus_sl2_closed_form
    V1, V2 = _load_rep(args.v1), _load_rep(args.v2)
    try:
        h = None if args.h is None else [Fraction(x) for x in args.h.split(",")]
    except ValueError:
        raise SchemaError(f"--h must be comma separated rationals, got {args.h!r}") from None
    doc = {}
    if args.method in ("recursion", "both"):
        doc["recursion"] = ser.encode_ratmat(rminus_recursive(V1, V2, h))
    if args.method in ("closed", "both"):
        doc["closed"] = ser.encode_ratmat(rminus_sl2_closed_form(V1, V2))
    code = 0
    if args.method == "both":
        same = ser.decode_ratmat(doc["recursion"]) == ser.decode_ratmat(doc["closed"])
        doc["agree"] = bool(same)
        code = 0 if same else 1
    out = doc[args.method] if args.method != "both" else doc
    _emit(out, args.output)
    return code


def cmd_rzero(args) -> int:
    from .rzero import abelian_A, monodromy_eta0, rzero_formal, rzero_updown
    V1, V2 = _load_rep(args.v1), _load_rep(args.v2)
    if args.action == "formal":
        series = rzero_formal(V1, V2, args.order)
        _emit({"kind": "series", "order": args.order,
               "coefficients": [ser.encode_matrix(c) for c in series.coeffs]}, args.output)
        return 0
    if args.action == "eta":
        samples = [complex(x) for x in _scalar_list(args.samples, FLOAT)]
        rep = monodromy_eta0(V1, V2, samples, tol=args.tol if args.tol > 1e-12 else 1e-8)
        return _emit_report(rep, args, _inputs([args.v1, args.v2]))
    if args.action == "A":
        _emit(ser.encode_ratmat(abelian_A(V1, V2).ratmat()), args.output)
        return 0
    val = rzero_updown(abelian_A(V1, V2), complex(_scalar(args.s, FLOAT)), args.direction, args.tol,
                       tail=args.tail)
    _emit({"kind": "rzero", "direction": args.direction, "s": ser.encode_scalar(complex(_scalar(args.s, FLOAT))),
           "matrix": ser.encode_matrix(val.matrix), "terms": val.terms, "tail_estimate": val.tail,
           "method": val.method}, args.output)
    return 0


def cmd_rfull(args) -> int:
    from .rfull import MeromorphicRMatrix
    V1, V2 = _load_rep(args.v1), _load_rep(args.v2)
    R = MeromorphicRMatrix(V1, V2, args.direction, args.tol)
    doc = {"kind": "rfull", "direction": args.direction}
    if args.s is not None:
        s = complex(_scalar(args.s, FLOAT))
        doc["s"] = ser.encode_scalar(s)
        doc["matrix"] = ser.encode_matrix(R(s))
    if args.order:
        doc["series"] = [ser.encode_matrix(c) for c in R.series(args.order).coeffs]
    _emit(doc, args.output)
    return 0


def cmd_check(args) -> int:
    from . import rfull, rminus
    reps = [_load_rep(p) for p in args.reps]
    need = {"qybe": 3, "cabling": 3, "cocycle": 3, "unitarity": 2, "asymptotics": 2, "intertwine": 2,
            "relations": 1}[args.kind]
    if len(reps) < need:
        raise SchemaError(f"check {args.kind} needs {need} representations")
    samples = None
    if args.s1 is not None and args.s2 is not None:
        samples = [(complex(_scalar(args.s1, FLOAT)), complex(_scalar(args.s2, FLOAT)))]
    if args.kind == "qybe":
        r12 = ser.decode_ratmat(ser.load(args.rminus)) if args.rminus else None
        rep = rfull.check_qybe(*reps[:3], args.direction, samples, args.samples, args.seed, args.tol,
                               rminus12=r12)
    elif args.kind in ("cabling", "unitarity"):
        if len(reps) == 2:
            from .repn import trivial_rep
            reps.append(trivial_rep(reps[0].cartan, reps[0].hbar, reps[0].backend))
        rep = rfull.check_full_cabling_unitarity(*reps[:3], args.direction, samples, args.samples,
                                                 args.seed, args.tol)
        keep = ("unitarity",) if args.kind == "unitarity" else ("cabling_left", "cabling_right", "intertwiner")
        rep.checks = [c for c in rep.checks if c.check_id in keep]
    elif args.kind == "cocycle":
        pts = None if samples is None else [(_scalar(args.s1), _scalar(args.s2))]
        rep = rminus.check_cocycle(*reps[:3], samples=args.samples, seed=args.seed, points=pts)
    elif args.kind == "intertwine":
        rep = rminus.check_intertwine_minus(reps[0], reps[1])
    elif args.kind == "asymptotics":
        rep = rfull.asymptotic_report(reps[0], reps[1], args.direction, args.order, points=(args.ray,))
    else:
        from .repn import verify_relations
        rep = verify_relations(reps[0], samples=args.samples, seed=args.seed)
    rep.seed = args.seed
    return _emit_report(rep, args, _inputs(args.reps))


def cmd_suite(args) -> int:
    from .suite import run_acceptance
    only = None if args.only is None else set(args.only.split(","))
    rep, verdicts = run_acceptance(args.seed, args.workers, only)
    for cid, title, ok in verdicts:
        print(f"{'PASS' if ok else 'FAIL'} {cid} {title}", file=sys.stderr)
    return _emit_report(rep, args, [args.seed, sorted(only or [])])


# -- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="yrk", description="Yangian R-matrix toolkit")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def out(sp, report=False):
        sp.add_argument("-o", "--output")
        if report:
            sp.add_argument("--format", choices=("json", "csv"), default="json")

    rep = sub.add_parser("rep", help="build or verify a representation")
    rs = rep.add_subparsers(dest="action", required=True)
    b = rs.add_parser("build")
    b.add_argument("--type", default="sl2-eval", choices=("sl2-eval", "sl3-vector", "trivial"))
    b.add_argument("--cartan", default="A1")
    b.add_argument("--a", default="0")
    b.add_argument("--hbar", default="1")
    out(b)
    v = rs.add_parser("verify")
    v.add_argument("file")
    v.add_argument("--samples", type=int, default=5)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--tol", type=float, default=0.0)
    out(v, True)
    rep.set_defaults(func=cmd_rep)

    t = sub.add_parser("tensor", help="standard or Drinfeld tensor product")
    t.add_argument("reps", nargs=2)
    t.add_argument("--mode", choices=("drinfeld", "standard"), default="drinfeld")
    t.add_argument("--s", default="0")
    out(t)
    t.set_defaults(func=cmd_tensor)

    m = sub.add_parser("rminus", help="the lower triangular factor")
    m.add_argument("--v1", required=True)
    m.add_argument("--v2", required=True)
    m.add_argument("--method", choices=("recursion", "closed", "both"), default="recursion")
    m.add_argument("--h", help="values α_i(h), comma separated")
    out(m)
    m.set_defaults(func=cmd_rminus)

    z = sub.add_parser("rzero", help="the abelian factor")
    z.add_argument("action", nargs="?", default="value", choices=("value", "formal", "eta", "A"))
    z.add_argument("--v1", required=True)
    z.add_argument("--v2", required=True)
    z.add_argument("--direction", choices=("up", "down"), default="up")
    z.add_argument("--s", default="5")
    z.add_argument("--tol", type=float, default=1e-10)
    z.add_argument("--tail", choices=("zeta", "gamma", "none"), default="zeta")
    z.add_argument("--order", type=int, default=6)
    z.add_argument("--samples", default="0.3,0.7,1.1")
    out(z, True)
    z.set_defaults(func=cmd_rzero)

    f = sub.add_parser("rfull", help="the meromorphic R-matrix")
    f.add_argument("--v1", required=True)
    f.add_argument("--v2", required=True)
    f.add_argument("--direction", choices=("up", "down"), default="up")
    f.add_argument("--s")
    f.add_argument("--order", type=int, default=0)
    f.add_argument("--tol", type=float, default=1e-12)
    out(f)
    f.set_defaults(func=cmd_rfull)

    c = sub.add_parser("check", help="verification checks")
    c.add_argument("kind", choices=("qybe", "cabling", "unitarity", "asymptotics", "cocycle",
                                    "intertwine", "relations"))
    c.add_argument("--reps", nargs="+", required=True)
    c.add_argument("--direction", choices=("up", "down"), default="up")
    c.add_argument("--s1")
    c.add_argument("--s2")
    c.add_argument("--samples", type=int, default=5)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--tol", type=float, default=1e-7)
    c.add_argument("--order", type=int, default=4)
    c.add_argument("--ray", type=float, default=50.0)
    c.add_argument("--rminus", help="stored R⁻ for the first pair (qybe only)")
    out(c, True)
    c.set_defaults(func=cmd_check)

    s = sub.add_parser("suite", help="acceptance battery")
    s.add_argument("name", choices=("full",))
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--only", help="comma separated criterion ids, e.g. C01,C10")
    out(s, True)
    s.set_defaults(func=cmd_suite)
    return p


_NEGATIVE = re.compile(r"^-[0-9.]")


def _glue_negative_values(argv: list[str]) -> list[str]:
    """Let ``--a -9/10`` through; argparse only recognises plain negative decimals."""
    out: list[str] = []
    for tok in argv:
        if out and out[-1].startswith("--") and "=" not in out[-1] and _NEGATIVE.match(tok):
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = _glue_negative_values(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except SchemaError as exc:
        log.error("schema error: %s", exc)
        return 2
    except (FileNotFoundError, IsADirectoryError) as exc:
        log.error("cannot read input: %s", exc)
        return 2
    except MathDomainError as exc:
        log.error("math domain error: %s", exc)
        return 3


if __name__ == "__main__":
    sys.exit(main())
