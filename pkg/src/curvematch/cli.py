"""Command-line front end.

Exit status: 0 feasible or success, 1 a valid negative answer, 2 usage or
validation error, 3 instance too large for an exhaustive solver. Results
are printed to stdout as one canonical JSON object.
"""

from __future__ import annotations

import argparse
import io
import json
import sys
from contextlib import redirect_stderr
from typing import List, Optional, Tuple

import numpy as np

from . import approx, frechet, gadgets, imprecise, precise
from .errors import InstanceTooLargeError, InvalidFormulaError, UnroutableFormulaError
from .io import ParseError, ValidationError, canonical_json, emit_instance, load_instance
from .reductions import CnfFormula
from .svg import render_svg

EXIT_OK, EXIT_NO, EXIT_USAGE, EXIT_TOO_LARGE = 0, 1, 2, 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--eps", type=float, help="matching distance (defaults to the file's eps)")
    common.add_argument("--tol", type=float, default=1e-9, help="optimisation tolerance")
    common.add_argument("--cap", type=int, help="size cap for exhaustive solvers")
    common.add_argument("--seed", type=int, help="random seed (reserved for randomized commands)")

    p = _Parser(prog="curvematch", description="Curve/point-set matching under the Frechet distance.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("frechet", parents=[common], help="Frechet distance between the curve and the points read as a curve")
    s.add_argument("mode", choices=["decide", "value", "discrete"])
    s.add_argument("instance")

    s = sub.add_parser("match", parents=[common], help="polynomial matching algorithms")
    s.add_argument("mode", choices=["discrete-subset", "discrete-allpoints", "subset", "subset-opt"])
    s.add_argument("instance")

    s = sub.add_parser("approx", parents=[common], help="3-approximation for all-points matching")
    s.add_argument("mode", choices=["allpoints"])
    s.add_argument("instance")

    s = sub.add_parser("oracle", parents=[common], help="exhaustive search (exponential)")
    s.add_argument("mode", choices=["subset", "allpoints"])
    s.add_argument("instance")
    s.add_argument("--unique", action="store_true", help="output curve may not repeat points")

    s = sub.add_parser("imprecise", parents=[common], help="discrete matching with segment regions")
    s.add_argument("mode", choices=["decide"])
    s.add_argument("instance")
    s.add_argument("--all-points", action="store_true")

    for name in ("gen", "verify"):
        s = sub.add_parser(name, parents=[common], help=f"{name} a reduction instance from a CNF formula")
        s.add_argument("--variant", required=True, choices=list(gadgets.VARIANTS))
        s.add_argument("--formula", required=True, help="JSON file {num_vars, clauses}")
        s.add_argument("--relaxed", action="store_true", help="allow 1-3 literal clauses, literals at most twice")
        if name == "gen":
            s.add_argument("--scale", type=float, default=1.0)
            s.add_argument("--out", help="write the instance here instead of stdout")

    s = sub.add_parser("render", parents=[common], help="draw an instance as SVG")
    s.add_argument("instance")
    s.add_argument("--svg", required=True, help="output file, '-' for stdout")
    s.add_argument("--witness", help="JSON file: a list of [x, y] or a result with witness.q_vertices")
    return p


def _eps(args, inst) -> float:
    eps = args.eps if args.eps is not None else inst.eps
    if eps is None:
        raise _UsageError("--eps is required (the instance has no eps)")
    return eps


def _need_points(inst):
    if inst.points is None or len(inst.points) == 0:
        raise ValidationError("points", "this command needs a non-empty point set")
    return inst.points


def _result(feasible, eps=None, witness=None, certificate=None, **extra) -> Tuple[int, dict]:
    out = {"feasible": feasible, "eps": eps, "witness": witness, "certificate": certificate}
    out.update(extra)
    return (EXIT_OK if feasible else EXIT_NO), out


def _wjson(w):
    return None if w is None else w.to_json()


def _cmd_frechet(args):
    inst = load_instance(args.instance)
    Q = _need_points(inst)
    if args.mode == "decide":
        eps = _eps(args, inst)
        return _result(frechet.continuous_frechet_decide(inst.curve, Q, eps), eps)
    if args.mode == "value":
        return _result(True, frechet.continuous_frechet_value(inst.curve, Q, args.tol))
    value, coupling = frechet.discrete_frechet(inst.curve, Q, return_coupling=True)
    return _result(True, value, [list(map(int, c)) for c in coupling])


def _cmd_match(args):
    inst = load_instance(args.instance)
    S = _need_points(inst)
    if args.mode == "subset-opt":
        eps, w = precise.continuous_subset_optimize(inst.curve, S, args.tol)
        return _result(True, eps, _wjson(w))
    eps = _eps(args, inst)
    fn = {
        "discrete-subset": precise.discrete_subset_decide,
        "discrete-allpoints": precise.discrete_allpoints_decide,
        "subset": precise.continuous_subset_decide,
    }[args.mode]
    r = fn(inst.curve, S, eps)
    return _result(r.feasible, eps, _wjson(r.witness))


def _cmd_approx(args):
    inst = load_instance(args.instance)
    S = _need_points(inst)
    eps, w, cert = approx.approx_allpoints(inst.curve, S, args.tol)
    return _result(True, eps, _wjson(w), cert.to_json())


def _cmd_oracle(args):
    inst = load_instance(args.instance)
    S = _need_points(inst)
    require_all = args.mode == "allpoints"
    if args.eps is None and inst.eps is None:
        eps, order = precise.brute_force_optimize(
            inst.curve, S, require_all=require_all, unique=args.unique, tol=args.tol, cap=args.cap
        )
        return _result(True, eps, {"q_vertices": order})
    eps = _eps(args, inst)
    fn = precise.brute_force_allpoints_decide if require_all else precise.brute_force_subset_decide
    ok = fn(inst.curve, S, eps, unique=args.unique, cap=args.cap)
    order = None
    if ok:
        order = precise.exhaustive_search(inst.curve, S, eps, unique=args.unique, require_all=require_all)
    return _result(ok, eps, None if order is None else {"q_vertices": order})


def _cmd_imprecise(args):
    inst = load_instance(args.instance)
    if inst.regions is None:
        raise ValidationError("regions", "this command needs regions")
    eps = _eps(args, inst)
    ok, real = imprecise.discrete_cipsm_nonunique_decide(
        inst.curve, inst.regions, eps, all_points=args.all_points, cap=args.cap
    )
    return _result(ok, eps, None if real is None else real.to_json())


def _load_formula(path) -> CnfFormula:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    return CnfFormula.from_json(data)


def _cmd_gen(args):
    f = _load_formula(args.formula)
    gen = {
        "unique-subset": gadgets.gen_unique_subset_instance,
        "imprecise-subset": gadgets.gen_imprecise_subset_instance,
        "discrete-cipsm": gadgets.gen_discrete_cipsm_instance,
    }[args.variant]
    inst = gen(f, args.scale, strict=not args.relaxed)
    text = emit_instance(inst)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        return EXIT_OK, {"written": args.out, "counts": inst.counts, "eps": inst.eps}
    return EXIT_OK, json.loads(text)


def _cmd_verify(args):
    f = _load_formula(args.formula)
    rep = gadgets.verify_equivalence(f, args.variant, strict=not args.relaxed, cap=args.cap)
    status = EXIT_OK if rep.agreement in (True, None) and all(rep.audits.values()) else EXIT_NO
    return status, rep.to_json()


def _cmd_render(args):
    inst = load_instance(args.instance)
    witness = None
    if args.witness:
        with open(args.witness, encoding="utf-8") as fh:
            w = json.load(fh)
        if isinstance(w, dict):
            w = w.get("witness", w)
            idx = w["q_vertices"] if isinstance(w, dict) else w
            witness = _need_points(inst)[np.asarray(idx, int)]
        else:
            witness = np.asarray(w, float)
    svg = render_svg(inst.curve, inst.points, inst.regions, args.eps if args.eps is not None else inst.eps, witness)
    if args.svg == "-":
        return EXIT_OK, svg
    with open(args.svg, "w", encoding="utf-8") as fh:
        fh.write(svg)
    return EXIT_OK, {"written": args.svg}


_COMMANDS = {
    "frechet": _cmd_frechet,
    "match": _cmd_match,
    "approx": _cmd_approx,
    "oracle": _cmd_oracle,
    "imprecise": _cmd_imprecise,
    "gen": _cmd_gen,
    "verify": _cmd_verify,
    "render": _cmd_render,
}


def run_command(argv: List[str]) -> Tuple[int, str]:
    """Run one command; returns ``(exit status, stdout text)``."""
    parser = _build_parser()
    try:
        with redirect_stderr(io.StringIO()):
            args = parser.parse_args(argv)
    except SystemExit as exc:  # --help
        return (EXIT_OK if not exc.code else EXIT_USAGE), parser.format_help()
    except _UsageError as exc:
        return EXIT_USAGE, canonical_json({"error": "usage", "message": str(exc)}) + "\n"
    try:
        status, out = _COMMANDS[args.command](args)
    except InstanceTooLargeError as exc:
        return EXIT_TOO_LARGE, canonical_json({"error": "instance-too-large", "message": str(exc), "cap": exc.cap}) + "\n"
    except (ParseError, ValidationError, InvalidFormulaError, UnroutableFormulaError, _UsageError, OSError) as exc:
        kind = type(exc).__name__
        return EXIT_USAGE, canonical_json({"error": kind, "message": str(exc)}) + "\n"
    except ValueError as exc:
        return EXIT_USAGE, canonical_json({"error": "validation", "message": str(exc)}) + "\n"
    if isinstance(out, str):
        return status, out
    return status, canonical_json(out) + "\n"


def main(argv: Optional[List[str]] = None) -> int:
    status, text = run_command(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
