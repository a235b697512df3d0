"""Command-line interface.

Exit codes: 0 success, 1 input error, 2 theorem violation (a bug signal),
3 search did not converge.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import io
from .bounds import RelationKind, check, check_all
from .config import DEFAULT_TOL, Tolerances
from .errors import MaximallyMixedState, NonConvergence, ParseError, UrsaError, ValidationError
from .linalg import DensityMatrix, HermitianObservable
from .measurement import evaluate
from .sampling import SWEEP_HEADER, purity_sweep
from .suite import run_suite
from .witness import extremal_pair, minimize_ratio

EXIT_OK, EXIT_INPUT, EXIT_VIOLATION, EXIT_NOT_CONVERGED = 0, 1, 2, 3
WITNESS_TOL = 1e-10


class InputError(UrsaError):
    pass


def _default_seed() -> int:
    env = os.environ.get("URSA_SEED")
    if env is None:
        return 42
    try:
        return int(env)
    except ValueError:
        raise InputError(f"URSA_SEED must be an integer, got {env!r}") from None


def _tolerances(overrides) -> Tolerances:
    changes = {}
    for item in overrides or ():
        key, sep, value = item.partition("=")
        if not sep or key not in Tolerances.names():
            raise InputError(f"--set-tol expects NAME=VALUE with NAME in {Tolerances.names()}, got {item!r}")
        try:
            changes[key] = float(value)
        except ValueError:
            raise InputError(f"--set-tol {key}: {value!r} is not a number") from None
    return DEFAULT_TOL.replace(**changes)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _load(path: str):
    try:
        return io.load_matrix(path)
    except ParseError as exc:
        raise InputError(f"ParseError: {exc}") from None


def _validated(path, build, what):
    try:
        return build()
    except ValidationError as exc:
        raise InputError(f"ValidationError in {path} ({what}): {exc}") from None


# --------------------------------------------------------------------------
# commands


def cmd_check(args, tol):
    rho = _validated(args.state, lambda: DensityMatrix(_load(args.state), tol), "state")
    a = _validated(args.A, lambda: HermitianObservable(_load(args.A), tol, "A"), "observable")
    b = _validated(args.B, lambda: HermitianObservable(_load(args.B), tol, "B"), "observable")
    kinds = None if args.relation == "all" else [RelationKind.parse(args.relation)]
    try:
        reports = check_all(rho, a, b, kinds, tol)
    except ValidationError as exc:
        raise InputError(f"ValidationError: {exc}") from None
    if args.format == "csv":
        lines = ["kind,lhs,rhs,slack,holds"]
        lines += [f"{r.kind.value},{r.lhs!r},{r.rhs!r},{r.slack!r},{str(r.holds).lower()}" for r in reports]
        text = "\n".join(lines) + "\n"
    else:
        text = "".join(json.dumps(r.to_dict()) + "\n" for r in reports)
    code = EXIT_OK if all(r.holds for r in reports) else EXIT_VIOLATION
    return text, code


def cmd_sweep(args, tol):
    try:
        rows = purity_sweep(args.pmin, args.pmax, args.steps, args.samples, args.seed)
    except ValidationError as exc:
        raise InputError(f"RangeError: {exc}") from None
    if args.format == "json":
        return _dump([r.to_dict() for r in rows]), EXIT_OK
    return SWEEP_HEADER + "\n" + "".join(",".join(r.csv_fields()) + "\n" for r in rows), EXIT_OK


def cmd_witness(args, tol):
    rho = _validated(args.state, lambda: DensityMatrix(_load(args.state), tol), "state")
    try:
        pair = extremal_pair(rho, args.a, args.b, tol)
    except MaximallyMixedState as exc:
        raise InputError(f"MaximallyMixedState: {exc}; try `ursa check STATE A B --relation maximally-mixed`") \
            from None
    except ValidationError as exc:
        raise InputError(f"ValidationError: {exc}") from None
    rep = check(RelationKind.GENERALIZED_ROBERTSON, rho, pair.A, pair.B, tol)
    residual = abs(rep.lhs - rep.rhs)
    out = {
        "a": pair.a,
        "b": pair.b,
        "A": io.matrix_to_json(pair.A),
        "B": io.matrix_to_json(pair.B),
        "lhs": rep.lhs,
        "rhs": rep.rhs,
        "coefficient": rep.terms.get("coefficient"),
        "residual": residual,
    }
    ok = residual <= WITNESS_TOL * max(1.0, rep.lhs)
    return _dump(out), EXIT_OK if ok else EXIT_VIOLATION


def cmd_optimize(args, tol):
    rho = _validated(args.state, lambda: DensityMatrix(_load(args.state), tol), "state")
    try:
        res = minimize_ratio(rho, restarts=args.restarts, max_evals=args.max_evals, seed=args.seed,
                             tol=args.tol_search, tolerances=tol)
    except ValidationError as exc:
        raise InputError(f"{type(exc).__name__}: {exc}") from None
    out = {
        "best_ratio": res.best_ratio,
        "c_prime_opt": res.c_prime_opt,
        "difference": res.difference,
        "converged": res.converged,
        "restarts": res.restarts,
        "evaluations": res.evaluations,
        "seed": args.seed,
        "best_A": io.matrix_to_json(res.best_A),
        "best_B": io.matrix_to_json(res.best_B),
    }
    return _dump(out), EXIT_OK if res.converged else EXIT_NOT_CONVERGED


def cmd_measure(args, tol):
    try:
        model = io.load_model(args.model)
    except ParseError as exc:
        raise InputError(f"ParseError: {exc}") from None
    except ValidationError as exc:
        raise InputError(f"ValidationError in {args.model}: {exc}") from None
    rep = evaluate(model)
    return _dump(rep.to_dict()), EXIT_VIOLATION if rep.theorem_violated else EXIT_OK


def _parse_dims(text: str) -> list[int]:
    try:
        if ".." in text:
            lo, hi = text.split("..")
            dims = list(range(int(lo), int(hi) + 1))
        else:
            dims = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise InputError(f"--dims expects LO..HI or a comma list, got {text!r}") from None
    if not dims or min(dims) < 2:
        raise InputError("--dims must name dimensions >= 2")
    return dims


def cmd_suite(args, tol):
    if args.instances < 0 or args.models < 0:
        raise InputError("--instances and --models must be non-negative")
    summary = run_suite(_parse_dims(args.dims), args.instances, args.seed, args.models, tol)
    return _dump(summary), EXIT_OK if summary["theorem_violations"] == 0 else EXIT_VIOLATION


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None,
                        help="64-bit seed (default: $URSA_SEED, else 42)")
    common.add_argument("-o", "--output", default=None, help="write to this file instead of stdout")
    common.add_argument("--set-tol", action="append", metavar="NAME=VALUE", dest="tol_overrides",
                        help="override a numerical tolerance; repeatable")

    p = argparse.ArgumentParser(prog="ursa", description="Spectral uncertainty relations toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", parents=[common], help="evaluate relations on (state, A, B)")
    c.add_argument("state")
    c.add_argument("A")
    c.add_argument("B")
    c.add_argument("--relation", default="all", help="relation kind or 'all'")
    c.add_argument("--format", choices=("json", "csv"), default="json")
    c.set_defaults(func=cmd_check)

    s = sub.add_parser("sweep", parents=[common], help="qubit purity sweep of averaged bounds")
    s.add_argument("--pmin", type=float, default=0.5)
    s.add_argument("--pmax", type=float, default=1.0)
    s.add_argument("--steps", type=int, default=11)
    s.add_argument("--samples", type=int, default=100_000)
    s.add_argument("--format", choices=("json", "csv"), default="csv")
    s.set_defaults(func=cmd_sweep)

    w = sub.add_parser("witness", parents=[common], help="equality-attaining observable pair")
    w.add_argument("state")
    w.add_argument("--a", type=float, default=1.0)
    w.add_argument("--b", type=float, default=1.0)
    w.set_defaults(func=cmd_witness)

    o = sub.add_parser("optimize", parents=[common], help="search the minimal uncertainty ratio")
    o.add_argument("state")
    o.add_argument("--restarts", type=int, default=32)
    o.add_argument("--max-evals", type=int, default=None)
    o.add_argument("--tol", type=float, default=1e-6, dest="tol_search",
                   help="acceptance window for |best_ratio - c'_opt|")
    o.set_defaults(func=cmd_optimize)

    m = sub.add_parser("measure", parents=[common], help="evaluate an indirect measurement model")
    m.add_argument("model")
    m.set_defaults(func=cmd_measure)

    u = sub.add_parser("suite", parents=[common], help="randomized verification of all relations")
    u.add_argument("--dims", default="2..6")
    u.add_argument("--instances", type=int, default=1000)
    u.add_argument("--models", type=int, default=100)
    u.set_defaults(func=cmd_suite)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.seed is None:
            args.seed = _default_seed()
        if not 0 <= args.seed < 2 ** 64:
            raise InputError("--seed must be a 64-bit unsigned integer")
        tol = _tolerances(args.tol_overrides)
        if getattr(args, "relation", "all") != "all":
            try:
                RelationKind.parse(args.relation)
            except ValueError as exc:
                raise InputError(str(exc)) from None
        text, code = args.func(args, tol)
    except InputError as exc:
        print(f"ursa {args.command}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NonConvergence as exc:
        print(f"ursa {args.command}: NonConvergence: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
