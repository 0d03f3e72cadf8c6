"""
``qwalk`` command line.

Exit status: 0 on success, 1 when the answer is negative (no stationary state,
verification failed, a reproduce check failed), 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import graph as gr
from .serialize import SerializationError, basis_to_dict, dumps, state_from_dict, state_to_dict
from .spectral import SizeCapError, materialize, one_eigenspace, project_initial
from .stationary import (
    DEFAULT_TOL,
    ExistenceError,
    NotStationaryError,
    ZeroStateError,
    balance_unmarked_assignment,
    check_stationary,
    construct_optimal,
    optimize_stationary,
)
from .walk import Variant, simulate

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


GENERATORS = {
    "torus": (2, lambda r, c: gr.torus(r, c)),
    "complete": (1, gr.complete),
    "path": (1, gr.path),
    "cycle": (1, gr.cycle),
    "simplex": (1, gr.simplex),
}


def parse_graph(tokens: list[str]) -> gr.Graph:
    """``FILE`` or a generator spec such as ``torus 4 3``, ``complete 16``, ``path2``."""
    if len(tokens) == 1 and Path(tokens[0]).is_file():
        return gr.read_edge_list(tokens[0])
    name, args = tokens[0].lower(), tokens[1:]
    if not args:
        # compact form: path2, complete16
        head = name.rstrip("0123456789")
        if head != name and head in GENERATORS:
            name, args = head, [tokens[0][len(head):]]
    if name not in GENERATORS:
        raise InputError(
            f"--graph: '{' '.join(tokens)}' is neither a file nor one of {sorted(GENERATORS)}"
        )
    arity, make = GENERATORS[name]
    if len(args) != arity:
        raise InputError(f"--graph {name} takes {arity} integer argument(s)")
    try:
        return make(*(int(a) for a in args))
    except ValueError as exc:
        raise InputError(f"--graph {name}: {exc}") from None


def parse_marked(text: str | None, g: gr.Graph) -> gr.MarkedSet:
    if not text:
        return gr.marked_structure(g, [])
    try:
        ids = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise InputError(f"--marked expects comma-separated vertex ids, got '{text}'") from None
    return gr.marked_structure(g, ids)


def parse_assign(text: str | None, marked: gr.MarkedSet) -> dict | None:
    """``--assign 0=3,1=2`` (``U0=`` / ``U_0=`` prefixes allowed); omitted components default to 1."""
    if not text:
        return None
    k = len(marked.unmarked_components)
    values = {i: 1.0 for i in range(k)}
    for item in text.split(","):
        if "=" not in item:
            raise InputError(f"--assign entry '{item}' is not of the form U_i=value")
        key, val = item.split("=", 1)
        key = key.strip().lstrip("Uu").lstrip("_")
        try:
            idx, num = int(key), float(val)
        except ValueError:
            raise InputError(f"--assign entry '{item}' is not of the form U_i=value") from None
        if not 0 <= idx < k:
            raise InputError(f"--assign: no unmarked component {idx} (there are {k})")
        values[idx] = num
    return values


def resolve_tol(arg: float | None) -> float:
    tol = arg
    if tol is None:
        env = os.environ.get("QWALK_TOL")
        try:
            tol = float(env) if env else DEFAULT_TOL
        except ValueError:
            raise InputError(f"QWALK_TOL='{env}' is not a number") from None
    if not tol > 0:
        raise InputError(f"tolerance must be positive, got {tol}")
    return tol


def emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def load_state(args, g):
    if not args.state:
        raise InputError(f"{args.command} needs --state FILE")
    try:
        data = json.loads(Path(args.state).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"--state {args.state}: {exc}") from None
    try:
        state, marked_ids = state_from_dict(data, g)
    except SerializationError as exc:
        raise InputError(f"--state {args.state}: {exc}") from None
    marked = parse_marked(args.marked, g) if args.marked else gr.marked_structure(g, marked_ids)
    return state, marked


# --------------------------------------------------------------------------- #
# subcommands
# --------------------------------------------------------------------------- #

def cmd_generate(args) -> int:
    emit(gr.format_edge_list(parse_graph(args.graph)), args.out)
    return EXIT_OK


def cmd_simulate(args) -> int:
    g = parse_graph(args.graph)
    m = parse_marked(args.marked, g)
    if args.steps < 0:
        raise InputError("--steps must be non-negative")
    tr = simulate(g, m, Variant.parse(args.oracle), args.steps)
    if args.format == "json":
        emit(dumps({"step": tr.steps, "success_probability": tr.success_probability, "norm": tr.norm}), args.out)
    else:
        emit(tr.to_csv(), args.out)
    return EXIT_OK


def cmd_construct(args) -> int:
    g = parse_graph(args.graph)
    m = parse_marked(args.marked, g)
    tol = resolve_tol(args.tol)
    assignment = parse_assign(args.assign, m)
    if assignment is None:
        bal = balance_unmarked_assignment(g, m)
        assignment = bal.assignment if bal.feasible else None
    try:
        state, report = construct_optimal(g, m, assignment, tol)
    except (ExistenceError, ZeroStateError) as exc:
        emit(dumps({"verdict": "infeasible", "reason": str(exc)}), args.out)
        return EXIT_NEGATIVE
    emit(dumps({"state": state_to_dict(state, m), "report": report.to_dict()}), args.out)
    return EXIT_OK if report.is_stationary else EXIT_NEGATIVE


def cmd_verify(args) -> int:
    g = parse_graph(args.graph)
    state, m = load_state(args, g)
    report = check_stationary(state, m, Variant.parse(args.oracle), resolve_tol(args.tol))
    emit(dumps(report.to_dict()), args.out)
    return EXIT_OK if report.is_stationary else EXIT_NEGATIVE


def cmd_optimize(args) -> int:
    g = parse_graph(args.graph)
    state, m = load_state(args, g)
    tol = resolve_tol(args.tol)
    try:
        best = optimize_stationary(state, m, tol)
    except (NotStationaryError, ZeroStateError) as exc:
        emit(dumps({"error": str(exc)}), args.out)
        return EXIT_NEGATIVE
    report = check_stationary(best, m, Variant.GROVER_U, tol)
    emit(dumps({"state": state_to_dict(best, m), "report": report.to_dict()}), args.out)
    return EXIT_OK


def _balance_payload(g, m) -> tuple[dict, object]:
    bal = balance_unmarked_assignment(g, m)
    return {
        "feasible": bal.feasible,
        "assignment": list(bal.assignment) if bal.assignment is not None else None,
        "unmarked_components": [list(c) for c in m.unmarked_components],
        "bipartite_marked_components": [list(c) for c in bal.bipartite_components],
        "equations": bal.equations,
    }, bal


def cmd_balance(args) -> int:
    g = parse_graph(args.graph)
    m = parse_marked(args.marked, g)
    payload, bal = _balance_payload(g, m)
    emit(dumps(payload), args.out)
    return EXIT_OK if bal.feasible else EXIT_NEGATIVE


def cmd_exists(args) -> int:
    g = parse_graph(args.graph)
    m = parse_marked(args.marked, g)
    payload, bal = _balance_payload(g, m)
    verdict = "infeasible"
    if bal.feasible:
        try:
            _, report = construct_optimal(g, m, bal.assignment, resolve_tol(args.tol))
            verdict = "feasible" if report.is_stationary else "infeasible"
            payload["overlap_with_initial"] = report.overlap_with_initial
        except (ExistenceError, ZeroStateError) as exc:
            payload["reason"] = str(exc)
    payload["verdict"] = verdict
    emit(dumps(payload), args.out)
    return EXIT_OK if verdict == "feasible" else EXIT_NEGATIVE


def cmd_eigen(args) -> int:
    g = parse_graph(args.graph)
    m = parse_marked(args.marked, g)
    try:
        op = materialize(g, m, Variant.parse(args.oracle))
    except SizeCapError as exc:
        raise InputError(str(exc)) from None
    basis = one_eigenspace(op)
    norm, _ = project_initial(basis)
    if args.dump_basis:
        Path(args.dump_basis).write_text(dumps(basis_to_dict(basis.vectors, g)))
    emit(dumps({"dimension": basis.dimension, "projection_norm": norm, "oracle": op.variant.value}), args.out)
    return EXIT_OK


def cmd_reproduce(args) -> int:
    from .reproduce import run_all

    lines: list[str] = []

    def echo(line: str) -> None:
        print(line, flush=True)
        lines.append(line)

    results = run_all(echo)
    if args.out:
        Path(args.out).write_text("\n".join(lines) + "\n")
    return EXIT_OK if all(r.passed and r.in_time for r in results) else EXIT_NEGATIVE


COMMANDS = {
    "generate": cmd_generate,
    "simulate": cmd_simulate,
    "construct": cmd_construct,
    "verify": cmd_verify,
    "optimize": cmd_optimize,
    "exists": cmd_exists,
    "balance": cmd_balance,
    "eigen": cmd_eigen,
    "reproduce": cmd_reproduce,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qwalk", description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        if name != "reproduce":
            p.add_argument("--graph", nargs="+", required=True, metavar="FILE|GEN",
                           help="edge-list file or generator: torus R C | complete N | path N | cycle N | simplex K")
            p.add_argument("--marked", default=None, help="comma-separated marked vertex ids (0-based)")
        p.add_argument("--out", default=None, help="write output here instead of stdout")
        if name in ("simulate", "verify", "eigen"):
            p.add_argument("--oracle", default="grover", choices=["grover", "skw"])
        if name in ("construct", "verify", "optimize", "exists"):
            p.add_argument("--tol", type=float, default=None, help="residual tolerance (env QWALK_TOL)")
        if name == "construct":
            p.add_argument("--assign", default=None, help="unmarked component values, e.g. 0=3,1=2")
        if name in ("verify", "optimize"):
            p.add_argument("--state", default=None, help="state JSON file")
        if name == "simulate":
            p.add_argument("--steps", type=int, default=100)
            p.add_argument("--format", default="csv", choices=["csv", "json"])
        if name == "eigen":
            p.add_argument("--dump-basis", default=None, metavar="PATH")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except (InputError, gr.GraphError, OSError) as exc:
        print(f"qwalk {args.command}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
