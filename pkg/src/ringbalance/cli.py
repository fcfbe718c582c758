"""Command-line front end.

Every subcommand reads a JSON document and prints a report, either as JSON
(rationals as canonical ``"p/q"`` strings) or as an aligned text table.
Exit status: 0 on success, 1 when the instance admits no finite solution,
2 on malformed input or bad flags.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from .design import design_route
from .lp import InfeasibleError
from .oracle import OracleCapExceeded, brute_force_alpha_opt, oracle_cap
from .reduction import (
    TopologyError,
    cycle_from_dict,
    edge_to_dict,
    lift_routing,
    mapping_to_list,
    reduce_to_ring,
)
from .ring import (
    INFINITE,
    InstanceFormatError,
    RingInstance,
    congestion,
    format_rational,
    instance_from_dict,
    instance_to_dict,
    to_rational,
    validate_instance,
)
from .rounding import balance_route
from .scheme import SchemeParams, approximation_scheme

EXIT_OK, EXIT_INFEASIBLE, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _q(x) -> str:
    if x == INFINITE:
        return "inf"
    return format_rational(x)


def _dirs(dirs) -> list:
    return [str(d) for d in dirs]


def _read_json(path: str, what: str):
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise InputError(f"{what}: cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text, parse_float=Fraction)
    except json.JSONDecodeError as exc:
        raise InputError(f"{what}: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def _load_instance(path: str) -> RingInstance:
    doc = _read_json(path, "instance")
    try:
        inst = instance_from_dict(doc)
    except InstanceFormatError as exc:
        raise InputError(f"instance: {exc}") from None
    errors = validate_instance(inst)
    if errors:
        raise InputError("instance: " + "; ".join(errors))
    return inst


def _rational_arg(text: str) -> Fraction:
    try:
        return to_rational(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from None


# -- reports ------------------------------------------------------------------


def _edge_rows(inst: RingInstance, loads, extra=None) -> list:
    rows = []
    for e in inst.edges():
        row = {"edge": e.label(inst.n), "capacity": _q(inst.capacity(e)), "load": _q(loads[e])}
        if extra:
            row.update(extra(e))
        rows.append(row)
    return rows


def _table(rows: list, columns: list) -> str:
    widths = [max(len(c), *(len(str(r[c])) for r in rows)) if rows else len(c) for c in columns]
    lines = ["  ".join(c.rjust(w) for c, w in zip(columns, widths))]
    for r in rows:
        lines.append("  ".join(str(r[c]).rjust(w) for c, w in zip(columns, widths)))
    return "\n".join(lines)


def _emit(report: dict, fmt: str, table_cols=None, out=None):
    out = out or sys.stdout
    if fmt == "json":
        json.dump(report, out, indent=2)
        out.write("\n")
        return
    for key, value in report.items():
        if key in ("edges", "routing"):
            continue
        if isinstance(value, (list, dict)):
            value = json.dumps(value)
        out.write(f"{key}: {value}\n")
    if "routing" in report:
        out.write(f"routing: {' '.join(report['routing']) or '(none)'}\n")
    if "edges" in report and table_cols:
        out.write(_table(report["edges"], table_cols) + "\n")


# -- subcommands --------------------------------------------------------------


def _check_start(args, inst):
    if not 0 <= args.start_node < inst.n:
        raise InputError(f"--start-node: must lie in 0..{inst.n - 1}, got {args.start_node}")


def cmd_solve(args) -> int:
    inst = _load_instance(args.instance)
    _check_start(args, inst)
    res = balance_route(inst, args.start_node)
    cert = res.certificate
    report = {
        "command": "solve",
        "alpha_star": _q(res.alpha_star),
        "D": _q(cert.D),
        "congestion": _q(congestion(inst, res.loads)),
        "certificate_holds": cert.holds,
        "uncross_steps": len(res.uncross_steps),
        "routing": _dirs(res.dirs),
        "edges": [
            {
                "edge": row.edge.label(inst.n),
                "capacity": _q(row.capacity),
                "load": _q(row.load),
                "alpha_star_c": _q(res.alpha_star * row.capacity),
                "bound": _q(row.bound),
                "slack": _q(row.slack),
            }
            for row in cert.rows
        ],
    }
    _emit(report, args.format, ["edge", "capacity", "load", "alpha_star_c", "bound", "slack"])
    return EXIT_OK


def cmd_scheme(args) -> int:
    inst = _load_instance(args.instance)
    _check_start(args, inst)
    params = SchemeParams(args.epsilon, args.grid_steps)
    res = approximation_scheme(inst, params, args.start_node)
    best = res.best
    widen = params.epsilon * inst.mean_capacity()
    report = {
        "command": "scheme",
        "epsilon": _q(params.epsilon),
        "grid_steps": params.N,
        "alpha_star": _q(res.alpha_star),
        "alpha_prime": _q(best.alpha_prime),
        "grid_index": best.grid_index,
        "score": _q(best.score),
        "candidate_count": res.candidate_count,
        "big_demands": list(best.big),
        "long_demands": list(best.long_set),
        "routing": _dirs(best.dirs),
        "edges": _edge_rows(inst, best.loads, lambda e: {"widened": _q(inst.capacity(e) + widen)}),
    }
    _emit(report, args.format, ["edge", "capacity", "widened", "load"])
    return EXIT_OK


def cmd_design(args) -> int:
    inst = _load_instance(args.instance)
    costs = _read_json(args.costs, "costs")
    if not isinstance(costs, list):
        raise InputError("costs: expected a JSON array of rationals")
    try:
        w = [to_rational(x) for x in costs]
    except (TypeError, ValueError) as exc:
        raise InputError(f"costs: {exc}") from None
    try:
        res = design_route(inst, w, args.alpha)
    except ValueError as exc:
        raise InputError(f"costs: {exc}") from None
    keep = 1 - res.alpha_rob
    report = {
        "command": "design",
        "alpha": _q(res.alpha_rob),
        "cost": _q(res.cost),
        "lp_cost": _q(res.lp_cost),
        "overhead": _q(res.overhead),
        "overhead_bound": _q(res.overhead_bound),
        "lift_bound": _q(res.lift_bound),
        "routing": _dirs(res.dirs),
        "edges": _edge_rows(
            inst,
            res.loads,
            lambda e: {
                "gamma": _q(res.gamma[e]),
                "usable": _q((res.gamma[e] + inst.capacity(e)) * keep),
                "slack": _q((res.gamma[e] + inst.capacity(e)) * keep - res.loads[e]),
            },
        ),
    }
    _emit(report, args.format, ["edge", "capacity", "gamma", "usable", "load", "slack"])
    return EXIT_OK


def cmd_oracle(args) -> int:
    inst = _load_instance(args.instance)
    res = brute_force_alpha_opt(inst)
    report = {
        "command": "oracle",
        "alpha_opt": _q(res.alpha_opt),
        "enumerated": res.enumerated,
        "patterns": res.patterns,
        "cap": oracle_cap(),
        "routing": _dirs(res.argmin),
    }
    _emit(report, args.format)
    return EXIT_INFEASIBLE if res.alpha_opt == INFINITE else EXIT_OK


def cmd_validate(args) -> int:
    _load_instance(args.instance)
    _emit({"command": "validate", "valid": True}, args.format)
    return EXIT_OK


def cmd_reduce(args) -> int:
    doc = _read_json(args.instance, "cycle")
    try:
        g = cycle_from_dict(doc)
        out = reduce_to_ring(g)
    except InstanceFormatError as exc:
        raise InputError(f"cycle: {exc}") from None
    except TopologyError as exc:
        raise InputError(f"cycle: {exc}") from None
    report = {
        "command": "reduce",
        "infeasible": out.infeasible,
        "negative_edges": [edge_to_dict(g, e) for e in out.negative_edges],
        "ring": instance_to_dict(out.ring),
        "mapping": mapping_to_list(out),
    }
    status = EXIT_INFEASIBLE if out.infeasible else EXIT_OK
    if args.solve and not out.infeasible:
        res = balance_route(out.ring)
        lifted = lift_routing(out, res.dirs)
        report["routing"] = _dirs(res.dirs)
        report["alpha_star"] = _q(res.alpha_star)
        report["ring_feasible"] = lifted.ring_feasible
        report["graph_feasible"] = lifted.feasible
        report["paths"] = [[edge_to_dict(g, e) for e in p] for p in lifted.paths]
    _emit(report, args.format)
    return status


# -- entry point --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--timings", action="store_true", help="print wall-clock time to stderr")
    parser = argparse.ArgumentParser(prog="ringbalance", description="Balanced routing on bidirected rings.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", parents=[common], help="LP rounding with the additive 3D/2 certificate")
    p.add_argument("instance")
    p.add_argument("--start-node", type=int, default=0)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("scheme", parents=[common], help="approximation scheme over big-demand routings")
    p.add_argument("instance")
    p.add_argument("--epsilon", type=_rational_arg, required=True)
    p.add_argument("--grid-steps", type=int, default=1)
    p.add_argument("--start-node", type=int, default=0)
    p.set_defaults(func=cmd_scheme)

    p = sub.add_parser("design", parents=[common], help="capacity widening with a robustness reserve")
    p.add_argument("instance")
    p.add_argument("--alpha", type=_rational_arg, required=True)
    p.add_argument("--costs", required=True, help="JSON array of 2n costs, forward edges first")
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("reduce", parents=[common], help="cycle of circuits to bidirected ring")
    p.add_argument("instance")
    p.add_argument("--solve", action="store_true", help="also route the ring and lift the paths")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("oracle", parents=[common], help="exact integral optimum by enumeration")
    p.add_argument("instance")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("validate", parents=[common], help="check an instance file")
    p.add_argument("instance")
    p.set_defaults(func=cmd_validate)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        if args.command == "scheme" and args.grid_steps < 1:
            raise InputError("--grid-steps: must be a positive integer")
        if args.command == "scheme" and args.epsilon <= 0:
            raise InputError("--epsilon: must be positive")
        if args.command == "design" and not 0 <= args.alpha < 1:
            raise InputError("--alpha: robustness factor must lie in [0, 1)")
        start = time.perf_counter()
        status = args.func(args)
        if args.timings:
            print(f"seconds: {time.perf_counter() - start:.6f}", file=sys.stderr)
        return status
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except OracleCapExceeded as exc:
        print(f"error: {exc}; raise RINGBALANCE_ORACLE_CAP to allow more", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
