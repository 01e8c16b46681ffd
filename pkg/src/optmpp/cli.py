"""Command-line entry point.

Every command prints prose followed by one machine-readable line::

    SUMMARY key=value key=value ...

and writes one ``RUNRECORD {json}`` line to stderr.

Exit codes: 0 solved or valid, 1 plan invalid, 2 budget exhausted,
3 no solution within the horizon, 4 input error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

from . import core, pareto, reduce, sat3, search

EXIT_OK, EXIT_INVALID, EXIT_BUDGET, EXIT_NO_SOLUTION, EXIT_INPUT = 0, 1, 2, 3, 4


class InputError(Exception):
    pass


class _Run:
    """Collects the RunRecord for one command."""

    def __init__(self, command: str):
        self.record = {"command": command, "inputs": {}, "objective": None,
                       "budget": None, "result": None, "error": None}
        self.t0 = time.perf_counter()

    def read(self, path: str) -> str:
        try:
            data = Path(path).read_bytes()
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc.strerror}") from exc
        self.record["inputs"][path] = hashlib.sha256(data).hexdigest()
        try:
            return data.decode()
        except UnicodeDecodeError as exc:
            raise InputError(f"{path} is not text") from exc

    def read_json(self, path: str) -> dict:
        try:
            return json.loads(self.read(path))
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}: invalid JSON ({exc.msg})") from exc

    def emit(self):
        self.record["wall_time"] = round(time.perf_counter() - self.t0, 6)
        print("RUNRECORD " + json.dumps(self.record, sort_keys=True), file=sys.stderr)


def _summary(**fields) -> str:
    return "SUMMARY " + " ".join(f"{k}={v}" for k, v in fields.items())


def _costs_fields(costs: core.CostVector) -> dict:
    return {
        "total-arrival": costs.total_arrival_time,
        "makespan": costs.makespan,
        "total-distance": costs.total_distance,
        "max-distance": costs.max_distance,
    }


def _write(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _budget(args) -> search.Budget:
    try:
        return search.Budget(horizon_limit=args.horizon, state_limit=args.states, time_limit=args.time)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _load_instance(run: _Run, path: str) -> core.MppInstance:
    try:
        return core.instance_from_dict(run.read_json(path))
    except core.ModelError as exc:
        raise InputError(f"{path}: {exc}") from exc


def _load_plan(run: _Run, path: str) -> core.Plan:
    try:
        return core.plan_from_dict(run.read_json(path))
    except core.ModelError as exc:
        raise InputError(f"{path}: {exc}") from exc


# --- commands -------------------------------------------------------------


def cmd_gen(args, run: _Run) -> int:
    try:
        if args.family == "npuzzle":
            inst = core.npuzzle_instance(args.param)
        else:
            inst = pareto.make_family(args.family, args.param)
    except core.ModelError as exc:
        raise InputError(str(exc)) from exc
    _write(core.dumps(core.instance_to_dict(inst)), args.out)
    run.record["result"] = {"vertices": inst.graph.n, "robots": len(inst.robots)}
    print(f"generated {args.family} {args.param}: {inst.graph.n} vertices, {len(inst.robots)} robots",
          file=sys.stderr if args.out is None else sys.stdout)
    print(_summary(family=args.family, param=args.param, vertices=inst.graph.n,
                   edges=len(inst.graph.edges), robots=len(inst.robots)))
    return EXIT_OK


def cmd_solve(args, run: _Run) -> int:
    inst = _load_instance(run, args.instance)
    budget = _budget(args)
    run.record["objective"] = args.objective
    run.record["budget"] = {"horizon": args.horizon, "states": args.states, "time": args.time}
    try:
        sol = search.solve(inst, args.objective, budget)
    except search.BudgetExhausted as exc:
        run.record["error"] = f"budget exhausted: {exc}"
        print(f"budget exhausted: {exc}")
        print(_summary(status="budget-exhausted", objective=args.objective))
        return EXIT_BUDGET
    except search.NoSolution as exc:
        run.record["error"] = f"no solution: {exc}"
        print(f"no solution: {exc}")
        print(_summary(status="no-solution", objective=args.objective))
        return EXIT_NO_SOLUTION
    report = core.validate_plan(inst, sol.plan)
    if not report.ok:
        raise search.SearchError(f"solver produced an invalid plan: {report.violations[0]}")
    text = core.dumps(core.plan_to_dict(sol.plan))
    if args.out:
        _write(text, args.out)
    costs = _costs_fields(sol.costs)
    run.record["result"] = costs
    print(f"optimal {args.objective} = {sol.value} after {sol.expanded_states} expanded states")
    print(_summary(status="solved", objective=args.objective, value=sol.value,
                   expanded=sol.expanded_states, **costs))
    return EXIT_OK


def _read_cnf(run: _Run, path: str) -> sat3.Sat3Instance:
    try:
        return sat3.parse_dimacs(run.read(path))
    except sat3.Sat3Error as exc:
        raise InputError(f"{path}: {exc}") from exc


def _meta_path(out: str, meta: str | None) -> Path:
    if meta:
        return Path(meta)
    p = Path(out)
    return p.with_name(p.stem + ".meta.json")


def cmd_reduce(args, run: _Run) -> int:
    sat = _read_cnf(run, args.cnf)
    try:
        red = reduce.reduce(sat, args.target, args.two_groups)
    except reduce.ReductionError as exc:
        raise InputError(str(exc)) from exc
    meta_path = _meta_path(args.out, args.meta)
    Path(args.out).write_text(core.dumps(core.instance_to_dict(red.instance)))
    meta_path.write_text(core.dumps(red.to_metadata()))
    g = red.instance.graph
    run.record["result"] = {"K": red.K, "target": red.target}
    print(f"{red.target} instance written to {args.out}, metadata to {meta_path}")
    print(_summary(target=red.target, K=red.K, witness_threshold=red.witness_threshold,
                   shortcuts=len(red.shortcuts), vertices=g.n, edges=len(g.edges),
                   robots=len(red.instance.robots), grouped=str(red.grouped).lower()))
    return EXIT_OK


def cmd_witness(args, run: _Run) -> int:
    meta = run.read_json(args.metadata)
    try:
        red = reduce.reduction_from_metadata(meta)
    except (KeyError, TypeError, sat3.Sat3Error, core.ModelError) as exc:
        raise InputError(f"{args.metadata}: {exc}") from exc
    if args.auto:
        assignment = sat3.solve_brute_force(red.sat)
        if assignment is None:
            raise InputError("formula is unsatisfiable")
    elif args.assignment is not None:
        try:
            assignment = sat3.parse_assignment(args.assignment, red.sat.n)
        except sat3.Sat3Error as exc:
            raise InputError(str(exc)) from exc
    else:
        raise InputError("give an assignment or --auto")
    try:
        plan = reduce.synthesize_witness(red, assignment)
    except reduce.WitnessError as exc:
        raise InputError(f"witness synthesis failed: {exc}") from exc
    _write(core.dumps(core.plan_to_dict(plan)), args.out)
    costs = core.evaluate_costs(red.instance, plan)
    run.record["result"] = _costs_fields(costs)
    print(f"witness for {sat3.format_assignment(assignment)} costs {reduce.threshold_cost(red, plan)}"
          f" against K={red.K}",
          file=sys.stderr if args.out is None else sys.stdout)
    print(_summary(target=red.target, K=red.K, witness_threshold=red.witness_threshold,
                   assignment=sat3.format_assignment(assignment),
                   horizon=plan.horizon, **_costs_fields(costs)))
    return EXIT_OK


def cmd_validate(args, run: _Run) -> int:
    inst = _load_instance(run, args.instance)
    plan = _load_plan(run, args.plan)
    try:
        report = core.validate_plan(inst, plan)
    except core.PlanError as exc:
        raise InputError(str(exc)) from exc
    if not report.ok:
        for v in report.violations:
            print(f"violation: {v}")
        run.record["error"] = sorted(report.kinds())
        print(_summary(status="invalid", violations=len(report.violations),
                       kinds=",".join(sorted(report.kinds()))))
        return EXIT_INVALID
    costs = _costs_fields(core.evaluate_costs(inst, plan))
    run.record["result"] = costs
    print("plan is valid")
    print(_summary(status="valid", **costs))
    return EXIT_OK


def _parse_pair(text: str) -> tuple:
    parts = text.split(",")
    try:
        pair = tuple(search.Objective(p.strip()) for p in parts)
    except ValueError as exc:
        raise InputError(f"bad objective pair {text!r}") from exc
    if len(pair) != 2 or pair[0] == pair[1]:
        raise InputError("pair needs two distinct objectives")
    return pair


def cmd_pareto(args, run: _Run) -> int:
    pair = _parse_pair(args.pair)
    if (args.instance is None) == (args.family is None):
        raise InputError("give exactly one of --instance or --family")
    if args.instance:
        inst = _load_instance(run, args.instance)
    else:
        try:
            inst = pareto.make_family(args.family, args.param)
        except core.ModelError as exc:
            raise InputError(str(exc)) from exc
    run.record["objective"] = [o.value for o in pair]
    run.record["budget"] = {"horizon": args.horizon, "states": args.states, "time": args.time}
    front = search.pareto_front(inst, pair, _budget(args))
    run.record["result"] = {"front": front.points, "exhaustive": front.exhaustive}
    for (a, b) in front.points:
        print(f"{pair[0].value}={a} {pair[1].value}={b}")
    if not front.exhaustive:
        print("budget exhausted: front may be incomplete")
    print(_summary(front=str(front).replace(" ", ";"), points=len(front.points),
                   exhaustive=str(front.exhaustive).lower()))
    return EXIT_OK if front.exhaustive else EXIT_BUDGET


# --- parser ----------------------------------------------------------------


def _add_budget(p):
    p.add_argument("--horizon", type=int, default=None, help="max timesteps (default |V|^3)")
    p.add_argument("--states", type=int, default=5_000_000, help="max expanded states")
    p.add_argument("--time", type=float, default=900.0, help="wall-clock seconds")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="optmpp", description="Optimal multi-robot path planning on graphs.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate an instance family member")
    p.add_argument("family", choices=["npuzzle", "cycle", "twopath"])
    p.add_argument("param", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("solve", help="solve an instance optimally")
    p.add_argument("instance")
    p.add_argument("--objective", required=True, choices=[o.value for o in search.Objective])
    p.add_argument("--out")
    _add_budget(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("reduce", help="build a hardness instance from a DIMACS 3SAT file")
    p.add_argument("cnf")
    p.add_argument("--target", required=True, type=str.lower, choices=["mtat", "m3pp", "mtd", "mmd"])
    p.add_argument("--two-groups", action="store_true")
    p.add_argument("--out", required=True)
    p.add_argument("--meta", help="metadata path (default <out>.meta.json)")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("witness", help="build the threshold plan from an assignment")
    p.add_argument("metadata")
    p.add_argument("assignment", nargs="?", help="bits like 0101 or literals like 1,-2,3,-4")
    p.add_argument("--auto", action="store_true", help="take the lowest satisfying assignment")
    p.add_argument("--out")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("validate", help="check a plan against an instance")
    p.add_argument("instance")
    p.add_argument("plan")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("pareto", help="exact Pareto front for an objective pair")
    p.add_argument("--instance")
    p.add_argument("--family", choices=["cycle", "twopath"])
    p.add_argument("--param", type=int, default=1)
    p.add_argument("--pair", required=True, help="e.g. total-arrival,makespan")
    _add_budget(p)
    p.set_defaults(func=cmd_pareto)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    run = _Run(args.command)
    try:
        code = args.func(args, run)
    except InputError as exc:
        run.record["error"] = str(exc)
        print(f"error: {exc}", file=sys.stderr)
        print(_summary(status="input-error"))
        code = EXIT_INPUT
    run.emit()
    return code


if __name__ == "__main__":
    sys.exit(main())
