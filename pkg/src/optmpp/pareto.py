"""Instance families whose objective pairs cannot be optimized together.

The cycle family puts three robots on a cycle of length ``x + 5``: six
marked vertices spaced one apart on one side, closed by an arc of length
``x``.  Robot 0 goes 2 -> 3, robot 1 goes 4 -> 0 and robot 2 goes 5 -> 1,
so moving everyone "up" (increasing index, then around the arc) costs
distances (1, x+1, x+1) and moving everyone "down" costs (x+4, 4, 4).

The two-path family sends four robots from leaves of a hub into a shared
corridor that ends at a second hub carrying the goals.  Robot 3 also has a
private detour one edge longer than the corridor route.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import CostVector, Graph, ModelError, MppInstance, Plan, Robot, evaluate_costs
from .search import MD, MS, TA, TD, Budget, Objective, pareto_front


@dataclass(frozen=True)
class CycleFamilyParams:
    x: int

    def __post_init__(self):
        if self.x < 1:
            raise ModelError("cycle family needs x >= 1")


@dataclass(frozen=True)
class TwoPathFamilyParams:
    stretch: int = 1

    def __post_init__(self):
        if self.stretch < 1:
            raise ModelError("two-path family needs stretch >= 1")


def cycle_vectors(x: int) -> tuple:
    """(sum, max) cost pairs of the all-up and all-down solutions."""
    return (2 * x + 3, x + 1), (x + 12, x + 4)


def nondominated(points) -> set:
    pts = set(points)
    return {p for p in pts
            if not any(q != p and q[0] <= p[0] and q[1] <= p[1] for q in pts)}


def _cycle_plan(x: int, up: bool) -> Plan:
    n = x + 5
    starts, goals = (2, 4, 5), (3, 0, 1)
    step = 1 if up else -1
    paths = []
    for s, g in zip(starts, goals):
        p = [s]
        while p[-1] != g:
            p.append((p[-1] + step) % n)
        paths.append(p)
    T = max(len(p) for p in paths) - 1
    return Plan(T, tuple(tuple(p + [p[-1]] * (T + 1 - len(p))) for p in paths))


def _cycle_graph(x: int) -> Graph:
    n = x + 5
    labels = [f"d{i}" for i in range(6)] + [f"a{i}" for i in range(1, x)]
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)], labels)


def gen_cycle_tradeoff(params: CycleFamilyParams | int) -> MppInstance:
    if isinstance(params, int):
        params = CycleFamilyParams(params)
    x = params.x
    graph = _cycle_graph(x)
    inst = MppInstance(graph, (Robot(0, 2, 3), Robot(1, 4, 0), Robot(2, 5, 1)))
    up, down = cycle_vectors(x)
    for plan, want in zip(cycle_reference_plans(inst, x), (up, down)):
        c = evaluate_costs(inst, plan)
        got = [(c.total_arrival_time, c.makespan), (c.total_distance, c.max_distance)]
        if got != [want, want]:
            raise ModelError(f"cycle family self-check failed at x={x}: {got} != {want}")
    return inst


def cycle_reference_plans(instance: MppInstance, x: int) -> tuple:
    return _cycle_plan(x, True), _cycle_plan(x, False)


def twopath_vectors(stretch: int) -> dict:
    """Expected two-point fronts of the two-path family."""
    s = stretch
    return {
        (TA, TD): {(4 * s + 12, 4 * s + 9), (4 * s + 14, 4 * s + 8)},
        (MS, MD): {(s + 4, s + 3), (s + 5, s + 2)},
    }


def _twopath_layout(stretch: int):
    labels = ["s1", "s2", "s3", "s4", "h", "a", "g1", "g2", "g3", "g4", "u", "w", "z"]
    labels += [f"h~{k}" for k in range(1, stretch)] + [f"u~{k}" for k in range(1, stretch)]
    ix = {lab: v for v, lab in enumerate(labels)}
    edges = [(ix[f"s{k}"], ix["h"]) for k in range(1, 5)]
    edges += [(ix["a"], ix[f"g{k}"]) for k in range(1, 5)]

    def chain(a, b, pre):
        seq = [ix[a]] + [ix[f"{pre}~{k}"] for k in range(1, stretch)] + [ix[b]]
        return list(zip(seq, seq[1:])), seq

    left, left_seq = chain("h", "a", "h")
    right, right_seq = chain("u", "w", "u")
    edges += left + right
    edges += [(ix["s4"], ix["u"]), (ix["w"], ix["z"]), (ix["z"], ix["g4"])]
    return labels, edges, ix, left_seq, right_seq


def gen_twopath_tradeoff(params: TwoPathFamilyParams | int = 1) -> MppInstance:
    if isinstance(params, int):
        params = TwoPathFamilyParams(params)
    s = params.stretch
    labels, edges, ix, left_seq, right_seq = _twopath_layout(s)
    graph = Graph.from_edges(len(labels), edges, labels)
    robots = tuple(Robot(k, ix[f"s{k + 1}"], ix[f"g{k + 1}"]) for k in range(4))
    inst = MppInstance(graph, robots)
    left_all, right4 = twopath_reference_plans(inst, s)
    want = twopath_vectors(s)[(TA, TD)]
    got = set()
    for plan in (left_all, right4):
        c = evaluate_costs(inst, plan)
        got.add((c.total_arrival_time, c.total_distance))
    if got != want:
        raise ModelError(f"two-path self-check failed at stretch={s}: {sorted(got)}")
    return inst


def twopath_reference_plans(instance: MppInstance, stretch: int) -> tuple:
    """(everyone through the corridor, robot 3 on its detour)."""
    g = instance.graph
    ix = g.index
    left = [ix["h"]] + [ix[f"h~{k}"] for k in range(1, stretch)] + [ix["a"]]
    right = [ix["u"]] + [ix[f"u~{k}"] for k in range(1, stretch)] + [ix["w"], ix["z"]]

    def build(detour: bool) -> Plan:
        paths = []
        slot = 0
        for k in range(4):
            s, goal = ix[f"s{k + 1}"], ix[f"g{k + 1}"]
            if k == 3 and detour:
                paths.append([s] + right + [goal])
                continue
            paths.append([s] * (slot + 1) + left + [goal])
            slot += 1
        T = max(len(p) for p in paths) - 1
        return Plan(T, tuple(tuple(p + [p[-1]] * (T + 1 - len(p))) for p in paths))

    return build(False), build(True)


@dataclass
class TradeoffRow:
    family: str
    param: int
    pair: tuple
    front: list
    expected: list
    exhaustive: bool

    @property
    def ok(self) -> bool:
        return self.exhaustive and set(self.front) == set(self.expected)

    @property
    def tradeoff(self) -> bool:
        return len(self.front) > 1


CYCLE_PAIRS = ((TA, MS), (TD, MD), (TA, MD), (TD, MS))
TWOPATH_PAIRS = ((TA, TD), (MS, MD))


def expected_front(family: str, param: int, pair) -> set:
    pair = tuple(Objective(o) for o in pair)
    if family == "cycle":
        if pair not in CYCLE_PAIRS:
            raise ValueError(f"no stated front for {pair} on the cycle family")
        return nondominated(cycle_vectors(param))
    if family == "twopath":
        table = twopath_vectors(param)
        if pair not in table:
            raise ValueError(f"no stated front for {pair} on the two-path family")
        return table[pair]
    raise ValueError(f"unknown family {family!r}")


def make_family(family: str, param: int) -> MppInstance:
    if family == "cycle":
        return gen_cycle_tradeoff(param)
    if family == "twopath":
        return gen_twopath_tradeoff(param)
    raise ValueError(f"unknown family {family!r}")


def verify_tradeoff(family: str, params, pairs=None, budget: Budget | None = None) -> list:
    """Exact fronts for each parameter and pair, next to the expected vectors."""
    pairs = pairs or (CYCLE_PAIRS if family == "cycle" else TWOPATH_PAIRS)
    rows = []
    for p in params:
        inst = make_family(family, p)
        for pair in pairs:
            front = pareto_front(inst, pair, budget)
            rows.append(TradeoffRow(family, p, tuple(pair), list(front.points),
                                    sorted(expected_front(family, p, pair)), front.exhaustive))
    return rows


def cost_pair(costs: CostVector, pair) -> tuple:
    return tuple(Objective(o).of(costs) for o in pair)
