"""Hardness constructions from 3SAT, their witness plans and decoders.

Two families are built here.

Time targets (MTAT, M3PP) use one strip per variable: a (2m+4)-cycle whose
left end ``v_x{i}`` holds the variable robot and whose right end ``v_x{i}^g``
is its goal.  Strip vertices are addressed by position ``p`` around the
cycle: 0 is the left end, ``1..m+1`` walk the upper (``t``) side, ``m+2`` is
the right end and ``m+3..2m+3`` come back along the lower (``f``) side, so
the lower vertex with index ``k`` sits at position ``2m+4-k``.  Clause ``j``
hooks onto the index-``j`` vertex of each literal's strip (upper for a plain
literal, lower for a negated one).  A goal path ``v_c1^g .. v_cm^g`` hangs off
every left end through ``v_cm^g``.

Distance targets (MTD, MMD) reuse the cycle layout, now fully occupied.
Every clause gets a six-vertex source (bottom ``1s 2s 3s``, top ``v_c{j}x{i}``)
and a three-vertex sink.  Bottom vertices see all three literal attachments
and all three tops.  Sink vertices see the antipodes of those attachments.
A 2m-vertex exchange path ``s_1..s_m, 1g_1..1g_m`` closes a cycle with every
left end ``v_x{i}^l``.

Source and sink vertices touch several strips, so on some formulas a robot
can hop between strips and beat its gadget route.  ``K`` stays the sum (or
max) of true shortest distances, a certified lower bound; ``designed`` holds
the gadget route lengths and ``witness_threshold`` the cost the schedule
attains.  The two agree whenever ``shortcuts`` is empty.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import (
    Graph,
    ModelError,
    MppInstance,
    Plan,
    Robot,
    evaluate_costs,
    validate_plan,
)
from .sat3 import Sat3Instance, evaluate

MTAT, M3PP, MTD, MMD = "MTAT", "M3PP", "MTD", "MMD"
TARGETS = (MTAT, M3PP, MTD, MMD)
TIME_TARGETS = (MTAT, M3PP)
DISTANCE_TARGETS = (MTD, MMD)

VARIABLE_GROUP, CLAUSE_GROUP = 0, 1


class ReductionError(ModelError):
    pass


class WitnessError(ReductionError):
    """The assignment cannot be turned into a threshold plan."""


class DecodeError(ReductionError):
    """The plan does not read back as an assignment."""


@dataclass(frozen=True)
class SourceTrace:
    """Where clauses touch the variable strips.

    ``attachments[j]`` lists, per literal of clause j, the strip vertex the
    clause hooks onto.  ``upper[i]`` and ``lower[i]`` are the inner vertices of
    strip i ordered from the left end.  ``sinks[j]`` is empty for time targets.
    """

    attachments: tuple
    upper: tuple
    lower: tuple
    left: tuple
    right: tuple
    sinks: tuple = ()


@dataclass(frozen=True)
class ReductionOutput:
    instance: MppInstance
    K: int
    target: str
    name_map: dict
    role_map: dict
    sat: Sat3Instance
    trace: SourceTrace
    stubs: dict = field(default_factory=dict)
    designed: tuple = ()

    @property
    def grouped(self) -> bool:
        return self.instance.grouped

    @property
    def shortest(self) -> tuple:
        g = self.instance.graph
        return tuple(min(g.distance(r.start, v) for v in self.instance.goal_set(r.id))
                     for r in self.instance.robots)

    @property
    def witness_threshold(self) -> int:
        """Cost of the gadget schedule; equals K unless the graph has shortcuts."""
        if not self.designed:
            return self.K
        if self.target == MTD:
            return sum(self.designed)
        return max(self.designed)

    @property
    def shortcuts(self) -> tuple:
        """Robots whose shortest route undercuts the route the gadgets intend."""
        if not self.designed:
            return ()
        return tuple(i for i, (d, s) in enumerate(zip(self.designed, self.shortest)) if s < d)

    def vertex(self, name: str) -> int:
        return self.name_map[name]

    def to_metadata(self) -> dict:
        return {
            "target": self.target,
            "K": self.K,
            "witness_threshold": self.witness_threshold,
            "grouped": self.grouped,
            "formula": {"n": self.sat.n, "clauses": self.sat.to_ints()},
            "name_map": dict(sorted(self.name_map.items(), key=lambda kv: kv[1])),
            "role_map": {str(r): role for r, role in sorted(self.role_map.items())},
        }


def _builder_graph(labels: list, edges: list) -> tuple:
    graph = Graph.from_edges(len(labels), edges, labels)
    return graph, {lab: v for v, lab in enumerate(labels)}


class _Names:
    def __init__(self):
        self.labels: list = []
        self.edges: list = []

    def add(self, label: str) -> int:
        self.labels.append(label)
        return len(self.labels) - 1

    def link(self, a: int, b: int):
        self.edges.append((a, b))


def _strip(names: _Names, i: int, m: int, left: str, right: str) -> list:
    """Cycle of 2m+4 vertices, returned as a position -> vertex list."""
    L = 2 * m + 4
    ring = [None] * L
    ring[0] = names.add(left)
    for k in range(1, m + 2):
        ring[k] = names.add(f"v_x{i}^{k}t")
    ring[m + 2] = names.add(right)
    for k in range(m + 1, 0, -1):
        ring[L - k] = names.add(f"v_x{i}^{k}f")
    for p in range(L):
        names.link(ring[p], ring[(p + 1) % L])
    return ring


def _attach_pos(j: int, positive: bool, m: int) -> int:
    """Strip position of clause j's hook (j is 1-based)."""
    return j if positive else 2 * m + 4 - j


def _sides(ring: list, m: int) -> tuple:
    L = 2 * m + 4
    return tuple(ring[1:m + 2]), tuple(ring[L - k] for k in range(1, m + 2))


# ---------------------------------------------------------------- time targets


def reduce_to_mtat(sat: Sat3Instance) -> ReductionOutput:
    n, m = sat.n, sat.m
    names = _Names()
    rings = [_strip(names, i, m, f"v_x{i}", f"v_x{i}^g") for i in range(1, n + 1)]
    goal_path = [names.add(f"v_c{j}^g") for j in range(1, m + 1)]
    for a, b in zip(goal_path, goal_path[1:]):
        names.link(a, b)
    if m:
        for ring in rings:
            names.link(goal_path[-1], ring[0])
    attachments = []
    clause_starts = []
    for j, clause in enumerate(sat.clauses, start=1):
        v = names.add(f"v_c{j}")
        clause_starts.append(v)
        hooks = tuple(rings[lit.var][_attach_pos(j, lit.positive, m)] for lit in clause)
        for h in hooks:
            names.link(v, h)
        attachments.append(hooks)
    graph, name_map = _builder_graph(names.labels, names.edges)

    robots, roles = [], {}
    for i, ring in enumerate(rings):
        robots.append(Robot(len(robots), ring[0], ring[m + 2]))
        roles[len(robots) - 1] = f"variable x{i + 1}"
    for j in range(m):
        robots.append(Robot(len(robots), clause_starts[j], goal_path[j]))
        roles[len(robots) - 1] = f"clause c{j + 1}"
    sides = [_sides(r, m) for r in rings]
    trace = SourceTrace(
        attachments=tuple(attachments),
        upper=tuple(s[0] for s in sides),
        lower=tuple(s[1] for s in sides),
        left=tuple(r[0] for r in rings),
        right=tuple(r[m + 2] for r in rings),
    )
    return ReductionOutput(MppInstance(graph, tuple(robots)), (n + m) * (m + 2), MTAT,
                           name_map, roles, sat, trace)


def reduce_to_m3pp(sat: Sat3Instance) -> ReductionOutput:
    red = reduce_to_mtat(sat)
    return ReductionOutput(red.instance, sat.m + 2, M3PP, red.name_map, red.role_map, sat, red.trace)


def apply_two_groups(red: ReductionOutput) -> ReductionOutput:
    """Variable robots share the right ends; clause robots share the goal path."""
    if red.target not in TIME_TARGETS:
        raise ReductionError(f"two-group variant is only built for {TIME_TARGETS}, not {red.target}")
    if red.grouped:
        return red
    inst = red.instance
    n = red.sat.n
    robots = tuple(Robot(r.id, r.start, None, VARIABLE_GROUP if r.id < n else CLAUSE_GROUP)
                   for r in inst.robots)
    groups = {
        VARIABLE_GROUP: frozenset(r.goal for r in inst.robots[:n]),
        CLAUSE_GROUP: frozenset(r.goal for r in inst.robots[n:]),
    }
    grouped = MppInstance(inst.graph, robots, groups)
    return ReductionOutput(grouped, red.K, red.target, red.name_map, red.role_map, red.sat, red.trace)


def _chosen_literal(clause, assignment) -> int:
    """Index within the clause of the true literal with the lowest variable."""
    true = [k for k, lit in enumerate(clause) if lit.value(assignment)]
    if not true:
        raise WitnessError("clause has no true literal")
    return min(true, key=lambda k: clause[k].var)


def _check_assignment(red: ReductionOutput, assignment) -> tuple:
    assignment = tuple(bool(v) for v in assignment)
    if len(assignment) != red.sat.n:
        raise WitnessError(f"assignment has {len(assignment)} values, formula has {red.sat.n} variables")
    for j, clause in enumerate(red.sat.clauses, start=1):
        if not any(lit.value(assignment) for lit in clause):
            raise WitnessError(f"assignment leaves clause {j} unsatisfied")
    return assignment


def _ring(red: ReductionOutput, i: int) -> list:
    m = red.sat.m
    L = 2 * m + 4
    ring = [None] * L
    ring[0], ring[m + 2] = red.trace.left[i], red.trace.right[i]
    for k in range(1, m + 2):
        ring[k] = red.trace.upper[i][k - 1]
        ring[L - k] = red.trace.lower[i][k - 1]
    return ring


def _finish(red: ReductionOutput, configs: list) -> Plan:
    plan = Plan.from_configs(configs)
    report = validate_plan(red.instance, plan)
    if not report.ok:
        raise WitnessError(f"internal schedule failed validation: {report.violations[0]}")
    return plan


def synthesize_witness_time(red: ReductionOutput, assignment) -> Plan:
    if red.target not in TIME_TARGETS:
        raise ReductionError(f"time witness needs target in {TIME_TARGETS}")
    a = _check_assignment(red, assignment)
    n, m = red.sat.n, red.sat.m
    L = 2 * m + 4
    T = m + 2
    rings = [_ring(red, i) for i in range(n)]
    goal_path = [red.vertex(f"v_c{j}^g") for j in range(1, m + 1)]
    paths = []
    for i in range(n):
        # true: leave along the lower side, which frees the upper side for clauses
        step = -1 if a[i] else 1
        paths.append([rings[i][(step * t) % L] for t in range(T + 1)])
    for j, clause in enumerate(red.sat.clauses, start=1):
        lit = clause[_chosen_literal(clause, a)]
        ring = rings[lit.var]
        p = _attach_pos(j, lit.positive, m)
        toward_left = -1 if lit.positive else 1
        path = [red.vertex(f"v_c{j}")]
        path += [ring[(p + toward_left * k) % L] for k in range(j + 1)]
        path += [goal_path[k] for k in range(m - 1, j - 2, -1)]
        paths.append(path)
    configs = [tuple(p[t] for p in paths) for t in range(T + 1)]
    return _finish(red, configs)


# ------------------------------------------------------------ distance targets


def _build_distance(sat: Sat3Instance) -> tuple:
    n, m = sat.n, sat.m
    L = 2 * m + 4
    names = _Names()
    rings = [_strip(names, i, m, f"v_x{i}^l", f"v_x{i}^r") for i in range(1, n + 1)]
    s_row = [names.add(f"v_c{j}^s") for j in range(1, m + 1)]
    g_row = [names.add(f"v_c{j}^1g") for j in range(1, m + 1)]
    exchange = s_row + g_row
    for a, b in zip(exchange, exchange[1:]):
        names.link(a, b)
    if m:
        for ring in rings:
            names.link(ring[0], s_row[0])
            names.link(ring[0], g_row[-1])
    attachments, sinks, bottoms, tops, sink_vs = [], [], [], [], []
    for j, clause in enumerate(sat.clauses, start=1):
        hooks = tuple(rings[lit.var][_attach_pos(j, lit.positive, m)] for lit in clause)
        antis = tuple(rings[lit.var][(_attach_pos(j, lit.positive, m) + m + 2) % L] for lit in clause)
        bot = tuple(names.add(f"v_c{j}^{k}s") for k in (1, 2, 3))
        top = tuple(names.add(f"v_c{j}x{lit.var + 1}") for lit in clause)
        snk = tuple(names.add(lab) for lab in (f"v_c{j}^g", f"v_c{j}^2g", f"v_c{j}^3g"))
        for b in bot:
            for h in hooks:
                names.link(b, h)
            for t in top:
                names.link(b, t)
        for s in snk:
            for w in antis:
                names.link(s, w)
        attachments.append(hooks)
        sinks.append(antis)
        bottoms.append(bot)
        tops.append(top)
        sink_vs.append(snk)
    return names, rings, s_row, g_row, attachments, sinks, bottoms, tops, sink_vs


def _distance_robots(sat, rings, s_row, g_row, attachments, bottoms, tops, sink_vs) -> tuple:
    """Start/goal pairs per the gadget rules, with a role per robot."""
    m = sat.m
    L = 2 * m + 4
    top_of = {}
    for j, hooks in enumerate(attachments):
        for k, h in enumerate(hooks):
            top_of[h] = tops[j][k]
    pairs, roles, designed = [], [], []
    for i, ring in enumerate(rings):
        for p in range(L):
            v = ring[p]
            goal = top_of.get(v, ring[(p + m + 2) % L])
            pairs.append((v, goal))
            roles.append(f"filler variable x{i + 1}")
            designed.append(2 if v in top_of else m + 2)
    for j in range(m):
        # 1s goes to the exchange bottom row; 2s and 3s go to the sink
        pairs.append((bottoms[j][0], g_row[j]))
        pairs.append((bottoms[j][1], sink_vs[j][1]))
        pairs.append((bottoms[j][2], sink_vs[j][2]))
        roles += [f"filler source c{j + 1}"] * 3
        designed += [m + 2, m + 4, m + 4]
    for j in range(m):
        pairs.append((s_row[j], sink_vs[j][0]))
        roles.append("filler exchange")
        designed.append(m + 3)
    for j in range(m):
        pairs.append((g_row[j], s_row[j]))
        roles.append("filler exchange")
        designed.append(m)
    return pairs, roles, designed


def _distance_output(sat, target, stub_goals: bool) -> ReductionOutput:
    n, m = sat.n, sat.m
    names, rings, s_row, g_row, attachments, sinks, bottoms, tops, sink_vs = _build_distance(sat)
    pairs, roles, designed = _distance_robots(sat, rings, s_row, g_row, attachments, bottoms, tops, sink_vs)
    stubs = {}
    if stub_goals:
        # stubs stretch each gadget route, not the graph distance, to m+4
        new_pairs = []
        for rid, (s, g) in enumerate(pairs):
            extra = m + 4 - designed[rid]
            prev, chain = g, []
            for k in range(1, extra + 1):
                v = names.add(f"{names.labels[g]}~{k}")
                names.link(prev, v)
                chain.append(v)
                prev = v
            if chain:
                stubs[rid] = tuple(chain)
            new_pairs.append((s, prev))
        pairs = new_pairs
        designed = [m + 4] * len(pairs)
    graph, name_map = _builder_graph(names.labels, names.edges)
    robots = tuple(Robot(k, s, g) for k, (s, g) in enumerate(pairs))
    inst = MppInstance(graph, robots)
    if stub_goals:
        K = m + 4
    else:
        K = sum(graph.distance(s, g) for s, g in pairs)
    side = [_sides(r, m) for r in rings]
    trace = SourceTrace(
        attachments=tuple(attachments),
        upper=tuple(s[0] for s in side),
        lower=tuple(s[1] for s in side),
        left=tuple(r[0] for r in rings),
        right=tuple(r[m + 2] for r in rings),
        sinks=tuple(sinks),
    )
    return ReductionOutput(inst, K, target, name_map, dict(enumerate(roles)), sat, trace, stubs,
                           tuple(designed))


def reduce_to_mtd(sat: Sat3Instance) -> ReductionOutput:
    return _distance_output(sat, MTD, stub_goals=False)


def reduce_to_mmd(sat: Sat3Instance) -> ReductionOutput:
    """MTD gadgets plus dead-end stubs that stretch every route to m+4."""
    return _distance_output(sat, MMD, stub_goals=True)


class _Schedule:
    def __init__(self, starts):
        self.pos = list(starts)
        self.at = {v: r for r, v in enumerate(starts)}
        self.configs = [tuple(starts)]

    def step(self, moves: dict):
        """moves: vertex -> vertex, applied simultaneously."""
        if not moves:
            return
        movers = [(self.at[u], w) for u, w in moves.items()]
        for u in moves:
            del self.at[u]
        for r, w in movers:
            self.pos[r] = w
            self.at[w] = r
        self.configs.append(tuple(self.pos))

    def walk(self, paths: dict):
        """Per robot, a private path to follow one vertex per step."""
        for k in range(max((len(p) for p in paths.values()), default=0)):
            self.step({self.pos[r]: p[k] for r, p in paths.items() if k < len(p)})


def synthesize_witness_distance(red: ReductionOutput, assignment) -> Plan:
    if red.target not in DISTANCE_TARGETS:
        raise ReductionError(f"distance witness needs target in {DISTANCE_TARGETS}")
    a = _check_assignment(red, assignment)
    n, m = red.sat.n, red.sat.m
    L = 2 * m + 4
    rings = [_ring(red, i) for i in range(n)]
    s_row = [red.vertex(f"v_c{j}^s") for j in range(1, m + 1)]
    g_row = [red.vertex(f"v_c{j}^1g") for j in range(1, m + 1)]
    sched = _Schedule(red.instance.starts)
    # for stubbed robots, the vertex their stub hangs off
    base_goal = {r.id: r.goal for r in red.instance.robots}
    g = red.instance.graph
    for rid, chain in red.stubs.items():
        base_goal[rid] = next(v for v in g.neighbors(chain[0]) if v not in chain)

    # source gadgets: one 6-cycle rotation per clause, then bottoms step up
    rotate, lift = {}, {}
    used = []
    for j, clause in enumerate(red.sat.clauses, start=1):
        c = _chosen_literal(clause, a)
        used.append(clause[c].var)
        hooks = red.trace.attachments[j - 1]
        bot = [red.vertex(f"v_c{j}^{k}s") for k in (1, 2, 3)]
        for k in range(3):
            h = hooks[(c + k) % 3]
            rotate[bot[k]] = h
            rotate[h] = bot[(k + 1) % 3]
            lift[bot[(k + 1) % 3]] = base_goal[sched.at[h]]
    sched.step(rotate)
    sched.step(lift)

    exchange_cycle = g_row[::-1] + s_row[::-1]
    for r in range(1, m + 3):
        moves = {}
        for i, ring in enumerate(rings):
            d = -1 if a[i] else 1
            for p in range(L):
                moves[ring[p]] = ring[(p + d) % L]
        sched.step(moves)
        if r <= m:
            ell = rings[used[r - 1]][0]
            if red.instance.starts[sched.at[ell]] != red.vertex(f"v_c{r}^1s"):
                raise WitnessError("exchange entry out of order")
            cyc = [ell] + exchange_cycle
            sched.step({cyc[k]: cyc[(k + 1) % len(cyc)] for k in range(len(cyc))})

    fill = {}
    for j in range(m):
        for w in red.trace.sinks[j]:
            fill[w] = base_goal[sched.at[w]]
    sched.step(fill)
    if red.stubs:
        sched.walk({rid: list(chain) for rid, chain in red.stubs.items()})
    return _finish(red, sched.configs)


def synthesize_witness(red: ReductionOutput, assignment) -> Plan:
    if red.target in TIME_TARGETS:
        return synthesize_witness_time(red, assignment)
    return synthesize_witness_distance(red, assignment)


# ---------------------------------------------------------------- decoding


def threshold_objective(target: str) -> str:
    return {MTAT: "total-arrival", M3PP: "makespan", MTD: "total-distance", MMD: "max-distance"}[target]


def threshold_cost(red: ReductionOutput, plan: Plan) -> int:
    costs = evaluate_costs(red.instance, plan)
    return {
        MTAT: costs.total_arrival_time,
        M3PP: costs.makespan,
        MTD: costs.total_distance,
        MMD: costs.max_distance,
    }[red.target]


def decode_assignment(red: ReductionOutput, plan: Plan) -> tuple:
    report = validate_plan(red.instance, plan)
    if not report.ok:
        raise DecodeError(f"plan is invalid: {report.violations[0]}")
    cost = threshold_cost(red, plan)
    if cost > red.witness_threshold:
        raise DecodeError(f"plan cost {cost} exceeds threshold {red.witness_threshold}")
    values = []
    for i in range(red.sat.n):
        left = red.trace.left[i]
        robot = red.instance.starts.index(left)
        path = plan.paths[robot]
        upper, lower = set(red.trace.upper[i]), set(red.trace.lower[i])
        on_upper = any(v in upper for v in path)
        on_lower = any(v in lower for v in path)
        if on_upper == on_lower:
            raise DecodeError(f"variable x{i + 1}: robot on the left end uses "
                              f"{'both sides' if on_upper else 'neither side'}")
        # leaving along the lower side (counterclockwise rotation) means true
        values.append(on_lower)
    return tuple(values)


REDUCERS = {
    MTAT: reduce_to_mtat,
    M3PP: reduce_to_m3pp,
    MTD: reduce_to_mtd,
    MMD: reduce_to_mmd,
}


def reduce(sat: Sat3Instance, target: str, two_groups: bool = False) -> ReductionOutput:
    target = target.upper()
    if target not in REDUCERS:
        raise ReductionError(f"unknown target {target!r}")
    if two_groups and target not in TIME_TARGETS:
        raise ReductionError("two-group variant is not constructed for distance targets")
    red = REDUCERS[target](sat)
    return apply_two_groups(red) if two_groups else red


def reduction_from_metadata(meta: dict) -> ReductionOutput:
    sat = Sat3Instance.from_ints(meta["formula"]["n"], meta["formula"]["clauses"])
    red = reduce(sat, meta["target"], bool(meta.get("grouped")))
    if red.K != meta.get("K") or red.name_map != meta.get("name_map"):
        raise ReductionError("metadata does not match a fresh construction")
    return red
