"""Problem model for multi-robot path planning on graphs.

Robots move synchronously on an undirected graph.  In one step each robot
either waits or crosses one edge; two robots may not end a step on the same
vertex (meet) or cross the same edge in opposite directions (head-on).
Rotations of robots along a fully occupied cycle are legal.

Labeled robots obey the freeze rule: the first time a robot touches its goal
it stays there for good.  Grouped robots only need their group's goal set to
be covered by the group in the final configuration.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

LABELED = "labeled"
GROUPED = "grouped"


class ModelError(ValueError):
    """An instance, graph or plan breaks a structural invariant."""


class PlanError(ModelError):
    """A plan cannot be checked against an instance, or is not feasible."""


@dataclass(frozen=True)
class Graph:
    """Connected, undirected, simple graph on vertices ``0..n-1``."""

    n: int
    edges: frozenset
    labels: tuple = ()

    def __post_init__(self):
        if self.n < 1:
            raise ModelError("graph needs at least one vertex")
        norm = set()
        for e in self.edges:
            u, v = e
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ModelError(f"edge {e} has an unknown endpoint")
            if u == v:
                raise ModelError(f"self-loop at {u}")
            norm.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(norm))
        if self.labels:
            if len(self.labels) != self.n:
                raise ModelError("labels must cover every vertex")
            named = [lab for lab in self.labels if lab is not None]
            if len(set(named)) != len(named):
                raise ModelError("vertex labels must be unique")
        if self.n > 1 and any(d == -1 for d in self._bfs(0)):
            raise ModelError("graph is not connected")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]], labels: Sequence | None = None) -> "Graph":
        edge_list = [tuple(e) for e in edges]
        keys = [(min(u, v), max(u, v)) for u, v in edge_list]
        if len(set(keys)) != len(keys):
            raise ModelError("duplicate edge")
        return cls(n, frozenset(keys), tuple(labels) if labels else ())

    @cached_property
    def adjacency(self) -> tuple:
        adj = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return tuple(tuple(sorted(a)) for a in adj)

    def neighbors(self, v: int) -> tuple:
        return self.adjacency[v]

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def label(self, v: int) -> str:
        if self.labels and self.labels[v] is not None:
            return self.labels[v]
        return str(v)

    @cached_property
    def index(self) -> dict:
        """Label to vertex id."""
        return {lab: v for v, lab in enumerate(self.labels) if lab is not None}

    def _bfs(self, src: int) -> list:
        adj = self.adjacency
        dist = [-1] * self.n
        dist[src] = 0
        queue = deque([src])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return dist

    @cached_property
    def _dist_rows(self) -> dict:
        return {}

    def distances_from(self, v: int) -> tuple:
        rows = self._dist_rows
        if v not in rows:
            rows[v] = tuple(self._bfs(v))
        return rows[v]

    def distance(self, u: int, v: int) -> int:
        return self.distances_from(u)[v]


def shortest_distance(graph: Graph, u: int, v: int) -> int:
    """Unweighted shortest-path distance between two vertices."""
    if not (0 <= u < graph.n and 0 <= v < graph.n):
        raise ModelError(f"unknown vertex in ({u}, {v})")
    return graph.distance(u, v)


@dataclass(frozen=True)
class Robot:
    id: int
    start: int
    goal: int | None = None
    group: int | None = None


@dataclass(frozen=True)
class MppInstance:
    graph: Graph
    robots: tuple
    groups: Mapping | None = None

    def __post_init__(self):
        robots = tuple(self.robots)
        object.__setattr__(self, "robots", robots)
        if [r.id for r in robots] != list(range(len(robots))):
            raise ModelError("robot ids must be 0..n-1 in order")
        n = self.graph.n
        starts = [r.start for r in robots]
        if any(not 0 <= s < n for s in starts):
            raise ModelError("start vertex out of range")
        if len(set(starts)) != len(starts):
            raise ModelError("start configuration is not injective")
        if self.groups is None:
            if any(r.goal is None or r.group is not None for r in robots):
                raise ModelError("labeled instance: every robot needs a goal and no group")
            goals = [r.goal for r in robots]
            if any(not 0 <= g < n for g in goals):
                raise ModelError("goal vertex out of range")
            if len(set(goals)) != len(goals):
                raise ModelError("goal configuration is not injective")
        else:
            groups = {int(g): frozenset(vs) for g, vs in self.groups.items()}
            object.__setattr__(self, "groups", groups)
            if any(r.group not in groups or r.goal is not None for r in robots):
                raise ModelError("grouped instance: every robot needs a known group and no own goal")
            seen: set = set()
            for g, vs in groups.items():
                if seen & vs:
                    raise ModelError("group goal sets overlap")
                seen |= vs
                if any(not 0 <= v < n for v in vs):
                    raise ModelError("group goal out of range")
                if len(vs) != sum(1 for r in robots if r.group == g):
                    raise ModelError(f"group {g}: goal count differs from robot count")

    @property
    def grouped(self) -> bool:
        return self.groups is not None

    @property
    def semantics(self) -> str:
        return GROUPED if self.grouped else LABELED

    @property
    def starts(self) -> tuple:
        return tuple(r.start for r in self.robots)

    @property
    def goals(self) -> tuple:
        return tuple(r.goal for r in self.robots)

    def goal_set(self, robot: int) -> frozenset:
        r = self.robots[robot]
        if self.groups is None:
            return frozenset((r.goal,))
        return self.groups[r.group]

    @cached_property
    def goal_distance(self) -> tuple:
        """Per robot, a table vertex -> distance to the nearest admissible goal."""
        g = self.graph
        tables = []
        cache: dict = {}
        for i in range(len(self.robots)):
            key = self.goal_set(i)
            if key not in cache:
                rows = [g.distances_from(v) for v in sorted(key)]
                cache[key] = tuple(min(row[u] for row in rows) for u in range(g.n))
            tables.append(cache[key])
        return tuple(tables)

    def swapped(self) -> "MppInstance":
        """Labeled instance with start and goal exchanged."""
        if self.grouped:
            raise ModelError("swapped() needs a labeled instance")
        robots = tuple(Robot(r.id, r.goal, r.start) for r in self.robots)
        return MppInstance(self.graph, robots)


@dataclass(frozen=True)
class Plan:
    """Positions of every robot at times 0..horizon."""

    horizon: int
    paths: tuple

    def __post_init__(self):
        paths = tuple(tuple(p) for p in self.paths)
        object.__setattr__(self, "paths", paths)
        if self.horizon < 0:
            raise PlanError("negative horizon")
        for i, p in enumerate(paths):
            if len(p) != self.horizon + 1:
                raise PlanError(f"path of robot {i} has {len(p)} entries, expected {self.horizon + 1}")

    @classmethod
    def from_configs(cls, configs: Sequence[Sequence[int]]) -> "Plan":
        if not configs:
            raise PlanError("a plan needs at least the start configuration")
        k = len(configs[0])
        return cls(len(configs) - 1, tuple(tuple(c[i] for c in configs) for i in range(k)))

    def config(self, t: int) -> tuple:
        return tuple(p[t] for p in self.paths)

    def configs(self) -> list:
        return [self.config(t) for t in range(self.horizon + 1)]

    def reversed(self) -> "Plan":
        return Plan(self.horizon, tuple(tuple(reversed(p)) for p in self.paths))

    def padded(self, horizon: int) -> "Plan":
        if horizon < self.horizon:
            raise PlanError("cannot pad to a shorter horizon")
        extra = horizon - self.horizon
        return Plan(horizon, tuple(p + (p[-1],) * extra for p in self.paths))


@dataclass(frozen=True)
class CostVector:
    total_arrival_time: int
    makespan: int
    total_distance: int
    max_distance: int

    def as_dict(self) -> dict:
        return {
            "total_arrival_time": self.total_arrival_time,
            "makespan": self.makespan,
            "total_distance": self.total_distance,
            "max_distance": self.max_distance,
        }


@dataclass(frozen=True)
class Violation:
    kind: str
    time: int
    robots: tuple
    detail: str = ""

    def __str__(self):
        who = ",".join(str(r) for r in self.robots)
        return f"{self.kind} t={self.time} robots={who} {self.detail}".rstrip()


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def kinds(self) -> set:
        return {v.kind for v in self.violations}

    def __bool__(self):
        return self.ok


def _check_shape(instance: MppInstance, plan: Plan):
    if len(plan.paths) != len(instance.robots):
        raise PlanError(f"plan covers {len(plan.paths)} robots, instance has {len(instance.robots)}")
    n = instance.graph.n
    for i, p in enumerate(plan.paths):
        for v in p:
            if not (isinstance(v, int) and 0 <= v < n):
                raise PlanError(f"robot {i}: unknown vertex {v!r}")


def validate_plan(instance: MppInstance, plan: Plan, semantics: str | None = None) -> ValidationReport:
    """Check a plan against every feasibility rule and report all violations."""
    semantics = semantics or instance.semantics
    if semantics not in (LABELED, GROUPED):
        raise ModelError(f"unknown semantics {semantics!r}")
    if semantics == GROUPED and not instance.grouped:
        raise ModelError("grouped semantics need a grouped instance")
    if semantics == LABELED and instance.grouped:
        raise ModelError("labeled semantics need per-robot goals")
    _check_shape(instance, plan)

    graph = instance.graph
    T = plan.horizon
    paths = plan.paths
    report = ValidationReport()
    bad = report.violations

    for r, p in zip(instance.robots, paths):
        if p[0] != r.start:
            bad.append(Violation("start", 0, (r.id,), f"at {p[0]}, start is {r.start}"))
        for t in range(T):
            u, v = p[t], p[t + 1]
            if u != v and not graph.has_edge(u, v):
                bad.append(Violation("jump", t, (r.id,), f"{u}->{v} is not an edge"))

    for t in range(T + 1):
        seen: dict = {}
        for i, p in enumerate(paths):
            seen.setdefault(p[t], []).append(i)
        for v, who in sorted(seen.items()):
            if len(who) > 1:
                bad.append(Violation("meet", t, tuple(who), f"at vertex {v}"))

    for t in range(T):
        moves = {}
        for i, p in enumerate(paths):
            if p[t] != p[t + 1]:
                moves[(p[t], p[t + 1])] = i
        for (u, v), i in sorted(moves.items()):
            j = moves.get((v, u))
            if j is not None and i < j:
                bad.append(Violation("head-on", t, (i, j), f"on edge {u}-{v}"))

    if semantics == LABELED:
        for r, p in zip(instance.robots, paths):
            first = next((t for t in range(T + 1) if p[t] == r.goal), None)
            if first is None:
                bad.append(Violation("goal", T, (r.id,), f"never reaches goal {r.goal}"))
                continue
            for t in range(first + 1, T + 1):
                if p[t] != r.goal:
                    bad.append(Violation("freeze", t, (r.id,), f"left goal {r.goal} touched at t={first}"))
                    break
    else:
        final = plan.config(T)
        for g, goals in sorted(instance.groups.items()):
            members = [r.id for r in instance.robots if r.group == g]
            placed = {final[i] for i in members}
            if placed != goals:
                bad.append(Violation("group-goal", T, tuple(members), f"group {g} does not cover its goal set"))
    return report


def arrival_times(instance: MppInstance, plan: Plan) -> tuple:
    """Labeled: first goal touch.  Grouped: time of the last move."""
    out = []
    for r, p in zip(instance.robots, plan.paths):
        if instance.grouped:
            out.append(max((t for t in range(1, plan.horizon + 1) if p[t] != p[t - 1]), default=0))
        else:
            out.append(next(t for t in range(plan.horizon + 1) if p[t] == r.goal))
    return tuple(out)


def path_lengths(plan: Plan) -> tuple:
    return tuple(sum(1 for a, b in zip(p, p[1:]) if a != b) for p in plan.paths)


def evaluate_costs(instance: MppInstance, plan: Plan) -> CostVector:
    report = validate_plan(instance, plan)
    if not report.ok:
        raise PlanError("invalid plan: " + "; ".join(str(v) for v in report.violations[:5]))
    times = arrival_times(instance, plan)
    lens = path_lengths(plan)
    return CostVector(sum(times), max(times, default=0), sum(lens), max(lens, default=0))


def grid_graph(rows: int, cols: int) -> Graph:
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    labels = [f"({r},{c})" for r in range(rows) for c in range(cols)]
    return Graph.from_edges(rows * cols, edges, labels)


def npuzzle_instance(N: int) -> MppInstance:
    """N*N robots filling an N x N grid; goal is row-major order, start is the board turned 180 degrees."""
    if N < 2:
        raise ModelError("npuzzle needs N >= 2")
    graph = grid_graph(N, N)
    cells = N * N
    robots = tuple(Robot(k, cells - 1 - k, k) for k in range(cells))
    return MppInstance(graph, robots)


# --- JSON file formats -----------------------------------------------------

def instance_to_dict(instance: MppInstance) -> dict:
    g = instance.graph
    verts = []
    for v in range(g.n):
        entry = {"id": v}
        if g.labels and g.labels[v] is not None:
            entry["label"] = g.labels[v]
        verts.append(entry)
    robots = []
    for r in instance.robots:
        entry = {"id": r.id, "start": r.start}
        if r.goal is not None:
            entry["goal"] = r.goal
        if r.group is not None:
            entry["group"] = r.group
        robots.append(entry)
    out = {"vertices": verts, "edges": [list(e) for e in sorted(g.edges)], "robots": robots}
    if instance.groups is not None:
        out["groups"] = {str(k): sorted(vs) for k, vs in sorted(instance.groups.items())}
    return out


def instance_from_dict(data: Mapping) -> MppInstance:
    try:
        verts = sorted(data["vertices"], key=lambda e: int(e["id"]))
        if [int(e["id"]) for e in verts] != list(range(len(verts))):
            raise ModelError("vertex ids must be 0..n-1")
        labels = [e.get("label") for e in verts]
        has_labels = any(lab is not None for lab in labels)
        graph = Graph.from_edges(len(verts), [(int(u), int(v)) for u, v in data["edges"]], labels if has_labels else None)
        robots = []
        for e in sorted(data["robots"], key=lambda e: int(e["id"])):
            goal = e.get("goal")
            group = e.get("group")
            robots.append(Robot(int(e["id"]), int(e["start"]),
                                None if goal is None else int(goal),
                                None if group is None else int(group)))
        groups = data.get("groups")
        if groups is not None:
            groups = {int(k): frozenset(int(v) for v in vs) for k, vs in groups.items()}
        return MppInstance(graph, tuple(robots), groups)
    except (KeyError, TypeError) as exc:
        raise ModelError(f"malformed instance: {exc}") from exc


def plan_to_dict(plan: Plan) -> dict:
    return {"horizon": plan.horizon, "paths": {str(i): list(p) for i, p in enumerate(plan.paths)}}


def plan_from_dict(data: Mapping) -> Plan:
    try:
        horizon = int(data["horizon"])
        paths = {int(k): [int(v) for v in p] for k, p in data["paths"].items()}
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise PlanError(f"malformed plan: {exc}") from exc
    if sorted(paths) != list(range(len(paths))):
        raise PlanError("plan robot ids must be 0..n-1")
    return Plan(horizon, tuple(tuple(paths[i]) for i in range(len(paths))))


def dumps(obj: dict) -> str:
    return json.dumps(obj, indent=1, sort_keys=True) + "\n"
