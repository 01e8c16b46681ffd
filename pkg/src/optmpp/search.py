"""Exact solvers over the joint configuration space.

Every solver reduces to one primitive: find a plan whose objective values
all stay within given bounds (``_BoundedSearch``).  Minimizing an objective
means raising its bound from an admissible lower bound until the bounded
search succeeds; the first feasible bound is the optimum.

The bounded search is a depth-first walk over joint moves in lexicographic
order of target vertices, with per-robot pruning driven by goal distances
and a memo of failed (state, resources) pairs.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator

from .core import (
    CostVector,
    MppInstance,
    Plan,
    evaluate_costs,
    path_lengths,
)


class Objective(str, Enum):
    TOTAL_ARRIVAL = "total-arrival"
    MAKESPAN = "makespan"
    TOTAL_DISTANCE = "total-distance"
    MAX_DISTANCE = "max-distance"

    def of(self, costs: CostVector) -> int:
        return {
            Objective.TOTAL_ARRIVAL: costs.total_arrival_time,
            Objective.MAKESPAN: costs.makespan,
            Objective.TOTAL_DISTANCE: costs.total_distance,
            Objective.MAX_DISTANCE: costs.max_distance,
        }[self]


TA = Objective.TOTAL_ARRIVAL
MS = Objective.MAKESPAN
TD = Objective.TOTAL_DISTANCE
MD = Objective.MAX_DISTANCE


class SearchError(RuntimeError):
    pass


class BudgetExhausted(SearchError):
    """State or time limit hit; ``bound`` is the best proven lower bound."""

    def __init__(self, message: str, bound: int | None = None):
        super().__init__(message)
        self.bound = bound


class NoSolution(SearchError):
    """No plan exists within the horizon limit."""


@dataclass(frozen=True)
class Budget:
    horizon_limit: int | None = None
    state_limit: int = 5_000_000
    time_limit: float = 900.0
    horizon_scale: int = 1

    def __post_init__(self):
        if self.horizon_limit is not None and self.horizon_limit <= 0:
            raise ValueError("horizon_limit must be positive")
        if self.state_limit <= 0 or self.time_limit <= 0 or self.horizon_scale <= 0:
            raise ValueError("budget limits must be positive")

    def horizon(self, instance: MppInstance) -> int:
        # moves needed by any solvable instance grow as |V|^3
        if self.horizon_limit is not None:
            return self.horizon_limit
        return self.horizon_scale * max(1, instance.graph.n) ** 3


@dataclass(frozen=True)
class SearchState:
    configuration: tuple
    frozen: int = 0
    aux: tuple = ()

    def is_frozen(self, robot: int) -> bool:
        return bool(self.frozen >> robot & 1)


@dataclass
class OptimalSolution:
    objective: Objective
    value: int
    plan: Plan
    costs: CostVector
    expanded_states: int
    proof_of_optimality: bool = True


@dataclass
class _Stats:
    budget: Budget
    expanded: int = 0
    started: float = field(default_factory=time.monotonic)

    def tick(self, bound=None):
        self.expanded += 1
        if self.expanded > self.budget.state_limit:
            raise BudgetExhausted(f"state limit {self.budget.state_limit} exhausted", bound)
        if self.expanded & 0x3FF == 0 and time.monotonic() - self.started > self.budget.time_limit:
            raise BudgetExhausted(f"time limit {self.budget.time_limit}s exhausted", bound)


def _dominated(records, vec) -> bool:
    if not records:
        return False
    for r in records:
        if all(a <= b for a, b in zip(r, vec)):
            return True
    return False


def _add_record(records: list, vec: tuple):
    records[:] = [r for r in records if not all(a <= b for a, b in zip(vec, r))]
    records.append(vec)


class _BoundedSearch:
    """Finds the first plan (in lexicographic move order) meeting every bound."""

    def __init__(self, instance: MppInstance, bounds: dict, budget: Budget, stats: _Stats,
                 allow_identity: bool = False):
        self.inst = instance
        self.bounds = {Objective(k): v for k, v in bounds.items()}
        self.stats = stats
        self.horizon = budget.horizon(instance)
        self.allow_identity = allow_identity
        self.k = len(instance.robots)
        self.full = (1 << self.k) - 1
        self.adj = instance.graph.adjacency
        self.dist = instance.goal_distance
        self.grouped = instance.grouped
        # grouped robots only carry a done flag when arrival times are bounded
        self.track_done = (not self.grouped) or TA in self.bounds
        self.track_used = MD in self.bounds
        self.bTA = self.bounds.get(TA)
        self.bTD = self.bounds.get(TD)
        self.bMS = self.bounds.get(MS)
        self.bMD = self.bounds.get(MD)
        if self.grouped:
            self.members = [(inst_goals, [r.id for r in instance.robots if r.group == g])
                            for g, inst_goals in sorted(instance.groups.items())]
        self.cut: set = set()
        self.memo: dict = {}

    # -- state helpers -------------------------------------------------------

    def is_goal(self, pos, mask) -> bool:
        if self.track_done:
            return mask == self.full
        for goals, who in self.members:
            if {pos[i] for i in who} != goals:
                return False
        return True

    def h_parts(self, pos, mask):
        """Per-robot admissible remaining-cost terms for (total arrival, total distance)."""
        hta = htd = 0
        for i in range(self.k):
            if mask >> i & 1:
                continue
            d = self.dist[i][pos[i]]
            htd += d
            hta += max(1, d) if self.grouped else d
        return hta, htd

    def roots(self):
        pos = self.inst.starts
        used = (0,) * self.k if self.track_used else None
        if not self.track_done:
            yield pos, 0, used
            return
        at_goal = [i for i in range(self.k) if self.dist[i][pos[i]] == 0]
        if not self.grouped:
            yield pos, sum(1 << i for i in at_goal), used
            return
        for size in range(len(at_goal), -1, -1):
            for combo in itertools.combinations(at_goal, size):
                yield pos, sum(1 << i for i in combo), used

    def vec(self, used, t, gta, gtd):
        """Resources spent so far; a failure with fewer spent rules out more spent."""
        # elapsed time only matters to the memo under a time bound; the horizon
        # cap alone is handled conservatively in _minimize
        out = [t] if (self.bMS is not None or self.bTA is not None) else []
        if self.bTA is not None:
            out.append(gta)
        if self.bTD is not None:
            out.append(gtd)
        if used is not None:
            out.extend(used)
        return tuple(out)

    # -- successor generation -------------------------------------------------

    def candidates(self, pos, mask, used, t):
        """Per robot: list of (target, commit, dTA, dTD), sorted by target."""
        out = []
        t1 = t + 1
        for i in range(self.k):
            p = pos[i]
            if mask >> i & 1:
                out.append(((p, False, 0, 0),))
                continue
            dist = self.dist[i]
            d = dist[p]
            hi = max(1, d) if self.grouped else d
            opts = []
            for q in sorted((p,) + self.adj[p]):
                dq = dist[q]
                moved = q != p
                if dq > self.horizon - t1:
                    self.cut.add("horizon")
                    continue
                if self.bMS is not None and dq > self.bMS - t1:
                    self.cut.add(MS)
                    continue
                if self.bMD is not None and used[i] + moved + dq > self.bMD:
                    self.cut.add(MD)
                    continue
                dtd = moved + dq - d
                if self.grouped:
                    if self.track_done and dq == 0:
                        opts.append((q, True, 1 - hi, dtd))
                    opts.append((q, False, 1 + max(1, dq) - hi, dtd))
                else:
                    opts.append((q, dq == 0, 1 + dq - d, dtd))
            out.append(tuple(opts))
        return out

    def joint_moves(self, pos, cands, slack_ta, slack_td) -> Iterator:
        k = self.k
        occ = {v: i for i, v in enumerate(pos)}
        target = [None] * k
        taken: set = set()
        commits = [False] * k

        def rec(i, sta, std):
            if i == k:
                yield tuple(target), tuple(commits)
                return
            p = pos[i]
            for q, commit, dta, dtd in cands[i]:
                if q in taken:
                    continue
                if dta > sta:
                    self.cut.add(TA)
                    continue
                if dtd > std:
                    self.cut.add(TD)
                    continue
                if q != p:
                    j = occ.get(q)
                    if j is not None and j < i and target[j] == p:
                        continue
                target[i] = q
                commits[i] = commit
                taken.add(q)
                yield from rec(i + 1, sta - dta, std - dtd)
                taken.discard(q)
            target[i] = None

        yield from rec(0, slack_ta, slack_td)

    def children(self, state, res):
        pos, mask, used = state
        t, gta, gtd = res
        cands = self.candidates(pos, mask, used, t)
        hta, htd = self.h_parts(pos, mask)
        inf = float("inf")
        sta = self.bTA - gta - hta if self.bTA is not None else inf
        std = self.bTD - gtd - htd if self.bTD is not None else inf
        if sta < 0:
            self.cut.add(TA)
            return
        if std < 0:
            self.cut.add(TD)
            return
        step_ta = self.k - bin(mask).count("1") if self.track_done else self.k
        for targets, commits in self.joint_moves(pos, cands, sta, std):
            moved = [a != b for a, b in zip(pos, targets)]
            if not self.allow_identity and not any(moved) and not any(commits):
                continue
            new_mask = mask
            for i, c in enumerate(commits):
                if c:
                    new_mask |= 1 << i
            new_used = used
            if used is not None:
                new_used = tuple(u + m for u, m in zip(used, moved))
            yield (targets, new_mask, new_used), (t + 1, gta + step_ta, gtd + sum(moved))

    # -- depth-first search ---------------------------------------------------

    def run(self):
        for root in self.roots():
            res = (0, 0, 0)
            if self.is_goal(root[0], root[1]):
                return [root]
            found = self._dfs(root, res)
            if found is not None:
                return found
        return None

    def _dfs(self, root, res0):
        memo = self.memo
        frames = [(root, res0, self.children(root, res0))]
        while frames:
            state, res, it = frames[-1]
            child = next(it, None)
            if child is None:
                frames.pop()
                pos, mask, used = state
                _add_record(memo.setdefault((pos, mask), []), self.vec(used, *res))
                continue
            cstate, cres = child
            self.stats.tick()
            if self.is_goal(cstate[0], cstate[1]):
                return [f[0] for f in frames] + [cstate]
            if _dominated(memo.get(cstate[:2]), self.vec(cstate[2], *cres)):
                continue
            frames.append((cstate, cres, self.children(cstate, cres)))
        return None


def _states_to_plan(states) -> Plan:
    return Plan.from_configs([s[0] for s in states])


def find_plan(instance: MppInstance, bounds: dict, budget: Budget | None = None, _stats=None):
    """First plan satisfying ``objective <= bound`` for every entry, or None.

    Returns ``(plan, cut)`` where ``cut`` names the bounds that pruned the search.
    """
    budget = budget or Budget()
    stats = _stats or _Stats(budget)
    search = _BoundedSearch(instance, bounds, budget, stats)
    states = search.run()
    plan = None if states is None else _states_to_plan(states)
    return plan, search.cut


def lower_bound(instance: MppInstance, objective: Objective) -> int:
    d = [instance.goal_distance[i][r.start] for i, r in enumerate(instance.robots)]
    if not d:
        return 0
    if objective in (TA, TD):
        return sum(d)
    return max(d)


def _minimize(instance, objective, fixed, budget, stats, lo=None, known=None):
    """Smallest feasible bound on ``objective`` under ``fixed`` bounds.

    ``known`` is an optional plan already meeting ``fixed``; its value caps
    the max-distance bisection.
    """
    objective = Objective(objective)
    lo = lower_bound(instance, objective) if lo is None else lo
    horizon = budget.horizon(instance)

    def attempt(b):
        try:
            plan, cut = find_plan(instance, {**fixed, objective: b}, budget, stats)
        except BudgetExhausted as exc:
            exc.bound = b
            raise
        if plan is None and objective not in cut:
            where = " within the horizon limit" if "horizon" in cut else ""
            raise NoSolution(f"no plan{where} (bounds {fixed})")
        return plan

    if objective is MD:
        # binary search on the distance cap; a plan's makespan caps its max
        # distance, so an unconstrained makespan optimum seeds the upper end
        best = known
        if best is None and not fixed:
            _, best = _minimize(instance, MS, {}, budget, stats)
        good = None if best is None else max(path_lengths(best), default=0)
        bad = lo - 1
        if best is None:
            step, b = 1, lo
            while True:
                plan = attempt(b)
                if plan is not None:
                    break
                bad, b, step = b, b + step, step * 2
            good, best = b, plan
        while good - bad > 1:
            mid = (good + bad) // 2
            plan = attempt(mid)
            if plan is None:
                bad = mid
            else:
                good, best = mid, plan
        return good, best

    b = lo
    while True:
        if objective is MS and b > horizon:
            raise NoSolution(f"no plan within the horizon limit {horizon}")
        plan = attempt(b)
        if plan is not None:
            return b, plan
        b += 1


REACH_LIMIT = 300_000


def reachable(instance: MppInstance, limit: int = REACH_LIMIT):
    """Whether any valid plan exists, by breadth-first search over joint states.

    Returns None when the joint state space may exceed ``limit`` states.
    """
    k, n = len(instance.robots), instance.graph.n
    size = 1
    for j in range(k):
        size *= n - j
    if size * (1 << k) > limit:
        return None
    search = _BoundedSearch(instance, {}, Budget(horizon_limit=10 ** 9), _Stats(Budget()))
    frontier = list(search.roots())
    seen = {s[:2] for s in frontier}
    while frontier:
        nxt = []
        for state in frontier:
            if search.is_goal(state[0], state[1]):
                return True
            for child, _ in search.children(state, (0, 0, 0)):
                if child[:2] not in seen:
                    seen.add(child[:2])
                    nxt.append(child)
        frontier = nxt
    return False


def _precheck(instance: MppInstance):
    if reachable(instance) is False:
        raise NoSolution("goal configuration is unreachable from the start")


def solve(instance: MppInstance, objective, budget: Budget | None = None) -> OptimalSolution:
    objective = Objective(objective)
    budget = budget or Budget()
    stats = _Stats(budget)
    _precheck(instance)
    value, plan = _minimize(instance, objective, {}, budget, stats)
    costs = evaluate_costs(instance, plan)
    if objective.of(costs) != value:
        raise SearchError(f"internal: plan evaluates to {objective.of(costs)}, search reported {value}")
    return OptimalSolution(objective, value, plan, costs, stats.expanded)


def solve_min_makespan(instance, budget=None) -> OptimalSolution:
    return solve(instance, MS, budget)


def solve_min_total_arrival(instance, budget=None) -> OptimalSolution:
    return solve(instance, TA, budget)


def solve_min_total_distance(instance, budget=None) -> OptimalSolution:
    return solve(instance, TD, budget)


def solve_min_max_distance(instance, budget=None) -> OptimalSolution:
    return solve(instance, MD, budget)


SOLVERS = {
    TA: solve_min_total_arrival,
    MS: solve_min_makespan,
    TD: solve_min_total_distance,
    MD: solve_min_max_distance,
}


def joint_successors(instance: MppInstance, state: SearchState) -> list:
    """All synchronous one-step successors of a state, waiting in place included."""
    search = _BoundedSearch(instance, {}, Budget(horizon_limit=10 ** 9), _Stats(Budget()),
                            allow_identity=True)
    track = bool(state.aux)
    pos = tuple(state.configuration)
    mask = state.frozen if search.track_done else 0
    used = tuple(state.aux) if track else None
    out = []
    for (p, m, u), _ in search.children((pos, mask, used), (0, 0, 0)):
        out.append(SearchState(p, m if search.track_done else 0, u if track else ()))
    return out


# --- Pareto fronts -----------------------------------------------------------

@dataclass
class ParetoFront:
    objectives: tuple
    points: list
    plans: list
    exhaustive: bool = True
    expanded_states: int = 0

    def __str__(self):
        return " ".join(f"({a},{b})" for a, b in self.points)


def pareto_front(instance: MppInstance, pair, budget: Budget | None = None) -> ParetoFront:
    """Nondominated (a, b) values by sweeping an upper bound on b downward."""
    a, b = (Objective(o) for o in pair)
    if a == b:
        raise ValueError("objective pair needs two distinct objectives")
    budget = budget or Budget()
    stats = _Stats(budget)
    front = ParetoFront((a, b), [], [])
    _precheck(instance)
    try:
        b_min, _ = _minimize(instance, b, {}, budget, stats)
        beta = None
        while True:
            fixed = {} if beta is None else {b: beta}
            a_val, a_plan = _minimize(instance, a, fixed, budget, stats)
            b_val, plan = _minimize(instance, b, {a: a_val}, budget, stats, known=a_plan)
            front.points.append((a_val, b_val))
            front.plans.append(plan)
            if b_val <= b_min:
                break
            beta = b_val - 1
    except BudgetExhausted:
        front.exhaustive = False
    front.points.sort()
    order = sorted(range(len(front.plans)), key=lambda i: front.points[i])
    front.plans = [front.plans[i] for i in order] if len(order) == len(front.plans) else front.plans
    front.expanded_states = stats.expanded
    return front


# --- brute-force oracle --------------------------------------------------------

class OracleLimit(SearchError):
    pass


def brute_force_all_plans(instance: MppInstance, horizon: int, limit: int = 500_000) -> list:
    """Every valid plan with horizon <= ``horizon``, by plain enumeration.

    Labeled plans stop at the first time every robot sits on its goal (any
    later step could only wait).  Grouped plans are listed at every horizon
    whose final configuration covers the goal sets.
    """
    if len(instance.robots) > 3 or instance.graph.n > 8:
        raise OracleLimit("oracle is for at most 3 robots on at most 8 vertices")
    graph = instance.graph
    k = len(instance.robots)
    adj = graph.adjacency
    grouped = instance.grouped
    goal_sets = [instance.goal_set(i) for i in range(k)]
    dist = instance.goal_distance
    out = []

    def done(cfg):
        if grouped:
            return all({cfg[i] for i in range(k) if instance.robots[i].group == g} == goals
                       for g, goals in instance.groups.items())
        return all(cfg[i] in goal_sets[i] for i in range(k))

    def options(cfg, t):
        opts = []
        for i in range(k):
            p = cfg[i]
            if not grouped and p in goal_sets[i]:
                opts.append((p,))
                continue
            opts.append(tuple(q for q in (p,) + adj[p] if dist[i][q] <= horizon - t - 1))
        return opts

    def legal(cfg, nxt):
        if len(set(nxt)) != k:
            return False
        for i in range(k):
            for j in range(i + 1, k):
                if cfg[i] == nxt[j] and cfg[j] == nxt[i] and cfg[i] != nxt[i]:
                    return False
        return True

    def walk(configs):
        cfg = configs[-1]
        t = len(configs) - 1
        if done(cfg):
            plan = Plan.from_configs(configs)
            out.append((plan, evaluate_costs(instance, plan)))
            if len(out) > limit:
                raise OracleLimit(f"more than {limit} plans")
            if not grouped:
                return
        if t == horizon:
            return
        for nxt in itertools.product(*options(cfg, t)):
            if legal(cfg, nxt):
                configs.append(nxt)
                walk(configs)
                configs.pop()

    walk([instance.starts])
    return out
