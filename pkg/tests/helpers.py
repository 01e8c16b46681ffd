"""Shared builders for the test suite."""

from __future__ import annotations

import random

from optmpp.core import Graph, MppInstance, Robot


def random_connected_graph(rng: random.Random, n: int, extra: float = 0.3) -> Graph:
    order = list(range(n))
    rng.shuffle(order)
    edges = {tuple(sorted((order[k], order[rng.randrange(k)]))) for k in range(1, n)}
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < extra:
                edges.add((u, v))
    return Graph.from_edges(n, sorted(edges))


def random_tiny_instance(rng: random.Random, grouped: bool | None = None) -> MppInstance:
    """At most 3 robots on at most 8 vertices."""
    n = rng.randint(3, 8)
    graph = random_connected_graph(rng, n, extra=rng.choice((0.0, 0.15, 0.35)))
    k = rng.randint(1, min(3, n - 1))
    starts = rng.sample(range(n), k)
    goals = rng.sample(range(n), k)
    if grouped is None:
        grouped = rng.random() < 0.25
    if not grouped:
        return MppInstance(graph, tuple(Robot(i, s, g) for i, (s, g) in enumerate(zip(starts, goals))))
    labels = [0] * k
    if k > 1:
        labels[rng.randrange(k)] = 1
    groups = {g: frozenset(goals[i] for i in range(k) if labels[i] == g) for g in set(labels)}
    robots = tuple(Robot(i, starts[i], None, labels[i]) for i in range(k))
    return MppInstance(graph, robots, groups)


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])
