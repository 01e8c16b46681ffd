import pytest

from optmpp.core import ModelError, evaluate_costs, validate_plan
from optmpp.pareto import (
    CYCLE_PAIRS,
    TWOPATH_PAIRS,
    cost_pair,
    cycle_reference_plans,
    cycle_vectors,
    expected_front,
    gen_cycle_tradeoff,
    gen_twopath_tradeoff,
    nondominated,
    twopath_reference_plans,
    twopath_vectors,
    verify_tradeoff,
)
from optmpp.search import MD, MS, TA, TD, pareto_front, solve


def test_cycle_vectors_cross_at_nine():
    for x in range(1, 10):
        assert len(nondominated(cycle_vectors(x))) == 1
    for x in range(10, 20):
        assert len(nondominated(cycle_vectors(x))) == 2


def test_cycle_generator_shape():
    inst = gen_cycle_tradeoff(10)
    assert inst.graph.n == 15 and len(inst.robots) == 3
    assert all(len(inst.graph.neighbors(v)) == 2 for v in range(15))
    with pytest.raises(ModelError):
        gen_cycle_tradeoff(0)


@pytest.mark.parametrize("x", [1, 5, 10])
def test_cycle_reference_plans_cost_what_they_claim(x):
    inst = gen_cycle_tradeoff(x)
    up, down = cycle_reference_plans(inst, x)
    for plan, vec in zip((up, down), cycle_vectors(x)):
        c = evaluate_costs(inst, plan)
        for pair in CYCLE_PAIRS:
            assert cost_pair(c, pair) == vec


def test_twopath_reference_plans():
    for s in (1, 2, 3):
        inst = gen_twopath_tradeoff(s)
        got = {cost_pair(evaluate_costs(inst, p), (TA, TD)) for p in twopath_reference_plans(inst, s)}
        assert got == twopath_vectors(s)[(TA, TD)]
    with pytest.raises(ModelError):
        gen_twopath_tradeoff(0)


def test_twopath_base_optima():
    inst = gen_twopath_tradeoff(1)
    assert solve(inst, TD).value == 12
    assert solve(inst, TA).value == 16


def test_expected_front_lookup():
    assert expected_front("cycle", 10, (TA, MS)) == {(23, 11), (22, 14)}
    assert expected_front("twopath", 1, ("makespan", "max-distance")) == {(5, 4), (6, 3)}
    with pytest.raises(ValueError):
        expected_front("cycle", 3, (TA, TD))
    with pytest.raises(ValueError):
        expected_front("star", 3, (TA, MS))


@pytest.mark.parametrize("x", [2, 10])
def test_cycle_fronts_small(x):
    rows = verify_tradeoff("cycle", [x], pairs=[(TA, MS), (TD, MS)])
    assert all(r.ok for r in rows)
    assert all(r.tradeoff == (x > 9) for r in rows)


def test_twopath_fronts():
    rows = verify_tradeoff("twopath", [1], TWOPATH_PAIRS)
    assert all(r.ok for r in rows), [(r.pair, r.front) for r in rows]


def test_front_plans_realize_their_points():
    inst = gen_cycle_tradeoff(11)
    front = pareto_front(inst, (TA, MS))
    assert front.points == [(23, 15), (25, 12)]
    for pt, plan in zip(front.points, front.plans):
        assert validate_plan(inst, plan).ok
        assert cost_pair(evaluate_costs(inst, plan), (TA, MS)) == pt
    assert str(front) == "(23,15) (25,12)"
