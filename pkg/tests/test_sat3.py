import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from optmpp.sat3 import (
    Sat3Error,
    Sat3Instance,
    complete_unsat,
    evaluate,
    example_formula,
    format_assignment,
    parse_assignment,
    parse_dimacs,
    random_formula,
    satisfying_assignments,
    solve_brute_force,
    to_dimacs,
)

EQ1 = "c three clauses\np cnf 4 3\n1 -3 4 0\n-1 2 -4 0\n-2 3 4 0\n"


def test_parse_example():
    f = parse_dimacs(EQ1)
    assert f == example_formula()
    assert f.n == 4 and f.m == 3
    assert f.clauses[0][1].var == 2 and not f.clauses[0][1].positive


@pytest.mark.parametrize("text", [
    "p cnf 3 1\n1 1 2 0\n",         # repeated variable
    "p cnf 3 1\n1 2 0\n",           # two literals
    "p cnf 4 1\n1 2 3 4 0\n",       # four literals
    "p dnf 3 1\n1 2 3 0\n",         # wrong format tag
    "p cnf 3\n1 2 3 0\n",           # short header
    "1 2 3 0\n",                    # missing header
    "p cnf 3 2\n1 2 3 0\n",         # clause count mismatch
    "p cnf 3 1\n1 2 3\n",           # unterminated clause
    "p cnf 3 1\n1 2 x 0\n",         # junk token
    "p cnf 2 1\n1 2 3 0\n",         # variable out of range
])
def test_parse_rejects(text):
    with pytest.raises(Sat3Error):
        parse_dimacs(text)


def test_clause_may_span_lines():
    f = parse_dimacs("p cnf 3 1\n1 -2\n3 0\n")
    assert f.to_ints() == [[1, -2, 3]]


def test_round_trip():
    f = example_formula()
    assert parse_dimacs(to_dimacs(f)) == f


def test_evaluate():
    f = example_formula()
    assert evaluate(f, (True,) * 4)
    # clause 1 fails: x1 false, x3 true, x4 false
    assert not evaluate(f, (False, False, True, False))
    assert evaluate(Sat3Instance(2, ()), (True, False))
    with pytest.raises(Sat3Error):
        evaluate(f, (True,))


def test_brute_force_examples():
    f = example_formula()
    a = solve_brute_force(f)
    assert a == (False, False, False, False)
    assert evaluate(f, a)
    assert solve_brute_force(complete_unsat()) is None
    assert solve_brute_force(Sat3Instance.from_ints(3, [[1, 2, 3]])) is not None


def test_brute_force_size_limit():
    with pytest.raises(Sat3Error):
        solve_brute_force(Sat3Instance(25, ()))


def test_assignment_text_forms():
    assert parse_assignment("0101", 4) == (False, True, False, True)
    assert parse_assignment("1,-2,-3,4", 4) == (True, False, False, True)
    assert format_assignment((True, False)) == "1,-2"
    for bad in ("1,2", "1,-1,2", "0,1,2", "abc"):
        with pytest.raises(Sat3Error):
            parse_assignment(bad, 3)


@settings(max_examples=80, deadline=None)
@given(st.integers(3, 7), st.integers(0, 12), st.integers(0, 10 ** 6))
def test_oracle_agrees_with_exhaustive_evaluation(n, m, seed):
    f = random_formula(n, m, random.Random(seed))
    sols = satisfying_assignments(f)
    a = solve_brute_force(f)
    if a is None:
        assert not sols
        assert not any(evaluate(f, b) for b in itertools.product((False, True), repeat=n))
    else:
        assert evaluate(f, a) and a == sols[0]


@settings(max_examples=50, deadline=None)
@given(st.integers(3, 9), st.integers(0, 10), st.integers(0, 10 ** 6))
def test_dimacs_round_trip_property(n, m, seed):
    f = random_formula(n, m, random.Random(seed))
    text = to_dimacs(f)
    assert parse_dimacs(text.replace(" ", "  ").replace("\n", "\n\n")) == f
