"""3SAT formulas: DIMACS input, evaluation and an exhaustive oracle.

Variables are 0-based internally and 1-based in DIMACS text.  Every clause
holds exactly three literals over three distinct variables.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import NamedTuple, Sequence


class Sat3Error(ValueError):
    pass


class Literal(NamedTuple):
    var: int
    positive: bool

    def value(self, assignment: Sequence[bool]) -> bool:
        return assignment[self.var] == self.positive

    def dimacs(self) -> int:
        return self.var + 1 if self.positive else -(self.var + 1)


@dataclass(frozen=True)
class Sat3Instance:
    n: int
    clauses: tuple

    def __post_init__(self):
        clauses = tuple(tuple(Literal(int(v), bool(p)) for v, p in c) for c in self.clauses)
        object.__setattr__(self, "clauses", clauses)
        if self.n < 0:
            raise Sat3Error("negative variable count")
        for j, c in enumerate(clauses):
            if len(c) != 3:
                raise Sat3Error(f"clause {j + 1} has {len(c)} literals, expected 3")
            vars_ = [lit.var for lit in c]
            if len(set(vars_)) != 3:
                raise Sat3Error(f"clause {j + 1} repeats a variable")
            if any(not 0 <= v < self.n for v in vars_):
                raise Sat3Error(f"clause {j + 1} uses a variable outside 1..{self.n}")

    @property
    def m(self) -> int:
        return len(self.clauses)

    @classmethod
    def from_ints(cls, n: int, clauses: Sequence[Sequence[int]]) -> "Sat3Instance":
        """Build from DIMACS-style signed 1-based literals."""
        out = []
        for c in clauses:
            if any(lit == 0 for lit in c):
                raise Sat3Error("literal 0 inside a clause")
            out.append(tuple(Literal(abs(lit) - 1, lit > 0) for lit in c))
        return cls(n, tuple(out))

    def to_ints(self) -> list:
        return [[lit.dimacs() for lit in c] for c in self.clauses]


def parse_dimacs(text: str) -> Sat3Instance:
    header = None
    tokens: list = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if header is not None or len(parts) != 4 or parts[1] != "cnf":
                raise Sat3Error(f"malformed header: {line!r}")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise Sat3Error(f"malformed header: {line!r}") from None
            continue
        if header is None:
            raise Sat3Error("clause before the 'p cnf' header")
        try:
            tokens.extend(int(tok) for tok in line.split())
        except ValueError:
            raise Sat3Error(f"non-integer token in {line!r}") from None
    if header is None:
        raise Sat3Error("missing 'p cnf' header")
    clauses, cur = [], []
    for tok in tokens:
        if tok == 0:
            clauses.append(cur)
            cur = []
        else:
            cur.append(tok)
    if cur:
        raise Sat3Error("last clause is not terminated by 0")
    n, m = header
    if len(clauses) != m:
        raise Sat3Error(f"header announces {m} clauses, found {len(clauses)}")
    return Sat3Instance.from_ints(n, clauses)


def to_dimacs(instance: Sat3Instance) -> str:
    lines = [f"p cnf {instance.n} {instance.m}"]
    lines += [" ".join(str(lit) for lit in c) + " 0" for c in instance.to_ints()]
    return "\n".join(lines) + "\n"


def evaluate(instance: Sat3Instance, assignment: Sequence[bool]) -> bool:
    if len(assignment) != instance.n:
        raise Sat3Error(f"assignment has {len(assignment)} values, formula has {instance.n} variables")
    return all(any(lit.value(assignment) for lit in c) for c in instance.clauses)


MAX_BRUTE_FORCE_VARS = 24


def all_assignments(n: int):
    """Every assignment in increasing binary order, x_1 most significant."""
    return itertools.product((False, True), repeat=n)


def solve_brute_force(instance: Sat3Instance):
    """Lowest satisfying assignment, or None."""
    if instance.n > MAX_BRUTE_FORCE_VARS:
        raise Sat3Error(f"brute force limited to {MAX_BRUTE_FORCE_VARS} variables")
    for a in all_assignments(instance.n):
        if evaluate(instance, a):
            return a
    return None


def satisfying_assignments(instance: Sat3Instance) -> list:
    if instance.n > MAX_BRUTE_FORCE_VARS:
        raise Sat3Error(f"brute force limited to {MAX_BRUTE_FORCE_VARS} variables")
    return [a for a in all_assignments(instance.n) if evaluate(instance, a)]


def parse_assignment(text: str, n: int) -> tuple:
    """Either a bit string ``0101`` or signed literals ``1,-2,3,-4``."""
    s = text.strip()
    if s and set(s) <= {"0", "1"} and len(s) == n:
        return tuple(ch == "1" for ch in s)
    try:
        lits = [int(tok) for tok in s.replace(",", " ").split()]
    except ValueError:
        raise Sat3Error(f"cannot read assignment {text!r}") from None
    vals: dict = {}
    for lit in lits:
        if lit == 0 or abs(lit) > n or abs(lit) in vals:
            raise Sat3Error(f"bad literal {lit} in assignment")
        vals[abs(lit)] = lit > 0
    if len(vals) != n:
        raise Sat3Error(f"assignment must set all {n} variables")
    return tuple(vals[v] for v in range(1, n + 1))


def format_assignment(assignment: Sequence[bool]) -> str:
    return ",".join(str(i + 1) if v else str(-(i + 1)) for i, v in enumerate(assignment))


def example_formula() -> Sat3Instance:
    """(x1 | ~x3 | x4) & (~x1 | x2 | ~x4) & (~x2 | x3 | x4)."""
    return Sat3Instance.from_ints(4, [[1, -3, 4], [-1, 2, -4], [-2, 3, 4]])


def complete_unsat() -> Sat3Instance:
    """All eight sign patterns over x1, x2, x3."""
    clauses = [[s1 * 1, s2 * 2, s3 * 3] for s1, s2, s3 in itertools.product((1, -1), repeat=3)]
    return Sat3Instance.from_ints(3, clauses)


def random_formula(n: int, m: int, rng: random.Random) -> Sat3Instance:
    clauses = []
    for _ in range(m):
        vars_ = rng.sample(range(1, n + 1), 3)
        clauses.append([v if rng.random() < 0.5 else -v for v in vars_])
    return Sat3Instance.from_ints(n, clauses)


def random_satisfiable(n: int, m: int, rng: random.Random, tries: int = 1000) -> Sat3Instance:
    for _ in range(tries):
        f = random_formula(n, m, rng)
        if solve_brute_force(f) is not None:
            return f
    raise Sat3Error("no satisfiable formula drawn")
