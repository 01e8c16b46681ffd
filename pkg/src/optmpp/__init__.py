"""Optimal multi-robot path planning on graphs: solvers, tradeoff families and hardness constructions."""

from .core import (
    CostVector,
    Graph,
    ModelError,
    MppInstance,
    Plan,
    PlanError,
    Robot,
    ValidationReport,
    Violation,
    evaluate_costs,
    grid_graph,
    npuzzle_instance,
    shortest_distance,
    validate_plan,
)
from .sat3 import Sat3Instance, evaluate, parse_dimacs, solve_brute_force
from .search import (
    Budget,
    BudgetExhausted,
    NoSolution,
    Objective,
    OptimalSolution,
    ParetoFront,
    brute_force_all_plans,
    pareto_front,
    solve,
    solve_min_makespan,
    solve_min_max_distance,
    solve_min_total_arrival,
    solve_min_total_distance,
)

__version__ = "0.1.0"
