"""Balanced routing of demands on bidirected rings.

The main entry points are :func:`balance_route` (LP rounding with an additive
``3D/2`` guarantee), :func:`approximation_scheme`, :func:`design_route` and
:func:`reduce_to_ring`.
"""
from .design import DesignResult, design_route
from .lp import InfeasibleError, solve_design_relaxation, solve_relaxation, solve_relaxation_with_offsets
from .oracle import (
    OracleCapExceeded,
    brute_force_alpha_opt,
    brute_force_design_opt,
    random_corpus,
    random_cycle_of_circuits,
    random_instance,
    tight_example,
)
from .reduction import CycleOfCircuits, lift_routing, reduce_to_ring
from .ring import (
    BACKWARD,
    FORWARD,
    Demand,
    Direction,
    Edge,
    LoadVector,
    RingInstance,
    congestion,
    load_of_fractional,
    load_of_integral,
    validate_instance,
)
from .rounding import balance_route, greedy_trace, round_fractional, uncross_all, unsplit_greedy
from .scheme import SchemeParams, approximation_scheme, run_for_alpha_prime

__version__ = "0.1.0"

__all__ = [
    "BACKWARD", "FORWARD", "CycleOfCircuits", "Demand", "DesignResult", "Direction", "Edge",
    "InfeasibleError", "LoadVector", "OracleCapExceeded", "RingInstance", "SchemeParams",
    "approximation_scheme", "balance_route", "brute_force_alpha_opt", "brute_force_design_opt",
    "congestion", "design_route", "greedy_trace", "lift_routing", "load_of_fractional",
    "load_of_integral", "random_corpus", "random_cycle_of_circuits", "random_instance",
    "reduce_to_ring", "round_fractional", "run_for_alpha_prime", "solve_design_relaxation",
    "solve_relaxation", "solve_relaxation_with_offsets", "tight_example", "uncross_all",
    "unsplit_greedy", "validate_instance",
]
