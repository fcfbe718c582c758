"""Approximation scheme: enumerate long-path routings of the big demands.

For a guess ``alpha'`` of the optimum, demands larger than
``(2/3) eps alpha' cbar`` are few, and an optimal routing sends fewer than
``3/eps`` of them along their long path.  Every such choice is fixed, the
remaining small demands are routed by LP rounding on top of the fixed loads,
and the best candidate wins.  Guesses run over the grid
``alpha_i = (N+i)/N alpha*``, ``i = 0..N``, which brackets the optimum because
``alpha* <= alpha_opt <= 2 alpha*``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .lp import InfeasibleError, solve_relaxation, solve_relaxation_with_offsets
from .ring import (
    INFINITE,
    LoadVector,
    RingInstance,
    long_direction,
    load_of_integral,
    to_rational,
)
from .rounding import round_fractional

ZERO = Fraction(0)


@dataclass(frozen=True)
class SchemeParams:
    epsilon: Fraction
    N: int = 1

    def __post_init__(self):
        object.__setattr__(self, "epsilon", to_rational(self.epsilon))
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if not isinstance(self.N, int) or self.N < 1:
            raise ValueError("grid steps N must be a positive integer")


@dataclass(frozen=True)
class CandidateRouting:
    dirs: tuple
    loads: LoadVector
    score: object  # Fraction or inf
    alpha_prime: Fraction = ZERO
    grid_index: int = 0
    big: tuple = ()  # E'
    long_set: tuple = ()  # E'' subset of E' routed along long paths
    rank: int = 0  # position of E'' in the enumeration


@dataclass(frozen=True)
class AlphaRun:
    alpha_prime: Fraction
    epsilon: Fraction
    big: tuple
    enumerated: int
    feasible: int
    best: Optional[CandidateRouting]


@dataclass(frozen=True)
class SchemeResult:
    best: CandidateRouting
    alpha_star: Fraction
    epsilon_used: Fraction  # epsilon / (1 + 1/N)
    runs: tuple = ()

    @property
    def candidate_count(self) -> int:
        return sum(r.enumerated for r in self.runs)


def big_demand_set(inst: RingInstance, epsilon, alpha_prime) -> tuple:
    """Indices of demands with value strictly above (2/3) eps alpha' cbar."""
    threshold = Fraction(2, 3) * to_rational(epsilon) * to_rational(alpha_prime) * inst.mean_capacity()
    return tuple(k for k, d in enumerate(inst.demands) if d.value > threshold)


def max_long_count(epsilon) -> int:
    """Largest |E''| with |E''| < 3/eps."""
    bound = 3 / to_rational(epsilon)
    return math.ceil(bound) - 1


def subset_count(size: int, epsilon) -> int:
    top = min(size, max_long_count(epsilon))
    return sum(math.comb(size, i) for i in range(top + 1))


def iter_long_sets(big: tuple, epsilon):
    for r in range(min(len(big), max_long_count(epsilon)) + 1):
        yield from itertools.combinations(big, r)


def offset_score(inst: RingInstance, loads: LoadVector, slack: Fraction):
    """Smallest alpha >= 0 with load <= alpha c + slack on every edge."""
    best = ZERO
    for e, load in loads.items():
        excess = load - slack
        if excess <= 0:
            continue
        c = inst.capacity(e)
        if c == 0:
            return INFINITE
        best = max(best, excess / c)
    return best


def run_for_alpha_prime(inst: RingInstance, epsilon, alpha_prime, start_node: int = 0, cache=None) -> AlphaRun:
    """Best candidate over all E'' for one guess alpha'.

    Raises :class:`InfeasibleError` when every candidate is infeasible.
    """
    run = _run(inst, epsilon, alpha_prime, start_node, cache)
    if run.best is None:
        raise InfeasibleError(f"no feasible candidate for alpha' = {run.alpha_prime}")
    return run


def _run(inst, epsilon, alpha_prime, start_node, cache) -> AlphaRun:
    epsilon = to_rational(epsilon)
    alpha_prime = to_rational(alpha_prime)
    slack = epsilon * alpha_prime * inst.mean_capacity()
    big = big_demand_set(inst, epsilon, alpha_prime)
    big_set = set(big)
    small = [k for k in range(inst.m) if k not in big_set]
    residual = inst.with_demands([inst.demands[k] for k in small])
    cache = {} if cache is None else cache

    best, enumerated, feasible = None, 0, 0
    for rank, long_set in enumerate(iter_long_sets(big, epsilon)):
        enumerated += 1
        long_members = set(long_set)
        dirs = [None] * inst.m
        for k in big:
            d = inst.demands[k]
            ld = long_direction(inst.n, d.source, d.target)
            dirs[k] = ld if k in long_members else ld.opposite()
        key = (big, long_set)
        if key not in cache:
            fixed = inst.with_demands([inst.demands[k] for k in big])
            offsets = load_of_integral(fixed, [dirs[k] for k in big])
            try:
                sol = solve_relaxation_with_offsets(residual, offsets)
            except InfeasibleError:
                cache[key] = None
            else:
                rounded = round_fractional(residual, sol.phi, sol.alpha_star, start_node)
                cache[key] = rounded.dirs
        res_dirs = cache[key]
        if res_dirs is None:
            continue
        for k, d in zip(small, res_dirs):
            dirs[k] = d
        loads = load_of_integral(inst, dirs)
        score = offset_score(inst, loads, slack)
        if score == INFINITE:
            continue
        feasible += 1
        if best is None or score < best.score:
            best = CandidateRouting(tuple(dirs), loads, score, alpha_prime, 0, big, long_set, rank)
    return AlphaRun(alpha_prime, epsilon, big, enumerated, feasible, best)


def scaled_score(inst: RingInstance, loads: LoadVector, widen: Fraction):
    """Smallest alpha with load <= alpha (c + widen) on every edge."""
    best = ZERO
    for e, load in loads.items():
        c = inst.capacity(e) + widen
        if c == 0:
            if load > 0:
                return INFINITE
            continue
        best = max(best, load / c)
    return best


def approximation_scheme(inst: RingInstance, params: SchemeParams, start_node: int = 0) -> SchemeResult:
    """Routing with load below alpha_opt (c + eps cbar) on every edge.

    ``eps`` is shrunk to ``eps / (1 + 1/N)`` inside each run so that the
    grid's overshoot of at most ``(1 + 1/N)`` is absorbed.
    """
    alpha_star = solve_relaxation(inst).alpha_star
    N = params.N
    eps_run = params.epsilon / (1 + Fraction(1, N))
    if not inst.demands:
        zero = LoadVector.zeros(inst.n)
        return SchemeResult(CandidateRouting((), zero, ZERO), alpha_star, eps_run, ())
    widen = params.epsilon * inst.mean_capacity()
    cache: dict = {}
    runs, best = [], None
    for i in range(N + 1):
        alpha_i = Fraction(N + i, N) * alpha_star
        run = _run(inst, eps_run, alpha_i, start_node, cache)
        runs.append(run)
        if run.best is None:
            continue
        cand = run.best
        score = scaled_score(inst, cand.loads, widen)
        if best is None or score < best.score:
            best = CandidateRouting(
                cand.dirs, cand.loads, score, alpha_i, i, cand.big, cand.long_set, cand.rank
            )
    if best is None:
        raise InfeasibleError("every candidate overloads a zero-capacity edge")
    return SchemeResult(best, alpha_star, eps_run, tuple(runs))
