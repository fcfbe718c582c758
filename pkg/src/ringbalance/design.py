"""Capacity widening with a robustness reserve, rounded to an unsplittable routing.

The fractional design LP is rounded exactly like the congestion LP.  Rounding
can push a load above the widened capacity by less than ``3D/2``; the widening
is then raised pointwise to the smallest value that absorbs the integral load,
so the output is always feasible at the requested reserve.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .lp import solve_design_relaxation
from .ring import LoadVector, RingInstance, to_rational
from .rounding import RoutingResult, round_fractional

ZERO = Fraction(0)


@dataclass(frozen=True)
class DesignResult:
    gamma: LoadVector
    dirs: tuple
    cost: Fraction
    lp_cost: Fraction
    lp_gamma: LoadVector
    loads: LoadVector
    overhead: Fraction  # cost - lp_cost
    overhead_bound: Fraction  # 3D/2 * sum(w), bound before the lift
    lift_bound: Fraction  # 3D/2 * sum(w) / (1 - alpha), what the lift can cost
    alpha_rob: Fraction
    rounding: RoutingResult

    def feasible(self, inst: RingInstance) -> bool:
        keep = 1 - self.alpha_rob
        return all(self.loads[e] <= (self.gamma[e] + inst.capacity(e)) * keep for e in inst.edges())


def _check_costs(inst: RingInstance, w) -> list:
    w = [to_rational(x) for x in w]
    if len(w) != 2 * inst.n:
        raise ValueError(f"expected {2 * inst.n} widening costs, got {len(w)}")
    for k, x in enumerate(w):
        if x < 0:
            raise ValueError(f"costs[{k}]: widening cost must be non-negative, got {x}")
    return w


def design_route(inst: RingInstance, w: Sequence, alpha_rob, start_node: int = 0) -> DesignResult:
    alpha_rob = to_rational(alpha_rob)
    if not 0 <= alpha_rob < 1:
        raise ValueError(f"robustness factor must lie in [0, 1), got {alpha_rob}")
    w = _check_costs(inst, w)
    keep = 1 - alpha_rob
    relax = solve_design_relaxation(inst, w, alpha_rob)
    # Rounding only needs a congestion value for its certificate; report
    # loads against the widened network at alpha = 1.
    widened = inst.with_capacities(
        [(relax.gamma.forward[i] + inst.cap_forward[i]) * keep for i in range(inst.n)],
        [(relax.gamma.backward[i] + inst.cap_backward[i]) * keep for i in range(inst.n)],
    )
    rounded = round_fractional(widened, relax.phi, Fraction(1), start_node)
    loads = rounded.loads

    def lift(gammas, caps, loads_dir):
        return tuple(max(g, l / keep - c) for g, c, l in zip(gammas, caps, loads_dir))

    gamma = LoadVector(
        lift(relax.gamma.forward, inst.cap_forward, loads.forward),
        lift(relax.gamma.backward, inst.cap_backward, loads.backward),
    )
    gvals = list(gamma.forward) + list(gamma.backward)
    cost = sum((g * x for g, x in zip(gvals, w)), ZERO)
    total_w = sum(w, ZERO)
    rounding_gap = Fraction(3, 2) * inst.max_demand() * total_w
    result = DesignResult(
        gamma=gamma,
        dirs=rounded.dirs,
        cost=cost,
        lp_cost=relax.cost,
        lp_gamma=relax.gamma,
        loads=loads,
        overhead=cost - relax.cost,
        overhead_bound=rounding_gap,
        lift_bound=rounding_gap / keep,
        alpha_rob=alpha_rob,
        rounding=rounded,
    )
    if not result.feasible(inst):
        raise AssertionError("lifted widening does not absorb the integral load")
    return result
