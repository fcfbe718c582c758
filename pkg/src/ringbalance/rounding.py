"""Uncrossing and greedy unsplitting of a fractional ring routing.

After uncrossing no two split demands are parallel, so rounding the split
demands changes the load of any edge by plus or minus a cyclic interval sum of
the per-demand load shifts ``w_i``.  Choosing each ``w_i`` greedily to keep all
prefix sums in ``(-D/2, D/2]`` bounds every such interval sum by ``3D/2``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .lp import solve_relaxation
from .ring import (
    BACKWARD,
    FORWARD,
    Demand,
    Edge,
    LoadVector,
    RingInstance,
    is_split,
    load_of_integral,
)

ZERO = Fraction(0)
HALF = Fraction(1, 2)


class ContractError(ValueError):
    pass


def _cyclic_order(n: int, a: int, b: int, c: int, d: int) -> bool:
    """Non-strict cyclic order a, b, c, d going forward from a.

    A point equal to ``a`` may sit at either end of the lap.
    """
    def places(x):
        o = (x - a) % n
        return (0, n) if o == 0 else (o,)

    return any(
        pb <= pc <= pd
        for pb in places(b)
        for pc in places(c)
        for pd in places(d)
    )


def parallel_orientation(n: int, f1: Demand, f2: Demand):
    """Long directions (long_f1, long_f2) if the demands are parallel, else None.

    Parallel means the endpoints appear in the cyclic order s1, t1, t2, s2 (or
    the same with the roles swapped).  The long f_i-path is the one that
    contains both endpoints of the other demand.
    """
    s1, t1, s2, t2 = f1.source, f1.target, f2.source, f2.target
    if _cyclic_order(n, s1, t1, t2, s2):
        return BACKWARD, FORWARD
    if _cyclic_order(n, s2, t2, t1, s1):
        return FORWARD, BACKWARD
    return None


def is_parallel(inst_or_n, f1: Demand, f2: Demand) -> bool:
    n = inst_or_n if isinstance(inst_or_n, int) else inst_or_n.n
    return parallel_orientation(n, f1, f2) is not None


def uncross_step(inst: RingInstance, phi: Sequence[Fraction], i: int, j: int) -> tuple:
    """Move min(x_i, x_j) off both long paths; one of the demands becomes unsplit."""
    if i == j:
        raise ContractError("uncross_step needs two distinct demands")
    if not (is_split(phi[i]) and is_split(phi[j])):
        raise ContractError(f"demands {i} and {j} must both be split")
    fi, fj = inst.demands[i], inst.demands[j]
    orient = parallel_orientation(inst.n, fi, fj)
    if orient is None:
        raise ContractError(f"demands {i} and {j} are not parallel")

    def long_flow(k, direction):
        p = phi[k] if direction is FORWARD else 1 - phi[k]
        return p * inst.demands[k].value

    li, lj = orient
    amount = min(long_flow(i, li), long_flow(j, lj))
    out = list(phi)
    for k, direction in ((i, li), (j, lj)):
        delta = amount / inst.demands[k].value
        out[k] = phi[k] - delta if direction is FORWARD else phi[k] + delta
    return tuple(out)


def find_parallel_split_pair(inst: RingInstance, phi: Sequence[Fraction]):
    split = [k for k, p in enumerate(phi) if is_split(p)]
    for a, i in enumerate(split):
        for j in split[a + 1:]:
            if parallel_orientation(inst.n, inst.demands[i], inst.demands[j]) is not None:
                return i, j
    return None


def uncross_all(inst: RingInstance, phi: Sequence[Fraction]) -> tuple[tuple, list]:
    """Uncross until no two split demands are parallel.

    Returns the new assignment and the list of (i, j) pairs uncrossed, lowest
    pair first after each rescan.
    """
    phi = tuple(phi)
    steps = []
    while True:
        pair = find_parallel_split_pair(inst, phi)
        if pair is None:
            return phi, steps
        phi = uncross_step(inst, phi, *pair)
        steps.append(pair)
        if len(steps) > inst.m:
            raise AssertionError("uncrossing exceeded |E(H)| steps")


@dataclass(frozen=True)
class GreedyTrace:
    dirs: tuple
    order: tuple  # split demand indices in visiting order
    weights: tuple  # chosen w_i, aligned with order
    prefixes: tuple
    D: Fraction  # max value over split demands (0 if none)


def greedy_trace(inst: RingInstance, phi: Sequence[Fraction], start_node: int = 0) -> GreedyTrace:
    n = inst.n
    split = [k for k, p in enumerate(phi) if is_split(p)]
    sources = [inst.demands[k].source for k in split]
    if len(set(sources)) != len(sources):
        raise ContractError("more than one split demand shares a source; uncross first")
    pair = find_parallel_split_pair(inst, phi)
    if pair is not None:
        raise ContractError(f"split demands {pair} are parallel; uncross first")
    if not 0 <= start_node < n:
        raise ContractError(f"start node {start_node} out of range")

    dirs = [FORWARD if p == 1 else BACKWARD for p in phi]
    order = sorted(split, key=lambda k: (inst.demands[k].source - start_node) % n)
    D = max((inst.demands[k].value for k in split), default=ZERO)
    prefix, weights, prefixes = ZERO, [], []
    for k in order:
        d = inst.demands[k].value
        x, y = phi[k] * d, (1 - phi[k]) * d
        if prefix + y <= D / 2:
            dirs[k], w = FORWARD, y
        else:
            dirs[k], w = BACKWARD, -x
        prefix += w
        weights.append(w)
        prefixes.append(prefix)
    return GreedyTrace(tuple(dirs), tuple(order), tuple(weights), tuple(prefixes), D)


def unsplit_greedy(inst: RingInstance, phi: Sequence[Fraction], start_node: int = 0) -> tuple:
    return greedy_trace(inst, phi, start_node).dirs


@dataclass(frozen=True)
class CertificateRow:
    edge: Edge
    capacity: Fraction
    load: Fraction
    bound: Fraction  # alpha* c(e) + 3/2 D
    slack: Fraction


@dataclass(frozen=True)
class Certificate:
    alpha_star: Fraction
    D: Fraction  # max demand value
    D_split: Fraction  # max split value after uncrossing
    rows: tuple
    holds: bool  # load < alpha* c + 3/2 D on every edge
    sharp_holds: bool  # same with D_split (<= alpha* c when nothing was split)


def certify(inst: RingInstance, loads: LoadVector, alpha_star: Fraction, D_split: Fraction) -> Certificate:
    D = inst.max_demand()
    rows = []
    holds = sharp = True
    for e, load in loads.items():
        c = inst.capacity(e)
        bound = alpha_star * c + Fraction(3, 2) * D
        rows.append(CertificateRow(e, c, load, bound, bound - load))
        # With no demands every load is 0 and the bound is vacuous.
        if inst.demands and not load < bound:
            holds = False
        base = alpha_star * c
        if D_split:
            sharp = sharp and load < base + Fraction(3, 2) * D_split
        else:
            sharp = sharp and load <= base
    return Certificate(alpha_star, D, D_split, tuple(rows), holds, sharp)


@dataclass(frozen=True)
class RoutingResult:
    dirs: tuple
    loads: LoadVector
    alpha_star: Fraction
    phi_lp: tuple
    phi_uncrossed: tuple
    uncross_steps: tuple
    trace: GreedyTrace
    certificate: Certificate


def round_fractional(inst: RingInstance, phi, alpha_star, start_node: int = 0) -> RoutingResult:
    """Uncross then greedily unsplit a feasible fractional assignment."""
    uncrossed, steps = uncross_all(inst, phi)
    trace = greedy_trace(inst, uncrossed, start_node)
    loads = load_of_integral(inst, trace.dirs)
    cert = certify(inst, loads, alpha_star, trace.D)
    return RoutingResult(trace.dirs, loads, alpha_star, tuple(phi), uncrossed, tuple(steps), trace, cert)


def balance_route(inst: RingInstance, start_node: int = 0) -> RoutingResult:
    """LP relaxation, uncrossing, greedy unsplitting.

    Raises :class:`~ringbalance.lp.InfeasibleError` when no finite congestion
    exists.
    """
    sol = solve_relaxation(inst)
    return round_fractional(inst, sol.phi, sol.alpha_star, start_node)
