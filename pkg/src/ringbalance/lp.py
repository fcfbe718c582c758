"""Fractional relaxations of the ring routing problem, solved exactly.

Demands with the same endpoints contribute to the edge loads only through the
total flow they send forward, so they share one LP column; the optimal total is
then handed back to the individual demands in list order (full copies first),
which leaves at most one of them split.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .ring import (
    BACKWARD,
    FORWARD,
    LoadVector,
    RingInstance,
    covers,
    load_of_fractional,
    to_rational,
)
from .simplex import solve_lp

ZERO = Fraction(0)


class InfeasibleError(Exception):
    """No finite congestion exists: a zero-capacity edge must carry flow."""


@dataclass(frozen=True)
class LpSolution:
    alpha_star: Fraction
    phi: tuple


@dataclass(frozen=True)
class DesignRelaxation:
    gamma: LoadVector
    phi: tuple
    cost: Fraction


def _columns(inst: RingInstance):
    """Group demand indices by (source, target)."""
    groups: dict[tuple[int, int], list[int]] = {}
    for k, d in enumerate(inst.demands):
        groups.setdefault((d.source, d.target), []).append(k)
    return list(groups.items())


def _edge_rows(inst: RingInstance, cols):
    """Coefficients of the group variables and the constant backward load, per edge.

    Load on e equals ``sum_g a[e][g] * phi_g + const[e]``.
    """
    coeffs, consts = [], []
    for e in inst.edges():
        row, const = [], ZERO
        for (s, t), members in cols:
            total = sum((inst.demands[k].value for k in members), ZERO)
            if e.direction is FORWARD:
                row.append(total if covers(inst.n, s, t, FORWARD, e.pos) else ZERO)
            elif covers(inst.n, s, t, BACKWARD, e.pos):
                row.append(-total)
                const += total
            else:
                row.append(ZERO)
        coeffs.append(row)
        consts.append(const)
    return coeffs, consts


def _spread(inst: RingInstance, cols, group_phi) -> tuple:
    phi = [ZERO] * inst.m
    for ((s, t), members), gp in zip(cols, group_phi):
        total = sum((inst.demands[k].value for k in members), ZERO)
        remaining = gp * total
        for k in members:
            d = inst.demands[k].value
            take = min(d, remaining)
            phi[k] = take / d
            remaining -= take
    return tuple(phi)


def solve_relaxation_with_offsets(inst: RingInstance, offsets: Optional[LoadVector] = None) -> LpSolution:
    """Minimize alpha subject to load(phi) + offsets <= alpha * c, 0 <= phi <= 1."""
    n = inst.n
    if offsets is None:
        offsets = LoadVector.zeros(n)
    edges = inst.edges()
    if not inst.demands and all(offsets[e] == 0 for e in edges):
        return LpSolution(ZERO, ())
    cols = _columns(inst)
    coeffs, consts = _edge_rows(inst, cols)
    ng = len(cols)
    A, b = [], []
    for e, row, const in zip(edges, coeffs, consts):
        A.append(row + [-inst.capacity(e)])
        b.append(-offsets[e] - const)
    res = solve_lp([ZERO] * ng + [Fraction(1)], A, b, [Fraction(1)] * ng + [None])
    if res.status == "infeasible":
        raise InfeasibleError("no finite alpha: a zero-capacity edge must carry positive load")
    if res.status != "optimal":
        raise RuntimeError(f"unexpected LP status {res.status}")
    phi = _spread(inst, cols, res.x[:ng])
    alpha = res.x[ng]
    _check_feasible(inst, phi, offsets, alpha)
    return LpSolution(alpha, phi)


def solve_relaxation(inst: RingInstance) -> LpSolution:
    """Exact fractional optimum alpha* and a witnessing assignment."""
    return solve_relaxation_with_offsets(inst, None)


def _check_feasible(inst, phi, offsets, alpha):
    loads = load_of_fractional(inst, phi)
    for e, load in loads.items():
        if load + offsets[e] > alpha * inst.capacity(e):
            raise AssertionError(f"LP witness violates edge {e}")


def solve_design_relaxation(inst: RingInstance, costs: Sequence, alpha_rob) -> DesignRelaxation:
    """Cheapest widening gamma >= 0 admitting a fractional routing.

    ``costs`` lists the 2n widening prices, forward edges first.  Loads must
    satisfy ``load(e) <= (gamma_e + c(e)) * (1 - alpha_rob)``.
    """
    alpha_rob = to_rational(alpha_rob)
    if not 0 <= alpha_rob < 1:
        raise ValueError(f"robustness factor must lie in [0, 1), got {alpha_rob}")
    w = [to_rational(x) for x in costs]
    n = inst.n
    if len(w) != 2 * n:
        raise ValueError(f"expected {2 * n} widening costs, got {len(w)}")
    if any(x < 0 for x in w):
        raise ValueError("widening costs must be non-negative")
    keep = 1 - alpha_rob
    edges = inst.edges()
    cols = _columns(inst)
    coeffs, consts = _edge_rows(inst, cols)
    ng = len(cols)
    A, b = [], []
    for k, (e, row, const) in enumerate(zip(edges, coeffs, consts)):
        gamma_cols = [ZERO] * (2 * n)
        gamma_cols[k] = -keep
        A.append(row + gamma_cols)
        b.append(keep * inst.capacity(e) - const)
    res = solve_lp([ZERO] * ng + w, A, b, [Fraction(1)] * ng + [None] * (2 * n))
    if res.status != "optimal":
        raise RuntimeError(f"unexpected LP status {res.status}")
    phi = _spread(inst, cols, res.x[:ng])
    gamma = res.x[ng:]
    # Any gamma_e with zero price is free; keep the smallest that is feasible.
    loads = load_of_fractional(inst, phi)
    gamma = [
        max(ZERO, loads[e] / keep - inst.capacity(e)) if w[k] == 0 else gamma[k]
        for k, e in enumerate(edges)
    ]
    gv = LoadVector(tuple(gamma[:n]), tuple(gamma[n:]))
    for e in edges:
        if loads[e] > (gv[e] + inst.capacity(e)) * keep:
            raise AssertionError(f"design witness violates edge {e}")
    cost = sum((wk * g for wk, g in zip(w, gamma)), ZERO)
    return DesignRelaxation(gv, phi, cost)
