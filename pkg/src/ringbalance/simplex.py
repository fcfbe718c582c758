"""Exact two-phase bounded-variable primal simplex over Fractions.

Solves ``min c.x  s.t.  A x <= b,  0 <= x <= upper`` where ``upper[j]`` may be
``None`` (unbounded above).  Variable upper bounds are handled implicitly, so
the tableau only has one row per inequality.  Pivoting follows Bland's rule
(smallest eligible index enters, smallest basic index leaves on ties), which
rules out cycling.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

ZERO = Fraction(0)
ONE = Fraction(1)


class SimplexError(RuntimeError):
    pass


@dataclass
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: Optional[list] = None
    objective: Optional[Fraction] = None
    iterations: int = 0


class _Tableau:
    def __init__(self, rows, rhs, upper, basis):
        self.T = rows  # B^-1 [A | I | art]
        self.xB = rhs
        self.upper = upper
        self.basis = basis
        self.at_upper = [False] * len(upper)
        self.fixed = [False] * len(upper)
        self.iterations = 0

    def value(self, j):
        return self.upper[j] if self.at_upper[j] else ZERO

    def reduced_costs(self, cost):
        d = list(cost)
        for i, b in enumerate(self.basis):
            cb = cost[b]
            if cb:
                row = self.T[i]
                for j, a in enumerate(row):
                    if a:
                        d[j] -= cb * a
        return d

    def pivot(self, r, j, d):
        row = self.T[r]
        piv = row[j]
        if piv != 1:
            inv = 1 / piv
            row = [a * inv for a in row]
            self.T[r] = row
        nz = [(k, a) for k, a in enumerate(row) if a]
        for i, other in enumerate(self.T):
            if i == r:
                continue
            f = other[j]
            if f:
                for k, a in nz:
                    other[k] -= f * a
        f = d[j]
        if f:
            for k, a in nz:
                d[k] -= f * a
        self.basis[r] = j

    def run(self, cost, max_iter):
        d = self.reduced_costs(cost)
        nvars = len(self.upper)
        in_basis = set(self.basis)
        while True:
            if self.iterations > max_iter:
                raise SimplexError("iteration limit exceeded")
            enter = None
            for j in range(nvars):
                if j in in_basis or self.fixed[j]:
                    continue
                if (d[j] < 0 and not self.at_upper[j]) or (d[j] > 0 and self.at_upper[j]):
                    enter = j
                    break
            if enter is None:
                return "optimal"
            self.iterations += 1
            sgn = -1 if self.at_upper[enter] else 1
            theta = self.upper[enter]  # bound flip distance; None = infinite
            leave, leave_to_upper = None, False
            for i, b in enumerate(self.basis):
                a = self.T[i][enter]
                if not a:
                    continue
                rate = -sgn * a
                if rate < 0:
                    lim, to_up = self.xB[i] / -rate, False
                else:
                    ub = self.upper[b]
                    if ub is None:
                        continue
                    lim, to_up = (ub - self.xB[i]) / rate, True
                better = theta is None or lim < theta
                if not better and lim == theta and leave is not None and b < self.basis[leave]:
                    better = True
                if better:
                    theta, leave, leave_to_upper = lim, i, to_up
            if theta is None:
                return "unbounded"
            if theta:
                for i in range(len(self.basis)):
                    a = self.T[i][enter]
                    if a:
                        self.xB[i] -= sgn * theta * a
            if leave is None:
                self.at_upper[enter] = not self.at_upper[enter]
                continue
            new_val = self.value(enter) + sgn * theta
            old = self.basis[leave]
            self.pivot(leave, enter, d)
            in_basis.discard(old)
            in_basis.add(enter)
            self.at_upper[old] = leave_to_upper
            self.at_upper[enter] = False
            self.xB[leave] = new_val


def solve_lp(
    c: Sequence,
    A: Sequence[Sequence],
    b: Sequence,
    upper: Sequence,
    max_iter: int = 100_000,
) -> LPResult:
    """Minimize ``c.x`` subject to ``A x <= b`` and ``0 <= x <= upper``."""
    nv = len(c)
    m = len(A)
    c = [Fraction(v) for v in c]
    upper = [None if u is None else Fraction(u) for u in upper]
    if len(upper) != nv:
        raise ValueError("upper must have one entry per variable")

    neg_rows = [i for i in range(m) if b[i] < 0]
    n_art = len(neg_rows)
    ncol = nv + m + n_art
    rows, rhs, basis = [], [], []
    art_of_row = {i: nv + m + k for k, i in enumerate(neg_rows)}
    for i in range(m):
        row = [Fraction(a) for a in A[i]] + [ZERO] * (m + n_art)
        if len(A[i]) != nv:
            raise ValueError(f"row {i} has {len(A[i])} entries, expected {nv}")
        row[nv + i] = ONE
        bi = Fraction(b[i])
        if i in art_of_row:
            row = [-a for a in row]
            bi = -bi
            row[art_of_row[i]] = ONE
            basis.append(art_of_row[i])
        else:
            basis.append(nv + i)
        rows.append(row)
        rhs.append(bi)
    tab = _Tableau(rows, rhs, upper + [None] * (m + n_art), basis)

    if n_art:
        phase1 = [ZERO] * (nv + m) + [ONE] * n_art
        tab.run(phase1, max_iter)
        infeas = sum((tab.xB[i] for i, bv in enumerate(tab.basis) if bv >= nv + m), ZERO)
        if infeas > 0:
            return LPResult("infeasible", iterations=tab.iterations)
        for k in range(nv + m, ncol):
            tab.upper[k] = ZERO
            tab.fixed[k] = True
            tab.at_upper[k] = False

    status = tab.run(c + [ZERO] * (m + n_art), max_iter)
    if status != "optimal":
        return LPResult(status, iterations=tab.iterations)
    x = [tab.value(j) for j in range(nv)]
    for i, bv in enumerate(tab.basis):
        if bv < nv:
            x[bv] = tab.xB[i]
    obj = sum((cj * xj for cj, xj in zip(c, x)), ZERO)
    return LPResult("optimal", x, obj, tab.iterations)
