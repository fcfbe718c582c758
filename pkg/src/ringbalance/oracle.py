"""Brute-force optima and instance generators for cross-checking the solvers."""
from __future__ import annotations

import itertools
import os
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .ring import (
    BACKWARD,
    FORWARD,
    Demand,
    Edge,
    LoadVector,
    RingInstance,
    congestion,
    load_of_integral,
    to_rational,
)

DEFAULT_CAP = 20
ZERO = Fraction(0)


class OracleCapExceeded(RuntimeError):
    pass


def oracle_cap() -> int:
    raw = os.environ.get("RINGBALANCE_ORACLE_CAP")
    return int(raw) if raw else DEFAULT_CAP


@dataclass(frozen=True)
class OracleResult:
    alpha_opt: object  # Fraction, or inf when every routing overloads a zero-capacity edge
    argmin: tuple
    enumerated: int  # routings covered, 2^|E(H)|
    patterns: int  # distinct load patterns evaluated


def _groups(inst: RingInstance):
    """Identical demands (same endpoints and value) give interchangeable routings."""
    groups: dict[tuple, list[int]] = {}
    for k, d in enumerate(inst.demands):
        groups.setdefault((d.source, d.target, d.value), []).append(k)
    return list(groups.values())


def _enumerate(inst: RingInstance, cap: int, score):
    """Minimize ``score(loads)`` over all routings, one load pattern at a time.

    Within a group of identical demands only the number routed forward
    matters; routing the first members forward gives the lexicographically
    smallest routing of each pattern (FORWARD < BACKWARD), and ties between
    patterns keep the smaller routing.
    """
    groups = _groups(inst)
    patterns = 1
    for g in groups:
        patterns *= len(g) + 1
    if patterns > 2 ** cap:
        raise OracleCapExceeded(f"{patterns} load patterns exceed the cap 2^{cap}")
    n2 = 2 * inst.n
    base = [ZERO] * n2  # every demand routed backward
    diff = []  # change when one member of the group switches to forward
    for g in groups:
        d = inst.demands[g[0]]
        one = RingInstance(inst.n, inst.cap_forward, inst.cap_backward, (d,))
        lf = load_of_integral(one, (FORWARD,))
        lb = load_of_integral(one, (BACKWARD,))
        lf = list(lf.forward + lf.backward)
        lb = list(lb.forward + lb.backward)
        for i in range(n2):
            base[i] += len(g) * lb[i]
        diff.append([(i, f - b) for i, (f, b) in enumerate(zip(lf, lb)) if f != b])

    def routing(counts):
        dirs = [BACKWARD] * inst.m
        for g, c in zip(groups, counts):
            for k in g[:c]:
                dirs[k] = FORWARD
        return tuple(dirs)

    best, best_dirs = None, None
    for counts in itertools.product(*[range(len(g), -1, -1) for g in groups]):
        acc = list(base)
        for c, dg in zip(counts, diff):
            if c:
                for i, delta in dg:
                    acc[i] += c * delta
        val = score(LoadVector(tuple(acc[: inst.n]), tuple(acc[inst.n:])))
        if best is None or val < best:
            best, best_dirs = val, routing(counts)
        elif val == best:
            best_dirs = min(best_dirs, routing(counts))
    return best, best_dirs, patterns


def brute_force_alpha_opt(inst: RingInstance, cap: int | None = None) -> OracleResult:
    """Exact integral optimum by exhaustive enumeration."""
    cap = oracle_cap() if cap is None else cap
    best, dirs, patterns = _enumerate(inst, cap, lambda loads: congestion(inst, loads))
    return OracleResult(best, dirs, 2 ** inst.m, patterns)


def minimal_widening(inst: RingInstance, loads: LoadVector, alpha_rob: Fraction) -> LoadVector:
    keep = 1 - alpha_rob
    fw = tuple(max(ZERO, l / keep - c) for l, c in zip(loads.forward, inst.cap_forward))
    bw = tuple(max(ZERO, l / keep - c) for l, c in zip(loads.backward, inst.cap_backward))
    return LoadVector(fw, bw)


def widening_cost(gamma: LoadVector, costs: Sequence[Fraction]) -> Fraction:
    vals = list(gamma.forward) + list(gamma.backward)
    return sum((g * w for g, w in zip(vals, costs)), ZERO)


@dataclass(frozen=True)
class DesignOracleResult:
    cost: Fraction
    gamma: LoadVector
    dirs: tuple


def brute_force_design_opt(inst: RingInstance, costs, alpha_rob, cap: int | None = None) -> DesignOracleResult:
    """Cheapest integral widening: every routing with its pointwise-minimal gamma."""
    cap = oracle_cap() if cap is None else cap
    alpha_rob = to_rational(alpha_rob)
    if not 0 <= alpha_rob < 1:
        raise ValueError("robustness factor must lie in [0, 1)")
    costs = [to_rational(w) for w in costs]
    if len(costs) != 2 * inst.n:
        raise ValueError(f"expected {2 * inst.n} widening costs, got {len(costs)}")

    def cost_of(loads):
        return widening_cost(minimal_widening(inst, loads, alpha_rob), costs)

    cost, dirs, _ = _enumerate(inst, cap, cost_of)
    gamma = minimal_widening(inst, load_of_integral(inst, dirs), alpha_rob)
    return DesignOracleResult(cost, gamma, dirs)


def random_instance(
    seed,
    n: int,
    m: int,
    cap_range=(0, 4),
    demand_range=(1, 3),
    max_den: int = 4,
    zero_caps: bool = False,
) -> RingInstance:
    """Deterministic random instance; rationals have denominators <= max_den.

    Capacities are strictly positive unless ``zero_caps`` is set.
    """
    if n < 2 or m < 0:
        raise ValueError("need n >= 2 and m >= 0")
    rng = random.Random(str(seed))

    def rat(lo, hi, positive=False):
        den = rng.randint(1, max_den)
        lo_num = int(Fraction(lo) * den)
        hi_num = int(Fraction(hi) * den)
        if positive:
            lo_num = max(lo_num, 1)
        return Fraction(rng.randint(lo_num, max(lo_num, hi_num)), den)

    caps_f = [rat(*cap_range, positive=not zero_caps) for _ in range(n)]
    caps_b = [rat(*cap_range, positive=not zero_caps) for _ in range(n)]
    demands = []
    for _ in range(m):
        s = rng.randrange(n)
        t = (s + rng.randrange(1, n)) % n
        demands.append(Demand(s, t, rat(*demand_range, positive=True)))
    return RingInstance(n, caps_f, caps_b, tuple(demands))


def random_corpus(count: int, seed: int = 0, n_range=(2, 6), m_range=(0, 8), **kw) -> list[RingInstance]:
    rng = random.Random(seed)
    out = []
    for k in range(count):
        n = rng.randint(*n_range)
        m = rng.randint(*m_range)
        out.append(random_instance(f"{seed}:{k}", n, m, **kw))
    return out


@dataclass(frozen=True)
class TightExample:
    """Instance on which greedy rounding nearly attains the 3D/2 error.

    Seven nodes; the cut {e_prime, e_double_prime} separates {0, 1, 2} from
    {3, 4, 5, 6} and carries exactly k+1 unit demands.  Four demands end up
    split in the (unique) LP optimum, visited from ``start_node`` in the
    order u, v, w, r; the greedy rule routes u forward, v backward, w
    forward and r backward, which puts load 2 on ``e_prime``.
    """

    instance: RingInstance
    k: int
    eps: Fraction
    start_node: int
    e_prime: Edge
    e_double_prime: Edge
    split_demands: dict  # name -> demand index (u, v, w, r)

    @property
    def alpha_opt(self) -> Fraction:
        k, eps = self.k, self.eps
        return Fraction(k + 1) / (k + Fraction(1, 2) - k * eps)

    def error(self, loads: LoadVector, alpha_opt=None) -> Fraction:
        """(load(e') - alpha_opt c(e')) / D with D = 1."""
        a = self.alpha_opt if alpha_opt is None else alpha_opt
        return loads[self.e_prime] - a * self.instance.capacity(self.e_prime)


def tight_example(k: int, eps) -> TightExample:
    eps = to_rational(eps)
    if not isinstance(k, int) or k < 3:
        raise ValueError("tight example needs an integer k >= 3")
    if not 0 < eps <= Fraction(1, 2 * (k + 2)):
        # beyond this bound routing one demand over e' beats the formula
        raise ValueError(f"eps must lie in (0, 1/(2(k+2))], got {eps}")
    ke = k * eps
    a = min(ke / 2, Fraction(1, 4 * (k + 1)))  # backward share of v
    b = ke - a  # backward share of r
    half = Fraction(1, 2)
    bulk = k - 2
    big = Fraction(4 * k)
    # positions 0..6; forward edge i: i->i+1, backward edge i: i+1->i
    cap_f = [1 - b + bulk, big, k + half - ke, big, big, Fraction(1), a]
    cap_b = [big, Fraction(1), 1 - a, Fraction(0), b, big, half + ke]
    demands = [
        Demand(0, 4, 1),  # r
        Demand(1, 5, 1),  # u
        Demand(2, 6, 1),  # v
        Demand(3, 0, 1),  # w
    ] + [Demand(0, 3, 1)] * bulk
    inst = RingInstance(7, cap_f, cap_b, tuple(demands))
    return TightExample(
        inst, k, eps, start_node=1, e_prime=Edge(BACKWARD, 6), e_double_prime=Edge(FORWARD, 2),
        split_demands={"u": 1, "v": 2, "w": 3, "r": 0},
    )


def random_cycle_of_circuits(
    seed,
    circuits: int,
    max_nodes: int = 5,
    demands: int = 3,
    cap_range=(0, 4),
    demand_range=(1, 2),
    max_den: int = 2,
):
    """Deterministic random cycle of circuits with integer node labels.

    Circuit ``i`` holds ``a_i``, some interior nodes, ``a_{i+1}`` and more
    interior nodes, in that cyclic order; either stretch may be empty.
    """
    from .reduction import Circuit, CycleOfCircuits

    if circuits < 2 or max_nodes < 2:
        raise ValueError("need at least 2 circuits of at least 2 nodes")
    rng = random.Random(f"cycle:{seed}")

    def rat(lo, hi):
        den = rng.randint(1, max_den)
        return Fraction(rng.randint(int(lo * den), int(hi * den)), den)

    common = list(range(circuits))
    label = circuits
    out = []
    for i in range(circuits):
        interior = rng.randint(0, max_nodes - 2)
        split = rng.randint(0, interior)
        first = list(range(label, label + split))
        second = list(range(label + split, label + interior))
        label += interior
        nodes = [common[i]] + first + [common[(i + 1) % circuits]] + second
        out.append(Circuit(tuple(nodes), tuple(rat(*cap_range) for _ in nodes)))
    all_nodes = list(range(label))
    dem = []
    for _ in range(demands):
        s, t = rng.sample(all_nodes, 2)
        dem.append(Demand(s, t, rat(*demand_range) or Fraction(1)))
    return CycleOfCircuits(tuple(out), tuple(common), tuple(dem))
