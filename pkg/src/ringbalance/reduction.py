"""Reduce a cycle of directed circuits to a bidirected ring.

Circuits ``C_0, ..., C_{n-1}`` are listed in cyclic order and common node
``a_i`` is shared by ``C_{i-1}`` and ``C_i``.  Ring node ``i`` is ``a_i``; the
forward ring edge at position ``i`` is the arc of ``C_i`` running
``a_i -> a_{i+1}`` and the backward edge is the arc running back.

Each demand ``v1 -> v2`` first has to leave ``v1`` towards its nearest common
node ``a1`` and finally enter ``v2`` from the common node ``a2`` nearest
before it.  Those stretches are forced, so their capacity is consumed up front
and the demand becomes ``a1 -> a2`` on the ring.  A demand whose only path
never reaches a second common node is consumed entirely.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Optional, Sequence

from .ring import (
    BACKWARD,
    FORWARD,
    Demand,
    Direction,
    Edge,
    InstanceFormatError,
    LoadVector,
    RingInstance,
    load_of_integral,
    path_edges,
    to_rational,
)

ZERO = Fraction(0)
Node = Hashable
EdgeId = tuple  # (circuit index, j): the edge leaving nodes[j] of that circuit


class TopologyError(ValueError):
    pass


@dataclass(frozen=True)
class Circuit:
    nodes: tuple  # v_0 -> v_1 -> ... -> v_{k-1} -> v_0
    caps: tuple  # caps[j] on v_j -> v_{j+1}

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "caps", tuple(to_rational(c) for c in self.caps))

    def edges(self) -> list:
        """(tail, head) pairs in circuit order."""
        k = len(self.nodes)
        return [(self.nodes[j], self.nodes[(j + 1) % k]) for j in range(k)]


@dataclass(frozen=True)
class CycleOfCircuits:
    circuits: tuple
    common_nodes: tuple  # common_nodes[i] is shared by circuits i-1 and i
    demands: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "circuits", tuple(self.circuits))
        object.__setattr__(self, "common_nodes", tuple(self.common_nodes))
        object.__setattr__(self, "demands", tuple(self.demands))

    @property
    def n(self) -> int:
        return len(self.circuits)

    def capacities(self) -> dict:
        """EdgeId -> capacity.  Edge ids keep parallel edges of two circuits apart."""
        return {(i, j): cap for i, c in enumerate(self.circuits) for j, cap in enumerate(c.caps)}

    def endpoints(self, eid: EdgeId) -> tuple:
        i, j = eid
        nodes = self.circuits[i].nodes
        return nodes[j], nodes[(j + 1) % len(nodes)]

    def nodes(self) -> set:
        return {v for c in self.circuits for v in c.nodes}

    def successors(self) -> dict:
        """node -> [(head, EdgeId)]"""
        succ: dict = {}
        for eid in self.capacities():
            tail, head = self.endpoints(eid)
            succ.setdefault(tail, []).append((head, eid))
        return succ

    def arc_edges(self, e: Edge) -> list:
        """Supply edges making up the arc that ring edge ``e`` stands for."""
        i = e.pos
        c = self.circuits[i]
        a, b = self.common_nodes[i], self.common_nodes[(i + 1) % self.n]
        k = len(c.nodes)
        start = c.nodes.index(a)
        split = (c.nodes.index(b) - start) % k
        steps = range(split) if e.direction is FORWARD else range(split, k)
        return [(i, (start + j) % k) for j in steps]


def derive_common_nodes(circuits: Sequence[Circuit]) -> tuple:
    n = len(circuits)
    if n == 2:
        shared = [v for v in circuits[0].nodes if v in set(circuits[1].nodes)]
        if len(shared) != 2:
            raise TopologyError(f"two circuits must share exactly two nodes, found {len(shared)}")
        return tuple(shared)
    out = []
    for i in range(n):
        shared = set(circuits[i - 1].nodes) & set(circuits[i].nodes)
        if len(shared) != 1:
            raise TopologyError(f"circuits {(i - 1) % n} and {i} share {len(shared)} nodes, expected 1")
        out.append(shared.pop())
    return tuple(out)


def validate_cycle(g: CycleOfCircuits) -> list[str]:
    errors = []
    n = g.n
    if n < 2:
        return [f"circuits: need at least 2 circuits, got {n}"]
    if len(g.common_nodes) != n:
        return [f"common_nodes: expected {n} entries, got {len(g.common_nodes)}"]
    for i, c in enumerate(g.circuits):
        if len(c.nodes) < 2:
            errors.append(f"circuits[{i}].nodes: a circuit needs at least 2 nodes")
        if len(set(c.nodes)) != len(c.nodes):
            errors.append(f"circuits[{i}].nodes: repeated node")
        if len(c.caps) != len(c.nodes):
            errors.append(f"circuits[{i}].caps: expected {len(c.nodes)} entries, got {len(c.caps)}")
        for j, cap in enumerate(c.caps):
            if cap < 0:
                errors.append(f"circuits[{i}].caps[{j}]: negative capacity {cap}")
    if errors:
        return errors
    if len(set(g.common_nodes)) != n:
        errors.append("common_nodes: common nodes must be distinct")
    for i, a in enumerate(g.common_nodes):
        for j in ((i - 1) % n, i):
            if a not in g.circuits[j].nodes:
                errors.append(f"common_nodes[{i}]: {a!r} is not on circuit {j}")
    membership: dict = {}
    for i, c in enumerate(g.circuits):
        for v in c.nodes:
            membership.setdefault(v, []).append(i)
    common = set(g.common_nodes)
    for v, owners in membership.items():
        want = 2 if v in common else 1
        if len(owners) != want:
            errors.append(f"circuits: node {v!r} lies on {len(owners)} circuits, expected {want}")
    for k, d in enumerate(g.demands):
        for attr in ("source", "target"):
            if getattr(d, attr) not in membership:
                errors.append(f"demands[{k}].{attr}: unknown node {getattr(d, attr)!r}")
        if d.source == d.target:
            errors.append(f"demands[{k}]: degenerate demand (source == target)")
        if d.value <= 0:
            errors.append(f"demands[{k}].value: demand value must be positive, got {d.value}")
    return errors


# -- distances and forced stretches -------------------------------------------


def _bfs(succ: dict, start) -> dict:
    """Shortest directed paths from ``start``: node -> (predecessor, EdgeId)."""
    pred = {start: None}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for w, eid in succ.get(v, ()):
            if w not in pred:
                pred[w] = (v, eid)
                queue.append(w)
    return pred


def _path_to(pred: dict, target) -> tuple:
    """(nodes, edge ids) of the stored shortest path ending at ``target``."""
    nodes, edges = [target], []
    while pred[nodes[-1]] is not None:
        v, eid = pred[nodes[-1]]
        nodes.append(v)
        edges.append(eid)
    return nodes[::-1], tuple(edges[::-1])


def _dist(pred: dict, target) -> int:
    return len(_path_to(pred, target)[1])


def _nearest(g: CycleOfCircuits, dist_of) -> int:
    """Index of the common node minimizing ``dist_of``; ties go to the later index.

    Ties cannot occur for directed distances inside one circuit, but the rule
    keeps the choice well defined.
    """
    best = None
    for i, a in enumerate(g.common_nodes):
        d = dist_of(a)
        if best is None or d <= best[0]:
            best = (d, i)
    return best[1]


@dataclass(frozen=True)
class Dropped:
    path: tuple  # supply edges of the unique v1 -> v2 path


@dataclass(frozen=True)
class Mapped:
    index: int  # demand index in the ring instance
    prefix: tuple  # supply edges v1 -> a1
    suffix: tuple  # supply edges a2 -> v2


@dataclass(frozen=True)
class ReductionOutput:
    source: CycleOfCircuits
    ring: RingInstance
    mapping: tuple  # Dropped | Mapped per original demand
    residual: dict  # supply edge -> capacity after decrements
    decrements: dict  # supply edge -> total decrement
    infeasible: bool
    negative_edges: tuple = ()  # first edges driven negative, in decrement order
    first_negative_at: Optional[int] = None  # demand index that first went negative


def reduce_to_ring(g: CycleOfCircuits) -> ReductionOutput:
    errors = validate_cycle(g)
    if errors:
        raise TopologyError("; ".join(errors))
    succ = g.successors()
    caps = g.capacities()
    residual = dict(caps)
    dec = {e: ZERO for e in caps}
    index_of = {a: i for i, a in enumerate(g.common_nodes)}
    bfs_from = {}

    def pred_from(v):
        if v not in bfs_from:
            bfs_from[v] = _bfs(succ, v)
        return bfs_from[v]

    mapping, ring_demands = [], []
    negative, first_bad = [], None
    for k, d in enumerate(g.demands):
        v1, v2 = d.source, d.target
        p1 = pred_from(v1)
        i1 = _nearest(g, lambda a: _dist(p1, a))
        i2 = _nearest(g, lambda a: _dist(pred_from(a), v2))
        a1, a2 = g.common_nodes[i1], g.common_nodes[i2]
        head_nodes, head = _path_to(p1, a1)
        _, tail = _path_to(pred_from(a2), v2)
        if v2 in head_nodes:
            used = head[: head_nodes.index(v2)]
            entry = Dropped(used)
        elif a1 == a2:
            # both stretches meet at one common node: again a single path
            used = head + tail
            entry = Dropped(used)
        else:
            used = head + tail
            entry = Mapped(len(ring_demands), head, tail)
            ring_demands.append(Demand(index_of[a1], index_of[a2], d.value))
        for e in used:
            residual[e] -= d.value
            dec[e] += d.value
            if residual[e] < 0 and e not in negative:
                negative.append(e)
                if first_bad is None:
                    first_bad = k
        mapping.append(entry)

    ring_caps = {}
    for e in RingInstance(g.n, [0] * g.n, [0] * g.n).edges():
        ring_caps[e] = min(residual[a] for a in g.arc_edges(e))
    ring = RingInstance(
        g.n,
        [ring_caps[Edge(FORWARD, i)] for i in range(g.n)],
        [ring_caps[Edge(BACKWARD, i)] for i in range(g.n)],
        tuple(ring_demands),
    )
    return ReductionOutput(g, ring, tuple(mapping), residual, dec, bool(negative), tuple(negative), first_bad)


# -- lifting --------------------------------------------------------------------


@dataclass(frozen=True)
class LiftedRouting:
    paths: tuple  # supply-edge tuples, one per original demand
    loads: dict  # supply edge -> load
    ring_loads: LoadVector
    feasible: bool  # loads within original capacities
    ring_feasible: bool  # ring loads within ring capacities (and no negative residual)
    identity_holds: bool  # load(e) == ring load of its arc + decrement(e)


def lift_routing(out: ReductionOutput, ring_dirs: Sequence[Direction]) -> LiftedRouting:
    g, ring = out.source, out.ring
    if len(ring_dirs) != ring.m:
        raise ValueError(f"expected {ring.m} ring directions, got {len(ring_dirs)}")
    paths = []
    for d, entry in zip(g.demands, out.mapping):
        if isinstance(entry, Dropped):
            paths.append(entry.path)
            continue
        rd = ring.demands[entry.index]
        middle = []
        for e in path_edges(ring, rd.source, rd.target, ring_dirs[entry.index]):
            middle.extend(g.arc_edges(e))
        paths.append(entry.prefix + tuple(middle) + entry.suffix)

    caps = g.capacities()
    loads = {e: ZERO for e in caps}
    for d, path in zip(g.demands, paths):
        for e in path:
            loads[e] += d.value
    ring_loads = load_of_integral(ring, ring_dirs)
    arc_of = {}
    for e in ring.edges():
        for a in g.arc_edges(e):
            arc_of[a] = e
    identity = all(loads[a] == ring_loads[arc_of[a]] + out.decrements[a] for a in caps)
    feasible = all(loads[a] <= caps[a] for a in caps)
    ring_ok = not out.infeasible and all(ring_loads[e] <= ring.capacity(e) for e in ring.edges())
    return LiftedRouting(tuple(paths), loads, ring_loads, feasible, ring_ok, identity)


# -- brute force in the supply graph -------------------------------------------


def simple_paths(g: CycleOfCircuits, source, target) -> list:
    """Every simple directed source -> target path, as supply-edge tuples."""
    succ = g.successors()
    out = []

    def walk(v, seen, edges):
        if v == target:
            out.append(tuple(edges))
            return
        for w, eid in succ.get(v, ()):
            if w not in seen:
                seen.add(w)
                edges.append(eid)
                walk(w, seen, edges)
                edges.pop()
                seen.discard(w)

    walk(source, {source}, [])
    return out


def routable_in_graph(g: CycleOfCircuits) -> bool:
    """Exhaustive check: does some choice of simple paths respect all capacities?"""
    caps = g.capacities()
    choices = [simple_paths(g, d.source, d.target) for d in g.demands]
    for combo in itertools.product(*choices):
        loads = dict.fromkeys(caps, ZERO)
        for d, path in zip(g.demands, combo):
            for e in path:
                loads[e] += d.value
        if all(loads[e] <= caps[e] for e in caps):
            return True
    return False


def routable_in_ring(out: ReductionOutput) -> bool:
    if out.infeasible:
        return False
    ring = out.ring
    for dirs in itertools.product((FORWARD, BACKWARD), repeat=ring.m):
        loads = load_of_integral(ring, dirs)
        if all(loads[e] <= ring.capacity(e) for e in ring.edges()):
            return True
    return False


# -- JSON -----------------------------------------------------------------------


def _node(raw, field: str):
    if isinstance(raw, bool) or not isinstance(raw, (int, str)):
        raise InstanceFormatError(field, f"node labels must be integers or strings, got {raw!r}")
    return raw


def _rat(raw, field: str) -> Fraction:
    if isinstance(raw, bool) or not isinstance(raw, (int, str, Fraction, float)):
        raise InstanceFormatError(field, f"expected a rational, got {raw!r}")
    try:
        return to_rational(raw)
    except (TypeError, ValueError) as exc:
        raise InstanceFormatError(field, str(exc)) from exc


def cycle_from_dict(doc) -> CycleOfCircuits:
    if not isinstance(doc, dict):
        raise InstanceFormatError("<root>", "expected a JSON object")
    raw_circuits = doc.get("circuits")
    if not isinstance(raw_circuits, list):
        raise InstanceFormatError("circuits", "expected a list of circuits")
    circuits = []
    for i, rc in enumerate(raw_circuits):
        if not isinstance(rc, dict):
            raise InstanceFormatError(f"circuits[{i}]", "expected an object with nodes and caps")
        nodes, caps = rc.get("nodes"), rc.get("caps")
        if not isinstance(nodes, list):
            raise InstanceFormatError(f"circuits[{i}].nodes", "expected a list")
        if not isinstance(caps, list):
            raise InstanceFormatError(f"circuits[{i}].caps", "expected a list")
        circuits.append(Circuit(
            tuple(_node(v, f"circuits[{i}].nodes[{j}]") for j, v in enumerate(nodes)),
            tuple(_rat(c, f"circuits[{i}].caps[{j}]") for j, c in enumerate(caps)),
        ))
    if "common_nodes" in doc:
        raw = doc["common_nodes"]
        if not isinstance(raw, list):
            raise InstanceFormatError("common_nodes", "expected a list")
        common = tuple(_node(v, f"common_nodes[{i}]") for i, v in enumerate(raw))
    else:
        try:
            common = derive_common_nodes(circuits)
        except TopologyError as exc:
            raise InstanceFormatError("circuits", str(exc)) from exc
    raw_demands = doc.get("demands", [])
    if not isinstance(raw_demands, list):
        raise InstanceFormatError("demands", "expected a list")
    demands = []
    for k, rd in enumerate(raw_demands):
        if not isinstance(rd, dict):
            raise InstanceFormatError(f"demands[{k}]", "expected an object")
        for key in ("from", "to", "value"):
            if key not in rd:
                raise InstanceFormatError(f"demands[{k}].{key}", "missing")
        demands.append(Demand(
            _node(rd["from"], f"demands[{k}].from"),
            _node(rd["to"], f"demands[{k}].to"),
            _rat(rd["value"], f"demands[{k}].value"),
        ))
    return CycleOfCircuits(tuple(circuits), common, tuple(demands))


def edge_to_dict(g: CycleOfCircuits, eid: EdgeId) -> dict:
    tail, head = g.endpoints(eid)
    return {"circuit": eid[0], "index": eid[1], "tail": tail, "head": head}


def mapping_to_list(out: ReductionOutput) -> list:
    g = out.source
    rows = []
    for k, entry in enumerate(out.mapping):
        if isinstance(entry, Dropped):
            rows.append({"demand": k, "kind": "dropped", "path": [edge_to_dict(g, e) for e in entry.path]})
        else:
            rows.append({
                "demand": k,
                "kind": "mapped",
                "ring_demand": entry.index,
                "prefix": [edge_to_dict(g, e) for e in entry.prefix],
                "suffix": [edge_to_dict(g, e) for e in entry.suffix],
            })
    return rows
