"""Bidirected ring instances, path geometry, loads and congestion.

Nodes are ``0..n-1`` in forward order.  Ring *position* ``i`` is the pair of
nodes ``i`` and ``i+1 (mod n)``; it carries two directed edges, the forward
edge ``i -> i+1`` and the backward edge ``i+1 -> i``.  A forward ``s->t`` path
covers positions ``s, s+1, ..., t-1`` and the backward path covers the
complementary positions ``t, ..., s-1``.

All quantities are :class:`fractions.Fraction`.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, NamedTuple, Sequence, Union

RationalLike = Union[int, str, Fraction]

INFINITE = math.inf


class RingError(ValueError):
    pass


class DegeneratePathError(RingError):
    pass


def to_rational(value) -> Fraction:
    """Exact conversion; floats go through their shortest decimal repr."""
    if isinstance(value, bool):
        raise TypeError("bool is not a rational")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational: {value!r}") from exc
    raise TypeError(f"cannot convert {type(value).__name__} to a rational")


def format_rational(q: Fraction) -> str:
    return str(q)


class Direction(enum.IntEnum):
    FORWARD = 0
    BACKWARD = 1

    def opposite(self) -> "Direction":
        return Direction.BACKWARD if self is Direction.FORWARD else Direction.FORWARD

    def __str__(self) -> str:
        return "F" if self is Direction.FORWARD else "B"


FORWARD = Direction.FORWARD
BACKWARD = Direction.BACKWARD


class Edge(NamedTuple):
    direction: Direction
    pos: int

    def nodes(self, n: int) -> tuple[int, int]:
        """(tail, head) of the directed edge."""
        a, b = self.pos, (self.pos + 1) % n
        return (a, b) if self.direction is FORWARD else (b, a)

    def label(self, n: int) -> str:
        tail, head = self.nodes(n)
        return f"{'fwd' if self.direction is FORWARD else 'bwd'}({tail},{head})"


def fwd(pos: int) -> Edge:
    return Edge(FORWARD, pos)


def bwd(pos: int) -> Edge:
    return Edge(BACKWARD, pos)


def edge_between(n: int, tail: int, head: int) -> Edge:
    if (tail + 1) % n == head:
        return fwd(tail)
    if (head + 1) % n == tail:
        return bwd(head)
    raise RingError(f"no ring edge {tail}->{head} for n={n}")


@dataclass(frozen=True)
class Demand:
    source: int
    target: int
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", to_rational(self.value))


@dataclass(frozen=True)
class RingInstance:
    n: int
    cap_forward: tuple
    cap_backward: tuple
    demands: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "cap_forward", tuple(to_rational(c) for c in self.cap_forward))
        object.__setattr__(self, "cap_backward", tuple(to_rational(c) for c in self.cap_backward))
        dem = tuple(d if isinstance(d, Demand) else Demand(*d) for d in self.demands)
        object.__setattr__(self, "demands", dem)

    @classmethod
    def uniform(cls, n: int, cap: RationalLike, demands=()) -> "RingInstance":
        return cls(n, [cap] * n, [cap] * n, demands)

    @property
    def m(self) -> int:
        return len(self.demands)

    def capacity(self, e: Edge) -> Fraction:
        return self.cap_forward[e.pos] if e.direction is FORWARD else self.cap_backward[e.pos]

    def edges(self) -> list[Edge]:
        return [fwd(i) for i in range(self.n)] + [bwd(i) for i in range(self.n)]

    def max_demand(self) -> Fraction:
        return max((d.value for d in self.demands), default=Fraction(0))

    def total_capacity(self) -> Fraction:
        return sum(self.cap_forward, Fraction(0)) + sum(self.cap_backward, Fraction(0))

    def mean_capacity(self) -> Fraction:
        """Sum over all 2n directed edges, divided by n."""
        return self.total_capacity() / self.n

    def with_demands(self, demands) -> "RingInstance":
        return RingInstance(self.n, self.cap_forward, self.cap_backward, tuple(demands))

    def with_capacities(self, cap_forward, cap_backward) -> "RingInstance":
        return RingInstance(self.n, cap_forward, cap_backward, self.demands)


# -- validation ----------------------------------------------------------------


def validate_instance(inst: RingInstance) -> list[str]:
    """Return every invariant violation; an empty list means ok."""
    errors = []
    if not isinstance(inst.n, int) or inst.n < 2:
        return [f"n: ring needs at least 2 nodes, got {inst.n!r}"]
    for name, caps in (("cap_forward", inst.cap_forward), ("cap_backward", inst.cap_backward)):
        if len(caps) != inst.n:
            errors.append(f"{name}: expected {inst.n} entries, got {len(caps)}")
        for i, c in enumerate(caps):
            if c < 0:
                errors.append(f"{name}[{i}]: negative capacity {c}")
    for k, d in enumerate(inst.demands):
        for attr in ("source", "target"):
            node = getattr(d, attr)
            if not isinstance(node, int) or not 0 <= node < inst.n:
                errors.append(f"demands[{k}].{attr}: node {node!r} out of range 0..{inst.n - 1}")
        if d.source == d.target:
            errors.append(f"demands[{k}]: degenerate demand (source == target == {d.source})")
        if d.value <= 0:
            errors.append(f"demands[{k}].value: demand value must be positive, got {d.value}")
    return errors


# -- geometry ------------------------------------------------------------------


def path_positions(n: int, s: int, t: int, direction: Direction) -> range:
    """Positions covered by the s->t path, as offsets to be taken mod n.

    Forward paths list positions s, s+1, ...; backward paths are listed from
    t upwards (i.e. against traversal order).
    """
    if s == t:
        raise DegeneratePathError(f"degenerate path {s}->{t}")
    if direction is FORWARD:
        return range(s, s + (t - s) % n)
    return range(t, t + (s - t) % n)


def covers(n: int, s: int, t: int, direction: Direction, pos: int) -> bool:
    """Whether the s->t path in ``direction`` crosses ring position ``pos``."""
    if direction is FORWARD:
        return (pos - s) % n < (t - s) % n
    return (pos - t) % n < (s - t) % n


def path_edges(inst_or_n, s: int, t: int, direction: Direction) -> tuple[Edge, ...]:
    """Directed edges of the s->t path, in traversal order."""
    n = inst_or_n if isinstance(inst_or_n, int) else inst_or_n.n
    if direction is FORWARD:
        return tuple(fwd(p % n) for p in path_positions(n, s, t, FORWARD))
    return tuple(bwd(p % n) for p in reversed(path_positions(n, s, t, BACKWARD)))


def path_length(n: int, s: int, t: int, direction: Direction) -> int:
    if s == t:
        raise DegeneratePathError(f"degenerate path {s}->{t}")
    return (t - s) % n if direction is FORWARD else (s - t) % n


def long_direction(inst_or_n, s: int, t: int) -> Direction:
    """Direction of the path with more edges; forward on ties."""
    n = inst_or_n if isinstance(inst_or_n, int) else inst_or_n.n
    if path_length(n, s, t, BACKWARD) > path_length(n, s, t, FORWARD):
        return BACKWARD
    return FORWARD


# -- loads ---------------------------------------------------------------------


@dataclass(frozen=True)
class LoadVector:
    forward: tuple
    backward: tuple

    @classmethod
    def zeros(cls, n: int) -> "LoadVector":
        z = (Fraction(0),) * n
        return cls(z, z)

    @property
    def n(self) -> int:
        return len(self.forward)

    def __getitem__(self, e: Edge) -> Fraction:
        return self.forward[e.pos] if e.direction is FORWARD else self.backward[e.pos]

    def items(self) -> Iterator[tuple[Edge, Fraction]]:
        for i, v in enumerate(self.forward):
            yield fwd(i), v
        for i, v in enumerate(self.backward):
            yield bwd(i), v

    def __add__(self, other: "LoadVector") -> "LoadVector":
        return LoadVector(
            tuple(a + b for a, b in zip(self.forward, other.forward)),
            tuple(a + b for a, b in zip(self.backward, other.backward)),
        )

    def __sub__(self, other: "LoadVector") -> "LoadVector":
        return LoadVector(
            tuple(a - b for a, b in zip(self.forward, other.forward)),
            tuple(a - b for a, b in zip(self.backward, other.backward)),
        )

    def scale(self, k) -> "LoadVector":
        k = to_rational(k)
        return LoadVector(tuple(k * a for a in self.forward), tuple(k * a for a in self.backward))

    def pointwise_le(self, other: "LoadVector") -> bool:
        return all(a <= b for a, b in zip(self.forward, other.forward)) and all(
            a <= b for a, b in zip(self.backward, other.backward)
        )


class _Accumulator:
    """Difference-array load accumulation over cyclic position ranges."""

    def __init__(self, n: int):
        self.n = n
        self.diff = {FORWARD: [Fraction(0)] * (n + 1), BACKWARD: [Fraction(0)] * (n + 1)}

    def add_path(self, s: int, t: int, direction: Direction, amount: Fraction):
        if not amount:
            return
        n = self.n
        r = path_positions(n, s, t, direction)
        lo, hi = r.start % n, r.start % n + len(r)
        d = self.diff[direction]
        if hi <= n:
            d[lo] += amount
            d[hi] -= amount
        else:
            d[lo] += amount
            d[n] -= amount
            d[0] += amount
            d[hi - n] -= amount

    def result(self) -> LoadVector:
        out = []
        for direction in (FORWARD, BACKWARD):
            acc, vals = Fraction(0), []
            for i in range(self.n):
                acc += self.diff[direction][i]
                vals.append(acc)
            out.append(tuple(vals))
        return LoadVector(*out)


def load_of_fractional(inst: RingInstance, phi: Sequence[Fraction]) -> LoadVector:
    """Per-edge load when demand f sends phi[f] of its value forward."""
    if len(phi) != inst.m:
        raise RingError(f"assignment has {len(phi)} entries for {inst.m} demands")
    acc = _Accumulator(inst.n)
    for d, p in zip(inst.demands, phi):
        p = to_rational(p)
        acc.add_path(d.source, d.target, FORWARD, p * d.value)
        acc.add_path(d.source, d.target, BACKWARD, (1 - p) * d.value)
    return acc.result()


def load_of_integral(inst: RingInstance, dirs: Sequence[Direction]) -> LoadVector:
    if len(dirs) != inst.m:
        raise RingError(f"assignment has {len(dirs)} entries for {inst.m} demands")
    acc = _Accumulator(inst.n)
    for d, direction in zip(inst.demands, dirs):
        acc.add_path(d.source, d.target, Direction(direction), d.value)
    return acc.result()


def phi_of_dirs(dirs: Sequence[Direction]) -> tuple:
    return tuple(Fraction(1) if d is FORWARD else Fraction(0) for d in dirs)


def congestion(inst: RingInstance, loads: LoadVector):
    """max load(e)/c(e); zero-capacity edges count 0 when unloaded, inf otherwise."""
    best = Fraction(0)
    for e, load in loads.items():
        c = inst.capacity(e)
        if c == 0:
            if load > 0:
                return INFINITE
            continue
        best = max(best, load / c)
    return best


def is_split(p: Fraction) -> bool:
    return 0 < p < 1


# -- JSON form -----------------------------------------------------------------


def instance_to_dict(inst: RingInstance) -> dict:
    return {
        "n": inst.n,
        "cap_forward": [format_rational(c) for c in inst.cap_forward],
        "cap_backward": [format_rational(c) for c in inst.cap_backward],
        "demands": [
            {"from": d.source, "to": d.target, "value": format_rational(d.value)} for d in inst.demands
        ],
    }


class InstanceFormatError(ValueError):
    """Malformed instance document; ``field`` names the offending entry."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


def _rat_field(value, where: str) -> Fraction:
    try:
        return to_rational(value)
    except (TypeError, ValueError) as exc:
        raise InstanceFormatError(where, str(exc)) from None


def instance_from_dict(doc) -> RingInstance:
    if not isinstance(doc, dict):
        raise InstanceFormatError("<root>", "expected a JSON object")
    for key in ("n", "cap_forward", "cap_backward"):
        if key not in doc:
            raise InstanceFormatError(key, "missing")
    unknown = set(doc) - {"n", "cap_forward", "cap_backward", "demands"}
    if unknown:
        raise InstanceFormatError(sorted(unknown)[0], "unknown field")
    n = doc["n"]
    if not isinstance(n, int) or isinstance(n, bool):
        raise InstanceFormatError("n", "must be an integer")
    caps = {}
    for key in ("cap_forward", "cap_backward"):
        if not isinstance(doc[key], list):
            raise InstanceFormatError(key, "must be a list")
        caps[key] = [_rat_field(v, f"{key}[{i}]") for i, v in enumerate(doc[key])]
    demands = []
    for k, item in enumerate(doc.get("demands", [])):
        if not isinstance(item, dict) or not {"from", "to", "value"} <= set(item):
            raise InstanceFormatError(f"demands[{k}]", "expected object with from/to/value")
        for key in ("from", "to"):
            if not isinstance(item[key], int) or isinstance(item[key], bool):
                raise InstanceFormatError(f"demands[{k}].{key}", "must be an integer node index")
        demands.append(Demand(item["from"], item["to"], _rat_field(item["value"], f"demands[{k}].value")))
    return RingInstance(n, caps["cap_forward"], caps["cap_backward"], tuple(demands))
