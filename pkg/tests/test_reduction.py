import itertools
from fractions import Fraction

import pytest

from ringbalance.oracle import random_cycle_of_circuits
from ringbalance.reduction import (
    Circuit,
    CycleOfCircuits,
    Dropped,
    Mapped,
    TopologyError,
    cycle_from_dict,
    derive_common_nodes,
    lift_routing,
    mapping_to_list,
    reduce_to_ring,
    routable_in_graph,
    routable_in_ring,
    simple_paths,
    validate_cycle,
)
from ringbalance.ring import BACKWARD, FORWARD, Demand, InstanceFormatError, bwd, fwd

F = Fraction


def three_circuits(caps=None, demands=()):
    """Three 4-node circuits; x_i sits on the forward arc, y_i on the backward arc."""
    caps = caps or [[4, 3, 5, 2], [4, 4, 4, 4], [3, 3, 3, 3]]
    circuits = [
        Circuit(("a0", "x0", "a1", "y0"), caps[0]),
        Circuit(("a1", "x1", "a2", "y1"), caps[1]),
        Circuit(("a2", "x2", "a0", "y2"), caps[2]),
    ]
    return CycleOfCircuits(circuits, ("a0", "a1", "a2"), demands)


def test_common_nodes_are_derived():
    g = three_circuits()
    assert derive_common_nodes(g.circuits) == ("a0", "a1", "a2")
    assert validate_cycle(g) == []


def test_arcs():
    g = three_circuits()
    assert g.arc_edges(fwd(0)) == [(0, 0), (0, 1)]
    assert g.arc_edges(bwd(0)) == [(0, 2), (0, 3)]
    assert [g.endpoints(e) for e in g.arc_edges(bwd(2))] == [("a0", "y2"), ("y2", "a2")]


def test_no_demands_gives_arc_minima():
    out = reduce_to_ring(three_circuits())
    assert out.ring.n == 3 and out.ring.demands == ()
    assert out.ring.cap_forward == (3, 4, 3)
    assert out.ring.cap_backward == (2, 4, 3)
    assert not out.infeasible


def test_interior_demand_across_two_circuits():
    g = three_circuits(demands=[Demand("x0", "y1", 1)])
    out = reduce_to_ring(g)
    (entry,) = out.mapping
    assert isinstance(entry, Mapped)
    assert out.ring.demands == (Demand(1, 2, 1),)
    assert [g.endpoints(e) for e in entry.prefix] == [("x0", "a1")]
    assert [g.endpoints(e) for e in entry.suffix] == [("a2", "y1")]
    assert out.decrements[(0, 1)] == 1 and out.decrements[(1, 2)] == 1
    assert sum(out.decrements.values()) == 2
    assert out.ring.cap_forward == (2, 4, 3)
    assert out.ring.cap_backward == (2, 3, 3)


def test_demand_between_common_nodes():
    g = three_circuits(demands=[Demand("a0", "a2", 2)])
    out = reduce_to_ring(g)
    assert out.mapping == (Mapped(0, (), ()),)
    assert out.ring.demands == (Demand(0, 2, 2),)
    assert not any(out.decrements.values())
    lifted = lift_routing(out, [FORWARD])
    assert lifted.paths[0] == tuple(g.arc_edges(fwd(0)) + g.arc_edges(fwd(1)))


def test_demand_on_its_own_forced_path_is_dropped():
    g = three_circuits(demands=[Demand("x0", "a1", 1), Demand("a1", "y0", 1)])
    out = reduce_to_ring(g)
    assert out.mapping[0] == Dropped(((0, 1),))
    assert isinstance(out.mapping[1], Dropped)
    assert out.ring.demands == ()
    for dirs in ([],):
        assert lift_routing(out, dirs).paths == (((0, 1),), ((0, 2),))


def test_negative_residual_is_flagged():
    g = three_circuits(demands=[Demand("x0", "a1", 2), Demand("x0", "y1", 2)])
    out = reduce_to_ring(g)
    assert out.infeasible and out.first_negative_at == 1
    assert out.negative_edges == ((0, 1),)
    assert not routable_in_graph(g)


def test_equivalence_on_a_capacity_grid():
    agree = 0
    for c0, c1 in itertools.product(range(4), repeat=2):
        caps = [[c0, 2, c1, 1], [2, c1, 1, c0], [1, 2, c0, 2]]
        g = three_circuits(caps, [Demand("x0", "y1", 1), Demand("x2", "x1", 1), Demand("a0", "a2", 1)])
        out = reduce_to_ring(g)
        assert routable_in_graph(g) == routable_in_ring(out)
        agree += routable_in_graph(g)
    assert 0 < agree < 16


def test_lift_identity_for_every_routing():
    g = three_circuits(demands=[Demand("x0", "y1", 1), Demand("x2", "x1", F(1, 2)), Demand("y2", "x0", 1)])
    out = reduce_to_ring(g)
    for dirs in itertools.product((FORWARD, BACKWARD), repeat=out.ring.m):
        lifted = lift_routing(out, dirs)
        assert lifted.identity_holds
        assert lifted.feasible == lifted.ring_feasible
        for d, path in zip(g.demands, lifted.paths):
            assert path in simple_paths(g, d.source, d.target)


def test_two_circuits_keep_parallel_edges_apart():
    g = CycleOfCircuits([Circuit((0, 2, 1), [3, 3, 0]), Circuit((1, 0), [1, 2])], (0, 1), [Demand(2, 0, 1)])
    out = reduce_to_ring(g)
    assert out.ring.cap_backward == (0, 2)
    assert routable_in_graph(g) == routable_in_ring(out)


def test_random_cycles():
    for s in range(150):
        g = random_cycle_of_circuits(s, 2 + s % 3, 5, s % 6, cap_range=(1, 6))
        out = reduce_to_ring(g)
        assert routable_in_graph(g) == routable_in_ring(out)
        for dirs in itertools.product((FORWARD, BACKWARD), repeat=out.ring.m):
            assert lift_routing(out, dirs).identity_holds


@pytest.mark.parametrize(
    "circuits, common, fragment",
    [
        ([Circuit((0, 1), [1, 1])], (0,), "at least 2 circuits"),
        ([Circuit((0, 1, 1), [1, 1, 1]), Circuit((1, 0), [1, 1])], (0, 1), "repeated node"),
        ([Circuit((0, 1), [1]), Circuit((1, 0), [1, 1])], (0, 1), "caps"),
        ([Circuit((0, 1), [1, -1]), Circuit((1, 0), [1, 1])], (0, 1), "negative capacity"),
        ([Circuit((0, 1, 5), [1, 1, 1]), Circuit((1, 0, 5), [1, 1, 1])], (0, 1), "node 5"),
    ],
)
def test_topology_errors(circuits, common, fragment):
    errs = validate_cycle(CycleOfCircuits(circuits, common))
    assert any(fragment in e for e in errs), errs
    with pytest.raises(TopologyError):
        reduce_to_ring(CycleOfCircuits(circuits, common))


def test_json_document():
    doc = {
        "circuits": [
            {"nodes": ["a0", "x0", "a1", "y0"], "caps": [4, 3, "5", "2/1"]},
            {"nodes": ["a1", "x1", "a2", "y1"], "caps": [4, 4, 4, 4]},
            {"nodes": ["a2", "x2", "a0", "y2"], "caps": [3, 3, 3, 3.0]},
        ],
        "demands": [{"from": "x0", "to": "y1", "value": "1"}],
    }
    g = cycle_from_dict(doc)
    assert g == three_circuits(demands=[Demand("x0", "y1", 1)])
    rows = mapping_to_list(reduce_to_ring(g))
    assert rows[0]["kind"] == "mapped"
    assert rows[0]["prefix"] == [{"circuit": 0, "index": 1, "tail": "x0", "head": "a1"}]


@pytest.mark.parametrize(
    "doc, field",
    [
        ({}, "circuits"),
        ({"circuits": [{"nodes": [0, 1]}]}, "circuits[0].caps"),
        ({"circuits": [{"nodes": [0, 1], "caps": [1, "z"]}]}, "circuits[0].caps[1]"),
        ({"circuits": [{"nodes": [0, 1], "caps": [1, 1]}, {"nodes": [1, 0], "caps": [1, 1]}],
          "demands": [{"from": 0, "value": 1}]}, "demands[0].to"),
        ({"circuits": [{"nodes": [0, 1], "caps": [1, 1]}, {"nodes": [2, 3], "caps": [1, 1]}]}, "circuits"),
    ],
)
def test_json_errors_name_the_field(doc, field):
    with pytest.raises(InstanceFormatError) as info:
        cycle_from_dict(doc)
    assert info.value.field == field
