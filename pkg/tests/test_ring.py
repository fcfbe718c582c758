import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ringbalance.ring import (
    BACKWARD,
    FORWARD,
    INFINITE,
    DegeneratePathError,
    Demand,
    InstanceFormatError,
    LoadVector,
    RingInstance,
    bwd,
    congestion,
    covers,
    edge_between,
    fwd,
    instance_from_dict,
    instance_to_dict,
    load_of_fractional,
    load_of_integral,
    long_direction,
    path_edges,
    phi_of_dirs,
    to_rational,
    validate_instance,
)
from strategies import fractional_assignments, instances

H = Fraction(1, 2)


def test_valid_instance_without_demands():
    assert validate_instance(RingInstance.uniform(3, 1)) == []


def test_degenerate_demand_is_reported():
    errs = validate_instance(RingInstance.uniform(3, 1, [Demand(1, 1, 1)]))
    assert any("degenerate demand" in e for e in errs)


def test_negative_capacity_is_reported():
    inst = RingInstance(3, [-1, 1, 1], [1, 1, 1])
    errs = validate_instance(inst)
    assert any("negative capacity" in e and "cap_forward[0]" in e for e in errs)


@pytest.mark.parametrize(
    "inst, fragment",
    [
        (RingInstance(1, [1], [1]), "n:"),
        (RingInstance(3, [1, 1], [1, 1, 1]), "cap_forward"),
        (RingInstance.uniform(3, 1, [Demand(0, 5, 1)]), "demands[0].target"),
        (RingInstance.uniform(3, 1, [Demand(0, 1, 0)]), "demands[0].value"),
    ],
)
def test_validation_names_the_field(inst, fragment):
    assert any(fragment in e for e in validate_instance(inst))


def test_to_rational_forms():
    assert to_rational("3/6") == H
    assert to_rational("0.25") == Fraction(1, 4)
    assert to_rational(0.1) == Fraction(1, 10)
    assert to_rational(7) == 7
    with pytest.raises(ValueError):
        to_rational("abc")
    with pytest.raises(TypeError):
        to_rational(True)


# -- geometry --


def test_path_edges_examples():
    assert path_edges(4, 0, 2, FORWARD) == (fwd(0), fwd(1))
    edges = path_edges(4, 0, 2, BACKWARD)
    assert [e.nodes(4) for e in edges] == [(0, 3), (3, 2)]
    assert path_edges(2, 0, 1, FORWARD) == (fwd(0),)


def test_path_edges_rejects_degenerate():
    with pytest.raises(DegeneratePathError):
        path_edges(4, 2, 2, FORWARD)


@pytest.mark.parametrize("n, s, t, want", [(5, 0, 1, BACKWARD), (4, 0, 2, FORWARD), (3, 0, 2, FORWARD)])
def test_long_direction(n, s, t, want):
    assert long_direction(n, s, t) == want


def test_edge_between_and_labels():
    assert edge_between(4, 3, 0) == fwd(3)
    assert edge_between(4, 0, 3) == bwd(3)
    assert fwd(3).label(4) == "fwd(3,0)"
    assert bwd(3).label(4) == "bwd(0,3)"


@given(st.integers(2, 8).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, n - 1), st.integers(1, n - 1))))
def test_two_paths_partition_the_positions(args):
    n, s, step = args
    t = (s + step) % n
    f = {e.pos for e in path_edges(n, s, t, FORWARD)}
    b = {e.pos for e in path_edges(n, s, t, BACKWARD)}
    assert f | b == set(range(n)) and not f & b
    assert all(covers(n, s, t, FORWARD, p) == (p in f) for p in range(n))
    # consecutive edges chain head to tail
    for direction in (FORWARD, BACKWARD):
        edges = path_edges(n, s, t, direction)
        nodes = [edges[0].nodes(n)[0]] + [e.nodes(n)[1] for e in edges]
        assert nodes[0] == s and nodes[-1] == t


# -- loads --


def test_fractional_load_examples():
    inst = RingInstance.uniform(3, 1, [Demand(0, 1, 1)])
    assert load_of_fractional(inst, [1]) == LoadVector((1, 0, 0), (0, 0, 0))
    half = load_of_fractional(inst, [H])
    assert half[fwd(0)] == H
    assert half[bwd(2)] == H and half[bwd(1)] == H  # 0->2 and 2->1
    assert half[bwd(0)] == 0


def test_two_forward_demands_add_up():
    inst = RingInstance.uniform(3, 1, [Demand(0, 1, 2), Demand(1, 0, 3)])
    loads = load_of_fractional(inst, [1, 1])
    assert loads.forward == (2, 3, 3)
    assert loads.backward == (0, 0, 0)


def test_integral_load_examples():
    inst = RingInstance.uniform(4, 1, [Demand(0, 2, 3)])
    assert load_of_integral(inst, [FORWARD]) == LoadVector((3, 3, 0, 0), (0, 0, 0, 0))
    assert load_of_integral(RingInstance.uniform(4, 1), []) == LoadVector.zeros(4)


@given(instances(), st.data())
def test_integral_load_matches_fractional(inst, data):
    dirs = data.draw(st.lists(st.sampled_from([FORWARD, BACKWARD]), min_size=inst.m, max_size=inst.m))
    assert load_of_integral(inst, dirs) == load_of_fractional(inst, phi_of_dirs(dirs))


@given(instances(), st.data())
def test_total_load_is_value_times_length(inst, data):
    phi = data.draw(fractional_assignments(inst))
    loads = load_of_fractional(inst, phi)
    want = sum(
        (p * d.value * len(path_edges(inst, d.source, d.target, FORWARD))
         + (1 - p) * d.value * len(path_edges(inst, d.source, d.target, BACKWARD))
         for d, p in zip(inst.demands, phi)),
        Fraction(0),
    )
    assert sum(loads.forward) + sum(loads.backward) == want


def test_congestion_examples():
    inst = RingInstance.uniform(3, 1)
    assert congestion(inst, LoadVector.zeros(3)) == 0
    assert congestion(inst, LoadVector((H, 0, Fraction(1, 3)), (H, 0, 0))) == H
    zero = RingInstance(3, [0, 1, 1], [1, 1, 1])
    assert congestion(zero, LoadVector((1, 0, 0), (0, 0, 0))) == INFINITE
    assert congestion(zero, LoadVector((0, 0, 0), (2, 0, 0))) == 2


# -- JSON --


def test_json_round_trip_is_exact():
    doc = {
        "n": 3,
        "cap_forward": [1, "1/3", "0.5"],
        "cap_backward": ["2/4", 0, 7],
        "demands": [{"from": 0, "to": 2, "value": "5/7"}],
    }
    inst = instance_from_dict(doc)
    assert inst.cap_forward == (1, Fraction(1, 3), H)
    out = instance_to_dict(inst)
    assert out["cap_backward"] == ["1/2", "0", "7"]
    assert instance_from_dict(json.loads(json.dumps(out))) == inst


@given(instances(max_den=97))
def test_json_round_trip_property(inst):
    assert instance_from_dict(json.loads(json.dumps(instance_to_dict(inst)))) == inst


@pytest.mark.parametrize(
    "doc, field",
    [
        ([], "<root>"),
        ({"cap_forward": [], "cap_backward": []}, "n"),
        ({"n": 2, "cap_forward": [1, "x"], "cap_backward": [1, 1]}, "cap_forward[1]"),
        ({"n": 2, "cap_forward": [1, 1], "cap_backward": [1, 1], "demands": [{"from": 0}]}, "demands[0]"),
        ({"n": 2, "cap_forward": [1, 1], "cap_backward": [1, 1], "extra": 1}, "extra"),
        ({"n": 2, "cap_forward": [1, 1], "cap_backward": [1, 1],
          "demands": [{"from": "a", "to": 1, "value": 1}]}, "demands[0].from"),
    ],
)
def test_format_errors_name_the_field(doc, field):
    with pytest.raises(InstanceFormatError) as info:
        instance_from_dict(doc)
    assert info.value.field == field
