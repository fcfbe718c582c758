from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ringbalance.oracle import tight_example
from ringbalance.ring import (
    BACKWARD,
    FORWARD,
    Demand,
    LoadVector,
    RingInstance,
    is_split,
    load_of_fractional,
    load_of_integral,
)
from ringbalance.rounding import (
    ContractError,
    balance_route,
    find_parallel_split_pair,
    greedy_trace,
    is_parallel,
    parallel_orientation,
    uncross_all,
    uncross_step,
    unsplit_greedy,
)
from strategies import fractional_assignments, instances

H = Fraction(1, 2)
Q = Fraction(1, 4)


# -- parallel demands --


def test_parallel_examples():
    assert is_parallel(4, Demand(0, 1, 1), Demand(3, 2, 1))
    assert is_parallel(4, Demand(0, 1, 1), Demand(0, 2, 1))
    assert not is_parallel(4, Demand(0, 2, 1), Demand(1, 3, 1))


def test_orientation_puts_long_paths_around_the_other_demand():
    # s1, t1, t2, s2 = 0, 1, 2, 3: f1's long path runs backward through 3 and 2
    assert parallel_orientation(4, Demand(0, 1, 1), Demand(3, 2, 1)) == (BACKWARD, FORWARD)
    assert parallel_orientation(4, Demand(3, 2, 1), Demand(0, 1, 1)) == (FORWARD, BACKWARD)


@given(st.integers(2, 7).flatmap(lambda n: st.tuples(st.just(n), *[st.integers(0, n - 1)] * 4)))
def test_parallel_is_symmetric(args):
    n, s1, t1, s2, t2 = args
    if s1 == t1 or s2 == t2:
        return
    f1, f2 = Demand(s1, t1, 1), Demand(s2, t2, 1)
    assert is_parallel(n, f1, f2) == is_parallel(n, f2, f1)


@given(st.integers(3, 7).flatmap(lambda n: st.tuples(st.just(n), *[st.integers(0, n - 1)] * 4)))
def test_parallel_matches_disjoint_short_paths(args):
    """Parallel iff some choice of one path each is edge-disjoint and the others cover both."""
    from ringbalance.ring import path_edges

    n, s1, t1, s2, t2 = args
    if s1 == t1 or s2 == t2:
        return
    f1, f2 = Demand(s1, t1, 1), Demand(s2, t2, 1)
    orient = parallel_orientation(n, f1, f2)
    if orient is None:
        return
    l1, l2 = orient
    # the two short paths share no position; each long path covers the other short path
    short1 = {e.pos for e in path_edges(n, s1, t1, l1.opposite())}
    short2 = {e.pos for e in path_edges(n, s2, t2, l2.opposite())}
    long1 = {e.pos for e in path_edges(n, s1, t1, l1)}
    long2 = {e.pos for e in path_edges(n, s2, t2, l2)}
    assert not short1 & short2
    assert short2 <= long1 and short1 <= long2


# -- uncrossing --


def test_uncross_step_example():
    inst = RingInstance.uniform(4, 1, [Demand(0, 1, 1), Demand(3, 2, 1)])
    # f1 sends 1/2 backward (long); f2 sends 1/4 forward (long)
    out = uncross_step(inst, (H, Q), 0, 1)
    assert out == (Fraction(3, 4), 0)
    before = load_of_fractional(inst, (H, Q))
    after = load_of_fractional(inst, out)
    assert after.pointwise_le(before)


def test_uncross_step_equal_amounts():
    inst = RingInstance.uniform(4, 1, [Demand(0, 1, 1), Demand(3, 2, 1)])
    assert uncross_step(inst, (H, H), 0, 1) == (1, 0)


def test_uncross_step_contract():
    inst = RingInstance.uniform(4, 1, [Demand(0, 2, 1), Demand(1, 3, 1), Demand(0, 1, 1)])
    with pytest.raises(ContractError):
        uncross_step(inst, (H, H, H), 0, 1)  # crossing
    with pytest.raises(ContractError):
        uncross_step(inst, (H, H, 1), 0, 2)  # not split
    with pytest.raises(ContractError):
        uncross_step(inst, (H, H, H), 0, 0)


def test_uncross_all_identity_on_integral():
    inst = RingInstance.uniform(4, 1, [Demand(0, 1, 1), Demand(3, 2, 1)])
    assert uncross_all(inst, (1, 0)) == ((1, 0), [])


def test_two_parallel_split_demands_take_one_step():
    inst = RingInstance.uniform(4, 1, [Demand(0, 1, 1), Demand(3, 2, 3)])
    phi, steps = uncross_all(inst, (H, Q))
    assert len(steps) == 1
    assert sum(map(is_split, phi)) == 1


@given(instances(m_range=(0, 8)), st.data())
def test_uncrossing_properties(inst, data):
    phi = data.draw(fractional_assignments(inst))
    out, steps = uncross_all(inst, phi)
    assert load_of_fractional(inst, out).pointwise_le(load_of_fractional(inst, phi))
    assert len(steps) <= inst.m
    assert find_parallel_split_pair(inst, out) is None
    sources = [inst.demands[k].source for k, p in enumerate(out) if is_split(p)]
    assert len(sources) == len(set(sources))
    # integral demands stay integral
    assert all(out[k] == p for k, p in enumerate(phi) if not is_split(p))


# -- greedy unsplitting --


def test_greedy_three_crossing_demands():
    inst = RingInstance.uniform(6, 1, [Demand(0, 3, 1), Demand(2, 5, 1), Demand(4, 1, 1)])
    trace = greedy_trace(inst, (H, H, H))
    assert trace.weights == (H, -H, H)
    assert trace.prefixes == (H, 0, H)
    assert trace.dirs == (FORWARD, BACKWARD, FORWARD)


def test_greedy_start_node_rotates_order():
    inst = RingInstance.uniform(6, 1, [Demand(0, 3, 1), Demand(2, 5, 1), Demand(4, 1, 1)])
    assert greedy_trace(inst, (H, H, H), start_node=3).order == (2, 0, 1)


def test_greedy_without_split_demands():
    inst = RingInstance.uniform(4, 1, [Demand(0, 1, 1), Demand(3, 2, 1)])
    assert unsplit_greedy(inst, (1, 0)) == (FORWARD, BACKWARD)


def test_greedy_refuses_parallel_split_demands():
    inst = RingInstance.uniform(4, 1, [Demand(0, 1, 1), Demand(0, 2, 1)])
    with pytest.raises(ContractError):
        greedy_trace(inst, (H, H))


def test_tight_example_trace():
    ex = tight_example(4, Fraction(1, 100))
    res = balance_route(ex.instance, ex.start_node)
    u, v, w, r = (ex.split_demands[x] for x in "uvwr")
    assert res.trace.order == (u, v, w, r)
    assert [res.dirs[k] for k in (u, v, w, r)] == [FORWARD, BACKWARD, FORWARD, BACKWARD]
    assert res.loads[ex.e_prime] == 2


@given(instances(m_range=(0, 8)), st.data())
def test_prefix_invariant_and_rounding_error(inst, data):
    phi, _ = uncross_all(inst, data.draw(fractional_assignments(inst)))
    start = data.draw(st.integers(0, inst.n - 1))
    trace = greedy_trace(inst, phi, start)
    for p in trace.prefixes:
        assert -trace.D / 2 < p <= trace.D / 2
    before = load_of_fractional(inst, phi)
    after = load_of_integral(inst, trace.dirs)
    for e, load in after.items():
        assert abs(load - before[e]) < Fraction(3, 2) * trace.D or load == before[e]


# -- full pipeline --


def test_pipeline_no_demands():
    res = balance_route(RingInstance.uniform(3, 1))
    assert res.dirs == () and res.alpha_star == 0
    assert res.loads == LoadVector.zeros(3)
    assert res.certificate.holds


def test_pipeline_single_demand():
    res = balance_route(RingInstance.uniform(3, 1, [Demand(0, 1, 1)]))
    assert res.alpha_star == H
    assert all(row.load < 2 for row in res.certificate.rows)
    assert all(row.bound == 2 for row in res.certificate.rows)


@given(instances(m_range=(0, 8)), st.data())
def test_certificate_holds(inst, data):
    start = data.draw(st.integers(0, inst.n - 1))
    res = balance_route(inst, start)
    assert res.certificate.holds and res.certificate.sharp_holds
    for row in res.certificate.rows:
        assert row.slack == row.bound - row.load
        if inst.demands:
            assert row.slack > 0
