import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from tropdiv import fixtures
from tropdiv.divisor import Divisor, div_of
from tropdiv.errors import GraphMismatch, InternalError, NotEffectiveAwayFromQ
from tropdiv.graph import Point
from tropdiv.reduce import dhar_burn, effective_rep, is_equivalent, is_reduced, reduce, reduced
from tropdiv.sampling import random_divisor, random_effective, random_pl_function, random_point

from conftest import GENUS_FIXTURES

F = Fraction


def burning_example():
    G = fixtures.dumbbell()
    p = G.point("e1", 1)
    D = Divisor(G, {Point(vertex="u"): 3, G.point("b", F(1, 2)): 1, G.point("e2", 1): 1})
    return G, p, D


def test_zero_burns_everything():
    G = fixtures.theta()
    res = dhar_burn(Divisor.zero(G), Point(vertex="u"))
    assert res.burns_all and res.unburnt.is_empty()
    assert reduce(Divisor.zero(G), Point(vertex="u"))[0].is_zero()


def test_first_burn_stops_at_loaded_vertex():
    G, p, D = burning_example()
    res = dhar_burn(D, p)
    assert not res.burns_all
    assert res.unburnt.vertices == frozenset({"u", "w"})
    assert {(e, a, b) for e, a, b in res.unburnt.intervals} == {("b", 0, 1), ("e2", 0, 3)}
    assert not res.unburnt.contains(G, p)


def test_burning_example_reduces_to_four_chips_at_p():
    G, p, D = burning_example()
    R, f = reduce(D, p)
    assert R == Divisor(G, {p: 4, G.point("e2", 1): 1})
    assert D + div_of(f) == R
    assert is_reduced(R, p)


def test_theta_three_interior_chips_block_fire():
    G = fixtures.theta()
    D = Divisor(G, {G.point(e, F(1, 2)): 1 for e in ("e1", "e2", "e3")})
    assert not dhar_burn(D, Point(vertex="u")).burns_all


def test_burn_requires_effective_away_from_q():
    G = fixtures.theta()
    with pytest.raises(NotEffectiveAwayFromQ):
        dhar_burn(Divisor(G, {Point(vertex="w"): -1}), Point(vertex="u"))


def test_dumbbell_degree_one_divisor_is_reduced_and_not_effective():
    G = fixtures.dumbbell()
    v = Point(vertex="u")
    D = Divisor(G, {G.point("e1", F(1, 2)): 1, G.point("e2", 1): 1, v: -1})
    assert reduce(D, v)[0] == D
    assert effective_rep(D) is None


def test_dumbbell_degree_two_always_effective(rng):
    G = fixtures.dumbbell()
    for _ in range(20):
        D = random_divisor(G, rng, 2, extra=3)
        E = effective_rep(D)
        assert E is not None and E.is_effective() and is_equivalent(D, E)


def test_cycle_pairs_move_towards_each_other():
    G = fixtures.cycle()
    a = Divisor(G, {Point(vertex="v"): 1, G.point("e1", F(1, 2)): 1})
    b = Divisor(G, {G.point("e1", F(1, 8)): 1, G.point("e1", F(3, 8)): 1})
    assert is_equivalent(a, b)
    assert not is_equivalent(a, Divisor(G, {G.point("e1", F(1, 3)): 2}))


def test_theta_two_chips_on_distinct_edges_do_not_move():
    G = fixtures.theta()
    D = Divisor(G, {G.point("e1", F(1, 2)): 1, G.point("e3", 1): 1})
    other = Divisor(G, {G.point("e1", F(1, 3)): 1, G.point("e3", 1): 1})
    assert is_equivalent(D, D)
    assert not is_equivalent(D, other)


def test_degree_mismatch_and_graph_mismatch():
    G = fixtures.theta()
    assert not is_equivalent(Divisor(G, {Point(vertex="u"): 1}), Divisor.zero(G))
    with pytest.raises(GraphMismatch):
        is_equivalent(Divisor.zero(G), Divisor.zero(fixtures.cycle()))


def test_negative_degree_has_no_effective_rep():
    G = fixtures.k4()
    assert effective_rep(Divisor(G, {Point(vertex="v1"): -1})) is None


def test_event_cap(monkeypatch):
    G, p, D = burning_example()
    monkeypatch.setenv("TROPDIV_EVENT_CAP", "1")
    with pytest.raises(InternalError):
        reduce(D, p)


@given(seed=st.integers(0, 10**6), name=st.sampled_from(GENUS_FIXTURES + ["tripod"]))
def test_reduce_properties(seed, name):
    rng = random.Random(seed)
    G = fixtures.get(name).graph
    D = random_divisor(G, rng, rng.randint(-2, 4))
    q = random_point(G, rng)
    R, w = reduce(D, q)
    assert R.degree() == D.degree()
    assert D + div_of(w) == R
    assert R.effective_away_from(q)
    assert is_reduced(R, q)
    assert reduced(R, q) == R
    R2, _ = reduce(D + div_of(random_pl_function(G, rng)), q)
    assert R2 == R


@given(seed=st.integers(0, 10**6), name=st.sampled_from(GENUS_FIXTURES))
def test_reduced_maximizes_coefficient_at_q(seed, name):
    rng = random.Random(seed)
    G = fixtures.get(name).graph
    E = random_effective(G, rng, rng.randint(1, 3))
    q = random_point(G, rng)
    R = reduced(E, q)
    assert R.is_effective()
    assert R[q] >= E[q]
