from fractions import Fraction

import pytest

from tropdiv import fixtures
from tropdiv.errors import DisconnectedGraph, InvariantViolation, NotASpanningTree
from tropdiv.graph import (Edge, MetricGraph, Model, Point, as_fraction, betti1, check_spanning_tree,
                           complement_components, complement_pieces, first_spanning_tree, genus_dec,
                           spanning_trees, subdivide, tree_path)


def test_as_fraction_refuses_floats():
    assert as_fraction("3/6") == Fraction(1, 2)
    assert as_fraction(4) == 4
    with pytest.raises(TypeError):
        as_fraction(0.5)
    with pytest.raises(ValueError):
        as_fraction("1.5")


@pytest.mark.parametrize("name,expected", [
    ("segment", 0), ("tripod", 0), ("cycle", 1), ("theta", 2), ("dumbbell", 2),
    ("peace_sign", 3), ("chain3", 3), ("k4", 3),
])
def test_betti_numbers(name, expected):
    assert betti1(fixtures.get(name).graph) == expected


def test_invalid_graphs():
    with pytest.raises(InvariantViolation):
        MetricGraph(["a", "b"], [Edge("e", "a", "b", Fraction(0))])
    with pytest.raises(InvariantViolation):
        MetricGraph(["a"], [Edge("e", "a", "z", Fraction(1))])
    with pytest.raises(InvariantViolation):
        MetricGraph(["a", "a"], [])


def test_genus_dec_of_two_disjoint_loops():
    G = MetricGraph(["a", "b"], [Edge("x", "a", "a", Fraction(1)), Edge("y", "b", "b", Fraction(1))])
    # 1 + 1 - 2 + 1
    assert genus_dec(G) == 1
    assert betti1(G) == 2


def test_point_normalization():
    G = fixtures.theta()
    assert G.point("e2", 0) == Point(vertex="u")
    assert G.point("e2", 2) == Point(vertex="w")
    with pytest.raises(InvariantViolation):
        G.point("e2", 3)


def test_spanning_trees_theta_and_k4():
    assert spanning_trees(fixtures.theta()) == [("e1",), ("e2",), ("e3",)]
    # Cayley: 4^{4-2}
    assert len(spanning_trees(fixtures.k4())) == 16
    # loops never belong to a tree
    assert spanning_trees(fixtures.dumbbell()) == [("b",)]


def test_spanning_tree_errors():
    with pytest.raises(NotASpanningTree):
        check_spanning_tree(fixtures.theta(), ["e1", "e2"])
    with pytest.raises(DisconnectedGraph):
        spanning_trees(MetricGraph(["a", "b"], []))


def test_tree_path_signs():
    G = fixtures.peace_sign()
    path = tree_path(G, ["s_a", "s_b", "s_c"], "alpha", "beta")
    assert path == [("s_a", -1), ("s_b", 1)]
    assert first_spanning_tree(G) == ("a_ab", "a_bc", "s_a")


def test_model_loopless_splits_loops():
    m = Model(fixtures.dumbbell(), loopless=True)
    assert len(m.vertices) == 4
    assert all(s.tail != s.head for s in m.segments)


def test_subdivide_keeps_genus_and_length():
    G = fixtures.theta()
    p = G.point("e3", Fraction(1, 2))
    H, relabel = subdivide(G, [p, G.point("e3", 2)])
    assert betti1(H) == 2
    assert H.total_length() == G.total_length()
    q = relabel(p)
    assert q.vertex == "e3@1/2"


def test_complement_examples():
    G = fixtures.theta()
    one = complement_components(G, [G.point("e1", Fraction(1, 2))])
    assert len(one) == 1
    two = complement_components(G, [G.point("e1", Fraction(1, 3)), G.point("e1", Fraction(2, 3))])
    assert len(two) == 2
    D = fixtures.dumbbell()
    assert len(complement_components(D, [D.point("b", Fraction(1, 2))])) == 2
    assert len(complement_components(D, ["b"])) == 2
    assert len(complement_components(G, [Point(vertex="u")])) == 1


def test_complement_genera():
    D = fixtures.dumbbell()
    pieces = complement_pieces(D, [], ["b"])
    assert sorted(pc.genus for pc in pieces) == [1, 1]
