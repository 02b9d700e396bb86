"""Built-in graphs from the worked examples, and their standard covers."""

from __future__ import annotations

from dataclasses import dataclass, field

from .graph import Edge, MetricGraph


@dataclass(frozen=True)
class Fixture:
    name: str
    graph: MetricGraph
    note: str
    covers: dict = field(default_factory=dict)  # name -> (tree, swapped edge ids)


def _g(vertices, edges):
    return MetricGraph(vertices, [Edge(i, u, v, l) for i, u, v, l in edges])


def segment() -> MetricGraph:
    return _g(["a", "b"], [("e1", "a", "b", "1")])


def tripod() -> MetricGraph:
    return _g(["c", "x", "y", "z"], [("e1", "c", "x", "1"), ("e2", "c", "y", "2"), ("e3", "c", "z", "3/2")])


def cycle(length="1") -> MetricGraph:
    return _g(["v"], [("e1", "v", "v", length)])


def theta(l1="1", l2="2", l3="3") -> MetricGraph:
    return _g(["u", "w"], [("e1", "u", "w", l1), ("e2", "u", "w", l2), ("e3", "u", "w", l3)])


def dumbbell(left="2", bridge="1", right="3") -> MetricGraph:
    """Chain of two loops: loop e1 at u, bridge b from u to w, loop e2 at w."""
    return _g(["u", "w"], [("b", "u", "w", bridge), ("e1", "u", "u", left), ("e2", "w", "w", right)])


def peace_sign(spoke="1", arc="1") -> MetricGraph:
    return _g(
        ["alpha", "beta", "delta", "gamma"],
        [
            ("a_ab", "alpha", "beta", arc),
            ("a_bc", "beta", "gamma", arc),
            ("a_ca", "gamma", "alpha", arc),
            ("s_a", "delta", "alpha", spoke),
            ("s_b", "delta", "beta", spoke),
            ("s_c", "delta", "gamma", spoke),
        ],
    )


def chain_of_loops(n=3, loops=None, bridges=None) -> MetricGraph:
    loops = loops or [str(i + 1) for i in range(n)]
    bridges = bridges or ["1"] * (n - 1)
    vs = [f"v{i + 1}" for i in range(n)]
    es = [(f"l{i + 1}", vs[i], vs[i], loops[i]) for i in range(n)]
    es += [(f"b{i + 1}", vs[i], vs[i + 1], bridges[i]) for i in range(n - 1)]
    return _g(vs, es)


def k4() -> MetricGraph:
    vs = ["v1", "v2", "v3", "v4"]
    lengths = {"12": "1", "13": "2", "14": "3", "23": "3/2", "24": "1", "34": "5/2"}
    return _g(vs, [(f"e{k}", f"v{k[0]}", f"v{k[1]}", l) for k, l in lengths.items()])


def all_fixtures() -> dict[str, Fixture]:
    fx = [
        Fixture("segment", segment(), "single edge of length 1"),
        Fixture("tripod", tripod(), "star tree with three legs"),
        Fixture("cycle", cycle(), "one loop of length 1",
                {"self": ((), ("e1",))}),
        Fixture("theta", theta(), "binary graph of genus 2 (two vertices, three edges)",
                {"e2_swapped": (("e1",), ("e2",))}),
        Fixture("dumbbell", dumbbell(), "two loops joined by a bridge",
                {"both_loops": (("b",), ("e1", "e2")), "one_loop": (("b",), ("e1",))}),
        Fixture("peace_sign", peace_sign(), "peace-sign graph with unit lengths"),
        Fixture("chain3", chain_of_loops(3), "chain of three loops"),
        Fixture("k4", k4(), "complete graph on four vertices"),
    ]
    return {f.name: f for f in fx}


def get(name: str) -> Fixture:
    fx = all_fixtures()
    if name not in fx:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(sorted(fx))}")
    return fx[name]
