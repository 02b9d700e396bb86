"""Metric multigraphs, points on them, and finite models (refinements)."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import total_ordering
from typing import Iterable, Sequence

from .errors import DisconnectedGraph, InvariantViolation, NotASpanningTree

_RATIONAL = re.compile(r"^-?\d+(/\d+)?$")


def as_fraction(x) -> Fraction:
    """Coerce ints, Fractions and ``"num/den"`` strings; floats are refused."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        if not _RATIONAL.match(s):
            raise ValueError(f"not a rational literal: {x!r}")
        return Fraction(s)
    raise TypeError(f"cannot use {type(x).__name__} as an exact rational")


def format_fraction(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class Edge:
    id: str
    u: str
    v: str
    length: Fraction

    @property
    def is_loop(self) -> bool:
        return self.u == self.v


@total_ordering
@dataclass(frozen=True)
class Point:
    """A vertex, or a point in the open interior of an edge.

    Offsets are measured from the edge's first endpoint ``u``.  Use
    :meth:`MetricGraph.point` to build normalized points; the raw constructor
    does not know edge lengths.
    """

    vertex: str | None = None
    edge: str | None = None
    offset: Fraction | None = None

    @staticmethod
    def at(vertex: str) -> "Point":
        return Point(vertex=vertex)

    @property
    def is_vertex(self) -> bool:
        return self.vertex is not None

    def sort_key(self):
        if self.vertex is not None:
            return (0, self.vertex, Fraction(0))
        return (1, self.edge, self.offset)

    def __lt__(self, other: "Point") -> bool:
        return self.sort_key() < other.sort_key()

    def __repr__(self) -> str:
        if self.vertex is not None:
            return f"<{self.vertex}>"
        return f"<{self.edge}@{format_fraction(self.offset)}>"


class MetricGraph:
    """Multigraph with positive rational edge lengths; loops and parallel edges allowed."""

    def __init__(self, vertices: Iterable[str], edges: Iterable[Edge | tuple]):
        self.vertices: tuple[str, ...] = tuple(vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise InvariantViolation("duplicate vertex id")
        es = []
        for e in edges:
            if not isinstance(e, Edge):
                eid, (u, v), length = e
                e = Edge(eid, u, v, as_fraction(length))
            elif not isinstance(e.length, Fraction):
                e = Edge(e.id, e.u, e.v, as_fraction(e.length))
            es.append(e)
        self.edges: tuple[Edge, ...] = tuple(es)
        vset = set(self.vertices)
        self._edge = {}
        for e in self.edges:
            if e.id in self._edge:
                raise InvariantViolation(f"duplicate edge id {e.id!r}")
            if e.u not in vset or e.v not in vset:
                raise InvariantViolation(f"edge {e.id!r} has an undeclared endpoint")
            if e.length <= 0:
                raise InvariantViolation(f"edge {e.id!r} must have positive length")
            self._edge[e.id] = e
        self._incident: dict[str, list[Edge]] = {v: [] for v in self.vertices}
        for e in self.edges:
            self._incident[e.u].append(e)
            if not e.is_loop:
                self._incident[e.v].append(e)
        self._key = (self.vertices, self.edges)

    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, MetricGraph) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"MetricGraph(v={len(self.vertices)}, e={len(self.edges)})"

    def edge(self, eid: str) -> Edge:
        return self._edge[eid]

    def has_edge(self, eid: str) -> bool:
        return eid in self._edge

    def incident(self, v: str) -> list[Edge]:
        return self._incident[v]

    def valence(self, v: str) -> int:
        return sum(2 if e.is_loop else 1 for e in self._incident[v])

    @property
    def edge_ids(self) -> list[str]:
        return sorted(self._edge)

    @property
    def base_vertex(self) -> str:
        """Lowest vertex id; the canonical base point."""
        return min(self.vertices)

    def point(self, edge: str, offset) -> Point:
        """Normalized point at ``offset`` along ``edge`` (endpoints become vertices)."""
        e = self._edge[edge]
        t = as_fraction(offset)
        if t < 0 or t > e.length:
            raise InvariantViolation(f"offset {t} outside edge {edge!r} of length {e.length}")
        if t == 0:
            return Point(vertex=e.u)
        if t == e.length:
            return Point(vertex=e.v)
        return Point(edge=edge, offset=t)

    def check_point(self, p: Point) -> Point:
        if p.vertex is not None:
            if p.vertex not in self._incident:
                raise InvariantViolation(f"unknown vertex {p.vertex!r}")
            return p
        if p.edge not in self._edge:
            raise InvariantViolation(f"unknown edge {p.edge!r}")
        return self.point(p.edge, p.offset)

    def total_length(self) -> Fraction:
        return sum((e.length for e in self.edges), Fraction(0))


# ----------------------------------------------------------------------------
# models


@dataclass(frozen=True)
class Segment:
    """Model edge: the piece ``[a, b]`` of an original edge."""

    edge: str
    a: Fraction
    b: Fraction
    tail: Point
    head: Point

    @property
    def length(self) -> Fraction:
        return self.b - self.a


class Model:
    """The model of ``graph`` whose vertices are the original vertices plus ``points``.

    With ``loopless=True`` every loop that would otherwise stay a single
    segment gets its midpoint as an extra vertex.
    """

    def __init__(self, graph: MetricGraph, points: Iterable[Point] = (), loopless: bool = False):
        self.graph = graph
        cuts: dict[str, set[Fraction]] = {e.id: set() for e in graph.edges}
        for p in points:
            if p.vertex is None:
                cuts[p.edge].add(p.offset)
        if loopless:
            for e in graph.edges:
                if e.is_loop and not cuts[e.id]:
                    cuts[e.id].add(e.length / 2)
        self.cuts = {eid: sorted(c) for eid, c in cuts.items()}
        verts = [Point(vertex=v) for v in graph.vertices]
        segs = []
        for e in graph.edges:
            ts = [Fraction(0)] + self.cuts[e.id] + [e.length]
            pts = [Point(vertex=e.u)] + [Point(edge=e.id, offset=t) for t in self.cuts[e.id]] + [Point(vertex=e.v)]
            verts.extend(pts[1:-1])
            for i in range(len(ts) - 1):
                segs.append(Segment(e.id, ts[i], ts[i + 1], pts[i], pts[i + 1]))
        self.vertices: list[Point] = sorted(verts)
        self.segments: list[Segment] = segs
        self.adj: dict[Point, list[tuple[int, Point]]] = {p: [] for p in self.vertices}
        for i, s in enumerate(segs):
            self.adj[s.tail].append((i, s.head))
            self.adj[s.head].append((i, s.tail))

    def valence(self, p: Point) -> int:
        return len(self.adj[p])

    def along(self, seg: Segment, start: Point, dist: Fraction) -> Point:
        """Point at distance ``dist`` from ``start`` (an end of ``seg``) inside ``seg``."""
        if start == seg.tail:
            return self.graph.point(seg.edge, seg.a + dist)
        return self.graph.point(seg.edge, seg.b - dist)


# ----------------------------------------------------------------------------
# subgraphs


@dataclass(frozen=True)
class Subgraph:
    """A closed subset: whole vertices, whole closed edges, and closed sub-intervals."""

    vertices: frozenset = frozenset()
    edges: frozenset = frozenset()
    intervals: tuple = ()  # (edge id, a, b) with a <= b

    def is_empty(self) -> bool:
        return not (self.vertices or self.edges or self.intervals)

    def contains(self, graph: MetricGraph, p: Point) -> bool:
        if p.vertex is not None:
            if p.vertex in self.vertices:
                return True
            for e in graph.incident(p.vertex):
                if e.id in self.edges:
                    return True
                for eid, a, b in self.intervals:
                    if eid == e.id and ((e.u == p.vertex and a == 0) or (e.v == p.vertex and b == e.length)):
                        return True
            return False
        if p.edge in self.edges:
            return True
        return any(eid == p.edge and a <= p.offset <= b for eid, a, b in self.intervals)


def subgraph_from_pieces(graph: MetricGraph, vertex_points, segments) -> Subgraph:
    verts = frozenset(p.vertex for p in vertex_points if p.vertex is not None)
    whole = set()
    per_edge: dict[str, list[list[Fraction]]] = {}
    for s in segments:
        if s.a == 0 and s.b == graph.edge(s.edge).length:
            whole.add(s.edge)
        else:
            per_edge.setdefault(s.edge, []).append([s.a, s.b])
    for p in vertex_points:
        if p.vertex is None and not any(s.edge == p.edge for s in segments):
            per_edge.setdefault(p.edge, []).append([p.offset, p.offset])
    intervals = []
    for eid in sorted(per_edge):
        merged: list[list[Fraction]] = []
        for a, b in sorted(per_edge[eid]):
            if merged and a <= merged[-1][1]:
                merged[-1][1] = max(merged[-1][1], b)
            else:
                merged.append([a, b])
        intervals.extend((eid, a, b) for a, b in merged)
    return Subgraph(verts, frozenset(whole), tuple(intervals))


# ----------------------------------------------------------------------------
# genus, connectivity, trees


class _UnionFind:
    def __init__(self, items=()):
        self.parent = {x: x for x in items}

    def add(self, x):
        self.parent.setdefault(x, x)

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[max(ra, rb)] = min(ra, rb)
        return True


def vertex_components(graph: MetricGraph) -> list[list[str]]:
    uf = _UnionFind(graph.vertices)
    for e in graph.edges:
        uf.union(e.u, e.v)
    comps: dict[str, list[str]] = {}
    for v in graph.vertices:
        comps.setdefault(uf.find(v), []).append(v)
    return sorted((sorted(c) for c in comps.values()), key=lambda c: c[0])


def is_connected(graph: MetricGraph) -> bool:
    return len(vertex_components(graph)) <= 1


def require_connected(graph: MetricGraph) -> None:
    if not is_connected(graph):
        raise DisconnectedGraph("operation requires a connected graph")


def betti1(graph: MetricGraph) -> int:
    """First Betti number e - v + f."""
    return len(graph.edges) - len(graph.vertices) + len(vertex_components(graph))


def genus_dec(graph: MetricGraph) -> int:
    """Sum of component genera minus the number of components plus one."""
    comps = vertex_components(graph)
    where = {v: i for i, c in enumerate(comps) for v in c}
    edges_in = [0] * len(comps)
    for e in graph.edges:
        edges_in[where[e.u]] += 1
    total = sum(edges_in[i] - len(c) + 1 for i, c in enumerate(comps))
    return total - len(comps) + 1


def spanning_trees(graph: MetricGraph) -> list[tuple[str, ...]]:
    """All spanning trees as sorted edge-id tuples, in lexicographic order."""
    require_connected(graph)
    n = len(graph.vertices)
    candidates = [eid for eid in graph.edge_ids if not graph.edge(eid).is_loop]
    trees = []
    for combo in itertools.combinations(candidates, n - 1):
        uf = _UnionFind(graph.vertices)
        if all(uf.union(graph.edge(eid).u, graph.edge(eid).v) for eid in combo):
            trees.append(combo)
    return trees


def first_spanning_tree(graph: MetricGraph) -> tuple[str, ...]:
    """Lexicographically first spanning tree (greedy over sorted edge ids)."""
    require_connected(graph)
    uf = _UnionFind(graph.vertices)
    return tuple(eid for eid in graph.edge_ids if uf.union(graph.edge(eid).u, graph.edge(eid).v))


def check_spanning_tree(graph: MetricGraph, tree: Iterable[str]) -> tuple[str, ...]:
    tree = tuple(sorted(tree))
    if len(set(tree)) != len(tree) or not all(graph.has_edge(e) for e in tree):
        raise NotASpanningTree(f"unknown or repeated edges in {tree}")
    if len(tree) != len(graph.vertices) - 1:
        raise NotASpanningTree(f"{tree} has the wrong number of edges")
    uf = _UnionFind(graph.vertices)
    for eid in tree:
        e = graph.edge(eid)
        if not uf.union(e.u, e.v):
            raise NotASpanningTree(f"{tree} contains a cycle")
    return tree


def tree_path(graph: MetricGraph, tree: Sequence[str], a: str, b: str) -> list[tuple[str, int]]:
    """Edges of the tree path from vertex ``a`` to ``b`` with traversal signs (+1 along u->v)."""
    adj: dict[str, list[tuple[str, str, int]]] = {v: [] for v in graph.vertices}
    for eid in tree:
        e = graph.edge(eid)
        adj[e.u].append((e.v, eid, 1))
        adj[e.v].append((e.u, eid, -1))
    prev: dict[str, tuple[str, str, int] | None] = {a: None}
    stack = [a]
    while stack:
        x = stack.pop()
        if x == b:
            break
        for y, eid, s in adj[x]:
            if y not in prev:
                prev[y] = (x, eid, s)
                stack.append(y)
    if b not in prev:
        raise NotASpanningTree(f"no tree path from {a} to {b}")
    path = []
    x = b
    while prev[x] is not None:
        px, eid, s = prev[x]
        path.append((eid, s))
        x = px
    path.reverse()
    return path


# ----------------------------------------------------------------------------
# subdivision and complements


def subdivide(graph: MetricGraph, points: Iterable[Point]):
    """Model of ``graph`` with each interior point promoted to a vertex.

    Returns the new graph and a function translating old points to new ones.
    New vertices are named ``edge@offset`` and split edges ``edge#k``.
    """
    model = Model(graph, [graph.check_point(p) for p in points])
    if all(not c for c in model.cuts.values()):
        return graph, lambda p: graph.check_point(p)

    def vname(p: Point) -> str:
        return p.vertex if p.vertex is not None else f"{p.edge}@{format_fraction(p.offset)}"

    vertices = list(graph.vertices)
    edges = []
    pieces: dict[str, list[tuple[Fraction, Fraction, str]]] = {}
    for e in graph.edges:
        segs = [s for s in model.segments if s.edge == e.id]
        if len(segs) == 1:
            edges.append(e)
            continue
        for k, s in enumerate(segs):
            if s.head.vertex is None:
                vertices.append(vname(s.head))
            nid = f"{e.id}#{k}"
            edges.append(Edge(nid, vname(s.tail), vname(s.head), s.length))
            pieces.setdefault(e.id, []).append((s.a, s.b, nid))
    new = MetricGraph(vertices, edges)

    def relabel(p: Point) -> Point:
        p = graph.check_point(p)
        if p.vertex is not None:
            return p
        if p.edge not in pieces:
            return p
        for a, b, nid in pieces[p.edge]:
            if a <= p.offset <= b:
                return new.point(nid, p.offset - a)
        raise InvariantViolation(f"point {p} not found after subdivision")

    return new, relabel


@dataclass
class Piece:
    """A connected component of a complement, with its model data."""

    points: list[Point]
    segments: list[Segment]
    genus: int
    subgraph: Subgraph = field(default=None)


def complement_pieces(graph: MetricGraph, removed_points: Iterable[Point] = (),
                      removed_edges: Iterable[str] = ()) -> list[Piece]:
    removed_points = {graph.check_point(p) for p in removed_points}
    removed_edges = set(removed_edges)
    for eid in removed_edges:
        if not graph.has_edge(eid):
            raise InvariantViolation(f"unknown edge {eid!r}")
    model = Model(graph, removed_points)
    alive = [p for p in model.vertices if p not in removed_points]
    uf = _UnionFind(alive)
    attach: list[tuple[Point | None, Segment]] = []
    for s in model.segments:
        if s.edge in removed_edges:
            continue
        t_rm, h_rm = s.tail in removed_points, s.head in removed_points
        if t_rm and h_rm:
            attach.append((None, s))
        elif t_rm:
            attach.append((s.head, s))
        elif h_rm:
            attach.append((s.tail, s))
        else:
            uf.union(s.tail, s.head)
            attach.append((s.tail, s))
    groups: dict[Point, tuple[list, list, list]] = {}
    for p in alive:
        groups.setdefault(uf.find(p), ([], [], []))[0].append(p)
    pieces = []
    for anchor, s in attach:
        if anchor is None:
            pieces.append(Piece([], [s], 0))
        else:
            g = groups[uf.find(anchor)]
            g[1].append(s)
            if s.tail not in removed_points and s.head not in removed_points:
                g[2].append(s)
    for pts, segs, closed in groups.values():
        pieces.append(Piece(sorted(pts), segs, len(closed) - len(pts) + 1))
    for pc in pieces:
        pc.subgraph = subgraph_from_pieces(graph, pc.points, pc.segments)
    pieces.sort(key=lambda pc: (pc.points[0].sort_key() if pc.points else (2, pc.segments[0].edge, pc.segments[0].a)))
    return pieces


def complement_components(graph: MetricGraph, removed: Iterable[Point | str] = ()) -> list[Subgraph]:
    """Connected components of the graph minus points and/or open edges.

    Each component is returned as the closure of its model pieces; a removed
    interior point splits its edge into two pieces assigned to the adjoining
    components.
    """
    pts = [r for r in removed if isinstance(r, Point)]
    edges = [r for r in removed if isinstance(r, str)]
    return [pc.subgraph for pc in complement_pieces(graph, pts, edges)]
