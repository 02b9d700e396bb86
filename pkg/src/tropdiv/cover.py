"""Free double covers of metric graphs: construction, enumeration, norm and pullback."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable

from .divisor import Divisor
from .errors import DisconnectedCover, GraphMismatch, InternalError, InvariantViolation
from .graph import Edge, MetricGraph, Point, betti1, check_spanning_tree, is_connected

STRAIGHT, SWAPPED = "straight", "swapped"


@dataclass(frozen=True)
class SignAssignment:
    tree: tuple[str, ...]
    flags: tuple[tuple[str, str], ...]  # (non-tree edge, STRAIGHT | SWAPPED), sorted by edge

    @property
    def swapped(self) -> tuple[str, ...]:
        return tuple(e for e, f in self.flags if f == SWAPPED)


@dataclass(frozen=True)
class DoubleCover:
    """Total graph with its projection and sheet-swapping involution.

    Lifted edges keep the orientation of their base edge, so a point at
    offset t on a lift lies over the point at offset t on the base edge.
    """

    base: MetricGraph
    total: MetricGraph
    vertex_map: dict
    edge_map: dict
    vertex_involution: dict
    edge_involution: dict
    signs: SignAssignment | None = None

    def is_connected(self) -> bool:
        return is_connected(self.total)

    def fibre_vertices(self, v: str) -> tuple[str, str]:
        return tuple(sorted(x for x, b in self.vertex_map.items() if b == v))

    def fibre_edges(self, e: str) -> tuple[str, str]:
        return tuple(sorted(x for x, b in self.edge_map.items() if b == e))

    def project(self, p: Point) -> Point:
        p = self.total.check_point(p)
        if p.vertex is not None:
            return Point(vertex=self.vertex_map[p.vertex])
        return Point(edge=self.edge_map[p.edge], offset=p.offset)

    def involute_point(self, p: Point) -> Point:
        p = self.total.check_point(p)
        if p.vertex is not None:
            return Point(vertex=self.vertex_involution[p.vertex])
        return Point(edge=self.edge_involution[p.edge], offset=p.offset)

    def lifts(self, p: Point) -> tuple[Point, Point]:
        p = self.base.check_point(p)
        if p.vertex is not None:
            a, b = self.fibre_vertices(p.vertex)
            return Point(vertex=a), Point(vertex=b)
        a, b = self.fibre_edges(p.edge)
        return Point(edge=a, offset=p.offset), Point(edge=b, offset=p.offset)


def _lift_name(x: str, sign: str) -> str:
    return f"{x}{sign}"


def build_cover(G: MetricGraph, s: SignAssignment | None = None, *, tree=None, swapped: Iterable[str] = ()) -> DoubleCover:
    """Two copies of a spanning tree joined by lifts of the remaining edges."""
    if s is None:
        T = check_spanning_tree(G, tree)
        sw = set(swapped)
        non_tree = [e for e in G.edge_ids if e not in set(T)]
        unknown = sw - set(non_tree)
        if unknown:
            raise InvariantViolation(f"only non-tree edges can be swapped, got {sorted(unknown)}")
        s = SignAssignment(T, tuple((e, SWAPPED if e in sw else STRAIGHT) for e in non_tree))
    T = check_spanning_tree(G, s.tree)
    flags = dict(s.flags)
    if set(flags) != set(G.edge_ids) - set(T):
        raise InvariantViolation("need exactly one flag per non-tree edge")
    vertices, vmap, vinv = [], {}, {}
    for v in G.vertices:
        a, b = _lift_name(v, "+"), _lift_name(v, "-")
        vertices += [a, b]
        vmap[a] = vmap[b] = v
        vinv[a], vinv[b] = b, a
    edges, emap, einv = [], {}, {}
    for e in G.edges:
        a, b = _lift_name(e.id, "+"), _lift_name(e.id, "-")
        if flags.get(e.id) == SWAPPED:
            edges.append(Edge(a, _lift_name(e.u, "+"), _lift_name(e.v, "-"), e.length))
            edges.append(Edge(b, _lift_name(e.u, "-"), _lift_name(e.v, "+"), e.length))
        else:
            edges.append(Edge(a, _lift_name(e.u, "+"), _lift_name(e.v, "+"), e.length))
            edges.append(Edge(b, _lift_name(e.u, "-"), _lift_name(e.v, "-"), e.length))
        emap[a] = emap[b] = e.id
        einv[a], einv[b] = b, a
    return DoubleCover(G, MetricGraph(vertices, edges), vmap, emap, vinv, einv, s)


def enumerate_covers(G: MetricGraph, T: Iterable[str]) -> list[DoubleCover]:
    """All 2^g flag choices; index 0 is the all-straight (disconnected) cover."""
    T = check_spanning_tree(G, T)
    non_tree = [e for e in G.edge_ids if e not in set(T)]
    out = []
    for combo in itertools.product((STRAIGHT, SWAPPED), repeat=len(non_tree)):
        out.append(build_cover(G, SignAssignment(T, tuple(zip(non_tree, combo)))))
    return out


def cover_genus(c: DoubleCover) -> int:
    if not c.is_connected():
        raise DisconnectedCover("the total graph is disconnected")
    g = betti1(c.total)
    if g != 2 * betti1(c.base) - 1:
        raise InternalError(f"connected double cover has genus {g}, base genus {betti1(c.base)}")
    return g


def validate_cover(c: DoubleCover) -> None:
    """Check the structural invariants of a (possibly hand-written) cover."""
    B, T = c.base, c.total
    if set(c.vertex_map) != set(T.vertices) or set(c.edge_map) != set(e.id for e in T.edges):
        raise InvariantViolation("projection must be defined on every total vertex and edge")
    for v in B.vertices:
        if len(c.fibre_vertices(v)) != 2:
            raise InvariantViolation(f"base vertex {v!r} needs exactly 2 preimages")
    for e in B.edges:
        if len(c.fibre_edges(e.id)) != 2:
            raise InvariantViolation(f"base edge {e.id!r} needs exactly 2 preimages")
    for te in T.edges:
        be = B.edge(c.edge_map[te.id])
        if te.length != be.length:
            raise InvariantViolation(f"lift {te.id!r} does not preserve length")
        if (c.vertex_map[te.u], c.vertex_map[te.v]) != (be.u, be.v):
            raise InvariantViolation(f"lift {te.id!r} does not lie over the ends of {be.id!r}")
    for inv, items, proj in ((c.vertex_involution, T.vertices, c.vertex_map),
                             (c.edge_involution, [e.id for e in T.edges], c.edge_map)):
        if set(inv) != set(items):
            raise InvariantViolation("involution must be defined everywhere")
        for x in items:
            y = inv[x]
            if y == x:
                raise InvariantViolation(f"involution fixes {x!r} (cover must be fixed-point free)")
            if inv.get(y) != x:
                raise InvariantViolation("involution must have order 2")
            if proj[y] != proj[x]:
                raise InvariantViolation("involution must preserve fibres")
    for te in T.edges:
        ie = T.edge(c.edge_involution[te.id])
        if (ie.u, ie.v) != (c.vertex_involution[te.u], c.vertex_involution[te.v]):
            raise InvariantViolation(f"involution is not a graph automorphism at {te.id!r}")


def _require(D: Divisor, G: MetricGraph, what: str):
    if D.graph != G:
        raise GraphMismatch(f"divisor must live on the {what} graph")


def norm(c: DoubleCover, D: Divisor) -> Divisor:
    """Push chips down along the projection."""
    _require(D, c.total, "total")
    out: dict[Point, int] = {}
    for p, k in D.items():
        q = c.project(p)
        out[q] = out.get(q, 0) + k
    return Divisor._raw(c.base, out)


def involute(c: DoubleCover, D: Divisor) -> Divisor:
    _require(D, c.total, "total")
    return Divisor._raw(c.total, {c.involute_point(p): k for p, k in D.items()})


def pullback(c: DoubleCover, D: Divisor) -> Divisor:
    _require(D, c.base, "base")
    out: dict[Point, int] = {}
    for p, k in D.items():
        for q in c.lifts(p):
            out[q] = out.get(q, 0) + k
    return Divisor._raw(c.total, out)
