"""Divisors, piecewise-linear functions with integer slopes, and chip-firing moves."""

from __future__ import annotations

import bisect
import heapq
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import EpsTooLarge, GraphMismatch, InvariantViolation
from .graph import MetricGraph, Model, Point, Subgraph, as_fraction, format_fraction


class Divisor:
    """Finite integer combination of points of a metric graph.

    Immutable; coefficients are stored only where nonzero.
    """

    __slots__ = ("graph", "_c", "_hash")

    def __init__(self, graph: MetricGraph, coeffs: Mapping[Point, int] | Iterable[tuple[Point, int]] = ()):
        self.graph = graph
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        c: dict[Point, int] = {}
        for p, k in items:
            if not isinstance(k, int) or isinstance(k, bool):
                raise InvariantViolation(f"coefficient {k!r} is not an integer")
            p = graph.check_point(p)
            c[p] = c.get(p, 0) + k
        self._c = {p: c[p] for p in sorted(c) if c[p] != 0}
        self._hash = None

    @classmethod
    def _raw(cls, graph, c):
        d = cls.__new__(cls)
        d.graph = graph
        d._c = {p: c[p] for p in sorted(c) if c[p] != 0}
        d._hash = None
        return d

    @classmethod
    def zero(cls, graph: MetricGraph) -> "Divisor":
        return cls._raw(graph, {})

    @classmethod
    def at(cls, graph: MetricGraph, p: Point, k: int = 1) -> "Divisor":
        return cls(graph, [(p, k)])

    def __getitem__(self, p: Point) -> int:
        return self._c.get(p, 0)

    def items(self):
        return self._c.items()

    @property
    def support(self) -> list[Point]:
        return list(self._c)

    def degree(self) -> int:
        return sum(self._c.values())

    def is_zero(self) -> bool:
        return not self._c

    def is_effective(self) -> bool:
        return all(k > 0 for k in self._c.values())

    def effective_away_from(self, q: Point) -> bool:
        return all(k > 0 for p, k in self._c.items() if p != q)

    def positive_part(self) -> "Divisor":
        return Divisor._raw(self.graph, {p: k for p, k in self._c.items() if k > 0})

    def negative_part(self) -> "Divisor":
        """The effective divisor ``max(-D, 0)``."""
        return Divisor._raw(self.graph, {p: -k for p, k in self._c.items() if k < 0})

    def _check(self, other: "Divisor"):
        if self.graph != other.graph:
            raise GraphMismatch("divisors live on different graphs")

    def __add__(self, other: "Divisor") -> "Divisor":
        self._check(other)
        c = dict(self._c)
        for p, k in other._c.items():
            c[p] = c.get(p, 0) + k
        return Divisor._raw(self.graph, c)

    def __neg__(self) -> "Divisor":
        return Divisor._raw(self.graph, {p: -k for p, k in self._c.items()})

    def __sub__(self, other: "Divisor") -> "Divisor":
        return self + (-other)

    def __mul__(self, n: int) -> "Divisor":
        return Divisor._raw(self.graph, {p: n * k for p, k in self._c.items()})

    __rmul__ = __mul__

    def plus(self, p: Point, k: int = 1) -> "Divisor":
        c = dict(self._c)
        c[p] = c.get(p, 0) + k
        return Divisor._raw(self.graph, c)

    def __eq__(self, other):
        return isinstance(other, Divisor) and self.graph == other.graph and self._c == other._c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self._c.items()))
        return self._hash

    def __repr__(self):
        if not self._c:
            return "Divisor(0)"
        terms = " + ".join(f"{k}*{p!r}" for p, k in self._c.items())
        return f"Divisor({terms})"


def degree(D: Divisor) -> int:
    return D.degree()


def add(D1: Divisor, D2: Divisor) -> Divisor:
    return D1 + D2


def negate(D: Divisor) -> Divisor:
    return -D


# ----------------------------------------------------------------------------
# piecewise-linear functions


class PLFunction:
    """Continuous piecewise-linear function with integer slopes.

    Stored as a sorted list of ``(offset, value)`` knots per edge, always
    including both endpoints, plus a value for every vertex.  The knots are
    the vertices of an explicit subdivision of the graph on which the
    function is linear edge by edge.
    """

    __slots__ = ("graph", "knots", "vertex_values")

    def __init__(self, graph: MetricGraph, knots: Mapping[str, Iterable[tuple]],
                 vertex_values: Mapping[str, Fraction] | None = None):
        self.graph = graph
        vv: dict[str, Fraction] = {v: as_fraction(x) for v, x in (vertex_values or {}).items()}
        ks: dict[str, tuple[tuple[Fraction, Fraction], ...]] = {}
        for e in graph.edges:
            if e.id not in knots:
                raise InvariantViolation(f"no knots for edge {e.id!r}")
            kk = tuple((as_fraction(t), as_fraction(y)) for t, y in knots[e.id])
            if len(kk) < 2 or kk[0][0] != 0 or kk[-1][0] != e.length:
                raise InvariantViolation(f"knots on {e.id!r} must span [0, length]")
            for (t0, y0), (t1, y1) in zip(kk, kk[1:]):
                if t1 <= t0:
                    raise InvariantViolation(f"knots on {e.id!r} are not increasing")
                if ((y1 - y0) / (t1 - t0)).denominator != 1:
                    raise InvariantViolation(f"non-integer slope on {e.id!r}")
            for v, y in ((e.u, kk[0][1]), (e.v, kk[-1][1])):
                if vv.setdefault(v, y) != y:
                    raise InvariantViolation(f"discontinuity at vertex {v!r}")
            ks[e.id] = kk
        for v in graph.vertices:
            vv.setdefault(v, Fraction(0))
        self.knots = ks
        self.vertex_values = vv

    @classmethod
    def constant(cls, graph: MetricGraph, c=0) -> "PLFunction":
        c = as_fraction(c)
        return cls(graph, {e.id: [(0, c), (e.length, c)] for e in graph.edges},
                   {v: c for v in graph.vertices})

    @classmethod
    def on_model(cls, model: Model, values: Mapping[Point, Fraction],
                 extra: Mapping[str, Iterable[tuple]] = ()) -> "PLFunction":
        """Function with the given values at model vertices, linear on segments
        except at the optional extra interior knots ``{edge: [(t, value)]}``."""
        g = model.graph
        per: dict[str, dict[Fraction, Fraction]] = {e.id: {} for e in g.edges}
        for s in model.segments:
            per[s.edge][s.a] = values[s.tail]
            per[s.edge][s.b] = values[s.head]
        for eid, pts in dict(extra).items():
            for t, y in pts:
                per[eid][as_fraction(t)] = as_fraction(y)
        vv = {v: values[Point(vertex=v)] for v in g.vertices}
        return cls(g, {eid: sorted(d.items()) for eid, d in per.items()}, vv)

    def value_on_edge(self, eid: str, t: Fraction) -> Fraction:
        kk = self.knots[eid]
        i = bisect.bisect_left(kk, (t,))
        if i < len(kk) and kk[i][0] == t:
            return kk[i][1]
        (t0, y0), (t1, y1) = kk[i - 1], kk[i]
        return y0 + (y1 - y0) * (t - t0) / (t1 - t0)

    def __call__(self, p: Point) -> Fraction:
        if p.vertex is not None:
            return self.vertex_values[p.vertex]
        return self.value_on_edge(p.edge, p.offset)

    def slopes(self, eid: str) -> list[int]:
        """Slopes (in the u -> v direction) on the pieces of ``eid``."""
        kk = self.knots[eid]
        return [int((y1 - y0) / (t1 - t0)) for (t0, y0), (t1, y1) in zip(kk, kk[1:])]

    def breakpoints(self) -> list[Point]:
        pts = {Point(vertex=v) for v in self.graph.vertices}
        for eid, kk in self.knots.items():
            pts.update(Point(edge=eid, offset=t) for t, _ in kk[1:-1])
        return sorted(pts)

    def _combine(self, other: "PLFunction", op) -> "PLFunction":
        if self.graph != other.graph:
            raise GraphMismatch("functions live on different graphs")
        knots = {}
        for e in self.graph.edges:
            ts = sorted({t for t, _ in self.knots[e.id]} | {t for t, _ in other.knots[e.id]})
            knots[e.id] = [(t, op(self.value_on_edge(e.id, t), other.value_on_edge(e.id, t))) for t in ts]
        vv = {v: op(self.vertex_values[v], other.vertex_values[v]) for v in self.graph.vertices}
        return PLFunction(self.graph, knots, vv)

    def __add__(self, other: "PLFunction") -> "PLFunction":
        return self._combine(other, lambda a, b: a + b)

    def __sub__(self, other: "PLFunction") -> "PLFunction":
        return self._combine(other, lambda a, b: a - b)

    def __neg__(self) -> "PLFunction":
        return self.scaled(-1)

    def scaled(self, n: int) -> "PLFunction":
        return PLFunction(self.graph, {e: [(t, n * y) for t, y in kk] for e, kk in self.knots.items()},
                          {v: n * y for v, y in self.vertex_values.items()})

    def simplified(self) -> "PLFunction":
        """Same function with redundant (collinear) knots dropped."""
        knots = {}
        for eid, kk in self.knots.items():
            out = [kk[0]]
            for i in range(1, len(kk) - 1):
                (t0, y0), (t1, y1), (t2, y2) = out[-1], kk[i], kk[i + 1]
                if (y1 - y0) * (t2 - t1) != (y2 - y1) * (t1 - t0):
                    out.append(kk[i])
            out.append(kk[-1])
            knots[eid] = out
        return PLFunction(self.graph, knots, self.vertex_values)

    def describe(self) -> dict:
        """JSON-friendly summary: vertex values and per-edge knots with slopes."""
        return {
            "vertex_values": {v: format_fraction(y) for v, y in sorted(self.vertex_values.items())},
            "edges": {
                eid: {"knots": [format_fraction(t) for t, _ in kk], "slopes": self.slopes(eid)}
                for eid, kk in sorted(self.knots.items())
            },
        }

    def __eq__(self, other):
        if not isinstance(other, PLFunction) or self.graph != other.graph:
            return False
        a, b = self.simplified(), other.simplified()
        return a.knots == b.knots and a.vertex_values == b.vertex_values

    def __repr__(self):
        return f"PLFunction({self.describe()})"


def div_of(f: PLFunction) -> Divisor:
    """Sum of incoming slopes at every point."""
    g = f.graph
    c: dict[Point, int] = {}

    def bump(p, k):
        c[p] = c.get(p, 0) + k

    for e in g.edges:
        s = f.slopes(e.id)
        kk = f.knots[e.id]
        bump(Point(vertex=e.u), -s[0])
        bump(Point(vertex=e.v), s[-1])
        for i in range(1, len(kk) - 1):
            bump(Point(edge=e.id, offset=kk[i][0]), s[i - 1] - s[i])
    return Divisor._raw(g, c)


def canonical(graph: MetricGraph) -> Divisor:
    """``val(p) - 2`` at every vertex of the stored model."""
    return Divisor._raw(graph, {Point(vertex=v): graph.valence(v) - 2 for v in graph.vertices})


# ----------------------------------------------------------------------------
# distance to a closed set and firing from it


def _sources_on_edges(graph: MetricGraph, A: Subgraph):
    """Per-edge closed pieces of A, and vertex membership."""
    pieces: dict[str, list[tuple[Fraction, Fraction]]] = {e.id: [] for e in graph.edges}
    for eid in A.edges:
        pieces[eid].append((Fraction(0), graph.edge(eid).length))
    for eid, a, b in A.intervals:
        pieces[eid].append((as_fraction(a), as_fraction(b)))
    in_a = {v: A.contains(graph, Point(vertex=v)) for v in graph.vertices}
    return pieces, in_a


def vertex_distances(graph: MetricGraph, A: Subgraph) -> dict[str, Fraction | None]:
    pieces, in_a = _sources_on_edges(graph, A)
    dist: dict[str, Fraction | None] = {v: (Fraction(0) if in_a[v] else None) for v in graph.vertices}
    for e in graph.edges:
        for a, b in pieces[e.id]:
            for v, d in ((e.u, a), (e.v, e.length - b)):
                if dist[v] is None or d < dist[v]:
                    dist[v] = d
    heap = [(d, v) for v, d in dist.items() if d is not None]
    heapq.heapify(heap)
    done = set()
    while heap:
        d, v = heapq.heappop(heap)
        if v in done:
            continue
        done.add(v)
        for e in graph.incident(v):
            w = e.v if e.u == v else e.u
            nd = d + e.length
            if dist[w] is None or nd < dist[w]:
                dist[w] = nd
                heapq.heappush(heap, (nd, w))
    return dist


def capped_distance(graph: MetricGraph, A: Subgraph, cap) -> PLFunction:
    """The function ``x -> min(cap, dist(x, A))``."""
    cap = as_fraction(cap)
    pieces, _ = _sources_on_edges(graph, A)
    vd = vertex_distances(graph, A)
    knots = {}
    for e in graph.edges:
        L = e.length
        srcs = [(vd[e.u], Fraction(0)), (vd[e.v], L)]
        for a, b in pieces[e.id]:
            srcs += [(Fraction(0), a), (Fraction(0), b)]
        srcs = [(b0, s) for b0, s in srcs if b0 is not None]
        cand = {Fraction(0), L}
        for b0, s in srcs:
            cand.add(s)
            cand.update((s - (cap - b0), s + (cap - b0)))
        for (b1, s1) in srcs:
            for (b2, s2) in srcs:
                cand.add((b2 - b1 + s1 + s2) / 2)
        ts = sorted(t for t in cand if 0 <= t <= L)

        def val(t):
            best = cap
            for a, b in pieces[e.id]:
                if a <= t <= b:
                    return Fraction(0)
            for b0, s in srcs:
                best = min(best, b0 + abs(t - s))
            return best

        knots[e.id] = [(t, val(t)) for t in ts]
    vv = {v: (cap if d is None else min(cap, d)) for v, d in vd.items()}
    return PLFunction(graph, knots, vv).simplified()


def fire_subset(graph: MetricGraph, A: Subgraph, eps) -> Divisor:
    """Divisor of ``min(eps, dist(., A))``: one chip pushed ``eps`` out of A along each exit."""
    eps = as_fraction(eps)
    if eps <= 0:
        raise EpsTooLarge("eps must be positive")
    if A.is_empty():
        return Divisor.zero(graph)
    vd = vertex_distances(graph, A)
    for v, d in vd.items():
        if d is not None and 0 < d < eps:
            raise EpsTooLarge(f"eps-neighbourhood of A swallows vertex {v!r}")
    theta = capped_distance(graph, A, eps)
    D = div_of(theta)
    for p, k in D.items():
        if k > 0 and theta(p) != eps:
            raise EpsTooLarge(f"boundary chips collide near {p!r}")
    return D


def sum_functions(graph: MetricGraph, fs: Iterable[PLFunction]) -> PLFunction:
    """Sum of many functions with a single knot merge."""
    fs = list(fs)
    if not fs:
        return PLFunction.constant(graph, 0)
    if len(fs) == 1:
        return fs[0]
    knots = {}
    for e in graph.edges:
        ts = sorted({t for f in fs for t, _ in f.knots[e.id]})
        knots[e.id] = [(t, sum((f.value_on_edge(e.id, t) for f in fs), Fraction(0))) for t in ts]
    vv = {v: sum((f.vertex_values[v] for f in fs), Fraction(0)) for v in graph.vertices}
    return PLFunction(graph, knots, vv).simplified()
