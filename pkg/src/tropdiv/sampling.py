"""Seeded random graphs, points, divisors and piecewise-linear functions."""

from __future__ import annotations

import random
from fractions import Fraction
from math import ceil, floor

from .divisor import Divisor, PLFunction
from .graph import Edge, MetricGraph, Point


def random_length(rng: random.Random, max_num: int = 100, max_den: int = 20) -> Fraction:
    return Fraction(rng.randint(1, max_num), rng.randint(1, max_den))


def with_random_lengths(G: MetricGraph, rng: random.Random, max_num: int = 100, max_den: int = 20) -> MetricGraph:
    return MetricGraph(G.vertices, [Edge(e.id, e.u, e.v, random_length(rng, max_num, max_den)) for e in G.edges])


def random_point(G: MetricGraph, rng: random.Random, den: int = 12, vertex_bias: float = 0.25) -> Point:
    if rng.random() < vertex_bias:
        return Point(vertex=rng.choice(G.vertices))
    e = rng.choice(G.edges)
    q = rng.randint(1, den)
    t = e.length * Fraction(rng.randint(1, q), q + 1)
    return G.point(e.id, t)


def random_divisor(G: MetricGraph, rng: random.Random, degree: int, extra: int = 2, den: int = 12) -> Divisor:
    """A divisor of the given degree built from random chips and ``extra`` chip/anti-chip pairs."""
    c: dict[Point, int] = {}
    sign = 1 if degree >= 0 else -1
    for _ in range(abs(degree)):
        p = random_point(G, rng, den)
        c[p] = c.get(p, 0) + sign
    for _ in range(rng.randint(0, extra)):
        p, q = random_point(G, rng, den), random_point(G, rng, den)
        c[p] = c.get(p, 0) + 1
        c[q] = c.get(q, 0) - 1
    return Divisor(G, c)


def random_effective(G: MetricGraph, rng: random.Random, degree: int, den: int = 12) -> Divisor:
    return random_divisor(G, rng, degree, extra=0, den=den)


def random_pl_function(G: MetricGraph, rng: random.Random, max_slope: int = 3, den: int = 6) -> PLFunction:
    """Random integer-slope function: random vertex values, two slopes per edge.

    On an edge of length L with value change delta, slopes ``s1 <= delta/L <= s2``
    around the mean are joined at the point that makes the total change right.
    """
    vv = {v: Fraction(rng.randint(-4 * den, 4 * den), den) for v in G.vertices}
    knots = {}
    for e in G.edges:
        L = e.length
        delta = vv[e.v] - vv[e.u]
        m = delta / L
        s1 = floor(m) - rng.randint(0, max_slope)
        s2 = ceil(m) + rng.randint(0, max_slope)
        if s1 == s2:
            knots[e.id] = [(0, vv[e.u]), (L, vv[e.v])]
            continue
        t = (delta - s2 * L) / (s1 - s2)
        if rng.random() < 0.5:
            # slope s2 first, then s1
            t = L - t
            first = s2
        else:
            first = s1
        pts = [(Fraction(0), vv[e.u])]
        if 0 < t < L:
            pts.append((t, vv[e.u] + first * t))
        pts.append((L, vv[e.v]))
        knots[e.id] = pts
    return PLFunction(G, knots, vv)


PRIMES = (997, 1009, 1013, 1019, 1021)


def random_generic_rep(c, rng: random.Random, rsts=None) -> Divisor:
    """Degree g-1 effective divisor on a random relative spanning tree's edges,
    one chip per removed edge on a random lift, offsets with large prime denominators."""
    from .prym import relative_spanning_trees

    rsts = rsts if rsts is not None else relative_spanning_trees(c)
    chosen = rng.choice(rsts).removed
    chips = []
    for eid in chosen:
        lift = rng.choice(c.fibre_edges(eid))
        p = rng.choice(PRIMES)
        chips.append((c.total.point(lift, c.base.edge(eid).length * Fraction(rng.randint(1, p - 1), p)), 1))
    return Divisor(c.total, chips)
