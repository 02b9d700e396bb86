"""Homology bases, period matrices, Abel-Jacobi coordinates and the Kirchhoff identity."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from . import lattice
from .divisor import Divisor
from .errors import LatticeMismatch, NotASpanningTree, UnsupportedSupport
from .graph import (MetricGraph, Point, check_spanning_tree, complement_components, first_spanning_tree,
                    require_connected, spanning_trees, tree_path)


@dataclass(frozen=True)
class HomologyBasis:
    """One oriented cycle per non-tree edge.

    ``cycles[i]`` maps edge ids to +1/-1 relative to each edge's stored
    orientation.  A cycle runs along its non-tree edge from the lower-id
    endpoint and returns through the tree, unless that edge is listed in
    ``reversed_edges``.
    """

    graph: MetricGraph
    tree: tuple[str, ...]
    non_tree: tuple[str, ...]
    cycles: tuple[dict, ...]
    root: str
    reversed_edges: tuple[str, ...] = ()

    @property
    def genus(self) -> int:
        return len(self.cycles)


def homology_basis(G: MetricGraph, T: Iterable[str] | None = None, reverse: Iterable[str] = ()) -> HomologyBasis:
    require_connected(G)
    T = check_spanning_tree(G, first_spanning_tree(G) if T is None else T)
    reverse = tuple(sorted(reverse))
    tree = set(T)
    non_tree = tuple(eid for eid in G.edge_ids if eid not in tree)
    bad = [eid for eid in reverse if eid not in non_tree]
    if bad:
        raise NotASpanningTree(f"cannot reverse tree or unknown edges {bad}")
    cycles = []
    for eid in non_tree:
        e = G.edge(eid)
        if e.is_loop or e.u <= e.v:
            start, end, sign = e.u, e.v, 1
        else:
            start, end, sign = e.v, e.u, -1
        chain = {eid: sign}
        for tid, s in tree_path(G, T, end, start):
            chain[tid] = chain.get(tid, 0) + s
        if eid in reverse:
            chain = {k: -v for k, v in chain.items()}
        cycles.append({k: v for k, v in chain.items() if v})
    return HomologyBasis(G, T, non_tree, tuple(cycles), G.base_vertex, reverse)


def period_forms(B: HomologyBasis) -> list[list[dict[str, int]]]:
    """Period matrix entries as integer linear forms in the edge lengths."""
    out = []
    for ci in B.cycles:
        row = []
        for cj in B.cycles:
            row.append({e: ci[e] * cj[e] for e in sorted(ci) if e in cj})
        out.append(row)
    return out


def period_matrix(B: HomologyBasis) -> tuple[tuple[Fraction, ...], ...]:
    """Gram matrix of the cycles under the length pairing."""
    G = B.graph
    return tuple(tuple(sum((k * G.edge(e).length for e, k in form.items()), Fraction(0)) for form in row)
                 for row in period_forms(B))


# ----------------------------------------------------------------------------
# Abel-Jacobi


@dataclass(frozen=True)
class TorusPoint:
    """Coordinates in R^g, compared modulo the row lattice of ``periods``."""

    coords: tuple[Fraction, ...]
    periods: tuple[tuple[Fraction, ...], ...]

    def __add__(self, other: "TorusPoint") -> "TorusPoint":
        _same_lattice(self, other)
        return TorusPoint(tuple(a + b for a, b in zip(self.coords, other.coords)), self.periods)

    def __sub__(self, other: "TorusPoint") -> "TorusPoint":
        _same_lattice(self, other)
        return TorusPoint(tuple(a - b for a, b in zip(self.coords, other.coords)), self.periods)

    def shifted(self, row: int, k: int = 1) -> "TorusPoint":
        return TorusPoint(tuple(a + k * b for a, b in zip(self.coords, self.periods[row])), self.periods)

    def reduced(self) -> tuple[Fraction, ...]:
        """Display form: coefficients in the lattice basis taken modulo 1."""
        if not self.periods:
            return ()
        lam = lattice.vecmat(list(self.coords), lattice.inverse(self.periods))
        return tuple(x - (x.numerator // x.denominator) for x in lam)


def _same_lattice(x: TorusPoint, y: TorusPoint):
    if x.periods != y.periods:
        raise LatticeMismatch("torus points use different period lattices")


def path_chain(B: HomologyBasis, p: Point) -> dict[str, Fraction]:
    """Signed edge lengths of the tree path from the root to ``p``."""
    G = B.graph
    p = G.check_point(p)
    chain: dict[str, Fraction] = {}
    if p.vertex is not None:
        target = p.vertex
    else:
        e = G.edge(p.edge)
        target = e.u
        chain[e.id] = p.offset
    for eid, s in tree_path(G, B.tree, B.root, target):
        chain[eid] = chain.get(eid, Fraction(0)) + s * G.edge(eid).length
    return chain


def point_coords(B: HomologyBasis, p: Point) -> list[Fraction]:
    chain = path_chain(B, p)
    return [sum((k * chain[e] for e, k in c.items() if e in chain), Fraction(0)) for c in B.cycles]


def abel_jacobi(D: Divisor, base: Point, B: HomologyBasis) -> TorusPoint:
    """Sum over chips of the coordinates of a path from ``base`` to the chip."""
    g = B.genus
    c0 = point_coords(B, base)
    out = [Fraction(0)] * g
    for p, k in D.items():
        cp = point_coords(B, p)
        for i in range(g):
            out[i] += k * (cp[i] - c0[i])
    return TorusPoint(tuple(out), period_matrix(B))


def torus_eq(x: TorusPoint, y: TorusPoint) -> bool:
    """Whether ``x - y`` lies in the integer span of the period rows."""
    _same_lattice(x, y)
    diff = [a - b for a, b in zip(x.coords, y.coords)]
    if not x.periods:
        return True
    return lattice.in_rational_row_lattice(diff, x.periods)


# ----------------------------------------------------------------------------
# Kirchhoff and rigidity


def tree_sum(G: MetricGraph) -> Fraction:
    """Sum over spanning trees of the product of the lengths of the edges outside the tree."""
    total = Fraction(0)
    for T in spanning_trees(G):
        inside = set(T)
        prod = Fraction(1)
        for e in G.edges:
            if e.id not in inside:
                prod *= e.length
        total += prod
    return total


def kirchhoff_check(G: MetricGraph) -> tuple[Fraction, Fraction]:
    """``(det of the period matrix, spanning-tree sum)``; the two agree."""
    require_connected(G)
    M = period_matrix(homology_basis(G))
    return lattice.det(M) if M else Fraction(1), tree_sum(G)


def is_rigid(D: Divisor) -> bool:
    """Whether an effective divisor on edge interiors has no other effective equivalent.

    True exactly when D has no repeated points and removing its support
    leaves the graph connected.  A repeated point always moves: firing the
    point itself pushes its chips apart.
    """
    if not D.is_effective():
        raise UnsupportedSupport("rigidity is defined for effective divisors")
    if any(p.vertex is not None for p in D.support):
        raise UnsupportedSupport("support must lie in edge interiors")
    if any(k > 1 for _, k in D.items()):
        return False
    return len(complement_components(D.graph, D.support)) == 1
