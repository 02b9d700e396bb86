"""Rank of divisors and the Riemann-Roch residual."""

from __future__ import annotations

from .divisor import Divisor, canonical
from .graph import MetricGraph, Model, Point, betti1, require_connected
from .reduce import reduced


def rank_determining_set(G: MetricGraph) -> list[Point]:
    """Vertices of the coarsest loopless model of ``G``.

    The vertex set of a loopless model is rank-determining, so it is enough
    to subtract points from this finite set.
    """
    return Model(G, loopless=True).vertices


class RankSolver:
    """Rank computations on one graph, sharing a memo table between calls.

    Uses ``r(D) = 1 + min_s r(D - s)`` over the rank-determining set for
    effective classes, with ``r = -1`` for classes with no effective member.
    Subproblems are keyed by their reduced form at the base vertex.
    """

    def __init__(self, G: MetricGraph):
        require_connected(G)
        self.graph = G
        self.base = Point(vertex=G.base_vertex)
        self.S = rank_determining_set(G)
        self.memo: dict[Divisor, int] = {}

    def _rank_effective(self, E: Divisor) -> int:
        key = reduced(E, self.base)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        best = E.degree()
        for s in self.S:
            Rs = reduced(key, s)
            if Rs[s] == 0:
                best = 0
                break
            best = min(best, 1 + self._rank_effective(Rs.plus(s, -1)))
            if best == 0:
                break
        self.memo[key] = best
        return best

    def rank(self, D: Divisor, use_shortcut: bool = True) -> int:
        if D.graph != self.graph:
            D = Divisor._raw(self.graph, dict(D.items()))
        d = D.degree()
        if d < 0:
            return -1
        g = betti1(self.graph)
        if use_shortcut and d > 2 * g - 2:
            K = canonical(self.graph)
            if not reduced(K - D, self.base).is_effective():
                return d - g
        R = reduced(D, self.base)
        if not R.is_effective():
            return -1
        return self._rank_effective(R)


def rank(D: Divisor, use_shortcut: bool = True, solver: RankSolver | None = None) -> int:
    """Largest ``r`` such that ``D - E`` is equivalent to an effective divisor
    for every effective ``E`` of degree ``r`` (``-1`` if ``D`` itself is not)."""
    solver = solver or RankSolver(D.graph)
    return solver.rank(D, use_shortcut)


def riemann_roch_residual(D: Divisor, solver: RankSolver | None = None) -> tuple[int, int, int]:
    """``(r(D), r(K - D), d - g + 1)``, both ranks computed from scratch."""
    G = D.graph
    solver = solver or RankSolver(G)
    K = canonical(G)
    return (solver.rank(D, use_shortcut=False), solver.rank(K - D, use_shortcut=False),
            D.degree() - betti1(G) + 1)
