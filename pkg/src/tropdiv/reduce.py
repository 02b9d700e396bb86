"""Dhar's burning algorithm, reduced divisors and linear equivalence."""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction

from .divisor import Divisor, PLFunction, sum_functions
from .errors import GraphMismatch, InternalError, NotEffectiveAwayFromQ
from .graph import Model, Point, Subgraph, betti1, require_connected, subgraph_from_pieces

DEFAULT_EVENT_CAP = 10**6


def event_cap() -> int:
    raw = os.environ.get("TROPDIV_EVENT_CAP")
    return int(raw) if raw else DEFAULT_EVENT_CAP


@dataclass(frozen=True)
class BurnResult:
    unburnt: Subgraph
    burns_all: bool


def _burn(model: Model, D: Divisor, q: Point) -> set[Point]:
    burnt = {q}
    fires: dict[Point, int] = {}
    stack = [q]
    while stack:
        x = stack.pop()
        for _, y in model.adj[x]:
            if y in burnt:
                continue
            fires[y] = fires.get(y, 0) + 1
            if fires[y] > D[y]:
                burnt.add(y)
                stack.append(y)
    return burnt


def dhar_burn(D: Divisor, q: Point) -> BurnResult:
    """Burn from ``q``; each chip stops one incoming fire."""
    G = D.graph
    q = G.check_point(q)
    if not D.effective_away_from(q):
        raise NotEffectiveAwayFromQ(f"{D!r} has anti-chips away from {q!r}")
    model = Model(G, D.support + [q])
    burnt = _burn(model, D, q)
    pts = [p for p in model.vertices if p not in burnt]
    segs = [s for s in model.segments if s.tail not in burnt and s.head not in burnt]
    return BurnResult(subgraph_from_pieces(G, pts, segs), not pts)


def is_reduced(D: Divisor, q: Point) -> bool:
    q = D.graph.check_point(q)
    return D.effective_away_from(q) and dhar_burn(D, q).burns_all


def _dhar_loop(D: Divisor, q: Point, witness: bool):
    """Iterate burn-and-fire from ``q`` on a divisor effective away from ``q``."""
    G = D.graph
    cap = event_cap()
    thetas = []
    for _ in range(cap):
        model = Model(G, D.support + [q])
        burnt = _burn(model, D, q)
        if len(burnt) == len(model.vertices):
            return D, thetas
        exits = []
        for x in model.vertices:
            if x in burnt:
                continue
            for i, y in model.adj[x]:
                if y in burnt:
                    exits.append((x, model.segments[i]))
        eps = min(s.length for _, s in exits)
        c = dict(D.items())
        extra: dict[str, list] = {}
        for x, s in exits:
            c[x] -= 1
            y = model.along(s, x, eps)
            c[y] = c.get(y, 0) + 1
            if witness and eps < s.length:
                t = s.a + eps if x == s.tail else s.b - eps
                extra.setdefault(s.edge, []).append((t, eps))
        if witness:
            values = {p: (eps if p in burnt else Fraction(0)) for p in model.vertices}
            thetas.append(PLFunction.on_model(model, values, extra))
        D = Divisor._raw(G, c)
    raise InternalError(f"burning did not terminate within {cap} firings (base {q!r})")


def _effective_away(D: Divisor, q: Point, witness: bool):
    """Move every anti-chip to ``q``.

    An anti-chip ``-m x`` is traded for ``R - (g + m) q`` where ``R`` is the
    x-reduced form of the degree-g divisor ``(g + m) q - m x``; degree-g
    divisors are always equivalent to effective ones, so ``R >= 0``.
    """
    G = D.graph
    bad = [(x, -k) for x, k in D.items() if k < 0 and x != q]
    if not bad:
        return D, []
    g = betti1(G)
    out = Divisor._raw(G, {p: k for p, k in D.items() if k > 0 or p == q})
    fs = []
    for x, m in bad:
        E = Divisor._raw(G, {q: g + m, x: -m})
        R, thetas = _dhar_loop(E, x, witness)
        if R[x] < 0:
            raise InternalError(f"degree-g divisor {E!r} has no effective representative")
        out = out + R.plus(q, -(g + m))
        fs.extend(thetas)
    return out, fs


def reduce(D: Divisor, q: Point) -> tuple[Divisor, PLFunction]:
    """The q-reduced divisor equivalent to ``D`` and a function ``f`` with
    ``D + div(f)`` equal to it."""
    G = D.graph
    require_connected(G)
    q = G.check_point(q)
    E, pre = _effective_away(D, q, True)
    R, thetas = _dhar_loop(E, q, True)
    return R, sum_functions(G, pre + thetas)


def reduced(D: Divisor, q: Point) -> Divisor:
    """Like :func:`reduce` but without building the witness."""
    require_connected(D.graph)
    q = D.graph.check_point(q)
    E, _ = _effective_away(D, q, False)
    return _dhar_loop(E, q, False)[0]


def is_equivalent(D1: Divisor, D2: Divisor) -> bool:
    if D1.graph != D2.graph:
        raise GraphMismatch("divisors live on different graphs")
    if D1.degree() != D2.degree():
        return False
    q = Point(vertex=D1.graph.base_vertex)
    return reduced(D1 - D2, q).is_zero()


def effective_rep(D: Divisor, q: Point | None = None) -> Divisor | None:
    """An effective divisor equivalent to ``D`` (the q-reduced one), or None."""
    if D.degree() < 0:
        return None
    if q is None:
        q = Point(vertex=D.graph.base_vertex)
    R = reduced(D, q)
    return R if R.is_effective() else None
