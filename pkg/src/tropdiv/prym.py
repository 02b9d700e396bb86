"""Prym divisors of a free double cover: membership, parity, weights and Abel-Prym fibers."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, floor
from typing import Iterable

from . import lattice
from .cover import DoubleCover, involute, norm
from .divisor import Divisor, PLFunction, div_of
from .errors import (DegreeNonZero, DisconnectedCover, GenericityFailure, InternalError, NotAntiSymmetric,
                     NotPrym, UnsupportedSupport, WrongDegree)
from .graph import MetricGraph, Point, betti1, complement_pieces
from .jacobian import HomologyBasis, TorusPoint, homology_basis, path_chain, period_matrix, torus_eq
from .reduce import reduce, reduced

EVEN, ODD = "even", "odd"


def _zero_class(c: DoubleCover):
    return Point(vertex=c.base.base_vertex)


def is_prym(c: DoubleCover, D: Divisor) -> bool:
    """Whether the norm of ``D`` is linearly equivalent to zero."""
    if D.degree() != 0:
        raise DegreeNonZero(f"Prym divisors have degree 0, got {D.degree()}")
    return reduced(norm(c, D), _zero_class(c)).is_zero()


def is_anti_symmetric(c: DoubleCover, D: Divisor) -> bool:
    return involute(c, D) == -D


def lift_half(c: DoubleCover, phi: PLFunction) -> PLFunction:
    """Lift a base function to the total graph at half speed.

    Vertices get half the base value.  On every linear piece of slope d the
    ``+`` lift rises with slope d up to the midpoint and then stays flat,
    while the ``-`` lift stays flat and then rises with slope d.
    """
    knots: dict[str, list] = {}
    for e in c.base.edges:
        kk = phi.knots[e.id]
        first, second = c.fibre_edges(e.id)
        plus = first if first.endswith("+") else second
        minus = second if plus == first else first
        a_pts, b_pts = [], []
        for (t0, y0), (t1, y1) in zip(kk, kk[1:]):
            mid = (t0 + t1) / 2
            rise = (y1 - y0) / 2
            a_pts += [(t0, y0 / 2), (mid, y0 / 2 + rise)]
            b_pts += [(t0, y0 / 2), (mid, y0 / 2)]
        a_pts.append((kk[-1][0], kk[-1][1] / 2))
        b_pts.append((kk[-1][0], kk[-1][1] / 2))
        knots[plus], knots[minus] = a_pts, b_pts
    vv = {v: phi.vertex_values[c.vertex_map[v]] / 2 for v in c.total.vertices}
    return PLFunction(c.total, knots, vv).simplified()


def antisymmetrize(c: DoubleCover, D: Divisor) -> tuple[Divisor, PLFunction]:
    """An equivalent divisor of the form ``E - iota(E)`` and a function ``f``
    with ``D + div(f)`` equal to it."""
    if D.degree() != 0:
        raise DegreeNonZero(f"Prym divisors have degree 0, got {D.degree()}")
    R, phi = reduce(norm(c, D), _zero_class(c))
    if not R.is_zero():
        raise NotPrym("the norm is not equivalent to zero")
    f = lift_half(c, phi)
    out = D + div_of(f)
    if not is_anti_symmetric(c, out):
        raise InternalError("half-speed lift did not produce an anti-symmetric divisor")
    return out, f


def parity(c: DoubleCover, A: Divisor) -> str:
    """Parity of ``deg E`` for an anti-symmetric ``A = E - iota(E)``."""
    if not is_anti_symmetric(c, A):
        raise NotAntiSymmetric("parity needs a divisor of the form E - iota(E)")
    return ODD if A.positive_part().degree() % 2 else EVEN


def class_parity(c: DoubleCover, D: Divisor) -> str:
    """Parity of any Prym divisor, anti-symmetrizing it first when needed."""
    if not is_anti_symmetric(c, D):
        D, _ = antisymmetrize(c, D)
    return parity(c, D)


# ----------------------------------------------------------------------------
# relative connectivity


def _complement_count(G: MetricGraph, points, edges) -> int:
    return len(complement_pieces(G, points, edges))


def _split_removed(removed):
    pts = [r for r in removed if isinstance(r, Point)]
    edges = [r for r in removed if isinstance(r, str)]
    return pts, edges


def is_relatively_connected(c: DoubleCover, removed: Iterable[Point | str] = ()) -> bool:
    """Whether every component of the base minus ``removed`` has a connected preimage.

    Each base component's preimage is a union of total components, so the
    condition is that both complements have the same number of components.
    """
    pts, edges = _split_removed(list(removed))
    t_pts = [q for p in pts for q in c.lifts(p)]
    t_edges = [x for e in edges for x in c.fibre_edges(e)]
    return _complement_count(c.base, pts, edges) == _complement_count(c.total, t_pts, t_edges)


@dataclass(frozen=True)
class RelativeSpanningTree:
    removed: tuple[str, ...]
    components: int


def relative_spanning_trees(c: DoubleCover) -> list[RelativeSpanningTree]:
    """All sets of g-1 base edges whose removal leaves a relatively connected,
    genus-one-per-component graph."""
    if not c.is_connected():
        raise DisconnectedCover("relative spanning trees need a connected cover")
    G = c.base
    g = betti1(G)
    out = []
    for combo in itertools.combinations(G.edge_ids, g - 1):
        pieces = complement_pieces(G, (), combo)
        if all(pc.genus == 1 for pc in pieces) and is_relatively_connected(c, combo):
            out.append(RelativeSpanningTree(combo, len(pieces)))
    for combo in itertools.combinations(G.edge_ids, g):
        if is_relatively_connected(c, combo):
            raise InternalError(f"removing {g} edges {combo} left a relatively connected graph")
    return out


# ----------------------------------------------------------------------------
# weights and the Abel-Prym map


def _check_interior(E: Divisor):
    if any(p.vertex is not None for p in E.support):
        raise UnsupportedSupport("support must lie in edge interiors")


def weight(c: DoubleCover, E: Divisor) -> int:
    """Weight of ``E - iota(E)`` for effective ``E`` of degree g-1 on edge interiors.

    Zero unless the norm is multiplicity free and its complement is relatively
    connected; otherwise 2^(k-1) where k counts the components of the base
    graph minus the norm. This is the local degree of the Abel-Prym map and
    makes the weights of a generic fiber sum to 2^(g-1).
    """
    g = betti1(c.base)
    if not E.is_effective():
        raise UnsupportedSupport("weights are defined for effective divisors")
    if E.degree() != g - 1:
        raise WrongDegree(f"expected degree {g - 1}, got {E.degree()}")
    _check_interior(E)
    N = norm(c, E)
    if any(k > 1 for _, k in N.items()):
        return 0
    if not is_relatively_connected(c, N.support):
        return 0
    return 2 ** (_complement_count(c.base, N.support, ()) - 1)


@dataclass(frozen=True)
class PrymClass:
    point: TorusPoint
    parity: str


@dataclass(frozen=True)
class _Frame:
    """Abel-Jacobi data of the total graph used for Prym coordinates."""

    basis: HomologyBasis
    periods: tuple
    inverse: list
    root: Point
    sigma: dict  # total edge -> cycle coefficient vector
    tail_coords: dict  # total vertex -> coordinates


def _frame(c: DoubleCover) -> _Frame:
    B = homology_basis(c.total)
    M = period_matrix(B)
    sigma = {e.id: [cyc.get(e.id, 0) for cyc in B.cycles] for e in c.total.edges}
    coords = {}
    for v in c.total.vertices:
        chain = path_chain(B, Point(vertex=v))
        coords[v] = [sum((k * chain[e] for e, k in cyc.items() if e in chain), Fraction(0)) for cyc in B.cycles]
    return _Frame(B, M, lattice.inverse(M), Point(vertex=c.total.base_vertex), sigma, coords)


def _prym_coords(c: DoubleCover, fr: _Frame, E: Divisor) -> list[Fraction]:
    h = len(fr.periods)
    out = [Fraction(0)] * h
    for p, k in E.items():
        q = c.involute_point(p)
        for x, s in ((p, k), (q, -k)):
            if x.vertex is not None:
                cx = fr.tail_coords[x.vertex]
            else:
                e = c.total.edge(x.edge)
                cx = [a + x.offset * b for a, b in zip(fr.tail_coords[e.u], fr.sigma[e.id])]
            for i in range(h):
                out[i] += s * cx[i]
    return out


def abel_prym(c: DoubleCover, E: Divisor, frame: _Frame | None = None) -> PrymClass:
    """Class of ``E - iota(E)`` in Jacobian coordinates of the total graph."""
    if E.graph != c.total:
        raise UnsupportedSupport("E must live on the total graph")
    fr = frame or _frame(c)
    pt = TorusPoint(tuple(_prym_coords(c, fr, E)), fr.periods)
    return PrymClass(pt, ODD if E.degree() % 2 else EVEN)


@dataclass(frozen=True)
class WeightedRep:
    E: Divisor
    weight: int


@dataclass(frozen=True)
class Family:
    """A cell carrying a positive-dimensional family of solutions."""

    cell: tuple[str, ...]
    dimension: int


@dataclass
class FiberResult:
    reps: list[WeightedRep]
    families: list[Family] = field(default_factory=list)
    cells: int = 0
    expected: int = 0

    @property
    def total_weight(self) -> int:
        return sum(r.weight for r in self.reps)


def _strictly_feasible(A: list[list[Fraction]], b: list[Fraction]) -> bool:
    """Whether ``A x < b`` has a real solution (Fourier-Motzkin elimination)."""
    rows = [(list(a), bb) for a, bb in zip(A, b)]
    n = len(A[0]) if A else 0
    for j in range(n):
        pos, neg, rest = [], [], []
        for a, bb in rows:
            if a[j] > 0:
                pos.append((a, bb))
            elif a[j] < 0:
                neg.append((a, bb))
            else:
                rest.append((a, bb))
        for ap, bp in pos:
            for an, bn in neg:
                lp, ln = -an[j], ap[j]
                rest.append(([lp * x + ln * y for x, y in zip(ap, an)], lp * bp + ln * bn))
        rows = rest
    return all(bb > 0 for _, bb in rows)


def _solve_cell(W: list[list[Fraction]], hvec: list[Fraction], lengths: list[Fraction]):
    """Solutions ``t`` in the open box of ``t W - h`` integral.

    Returns ``("finite", interior_solutions, boundary_count)`` or
    ``("family", dimension)`` when a positive-dimensional set of solutions
    meets the open box, or ``("empty",)``.
    """
    d = len(W)
    m = len(hvec)
    if d == 0:
        ok = all(x.denominator == 1 for x in hvec)
        return ("finite", [()] if ok else [], 0)
    cols = lattice.transpose(W)  # m columns, each a d-vector
    _, piv = lattice.rref(lattice.transpose(cols))  # pivot columns of W
    r = len(piv)
    WJ = [[W[i][j] for j in piv] for i in range(d)]
    lo, hi = [], []
    for jj, j in enumerate(piv):
        mn = sum((min(Fraction(0), lengths[i] * W[i][j]) for i in range(d)), Fraction(0)) - hvec[j]
        mx = sum((max(Fraction(0), lengths[i] * W[i][j]) for i in range(d)), Fraction(0)) - hvec[j]
        lo.append(ceil(mn))
        hi.append(floor(mx))
    if r == d:
        inv = lattice.inverse(WJ)
        sols, boundary = [], 0
        for k in itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi))):
            target = [hvec[j] + k[jj] for jj, j in enumerate(piv)]
            t = lattice.vecmat(target, inv)
            if any(x < 0 or x > L for x, L in zip(t, lengths)):
                continue
            img = lattice.vecmat(t, W)
            if any((img[j] - hvec[j]).denominator != 1 for j in range(m)):
                continue
            if any(x == 0 or x == L for x, L in zip(t, lengths)):
                boundary += 1
                continue
            sols.append(tuple(t))
        return ("finite", sols, boundary)
    # rank-deficient: the other columns are determined by the pivot ones
    others = [j for j in range(m) if j not in piv]
    Cs = {}
    for j in others:
        R, _ = lattice.rref([WJ[i] + [W[i][j]] for i in range(d)])
        Cs[j] = [R[jj][r] for jj in range(r)]
    for k in itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi))):
        target = [hvec[j] + k[jj] for jj, j in enumerate(piv)]
        if any((sum((target[jj] * Cs[j][jj] for jj in range(r)), Fraction(0)) - hvec[j]).denominator != 1
               for j in others):
            continue
        # t WJ = target and 0 < t < L
        A, b = [], []
        for i in range(d):
            e = [Fraction(0)] * d
            e[i] = Fraction(-1)
            A.append(e)
            b.append(Fraction(0))
            e2 = [Fraction(0)] * d
            e2[i] = Fraction(1)
            A.append(e2)
            b.append(lengths[i])
        eqA, eqb = [], []
        for jj in range(r):
            eqA.append([WJ[i][jj] for i in range(d)])
            eqb.append(target[jj])
        if _feasible_with_equalities(eqA, eqb, A, b):
            return ("family", d - r)
    return ("empty",)


def _feasible_with_equalities(eqA, eqb, A, b) -> bool:
    """Open feasibility of ``eqA x = eqb, A x < b`` by eliminating the equalities."""
    n = len(A[0]) if A else 0
    if not eqA:
        return _strictly_feasible(A, b)
    R, piv = lattice.rref([row + [v] for row, v in zip(eqA, eqb)])
    if n in piv:
        return False
    free = [j for j in range(n) if j not in piv]
    # x_p = R[row][n] - sum_f R[row][f] x_f
    A2, b2 = [], []
    for a, bb in zip(A, b):
        coef = [a[f] for f in free]
        const = Fraction(0)
        for row, p in enumerate(piv):
            const += a[p] * R[row][n]
            for fi, f in enumerate(free):
                coef[fi] -= a[p] * R[row][f]
        A2.append(coef)
        b2.append(bb - const)
    if not free:
        return all(bb > 0 for bb in b2)
    return _strictly_feasible(A2, b2)


def check_generic(c: DoubleCover, E0: Divisor) -> None:
    g = betti1(c.base)
    if not c.is_connected():
        raise DisconnectedCover("fibers need a connected cover")
    if not E0.is_effective() or E0.degree() != g - 1:
        raise GenericityFailure(f"representative must be effective of degree {g - 1}")
    if any(p.vertex is not None for p in E0.support):
        raise GenericityFailure("representative touches a vertex")
    if weight(c, E0) == 0:
        raise GenericityFailure("representative has multiplicities or a complement that is not relatively connected")


def cell_system(c: DoubleCover, fr: _Frame, cell: tuple[str, ...], target: list[Fraction]):
    """``(W, h, lengths)`` so that points of the cell with offsets t hit the
    target class exactly when ``t W - h`` is an integer vector."""
    T = c.total
    base = [Fraction(0)] * len(fr.periods)
    rows = []
    for eid in cell:
        e = T.edge(eid)
        ie = T.edge(c.edge_involution[eid])
        rows.append([a - b for a, b in zip(fr.sigma[eid], fr.sigma[ie.id])])
        for i, (a, b) in enumerate(zip(fr.tail_coords[e.u], fr.tail_coords[ie.u])):
            base[i] += a - b
    W = lattice.matmul(rows, fr.inverse) if rows else []
    hvec = lattice.vecmat([t - b0 for t, b0 in zip(target, base)], fr.inverse)
    return W, hvec, [T.edge(eid).length for eid in cell]


def cell_kind(c: DoubleCover, E: Divisor, cell: Iterable[str]) -> str:
    """``"finite"``, ``"family"`` or ``"empty"``: how the points of ``cell``
    (a multiset of total edges) meet the Abel-Prym class of ``E``."""
    fr = _frame(c)
    res = _solve_cell(*cell_system(c, fr, tuple(cell), _prym_coords(c, fr, E)))
    return res[0]


def abel_prym_fiber(c: DoubleCover, E0: Divisor, strict: bool = True) -> FiberResult:
    """All effective F of degree g-1 on edge interiors with ``F - iota F ~ E0 - iota E0``.

    Each cell (multiset of total edges) is an affine piece of the Abel-Prym
    map; the lattice condition is solved exactly over the finitely many
    integer shifts that can reach the cell's offset box.
    """
    check_generic(c, E0)
    g = betti1(c.base)
    fr = _frame(c)
    target = _prym_coords(c, fr, E0)
    T = c.total
    found: dict[Divisor, int] = {}
    families = []
    cells = 0
    for cell in itertools.combinations_with_replacement(T.edge_ids, g - 1):
        cells += 1
        W, hvec, lengths = cell_system(c, fr, cell, target)
        res = _solve_cell(W, hvec, lengths)
        if res[0] == "family":
            families.append(Family(cell, res[1]))
            continue
        if res[0] == "empty":
            continue
        _, sols, boundary = res
        if boundary:
            raise GenericityFailure(f"a representative in cell {cell} lies on a vertex")
        for t in sols:
            F = Divisor(T, [(T.point(eid, x), 1) for eid, x in zip(cell, t)])
            if F not in found:
                found[F] = weight(c, F)
    reps = [WeightedRep(F, w) for F, w in sorted(found.items(), key=lambda kv: [p.sort_key() for p in kv[0].support])]
    out = FiberResult(reps, families, cells, 2 ** (g - 1))
    if strict and out.total_weight != out.expected:
        raise InternalError(f"fiber weights sum to {out.total_weight}, expected {out.expected}")
    return out


def same_prym_class(c: DoubleCover, E: Divisor, F: Divisor) -> bool:
    """Whether ``E - iota E`` and ``F - iota F`` agree in the Jacobian of the total graph."""
    fr = _frame(c)
    return torus_eq(abel_prym(c, E, fr).point, abel_prym(c, F, fr).point)


# ----------------------------------------------------------------------------
# anti-invariant lattice


def prym_gram(c: DoubleCover) -> list[list[Fraction]]:
    """Gram matrix of anti-invariant integer cycles under half the length pairing.

    A chain ``y`` on base edges stands for ``y(e) e+ - y(e) e-`` upstairs;
    the lattice is the integer kernel of the boundary of such chains.
    """
    B, T = c.base, c.total
    verts = list(T.vertices)
    idx = {v: i for i, v in enumerate(verts)}
    cols = []
    for e in B.edges:
        col = [0] * len(verts)
        for sign, te in zip((1, -1), sorted(c.fibre_edges(e.id), key=lambda x: not x.endswith("+"))):
            t = T.edge(te)
            col[idx[t.v]] += sign
            col[idx[t.u]] -= sign
        cols.append(col)
    boundary = lattice.transpose(cols)
    Y = lattice.integer_kernel(boundary)
    lengths = [e.length for e in B.edges]
    return [[sum((y1[k] * y2[k] * lengths[k] for k in range(len(lengths))), Fraction(0)) for y2 in Y] for y1 in Y]
