"""Randomized verification suites behind the command-line checks."""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field

from . import fixtures
from .cover import cover_genus, enumerate_covers
from .divisor import div_of
from .errors import GenericityFailure
from .graph import MetricGraph, Point, betti1, first_spanning_tree, format_fraction, is_connected
from .io import format_divisor
from .jacobian import abel_jacobi, homology_basis, kirchhoff_check, torus_eq
from .prym import abel_prym_fiber, relative_spanning_trees
from .rank import RankSolver, riemann_roch_residual
from .reduce import is_equivalent, reduce
from .sampling import (random_divisor, random_generic_rep, random_pl_function, random_point,
                       with_random_lengths)


@dataclass
class Check:
    name: str
    inputs: str
    ok: bool
    values: dict = field(default_factory=dict)

    def line(self) -> str:
        digest = hashlib.sha256(self.inputs.encode()).hexdigest()[:12]
        vals = " ".join(f"{k}={v}" for k, v in self.values.items())
        return f"{'PASS' if self.ok else 'FAIL'} {self.name} digest={digest} {vals}".rstrip()


def _fmt(x) -> str:
    return format_fraction(x)


def rr_suite(name: str, G: MetricGraph, rng: random.Random, trials: int) -> list[Check]:
    g = betti1(G)
    solver = RankSolver(G)
    out = []
    for i in range(trials):
        D = random_divisor(G, rng, rng.randint(-2, 2 * g))
        rD, rK, rhs = riemann_roch_residual(D, solver)
        out.append(Check(f"rr[{name}#{i}]", format_divisor(D), rD - rK == rhs,
                         {"r_D": rD, "r_K-D": rK, "d-g+1": rhs}))
    return out


def kirchhoff_suite(name: str, G: MetricGraph, rng: random.Random, trials: int) -> list[Check]:
    out = []
    for i in range(trials):
        H = with_random_lengths(G, rng) if i else G
        det, ts = kirchhoff_check(H)
        lengths = ",".join(_fmt(e.length) for e in H.edges)
        out.append(Check(f"kirchhoff[{name}#{i}]", lengths, det == ts, {"det": _fmt(det), "tree_sum": _fmt(ts)}))
    return out


def reduce_suite(name: str, G: MetricGraph, rng: random.Random, trials: int) -> list[Check]:
    out = []
    for i in range(trials):
        D = random_divisor(G, rng, rng.randint(0, 3))
        f = random_pl_function(G, rng)
        q = random_point(G, rng)
        R1, w1 = reduce(D, q)
        R2, w2 = reduce(D + div_of(f), q)
        R3, _ = reduce(R1, q)
        ok = R1 == R2 == R3 and D + div_of(w1) == R1 and D + div_of(f) + div_of(w2) == R2
        out.append(Check(f"reduce[{name}#{i}]", format_divisor(D), ok, {"reduced": f'"{format_divisor(R1)}"'}))
    return out


def oracle_suite(name: str, G: MetricGraph, rng: random.Random, trials: int) -> list[Check]:
    B = homology_basis(G)
    q = Point(vertex=G.base_vertex)
    out = []
    for i in range(trials):
        d = rng.randint(0, 3)
        D1 = random_divisor(G, rng, d)
        D2 = D1 + div_of(random_pl_function(G, rng)) if rng.random() < 0.5 else random_divisor(G, rng, d)
        a = is_equivalent(D1, D2)
        b = torus_eq(abel_jacobi(D1, q, B), abel_jacobi(D2, q, B))
        out.append(Check(f"oracle[{name}#{i}]", format_divisor(D1) + "|" + format_divisor(D2), a == b,
                         {"dhar": a, "lattice": b}))
    return out


def cover_suite(name: str, G: MetricGraph) -> list[Check]:
    g = betti1(G)
    covers = enumerate_covers(G, first_spanning_tree(G))
    disconnected = 0
    ok = len(covers) == 2 ** g
    for c in covers:
        if not is_connected(c.total):
            disconnected += 1
        else:
            ok = ok and cover_genus(c) == 2 * g - 1
    ok = ok and disconnected == 1
    return [Check(f"covers[{name}]", name, ok, {"count": len(covers), "disconnected": disconnected})]


def prym_suite(name: str, G: MetricGraph, rng: random.Random, trials: int) -> list[Check]:
    out = []
    for k, c in enumerate(enumerate_covers(G, first_spanning_tree(G))):
        if not c.is_connected():
            continue
        rsts = relative_spanning_trees(c)
        resampled = 0
        for i in range(trials):
            while True:
                E0 = random_generic_rep(c, rng, rsts)
                try:
                    res = abel_prym_fiber(c, E0, strict=False)
                    break
                except GenericityFailure:
                    resampled += 1
            out.append(Check(f"prym[{name}/cover{k}#{i}]", format_divisor(E0), res.total_weight == res.expected,
                             {"reps": len(res.reps), "weight_sum": res.total_weight, "expected": res.expected}))
        if resampled:
            out.append(Check(f"prym[{name}/cover{k}]/resampled", name, True, {"count": resampled}))
    return out


SUITE_GRAPHS = ("theta", "dumbbell", "peace_sign", "chain3", "k4")
PRYM_GRAPHS = ("theta", "dumbbell", "chain3")


def check_all(seed: int, trials: int) -> list[Check]:
    rng = random.Random(seed)
    out = []
    for name in SUITE_GRAPHS:
        G = fixtures.get(name).graph
        out += rr_suite(name, G, rng, trials)
        out += kirchhoff_suite(name, G, rng, min(trials, 20))
        out += reduce_suite(name, G, rng, trials)
        out += oracle_suite(name, G, rng, trials)
        out += cover_suite(name, G)
    for name in PRYM_GRAPHS:
        out += prym_suite(name, fixtures.get(name).graph, rng, max(1, trials // 10))
    return out
