"""Command-line front end: ``tropdiv <command> [--key value ...]``."""

from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path

from . import fixtures, io, suites
from .cover import build_cover, cover_genus, enumerate_covers
from .errors import TropDivError
from .graph import Point, betti1, first_spanning_tree, format_fraction, is_connected
from .jacobian import abel_jacobi, homology_basis, kirchhoff_check, period_matrix
from .prym import abel_prym_fiber, relative_spanning_trees
from .rank import rank, riemann_roch_residual
from .reduce import is_equivalent, reduce


class UsageError(Exception):
    pass


def _out(line: str = ""):
    sys.stdout.write(line + "\n")


def _graph(args):
    if getattr(args, "graph", None):
        return io.load_graph(args.graph)
    if getattr(args, "fixture", None):
        try:
            return fixtures.get(args.fixture).graph
        except KeyError as exc:
            raise UsageError(str(exc.args[0])) from None
    raise UsageError("give --graph FILE or --fixture NAME")


def _divisor(args, G, attr="divisor", chips_attr="chips"):
    path = getattr(args, attr, None)
    inline = getattr(args, chips_attr, None)
    if path:
        return io.load_divisor(path, G)
    if inline is not None:
        return io.parse_chips(inline, G)
    raise UsageError(f"give --{attr.replace('_', '-')} FILE or --{chips_attr.replace('_', '-')} LIST")


def _base(args, G):
    return io.parse_point(args.base, G) if getattr(args, "base", None) else Point(vertex=G.base_vertex)


def _tree(args, G):
    if getattr(args, "tree", None):
        return tuple(t for t in args.tree.split(",") if t)
    return first_spanning_tree(G)


def _report(checks) -> int:
    for c in checks:
        _out(c.line())
    failed = sum(not c.ok for c in checks)
    _out(f"SUMMARY checks={len(checks)} pass={len(checks) - failed} fail={failed}")
    return 1 if failed else 0


def _matrix_lines(M):
    for row in M:
        _out("  [" + ", ".join(format_fraction(x) for x in row) + "]")


# ----------------------------------------------------------------------------
# commands


def cmd_reduce(args) -> int:
    G = _graph(args)
    D = _divisor(args, G)
    R, f = reduce(D, _base(args, G))
    _out(f"reduced: {io.format_divisor(R)}")
    fs = f.describe()
    _out("witness vertex values: " + ", ".join(f"{v}={x}" for v, x in fs["vertex_values"].items()))
    for eid, info in fs["edges"].items():
        _out(f"witness {eid}: knots={','.join(info['knots'])} slopes={','.join(map(str, info['slopes']))}")
    return 0


def cmd_rank(args) -> int:
    G = _graph(args)
    _out(f"rank: {rank(_divisor(args, G))}")
    return 0


def cmd_equiv(args) -> int:
    G = _graph(args)
    a = _divisor(args, G)
    b = _divisor(args, G, "divisor2", "chips2")
    _out(f"equivalent: {str(is_equivalent(a, b)).lower()}")
    return 0


def cmd_rr_check(args) -> int:
    rng = random.Random(args.seed)
    if args.graph or args.fixture:
        graphs = [(args.fixture or Path(args.graph).stem, _graph(args))]
    else:
        graphs = [(n, fixtures.get(n).graph) for n in suites.SUITE_GRAPHS]
    checks = []
    if args.divisor or args.chips is not None:
        name, G = graphs[0]
        D = _divisor(args, G)
        rD, rK, rhs = riemann_roch_residual(D)
        checks.append(suites.Check(f"rr[{name}]", io.format_divisor(D), rD - rK == rhs,
                                   {"r_D": rD, "r_K-D": rK, "d-g+1": rhs}))
    else:
        for name, G in graphs:
            checks += suites.rr_suite(name, G, rng, args.trials)
    return _report(checks)


def cmd_jacobian(args) -> int:
    G = _graph(args)
    rev = [e for e in (args.reverse or "").split(",") if e]
    B = homology_basis(G, _tree(args, G), rev)
    _out(f"genus: {B.genus}")
    _out(f"tree: {','.join(B.tree)}")
    for eid, cyc in zip(B.non_tree, B.cycles):
        _out(f"cycle {eid}: " + " ".join(f"{'+' if k > 0 else '-'}{e}" for e, k in sorted(cyc.items())))
    _out("period matrix:")
    _matrix_lines(period_matrix(B))
    return 0


def cmd_kirchhoff(args) -> int:
    G = _graph(args)
    det, ts = kirchhoff_check(G)
    return _report([suites.Check("kirchhoff", io.serialize_graph(G), det == ts,
                                 {"det": format_fraction(det), "tree_sum": format_fraction(ts)})])


def cmd_aj(args) -> int:
    G = _graph(args)
    B = homology_basis(G, _tree(args, G))
    x = abel_jacobi(_divisor(args, G), _base(args, G), B)
    _out("coords: (" + ", ".join(format_fraction(c) for c in x.coords) + ")")
    _out("lattice coords mod 1: (" + ", ".join(format_fraction(c) for c in x.reduced()) + ")")
    return 0


def cmd_covers(args) -> int:
    G = _graph(args)
    covers = enumerate_covers(G, _tree(args, G))
    if args.emit is not None:
        if not 0 <= args.emit < len(covers):
            raise UsageError(f"--emit must be in 0..{len(covers) - 1}")
        text = io.serialize_cover(covers[args.emit])
        if args.out:
            Path(args.out).write_text(text)
            _out(f"wrote {args.out}")
        else:
            sys.stdout.write(text)
        return 0
    for k, c in enumerate(covers):
        conn = is_connected(c.total)
        genus = cover_genus(c) if conn else "-"
        sw = ",".join(c.signs.swapped) or "-"
        _out(f"cover {k}: swapped={sw} connected={str(conn).lower()} genus={genus}")
    _out(f"count: {len(covers)} (2^{betti1(G)})")
    return 0


def _cover(args, G):
    if args.cover:
        return io.load_cover(args.cover, G)
    if args.fixture:
        fx = fixtures.get(args.fixture)
        if args.cover_name:
            tree, swapped = fx.covers[args.cover_name]
        elif fx.covers:
            tree, swapped = next(iter(fx.covers.values()))
        else:
            raise UsageError(f"fixture {args.fixture} has no built-in cover; give --cover FILE")
        return build_cover(G, tree=tree, swapped=swapped)
    raise UsageError("give --cover FILE")


def cmd_prym(args) -> int:
    if args.action == "check":
        rng = random.Random(args.seed)
        if args.graph or args.fixture:
            named = [(args.fixture or Path(args.graph).stem, _graph(args))]
        else:
            named = [(n, fixtures.get(n).graph) for n in suites.PRYM_GRAPHS]
        checks = []
        for name, H in named:
            checks += suites.prym_suite(name, H, rng, args.trials)
        return _report(checks)
    G = _graph(args)
    c = _cover(args, G)
    if args.action == "rst":
        for t in relative_spanning_trees(c):
            _out(f"relative spanning tree: remove {','.join(t.removed) or '-'} components={t.components}")
        return 0
    if args.rep:
        E0 = io.load_divisor(args.rep, c.total)
    elif args.chips is not None:
        E0 = io.parse_chips(args.chips, c.total)
    else:
        raise UsageError("give --rep FILE or --chips LIST (points on the total graph)")
    res = abel_prym_fiber(c, E0, strict=False)
    for r in res.reps:
        _out(f"rep: {io.format_divisor(r.E)} weight={r.weight}")
    for fam in res.families:
        _out(f"family: cell={','.join(fam.cell)} dimension={fam.dimension}")
    ok = res.total_weight == res.expected
    _out(f"{'PASS' if ok else 'FAIL'} weight_sum={res.total_weight} expected={res.expected}")
    return 0 if ok else 1


def cmd_fixtures(args) -> int:
    fx = fixtures.all_fixtures()
    if args.action == "list":
        for name, f in fx.items():
            _out(f"{name}: genus={betti1(f.graph)} {f.note}")
        return 0
    if args.name not in fx:
        raise UsageError(f"unknown fixture {args.name!r}")
    f = fx[args.name]
    if args.cover_name:
        tree, swapped = f.covers[args.cover_name]
        sys.stdout.write(io.serialize_cover(build_cover(f.graph, tree=tree, swapped=swapped)))
    else:
        sys.stdout.write(io.serialize_graph(f.graph))
    return 0


def cmd_check_all(args) -> int:
    return _report(suites.check_all(args.seed, args.trials))


# ----------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tropdiv", description="Divisors, Jacobians and Pryms of metric graphs.")
    sub = p.add_subparsers(dest="command", required=True)

    def graph_opts(sp):
        sp.add_argument("--graph", help="graph JSON file")
        sp.add_argument("--fixture", help="built-in graph name")

    def div_opts(sp, second=False):
        sp.add_argument("--divisor", help="divisor JSON file")
        sp.add_argument("--chips", help="inline divisor, e.g. u:2,e1@1/3:-1")
        if second:
            sp.add_argument("--divisor2", help="second divisor JSON file")
            sp.add_argument("--chips2", help="second inline divisor")

    sp = sub.add_parser("reduce", help="q-reduced form and witness")
    graph_opts(sp), div_opts(sp)
    sp.add_argument("--base", help="point q (vertex id or edge@offset)")
    sp.set_defaults(func=cmd_reduce)

    sp = sub.add_parser("rank", help="rank of a divisor")
    graph_opts(sp), div_opts(sp)
    sp.set_defaults(func=cmd_rank)

    sp = sub.add_parser("equiv", help="linear equivalence test")
    graph_opts(sp), div_opts(sp, second=True)
    sp.set_defaults(func=cmd_equiv)

    sp = sub.add_parser("rr-check", help="Riemann-Roch residuals on random divisors")
    graph_opts(sp), div_opts(sp)
    sp.add_argument("--trials", type=int, default=20)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_rr_check)

    sp = sub.add_parser("jacobian", help="homology basis and period matrix")
    graph_opts(sp)
    sp.add_argument("--tree", help="comma-separated spanning tree edges")
    sp.add_argument("--reverse", help="comma-separated non-tree edges whose cycles are reversed")
    sp.set_defaults(func=cmd_jacobian)

    sp = sub.add_parser("kirchhoff", help="period determinant versus spanning-tree sum")
    graph_opts(sp)
    sp.set_defaults(func=cmd_kirchhoff)

    sp = sub.add_parser("aj", help="Abel-Jacobi coordinates")
    graph_opts(sp), div_opts(sp)
    sp.add_argument("--base", help="base point")
    sp.add_argument("--tree", help="comma-separated spanning tree edges")
    sp.set_defaults(func=cmd_aj)

    sp = sub.add_parser("covers", help="list or emit the free double covers")
    graph_opts(sp)
    sp.add_argument("--tree", help="comma-separated spanning tree edges")
    sp.add_argument("--emit", type=int, help="write the k-th cover")
    sp.add_argument("--out", help="output file for --emit (default stdout)")
    sp.set_defaults(func=cmd_covers)

    sp = sub.add_parser("prym", help="Prym fibers, relative spanning trees, randomized fiber check")
    sp.add_argument("action", choices=["fiber", "rst", "check"])
    graph_opts(sp)
    sp.add_argument("--cover", help="cover JSON file")
    sp.add_argument("--cover-name", help="built-in cover of the fixture")
    sp.add_argument("--rep", help="representative E0 (divisor JSON on the total graph)")
    sp.add_argument("--chips", help="inline representative on the total graph")
    sp.add_argument("--trials", type=int, default=20)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_prym)

    sp = sub.add_parser("fixtures", help="built-in graphs")
    sp.add_argument("action", choices=["list", "show"])
    sp.add_argument("name", nargs="?")
    sp.add_argument("--cover-name", help="show a built-in cover instead of the graph")
    sp.set_defaults(func=cmd_fixtures)

    sp = sub.add_parser("check-all", help="run every randomized suite")
    sp.add_argument("--trials", type=int, default=20)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_check_all)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        return args.func(args)
    except (UsageError, TropDivError, OSError, KeyError) as exc:
        sys.stderr.write(f"tropdiv: error: {type(exc).__name__}: {exc}\n")
        return 2


def main(argv=None) -> None:
    sys.exit(run(argv))
