"""JSON file formats for graphs, divisors and covers."""

from __future__ import annotations

import json
from pathlib import Path

from .cover import DoubleCover, SignAssignment, validate_cover, STRAIGHT, SWAPPED
from .divisor import Divisor
from .errors import InvariantViolation, ParseError
from .graph import Edge, MetricGraph, Point, as_fraction, format_fraction


def _loads(text: str, where: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{where}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _need(obj, key, kind, where):
    if not isinstance(obj, dict) or key not in obj:
        raise ParseError(f"{where}: missing field {key!r}")
    val = obj[key]
    if not isinstance(val, kind) or isinstance(val, bool):
        raise ParseError(f"{where}.{key}: expected {getattr(kind, '__name__', kind)}")
    return val


def _rational(x, where):
    if isinstance(x, float) or isinstance(x, bool):
        raise ParseError(f"{where}: expected an exact rational like \"3/2\", got {x!r}")
    try:
        return as_fraction(x)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{where}: {exc}") from None


# ----------------------------------------------------------------------------
# graphs


def graph_to_obj(G: MetricGraph) -> dict:
    return {
        "vertices": list(G.vertices),
        "edges": [{"id": e.id, "ends": [e.u, e.v], "length": format_fraction(e.length)} for e in G.edges],
    }


def graph_from_obj(obj, where: str = "graph") -> MetricGraph:
    vs = _need(obj, "vertices", list, where)
    if not all(isinstance(v, str) for v in vs):
        raise ParseError(f"{where}.vertices: ids must be strings")
    edges = []
    for i, e in enumerate(_need(obj, "edges", list, where)):
        w = f"{where}.edges[{i}]"
        eid = _need(e, "id", str, w)
        ends = _need(e, "ends", list, w)
        if len(ends) != 2 or not all(isinstance(x, str) for x in ends):
            raise ParseError(f"{w}.ends: expected two vertex ids")
        edges.append(Edge(eid, ends[0], ends[1], _rational(e.get("length"), f"{w}.length")))
    return MetricGraph(vs, edges)


def serialize_graph(G: MetricGraph) -> str:
    return _dump(graph_to_obj(G))


def parse_graph(text: str, where: str = "graph") -> MetricGraph:
    return graph_from_obj(_loads(text, where), where)


def load_graph(path) -> MetricGraph:
    return parse_graph(Path(path).read_text(), str(path))


# ----------------------------------------------------------------------------
# points and divisors


def point_to_obj(p: Point) -> dict:
    if p.vertex is not None:
        return {"vertex": p.vertex}
    return {"edge": p.edge, "offset": format_fraction(p.offset)}


def point_from_obj(obj, G: MetricGraph, where: str) -> Point:
    if not isinstance(obj, dict):
        raise ParseError(f"{where}: expected an object")
    if "vertex" in obj:
        v = _need(obj, "vertex", str, where)
        return G.check_point(Point(vertex=v))
    eid = _need(obj, "edge", str, where)
    if not G.has_edge(eid):
        raise InvariantViolation(f"{where}: unknown edge {eid!r}")
    return G.point(eid, _rational(obj.get("offset"), f"{where}.offset"))


def parse_point(text: str, G: MetricGraph) -> Point:
    """``v`` for a vertex or ``edge@offset`` for an edge point."""
    if "@" in text:
        eid, off = text.split("@", 1)
        if not G.has_edge(eid):
            raise InvariantViolation(f"unknown edge {eid!r}")
        try:
            return G.point(eid, as_fraction(off))
        except (TypeError, ValueError) as exc:
            raise ParseError(f"point {text!r}: {exc}") from None
    return G.check_point(Point(vertex=text))


def format_point(p: Point) -> str:
    return p.vertex if p.vertex is not None else f"{p.edge}@{format_fraction(p.offset)}"


def divisor_to_obj(D: Divisor) -> list:
    return [{"point": point_to_obj(p), "coeff": k} for p, k in D.items()]


def divisor_from_obj(obj, G: MetricGraph, where: str = "divisor") -> Divisor:
    if not isinstance(obj, list):
        raise ParseError(f"{where}: expected a list of chips")
    out = []
    for i, ch in enumerate(obj):
        w = f"{where}[{i}]"
        k = _need(ch, "coeff", int, w)
        out.append((point_from_obj(_need(ch, "point", dict, w), G, f"{w}.point"), k))
    return Divisor(G, out)


def serialize_divisor(D: Divisor) -> str:
    return _dump(divisor_to_obj(D))


def parse_divisor(text: str, G: MetricGraph, where: str = "divisor") -> Divisor:
    return divisor_from_obj(_loads(text, where), G, where)


def load_divisor(path, G: MetricGraph) -> Divisor:
    return parse_divisor(Path(path).read_text(), G, str(path))


def format_divisor(D: Divisor) -> str:
    if D.is_zero():
        return "0"
    return " + ".join(f"{k}*{format_point(p)}" for p, k in D.items())


def parse_chips(text: str, G: MetricGraph) -> Divisor:
    """Inline form ``u:2,e1@1/3:-1``; an empty string is the zero divisor."""
    out = []
    for part in filter(None, (s.strip() for s in text.split(","))):
        pt, _, k = part.rpartition(":")
        if not pt:
            pt, k = part, "1"
        try:
            coeff = int(k)
        except ValueError:
            raise ParseError(f"chip {part!r}: coefficient must be an integer") from None
        out.append((parse_point(pt, G), coeff))
    return Divisor(G, out)


# ----------------------------------------------------------------------------
# covers


def cover_to_obj(c: DoubleCover) -> dict:
    obj = {
        "total": graph_to_obj(c.total),
        "vertex_map": dict(sorted(c.vertex_map.items())),
        "edge_map": dict(sorted(c.edge_map.items())),
        "involution": {
            "vertices": dict(sorted(c.vertex_involution.items())),
            "edges": dict(sorted(c.edge_involution.items())),
        },
    }
    if c.signs is not None:
        obj["tree"] = list(c.signs.tree)
        obj["swapped"] = list(c.signs.swapped)
    return obj


def cover_from_obj(obj, G: MetricGraph, where: str = "cover") -> DoubleCover:
    total = graph_from_obj(_need(obj, "total", dict, where), f"{where}.total")
    vmap = _need(obj, "vertex_map", dict, where)
    emap = _need(obj, "edge_map", dict, where)
    inv = _need(obj, "involution", dict, where)
    vinv = _need(inv, "vertices", dict, f"{where}.involution")
    einv = _need(inv, "edges", dict, f"{where}.involution")
    for name, m in (("vertex_map", vmap), ("edge_map", emap), ("involution", {**vinv, **einv})):
        if not all(isinstance(v, str) for v in m.values()):
            raise ParseError(f"{where}.{name}: values must be ids")
    for v in vmap.values():
        if v not in G.vertices:
            raise InvariantViolation(f"{where}.vertex_map: unknown base vertex {v!r}")
    for e in emap.values():
        if not G.has_edge(e):
            raise InvariantViolation(f"{where}.edge_map: unknown base edge {e!r}")
    signs = None
    if "tree" in obj:
        tree = tuple(_need(obj, "tree", list, where))
        sw = set(_need(obj, "swapped", list, where))
        non_tree = [e for e in G.edge_ids if e not in set(tree)]
        signs = SignAssignment(tree, tuple((e, SWAPPED if e in sw else STRAIGHT) for e in non_tree))
    c = DoubleCover(G, total, dict(vmap), dict(emap), dict(vinv), dict(einv), signs)
    validate_cover(c)
    return c


def serialize_cover(c: DoubleCover) -> str:
    return _dump(cover_to_obj(c))


def parse_cover(text: str, G: MetricGraph, where: str = "cover") -> DoubleCover:
    return cover_from_obj(_loads(text, where), G, where)


def load_cover(path, G: MetricGraph) -> DoubleCover:
    return parse_cover(Path(path).read_text(), G, str(path))
