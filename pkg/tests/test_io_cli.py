import json

import pytest

from tropdiv import fixtures, io
from tropdiv.cli import run
from tropdiv.cover import build_cover
from tropdiv.divisor import Divisor
from tropdiv.errors import InvariantViolation, ParseError
from tropdiv.graph import Point, betti1

from conftest import GENUS_FIXTURES


def fixture_names():
    return list(fixtures.all_fixtures())


@pytest.mark.parametrize("name", fixture_names())
def test_graph_round_trip_is_byte_identical(name, tmp_path):
    text = io.serialize_graph(fixtures.get(name).graph)
    path = tmp_path / "g.json"
    path.write_text(text)
    assert io.serialize_graph(io.load_graph(path)) == text


def test_cover_round_trip_is_byte_identical(tmp_path):
    for name, fx in fixtures.all_fixtures().items():
        for cname, (tree, sw) in fx.covers.items():
            text = io.serialize_cover(build_cover(fx.graph, tree=tree, swapped=sw))
            path = tmp_path / f"{name}-{cname}.json"
            path.write_text(text)
            assert io.serialize_cover(io.load_cover(path, fx.graph)) == text


def test_divisor_round_trip():
    G = fixtures.theta()
    D = Divisor(G, {Point(vertex="u"): 2, G.point("e1", "1/3"): -1})
    text = io.serialize_divisor(D)
    assert json.loads(text) == [{"point": {"vertex": "u"}, "coeff": 2},
                                {"point": {"edge": "e1", "offset": "1/3"}, "coeff": -1}]
    assert io.parse_divisor(text, G) == D
    assert io.parse_chips("u:2,e1@1/3:-1", G) == D
    assert io.parse_chips("", G).is_zero()


def test_theta_file_loads():
    G = io.parse_graph(io.serialize_graph(fixtures.theta()))
    assert betti1(G) == 2


@pytest.mark.parametrize("text,exc", [
    ('{"vertices": ["a"], "edges": [', ParseError),
    ('{"vertices": ["a", "b"]}', ParseError),
    ('{"vertices": ["a", "b"], "edges": [{"id": "e", "ends": ["a", "b"], "length": 1.5}]}', ParseError),
    ('{"vertices": ["a", "b"], "edges": [{"id": "e", "ends": ["a"], "length": "1"}]}', ParseError),
    ('{"vertices": ["a", "b"], "edges": [{"id": "e", "ends": ["a", "b"], "length": "0"}]}', InvariantViolation),
    ('{"vertices": ["a", "b"], "edges": [{"id": "e", "ends": ["a", "c"], "length": "1"}]}', InvariantViolation),
])
def test_bad_graph_files(text, exc):
    with pytest.raises(exc):
        io.parse_graph(text)


def test_parse_error_carries_position():
    with pytest.raises(ParseError, match="line 2"):
        io.parse_graph('{"vertices": [],\n "edges": [}')
    with pytest.raises(ParseError, match=r"edges\[0\]\.length"):
        io.parse_graph('{"vertices": ["a"], "edges": [{"id": "e", "ends": ["a", "a"], "length": 2.0}]}')


def test_bad_divisor_files():
    G = fixtures.theta()
    with pytest.raises(ParseError):
        io.parse_divisor('[{"point": {"vertex": "u"}, "coeff": 1.0}]', G)
    with pytest.raises(InvariantViolation):
        io.parse_divisor('[{"point": {"edge": "e9", "offset": "1"}, "coeff": 1}]', G)
    with pytest.raises(InvariantViolation):
        io.parse_divisor('[{"point": {"edge": "e1", "offset": "5"}, "coeff": 1}]', G)


def test_cover_with_fixed_point_is_rejected():
    fx = fixtures.get("theta")
    tree, sw = fx.covers["e2_swapped"]
    obj = json.loads(io.serialize_cover(build_cover(fx.graph, tree=tree, swapped=sw)))
    obj["involution"]["vertices"]["u+"] = "u+"
    obj["involution"]["vertices"]["u-"] = "u-"
    with pytest.raises(InvariantViolation, match="fixes"):
        io.parse_cover(json.dumps(obj), fx.graph)


# ----------------------------------------------------------------------------
# command line


def cli(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_fixtures_list(capsys):
    code, out, _ = cli(capsys, "fixtures", "list")
    assert code == 0
    assert len(out.splitlines()) >= 6
    for name in GENUS_FIXTURES:
        assert any(line.startswith(name + ":") for line in out.splitlines())


def test_kirchhoff_command(capsys):
    code, out, _ = cli(capsys, "kirchhoff", "--fixture", "theta")
    assert code == 0
    assert "PASS" in out and "11" in out


def test_reduce_command_with_files(capsys, tmp_path):
    g = tmp_path / "g.json"
    g.write_text(io.serialize_graph(fixtures.dumbbell()))
    d = tmp_path / "d.json"
    G = fixtures.dumbbell()
    d.write_text(io.serialize_divisor(Divisor(G, {Point(vertex="u"): 3, G.point("b", "1/2"): 1, G.point("e2", 1): 1})))
    code, out, _ = cli(capsys, "reduce", "--graph", str(g), "--divisor", str(d), "--base", "e1@1")
    assert code == 0
    assert "4*e1@1 + 1*e2@1" in out


def test_other_commands_succeed(capsys):
    for argv in (["rank", "--fixture", "theta", "--chips", "u,w"],
                 ["equiv", "--fixture", "cycle", "--chips", "v,e1@1/2", "--chips2", "e1@1/8,e1@3/8"],
                 ["jacobian", "--fixture", "theta", "--tree", "e2", "--reverse", "e3"],
                 ["aj", "--fixture", "theta", "--chips", "e1@1/3,e2@1/2", "--tree", "e2"],
                 ["covers", "--fixture", "dumbbell"],
                 ["prym", "rst", "--fixture", "dumbbell", "--cover-name", "both_loops"],
                 ["prym", "fiber", "--fixture", "dumbbell", "--cover-name", "both_loops", "--chips", "b+@1/2"],
                 ["rr-check", "--fixture", "theta", "--trials", "5"],
                 ["prym", "check", "--trials", "1"],
                 ["fixtures", "show", "theta"]):
        code, out, err = cli(capsys, *argv)
        assert code == 0, (argv, out, err)


def test_rank_output(capsys):
    _, out, _ = cli(capsys, "rank", "--fixture", "theta", "--chips", "u,w")
    assert out.strip().endswith("1")


def test_covers_emit_round_trips(capsys, tmp_path):
    path = tmp_path / "c.json"
    code, _, _ = cli(capsys, "covers", "--fixture", "theta", "--emit", "2", "--out", str(path))
    assert code == 0
    c = io.load_cover(path, fixtures.theta())
    assert c.is_connected()


def test_usage_errors_exit_2(capsys):
    for argv in ([], ["nosuch"], ["rank", "--fixture", "nosuch", "--chips", "u"],
                 ["rank", "--fixture", "theta"], ["rank", "--graph", "/nonexistent.json", "--chips", "u"],
                 ["rank", "--fixture", "theta", "--chips", "q9:1"],
                 ["covers", "--fixture", "theta", "--emit", "9"]):
        code, _, err = cli(capsys, *argv)
        assert code == 2, argv
        assert err


def test_non_generic_representative_is_an_input_error(capsys):
    code, out, _ = cli(capsys, "prym", "fiber", "--fixture", "theta", "--cover-name", "e2_swapped", "--chips", "e1+@1/2")
    assert code == 0 and "PASS" in out
    code, out, err = cli(capsys, "prym", "fiber", "--fixture", "theta", "--cover-name", "e2_swapped", "--chips", "e2+@1/2")
    assert code == 2 and "GenericityFailure" in err


def test_any_failed_check_exits_1(capsys, monkeypatch):
    from tropdiv import suites
    checks = [suites.Check("good", "a", True), suites.Check("bad", "b", False, {"x": "1/2"})]
    monkeypatch.setattr(suites, "check_all", lambda seed, trials: checks)
    code, out, _ = cli(capsys, "check-all")
    assert code == 1
    assert out.splitlines()[1].startswith("FAIL bad digest=") and out.splitlines()[1].endswith("x=1/2")
    assert out.splitlines()[-1] == "SUMMARY checks=2 pass=1 fail=1"


def test_report_is_deterministic(capsys):
    a = cli(capsys, "check-all", "--seed", "3", "--trials", "2")
    b = cli(capsys, "check-all", "--seed", "3", "--trials", "2")
    assert a == b and a[0] == 0
    assert a[1].splitlines()[-1].startswith("SUMMARY checks=")
    assert all(line.startswith(("PASS ", "FAIL ", "SUMMARY ")) for line in a[1].splitlines())
