import json
import re
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given

from proxigraph import graphs, io
from proxigraph.cli import main
from proxigraph.cycles import HamCycle, exact_minimal
from proxigraph.errors import ParseError
from proxigraph.geometry import PointSet
from proxigraph.render import parse_circles, render_svg
from proxigraph.verify import verify_theorem
from proxigraph.witness import build_non_hamiltonian_1gg
from strategies import point_sets

MID = "pointset v1\n-1 0\n1 0\n0 0\n"
SQUARE = "pointset v1\n# unit square\n0 0\n1 0\n1 1\n0 1\n"


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return write


# -- formats --------------------------------------------------------------------

def test_parse_pointset_rationals_decimals_labels():
    s, labels = io.parse_pointset("pointset v1\n 3/7 0.25 a # note\n\n-1e-2 2\n")
    assert list(s) == [(Fraction(3, 7), Fraction(1, 4)), (Fraction(-1, 100), 2)]
    assert labels == ["a", None]


@pytest.mark.parametrize(
    "text, line, col",
    [
        ("points v1\n0 0\n", 1, 1),
        ("pointset v1\n0 0\n1 zz\n", 3, 3),
        ("pointset v1\n0 0\n1 2 3 4\n", 3, 1),
        ("pointset v1\n0 0\n  5\n", 3, 3),
        ("pointset v1\n0 0\n1 1/0\n", 3, 3),
    ],
)
def test_parse_errors_carry_position(text, line, col):
    with pytest.raises(ParseError) as exc:
        io.parse_pointset(text)
    assert (exc.value.line, exc.value.column) == (line, col)
    assert f"line {line}, column {col}" in str(exc.value)


def test_parse_rejects_duplicates_and_empty():
    with pytest.raises(ParseError, match="coincide"):
        io.parse_pointset("pointset v1\n0 0\n0.0 0/3\n")
    with pytest.raises(ParseError):
        io.parse_pointset("")


@given(point_sets(1, 10))
def test_pointset_round_trip(s):
    assert io.parse_pointset(io.emit_pointset(s))[0] == s


@given(point_sets(3, 8))
def test_graph_and_cycle_round_trip(s):
    g = graphs.build_k_gabriel(s, 1)
    assert io.parse_graph(io.emit_graph(g), s) == g
    c = HamCycle(tuple(reversed(range(s.n))))
    assert io.parse_cycle(io.emit_cycle(c, s), s) == c


def test_graph_and_cycle_validation():
    s = io.parse_pointset(SQUARE)[0]
    with pytest.raises(ParseError):
        io.parse_graph('{"format": "cycle v1"}', s)
    with pytest.raises(ParseError):
        io.parse_graph('{"format": "graph v1", "n": 3, "edges": []}', s)
    with pytest.raises(ParseError):
        io.parse_cycle('{"format": "cycle v1", "order": [0, 1, 1, 2]}', s)
    with pytest.raises(ParseError) as exc:
        io.parse_cycle('{"format": "cycle v1",\n "order": [0, 1,', s)
    assert exc.value.line == 2


def test_audit_document_is_replayable():
    s = io.parse_pointset(MID)[0]
    audit = verify_theorem(s)
    doc = io.parse_audit(io.emit_audit(audit, MID))
    assert doc["passed"] and doc["max_kappa"] == 1
    assert doc["tool_version"] and len(doc["input_sha256"]) == 64
    again = verify_theorem(io.parse_pointset(MID)[0])
    assert doc["cycle"] == list(again.cycle.order)
    assert [e["kappa"] for e in doc["edges"]] == [e.kappa for e in again.edges]


def test_witness_store_merges_by_seed_and_trial(tmp_path):
    from proxigraph.witness import random_search

    a = random_search(3, 6, seed=2).best
    b = random_search(3, 6, seed=1).best
    io.store_witness(tmp_path, a, "claim a")
    io.store_witness(tmp_path, b, "claim b")
    first = (tmp_path / "manifest.json").read_bytes()
    io.store_witness(tmp_path, a, "claim a")
    assert (tmp_path / "manifest.json").read_bytes() == first
    entries = io.load_manifest(tmp_path)
    assert [e["seed"] for e in entries] == [1, 2]
    for e in entries:
        assert io.read_pointset(tmp_path / e["file"]).n == e["n"]


# -- rendering ------------------------------------------------------------------

def test_render_points_only_is_valid_svg():
    import xml.etree.ElementTree as ET

    s = io.parse_pointset(SQUARE)[0]
    svg = render_svg(s)
    root = ET.fromstring(svg.split("\n", 1)[1])
    assert root.tag.endswith("svg")
    assert len(root.findall(".//{*}g[@id='points']/{*}circle")) == 4


def test_render_thales_circle():
    s = io.parse_pointset(MID)[0]
    svg = render_svg(s, circles=[(0, 1)])
    (circle,) = re.findall(r'<circle cx="([\d.]+)" cy="([\d.]+)" r="([\d.]+)"/>', svg.split('id="circles"')[1].split("</g>")[0])
    cx, cy, r = map(float, circle)
    # the unit circle spans the whole fitted box less the 5% margins
    assert r == pytest.approx(600 / 2.2, abs=1e-3)
    assert (cx, cy) == (300.0, 300.0)


def test_render_counts_match_figure_layers():
    s = build_non_hamiltonian_1gg()
    g = graphs.build_k_gabriel(s, 1)
    c = exact_minimal(s).cycle
    svg = render_svg(s, g.edges, c, [(0, 3)])
    assert svg.count("<line") == len(g.edges | c.edge_set())
    assert svg.count('stroke-dasharray') == 1
    assert svg.count("<circle") == s.n + 1
    assert render_svg(s, g.edges, c, [(0, 3)]) == svg


def test_parse_circles():
    assert parse_circles("(0,1) (2, 3)") == [(0, 1), (2, 3)]
    assert parse_circles("0-1") == [(0, 1)]
    with pytest.raises(ValueError):
        parse_circles("(0,1,2)")


# -- command line ---------------------------------------------------------------

def test_cli_build(files, tmp_path):
    mid = files("mid.pts", MID)
    out = str(tmp_path / "g.json")
    assert main(["build", "--graph", "kgg", "--k", "0", "--input", mid, "--output", out]) == 0
    assert json.loads(open(out).read())["edges"] == [[0, 2], [1, 2]]
    assert main(["build", "--graph", "kgg", "--k", "1", "--input", mid, "--output", out]) == 0
    g = io.parse_graph(open(out).read(), io.read_pointset(mid))
    assert g.is_complete()
    assert main(["build", "--graph", "gabriel", "--k", "1", "--input", mid, "--output", out]) == 0
    assert len(json.loads(open(out).read())["edges"]) == 2
    assert main(["build", "--graph", "kgg", "--k", "-1", "--input", mid]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["build", "--graph", "bogus", "--input", mid])
    assert exc.value.code == 2


def test_cli_build_round_trip(files, tmp_path):
    pts = files("p.pts", "pointset v1\n0 0\n3 1\n1 4\n5/2 5/2\n-1 2\n")
    out = tmp_path / "g.json"
    for kind in ("kgg", "krng", "kdg"):
        assert main(["build", "--graph", kind, "--k", "1", "--input", pts, "--output", str(out)]) == 0
        g = io.parse_graph(out.read_text(), io.read_pointset(pts))
        assert g == {"kgg": graphs.build_k_gabriel, "krng": graphs.build_k_rng,
                     "kdg": graphs.build_k_delaunay}[kind](io.read_pointset(pts), 1)


def test_cli_mincycle(files, tmp_path, capsys):
    sq = files("sq.pts", SQUARE)
    out = tmp_path / "c.json"
    assert main(["mincycle", "--mode", "exact", "--input", sq, "--output", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["order"] == [0, 1, 2, 3] and doc["ds"] == ["1", "1", "1", "1"]
    big = files("big.pts", "pointset v1\n" + "".join(f"{i} {i * i % 13}\n" for i in range(12)))
    assert main(["mincycle", "--mode", "exact", "--input", big]) == 3
    assert "n <= 11" in capsys.readouterr().err
    fifty = files("fifty.pts", "pointset v1\n" + "".join(f"{i * 7 % 50} {i * i % 47}\n" for i in range(50)))
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["mincycle", "--mode", "local", "--seed", "4", "--input", fifty, "--output", str(a)]) == 0
    assert main(["mincycle", "--mode", "local", "--seed", "4", "--input", fifty, "--output", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_cli_verify(files, tmp_path, capsys):
    mid = files("mid.pts", MID)
    out = tmp_path / "a.json"
    assert main(["verify", "--input", mid, "--output", str(out)]) == 0
    assert "max_kappa=1" in capsys.readouterr().out
    assert json.loads(out.read_text())["max_kappa"] == 1
    assert main(["verify", "--input", mid, "--k", "0"]) == 4
    bad = files("bad.pts", "pointset v1\n0 0\nfoo 1\n")
    assert main(["verify", "--input", bad]) == 2
    assert "line 3, column 1" in capsys.readouterr().err
    assert main(["verify", "--input", str(tmp_path / "missing.pts")]) == 2
    sq = files("sq.pts", SQUARE)
    bow = files("bow.json", io.emit_cycle(HamCycle((0, 1, 3, 2)), io.read_pointset(sq)))
    assert main(["verify", "--input", sq, "--cycle", bow]) == 4
    assert "inequality" in capsys.readouterr().out


def test_cli_render(files, tmp_path):
    mid = files("mid.pts", MID)
    g = tmp_path / "g.json"
    main(["build", "--graph", "kgg", "--k", "1", "--input", mid, "--output", str(g)])
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    args = ["render", "--input", mid, "--graph", str(g), "--circles", "(0,1)"]
    assert main(args + ["--output", str(a)]) == 0
    assert main(args + ["--output", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().count("stroke-dasharray") == 1
    assert main(["render", "--input", mid, "--circles", "(0,7)"]) == 2
    assert main(["render", "--input", mid, "--graph", str(tmp_path / "nope.json")]) == 2


def test_cli_search_manifests_identical(tmp_path, capsys):
    for d in ("one", "two"):
        assert main(["search", "--trials", "6", "--n", "7", "--seed", "9", "--store", str(tmp_path / d)]) == 0
    assert (tmp_path / "one" / "manifest.json").read_bytes() == (tmp_path / "two" / "manifest.json").read_bytes()
    assert main(["search", "--trials", "2", "--n", "12"]) == 3


def test_cli_feas(tmp_path):
    out = tmp_path / "f.json"
    assert main(["feas", "--kappa", "1", "--restarts", "2", "--output", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["max_residual"] <= 1e-9 and len(doc["assignment"]) == 6
    assert main(["feas", "--kappa", "6", "--restarts", "0", "--output", str(out)]) == 0
    assert json.loads(out.read_text())["max_residual"] <= 1e-6
    assert main(["feas", "--kappa", "0"]) == 2


def test_module_entry_point(files):
    mid = files("mid.pts", MID)
    proc = subprocess.run([sys.executable, "-m", "proxigraph", "verify", "--input", mid],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("PASS")
