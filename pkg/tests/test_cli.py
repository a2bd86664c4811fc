import math
import xml.etree.ElementTree as ET

import pytest

from oracles import dominated_choices
from paretoplan.cli import main
from paretoplan.gridworld import GridMap, load_map, save_map
from paretoplan.planner import read_expansion_log
from paretoplan.render import read_path_csv
from paretoplan.scenario import ScenarioSpec, canonical_suite, generate_environment, read_suite, write_suite

SVG = "{http://www.w3.org/2000/svg}"


@pytest.fixture
def empty_map(tmp_path):
    p = tmp_path / "empty.txt"
    p.write_text(save_map(GridMap.empty(3, 3)))
    return p


@pytest.fixture
def scenario_map(tmp_path):
    p = tmp_path / "scenario.txt"
    p.write_text(save_map(generate_environment(ScenarioSpec(terrain_seed=2, obstacle_seed=5))))
    return p


class TestPlan:
    def test_empty_map(self, empty_map, tmp_path, capsys):
        out = tmp_path / "path.csv"
        assert main(["plan", "--map", str(empty_map), "--algo", "astar", "--out", str(out)]) == 0
        rows = out.read_text().splitlines()
        assert rows[0] == "x,y,elevation,g"
        assert len(rows) == 4
        assert f"F1={2 * math.sqrt(2.0):.6f}" in capsys.readouterr().out

    def test_occupied_start(self, tmp_path, capsys):
        p = tmp_path / "m.txt"
        p.write_text(save_map(GridMap.from_rows(["#..", "...", "..."])))
        assert main(["plan", "--map", str(p), "--algo", "astar-po"]) == 2
        err = capsys.readouterr().err
        assert err.startswith("error:") and len(err.strip().splitlines()) == 1

    def test_no_path(self, tmp_path):
        p = tmp_path / "m.txt"
        p.write_text(save_map(GridMap.from_rows(["..#..", "..#..", "..#.."])))
        assert main(["plan", "--map", str(p), "--algo", "astar-norm"]) == 1

    def test_diag_log_is_front_optimal(self, scenario_map, tmp_path):
        log = tmp_path / "log.jsonl"
        out = tmp_path / "path.csv"
        svg = tmp_path / "fig.svg"
        code = main(["plan", "--map", str(scenario_map), "--algo", "astar-po", "--diag", str(log),
                     "--out", str(out), "--svg", str(svg)])
        assert code == 0
        with open(log) as fh:
            entries = read_expansion_log(fh)
        assert entries and dominated_choices(entries) == []
        ET.parse(svg)

    def test_csv_revalidates(self, scenario_map, tmp_path):
        out = tmp_path / "path.csv"
        assert main(["plan", "--map", str(scenario_map), "--algo", "astar-norm", "--sun", "70",
                     "--out", str(out)]) == 0
        wps = read_path_csv(out.read_text())
        gs = [float(r.split(",")[3]) for r in out.read_text().splitlines()[1:]]
        for a, b in zip(wps, wps[1:]):
            assert max(abs(a.x - b.x), abs(a.y - b.y)) == 1
        assert all(y > x for x, y in zip(gs, gs[1:]))

    @pytest.mark.parametrize("extra", [
        ["--algo", "dijkstra"], ["--algo", "astar", "--layers", "dist,heur,elev"],
        ["--algo", "astar-po", "--layers", "dist,solar"], ["--algo", "astar-po", "--start", "1;1"],
    ])
    def test_bad_flags(self, empty_map, extra):
        assert main(["plan", "--map", str(empty_map)] + extra) == 2

    def test_missing_file(self, tmp_path):
        assert main(["plan", "--map", str(tmp_path / "nope.txt"), "--algo", "astar"]) == 2

    def test_bad_map(self, tmp_path):
        p = tmp_path / "m.txt"
        p.write_text("3 2\n...\n..\n")
        assert main(["plan", "--map", str(p), "--algo", "astar"]) == 2


class TestGen:
    def test_default_map(self, tmp_path):
        assert main(["gen", "--out-dir", str(tmp_path)]) == 0
        text = (tmp_path / "map_000.txt").read_text()
        assert text.count("#") == 72
        load_map(text)

    def test_byte_identical(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        for d in (a, b):
            assert main(["gen", "--count", "3", "--out-dir", str(d)]) == 0
        for name in ("map_000.txt", "map_001.txt", "map_002.txt", "suite.txt"):
            assert (a / name).read_bytes() == (b / name).read_bytes()

    def test_canonical_suite(self, tmp_path):
        assert main(["gen", "--count", "80", "--out-dir", str(tmp_path)]) == 0
        assert read_suite((tmp_path / "suite.txt").read_text()) == canonical_suite()

    @pytest.mark.parametrize("extra", [["--obstacles", "0.7"], ["--width", "1"], ["--width", "x"]])
    def test_invalid(self, tmp_path, extra):
        assert main(["gen", "--out-dir", str(tmp_path)] + extra) == 2


class TestBench:
    def test_small_suite(self, tmp_path, capsys):
        suite = tmp_path / "suite.txt"
        suite.write_text(write_suite(canonical_suite(count=2)))
        out = tmp_path / "r.csv"
        assert main(["bench", "--suite", str(suite), "--out", str(out), "--no-timing",
                     "--algos", "astar,astar-norm,astar-po"]) == 0
        lines = out.read_text().splitlines()
        assert len(lines) == 1 + 6 + 3
        assert "time_s" not in lines[0]
        assert "astar-po" in capsys.readouterr().out

    def test_unknown_algo(self, tmp_path):
        assert main(["bench", "--algos", "astar,bogus"]) == 2

    def test_bad_env(self, tmp_path, monkeypatch):
        suite = tmp_path / "suite.txt"
        suite.write_text(write_suite(canonical_suite(count=1)))
        monkeypatch.setenv("PLANNER_THREADS", "0")
        assert main(["bench", "--suite", str(suite)]) == 2

    def test_bad_suite(self, tmp_path):
        suite = tmp_path / "suite.txt"
        suite.write_text("width=3 bogus=1\n")
        assert main(["bench", "--suite", str(suite)]) == 2


class TestRender:
    def test_two_point_path(self, empty_map, tmp_path):
        path = tmp_path / "p.csv"
        path.write_text("x,y\n0,0\n1,1\n")
        svg = tmp_path / "o.svg"
        assert main(["render", "--map", str(empty_map), "--path", str(path), "--svg", str(svg)]) == 0
        root = ET.parse(svg).getroot()
        assert len(root.findall(f"{SVG}polyline")) == 1

    def test_out_of_bounds(self, empty_map, tmp_path):
        path = tmp_path / "p.csv"
        path.write_text("x,y\n0,0\n5,5\n")
        assert main(["render", "--map", str(empty_map), "--path", str(path),
                     "--svg", str(tmp_path / "o.svg")]) == 2

    def test_bad_path_file(self, empty_map, tmp_path):
        path = tmp_path / "p.csv"
        path.write_text("a,b\n1,2\n")
        assert main(["render", "--map", str(empty_map), "--path", str(path),
                     "--svg", str(tmp_path / "o.svg")]) == 2


def test_case_study(tmp_path, capsys):
    out = tmp_path / "cs"
    assert main(["case-study", "--sun", "70", "--algos", "astar-po", "--no-timing",
                 "--out-dir", str(out)]) == 0
    names = {p.name for p in out.iterdir()}
    assert {"map.txt", "report.csv", "path_astar_po_70.csv", "case_study.svg"} <= names
    assert load_map((out / "map.txt").read_text()).occupancy.sum() == 3000
    ET.parse(out / "case_study.svg")


def test_case_study_bad_sun(tmp_path):
    assert main(["case-study", "--sun", "400", "--out-dir", str(tmp_path)]) == 2


def test_help_mentions_angle_convention(capsys):
    with pytest.raises(SystemExit):
        main(["--help"])
    assert "counter-clockwise from east" in capsys.readouterr().out
