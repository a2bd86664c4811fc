import xml.etree.ElementTree as ET

import numpy as np
import pytest

from paretoplan.costmodel import evaluate_path
from paretoplan.gridworld import Coord, GridMap, MapError
from paretoplan.render import (
    GOAL_COLOR,
    START_COLOR,
    PathFileError,
    band_index,
    read_path_csv,
    render_svg,
    write_path_csv,
)

NS = "{http://www.w3.org/2000/svg}"


def sloped_map():
    elev = np.tile(np.linspace(0.0, 1.0, 6), (4, 1))
    occ = np.zeros((4, 6), bool)
    occ[1, 2] = True
    return GridMap(occ, elev)


def test_two_paths_white_and_black():
    grid = sloped_map()
    a = [Coord(0, 0), Coord(1, 1), Coord(2, 2)]
    b = [Coord(0, 0), Coord(1, 0), Coord(2, 0)]
    root = ET.fromstring(render_svg(grid, [a, b], labels=["sun 70 deg", "sun 250 deg"]))
    lines = root.findall(f"{NS}polyline")
    assert [ln.get("stroke") for ln in lines] == ["#ffffff", "#000000"]
    assert lines[0].find(f"{NS}title").text == "sun 70 deg"


def test_markers_and_obstacles():
    grid = sloped_map()
    root = ET.fromstring(render_svg(grid, [[Coord(0, 0), Coord(1, 1)]]))
    markers = [r.get("fill") for r in root.iter(f"{NS}rect") if r.get("class") == "marker"]
    assert markers == [START_COLOR, GOAL_COLOR]
    terrain = root.find(f"{NS}g").findall(f"{NS}rect")
    assert len(terrain) == 24
    assert sum(r.get("fill") == "#000000" for r in terrain) == 1


def test_contour_bands():
    grid = sloped_map()
    root = ET.fromstring(render_svg(grid, contours=3))
    fills = {r.get("fill") for r in root.find(f"{NS}g").findall(f"{NS}rect")} - {"#000000"}
    assert len(fills) == 3
    assert band_index(np.array([0.0, 0.33, 0.34, 1.0]), 3).tolist() == [0, 0, 1, 2]


def test_deterministic_and_escaped():
    grid = sloped_map()
    a = render_svg(grid, [[Coord(0, 0)]], labels=["<&>"])
    assert a == render_svg(grid, [[Coord(0, 0)]], labels=["<&>"])
    ET.fromstring(a)


def test_rejects_bad_input():
    with pytest.raises(MapError):
        render_svg(sloped_map(), [[Coord(9, 9)]])
    with pytest.raises(ValueError):
        render_svg(sloped_map(), contours=0)


def test_path_csv_round_trip():
    grid = sloped_map()
    path = evaluate_path([(0, 0), (1, 0), (2, 0)], grid)
    text = write_path_csv(path, grid)
    assert text.splitlines()[1] == "0,0,0.000000,0.000000"
    assert read_path_csv(text) == path.waypoints
    for bad in ("", "x,y\n", "x,y\n1,a\n"):
        with pytest.raises(PathFileError):
            read_path_csv(bad)
