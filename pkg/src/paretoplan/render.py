"""Static SVG figures: obstacles, elevation bands, and path overlays."""

from __future__ import annotations

import csv
import io
from typing import Sequence
from xml.sax.saxutils import escape, quoteattr

import numpy as np

from .costmodel import Path
from .gridworld import Coord, GridMap, MapError

CELL = 12
PATH_COLORS = ("#ff3fb4", "#ffffff", "#000000", "#1f77b4", "#ff7f0e")
PAIR_COLORS = ("#ffffff", "#000000")
START_COLOR = "#d62728"
GOAL_COLOR = "#2ca02c"
OBSTACLE_COLOR = "#000000"
LOW_RGB = np.array([236, 226, 198])
HIGH_RGB = np.array([120, 72, 38])


class PathFileError(ValueError):
    pass


def write_path_csv(path: Path, grid: GridMap) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "y", "elevation", "g"])
    for p, g in zip(path.waypoints, path.g_profile):
        w.writerow([p.x, p.y, f"{grid.elevation_at(p):.6f}", f"{g:.6f}"])
    return buf.getvalue()


def read_path_csv(text: str) -> list[Coord]:
    rows = list(csv.DictReader(io.StringIO(text)))
    if not rows or "x" not in rows[0] or "y" not in rows[0]:
        raise PathFileError("path file needs an 'x,y,...' header and at least one row")
    try:
        return [Coord(int(r["x"]), int(r["y"])) for r in rows]
    except (TypeError, ValueError):
        raise PathFileError("path file has non-integer coordinates") from None


def band_index(elevation: np.ndarray, bands: int) -> np.ndarray:
    return np.minimum((elevation * bands).astype(int), bands - 1)


def _band_color(i: int, bands: int) -> str:
    t = 0.0 if bands == 1 else i / (bands - 1)
    r, g, b = np.rint(LOW_RGB + t * (HIGH_RGB - LOW_RGB)).astype(int)
    return f"#{r:02x}{g:02x}{b:02x}"


def render_svg(grid: GridMap, paths: Sequence[Sequence[Coord]] = (), contours: int = 8,
               colors: Sequence[str] | None = None, labels: Sequence[str] | None = None,
               cell: int = CELL) -> str:
    """One SVG: banded terrain, black obstacles, one polyline per path.

    Start and goal of the first path get red and green squares.  Output is
    a pure function of the arguments.
    """
    if contours < 1:
        raise ValueError("contours must be >= 1")
    for wps in paths:
        for p in wps:
            if not grid.in_bounds(p):
                raise MapError(f"path cell {tuple(p)} lies outside the {grid.width}x{grid.height} map")
    if colors is None:
        colors = PAIR_COLORS if len(paths) == 2 else PATH_COLORS
    w, h = grid.width * cell, grid.height * cell
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
        f'viewBox="0 0 {w} {h}">',
        f'<rect x="0" y="0" width="{w}" height="{h}" fill="#ffffff"/>',
        '<g id="terrain" stroke="none">',
    ]
    bands = band_index(grid.elevation, contours)
    for y in range(grid.height):
        for x in range(grid.width):
            fill = OBSTACLE_COLOR if grid.occupancy[y, x] else _band_color(int(bands[y, x]), contours)
            out.append(f'<rect x="{x * cell}" y="{y * cell}" width="{cell}" height="{cell}" fill="{fill}"/>')
    out.append("</g>")
    half = cell / 2
    for i, wps in enumerate(paths):
        pts = " ".join(f"{p[0] * cell + half:.1f},{p[1] * cell + half:.1f}" for p in wps)
        title = ""
        if labels is not None and i < len(labels):
            title = f"<title>{escape(labels[i])}</title>"
        color = colors[i % len(colors)]
        out.append(f'<polyline class="path" points="{pts}" fill="none" stroke={quoteattr(color)} '
                   f'stroke-width="{cell / 4:.1f}" stroke-linejoin="round">{title}</polyline>')
    if paths and len(paths[0]):
        for c, color in ((paths[0][0], START_COLOR), (paths[0][-1], GOAL_COLOR)):
            out.append(f'<rect class="marker" x="{c[0] * cell + cell / 4:.1f}" y="{c[1] * cell + cell / 4:.1f}" '
                       f'width="{half:.1f}" height="{half:.1f}" fill="{color}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
