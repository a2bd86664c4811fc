"""Occupancy grid with an elevation layer and the 8-connected move model.

Cells are addressed as ``(x, y)`` with ``x`` the column and ``y`` the row,
origin at the upper-left corner.  Arrays are stored row-major, so the cell
``(x, y)`` lives at ``array[y, x]``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

FREE_CHAR = "."
OCCUPIED_CHAR = "#"
ELEVATION_DECIMALS = 6


class MapError(ValueError):
    """Raised when a map or a query against a map is invalid."""


class MapParseError(MapError):
    """Raised by :func:`load_map` for malformed map text."""

    def __init__(self, message: str, line: int, column: int | None = None):
        where = f"line {line}" if column is None else f"line {line}, column {column}"
        super().__init__(f"{where}: {message}")
        self.line = line
        self.column = column


class Coord(NamedTuple):
    x: int
    y: int

    @classmethod
    def parse(cls, text: str) -> "Coord":
        """Parse ``"x,y"``."""
        try:
            x, y = (int(v) for v in text.split(","))
        except ValueError:
            raise ValueError(f"expected 'x,y', got {text!r}") from None
        return cls(x, y)

    def __str__(self) -> str:
        return f"{self.x},{self.y}"


class Move(enum.Enum):
    """The eight compass moves.  ``dy`` grows downward (south)."""

    E = (1, 0)
    NE = (1, -1)
    N = (0, -1)
    NW = (-1, -1)
    W = (-1, 0)
    SW = (-1, 1)
    S = (0, 1)
    SE = (1, 1)

    @property
    def dx(self) -> int:
        return self.value[0]

    @property
    def dy(self) -> int:
        return self.value[1]

    @property
    def is_diagonal(self) -> bool:
        return self.dx != 0 and self.dy != 0

    @property
    def step_length(self) -> float:
        return SQRT2 if self.is_diagonal else 1.0

    @property
    def heading(self) -> tuple[float, float]:
        """Unit heading vector in the east/north frame (north is ``-dy``)."""
        n = math.hypot(self.dx, self.dy)
        return (self.dx / n, -self.dy / n)

    @classmethod
    def between(cls, a: Coord, b: Coord) -> "Move":
        """The move taking ``a`` to ``b``; raises if they are not 8-adjacent."""
        try:
            return _MOVE_BY_DELTA[(b[0] - a[0], b[1] - a[1])]
        except KeyError:
            raise MapError(f"cells {tuple(a)} and {tuple(b)} are not 8-adjacent") from None


SQRT2 = math.sqrt(2.0)
MOVES = tuple(Move)
_MOVE_BY_DELTA = {m.value: m for m in Move}


@dataclass(frozen=True, eq=False)
class GridMap:
    """Immutable occupancy grid plus per-cell elevation in [0, 1].

    Attributes:
        occupancy: bool array of shape (height, width); True means occupied.
        elevation: float array of shape (height, width).
    """

    occupancy: np.ndarray
    elevation: np.ndarray

    def __post_init__(self):
        occ = np.array(self.occupancy, dtype=bool)
        if occ.ndim != 2:
            raise MapError("occupancy must be two-dimensional")
        h, w = occ.shape
        if w < 2 or h < 2:
            raise MapError(f"map must be at least 2x2, got {w}x{h}")
        elev = np.array(self.elevation, dtype=float)
        if elev.shape != occ.shape:
            raise MapError(f"elevation shape {elev.shape} does not match occupancy {occ.shape}")
        if not np.all(np.isfinite(elev)) or elev.min() < 0.0 or elev.max() > 1.0:
            raise MapError("elevation values must lie in [0, 1]")
        occ.flags.writeable = False
        elev.flags.writeable = False
        object.__setattr__(self, "occupancy", occ)
        object.__setattr__(self, "elevation", elev)

    @classmethod
    def empty(cls, width: int, height: int) -> "GridMap":
        return cls(np.zeros((height, width), bool), np.zeros((height, width)))

    @classmethod
    def from_rows(cls, rows: list[str], elevation=None) -> "GridMap":
        """Build from ``'.'``/``'#'`` strings, e.g. ``["..", ".#"]``."""
        occ = np.array([[c == OCCUPIED_CHAR for c in row] for row in rows], dtype=bool)
        if elevation is None:
            elevation = np.zeros(occ.shape)
        return cls(occ, elevation)

    @property
    def width(self) -> int:
        return self.occupancy.shape[1]

    @property
    def height(self) -> int:
        return self.occupancy.shape[0]

    def in_bounds(self, c: Coord) -> bool:
        return 0 <= c[0] < self.width and 0 <= c[1] < self.height

    def is_free(self, c: Coord) -> bool:
        return self.in_bounds(c) and not self.occupancy[c[1], c[0]]

    def elevation_at(self, c: Coord) -> float:
        return float(self.elevation[c[1], c[0]])

    def free_cells(self):
        ys, xs = np.nonzero(~self.occupancy)
        return [Coord(int(x), int(y)) for y, x in zip(ys, xs)]

    def with_occupancy(self, occupancy) -> "GridMap":
        return GridMap(occupancy, self.elevation)

    def with_elevation(self, elevation) -> "GridMap":
        return GridMap(self.occupancy, elevation)

    def __eq__(self, other):
        if not isinstance(other, GridMap):
            return NotImplemented
        return (
            self.occupancy.shape == other.occupancy.shape
            and np.array_equal(self.occupancy, other.occupancy)
            and np.array_equal(self.elevation, other.elevation)
        )

    __hash__ = None

    def __repr__(self):
        return f"GridMap({self.width}x{self.height}, occupied={int(self.occupancy.sum())})"


def neighbors(grid: GridMap, at: Coord) -> list[tuple[Coord, Move]]:
    """Free 8-connected neighbours of ``at`` with the move reaching each.

    Diagonal moves only require the destination cell to be free, so the
    robot may cut between two diagonally touching obstacles.
    """
    if not grid.is_free(at):
        raise MapError(f"query cell {tuple(at)} is out of bounds or occupied")
    x, y = at
    out = []
    for m in MOVES:
        nb = Coord(x + m.dx, y + m.dy)
        if grid.is_free(nb):
            out.append((nb, m))
    return out


def reachable(grid: GridMap, start: Coord, goal: Coord) -> bool:
    """Flood fill from ``start`` over the 8-connected free cells."""
    if not (grid.is_free(start) and grid.is_free(goal)):
        return False
    seen = np.zeros(grid.occupancy.shape, bool)
    seen[start[1], start[0]] = True
    stack = [tuple(start)]
    while stack:
        x, y = stack.pop()
        if (x, y) == tuple(goal):
            return True
        for m in MOVES:
            nx, ny = x + m.dx, y + m.dy
            if 0 <= nx < grid.width and 0 <= ny < grid.height:
                if not seen[ny, nx] and not grid.occupancy[ny, nx]:
                    seen[ny, nx] = True
                    stack.append((nx, ny))
    return False


def save_map(grid: GridMap) -> str:
    lines = [f"{grid.width} {grid.height}"]
    for row in grid.occupancy:
        lines.append("".join(OCCUPIED_CHAR if c else FREE_CHAR for c in row))
    lines.append("")
    for row in grid.elevation:
        lines.append(" ".join(f"{v:.{ELEVATION_DECIMALS}f}" for v in row))
    return "\n".join(lines) + "\n"


def load_map(text: str) -> GridMap:
    """Parse the text map format written by :func:`save_map`.

    The elevation block is optional and defaults to all zeros.  Every
    problem is reported as a :class:`MapParseError` carrying a 1-based
    line (and column where it applies).
    """
    lines = text.splitlines()
    if not lines:
        raise MapParseError("empty map text", 1)
    header = lines[0].split()
    if len(header) != 2:
        raise MapParseError("header must be '<width> <height>'", 1)
    try:
        width, height = int(header[0]), int(header[1])
    except ValueError:
        raise MapParseError("header must hold two integers", 1) from None
    if width < 2 or height < 2:
        raise MapParseError(f"map must be at least 2x2, got {width}x{height}", 1)

    occ = np.zeros((height, width), bool)
    for y in range(height):
        lineno = y + 2
        if lineno > len(lines):
            raise MapParseError(f"expected {height} grid rows, found {y}", lineno)
        row = lines[lineno - 1].rstrip("\r")
        if len(row) != width:
            raise MapParseError(f"grid row has {len(row)} cells, expected {width}", lineno)
        for x, ch in enumerate(row):
            if ch == OCCUPIED_CHAR:
                occ[y, x] = True
            elif ch != FREE_CHAR:
                raise MapParseError(f"unexpected grid character {ch!r}", lineno, x + 1)

    rest = [(i + 1, ln) for i, ln in enumerate(lines) if i >= height + 1]
    while rest and not rest[0][1].strip():
        rest.pop(0)
    while rest and not rest[-1][1].strip():
        rest.pop()
    elev = np.zeros((height, width))
    if rest:
        if len(rest) != height:
            raise MapParseError(
                f"elevation block has {len(rest)} rows, expected {height}", rest[0][0]
            )
        for y, (lineno, ln) in enumerate(rest):
            fields = ln.split()
            if len(fields) != width:
                raise MapParseError(
                    f"elevation row has {len(fields)} values, expected {width}", lineno
                )
            for x, tok in enumerate(fields):
                try:
                    v = float(tok)
                except ValueError:
                    raise MapParseError(f"bad elevation value {tok!r}", lineno, x + 1) from None
                if not (0.0 <= v <= 1.0):
                    raise MapParseError(f"elevation {v} outside [0, 1]", lineno, x + 1)
                elev[y, x] = v
    return GridMap(occ, elev)
