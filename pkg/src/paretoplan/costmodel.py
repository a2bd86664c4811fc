"""Costmap layers and path objectives.

A search node is scored by a cost vector with one entry per active layer:

* ``g`` - distance travelled from the start,
* ``h`` - heuristic distance to the goal,
* ``e`` - elevation of the node's cell,
* ``s`` - accumulated solar cost of the moves taken (solar layer only).

Whole paths are scored by path length, mean elevation and mean solar cost.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

from .gridworld import SQRT2, Coord, GridMap, MapError, Move, neighbors

Heuristic = Callable[[Coord, Coord], float]

LAYER_NAMES = ("dist", "heur", "elev", "solar")


class CostVector(NamedTuple):
    g: float
    h: float
    e: float | None = None
    s: float | None = None

    def as_tuple(self) -> tuple[float, ...]:
        """Only the active components, in (g, h, e, s) order."""
        return tuple(v for v in self if v is not None)


@dataclass(frozen=True)
class LayerSet:
    """Which costmap layers feed the search.

    Distance and heuristic are always on.  ``sun_angle`` is in degrees,
    counter-clockwise from east, and is required when ``solar`` is set.
    """

    elevation: bool = True
    solar: bool = False
    sun_angle: float | None = None

    def __post_init__(self):
        if self.solar:
            if self.sun_angle is None:
                raise ValueError("solar layer requires sun_angle")
            if not (0.0 <= self.sun_angle < 360.0):
                raise ValueError(f"sun_angle must be in [0, 360), got {self.sun_angle}")

    @classmethod
    def distance_only(cls) -> "LayerSet":
        return cls(elevation=False)

    @classmethod
    def parse(cls, text: str, sun_angle: float | None = None) -> "LayerSet":
        """Parse a comma list such as ``"dist,heur,elev,solar"``."""
        names = {t.strip() for t in text.split(",") if t.strip()}
        unknown = names - set(LAYER_NAMES)
        if unknown:
            raise ValueError(f"unknown layer(s): {', '.join(sorted(unknown))}")
        return cls(elevation="elev" in names, solar="solar" in names, sun_angle=sun_angle)

    @property
    def names(self) -> tuple[str, ...]:
        out = ["dist", "heur"]
        if self.elevation:
            out.append("elev")
        if self.solar:
            out.append("solar")
        return tuple(out)

    @property
    def dims(self) -> int:
        return len(self.names)


@dataclass
class Path:
    waypoints: list[Coord]
    f1: float = float("nan")
    f2: float = float("nan")
    f3: float | None = None
    g_profile: list[float] = field(default_factory=list)

    def __len__(self):
        return len(self.waypoints)

    @property
    def steps(self) -> int:
        return len(self.waypoints) - 1


def step_cost(a: Coord, b: Coord) -> float:
    if a == b:
        raise MapError(f"zero-length step at {tuple(a)}")
    return Move.between(a, b).step_length


def euclidean(a: Coord, b: Coord) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def octile(a: Coord, b: Coord) -> float:
    dx, dy = abs(a[0] - b[0]), abs(a[1] - b[1])
    return max(dx, dy) + (SQRT2 - 1.0) * min(dx, dy)


HEURISTICS: dict[str, Heuristic] = {"euclidean": euclidean, "octile": octile}


def heuristic(at: Coord, goal: Coord) -> float:
    """Default heuristic: straight-line distance between cell centres."""
    return euclidean(at, goal)


def f1_path_length(waypoints: Sequence[Coord]) -> float:
    return sum(euclidean(a, b) for a, b in zip(waypoints, waypoints[1:]))


def f2_avg_elevation(waypoints: Sequence[Coord], grid: GridMap) -> float:
    if not waypoints:
        raise ValueError("empty path")
    return sum(grid.elevation_at(p) for p in waypoints) / len(waypoints)


def sun_vector(sun_angle: float) -> tuple[float, float]:
    r = math.radians(sun_angle)
    return (math.cos(r), math.sin(r))


def solar_step_cost(move: Move, sun_angle: float) -> float:
    """Solar penalty of driving along ``move`` with the sun ray at ``sun_angle``.

    Returns ``(1 + cos theta) / 2`` for the angle theta between the heading
    and the sun ray: 1 when driving along the ray, 0 when driving against it.
    """
    hx, hy = move.heading
    sx, sy = sun_vector(sun_angle)
    c = max(-1.0, min(1.0, hx * sx + hy * sy))
    return (1.0 + c) / 2.0


def solar_table(sun_angle: float) -> dict[Move, float]:
    return {m: solar_step_cost(m, sun_angle) for m in Move}


def f3_mean_solar_cost(waypoints: Sequence[Coord], sun_angle: float) -> float:
    """Mean per-step solar cost; 0 for a single-waypoint path."""
    steps = list(zip(waypoints, waypoints[1:]))
    if not steps:
        return 0.0
    return sum(solar_step_cost(Move.between(a, b), sun_angle) for a, b in steps) / len(steps)


def solar_incidence(waypoints: Sequence[Coord], sun_angle: float) -> float:
    """Reported incidence score, higher is better."""
    return 1.0 - f3_mean_solar_cost(waypoints, sun_angle)


def evaluate_path(waypoints: Sequence[Coord], grid: GridMap, sun_angle: float | None = None) -> Path:
    wps = [Coord(*p) for p in waypoints]
    g = [0.0]
    for a, b in zip(wps, wps[1:]):
        g.append(g[-1] + step_cost(a, b))
    f3 = None if sun_angle is None else f3_mean_solar_cost(wps, sun_angle)
    return Path(wps, f1_path_length(wps), f2_avg_elevation(wps, grid), f3, g)


def validate_path(waypoints: Sequence[Coord], grid: GridMap, start: Coord | None = None,
                  goal: Coord | None = None) -> list[str]:
    """Problems with a path, empty when it is feasible."""
    problems = []
    if not waypoints:
        return ["path is empty"]
    if start is not None and tuple(waypoints[0]) != tuple(start):
        problems.append(f"path starts at {tuple(waypoints[0])}, not {tuple(start)}")
    if goal is not None and tuple(waypoints[-1]) != tuple(goal):
        problems.append(f"path ends at {tuple(waypoints[-1])}, not {tuple(goal)}")
    for i, p in enumerate(waypoints):
        if not grid.is_free(p):
            problems.append(f"waypoint {i} {tuple(p)} is blocked or out of bounds")
    for i, (a, b) in enumerate(zip(waypoints, waypoints[1:])):
        if max(abs(a[0] - b[0]), abs(a[1] - b[1])) != 1:
            problems.append(f"waypoints {i} and {i + 1} are not 8-adjacent")
    return problems


@dataclass
class ConsistencyReport:
    edges_checked: int
    violations: list[tuple[Coord, Coord, float, float]]

    @property
    def passed(self) -> bool:
        return not self.violations


def check_consistency(grid: GridMap, goal: Coord, h: Heuristic = heuristic,
                      tol: float = 1e-12) -> ConsistencyReport:
    """Check ``h(n) <= c(n, n') + h(n')`` over every directed free edge.

    Each violation is ``(n, n', h(n), c(n, n') + h(n'))``.
    """
    checked = 0
    bad = []
    for n in grid.free_cells():
        hn = h(n, goal)
        for nb, move in neighbors(grid, n):
            rhs = move.step_length + h(nb, goal)
            checked += 1
            if hn > rhs + tol:
                bad.append((n, nb, hn, rhs))
    return ConsistencyReport(checked, bad)
