"""Seeded experiment environments and DEM-based terrain.

Synthetic terrains are value noise: a few octaves of random lattice values,
bilinearly interpolated and min-max normalised.  Obstacle fields are sampled
uniformly without replacement and redrawn with the next seed until the goal
is reachable from the start.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields

import numpy as np

from .gridworld import Coord, GridMap, reachable

MAX_ATTEMPTS = 100
MARS_SIZE = 100
MARS_OBSTACLES = 0.30
MARS_RELIEF_M = 34.4
MARS_CELL_M2 = 1.0


class ScenarioError(ValueError):
    pass


class GenerationFailure(RuntimeError):
    pass


class DemParseError(ValueError):
    pass


@dataclass(frozen=True)
class ScenarioSpec:
    width: int = 20
    height: int = 18
    obstacle_fraction: float = 0.20
    terrain_seed: int = 1
    obstacle_seed: int = 1
    start: Coord | None = None
    goal: Coord | None = None
    sun_angle: float | None = None

    def __post_init__(self):
        if self.width < 2 or self.height < 2:
            raise ScenarioError(f"grid must be at least 2x2, got {self.width}x{self.height}")
        if not (0.0 <= self.obstacle_fraction < 0.5):
            raise ScenarioError(f"obstacle fraction must be in [0, 0.5), got {self.obstacle_fraction}")
        start = Coord(*self.start) if self.start is not None else Coord(0, 0)
        goal = Coord(*self.goal) if self.goal is not None else Coord(self.width - 1, self.height - 1)
        for c in (start, goal):
            if not (0 <= c.x < self.width and 0 <= c.y < self.height):
                raise ScenarioError(f"cell {tuple(c)} lies outside the grid")
        if start == goal:
            raise ScenarioError("start and goal must differ")
        if self.sun_angle is not None and not (0.0 <= self.sun_angle < 360.0):
            raise ScenarioError(f"sun angle must be in [0, 360), got {self.sun_angle}")
        object.__setattr__(self, "start", start)
        object.__setattr__(self, "goal", goal)

    @property
    def obstacle_count(self) -> int:
        return math.floor(self.obstacle_fraction * self.width * self.height + 1e-9)

    def to_line(self) -> str:
        parts = []
        for k, v in asdict(self).items():
            if v is None:
                continue
            if k in ("start", "goal"):
                v = f"{v[0]},{v[1]}"
            parts.append(f"{k}={v}")
        return " ".join(parts)

    @classmethod
    def from_pairs(cls, pairs: dict[str, str]) -> "ScenarioSpec":
        known = {f.name for f in fields(cls)}
        kw = {}
        for k, v in pairs.items():
            if k not in known:
                raise ScenarioError(f"unknown scenario key {k!r}")
            if k in ("width", "height", "terrain_seed", "obstacle_seed"):
                kw[k] = int(v)
            elif k in ("obstacle_fraction", "sun_angle"):
                kw[k] = float(v)
            else:
                kw[k] = Coord.parse(v)
        return cls(**kw)

    @classmethod
    def from_line(cls, line: str) -> "ScenarioSpec":
        pairs = {}
        for tok in line.split():
            k, sep, v = tok.partition("=")
            if not sep:
                raise ScenarioError(f"expected key=value, got {tok!r}")
            pairs[k] = v
        return cls.from_pairs(pairs)

    @classmethod
    def from_config(cls, text: str) -> "ScenarioSpec":
        """Parse ``key = value`` lines; ``#`` starts a comment."""
        pairs = {}
        for n, raw in enumerate(text.splitlines(), 1):
            ln = raw.split("#", 1)[0].strip()
            if not ln:
                continue
            k, sep, v = ln.partition("=")
            if not sep:
                raise ScenarioError(f"line {n}: expected 'key = value'")
            pairs[k.strip()] = v.strip()
        return cls.from_pairs(pairs)


def read_suite(text: str) -> list[ScenarioSpec]:
    """One scenario per non-blank, non-comment line."""
    out = []
    for n, raw in enumerate(text.splitlines(), 1):
        ln = raw.split("#", 1)[0].strip()
        if ln:
            try:
                out.append(ScenarioSpec.from_line(ln))
            except (ScenarioError, ValueError) as exc:
                raise ScenarioError(f"suite line {n}: {exc}") from None
    return out


def write_suite(specs) -> str:
    return "".join(s.to_line() + "\n" for s in specs)


def canonical_suite(count: int = 80, terrains: int = 8, width: int = 20, height: int = 18,
                    obstacle_fraction: float = 0.20) -> list[ScenarioSpec]:
    """The comparison suite: ``count`` obstacle seeds cycling over ``terrains`` terrains."""
    return [
        ScenarioSpec(width, height, obstacle_fraction, terrain_seed=i % terrains + 1,
                     obstacle_seed=i + 1)
        for i in range(count)
    ]


def _min_max(a: np.ndarray) -> np.ndarray:
    lo, hi = a.min(), a.max()
    if hi - lo <= 0:
        return np.zeros_like(a, dtype=float)
    return (a - lo) / (hi - lo)


def _bilinear(lattice: np.ndarray, height: int, width: int) -> np.ndarray:
    ly, lx = lattice.shape
    ys = np.linspace(0, ly - 1, height)
    xs = np.linspace(0, lx - 1, width)
    y0 = np.clip(np.floor(ys).astype(int), 0, ly - 2)
    x0 = np.clip(np.floor(xs).astype(int), 0, lx - 2)
    ty = (ys - y0)[:, None]
    tx = (xs - x0)[None, :]
    a = lattice[np.ix_(y0, x0)]
    b = lattice[np.ix_(y0, x0 + 1)]
    c = lattice[np.ix_(y0 + 1, x0)]
    d = lattice[np.ix_(y0 + 1, x0 + 1)]
    return (a * (1 - tx) + b * tx) * (1 - ty) + (c * (1 - tx) + d * tx) * ty


def value_noise(width: int, height: int, seed: int, octaves: int = 3,
                base_cells: int = 3) -> np.ndarray:
    """Unnormalised value noise of shape ``(height, width)``."""
    rng = np.random.default_rng(seed)
    out = np.zeros((height, width))
    amp = 1.0
    for o in range(octaves):
        n = base_cells * 2**o
        lattice = rng.random((n + 1, n + 1))
        out += amp * _bilinear(lattice, height, width)
        amp *= 0.5
    return out


def generate_terrain(width: int, height: int, terrain_seed: int,
                     zero_cells=((0, 0), None)) -> np.ndarray:
    """Smooth terrain in [0, 1] with min 0 and max 1.

    ``zero_cells`` are forced to elevation 0 before the final rescale; a
    ``None`` entry stands for the lower-right corner.
    """
    if width < 2 or height < 2:
        raise ScenarioError(f"terrain must be at least 2x2, got {width}x{height}")
    t = _min_max(value_noise(width, height, terrain_seed))
    for c in zero_cells:
        x, y = (width - 1, height - 1) if c is None else c
        t[y, x] = 0.0
    top = t.max()
    if top > 0:
        t = t / top
    return t


def place_obstacles(width: int, height: int, count: int, seed: int,
                    keep_free=()) -> np.ndarray:
    rng = np.random.default_rng(seed)
    banned = {y * width + x for x, y in keep_free}
    candidates = np.array([i for i in range(width * height) if i not in banned])
    if count > len(candidates):
        raise ScenarioError(f"cannot place {count} obstacles in {len(candidates)} cells")
    occ = np.zeros(width * height, bool)
    occ[rng.choice(candidates, size=count, replace=False)] = True
    return occ.reshape(height, width)


@dataclass(frozen=True)
class Scenario:
    spec: ScenarioSpec
    grid: GridMap
    obstacle_seed_used: int
    metadata: dict | None = None


def _screened_grid(spec: ScenarioSpec, elevation: np.ndarray) -> tuple[GridMap, int]:
    for attempt in range(MAX_ATTEMPTS):
        seed = spec.obstacle_seed + attempt
        occ = place_obstacles(spec.width, spec.height, spec.obstacle_count, seed,
                              keep_free=(spec.start, spec.goal))
        grid = GridMap(occ, elevation)
        if reachable(grid, spec.start, spec.goal):
            return grid, seed
    raise GenerationFailure(
        f"goal unreachable after {MAX_ATTEMPTS} obstacle draws from seed {spec.obstacle_seed}"
    )


def generate_scenario(spec: ScenarioSpec) -> Scenario:
    elevation = generate_terrain(spec.width, spec.height, spec.terrain_seed,
                                 zero_cells=(spec.start, spec.goal))
    grid, used = _screened_grid(spec, elevation)
    return Scenario(spec, grid, used)


def generate_environment(spec: ScenarioSpec) -> GridMap:
    return generate_scenario(spec).grid


# -- DEM handling ---------------------------------------------------------------


def parse_dem(text: str) -> np.ndarray:
    """Parse ``<width> <height>`` followed by row-major decimals."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise DemParseError("empty DEM")
    try:
        width, height = (int(v) for v in lines[0].split())
    except ValueError:
        raise DemParseError("line 1: header must be '<width> <height>'") from None
    rows = lines[1:]
    if len(rows) != height:
        raise DemParseError(f"expected {height} rows, found {len(rows)}")
    out = np.empty((height, width))
    for y, ln in enumerate(rows):
        toks = ln.split()
        if len(toks) != width:
            raise DemParseError(f"row {y + 1} has {len(toks)} values, expected {width}")
        for x, tok in enumerate(toks):
            try:
                v = float(tok)
            except ValueError:
                raise DemParseError(f"row {y + 1}, column {x + 1}: not a number: {tok!r}") from None
            if not math.isfinite(v):
                raise DemParseError(f"row {y + 1}, column {x + 1}: non-finite value")
            out[y, x] = v
    return out


def format_dem(dem: np.ndarray, decimals: int = 4) -> str:
    h, w = dem.shape
    body = "\n".join(" ".join(f"{v:.{decimals}f}" for v in row) for row in dem)
    return f"{w} {h}\n{body}\n"


def resample_nearest(dem: np.ndarray, width: int, height: int) -> np.ndarray:
    sh, sw = dem.shape
    ys = np.minimum((np.arange(height) * sh) // height, sh - 1)
    xs = np.minimum((np.arange(width) * sw) // width, sw - 1)
    return dem[np.ix_(ys, xs)]


def import_dem(text: str, width: int, height: int) -> np.ndarray:
    """DEM text to an elevation layer of the given size, scaled to [0, 1]."""
    return _min_max(resample_nearest(parse_dem(text), width, height))


def synthetic_mars_dem(seed: int = 2014, size: int = 120, relief: float = MARS_RELIEF_M) -> np.ndarray:
    """Crater-pocked, layered terrain in metres, total relief ``relief``.

    Stands in for a terrain-model crop: gently tilted bedrock layers,
    a handful of rimmed craters, and low-amplitude roughness.
    """
    rng = np.random.default_rng(seed)
    yy, xx = np.mgrid[0:size, 0:size] / (size - 1)
    tilt = rng.uniform(0, 2 * np.pi)
    along = np.cos(tilt) * xx + np.sin(tilt) * yy
    z = 0.6 * along + 0.08 * np.sin(along * 2 * np.pi * 6)
    for _ in range(6):
        cx, cy = rng.uniform(0.1, 0.9, size=2)
        r = rng.uniform(0.06, 0.2)
        d = np.hypot(xx - cx, yy - cy) / r
        z += -0.5 * r * 4 * np.exp(-(d**2)) + 0.25 * r * 4 * np.exp(-((d - 1.0) ** 2) / 0.05)
    z += 0.15 * _min_max(value_noise(size, size, seed + 1, octaves=4, base_cells=4))
    return _min_max(z) * relief


def mars_case_study(dem: np.ndarray, sun_angle: float, obstacle_seed: int = 1) -> Scenario:
    """100x100 workspace over ``dem`` with 30% random obstacles and the sun on."""
    dem = np.asarray(dem, dtype=float)
    if dem.shape != (MARS_SIZE, MARS_SIZE):
        dem = _min_max(resample_nearest(dem, MARS_SIZE, MARS_SIZE))
    spec = ScenarioSpec(MARS_SIZE, MARS_SIZE, MARS_OBSTACLES, terrain_seed=0,
                        obstacle_seed=obstacle_seed, sun_angle=sun_angle)
    grid, used = _screened_grid(spec, _min_max(dem))
    meta = {"cell_area_m2": MARS_CELL_M2, "relief_m": MARS_RELIEF_M}
    return Scenario(spec, grid, used, meta)
