"""Best-first grid search: scalar A*, normalised-sum A*, and A*-PO.

All three share one open/closed-list engine and differ only in how the
next node is taken from the open list:

``astar``
    smallest ``f = g + h`` (binary heap).
``astar_norm``
    every active criterion is min-max normalised over the current open
    list and the smallest sum wins.
``astar_po``
    the Pareto front of the open list's cost vectors is found and, when it
    holds more than one node, the front alone is normalised and the
    smallest sum wins.

Ties always go to the earliest-inserted node.  The goal test happens when
the goal is generated as a successor, not when it is expanded.
"""

from __future__ import annotations

import heapq
import json
import time
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from . import costmodel, pareto
from .costmodel import CostVector, Heuristic, LayerSet, Path
from .gridworld import Coord, GridMap, MapError, Move, neighbors

ALGORITHMS = ("astar", "astar_norm", "astar_po")


class InvalidQuery(MapError):
    """Start or goal is out of bounds or occupied."""


class CorruptSearchTree(RuntimeError):
    pass


@dataclass(frozen=True)
class PlannerConfig:
    algorithm: str = "astar_po"
    layers: LayerSet = field(default_factory=LayerSet)
    diagnostic: bool = False
    heuristic: str = "euclidean"
    # "open": front over the whole open list; "successors": front over the
    # nodes generated by the last expansion only (falls back to the open
    # list when that expansion added nothing).
    pareto_domain: str = "open"
    # "auto" runs the compiled loop whenever neither diagnostics nor the
    # successors domain are requested.
    engine: str = "auto"
    # Check every selection against the whole open list during the search;
    # cheap, and available on both engines.
    audit: bool = False

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.algorithm == "astar" and (self.layers.elevation or self.layers.solar):
            raise ValueError("plain astar only supports the distance and heuristic layers")
        if self.heuristic not in costmodel.HEURISTICS:
            raise ValueError(f"unknown heuristic {self.heuristic!r}")
        if self.pareto_domain not in ("open", "successors"):
            raise ValueError(f"unknown pareto_domain {self.pareto_domain!r}")
        if self.engine not in ("auto", "python", "compiled"):
            raise ValueError(f"unknown engine {self.engine!r}")
        if self.engine == "compiled" and not self.compilable:
            raise ValueError("the compiled engine covers astar_norm/astar_po without diagnostics")

    @property
    def compilable(self) -> bool:
        return (self.algorithm != "astar" and not self.diagnostic
                and self.pareto_domain == "open")

    @property
    def use_compiled(self) -> bool:
        return self.engine == "compiled" or (self.engine == "auto" and self.compilable)

    @property
    def label(self) -> str:
        return self.algorithm.replace("_", "-")


@dataclass(eq=False, slots=True)
class SearchNode:
    pos: Coord
    cost: CostVector
    parent: Optional["SearchNode"]
    seq: int
    heading: Optional[Move] = None
    closed: bool = False
    vector: tuple[float, ...] = ()

    def __post_init__(self):
        self.vector = self.cost.as_tuple()


@dataclass
class Expansion:
    """One selection step, kept only in diagnostic mode.

    ``open_keys``/``open_vectors`` describe the open list at selection
    time, chosen node included.
    """

    step: int
    chosen_key: int
    chosen_pos: Coord
    chosen_vector: tuple[float, ...]
    open_keys: np.ndarray
    open_vectors: np.ndarray

    def to_json(self) -> str:
        return json.dumps({
            "step": self.step,
            "chosen": self.chosen_key,
            "pos": list(self.chosen_pos),
            "vector": list(self.chosen_vector),
            "open_keys": self.open_keys.tolist(),
            "open": self.open_vectors.tolist(),
        })

    @classmethod
    def from_json(cls, line: str) -> "Expansion":
        d = json.loads(line)
        vecs = np.array(d["open"], dtype=float).reshape(len(d["open_keys"]), -1)
        return cls(d["step"], d["chosen"], Coord(*d["pos"]), tuple(d["vector"]),
                   np.array(d["open_keys"], dtype=np.int64), vecs)


@dataclass
class SearchResult:
    path: Optional[Path]
    expanded_count: int
    open_list_peak: int
    elapsed: float
    expansion_log: list[Expansion] = field(default_factory=list)
    goal_node: Optional[SearchNode] = None
    audit_violations: Optional[int] = None

    @property
    def found(self) -> bool:
        return self.path is not None


def write_expansion_log(log: Iterable[Expansion], fh) -> None:
    for rec in log:
        fh.write(rec.to_json() + "\n")


def read_expansion_log(fh) -> list[Expansion]:
    return [Expansion.from_json(ln) for ln in fh if ln.strip()]


def audit_expansions(log: Iterable[Expansion]) -> list[int]:
    """Steps whose chosen vector is dominated by some open-list vector."""
    bad = []
    for rec in log:
        chosen = np.asarray(rec.chosen_vector)
        if any(pareto.dominates(v, chosen) for v in rec.open_vectors):
            bad.append(rec.step)
    return bad


def reconstruct_path(goal_node: SearchNode) -> list[Coord]:
    """Waypoints from the root of ``goal_node``'s parent chain to the node."""
    out = []
    seen = set()
    node = goal_node
    while node is not None:
        if id(node) in seen:
            raise CorruptSearchTree(f"parent chain loops at {tuple(node.pos)}")
        seen.add(id(node))
        out.append(node.pos)
        node = node.parent
    out.reverse()
    return out


class _Search:
    def __init__(self, grid: GridMap, start: Coord, goal: Coord, config: PlannerConfig):
        self.grid = grid
        self.start = Coord(*start)
        self.goal = Coord(*goal)
        self.cfg = config
        self.layers = config.layers
        self.h: Heuristic = costmodel.HEURISTICS[config.heuristic]
        self.solar = (
            costmodel.solar_table(self.layers.sun_angle) if self.layers.solar else None
        )
        self.seq = 0
        self.open: dict[int, SearchNode] = {}
        self.by_key: dict[tuple, list[SearchNode]] = {}
        algo = config.algorithm
        dims = self.layers.dims
        self.heap: list[tuple[float, int]] = []
        self.store = None
        if algo == "astar_norm":
            self.store = pareto.RowStore(dims)
        elif algo == "astar_po":
            self.store = pareto.FrontIndex(dims)
        self.last_children: list[int] = []
        self.log: list[Expansion] = []
        self.expanded = 0
        self.peak = 0
        self.violations = 0

    # -- node bookkeeping -------------------------------------------------

    def _make(self, pos: Coord, parent: Optional[SearchNode], move: Optional[Move]) -> SearchNode:
        g = 0.0 if parent is None else parent.cost.g + move.step_length
        e = self.grid.elevation_at(pos) if self.layers.elevation else None
        s = None
        if self.solar is not None:
            s = 0.0 if parent is None else parent.cost.s + self.solar[move]
        cost = CostVector(g, self.h(pos, self.goal), e, s)
        node = SearchNode(pos, cost, parent, self.seq, move if self.solar is not None else None)
        self.seq += 1
        return node

    def _key(self, node: SearchNode) -> tuple:
        return (node.pos, node.heading)

    def _push(self, node: SearchNode) -> None:
        self.open[node.seq] = node
        self.by_key.setdefault(self._key(node), []).append(node)
        if self.store is None:
            heapq.heappush(self.heap, (node.cost.g + node.cost.h, node.seq))
        else:
            self.store.add(node.seq, node.vector)
        self.peak = max(self.peak, len(self.open))

    def _discard(self, node: SearchNode) -> None:
        self.by_key[self._key(node)].remove(node)
        if not node.closed:
            del self.open[node.seq]
            if self.store is not None:
                self.store.remove(node.seq)

    def _offer(self, node: SearchNode) -> bool:
        """Duplicate rule, then insert.  Returns whether ``node`` was kept.

        A same-key node whose vector is no worse everywhere makes the new
        node redundant.  Same-key nodes the new one dominates are dropped
        (from the open or the closed list).  Mutually non-dominated nodes
        coexist; that only happens when the solar layer is on.
        """
        vec = node.vector
        existing = self.by_key.get(self._key(node), ())
        beaten = []
        for ex in existing:
            ev = ex.vector
            if all(a <= b for a, b in zip(ev, vec)):
                return False
            if all(b <= a for a, b in zip(ev, vec)):
                beaten.append(ex)
        for ex in beaten:
            self._discard(ex)
        self._push(node)
        return True

    # -- selection ----------------------------------------------------------

    def _select(self) -> int:
        algo = self.cfg.algorithm
        if algo == "astar":
            while True:
                _, seq = heapq.heappop(self.heap)
                if seq in self.open:
                    return seq
        rows, keys = self.store.rows, self.store.keys
        if algo == "astar_norm":
            return int(keys[pareto.argmin_fifo(pareto.normalized_sums(rows), keys)])
        if self.cfg.pareto_domain == "successors" and self.last_children:
            kids = [k for k in self.last_children if k in self.open]
            if kids:
                m = np.array([self.open[k].vector for k in kids])
                front = pareto.pareto_front(m)
                return kids[pareto.select_from_front(m, front, seq=kids)]
        front = self.store.front_slots()
        return int(keys[pareto.select_from_front(rows, front, seq=keys)])

    def _snapshot(self, chosen: int) -> Expansion:
        node = self.open[chosen]
        if self.store is not None:
            keys = self.store.keys.copy()
            vecs = self.store.rows.copy()
        else:
            keys = np.array(sorted(self.open), dtype=np.int64)
            vecs = np.array([self.open[k].vector for k in keys], dtype=float)
        return Expansion(self.expanded, chosen, node.pos, node.vector, keys, vecs)

    def _audit(self, chosen: int) -> None:
        vec = self.open[chosen].vector
        for node in self.open.values():
            if pareto.dominates(node.vector, vec):
                self.violations += 1
                return

    # -- main loop ----------------------------------------------------------

    def run(self) -> Optional[SearchNode]:
        for c, what in ((self.start, "start"), (self.goal, "goal")):
            if not self.grid.is_free(c):
                raise InvalidQuery(f"{what} {tuple(c)} is out of bounds or occupied")
        root = self._make(self.start, None, None)
        if self.start == self.goal:
            return root
        self._push(root)
        while self.open:
            qseq = self._select()
            if self.cfg.diagnostic:
                self.log.append(self._snapshot(qseq))
            if self.cfg.audit:
                self._audit(qseq)
            q = self.open.pop(qseq)
            if self.store is not None:
                self.store.remove(qseq)
            self.expanded += 1
            self.last_children = []
            for pos, move in neighbors(self.grid, q.pos):
                child = self._make(pos, q, move)
                if pos == self.goal:
                    return child
                if self._offer(child):
                    self.last_children.append(child.seq)
            q.closed = True
        return None


_warm = False


def warm_up(configs: Iterable[PlannerConfig] = ()) -> None:
    """Load the compiled loop ahead of any timed call that will need it."""
    global _warm
    if _warm or not any(c.use_compiled for c in configs):
        return
    from . import _kernel

    _kernel.warm_up()
    _warm = True


def _run_compiled(grid: GridMap, start: Coord, goal: Coord, cfg: PlannerConfig):
    from . import _kernel

    start, goal = Coord(*start), Coord(*goal)
    for c, what in ((start, "start"), (goal, "goal")):
        if not grid.is_free(c):
            raise InvalidQuery(f"{what} {tuple(c)} is out of bounds or occupied")
    layers = cfg.layers
    h = costmodel.HEURISTICS[cfg.heuristic]
    if start == goal:
        e = grid.elevation_at(start) if layers.elevation else None
        s = 0.0 if layers.solar else None
        return SearchNode(start, CostVector(0.0, h(start, goal), e, s), None, 0), 0, 0, 0
    hcell = np.array([[h(Coord(x, y), goal) for x in range(grid.width)]
                      for y in range(grid.height)])
    moves = list(Move)
    table = costmodel.solar_table(layers.sun_angle) if layers.solar else {}
    solar = np.array([table.get(m, 0.0) for m in moves])
    parent, px, py, gp, gm, expanded, peak, violations = _kernel.search(
        grid.occupancy, hcell, grid.elevation,
        np.array([m.dx for m in moves], dtype=np.int64),
        np.array([m.dy for m in moves], dtype=np.int64),
        np.array([m.step_length for m in moves]), solar,
        start.x, start.y, goal.x, goal.y,
        _kernel.MODE_PO if cfg.algorithm == "astar_po" else _kernel.MODE_NORM,
        layers.elevation, layers.solar, cfg.audit,
    )
    if gp < 0:
        return None, int(expanded), int(peak), int(violations)
    chain = []
    i = int(gp)
    while i >= 0:
        chain.append(i)
        i = int(parent[i])
    node = None
    for i in reversed(chain):
        node = _chain_node(grid, node, Coord(int(px[i]), int(py[i])), goal, h, layers, i)
    node = _chain_node(grid, node, goal, goal, h, layers, -1)
    return node, int(expanded), int(peak), int(violations)


def _chain_node(grid, parent, pos, goal, h, layers, seq):
    """Rebuild one ``SearchNode`` of a compiled search's result chain."""
    move = None if parent is None else Move.between(parent.pos, pos)
    g = 0.0 if parent is None else parent.cost.g + move.step_length
    e = grid.elevation_at(pos) if layers.elevation else None
    s = None
    if layers.solar:
        s = 0.0 if parent is None else parent.cost.s + costmodel.solar_step_cost(move, layers.sun_angle)
    return SearchNode(pos, CostVector(g, h(pos, goal), e, s), parent, seq,
                      move if layers.solar else None)


def plan(grid: GridMap, start: Coord, goal: Coord, config: PlannerConfig) -> SearchResult:
    t0 = time.perf_counter()
    log: list[Expansion] = []
    if config.use_compiled:
        goal_node, expanded, peak, violations = _run_compiled(grid, start, goal, config)
    else:
        search = _Search(grid, start, goal, config)
        goal_node = search.run()
        expanded, peak, violations, log = search.expanded, search.peak, search.violations, search.log
    elapsed = time.perf_counter() - t0
    path = None
    if goal_node is not None:
        sun = config.layers.sun_angle if config.layers.solar else None
        path = costmodel.evaluate_path(reconstruct_path(goal_node), grid, sun)
    return SearchResult(path, expanded, peak, elapsed, log, goal_node,
                        violations if config.audit else None)


def plan_astar(grid: GridMap, start: Coord, goal: Coord, *, diagnostic: bool = False,
               heuristic: str = "euclidean") -> SearchResult:
    cfg = PlannerConfig("astar", LayerSet.distance_only(), diagnostic, heuristic)
    return plan(grid, start, goal, cfg)


def plan_astar_norm(grid: GridMap, start: Coord, goal: Coord, layers: LayerSet | None = None,
                    *, diagnostic: bool = False) -> SearchResult:
    cfg = PlannerConfig("astar_norm", layers or LayerSet(), diagnostic)
    return plan(grid, start, goal, cfg)


def plan_astar_po(grid: GridMap, start: Coord, goal: Coord, layers: LayerSet | None = None,
                  *, diagnostic: bool = False, pareto_domain: str = "open") -> SearchResult:
    cfg = PlannerConfig("astar_po", layers or LayerSet(), diagnostic, pareto_domain=pareto_domain)
    return plan(grid, start, goal, cfg)
