"""Multi-criteria A* path planning on 8-connected elevation grids.

Three planners share one search engine: scalar A*, A* over min-max
normalised cost vectors, and A*-PO, which restricts each selection to the
Pareto front of the open list.
"""

from paretoplan.costmodel import CostVector, LayerSet, Path, evaluate_path
from paretoplan.gridworld import Coord, GridMap, MapError, Move, load_map, save_map
from paretoplan.planner import (
    PlannerConfig,
    SearchResult,
    plan,
    plan_astar,
    plan_astar_norm,
    plan_astar_po,
)
from paretoplan.scenario import ScenarioSpec, generate_scenario, mars_case_study

__all__ = [
    'Coord',
    'CostVector',
    'GridMap',
    'LayerSet',
    'MapError',
    'Move',
    'Path',
    'PlannerConfig',
    'ScenarioSpec',
    'SearchResult',
    'evaluate_path',
    'generate_scenario',
    'load_map',
    'mars_case_study',
    'plan',
    'plan_astar',
    'plan_astar_norm',
    'plan_astar_po',
    'save_map',
]
