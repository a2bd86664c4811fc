import numpy as np
import pytest
from hypothesis import settings
import hypothesis.strategies as st

from paretoplan.gridworld import GridMap

settings.register_profile("repo", deadline=None, max_examples=60)
settings.load_profile("repo")


@st.composite
def grid_maps(draw, min_side=2, max_side=9, max_fill=0.4, elevation=True):
    w = draw(st.integers(min_side, max_side))
    h = draw(st.integers(min_side, max_side))
    seed = draw(st.integers(0, 2**31 - 1))
    fill = draw(st.floats(0.0, max_fill))
    rng = np.random.default_rng(seed)
    occ = rng.random((h, w)) < fill
    elev = np.round(rng.random((h, w)), 6) if elevation else np.zeros((h, w))
    return GridMap(occ, elev)


def random_grid(rng, width, height, fill=0.2, keep_free=()):
    """Seeded map with roughly ``fill`` occupied cells and smooth-ish terrain."""
    occ = rng.random((height, width)) < fill
    for x, y in keep_free:
        occ[y, x] = False
    elev = rng.random((height, width))
    return GridMap(occ, elev)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES: list[str] = []


def acceptance_line(number: int, ok: bool, detail: str) -> bool:
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
