"""Dominance, Pareto fronts and tie-breaking among front members.

All criteria are minimised.  Score matrices are ``(n, d)`` float arrays,
one row per candidate; a row index is the candidate's handle.
"""

from __future__ import annotations

import numpy as np


class ParetoError(ValueError):
    pass


def _as_matrix(m) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    if m.ndim != 2:
        raise ParetoError(f"score matrix must be 2-D, got shape {m.shape}")
    if m.shape[0] == 0:
        raise ParetoError("score matrix is empty")
    if not np.all(np.isfinite(m)):
        raise ParetoError("score matrix has non-finite entries")
    return m


def dominates(a, b) -> bool:
    """True iff ``a`` is no worse than ``b`` everywhere and better somewhere."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ParetoError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return bool(np.all(a <= b) and np.any(a < b))


def dominated_by_any(rows: np.ndarray, point: np.ndarray) -> np.ndarray:
    """Mask over ``rows``: which rows dominate ``point``."""
    return np.all(rows <= point, axis=1) & np.any(rows < point, axis=1)


def rows_dominated_by(rows: np.ndarray, point: np.ndarray) -> np.ndarray:
    """Mask over ``rows``: which rows ``point`` dominates."""
    return np.all(point <= rows, axis=1) & np.any(point < rows, axis=1)


def dominated_mask(m) -> np.ndarray:
    """Mask of rows dominated by at least one other row.

    Rows are visited in lexicographic order: a dominator always sorts
    strictly before the row it dominates, so each row only needs checking
    against the front found so far.
    """
    m = _as_matrix(m)
    order = np.lexsort(m.T[::-1])
    front_rows = np.empty_like(m)
    k = 0
    dominated = np.zeros(len(m), bool)
    for i in order:
        row = m[i]
        if k and dominated_by_any(front_rows[:k], row).any():
            dominated[i] = True
        else:
            front_rows[k] = row
            k += 1
    return dominated


def pareto_front(m) -> np.ndarray:
    """Indices (ascending) of the rows no other row dominates.

    Duplicate rows do not dominate each other, so copies of a front point
    are all kept.
    """
    return np.flatnonzero(~dominated_mask(m))


def normalize(m) -> np.ndarray:
    """Min-max scale every column to [0, 1]; constant columns become 0."""
    m = _as_matrix(m)
    lo = m.min(axis=0)
    span = m.max(axis=0) - lo
    out = np.zeros_like(m)
    nz = span > 0
    out[:, nz] = (m[:, nz] - lo[nz]) / span[nz]
    return out


def normalized_sums(m: np.ndarray) -> np.ndarray:
    """Row sums of ``normalize(m)``, accumulated column by column."""
    lo = m.min(axis=0)
    span = m.max(axis=0) - lo
    out = np.zeros(len(m))
    for j in range(m.shape[1]):
        if span[j] > 0:
            out += (m[:, j] - lo[j]) / span[j]
    return out


def argmin_fifo(values: np.ndarray, seq: np.ndarray | None = None) -> int:
    """Position of the smallest value; ties go to the smallest ``seq``."""
    values = np.asarray(values)
    ties = np.flatnonzero(values == values.min())
    if len(ties) == 1 or seq is None:
        return int(ties[0])
    return int(ties[np.argmin(np.asarray(seq)[ties])])


def select_from_front(m, front, seq=None) -> int:
    """Pick one front row to expand.

    The front rows alone are normalised per column and the row with the
    smallest normalised sum wins.  Ties go to the lowest ``seq`` value,
    which defaults to the row index (insertion order).

    Returns:
        The chosen row's index into ``m``.
    """
    m = _as_matrix(m)
    front = np.asarray(front, dtype=int)
    if front.size == 0:
        raise ParetoError("empty Pareto front")
    if front.size == 1:
        return int(front[0])
    sums = normalized_sums(m[front])
    tie_keys = front if seq is None else np.asarray(seq)[front]
    return int(front[argmin_fifo(sums, tie_keys)])


class RowStore:
    """Compact, growable store of score rows addressed by integer keys.

    Removal swaps the last row into the hole, so row order is arbitrary;
    callers carry insertion order in the keys themselves.
    """

    def __init__(self, dims: int, capacity: int = 256):
        self.dims = dims
        self._rows = np.empty((capacity, dims))
        self._keys = np.empty(capacity, dtype=np.int64)
        self._on_front = np.zeros(capacity, dtype=bool)
        self._slot: dict[int, int] = {}
        self._n = 0

    def __len__(self):
        return self._n

    def __contains__(self, key):
        return key in self._slot

    def _grow(self):
        cap = 2 * len(self._rows)
        for name in ("_rows", "_keys", "_on_front"):
            old = getattr(self, name)
            new = np.zeros((cap,) + old.shape[1:], dtype=old.dtype)
            new[: self._n] = old[: self._n]
            setattr(self, name, new)

    @property
    def rows(self) -> np.ndarray:
        return self._rows[: self._n]

    @property
    def keys(self) -> np.ndarray:
        return self._keys[: self._n]

    def row(self, key) -> np.ndarray:
        return self._rows[self._slot[key]]

    def _append(self, key: int, row: np.ndarray, on_front: bool = False) -> None:
        if key in self._slot:
            raise KeyError(f"duplicate key {key}")
        if self._n == len(self._rows):
            self._grow()
        n = self._n
        self._rows[n] = row
        self._keys[n] = key
        self._on_front[n] = on_front
        self._slot[key] = n
        self._n = n + 1

    def _pop(self, key: int) -> tuple[np.ndarray, bool]:
        slot = self._slot.pop(key)
        row = self._rows[slot].copy()
        was_front = bool(self._on_front[slot])
        last = self._n - 1
        if slot != last:
            self._rows[slot] = self._rows[last]
            self._keys[slot] = self._keys[last]
            self._on_front[slot] = self._on_front[last]
            self._slot[int(self._keys[slot])] = slot
        self._on_front[last] = False
        self._n = last
        return row, was_front

    def add(self, key: int, row) -> None:
        self._append(key, np.asarray(row, dtype=float))

    def remove(self, key: int) -> None:
        self._pop(key)


class FrontIndex(RowStore):
    """A :class:`RowStore` that keeps track of its Pareto front.

    ``add`` checks a new row only against current front members, and
    ``remove`` re-examines only the rows the removed row used to dominate,
    so the tracked front always equals ``pareto_front(rows)`` without a
    full recomputation.
    """

    def front_slots(self) -> np.ndarray:
        return np.flatnonzero(self._on_front[: self._n])

    def front_keys(self) -> np.ndarray:
        return self._keys[self.front_slots()]

    def add(self, key: int, row) -> None:
        row = np.asarray(row, dtype=float)
        front = self.front_slots()
        on_front = not dominated_by_any(self._rows[front], row).any()
        if on_front and len(front):
            self._on_front[front[rows_dominated_by(self._rows[front], row)]] = False
        self._append(key, row, on_front)

    def remove(self, key: int) -> None:
        row, was_front = self._pop(key)
        if not was_front or self._n == 0:
            return
        # Rows that only this one dominated may now be on the front.
        live = self.rows
        cand = np.flatnonzero(~self._on_front[: self._n] & rows_dominated_by(live, row))
        if not len(cand):
            return
        front = self.front_slots()
        if len(front):
            f = live[front][None, :, :]
            c = live[cand][:, None, :]
            beaten = np.any(np.all(f <= c, axis=2) & np.any(f < c, axis=2), axis=1)
            cand = cand[~beaten]
        if len(cand) > 1:
            cand = cand[~dominated_mask(live[cand])]
        self._on_front[cand] = True
