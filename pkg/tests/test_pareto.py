import numpy as np
import pytest
from hypothesis import given
import hypothesis.strategies as st
from hypothesis.extra.numpy import arrays

from oracles import brute_front
from oracles import dominates as oracle_dominates
from paretoplan.pareto import (
    FrontIndex,
    ParetoError,
    dominated_by_any,
    dominated_mask,
    dominates,
    normalize,
    normalized_sums,
    pareto_front,
    rows_dominated_by,
    select_from_front,
)

# small integer grids make ties and duplicate rows common
small_values = st.integers(0, 6).map(float)


@st.composite
def matrices(draw, max_rows=64, max_dims=4):
    n = draw(st.integers(1, max_rows))
    d = draw(st.integers(2, max_dims))
    elems = draw(st.sampled_from([small_values, st.floats(-1e3, 1e3, allow_nan=False)]))
    return draw(arrays(np.float64, (n, d), elements=elems))


vectors = st.lists(small_values, min_size=3, max_size=3)


class TestDominates:
    def test_examples(self):
        assert dominates((1, 1), (2, 2))
        assert not dominates((1, 2), (2, 1))
        assert not dominates((2, 1), (1, 2))
        assert not dominates((1, 1), (1, 1))

    def test_dimension_mismatch(self):
        with pytest.raises(ParetoError):
            dominates((1, 2), (1, 2, 3))

    @given(vectors, vectors)
    def test_matches_oracle(self, a, b):
        assert dominates(a, b) == oracle_dominates(a, b)

    @given(vectors, vectors)
    def test_irreflexive_asymmetric(self, a, b):
        assert not dominates(a, a)
        assert not (dominates(a, b) and dominates(b, a))

    @given(vectors, vectors, vectors)
    def test_transitive(self, a, b, c):
        if dominates(a, b) and dominates(b, c):
            assert dominates(a, c)

    @given(matrices(), st.data())
    def test_row_masks(self, m, data):
        p = m[data.draw(st.integers(0, len(m) - 1))]
        assert dominated_by_any(m, p).tolist() == [oracle_dominates(r, p) for r in m]
        assert rows_dominated_by(m, p).tolist() == [oracle_dominates(p, r) for r in m]


class TestParetoFront:
    def test_single_row(self):
        assert pareto_front([[3.0, 4.0]]).tolist() == [0]

    def test_example(self):
        assert pareto_front([[1, 3], [2, 2], [3, 3]]).tolist() == [0, 1]

    def test_duplicates_kept(self):
        assert pareto_front([[1, 1], [1, 1], [2, 2]]).tolist() == [0, 1]

    def test_empty(self):
        with pytest.raises(ParetoError):
            pareto_front(np.empty((0, 3)))

    def test_non_finite(self):
        with pytest.raises(ParetoError):
            pareto_front([[1.0, np.inf]])

    def test_64_random_rows(self, rng):
        m = rng.random((64, 3))
        assert pareto_front(m).tolist() == brute_front(m.tolist())

    @given(matrices())
    def test_matches_oracle(self, m):
        assert pareto_front(m).tolist() == brute_front(m.tolist())

    @given(matrices())
    def test_off_front_rows_have_a_front_dominator(self, m):
        front = pareto_front(m)
        assert len(front) > 0
        for i in np.flatnonzero(dominated_mask(m)):
            assert any(oracle_dominates(m[j], m[i]) for j in front)

    @given(arrays(np.float64, st.tuples(st.integers(1, 40), st.integers(2, 4)), elements=small_values),
           st.sampled_from(["exp", "cube", "shift"]))
    def test_monotone_transform_invariance(self, m, kind):
        # integer entries keep every transform exactly order-preserving
        f = {"exp": np.exp, "cube": lambda x: x ** 3, "shift": lambda x: 3.0 * x + 7.0}[kind]
        assert pareto_front(f(m)).tolist() == pareto_front(m).tolist()


class TestNormalize:
    def test_affine_column(self):
        got = normalize([[0.0, 2.0], [5.0, 2.0], [10.0, 2.0]])
        assert got[:, 0].tolist() == [0.0, 0.5, 1.0]
        assert got[:, 1].tolist() == [0.0, 0.0, 0.0]

    @given(matrices())
    def test_unit_range(self, m):
        got = normalize(m)
        for j in range(m.shape[1]):
            col = m[:, j]
            if col.max() > col.min():
                assert got[:, j].min() == 0.0
                assert got[:, j].max() == 1.0
            else:
                assert not got[:, j].any()

    @given(matrices())
    def test_order_preserved(self, m):
        got = normalize(m)
        for j in range(m.shape[1]):
            a, b = m[:, j], got[:, j]
            assert np.all((a[:, None] < a[None, :]) <= (b[:, None] <= b[None, :]))

    @given(matrices())
    def test_sums_match(self, m):
        assert np.allclose(normalized_sums(m), normalize(m).sum(axis=1), rtol=0, atol=1e-12)


class TestSelect:
    def test_singleton(self):
        assert select_from_front([[5.0, 5.0], [1.0, 9.0]], [1]) == 1

    def test_symmetric_tie_goes_first(self):
        m = [[0.0, 10.0], [10.0, 0.0]]
        assert select_from_front(m, [0, 1]) == 0
        assert select_from_front(m, [0, 1], seq=[7, 3]) == 1

    def test_three_member_front(self):
        # (g, h, e) columns normalise to
        #   g: 0, 0.5, 1   h: 1, 1/3, 0   e: 2/3, 1, 0
        # giving sums 5/3, 11/6, 1
        m = np.array([[2.0, 5.0, 0.4], [3.0, 3.0, 0.5], [4.0, 2.0, 0.2]])
        assert pareto_front(m).tolist() == [0, 1, 2]
        assert np.allclose(normalized_sums(m), [5 / 3, 11 / 6, 1.0])
        assert select_from_front(m, [0, 1, 2]) == 2

    def test_only_front_rows_are_normalised(self):
        # scaled over the front the two rows tie; scaled over all three
        # rows, row 1 would win
        m = np.array([[0.0, 4.0], [3.0, 0.0], [100.0, 5.0]])
        assert pareto_front(m).tolist() == [0, 1]
        assert select_from_front(m, [0, 1]) == 0
        assert np.argmin(normalized_sums(m)) == 1

    def test_empty_front(self):
        with pytest.raises(ParetoError):
            select_from_front([[1.0, 1.0]], [])

    @given(matrices())
    def test_choice_is_front_minimum(self, m):
        front = pareto_front(m)
        chosen = select_from_front(m, front)
        assert chosen in front
        sums = normalized_sums(m[front])
        ties = front[sums == sums.min()]
        assert chosen == ties[0]


class TestFrontIndex:
    @given(st.lists(st.tuples(st.booleans(), vectors), min_size=1, max_size=80))
    def test_tracks_recomputed_front(self, ops):
        idx = FrontIndex(3, capacity=4)
        live = {}
        key = 0
        for remove, row in ops:
            if remove and live:
                k = sorted(live)[len(live) // 2]
                idx.remove(k)
                del live[k]
            else:
                idx.add(key, row)
                live[key] = row
                key += 1
            keys = sorted(live)
            want = {keys[i] for i in brute_front([live[k] for k in keys])} if keys else set()
            assert set(idx.front_keys().tolist()) == want
            assert len(idx) == len(live)

    def test_duplicate_key(self):
        idx = FrontIndex(2)
        idx.add(1, [0.0, 0.0])
        with pytest.raises(KeyError):
            idx.add(1, [1.0, 1.0])
