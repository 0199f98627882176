import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from cogchan.strategy import channel_weight, rank_channels, select_adaptive, select_random


def _weight_mp(p):
    mpmath.mp.dps = 30
    p = mpmath.mpf(p)
    return float(mpmath.e ** (-p) * (1 - p))


@pytest.mark.parametrize(
    "p, frozen",
    [("0", 1.0), ("1", 0.0), ("0.5", 0.3032653298563167), ("0.2", 0.6549846024623855)],
)
def test_weight_values(p, frozen):
    assert channel_weight(float(p)) == pytest.approx(frozen, rel=1e-12, abs=1e-15)
    assert channel_weight(float(p)) == pytest.approx(_weight_mp(p), rel=1e-12, abs=1e-15)


@pytest.mark.parametrize("bad", [-0.01, 1.01, math.nan])
def test_weight_rejects_out_of_range(bad):
    with pytest.raises(ValueError):
        channel_weight(bad)


@given(st.floats(0, 1), st.floats(0, 1))
def test_weight_strictly_decreasing(a, b):
    if abs(a - b) > 1e-9:
        lo, hi = sorted((a, b))
        assert channel_weight(lo) > channel_weight(hi)
    assert 0.0 <= channel_weight(a) <= 1.0


def test_rank_examples():
    assert rank_channels({1: 0.2, 2: 0.5, 3: 0.1}) == [3, 1, 2]
    assert rank_channels({1: 0.3, 2: 0.3}) == [1, 2]
    assert rank_channels([0.4] * 5) == [1, 2, 3, 4, 5]


def test_rank_sequence_and_mapping_agree():
    assert rank_channels([0.2, 0.5, 0.1]) == rank_channels({1: 0.2, 2: 0.5, 3: 0.1})


def test_empty_rejected():
    with pytest.raises(ValueError):
        rank_channels({})
    with pytest.raises(ValueError):
        select_adaptive([])


def test_select_adaptive_examples():
    assert select_adaptive({1: 0.2, 2: 0.5, 3: 0.1}) == 3
    assert select_adaptive([0.7]) == 1


grid = st.lists(st.integers(0, 10).map(lambda k: k / 10), min_size=1, max_size=12)


@given(grid)
def test_adaptive_is_lowest_id_argmin(est):
    chosen = select_adaptive(est)
    assert est[chosen - 1] == min(est)
    assert chosen == est.index(min(est)) + 1
    assert sorted(rank_channels(est)) == list(range(1, len(est) + 1))
    assert select_adaptive(est) == chosen


def test_select_random_single_channel():
    rng = np.random.default_rng(0)
    assert all(select_random(1, rng) == 1 for _ in range(100))


def test_select_random_uniform():
    rng = np.random.default_rng(42)
    draws = np.array([select_random(4, rng) for _ in range(100_000)])
    freq = np.bincount(draws, minlength=5)[1:] / draws.size
    assert np.all(np.abs(freq - 0.25) <= 3 * math.sqrt(0.25 * 0.75 / 1e5))


def test_select_random_deterministic():
    r1, r2 = np.random.default_rng(5), np.random.default_rng(5)
    assert [select_random(7, r1) for _ in range(50)] == [select_random(7, r2) for _ in range(50)]


def test_select_random_rejects_zero():
    with pytest.raises(ValueError):
        select_random(0, np.random.default_rng())
