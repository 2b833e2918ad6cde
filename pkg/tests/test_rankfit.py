import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from citelaw.distfit import log_histogram
from citelaw.errors import InsufficientDataError
from citelaw.rankfit import (BOTTOM50, TOP10, Curvature, classify_curvature, downscale_histogram,
                             fit_power_law, segment_slopes)
from citelaw.ranking import DoubleRankSeries, double_rank
from citelaw.synth import sample_ideal_subsample
from conftest import cached_scenario

LABELS = {"ideal": "IDEAL", "journal_like": "JOURNAL", "zero_inflated": "ZEROS",
          "japan_like": "JP", "india_like": "IN"}


def scenario_series(name, seed):
    corpus, ranked = cached_scenario(name, seed)
    label = LABELS[name]
    return double_rank(ranked, [r.id for r in corpus.records if label in r.groups])


def identity(n=100):
    return DoubleRankSeries.from_global_ranks(np.arange(1, n + 1), n)


def test_identity_fit():
    f = fit_power_law(identity())
    assert f.alpha == pytest.approx(1.0, abs=1e-12)
    assert f.lnC == pytest.approx(0.0, abs=1e-12)
    assert f.r2 == 1.0 and f.n_points == 100


def test_half_thinning_line():
    # local = global / 2 exactly
    s = DoubleRankSeries.from_global_ranks(2 * np.arange(1, 501), 1000)
    f = fit_power_law(s)
    assert f.alpha == pytest.approx(1.0, abs=1e-12)
    assert f.lnC == pytest.approx(math.log(0.5), abs=1e-12)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 3), st.integers(1, 7), st.integers(10, 200))
def test_exact_on_collinear_input(power, k, n):
    # global = k * local**power is a straight line of slope 1/power in log-log
    i = np.arange(1, n + 1)
    s = DoubleRankSeries(i, k * i ** power, int(k * n ** power))
    f = fit_power_law(s)
    assert abs(f.alpha - 1 / power) < 1e-9
    assert abs(f.lnC + math.log(k) / power) < 1e-9
    assert abs(f.r2 - 1) < 1e-9


def test_ideal_subsample_fit():
    for seed in range(3):
        s = DoubleRankSeries.from_global_ranks(sample_ideal_subsample(100_000, 2000, 0.8, seed), 100_000)
        f = fit_power_law(s)
        assert 0.77 <= f.alpha <= 0.83 and f.r2 > 0.99


def test_too_few_points():
    s = DoubleRankSeries.from_global_ranks([3, 9], 10)
    with pytest.raises(InsufficientDataError):
        fit_power_law(s)
    small = identity(20)
    assert segment_slopes(small) == (None, pytest.approx(1.0))
    with pytest.raises(InsufficientDataError):
        classify_curvature(identity(9))


def test_segments_do_not_share_points():
    s = identity(1000)
    assert fit_power_law(s, TOP10).n_points + fit_power_law(s, (0.1, 0.5)).n_points \
        + fit_power_law(s, BOTTOM50).n_points == 1000


def test_identity_segments_and_curvature():
    top, bottom = segment_slopes(identity(500))
    assert top == pytest.approx(1.0) and bottom == pytest.approx(1.0)
    c = classify_curvature(identity(500))
    assert c.label is Curvature.NONE and abs(c.quad_coeff) < 1e-12


def test_ideal_segments_agree():
    for seed in range(3):
        s = DoubleRankSeries.from_global_ranks(sample_ideal_subsample(100_000, 2000, 0.8, seed), 100_000)
        top, bottom = segment_slopes(s)
        assert abs(top - bottom) / ((top + bottom) / 2) < 0.10
        assert classify_curvature(s).label is Curvature.NONE


@pytest.mark.parametrize("seed", [0, 1])
def test_zero_excess_group_steepens_bottom(seed):
    top, bottom = segment_slopes(scenario_series("zero_inflated", seed))
    assert bottom > top
    top, bottom = segment_slopes(scenario_series("japan_like", seed))
    assert bottom > top


@pytest.mark.parametrize("seed", [0, 1])
def test_scenario_curvatures(seed):
    assert classify_curvature(scenario_series("journal_like", seed)).label is Curvature.DOWNWARD
    assert classify_curvature(scenario_series("zero_inflated", seed)).label is Curvature.UPWARD
    assert classify_curvature(scenario_series("ideal", seed)).label is Curvature.NONE


@pytest.mark.parametrize("name", sorted(LABELS))
def test_full_alpha_between_segment_slopes(name):
    s = scenario_series(name, 0)
    alpha = fit_power_law(s).alpha
    top, bottom = segment_slopes(s)
    assert min(top, bottom) - 0.05 <= alpha <= max(top, bottom) + 0.05


def test_curvature_threshold_boundary():
    c = classify_curvature(scenario_series("journal_like", 0), threshold=1.0)
    assert c.label is Curvature.NONE and c.threshold == 1.0
    assert (c.label is Curvature.NONE) == (abs(c.quad_coeff) <= c.threshold)


def test_downscale_examples():
    h = log_histogram([0] * 40 + [1] * 20 + [5] * 40)
    half = downscale_histogram(h, 50)
    assert half.freq.tolist() == [20.0, 10.0, 0.0, 0.0, 20.0]
    same = downscale_histogram(h, 100)
    assert np.array_equal(same.freq, h.freq) and np.array_equal(same.lower, h.lower)
    with pytest.raises(ValueError):
        downscale_histogram(h, 101)
    with pytest.raises(ValueError):
        downscale_histogram(h, 0)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 3000), min_size=1, max_size=400), st.data())
def test_downscale_sum_and_proportions(values, data):
    h = log_histogram(values)
    target = data.draw(st.integers(1, h.total))
    s = downscale_histogram(h, target)
    assert abs(s.total - target) < 1e-9
    assert np.allclose(s.freq / s.total, h.freq / h.total, rtol=1e-12, atol=0)
