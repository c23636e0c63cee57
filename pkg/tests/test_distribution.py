import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from scipy import stats

from hfpollution import errors
from hfpollution.distribution import (
    FixedTotal,
    LogNormalFit,
    TargetHalfwidth,
    averaging_invariance,
    fit_lognormal,
    histogram,
    ks_lognormal,
    sampling_budget,
)
from hfpollution.synth import gen_lognormal_ar1, make_rng, standard_normal, uniform_open


def test_histogram_basic(series_of):
    h = histogram(series_of([1, 2, 3, 4]), 2)
    assert h.edges.tolist() == [1, 2.5, 4]
    assert h.counts.tolist() == [2, 2]


def test_histogram_last_bin_closed(series_of):
    h = histogram(series_of([0, 1, 2]), 2)
    assert h.counts.tolist() == [1, 2]


def test_histogram_explicit_range(series_of):
    h = histogram(series_of([3.0]), 5, range=(0, 10))
    assert h.counts.tolist() == [0, 1, 0, 0, 0]
    h = histogram(series_of([-1.0, 3.0, 11.0]), 5, range=(0, 10))
    assert h.counts.sum() == 1


def test_histogram_errors(series_of):
    with pytest.raises(errors.DegenerateRange):
        histogram(series_of([2, 2, 2]), 3)
    with pytest.raises(errors.EmptySeries):
        histogram([], 3)


def test_histogram_lognormal_right_skew():
    x = np.exp(1.0 + 0.5 * standard_normal(make_rng(5), 100_000))
    h = histogram(x, 60)
    mode = np.argmax(h.counts)
    assert h.edges[mode + 1] < x.mean()


@given(arrays(float, st.integers(2, 100), elements=st.floats(-100, 100)), st.integers(0, 2**32 - 1))
def test_histogram_permutation_invariant(values, seed):
    if values.min() == values.max():
        return
    perm = np.random.default_rng(seed).permutation(values)
    assert histogram(values, 7).counts.tolist() == histogram(perm, 7).counts.tolist()
    assert histogram(values, 7).counts.sum() == values.size


def test_fit_lognormal_exact():
    fit = fit_lognormal([math.e, math.e, math.e**3, math.e**3])
    assert (fit.mu, fit.sigma, fit.n, fit.degenerate) == (2.0, 1.0, 4, False)


def test_fit_lognormal_constant():
    fit = fit_lognormal([5, 5, 5])
    assert fit.mu == pytest.approx(math.log(5))
    assert fit.sigma == 0 and fit.degenerate


def test_fit_lognormal_errors():
    with pytest.raises(errors.NonPositiveValue) as info:
        fit_lognormal([1.0, 0.0, 2.0])
    assert info.value.index == 1
    with pytest.raises(errors.EmptySeries):
        fit_lognormal([])


def test_fit_lognormal_recovers_generator():
    x = np.exp(1.0 + 0.5 * standard_normal(make_rng(2024), 100_000))
    fit = fit_lognormal(x)
    assert fit.mu == pytest.approx(1.0, abs=0.01)
    assert fit.sigma == pytest.approx(0.5, abs=0.01)


@given(arrays(float, st.integers(1, 200), elements=st.floats(-30, 30)))
def test_fit_lognormal_log_moments(z):
    fit = fit_lognormal(np.exp(z))
    assert fit.mu == pytest.approx(np.mean(z), abs=1e-12)
    assert fit.sigma == pytest.approx(np.std(z), abs=1e-12)


@given(arrays(float, st.integers(2, 100), elements=st.floats(-5, 5)), st.floats(1e-3, 1e3))
def test_fit_lognormal_scaling(z, c):
    x = np.exp(z)
    a, b = fit_lognormal(x), fit_lognormal(c * x)
    assert b.mu == pytest.approx(a.mu + math.log(c), abs=1e-9)
    assert b.sigma == pytest.approx(a.sigma, abs=1e-9)


def test_ks_single_sample_at_median():
    res = ks_lognormal([math.exp(1.0)], LogNormalFit(1.0, 0.3, 1, False))
    assert res.d_stat == pytest.approx(0.5)
    assert res.caveat == "params-estimated"


def test_ks_matches_scipy_statistic():
    x = np.exp(0.3 + 0.8 * standard_normal(make_rng(9), 500))
    fit = fit_lognormal(x)
    ours = ks_lognormal(x, fit)
    ref = stats.kstest(x, "lognorm", args=(fit.sigma, 0, math.exp(fit.mu)), method="asymp")
    assert ours.d_stat == pytest.approx(ref.statistic, abs=1e-12)
    assert 0 <= ours.p_asymptotic <= 1


def test_ks_degenerate_fit():
    with pytest.raises(errors.DegenerateFit):
        ks_lognormal([1.0, 1.0], LogNormalFit(0.0, 0.0, 2, True))


def test_ks_accepts_own_distribution_in_most_seeds():
    passes = 0
    for seed in range(100):
        x = np.exp(1.0 + 0.5 * standard_normal(make_rng(seed), 3600))
        passes += ks_lognormal(x, fit_lognormal(x)).d_stat < 1.36 / math.sqrt(3600)
    assert passes >= 90


def test_ks_rejects_uniform():
    x = 1.0 + uniform_open(make_rng(4), 3600)
    assert ks_lognormal(x, fit_lognormal(x)).d_stat > 1.36 / math.sqrt(3600)


def test_ks_bootstrap_pvalue_is_deterministic():
    x = np.exp(standard_normal(make_rng(1), 400))
    fit = fit_lognormal(x)
    a = ks_lognormal(x, fit, bootstrap=50, seed=3)
    b = ks_lognormal(x, fit, bootstrap=50, seed=3)
    assert a.p_bootstrap == b.p_bootstrap
    assert 0 < a.p_bootstrap <= 1


def test_averaging_invariance_passes_on_lognormal_ar():
    x = gen_lognormal_ar1(0.77, 1.0, 0.5, 36_000, seed=8)
    res = averaging_invariance(x, [10, 60])
    assert [r.window_s for r in res] == [10, 60]
    assert all(r.ks.passes_5pct for r in res)


def test_averaging_invariance_edges(series_of):
    assert averaging_invariance(series_of([1.0] * 100), []) == []
    with pytest.raises(errors.TooFewBlocks):
        averaging_invariance(series_of(np.linspace(1, 2, 100)), [4])


def test_sampling_budget_neyman():
    assert sampling_budget([("day", 4), ("night", 1)], FixedTotal(500)) == [("day", 400), ("night", 100)]
    assert sampling_budget([("a", 2), ("b", 2)], FixedTotal(100)) == [("a", 50), ("b", 50)]


def test_sampling_budget_largest_remainder():
    # quotas 3.33.., 3.33.., 3.33.. -> first stratum gets the spare unit
    assert sampling_budget([("a", 1), ("b", 1), ("c", 1)], FixedTotal(10)) == [("a", 4), ("b", 3), ("c", 3)]


def test_sampling_budget_halfwidth():
    assert sampling_budget([("day", 2.0)], TargetHalfwidth(0.1, 1.96)) == [("day", 1537)]


def test_sampling_budget_errors():
    with pytest.raises(errors.AllZeroSigma):
        sampling_budget([("a", 0), ("b", 0)], FixedTotal(10))
    with pytest.raises(errors.ConfigError):
        sampling_budget([("a", 1), ("b", 1)], FixedTotal(1))


@given(st.lists(st.floats(0, 100), min_size=1, max_size=8), st.integers(8, 10_000))
def test_neyman_sums_to_total(sigmas, total):
    if sum(sigmas) == 0:
        return
    alloc = sampling_budget([(str(i), s) for i, s in enumerate(sigmas)], FixedTotal(total))
    assert sum(n for _, n in alloc) == total
    assert all(n >= 0 for _, n in alloc)
