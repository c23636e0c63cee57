import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hfpollution import errors
from hfpollution.armodel import fit_ar
from hfpollution.drm import compute_drm
from hfpollution.series import UniformSeries
from hfpollution.synth import gen_ar1, gen_threshold_ar


def drm_loops(x, n_bins):
    """Brute-force equal-count DRM with AR(1) from the normal equations."""
    x = list(map(float, x))
    X = np.array([[1.0, v] for v in x[:-1]])
    a0, a1 = np.linalg.solve(X.T @ X, X.T @ np.array(x[1:]))
    pairs = sorted(((x[t], x[t + 1] - a0 - a1 * x[t]) for t in range(len(x) - 1)), key=lambda p: p[0])
    size, extra = divmod(len(pairs), n_bins)
    out, start = [], 0
    for b in range(n_bins):
        stop = start + size + (1 if b < extra else 0)
        grp = pairs[start:stop]
        rs = [r for _, r in grp]
        mean = sum(rs) / len(rs)
        sd = math.sqrt(sum((r - mean) ** 2 for r in rs) / (len(rs) - 1))
        out.append((sum(p for p, _ in grp) / len(grp), mean, sd / math.sqrt(len(rs)), len(rs)))
        start = stop
    return out


def test_matches_brute_force():
    x = gen_ar1(0.77, 1.0, 500, seed=2).values
    d = compute_drm(x)
    ref = np.array(drm_loops(x, 7))
    np.testing.assert_allclose(d.bin_centers, ref[:, 0], atol=1e-10)
    np.testing.assert_allclose(d.mean_residual, ref[:, 1], atol=1e-10)
    np.testing.assert_allclose(d.stderr, ref[:, 2], atol=1e-10)
    assert d.counts.tolist() == ref[:, 3].astype(int).tolist()


def test_linear_ar_is_flat():
    d = compute_drm(gen_ar1(0.77, 1.0, 7200, seed=1))
    assert np.all(np.abs(d.mean_residual) < 3 * d.stderr)
    assert d.flat()


def test_threshold_ar_top_bin_negative_and_structure_detected():
    d = compute_drm(gen_threshold_ar(0.9, 0.3, 0.7, 1.0, 7200, seed=1))
    assert d.mean_residual[-1] < -3 * d.stderr[-1]
    assert not d.flat()


@pytest.mark.xfail(strict=True, reason="the OLS line is a secant of the concave regime map, so both tails sit below it")
def test_threshold_ar_lowest_bin_positive():
    d = compute_drm(gen_threshold_ar(0.9, 0.3, 0.7, 1.0, 7200, seed=1))
    assert d.mean_residual[0] > 0


def test_insufficient_data():
    x = gen_ar1(0.5, 1.0, 7 * 30 - 1, seed=0)
    with pytest.raises(errors.InsufficientData):
        compute_drm(x)
    compute_drm(gen_ar1(0.5, 1.0, 7 * 30 + 1, seed=0))


def test_constant_series():
    with pytest.raises(errors.DegenerateVariance):
        compute_drm(np.ones(400))


def test_counts_and_weighted_mean():
    x = gen_ar1(0.6, 1.0, 1003, seed=5)
    d = compute_drm(x)
    assert d.counts.sum() == 1002
    assert d.counts.max() - d.counts.min() <= 1
    assert np.dot(d.counts, d.mean_residual) / d.counts.sum() == pytest.approx(0, abs=1e-12)


def test_equal_width_binning():
    x = gen_ar1(0.5, 1.0, 20_000, seed=3)
    d = compute_drm(x, n_bins=5, binning="equal_width")
    assert d.binning == "equal_width"
    assert d.counts.sum() == 19_999
    assert np.all(np.diff(d.bin_centers) > 0)
    with pytest.raises(errors.InsufficientData):
        compute_drm(np.exp(gen_ar1(0.5, 1.5, 2000, seed=3).values), n_bins=7, binning="equal_width")


def test_higher_order_pairs():
    x = gen_ar1(0.5, 1.0, 1000, seed=9)
    d = compute_drm(x, m=2)
    assert d.model.order == 2
    assert d.counts.sum() == 998


@settings(max_examples=20, deadline=None)
@given(st.floats(0.1, 50), st.floats(-100, 100), st.integers(0, 2**31))
def test_affine_equivariance(a, b, seed):
    x = gen_ar1(0.7, 1.0, 600, seed=seed)
    base = compute_drm(x)
    moved = compute_drm(UniformSeries(0, 1, a * x.values + b))
    np.testing.assert_allclose(moved.bin_centers, a * base.bin_centers + b, rtol=1e-9, atol=1e-9 * (1 + abs(b)))
    np.testing.assert_allclose(moved.mean_residual, a * base.mean_residual, atol=1e-8 * a)


def test_to_dict_schema():
    d = compute_drm(gen_ar1(0.5, 1.0, 500, seed=1)).to_dict()
    assert d["binning"] == "equal_count"
    assert len(d["bins"]) == 7
    assert set(d["bins"][0]) == {"center", "mean_r", "stderr", "count"}


def test_model_is_the_in_sample_fit():
    x = gen_ar1(0.5, 1.0, 500, seed=1)
    assert compute_drm(x).model == fit_ar(x, 1)
