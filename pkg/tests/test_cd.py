import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ccepanel import InsufficientDataError, cd_test
from ccepanel.diagnostics.cd import pairwise_correlations
from ccepanel.mcsim import FactorDGPConfig, cd_rejection_rate_true_errors

from conftest import make_panel


def test_identical_series():
    e = np.tile(np.random.default_rng(0).normal(size=25), (3, 1))
    assert cd_test(e).statistic == pytest.approx(np.sqrt(75), abs=1e-10)


def test_orthogonal_series():
    t = np.arange(8)
    e = np.array([np.cos(2 * np.pi * t / 8), np.sin(2 * np.pi * t / 8), np.cos(4 * np.pi * t / 8)])
    res = cd_test(e)
    assert res.statistic == pytest.approx(0.0, abs=1e-12)
    assert res.p_value == pytest.approx(1.0)


def test_anticorrelated_pair():
    x = np.random.default_rng(1).normal(size=30)
    res = cd_test(np.array([x, -x]))
    assert res.statistic == pytest.approx(-np.sqrt(30))
    assert res.rejects(0.05)


def test_panel_dataset_input():
    x = np.random.default_rng(2).normal(size=(3, 10))
    assert cd_test(make_panel(residual=x)).statistic == cd_test(x).statistic


def test_short_overlap_skipped():
    e = np.random.default_rng(3).normal(size=(3, 10))
    e[0, 5:] = np.nan
    e[1, :3] = np.nan
    res = cd_test(e)
    assert res.n_pairs == 2 and res.skipped_pairs == 1


def test_overlap_demeaning_uses_common_sample():
    rng = np.random.default_rng(4)
    e = rng.normal(size=(2, 12))
    e[1, :4] = np.nan
    rho, overlap = pairwise_correlations(e)
    assert overlap[0, 1] == 8
    assert rho[0, 1] == pytest.approx(np.corrcoef(e[0, 4:], e[1, 4:])[0, 1], abs=1e-12)


def test_no_valid_pairs():
    e = np.full((2, 5), np.nan)
    e[0, :2] = 1.0
    e[1, 3:] = 2.0
    with pytest.raises(InsufficientDataError):
        cd_test(e)


def test_one_unit():
    with pytest.raises(InsufficientDataError):
        cd_test(np.ones((1, 5)))


def test_size_under_independence():
    rng = np.random.default_rng(20240101)
    rejections = np.mean([cd_test(rng.standard_normal((20, 40))).rejects(0.05) for _ in range(500)])
    assert 0.02 <= rejections <= 0.09


def test_strong_factor_errors_reject():
    cfg = FactorDGPConfig(n_units=30, n_periods=30, alpha=1.0, seed=17)
    assert cd_rejection_rate_true_errors(cfg, 200) >= 0.99


residual_panels = st.integers(0, 2**32 - 1).map(lambda s: np.random.default_rng(s).normal(size=(5, 9)))


@given(
    residual_panels,
    st.lists(st.floats(0.01, 100), min_size=5, max_size=5),
    st.lists(st.floats(-100, 100), min_size=5, max_size=5),
)
def test_affine_invariance(e, scale, shift):
    moved = e * np.array(scale)[:, None] + np.array(shift)[:, None]
    assert cd_test(moved).statistic == pytest.approx(cd_test(e).statistic, abs=1e-10)


@given(residual_panels, st.permutations(range(5)))
def test_permutation_invariance(e, order):
    a = cd_test(e).statistic
    b = cd_test(e[list(order)]).statistic
    assert b == pytest.approx(a, abs=1e-12)


@given(residual_panels)
def test_p_value_in_unit_interval(e):
    res = cd_test(e)
    assert 0.0 <= res.p_value <= 1.0 and np.isfinite(res.statistic)
