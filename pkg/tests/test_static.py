import numpy as np
import pandas as pd
import pytest
from hypothesis import given
from hypothesis import strategies as st
from sklearn.base import clone

from ccepanel import InsufficientDataError, PanelError, StaticPanelRegression, StaticSpec, cs_demean, fit_static, ols
from ccepanel.estimators import STATIC_ESTIMATORS
from ccepanel.estimators._base import Design, fit_units, mean_group
from ccepanel.mcsim import FactorDGPConfig

from conftest import make_panel

REGS = ("x1", "x2")


def fit(ds, est, **kw):
    return fit_static(ds, StaticSpec("y", REGS, est, **kw))


class TestMeanGroup:
    def test_two_units(self):
        mean, se = mean_group([[0.2], [0.4]])
        assert mean[0] == pytest.approx(0.3)
        assert se[0] == pytest.approx(0.1)

    def test_three_units(self):
        mean, se = mean_group([[1.0], [2.0], [3.0]])
        assert mean[0] == pytest.approx(2.0)
        assert se[0] == pytest.approx(np.sqrt(2 / 6))

    def test_identical(self):
        _, se = mean_group(np.full((5, 2), 0.7))
        np.testing.assert_allclose(se, 0, atol=1e-15)

    def test_frame_in_series_out(self):
        mean, se = mean_group(pd.DataFrame({"a": [1.0, 3.0], "b": [0.0, 0.0]}))
        assert list(mean.index) == ["a", "b"] and mean["a"] == 2.0

    def test_single_unit(self):
        with pytest.raises(InsufficientDataError):
            mean_group([[1.0]])


def test_mg_is_mean_of_unit_fits(static_panel):
    res = fit(static_panel, "mg")
    betas = []
    for i in range(static_panel.n_units):
        X = np.column_stack([np.ones(12), static_panel["x1"][i], static_panel["x2"][i]])
        betas.append(ols(static_panel["y"][i], X).coefficients[1:])
    np.testing.assert_allclose(res.coefficients.to_numpy(), np.mean(betas, axis=0), atol=1e-12)
    assert res.n == 6 and res.nxt == 72


def test_fe2_equals_lsdv(static_panel):
    ds = static_panel
    n, t = ds.shape
    unit = np.repeat(np.eye(n), t, axis=0)[:, 1:]
    year = np.tile(np.eye(t), (n, 1))[:, 1:]
    X = np.column_stack([np.ones(n * t), ds["x1"].ravel(), ds["x2"].ravel(), year, unit])
    beta = np.linalg.lstsq(X, ds["y"].ravel(), rcond=None)[0]
    res = fit(ds, "fe2")
    np.testing.assert_allclose(res.coefficients.to_numpy(), beta[1:3], atol=1e-10)


def test_fe2_residuals_sum_to_zero(static_panel):
    e = fit(static_panel, "fe2").residuals
    scale = np.abs(static_panel["y"]).max()
    np.testing.assert_allclose(e.sum(axis=0), 0, atol=1e-8 * scale)
    np.testing.assert_allclose(e.sum(axis=1), 0, atol=1e-8 * scale)


def test_cdmg_is_mg_on_demeaned_data(static_panel):
    ds = static_panel
    demeaned = ds.with_columns({v: cs_demean(ds, v) for v in ds.variables})
    a = fit(ds, "cdmg").coefficients
    b = fit(demeaned, "mg").coefficients
    np.testing.assert_allclose(a.to_numpy(), b.to_numpy(), atol=1e-12)


def test_ccemg_without_averages_is_mg(static_panel):
    design = StaticSpec("y", REGS, "ccemg").design(static_panel)
    plain = Design(design.y, {k: v for k, v in design.columns.items() if "csa(" not in k}, True)
    uf = fit_units(static_panel, plain)
    mean, _ = mean_group(uf.coefficient_frame()[list(REGS)])
    np.testing.assert_allclose(mean.to_numpy(), fit(static_panel, "mg").coefficients.to_numpy(), atol=1e-12)


def test_fd_uses_differences(static_panel):
    res = fit(static_panel, "fd")
    assert res.nxt == 6 * 11


@pytest.mark.parametrize("est", STATIC_ESTIMATORS)
def test_scaling_a_regressor(static_panel, est):
    c = 7.5
    scaled = static_panel.with_columns(x1=static_panel["x1"] * c)
    a, b = fit(static_panel, est), fit(scaled, est)
    assert b.coefficients["x1"] == pytest.approx(a.coefficients["x1"] / c, rel=1e-10)
    assert b.coefficients["x2"] == pytest.approx(a.coefficients["x2"], rel=1e-9, abs=1e-12)
    assert b.rmse == pytest.approx(a.rmse, rel=1e-10)
    assert b.tvalues["x1"] == pytest.approx(a.tvalues["x1"], rel=1e-9)
    np.testing.assert_allclose(b.residuals, a.residuals, atol=1e-10, equal_nan=True)


@pytest.mark.parametrize("est", ["pols", "fe2", "fd"])
def test_trend_rejected_with_year_dummies(est):
    with pytest.raises(PanelError, match="trend"):
        StaticSpec("y", REGS, est, trend=True)


def test_unknown_estimator():
    with pytest.raises(PanelError, match="unknown static estimator"):
        StaticSpec("y", REGS, "gmm")


def test_dependent_not_a_regressor():
    with pytest.raises(PanelError):
        StaticSpec("y", ("y",), "mg")


def test_short_unit_dropped_with_warning(static_panel):
    y = static_panel["y"].copy()
    y[0, 3:] = np.nan
    ds = static_panel.with_columns(y=y)
    with pytest.warns(UserWarning, match="unit A dropped"):
        res = fit(ds, "ccemg")
    assert res.n == 5 and "A" in res.dropped_units


def test_ccemg_zero_loadings_matches_truth():
    ds, _ = FactorDGPConfig(n_units=30, n_periods=40, gamma_regressor_laws=None, correlate_loadings=False, seed=1).generate()
    res = fit_static(ds, StaticSpec("tfp", ("rd", "rf"), "ccemg"))
    assert res.coefficients["rd"] == pytest.approx(0.5, abs=4 * res.se["rd"])
    assert res.coefficients["rf"] == pytest.approx(0.3, abs=4 * res.se["rf"])


def test_ccemg_recovers_slopes_under_factors():
    ds, _ = FactorDGPConfig(n_units=30, n_periods=40, seed=2).generate()
    res = fit_static(ds, StaticSpec("tfp", ("rd", "rf"), "ccemg"))
    assert abs(res.coefficients["rd"] - 0.5) < 0.05
    assert abs(res.coefficients["rf"] - 0.3) < 0.05


def test_ccemg_trend_column_present(static_panel):
    res = fit(static_panel, "ccemg", trend=True)
    assert "trend" in res.unit_coefficients.columns


def test_ccep_has_unit_specific_average_loadings(static_panel):
    res = fit(static_panel, "ccep")
    names = list(res.full_coefficients.index)
    assert "unit[B]:csa(x1)" in names and "unit[A]:csa(y)" in names


def test_sklearn_wrapper(static_panel):
    model = StaticPanelRegression("y", REGS, "ccemg")
    params = model.get_params()
    assert params["estimator"] == "ccemg"
    twin = clone(model).set_params(estimator="mg")
    twin.fit(static_panel)
    np.testing.assert_allclose(twin.coef_, fit(static_panel, "mg").coefficients.to_numpy())
    pred = twin.predict(static_panel)
    np.testing.assert_allclose(static_panel["y"] - pred, twin.residuals_, atol=1e-10)


@given(st.integers(0, 2**32 - 1), st.floats(-50, 50))
def test_fe2_invariant_to_unit_shifts(seed, shift):
    rng = np.random.default_rng(seed)
    x1, x2 = rng.normal(size=(2, 4, 6))
    y = 0.5 * x1 + rng.normal(size=(4, 6))
    ds = make_panel(y=y, x1=x1, x2=x2)
    shifted = ds.with_columns(y=y + shift * np.arange(4)[:, None])
    np.testing.assert_allclose(
        fit(ds, "fe2").coefficients.to_numpy(), fit(shifted, "fe2").coefficients.to_numpy(), atol=1e-8
    )
