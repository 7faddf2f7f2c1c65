import warnings

import numpy as np
import pytest
from sklearn.base import clone

from ccepanel import DynamicPanelRegression, DynamicSpec, PanelError, StaticSpec, fit_dynamic, fit_static, long_run_from_ardl, ols
from ccepanel.estimators._base import UnitDroppedWarning
from ccepanel.estimators.dynamic import ar_levels_from_ecm, min_root_modulus, rule_of_thumb_lags
from ccepanel.mcsim import ARDLDGPConfig, FactorDGPConfig, replication_seeds
from ccepanel.panel import lag

from conftest import make_panel


class TestLongRun:
    def test_first_order(self):
        lam, theta = long_run_from_ardl([0.5], [0.25, 0.05])
        assert lam == pytest.approx(0.5) and theta[0] == pytest.approx(0.6)

    def test_static_recovered(self):
        _, theta = long_run_from_ardl([0.0], [0.2, 0.0])
        assert theta[0] == pytest.approx(0.2)

    def test_second_order(self):
        lam, theta = long_run_from_ardl([0.3, 0.2], [0.1, 0.05, 0.05])
        assert lam == pytest.approx(0.5) and theta[0] == pytest.approx(0.4)

    def test_two_regressors(self):
        _, theta = long_run_from_ardl([0.5], [[0.1, 0.2], [0.1, 0.0]])
        np.testing.assert_allclose(theta, [0.4, 0.4])

    def test_unit_root(self):
        with pytest.raises(ValueError, match="undefined"):
            long_run_from_ardl([0.6, 0.4], [0.1, 0.1, 0.1])


def test_ar_levels_round_trip():
    phi = np.array([0.4, 0.2, -0.1])
    # ECM: ec = -(1 - sum phi), c_l = -sum_{j>l} phi_j
    ec = -(1 - phi.sum())
    c = [-(phi[1:].sum()), -phi[2]]
    np.testing.assert_allclose(ar_levels_from_ecm(ec, c), phi, atol=1e-14)


def test_root_modulus():
    assert min_root_modulus([0.5]) == pytest.approx(2.0)
    assert min_root_modulus([0.0]) == np.inf


def test_rule_of_thumb():
    assert rule_of_thumb_lags(27) == 3 and rule_of_thumb_lags(26) == 2 and rule_of_thumb_lags(200) == 5


@pytest.fixture(scope="module")
def ardl_panel():
    ds, _ = ARDLDGPConfig(n_units=8, n_periods=60, seed=11).generate()
    return ds


@pytest.mark.parametrize("p", [1, 2, 3])
def test_ecm_equals_levels_ardl(ardl_panel, p):
    ds = ardl_panel
    res = fit_dynamic(ds, DynamicSpec("y", ("x",), p, "ardl_mg"))
    for unit in res.units:
        i = ds.unit_index(unit)
        cols = [np.ones(ds.n_periods)]
        cols += [lag(ds, "y", l)[i] for l in range(1, p + 1)]
        cols += [ds["x"][i]] + [lag(ds, "x", l)[i] for l in range(1, p + 1)]
        X = np.column_stack(cols)
        ok = np.isfinite(X).all(axis=1)
        b = ols(ds["y"][i, ok], X[ok]).coefficients
        lam, theta = long_run_from_ardl(b[1 : p + 1], b[p + 1 :])
        assert -res.unit_ec[unit] == pytest.approx(lam, abs=1e-8)
        assert res.unit_long_run.loc[unit, "x"] == pytest.approx(theta[0], abs=1e-8)


def test_mg_long_run_is_mean_of_units(ardl_panel):
    res = fit_dynamic(ardl_panel, DynamicSpec("y", ("x",), 2, "cs_ardl", cs_lags=1))
    assert res.long_run["x"] == pytest.approx(res.unit_long_run["x"].mean(), abs=1e-14)
    assert res.ec_coefficient == pytest.approx(res.unit_ec.mean(), abs=1e-14)


def test_cs_dlmg_p1_has_no_lagged_differences(ardl_panel):
    names = DynamicSpec("y", ("x",), 1, "cs_dlmg", cs_lags=2).design(ardl_panel).names
    assert not [n for n in names if n.startswith("L") and ".D." in n]
    assert "x" in names and "csa(y)" in names and "L2.csa(x)" in names
    assert "L1.csa(y)" not in names


def test_cs_dlmg_p3_lag_terms(ardl_panel):
    names = DynamicSpec("y", ("x",), 3, "cs_dlmg", cs_lags=0).design(ardl_panel).names
    assert [n for n in names if ".D." in n] == ["L1.D.x", "L2.D.x"]


def test_cs_ardl_default_average_lags(ardl_panel):
    res = fit_dynamic(ardl_panel, DynamicSpec("y", ("x",), 1, "cs_ardl"))
    assert res.cs_lags == 3
    assert "L3.csa(x)" in res.unit_coefficients.columns


def test_spec_validation():
    with pytest.raises(PanelError):
        DynamicSpec("y", ("x",), 0, "ardl_mg")
    with pytest.raises(PanelError):
        DynamicSpec("y", ("x",), 1, "ardl_mg", cs_lags=2)
    with pytest.raises(PanelError):
        DynamicSpec("y", ("x",), 1, "ardl_fe2", trend=True)
    with pytest.raises(PanelError):
        DynamicSpec("y", ("x",), 1, "pmg")


def test_pooled_delta_method(ardl_panel):
    res = fit_dynamic(ardl_panel, DynamicSpec("y", ("x",), 1, "ardl_fe2"))
    full = res.full_coefficients
    a, b = full["L1.y"], full["L1.x"]
    assert res.long_run["x"] == pytest.approx(-b / a, rel=1e-12)
    assert res.ec_coefficient == pytest.approx(a)
    assert res.long_run_se["x"] > 0


def test_unit_with_zero_lambda_excluded():
    rng = np.random.default_rng(5)
    n, t = 5, 80
    x = rng.normal(size=(n, t))
    y = np.zeros((n, t))
    e = rng.normal(size=(n, t))
    for s in range(1, t):
        y[:, s] = 0.5 * y[:, s - 1] + 0.3 * x[:, s] + e[:, s]
    # unit A drifts deterministically: dy is constant, so lambda is essentially zero
    y[0] = 5.0 + np.arange(t) + rng.normal(size=t) * 1e-9
    ds = make_panel(y=y, x=x)
    with pytest.warns(UnitDroppedWarning, match="excluded from long-run"):
        res = fit_dynamic(ds, DynamicSpec("y", ("x",), 1, "ardl_mg"))
    assert res.excluded_from_long_run == ("A",)
    assert res.long_run["x"] == pytest.approx(res.unit_long_run["x"].drop("A").mean())


def test_ec_negative_on_cointegrated_data():
    """Error-correction coefficient below zero in at least 99% of 200 seeded draws."""
    hits = 0
    for seed in replication_seeds(99, 200):
        ds, _ = ARDLDGPConfig(n_units=6, n_periods=40, burn_in=50, seed=seed).generate()
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", UnitDroppedWarning)
            res = fit_dynamic(ds, DynamicSpec("y", ("x",), 1, "ardl_mg"))
        hits += res.ec_coefficient < 0
    assert hits / 200 >= 0.99


def test_cs_dlmg_matches_ccemg_on_static_dgp():
    """Paired seeds: without dynamics the distributed-lag estimator tracks CCEMG."""
    diffs = []
    for seed in replication_seeds(3, 20):
        cfg = FactorDGPConfig(n_units=20, n_periods=40, gamma_regressor_laws=None, correlate_loadings=False, seed=seed)
        ds, _ = cfg.generate()
        a = fit_dynamic(ds, DynamicSpec("tfp", ("rd", "rf"), 1, "cs_dlmg", cs_lags=0)).long_run
        b = fit_static(ds, StaticSpec("tfp", ("rd", "rf"), "ccemg")).coefficients
        diffs.append((a - b).to_numpy())
    diffs = np.array(diffs)
    mean, se = diffs.mean(axis=0), diffs.std(axis=0, ddof=1) / np.sqrt(len(diffs))
    assert np.all(np.abs(mean) < 3 * se + 0.01)


def test_ardl_mg_recovers_long_run():
    ds, _ = ARDLDGPConfig(n_units=30, n_periods=200, b0=0.25, b1=0.05, seed=4).generate()
    res = fit_dynamic(ds, DynamicSpec("y", ("x",), 1, "ardl_mg"))
    assert res.long_run["x"] == pytest.approx(0.6, abs=4 * res.long_run_se["x"])
    assert res.ec_coefficient == pytest.approx(-0.5, abs=0.05)


def test_sklearn_wrapper(ardl_panel):
    model = DynamicPanelRegression("y", ("x",), p=1, estimator="ardl_mg")
    twin = clone(model).set_params(p=2)
    twin.fit(ardl_panel)
    direct = fit_dynamic(ardl_panel, DynamicSpec("y", ("x",), 2, "ardl_mg"))
    assert twin.get_params()["p"] == 2
    assert twin.result_.long_run["x"] == pytest.approx(direct.long_run["x"])
