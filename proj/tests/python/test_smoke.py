import datetime as dt
import math
import os

import pytest

import btcecon

FIXTURES = os.environ.get(
    "BTCECON_FIXTURES", os.path.join(os.path.dirname(__file__), "..", "fixtures")
)


def standard_rig():
    return btcecon.MinerUnit(3.0, 0.15)


def test_version():
    assert btcecon.__version__ == "0.1.0"


def test_marginal_profit_anchor():
    state = btcecon.MarketState(19000.0, 3e5, 900.0, 2.23e8)
    assert btcecon.marginal_profit(state, standard_rig()) == pytest.approx(-2.99731, abs=1e-5)
    assert btcecon.daily_energy_cost(standard_rig()) == pytest.approx(10.8)


def test_competitive_equilibrium_roundtrip():
    h = btcecon.competitive_equilibrium_hashrate(1.8e7, standard_rig())
    assert h == pytest.approx(1.8e9 / 10.8, rel=1e-12)


def test_validation_error_is_value_error():
    with pytest.raises(ValueError):
        btcecon.MarketState(-1.0, 0.0, 0.0, 0.0)
    with pytest.raises(btcecon.ValidationError):
        btcecon.optimal_fee_rate(btcecon.DemandCurve(57.6, 0.9, 1000.0), btcecon.CapacityParams())


def test_symmetric_equilibrium_and_dynamics():
    h, profit = btcecon.symmetric_equilibrium(2, 1.8e7, standard_rig())
    assert h == pytest.approx(83333333.33, rel=1e-9)
    assert profit == pytest.approx(4.5e6)
    res = btcecon.best_response_dynamics(2, 1.8e7, standard_rig(), 0.0, 10**12)
    assert abs(res["hashrate"] - h) <= 100.0


def test_issuance():
    params = btcecon.IssuanceParams()
    e = btcecon.epoch_of(dt.date(2022, 10, 15), params)
    assert e.index == 3
    assert btcecon.reward_ratio(btcecon.epoch_at(0, params), btcecon.epoch_at(3, params)) == 0.125
    rows = btcecon.revenue_projection(dt.date(2022, 1, 1), 0.0, 19000.0, 3e5, params)
    assert len(rows) == 1


def test_projection_with_callable_path():
    params = btcecon.IssuanceParams()
    rows = btcecon.revenue_projection(
        dt.date(2022, 1, 1), 0.1, lambda d: 1000.0 + d.day, 0.0, params
    )
    assert len(rows) > 30


def test_fee_equilibrium():
    eq = btcecon.fee_only_equilibrium(
        btcecon.DemandCurve(57.6, 2.0, 1000.0), btcecon.CapacityParams(), standard_rig(), 5e7
    )
    assert eq["gamma_min"] == pytest.approx(0.01)
    assert eq["secure"]


def test_timeseries():
    series = btcecon.load_csv(os.path.join(FIXTURES, "market_valid.csv"))
    prof = btcecon.profitability_series(series, standard_rig())
    assert len(prof) == 90
    a = btcecon.load_csv(os.path.join(FIXTURES, "asset_a.csv"))
    windows = btcecon.windowed_correlation(a, a, 100)
    assert all(math.isclose(w["rho"], 1.0, abs_tol=1e-12) for w in windows)


def test_duplicate_date_rejected():
    with pytest.raises(ValueError):
        btcecon.load_csv(os.path.join(FIXTURES, "market_duplicate_date.csv"))


def test_run_cli():
    code, out, err = btcecon.run_cli(["--version"])
    assert code == 0
    assert "0.1.0" in out
