import math

import numpy as np
import pytest

from cbsimplex.market_model import MarketParams, generate_paths, row_normals, step_price, write_paths_csv

BASIC = MarketParams(s0=98.0, r=0.05, delta=0.1, sigma=0.2, maturity_years=2)

# 30-digit mpmath evaluations of 98 * exp((r - delta - sigma^2/2) dt + sigma sqrt(dt) z)
STEP_Z0 = 97.9725638412414757637145522013
STEP_Z1 = 99.2197005979840853764815824654


def test_params_derived_quantities():
    assert BASIC.dt == pytest.approx(0.004)
    assert BASIC.horizon_days == 500
    assert MarketParams(maturity_years=0.5).horizon_days == 125


@pytest.mark.parametrize(
    "kwargs",
    [
        {"s0": 0.0},
        {"s0": -1.0},
        {"sigma": -0.1},
        {"maturity_years": 0.0},
        {"maturity_years": 1.001},
        {"r": math.nan},
    ],
)
def test_params_reject_invalid(kwargs):
    with pytest.raises(ValueError):
        MarketParams(**kwargs)


@pytest.mark.parametrize("z, expected", [(0.0, STEP_Z0), (1.0, STEP_Z1)])
def test_step_price_matches_high_precision(z, expected):
    assert step_price(98.0, BASIC, z) == pytest.approx(expected, rel=1e-14)


def test_step_price_identity_without_drift_or_diffusion():
    flat = MarketParams(r=0.03, delta=0.03, sigma=0.0)
    assert step_price(98.0, flat, 1.7) == 98.0


@pytest.mark.parametrize("s, z", [(math.inf, 0.0), (98.0, math.nan), (98.0, math.inf)])
def test_step_price_rejects_non_finite(s, z):
    with pytest.raises(ValueError):
        step_price(s, BASIC, z)


def test_generate_paths_shape_and_start_column():
    paths = generate_paths(BASIC, 7, seed=3)
    assert paths.prices.shape == (7, 501)
    assert np.all(paths.prices[:, 0] == 98.0)
    assert np.all(paths.prices > 0)
    assert paths.seed == 3


def test_generate_paths_is_read_only():
    paths = generate_paths(BASIC, 2, seed=3)
    with pytest.raises(ValueError):
        paths.prices[0, 1] = 1.0


def test_sigma_zero_collapses_to_constant():
    flat = MarketParams(r=0.05, delta=0.05, sigma=0.0)
    paths = generate_paths(flat, 3, seed=42)
    assert np.all(paths.prices == flat.s0)


def test_sigma_zero_follows_deterministic_curve():
    params = MarketParams(r=0.05, delta=0.1, sigma=0.0)
    paths = generate_paths(params, 2, seed=0)
    curve = params.s0 * np.exp(params.log_drift() * np.arange(501))
    np.testing.assert_allclose(paths.prices, np.tile(curve, (2, 1)), rtol=1e-12)


def test_determinism():
    a = generate_paths(BASIC, 2, seed=7)
    b = generate_paths(BASIC, 2, seed=7)
    assert np.array_equal(a.prices, b.prices)
    assert not np.array_equal(a.prices, generate_paths(BASIC, 2, seed=8).prices)


def test_rows_iterate_step_price():
    paths = generate_paths(BASIC, 3, seed=11)
    z = row_normals(11, 2, 500)
    s = BASIC.s0
    expected = [s]
    for draw in z:
        s = step_price(s, BASIC, draw)
        expected.append(s)
    np.testing.assert_allclose(paths.prices[2], expected, rtol=1e-13)


def test_rows_do_not_depend_on_path_count():
    small = generate_paths(BASIC, 5, seed=9)
    large = generate_paths(BASIC, 5000, seed=9)
    assert np.array_equal(small.prices, large.prices[:5])
    assert not np.array_equal(large.prices[0], large.prices[1])


def test_zero_paths_rejected():
    with pytest.raises(ValueError):
        generate_paths(BASIC, 0, seed=1)


def test_terminal_mean_matches_closed_form():
    paths = generate_paths(BASIC, 20000, seed=5)
    s_t = paths.terminal()
    expected = 98.0 * math.exp((0.05 - 0.1) * 2)
    stderr = s_t.std(ddof=1) / math.sqrt(len(s_t))
    assert abs(s_t.mean() - expected) < 3 * stderr


def test_paths_csv(tmp_path):
    params = MarketParams(maturity_years=0.02)
    paths = generate_paths(params, 2, seed=1)
    out = tmp_path / "paths.csv"
    write_paths_csv(paths, out)
    lines = out.read_text().splitlines()
    assert lines[0] == "path_id,day_0,day_1,day_2,day_3,day_4,day_5"
    assert len(lines) == 3
    first = lines[1].split(",")
    assert first[0] == "0" and first[1] == "98"
    assert float(first[3]) == pytest.approx(paths.prices[0, 2], rel=1e-9)
