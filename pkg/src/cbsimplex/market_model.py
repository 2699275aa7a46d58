"""Seeded geometric Brownian motion paths for the underlying stock.

Every path row draws its normals from its own Philox stream, keyed by the
run seed with the row index placed in the counter.  A row therefore does not
depend on how many other rows are generated or in which order.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

TRADING_DAYS_PER_YEAR = 250

_CHUNK_ROWS = 4096


@dataclass(frozen=True)
class MarketParams:
    """Economic constants driving the stock price."""

    s0: float = 98.0
    r: float = 0.05
    delta: float = 0.1
    sigma: float = 0.2
    maturity_years: float = 2.0
    trading_days_per_year: int = TRADING_DAYS_PER_YEAR

    def __post_init__(self) -> None:
        for name in ("s0", "r", "delta", "sigma", "maturity_years"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.s0 <= 0:
            raise ValueError("s0 must be positive")
        if self.sigma < 0:
            raise ValueError("sigma must be non-negative")
        if self.trading_days_per_year <= 0:
            raise ValueError("trading_days_per_year must be positive")
        days = self.maturity_years * self.trading_days_per_year
        if days <= 0 or abs(days - round(days)) > 1e-9:
            raise ValueError(
                f"maturity_years * trading_days_per_year must be a positive integer, got {days}"
            )

    @property
    def dt(self) -> float:
        return 1.0 / self.trading_days_per_year

    @property
    def horizon_days(self) -> int:
        return int(round(self.maturity_years * self.trading_days_per_year))

    def log_drift(self) -> float:
        return (self.r - self.delta - 0.5 * self.sigma**2) * self.dt

    def log_vol(self) -> float:
        return self.sigma * math.sqrt(self.dt)


@dataclass(frozen=True, eq=False)
class PathSet:
    """Read-only matrix of daily prices, one row per simulated path."""

    prices: np.ndarray
    seed: int
    params: MarketParams = field(default_factory=MarketParams)

    def __post_init__(self) -> None:
        self.prices.setflags(write=False)

    @property
    def n_paths(self) -> int:
        return self.prices.shape[0]

    @property
    def horizon_days(self) -> int:
        return self.prices.shape[1] - 1

    def terminal(self) -> np.ndarray:
        return self.prices[:, -1]


def step_price(s_t: float, params: MarketParams, z: float) -> float:
    """Advance the price by one trading day given a standard normal draw."""
    if not (math.isfinite(s_t) and math.isfinite(z)):
        raise ValueError("step_price needs finite inputs")
    if s_t <= 0:
        raise ValueError("price must be positive")
    return float(s_t * np.exp(params.log_drift() + params.log_vol() * z))


def row_normals(seed: int, row: int, n_steps: int) -> np.ndarray:
    """Standard normal draws for one path row.

    The stream is Philox keyed by ``seed``; the row index sits in the second
    counter word so rows never share counter blocks.
    """
    bitgen = np.random.Philox(key=seed, counter=[0, row, 0, 0])
    return np.random.Generator(bitgen).standard_normal(n_steps)


def generate_paths(params: MarketParams, m: int, seed: int) -> PathSet:
    """Simulate ``m`` price paths over the bond's life, frozen in a PathSet."""
    if m < 1:
        raise ValueError(f"path count must be at least 1, got {m}")
    if seed < 0:
        raise ValueError("seed must be an unsigned integer")
    n_steps = params.horizon_days
    drift, vol = params.log_drift(), params.log_vol()
    prices = np.empty((m, n_steps + 1))
    prices[:, 0] = params.s0
    for start in range(0, m, _CHUNK_ROWS):
        stop = min(start + _CHUNK_ROWS, m)
        z = np.empty((stop - start, n_steps))
        for i in range(start, stop):
            z[i - start] = row_normals(seed, i, n_steps)
        growth = np.exp(drift + vol * z)
        # iterated multiplication, S_{t+1} = S_t * growth_t, matching step_price
        block = prices[start:stop]
        block[:, 1:] = growth
        np.cumprod(block, axis=1, out=block)
    if not np.all(prices > 0):
        raise ArithmeticError("generated a non-positive price")
    return PathSet(prices=prices, seed=seed, params=params)


def write_paths_csv(paths: PathSet, out: str | Path) -> None:
    out = Path(out)
    with out.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["path_id"] + [f"day_{t}" for t in range(paths.horizon_days + 1)])
        for i, row in enumerate(paths.prices):
            writer.writerow([i] + [format(float(p), ".10g") for p in row])
