"""Exercise-game payoff along a price path and its Monte Carlo average.

Each trading day, in this order:

1. the investor converts if the price is above the conversion threshold,
   receiving the stock price;
2. if a call notice is running, the call executes (paying the call price)
   once the notice counter has reached ``notice_days``, otherwise the
   counter advances;
3. with no notice running, the issuer announces a call when the price is
   above the call threshold and more than ``notice_days`` days remain.

A path that reaches maturity without an exit pays the face value.  The
notice flag is never cleared once set.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass
from pathlib import Path

import numba
import numpy as np

from cbsimplex.market_model import PathSet
from cbsimplex.strategy import Role, Strategy

CONVERSION, CALL, REDEMPTION = 0, 1, 2


class ExitKind(str, enum.Enum):
    CONVERSION = "conversion"
    CALL = "call"
    REDEMPTION = "redemption"


_KIND_BY_CODE = {CONVERSION: ExitKind.CONVERSION, CALL: ExitKind.CALL, REDEMPTION: ExitKind.REDEMPTION}


@dataclass(frozen=True)
class BondTerms:
    """Contract constants of a zero-coupon convertible bond.

    ``redemption_ratio`` and ``put_price`` are carried for completeness; the
    game pays plain face value at maturity and never exercises the put.
    """

    face_value: float = 100.0
    call_price: float = 110.0
    notice_days: int = 10
    eta: float = 1.1
    redemption_ratio: float = 1.0
    put_price: float = 0.0

    def __post_init__(self) -> None:
        if not self.call_price > self.face_value:
            raise ValueError("call price must exceed face value")
        if not self.put_price < self.face_value:
            raise ValueError("put price must be below face value")
        if not self.eta > 1:
            raise ValueError("eta must exceed 1")
        if self.notice_days < 0:
            raise ValueError("notice_days must be non-negative")

    def shares(self, s0: float) -> float:
        """Conversion ratio n = N / (S0 * eta); n * S0 < N follows from eta > 1."""
        return self.face_value / (s0 * self.eta)


@dataclass(frozen=True)
class PayoffOutcome:
    amount: float
    exit_day: int
    exit_kind: ExitKind


def path_payoff(
    path: np.ndarray,
    conv: Strategy,
    call: Strategy,
    terms: BondTerms,
    horizon: int,
) -> PayoffOutcome:
    """Play the exercise game along one price path."""
    path = np.asarray(path, dtype=float)
    if path.shape != (horizon + 1,):
        raise ValueError(f"path has {path.shape} prices, expected {horizon + 1}")
    if conv.role is not Role.INVESTOR or call.role is not Role.ISSUER:
        raise ValueError("conv must be an investor strategy and call an issuer strategy")
    if conv.grid.maturity_day != horizon or call.grid.maturity_day != horizon:
        raise ValueError("strategy grids do not match the path horizon")
    conv_daily = conv.trajectory()
    call_daily = call.trajectory()

    notice_running = False
    counter = 0
    for t in range(horizon + 1):
        s_t = path[t]
        if s_t > conv_daily[t]:
            return PayoffOutcome(float(s_t), t, ExitKind.CONVERSION)
        if notice_running:
            if counter == terms.notice_days:
                return PayoffOutcome(float(terms.call_price), t, ExitKind.CALL)
            counter += 1
        elif s_t > call_daily[t] and horizon - t > terms.notice_days:
            notice_running = True
    return PayoffOutcome(float(terms.face_value), horizon, ExitKind.REDEMPTION)


@numba.njit(cache=True)
def _play_paths(prices, conv_daily, call_daily, face_value, call_price, notice_days, amounts, exit_days, kinds):
    n_paths, n_days = prices.shape
    horizon = n_days - 1
    for i in range(n_paths):
        amount = face_value
        day = horizon
        kind = REDEMPTION
        notice_running = False
        counter = 0
        for t in range(n_days):
            s_t = prices[i, t]
            if s_t > conv_daily[t]:
                amount = s_t
                day = t
                kind = CONVERSION
                break
            if notice_running:
                if counter == notice_days:
                    amount = call_price
                    day = t
                    kind = CALL
                    break
                counter += 1
            elif s_t > call_daily[t] and horizon - t > notice_days:
                notice_running = True
        amounts[i] = amount
        exit_days[i] = day
        kinds[i] = kind


@numba.njit(cache=True)
def _ordered_mean(values):
    total = 0.0
    for i in range(values.shape[0]):
        total += values[i]
    return total / values.shape[0]


def play_paths(prices: np.ndarray, conv_daily: np.ndarray, call_daily: np.ndarray, terms: BondTerms):
    """Vectorised game over daily threshold arrays.

    Returns ``(amounts, exit_days, exit_kinds)`` with integer kind codes
    ``CONVERSION``, ``CALL`` and ``REDEMPTION``.
    """
    prices = np.ascontiguousarray(prices, dtype=np.float64)
    n_paths, n_days = prices.shape
    if conv_daily.shape != (n_days,) or call_daily.shape != (n_days,):
        raise ValueError("daily thresholds must cover every simulated day")
    amounts = np.empty(n_paths)
    exit_days = np.empty(n_paths, dtype=np.int64)
    kinds = np.empty(n_paths, dtype=np.int64)
    _play_paths(
        prices,
        np.ascontiguousarray(conv_daily, dtype=np.float64),
        np.ascontiguousarray(call_daily, dtype=np.float64),
        float(terms.face_value),
        float(terms.call_price),
        int(terms.notice_days),
        amounts,
        exit_days,
        kinds,
    )
    return amounts, exit_days, kinds


def mean_payoff(prices: np.ndarray, conv_daily: np.ndarray, call_daily: np.ndarray, terms: BondTerms) -> float:
    """Average payoff for daily threshold arrays, summed in row order."""
    if prices.shape[0] == 0:
        raise ValueError("empty path set")
    amounts, _, _ = play_paths(prices, conv_daily, call_daily, terms)
    value = float(_ordered_mean(amounts))
    if not math.isfinite(value):
        raise ArithmeticError("payoff is not finite")
    return value


def mc_payoff(paths: PathSet, conv: Strategy, call: Strategy, terms: BondTerms) -> float:
    """Monte Carlo payoff: the plain average of per-path payoffs."""
    if paths.n_paths == 0:
        raise ValueError("empty path set")
    if conv.role is not Role.INVESTOR or call.role is not Role.ISSUER:
        raise ValueError("conv must be an investor strategy and call an issuer strategy")
    return mean_payoff(paths.prices, conv.trajectory(), call.trajectory(), terms)


def outcomes(paths: PathSet, conv: Strategy, call: Strategy, terms: BondTerms) -> list[PayoffOutcome]:
    amounts, days, kinds = play_paths(paths.prices, conv.trajectory(), call.trajectory(), terms)
    return [
        PayoffOutcome(float(a), int(d), _KIND_BY_CODE[int(k)]) for a, d, k in zip(amounts, days, kinds)
    ]


def write_outcomes_csv(results: list[PayoffOutcome], out: str | Path) -> None:
    with Path(out).open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["path_id", "exit_day", "exit_kind", "amount"])
        for i, res in enumerate(results):
            writer.writerow([i, res.exit_day, res.exit_kind.value, format(res.amount, ".10g")])
