"""Piecewise-linear threshold strategies on a maturity-weighted day grid.

A strategy is stored as a handful of node values; the daily threshold is the
linear interpolant between nodes.  Nodes crowd toward the end of the grid:
each interior node sits halfway between the previous node and the last one.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    from cbsimplex.payoff import BondTerms


class Role(str, enum.Enum):
    INVESTOR = "investor"
    ISSUER = "issuer"


@dataclass(frozen=True, eq=False)
class ThresholdGrid:
    node_days: np.ndarray
    role: Role
    horizon_day: int
    maturity_day: int

    def __post_init__(self) -> None:
        days = np.array(self.node_days, dtype=np.int64)
        object.__setattr__(self, "node_days", days)
        object.__setattr__(self, "role", Role(self.role))
        if days.ndim != 1 or len(days) < 2:
            raise ValueError("grid needs at least two nodes")
        if days[0] != 0 or days[-1] != self.horizon_day:
            raise ValueError("grid must start at day 0 and end at its horizon")
        if np.any(np.diff(days) <= 0):
            raise ValueError("node days must be strictly increasing")
        if self.horizon_day > self.maturity_day:
            raise ValueError("grid horizon beyond maturity")
        days.setflags(write=False)

    @property
    def size(self) -> int:
        return len(self.node_days)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ThresholdGrid):
            return NotImplemented
        return (
            self.role == other.role
            and self.horizon_day == other.horizon_day
            and self.maturity_day == other.maturity_day
            and np.array_equal(self.node_days, other.node_days)
        )


@dataclass(frozen=True, eq=False)
class Strategy:
    grid: ThresholdGrid
    node_values: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "node_values", np.array(self.node_values, dtype=float))
        if self.node_values.shape != self.grid.node_days.shape:
            raise ValueError("one value per grid node required")
        if not np.all(np.isfinite(self.node_values)):
            raise ValueError("node values must be finite")
        self.node_values.setflags(write=False)

    @property
    def role(self) -> Role:
        return self.grid.role

    def trajectory(self) -> np.ndarray:
        """Daily thresholds for days 0..maturity, constant past the last node."""
        days = np.arange(self.grid.maturity_day + 1, dtype=float)
        return np.interp(days, self.grid.node_days.astype(float), self.node_values)

    def with_values(self, values: np.ndarray) -> Strategy:
        return Strategy(self.grid, np.array(values, dtype=float))

    def is_feasible(self, terms: BondTerms) -> bool:
        v = self.node_values
        if self.role is Role.INVESTOR:
            return bool(np.all(v >= terms.face_value) and v[-1] == terms.face_value)
        return bool(np.all((v >= terms.face_value) & (v <= terms.call_price)))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Strategy):
            return NotImplemented
        return self.grid == other.grid and np.array_equal(self.node_values, other.node_values)


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def build_grid(m: int, horizon_day: int, role: Role | str, maturity_day: int | None = None) -> ThresholdGrid:
    """Node days 0 = x_1 < ... < x_m = horizon_day with x_{i+1} = (x_m + x_i) / 2.

    Interior points are computed in exact arithmetic, rounded half-up to whole
    days and bumped forward by a day whenever rounding would repeat a day.
    """
    role = Role(role)
    if m < 3:
        raise ValueError(f"need at least 3 nodes, got {m}")
    if horizon_day < m:
        raise ValueError(f"horizon of {horizon_day} days too short for {m} nodes")
    if maturity_day is None:
        maturity_day = horizon_day

    exact = [0.0]
    for _ in range(m - 2):
        exact.append((horizon_day - exact[-1]) / 2 + exact[-1])
    days = [0]
    for x in exact[1:]:
        days.append(max(_round_half_up(x), days[-1] + 1))
    days.append(horizon_day)
    # bumps may have run into the horizon; pull back so the grid stays strict
    for i in range(m - 2, 0, -1):
        days[i] = min(days[i], days[i + 1] - 1)
    return ThresholdGrid(np.array(days, dtype=np.int64), role, horizon_day, maturity_day)


def grid_for(role: Role | str, m: int, maturity_day: int, notice_days: int) -> ThresholdGrid:
    """Grid for a player: the issuer's nodes stop before the final notice window."""
    role = Role(role)
    horizon = maturity_day if role is Role.INVESTOR else maturity_day - notice_days - 1
    return build_grid(m, horizon, role, maturity_day)


def daily_value(strategy: Strategy, day: int) -> float:
    grid = strategy.grid
    if not 0 <= day <= grid.maturity_day:
        raise ValueError(f"day {day} outside [0, {grid.maturity_day}]")
    return float(np.interp(float(day), grid.node_days.astype(float), strategy.node_values))


def project_feasible(values: np.ndarray, role: Role | str, terms: BondTerms) -> np.ndarray:
    """Nearest point of the feasible box for a full node-value vector.

    Investor thresholds are floored at face value and the terminal node is
    pinned to it.  Issuer thresholds are clipped into [face value, call price].
    """
    role = Role(role)
    out = np.asarray(values, dtype=float).copy()
    if role is Role.INVESTOR:
        np.maximum(out, terms.face_value, out=out)
        out[-1] = terms.face_value
    else:
        np.clip(out, terms.face_value, terms.call_price, out=out)
    return out


def initial_guess(grid: ThresholdGrid, terms: BondTerms, epsilon: float) -> Strategy:
    """Flat starting strategy: call price + epsilon for the investor, face value + epsilon for the issuer."""
    if epsilon < 0:
        raise ValueError("epsilon must be non-negative")
    level = terms.call_price + epsilon if grid.role is Role.INVESTOR else terms.face_value + epsilon
    values = np.full(grid.size, float(level))
    return Strategy(grid, project_feasible(values, grid.role, terms))


def write_strategy_csv(strategy: Strategy, out: str | Path) -> Path:
    """Write ``day,value`` for every day plus a ``*_nodes.csv`` sidecar; returns the sidecar path."""
    out = Path(out)
    with out.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["day", "value"])
        for day, value in enumerate(strategy.trajectory()):
            writer.writerow([day, format(float(value), ".10g")])
    sidecar = out.with_name(out.stem + "_nodes.csv")
    with sidecar.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["node_day", "node_value"])
        for day, value in zip(strategy.grid.node_days, strategy.node_values):
            writer.writerow([int(day), format(float(value), ".10g")])
    return sidecar
