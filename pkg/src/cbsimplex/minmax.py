"""Alternating max-min solver for the investor/issuer exercise game.

Each outer iteration maximizes the payoff over the investor's conversion
nodes with the issuer fixed, then minimizes it over the issuer's call nodes
with the new investor strategy fixed.  The gap between the two optima is
the convergence measure.  All objective evaluations share one frozen set of
simulated paths, so the objective is a deterministic function of the nodes.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from cbsimplex.market_model import MarketParams, PathSet, generate_paths
from cbsimplex.payoff import BondTerms, mean_payoff
from cbsimplex.simplex import SimplexConfig, maximize, run
from cbsimplex.strategy import Role, Strategy, grid_for, initial_guess, project_feasible

log = logging.getLogger(__name__)

# starting value of both gaps before the first outer iteration
INITIAL_GAP = 10.0


@dataclass(frozen=True)
class GameConfig:
    market: MarketParams = field(default_factory=MarketParams)
    terms: BondTerms = field(default_factory=BondTerms)
    n_nodes: int = 10
    n_paths: int = 525
    seed: int = 1
    epsilon_guess: float = 5.0
    simplex: SimplexConfig = field(default_factory=SimplexConfig)
    eps_gap: float = 1e-4
    max_outer: int = 100

    def __post_init__(self) -> None:
        if not self.eps_gap > 0:
            raise ValueError("eps_gap must be positive")
        if self.n_nodes < 3:
            raise ValueError("need at least 3 nodes per strategy")
        if self.n_paths < 1:
            raise ValueError("need at least one path")
        if self.max_outer < 1:
            raise ValueError("max_outer must be at least 1")


@dataclass(frozen=True)
class TraceRow:
    payoff_after_max: float
    payoff_after_min: float
    gap: float
    conv_nodes: tuple[float, ...]
    call_nodes: tuple[float, ...]


@dataclass
class MinMaxTrace:
    rows: list[TraceRow] = field(default_factory=list)
    converged: bool = False

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def final_gap(self) -> float:
        return self.rows[-1].gap if self.rows else INITIAL_GAP

    @property
    def final_payoff(self) -> float:
        return self.rows[-1].payoff_after_min

    def interleaved(self) -> list[float]:
        """Objective values in the order they were produced: max, min, max, min, ..."""
        seq = []
        for row in self.rows:
            seq.extend((row.payoff_after_max, row.payoff_after_min))
        return seq

    def direction_changes(self) -> int:
        """Sign flips between successive non-zero moves of the interleaved sequence."""
        diffs = np.diff(self.interleaved())
        signs = np.sign(diffs[diffs != 0])
        return int(np.count_nonzero(signs[1:] != signs[:-1]))

    def write_csv(self, out: str | Path) -> None:
        with Path(out).open("w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["outer_iter", "payoff_after_max", "payoff_after_min", "gap"])
            for i, row in enumerate(self.rows, start=1):
                writer.writerow(
                    [
                        i,
                        format(row.payoff_after_max, ".10g"),
                        format(row.payoff_after_min, ".10g"),
                        format(row.gap, ".10g"),
                    ]
                )


def gap(payoff_max: float, payoff_min: float) -> float:
    return payoff_max - payoff_min


class _Game:
    """Objectives over free node vectors, bound to one frozen path set."""

    def __init__(self, paths: PathSet, terms: BondTerms, conv: Strategy, call: Strategy):
        self.prices = paths.prices
        self.terms = terms
        self.conv_grid = conv.grid
        self.call_grid = call.grid
        days = np.arange(paths.horizon_days + 1, dtype=float)
        self._days = days
        self._conv_nodes = conv.grid.node_days.astype(float)
        self._call_nodes = call.grid.node_days.astype(float)

    # the investor's terminal node is pinned to face value, so only the
    # first m - 1 conversion nodes are optimized
    def conv_full(self, free: np.ndarray) -> np.ndarray:
        return np.append(free, self.terms.face_value)

    def project_conv(self, free: np.ndarray) -> np.ndarray:
        return project_feasible(self.conv_full(free), Role.INVESTOR, self.terms)[:-1]

    def project_call(self, values: np.ndarray) -> np.ndarray:
        return project_feasible(values, Role.ISSUER, self.terms)

    def payoff(self, conv_values: np.ndarray, call_values: np.ndarray) -> float:
        conv_daily = np.interp(self._days, self._conv_nodes, conv_values)
        call_daily = np.interp(self._days, self._call_nodes, call_values)
        return mean_payoff(self.prices, conv_daily, call_daily, self.terms)


def solve(config: GameConfig, paths: PathSet | None = None) -> tuple[Strategy, Strategy, MinMaxTrace]:
    """Find threshold strategies for both players.

    Stops when either the latest or the previous gap is at most
    ``config.eps_gap`` or after ``config.max_outer`` outer iterations;
    ``trace.converged`` tells which.
    """
    if paths is None:
        paths = generate_paths(config.market, config.n_paths, config.seed)
    maturity = paths.horizon_days
    terms = config.terms
    conv = initial_guess(grid_for(Role.INVESTOR, config.n_nodes, maturity, terms.notice_days), terms, config.epsilon_guess)
    call = initial_guess(grid_for(Role.ISSUER, config.n_nodes, maturity, terms.notice_days), terms, config.epsilon_guess)
    game = _Game(paths, terms, conv, call)
    cfg = config.simplex

    conv_values = np.array(conv.node_values)
    call_values = np.array(call.node_values)
    trace = MinMaxTrace()
    current = gap_old = INITIAL_GAP
    while current > config.eps_gap and gap_old > config.eps_gap and len(trace) < config.max_outer:
        gap_old = current
        fixed_call = call_values
        up = maximize(
            lambda free: game.payoff(game.conv_full(free), fixed_call),
            conv_values[:-1],
            cfg,
            game.project_conv,
        )
        conv_values = game.conv_full(up.x_best)
        fixed_conv = conv_values
        down = run(lambda values: game.payoff(fixed_conv, values), call_values, cfg, game.project_call)
        call_values = down.x_best
        current = gap(up.f_best, down.f_best)
        if current < 0:
            log.warning("negative gap %.6g at outer iteration %d", current, len(trace) + 1)
        trace.rows.append(
            TraceRow(up.f_best, down.f_best, current, tuple(conv_values.tolist()), tuple(call_values.tolist()))
        )
        log.debug("outer %d: max %.6f min %.6f gap %.3g", len(trace), up.f_best, down.f_best, current)

    trace.converged = current <= config.eps_gap or gap_old <= config.eps_gap
    if not trace.converged:
        log.warning("no convergence after %d outer iterations (gap %.3g)", len(trace), current)
    return conv.with_values(conv_values), call.with_values(call_values), trace
