"""Optimal exercise thresholds for convertible bonds.

Investor conversion and issuer call thresholds are piecewise-linear
strategies, scored by a Monte Carlo payoff over simulated stock paths and
optimized by alternating downhill simplex runs.
"""

from cbsimplex.market_model import MarketParams, PathSet, generate_paths, step_price
from cbsimplex.minmax import GameConfig, MinMaxTrace, gap, solve
from cbsimplex.payoff import BondTerms, ExitKind, PayoffOutcome, mc_payoff, path_payoff
from cbsimplex.simplex import SimplexConfig, maximize, run
from cbsimplex.strategy import Role, Strategy, ThresholdGrid, build_grid, initial_guess, project_feasible

__all__ = [
    "BondTerms",
    "ExitKind",
    "GameConfig",
    "MarketParams",
    "MinMaxTrace",
    "PathSet",
    "PayoffOutcome",
    "Role",
    "SimplexConfig",
    "Strategy",
    "ThresholdGrid",
    "build_grid",
    "gap",
    "generate_paths",
    "initial_guess",
    "mc_payoff",
    "maximize",
    "path_payoff",
    "project_feasible",
    "run",
    "solve",
    "step_price",
]
