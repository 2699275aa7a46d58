"""Downhill simplex minimizer with an optional feasibility projector.

The centroid is taken over all vertices, worst one included, unless
``exclude_worst_in_centroid`` asks for the textbook Nelder-Mead variant.
Contraction is only attempted when the reflected point is worse than the
second-worst vertex; a contracted point that is still worse than the worst
vertex triggers a shrink toward the best vertex.

Ties between equal objective values go to the lowest vertex index.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, NamedTuple

import numpy as np

Objective = Callable[[np.ndarray], float]
Projector = Callable[[np.ndarray], np.ndarray]


class EvaluationError(ArithmeticError):
    """The objective returned a non-finite value."""


@dataclass(frozen=True)
class SimplexConfig:
    k: float = 3.0
    alpha: float = 1.0
    gamma: float = 2.0
    beta: float = 0.5
    max_iter: int = 500
    eps_inner: float = 1e-6
    inner_mode: str = "full-run"
    inner_steps: int = 1
    exclude_worst_in_centroid: bool = False

    def __post_init__(self) -> None:
        if not self.alpha > 0:
            raise ValueError("reflection coefficient must be positive")
        if not self.gamma > 1:
            raise ValueError("expansion coefficient must exceed 1")
        if not 0 < self.beta < 1:
            raise ValueError("contraction coefficient must lie in (0, 1)")
        if self.k == 0:
            raise ValueError("simplex size k must be non-zero")
        if self.max_iter < 0 or self.inner_steps < 1:
            raise ValueError("iteration limits must be non-negative (inner_steps >= 1)")
        if self.inner_mode not in ("full-run", "single-iteration"):
            raise ValueError(f"unknown inner_mode {self.inner_mode!r}")

    @property
    def iteration_limit(self) -> int:
        """Iterations allowed for one inner run under the configured mode."""
        return self.max_iter if self.inner_mode == "full-run" else self.inner_steps


@dataclass
class SimplexState:
    vertices: np.ndarray
    values: np.ndarray
    eval_count: int = 0

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    def best(self) -> int:
        return int(np.argmin(self.values))

    def worst(self) -> int:
        return int(np.argmax(self.values))

    def spread(self) -> float:
        return float(self.values.max() - self.values.min())

    def copy(self) -> SimplexState:
        return SimplexState(self.vertices.copy(), self.values.copy(), self.eval_count)


class SimplexResult(NamedTuple):
    x_best: np.ndarray
    f_best: float
    history: list
    iterations: int
    evaluations: int
    log: list


def _identity(x: np.ndarray) -> np.ndarray:
    return x


def _evaluate(f: Objective, x: np.ndarray) -> float:
    value = float(f(x))
    if not math.isfinite(value):
        raise EvaluationError(f"objective returned {value} at {x}")
    return value


def init_simplex(x1, k: float, f: Objective, projector: Projector | None = None) -> SimplexState:
    """Initial guess plus one vertex per coordinate, offset by +k along that axis."""
    project = projector or _identity
    x1 = np.atleast_1d(np.asarray(x1, dtype=float))
    dim = x1.size
    if dim < 1:
        raise ValueError("need at least one coordinate")
    if k == 0:
        raise ValueError("k = 0 gives a degenerate simplex")
    raw = np.tile(x1, (dim + 1, 1))
    raw[1:] += k * np.eye(dim)
    vertices = np.array([project(v) for v in raw], dtype=float)
    values = np.array([_evaluate(f, v) for v in vertices])
    return SimplexState(vertices, values, eval_count=dim + 1)


def centroid(state: SimplexState, exclude_worst: bool = False) -> np.ndarray:
    if exclude_worst:
        keep = np.arange(len(state.values)) != state.worst()
        return state.vertices[keep].mean(axis=0)
    return state.vertices.mean(axis=0)


def reflect(x_max, x_center, alpha: float) -> np.ndarray:
    return (1 + alpha) * np.asarray(x_center) - alpha * np.asarray(x_max)


def expand(x_star, x_center, gamma: float) -> np.ndarray:
    return gamma * np.asarray(x_star) + (1 - gamma) * np.asarray(x_center)


def contract(x_max, x_center, beta: float) -> np.ndarray:
    return beta * np.asarray(x_max) + (1 - beta) * np.asarray(x_center)


def multi_contract(state: SimplexState, f: Objective, projector: Projector | None = None) -> SimplexState:
    """Pull every vertex halfway toward the best one and re-evaluate."""
    project = projector or _identity
    new = state.copy()
    i_min = state.best()
    x_min = state.vertices[i_min]
    for i in range(len(new.values)):
        if i == i_min:
            continue
        new.vertices[i] = project((state.vertices[i] + x_min) / 2)
        new.values[i] = _evaluate(f, new.vertices[i])
        new.eval_count += 1
    return new


def simplex_step(
    state: SimplexState,
    f: Objective,
    cfg: SimplexConfig,
    projector: Projector | None = None,
) -> SimplexState:
    project = projector or _identity
    new = state.copy()
    i_max = state.worst()
    f_max = state.values[i_max]
    f_min = state.values.min()
    f_near = np.delete(state.values, i_max).max()
    x_max = state.vertices[i_max]
    center = centroid(state, cfg.exclude_worst_in_centroid)

    x_star = project(reflect(x_max, center, cfg.alpha))
    f_star = _evaluate(f, x_star)
    new.eval_count += 1
    if f_star < f_min:
        x_2star = project(expand(x_star, center, cfg.gamma))
        f_2star = _evaluate(f, x_2star)
        new.eval_count += 1
        if f_2star < f_star:
            x_star, f_star = x_2star, f_2star
    elif f_star > f_near:
        x_star = project(contract(x_max, center, cfg.beta))
        f_star = _evaluate(f, x_star)
        new.eval_count += 1

    if f_star > f_max:
        return multi_contract(new, f, projector)
    new.vertices[i_max] = x_star
    new.values[i_max] = f_star
    return new


def run(
    f: Objective,
    x1,
    cfg: SimplexConfig | None = None,
    projector: Projector | None = None,
    max_iter: int | None = None,
) -> SimplexResult:
    """Minimize ``f`` from ``x1``.

    Stops after ``max_iter`` iterations (``cfg.iteration_limit`` when not
    given) or once the spread of vertex values drops below ``cfg.eps_inner``.
    ``history`` holds the best value before the first and after every
    iteration.
    """
    cfg = cfg or SimplexConfig()
    limit = cfg.iteration_limit if max_iter is None else max_iter
    state = init_simplex(x1, cfg.k, f, projector)
    history = [float(state.values.min())]
    log = [(0, float(state.values.min()), float(state.values.max()))]
    it = 0
    while it < limit and state.spread() >= cfg.eps_inner:
        state = simplex_step(state, f, cfg, projector)
        it += 1
        history.append(float(state.values.min()))
        log.append((it, float(state.values.min()), float(state.values.max())))
    i_best = state.best()
    return SimplexResult(
        x_best=state.vertices[i_best].copy(),
        f_best=float(state.values[i_best]),
        history=history,
        iterations=it,
        evaluations=state.eval_count,
        log=log,
    )


def maximize(
    f: Objective,
    x1,
    cfg: SimplexConfig | None = None,
    projector: Projector | None = None,
    max_iter: int | None = None,
) -> SimplexResult:
    """Maximize ``f`` by minimizing ``-f``; values in the result are for ``f``."""
    res = run(lambda x: -f(x), x1, cfg, projector, max_iter)
    return res._replace(
        f_best=-res.f_best,
        history=[-h for h in res.history],
        log=[(i, -hi, -lo) for i, lo, hi in res.log],
    )


def write_iteration_log(result: SimplexResult, out: str | Path) -> None:
    with Path(out).open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["iter", "f_min", "f_max", "spread"])
        for it, lo, hi in result.log:
            writer.writerow([it, format(lo, ".10g"), format(hi, ".10g"), format(hi - lo, ".10g")])
