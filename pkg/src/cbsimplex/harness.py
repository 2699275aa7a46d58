"""Run artifacts and the four one-parameter sensitivity experiments."""

from __future__ import annotations

import dataclasses
import json
import logging
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from cbsimplex.config import config_from_dict, format_config, flatten_config
from cbsimplex.minmax import GameConfig, MinMaxTrace, TraceRow, solve
from cbsimplex.strategy import Strategy, ThresholdGrid, write_strategy_csv

log = logging.getLogger(__name__)


@dataclass
class RunArtifact:
    config: GameConfig
    trace: MinMaxTrace
    conv: Strategy
    call: Strategy
    duration_s: float = 0.0
    label: str = ""

    @property
    def summary(self) -> dict[str, Any]:
        return {
            "label": self.label,
            "final_payoff": self.trace.final_payoff if self.trace.rows else None,
            "final_gap": self.trace.final_gap,
            "outer_iterations": len(self.trace),
            "converged": self.trace.converged,
            "seed": self.config.seed,
            "duration_s": self.duration_s,
        }


def _strategy_to_dict(s: Strategy) -> dict[str, Any]:
    return {
        "role": s.role.value,
        "horizon_day": s.grid.horizon_day,
        "maturity_day": s.grid.maturity_day,
        "node_days": s.grid.node_days.tolist(),
        "node_values": s.node_values.tolist(),
        "daily": s.trajectory().tolist(),
    }


def _strategy_from_dict(d: dict[str, Any]) -> Strategy:
    grid = ThresholdGrid(d["node_days"], d["role"], d["horizon_day"], d["maturity_day"])
    return Strategy(grid, d["node_values"])


def artifact_to_dict(a: RunArtifact) -> dict[str, Any]:
    return {
        "label": a.label,
        "config": flatten_config(a.config),
        "trace": {
            "converged": a.trace.converged,
            "rows": [dataclasses.asdict(row) for row in a.trace.rows],
        },
        "conv": _strategy_to_dict(a.conv),
        "call": _strategy_to_dict(a.call),
        "duration_s": a.duration_s,
    }


def artifact_from_dict(d: dict[str, Any]) -> RunArtifact:
    rows = [
        TraceRow(
            r["payoff_after_max"],
            r["payoff_after_min"],
            r["gap"],
            tuple(r["conv_nodes"]),
            tuple(r["call_nodes"]),
        )
        for r in d["trace"]["rows"]
    ]
    return RunArtifact(
        config=config_from_dict(d["config"]),
        trace=MinMaxTrace(rows, d["trace"]["converged"]),
        conv=_strategy_from_dict(d["conv"]),
        call=_strategy_from_dict(d["call"]),
        duration_s=d["duration_s"],
        label=d["label"],
    )


def save_artifact(a: RunArtifact, out_dir: str | Path) -> Path:
    """Write trace, strategies, summary, config and the full artifact JSON into ``out_dir``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    a.trace.write_csv(out / "trace.csv")
    write_strategy_csv(a.conv, out / "conv_strategy.csv")
    write_strategy_csv(a.call, out / "call_strategy.csv")
    (out / "config.txt").write_text(format_config(a.config))
    (out / "summary.json").write_text(json.dumps(a.summary, indent=2) + "\n")
    (out / "artifact.json").write_text(json.dumps(artifact_to_dict(a), indent=1) + "\n")
    return out


def load_artifact(out_dir: str | Path) -> RunArtifact:
    return artifact_from_dict(json.loads((Path(out_dir) / "artifact.json").read_text()))


def run_solve(config: GameConfig, label: str = "") -> RunArtifact:
    start = time.perf_counter()
    conv, call, trace = solve(config)
    return RunArtifact(config, trace, conv, call, time.perf_counter() - start, label)


@dataclass(frozen=True)
class ExperimentSpec:
    id: int
    varied_parameter: str
    values: tuple
    base: GameConfig = dataclasses.field(default_factory=GameConfig)

    def variant(self, value) -> GameConfig:
        if self.varied_parameter == "k":
            return dataclasses.replace(self.base, simplex=dataclasses.replace(self.base.simplex, k=float(value)))
        return dataclasses.replace(self.base, **{self.varied_parameter: value})

    def label(self, value) -> str:
        return f"{self.varied_parameter}={value}"


EXPERIMENTS = {
    1: ExperimentSpec(1, "n_paths", (50, 525, 1000)),
    2: ExperimentSpec(2, "k", (1, 3, 5)),
    3: ExperimentSpec(3, "epsilon_guess", (1.0, 5.0, 9.0)),
    4: ExperimentSpec(4, "n_nodes", (5, 10, 15)),
}


def run_experiment(
    spec: ExperimentSpec,
    seed: int = 1,
    out_dir: str | Path | None = None,
) -> tuple[list[RunArtifact], dict[str, str]]:
    """Solve once per experimental value, all variants sharing ``seed``.

    A variant whose solve raises is skipped and reported in the returned
    failure map; the other variants still run.
    """
    artifacts, failures = [], {}
    for value in spec.values:
        label = spec.label(value)
        config = dataclasses.replace(spec.variant(value), seed=seed)
        try:
            artifact = run_solve(config, label)
        except (ArithmeticError, ValueError) as exc:
            log.error("experiment %d variant %s failed: %s", spec.id, label, exc)
            failures[label] = str(exc)
            continue
        artifacts.append(artifact)
        if out_dir is not None:
            save_artifact(artifact, Path(out_dir) / label.replace("=", "_"))
    return artifacts, failures
