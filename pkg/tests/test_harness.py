import dataclasses
import json

import pytest

from cbsimplex.config import config_keys, format_config, load_config, parse_config, save_config
from cbsimplex.harness import (
    EXPERIMENTS,
    ExperimentSpec,
    load_artifact,
    run_experiment,
    run_solve,
    save_artifact,
)
from cbsimplex.market_model import MarketParams
from cbsimplex.minmax import GameConfig
from cbsimplex.plots import emit_plots
from cbsimplex.simplex import SimplexConfig

QUICK = GameConfig(n_paths=60, max_outer=3)


def test_defaults_are_basic_set():
    cfg = parse_config("")
    assert cfg == GameConfig()
    assert (cfg.n_paths, cfg.simplex.k, cfg.n_nodes, cfg.epsilon_guess) == (525, 3.0, 10, 5.0)
    assert (cfg.market.s0, cfg.market.r, cfg.market.delta, cfg.market.sigma, cfg.market.maturity_years) == (
        98.0,
        0.05,
        0.1,
        0.2,
        2.0,
    )
    assert (cfg.terms.face_value, cfg.terms.call_price, cfg.terms.notice_days) == (100.0, 110.0, 10)
    assert cfg.eps_gap == 1e-4


def test_parse_overrides_and_comments():
    cfg = parse_config(
        """
        # a comment
        n_paths = 50
        simplex.k = 1   # trailing comment
        market.sigma = 0.3
        simplex.exclude_worst_in_centroid = true
        simplex.inner_mode = single-iteration
        """
    )
    assert cfg.n_paths == 50
    assert cfg.simplex.k == 1.0
    assert cfg.market.sigma == 0.3
    assert cfg.simplex.exclude_worst_in_centroid is True
    assert cfg.simplex.inner_mode == "single-iteration"
    assert cfg.n_nodes == 10


@pytest.mark.parametrize(
    "text",
    ["bogus = 1", "n_paths", "n_paths = many", "n_paths = 1\nn_paths = 2", "simplex.beta = 2"],
)
def test_parse_errors(text):
    with pytest.raises(ValueError):
        parse_config(text)


def test_config_round_trip(tmp_path):
    cfg = GameConfig(
        market=MarketParams(sigma=0.25, maturity_years=1.0),
        n_paths=77,
        seed=12345678901,
        epsilon_guess=0.1 + 0.2,
        simplex=SimplexConfig(k=2.5, eps_inner=1e-7),
    )
    save_config(cfg, tmp_path / "c.txt")
    assert load_config(tmp_path / "c.txt") == cfg
    text = format_config(cfg)
    assert [line.split(" = ")[0] for line in text.splitlines()] == config_keys()


@pytest.fixture(scope="module")
def artifact():
    return run_solve(QUICK, label="quick")


def test_artifact_round_trip(artifact, tmp_path):
    save_artifact(artifact, tmp_path)
    assert load_artifact(tmp_path) == artifact
    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == [
        "artifact.json",
        "call_strategy.csv",
        "call_strategy_nodes.csv",
        "config.txt",
        "conv_strategy.csv",
        "conv_strategy_nodes.csv",
        "summary.json",
        "trace.csv",
    ]
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["outer_iterations"] == len(artifact.trace)
    assert summary["final_gap"] == artifact.trace.final_gap
    assert load_config(tmp_path / "config.txt") == QUICK


def test_trace_csv_format(artifact, tmp_path):
    artifact.trace.write_csv(tmp_path / "t.csv")
    lines = (tmp_path / "t.csv").read_text().splitlines()
    assert lines[0] == "outer_iter,payoff_after_max,payoff_after_min,gap"
    assert len(lines) == len(artifact.trace) + 1
    first = lines[1].split(",")
    assert first[0] == "1"
    assert float(first[1]) == pytest.approx(artifact.trace.rows[0].payoff_after_max, rel=1e-9)


def test_experiment_specs():
    assert {i: (s.varied_parameter, s.values) for i, s in EXPERIMENTS.items()} == {
        1: ("n_paths", (50, 525, 1000)),
        2: ("k", (1, 3, 5)),
        3: ("epsilon_guess", (1.0, 5.0, 9.0)),
        4: ("n_nodes", (5, 10, 15)),
    }
    for spec in EXPERIMENTS.values():
        assert spec.base == GameConfig()
    variant = EXPERIMENTS[2].variant(5)
    assert variant.simplex.k == 5.0
    assert dataclasses.replace(variant, simplex=SimplexConfig()) == GameConfig()


def test_run_experiment_small(tmp_path):
    spec = ExperimentSpec(2, "k", (1, 3, 5), base=QUICK)
    artifacts, failures = run_experiment(spec, seed=4, out_dir=tmp_path)
    assert failures == {}
    assert [a.config.simplex.k for a in artifacts] == [1.0, 3.0, 5.0]
    assert all(a.config.seed == 4 for a in artifacts)
    assert sorted(p.name for p in tmp_path.iterdir()) == ["k_1", "k_3", "k_5"]
    svgs = emit_plots(artifacts, tmp_path, title="k")
    for svg in svgs:
        text = svg.read_text()
        assert text.startswith("<?xml") and "</svg>" in text
    # one axes group per variant in the strategies figure
    assert svgs[0].read_text().count('id="axes_') == 3
    assert svgs[1].read_text().count('id="axes_') == 1

    again, _ = run_experiment(spec, seed=4, out_dir=tmp_path / "again")
    for a in ("k_1", "k_3", "k_5"):
        for name in ("trace.csv", "conv_strategy.csv", "call_strategy_nodes.csv"):
            assert (tmp_path / a / name).read_bytes() == (tmp_path / "again" / a / name).read_bytes()
    first = svgs[1].read_bytes()
    emit_plots(again, tmp_path / "again", title="k")
    assert (tmp_path / "again" / "objective_history.svg").read_bytes() == first


def test_failing_variant_does_not_stop_others():
    # maturity too short for 15 issuer nodes: that variant fails, the rest run
    base = dataclasses.replace(QUICK, market=MarketParams(maturity_years=0.1))
    spec = ExperimentSpec(4, "n_nodes", (5, 15, 6), base=base)
    artifacts, failures = run_experiment(spec)
    assert [a.config.n_nodes for a in artifacts] == [5, 6]
    assert list(failures) == ["n_nodes=15"]


def test_emit_plots_needs_artifacts(tmp_path):
    with pytest.raises(ValueError):
        emit_plots([], tmp_path / "none")
    assert not (tmp_path / "none").exists()
