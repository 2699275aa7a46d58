"""SVG figures for experiment results."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from cbsimplex.harness import RunArtifact  # noqa: E402

# fixed salt and no date stamp keep the SVG bytes reproducible
_SVG_RC = {"svg.hashsalt": "cbsimplex", "svg.fonttype": "path"}
_SVG_META = {"Date": None, "Creator": None}


def _save(fig, path: Path) -> None:
    fig.savefig(path, format="svg", metadata=_SVG_META)
    plt.close(fig)


def plot_strategies(artifacts: list[RunArtifact], path: str | Path, title: str = "") -> Path:
    path = Path(path)
    with plt.rc_context(_SVG_RC):
        fig, axes = plt.subplots(len(artifacts), 1, figsize=(7, 2.6 * len(artifacts)), sharex=True, squeeze=False)
        for ax, a in zip(axes[:, 0], artifacts):
            ax.plot(a.conv.trajectory(), label="investor (conversion)")
            ax.plot(a.call.trajectory(), label="issuer (call)")
            ax.plot(a.conv.grid.node_days, a.conv.node_values, "o", ms=3, color="C0")
            ax.plot(a.call.grid.node_days, a.call.node_values, "s", ms=3, color="C1")
            ax.set_title(a.label or "run", fontsize=9)
            ax.set_ylabel("threshold")
            ax.legend(fontsize=7, loc="upper left")
        axes[-1, 0].set_xlabel("trading day")
        if title:
            fig.suptitle(title)
        fig.tight_layout()
        _save(fig, path)
    return path


def plot_objective_history(artifacts: list[RunArtifact], path: str | Path, title: str = "") -> Path:
    """Payoff after each max and min step; the min step sits half an iteration later."""
    path = Path(path)
    with plt.rc_context(_SVG_RC):
        fig, ax = plt.subplots(figsize=(7, 4))
        for a in artifacts:
            seq = a.trace.interleaved()
            x = [1 + i / 2 for i in range(len(seq))]
            ax.plot(x, seq, marker=".", label=a.label or "run")
        ax.set_xlabel("outer iteration")
        ax.set_ylabel("payoff")
        ax.legend(fontsize=8)
        if title:
            ax.set_title(title)
        fig.tight_layout()
        _save(fig, path)
    return path


def emit_plots(artifacts: list[RunArtifact], out_dir: str | Path, title: str = "") -> tuple[Path, Path]:
    if not artifacts:
        raise ValueError("no artifacts to plot")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return (
        plot_strategies(artifacts, out / "strategies.svg", title),
        plot_objective_history(artifacts, out / "objective_history.svg", title),
    )
