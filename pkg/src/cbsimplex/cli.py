"""Command line entry point.

Exit codes: 0 on success, 1 for usage or configuration errors, 2 when a
numerical step fails.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
from pathlib import Path

from cbsimplex.config import load_config
from cbsimplex.harness import EXPERIMENTS, run_experiment, run_solve, save_artifact
from cbsimplex.market_model import generate_paths, write_paths_csv
from cbsimplex.minmax import GameConfig

EXIT_USAGE = 1
EXIT_NUMERICAL = 2

log = logging.getLogger("cbsimplex")


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cbsimplex", description="Convertible bond exercise game solver.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("simulate", help="write simulated stock paths to CSV")
    p.add_argument("--paths", type=int, required=True, help="number of paths M")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--config", type=Path, help="take market parameters from this config file")

    p = sub.add_parser("solve", help="solve the game for one config file")
    p.add_argument("--config", type=Path, required=True)
    p.add_argument("--seed", type=int, help="override the config seed")
    p.add_argument("--out", type=Path, default=Path("run"))

    p = sub.add_parser("experiment", help="run one of the four sensitivity experiments")
    p.add_argument("--id", type=int, choices=sorted(EXPERIMENTS), required=True)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out", type=Path, default=None)
    return parser


def _load(path: Path | None) -> GameConfig:
    return GameConfig() if path is None else load_config(path)


def _simulate(args) -> int:
    cfg = _load(args.config)
    paths = generate_paths(cfg.market, args.paths, args.seed)
    write_paths_csv(paths, args.out)
    log.info("wrote %d paths to %s", paths.n_paths, args.out)
    return 0


def _solve(args) -> int:
    cfg = _load(args.config)
    if args.seed is not None:
        cfg = dataclasses.replace(cfg, seed=args.seed)
    artifact = run_solve(cfg, label=args.config.stem)
    save_artifact(artifact, args.out)
    print(json.dumps(artifact.summary))
    return 0


def _experiment(args) -> int:
    spec = EXPERIMENTS[args.id]
    out = args.out or Path(f"experiment_{args.id}")
    artifacts, failures = run_experiment(spec, seed=args.seed, out_dir=out)
    if artifacts:
        from cbsimplex.plots import emit_plots

        emit_plots(artifacts, out, title=f"Experiment {spec.id}: varying {spec.varied_parameter}")
    for a in artifacts:
        print(json.dumps(a.summary))
    if failures:
        (out / "failures.json").write_text(json.dumps(failures, indent=2) + "\n")
        return EXIT_NUMERICAL
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO, format="%(levelname)s %(message)s")
    handler = {"simulate": _simulate, "solve": _solve, "experiment": _experiment}[args.command]
    try:
        return handler(args)
    except ArithmeticError as exc:
        log.error("numerical failure: %s", exc)
        return EXIT_NUMERICAL
    except (ValueError, OSError) as exc:
        log.error("%s", exc)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
