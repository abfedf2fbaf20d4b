import argparse
import json
import logging
import platform
import sys
import time
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path
from typing import Optional

from langgraph.graph import END, StateGraph

from satcoop import __version__
from satcoop.config.loader import config_hash, validate_config
from satcoop.errors import ConfigError
from satcoop.experiments import (
    band_sweep,
    ber_vs_cluster_size,
    capacity_timeseries,
    capacity_vs_cluster_size,
    overhead_table,
    single_satellite_baseline,
    visibility_timeseries,
)
from satcoop.graph.state import RunState, show_run_summary
from satcoop.utils.settings import get_settings
from satcoop.utils.tables import write_table

logger = logging.getLogger("satcoop")

EXPERIMENTS = {
    "capacity-timeseries": lambda config, threads: capacity_timeseries(config, threads),
    "capacity-vs-l": lambda config, threads: capacity_vs_cluster_size(config, threads),
    "ber-vs-l": lambda config, threads: ber_vs_cluster_size(config, threads),
    "band-sweep": lambda config, threads: band_sweep(config, threads=threads),
    "baseline-single": lambda config, threads: single_satellite_baseline(config),
    "visibility": lambda config, threads: visibility_timeseries(config, threads),
    "overhead": lambda config, threads: overhead_table(config),
}
SUBCOMMANDS = [*EXPERIMENTS, "validate"]

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3


def load_config(state: RunState):
    run = state["data"]
    config = validate_config(run["config_path"])
    if run.get("seed") is not None:
        config = config.with_experiment(master_seed=run["seed"])
    message = f"scenario {run['config_path']} valid, seed {config.experiment.master_seed}"
    return {"messages": [message], "data": {"config": config, "config_hash": config_hash(config)}}


def route_after_load(state: RunState):
    return "report_config" if state["data"]["subcommand"] == "validate" else "run_experiment"


def report_config(state: RunState):
    config = state["data"]["config"]
    if state["metadata"].get("show_summary"):
        show_run_summary(
            {"config_hash": state["data"]["config_hash"], "scenario": config}, "Validated Scenario"
        )
    return {"messages": ["validation only"]}


def run_experiment(state: RunState):
    run = state["data"]
    started = time.perf_counter()
    result = EXPERIMENTS[run["subcommand"]](run["config"], run.get("threads", 1))
    wall_time_s = time.perf_counter() - started
    return {
        "messages": [f"{result.name}: {len(result)} records in {wall_time_s:.1f} s"],
        "data": {"result": result, "wall_time_s": wall_time_s},
    }


def write_outputs(state: RunState):
    run = state["data"]
    out_dir = Path(run["out_dir"])
    out_dir.mkdir(parents=True, exist_ok=True)
    files = write_table(run["result"].records, out_dir / run["subcommand"], run["format"])
    return {"messages": [f"wrote {len(files)} files"], "data": {"files": files}}


def write_manifest(state: RunState):
    run = state["data"]
    config = run["config"]
    manifest = {
        "subcommand": run["subcommand"],
        "config_hash": run["config_hash"],
        "master_seed": config.experiment.master_seed,
        "versions": package_versions(),
        "wall_time_s": round(run["wall_time_s"], 3),
        "threads": run.get("threads", 1),
        "files": [path.name for path in run["files"]],
    }
    path = Path(run["out_dir"]) / f"{run['subcommand']}.manifest.json"
    path.write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    if state["metadata"].get("show_summary"):
        show_run_summary(run["result"].aggregates, run["result"].name)
    return {"messages": [f"manifest {path.name}"], "data": {"manifest": path}}


def package_versions() -> dict[str, str]:
    versions = {"satcoop": __version__, "python": platform.python_version()}
    for package in ("numpy", "scipy", "pandas", "pydantic", "langgraph"):
        try:
            versions[package] = version(package)
        except PackageNotFoundError:
            versions[package] = "unknown"
    return versions


def create_workflow():
    workflow = StateGraph(RunState)
    workflow.add_node("load_config", load_config)
    workflow.add_node("report_config", report_config)
    workflow.add_node("run_experiment", run_experiment)
    workflow.add_node("write_outputs", write_outputs)
    workflow.add_node("write_manifest", write_manifest)

    workflow.add_conditional_edges("load_config", route_after_load)
    workflow.add_edge("report_config", END)
    workflow.add_edge("run_experiment", "write_outputs")
    workflow.add_edge("write_outputs", "write_manifest")
    workflow.add_edge("write_manifest", END)

    workflow.set_entry_point("load_config")
    return workflow


def run(
    subcommand: str,
    config_path: str,
    seed_override: Optional[int] = None,
    out_dir: str = ".",
    fmt: str = "csv",
    threads: int = 1,
    show_summary: bool = False,
) -> dict:
    """Validate the scenario, run one experiment and write its tables and manifest."""
    if subcommand not in SUBCOMMANDS:
        raise ValueError(f"unknown subcommand {subcommand!r}; choose from {', '.join(SUBCOMMANDS)}")
    app = create_workflow().compile()
    final_state = app.invoke(
        {
            "messages": [],
            "data": {
                "subcommand": subcommand,
                "config_path": config_path,
                "seed": seed_override,
                "out_dir": out_dir,
                "format": fmt,
                "threads": threads,
            },
            "metadata": {"show_summary": show_summary},
        }
    )
    for message in final_state["messages"]:
        logger.debug(message)
    return final_state["data"]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="satcoop",
        description="Cooperative handheld-to-multi-satellite uplink experiments.",
    )
    parser.add_argument("subcommand", choices=SUBCOMMANDS)
    parser.add_argument(
        "--config",
        default="london-two-shell",
        help="scenario YAML file, or the name of a shipped scenario (default: london-two-shell)",
    )
    parser.add_argument("--seed", type=int, default=None, help="override experiment.master_seed")
    parser.add_argument("--out", default=".", help="output directory")
    parser.add_argument("--format", choices=["csv", "csv+json"], default="csv")
    parser.add_argument("--threads", type=int, default=None, help="worker processes")
    parser.add_argument(
        "--log-level",
        default=None,
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="diagnostic verbosity on stderr",
    )
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        settings = get_settings()
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    logging.basicConfig(
        level=args.log_level or settings.log_level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    threads = args.threads if args.threads is not None else settings.threads
    try:
        run(
            args.subcommand,
            args.config,
            seed_override=args.seed,
            out_dir=args.out,
            fmt=args.format,
            threads=max(threads, 1),
            show_summary=True,
        )
    except ConfigError as exc:
        for message in exc.messages:
            logger.error(message)
        return EXIT_CONFIG
    except Exception as exc:
        logger.error("%s: %s", type(exc).__name__, exc)
        logger.debug("Traceback", exc_info=True)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
