"""skirmish command line: rollouts, benchmarks, scenario tooling.

Exit codes: 0 on success, 2 when a scenario or level-spec document fails
to load or validate, 1 for any other error.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from importlib import resources
from pathlib import Path

import numpy as np

from .core import ScenarioConfig, ScenarioFormatError, validate_scenario
from .rollout import benchmark_throughput, reconfiguration_latency, run_rollouts
from .scenario import (
    catalog,
    load_catalog_scenario,
    load_levelgen_spec,
    load_scenario_file,
    mutate_level,
    resolve_scenario,
    sample_level,
    save_scenario_file,
    validate_or_raise,
    zone_fragments,
)


def _load(arg: str) -> ScenarioConfig:
    """A scenario argument is a file path, a catalog name, or a
    composition name like 2Fvs2F_1L1B."""
    if Path(arg).is_file():
        return load_scenario_file(arg)
    return resolve_scenario(arg)


def _emit(data) -> None:
    print(json.dumps(data, indent=2, sort_keys=True))


def cmd_run(args) -> int:
    config = validate_or_raise(_load(args.scenario))
    summary = run_rollouts(
        config,
        ally=args.ally,
        enemy=args.enemy,
        episodes=args.episodes,
        seed=args.seed,
        trace=args.trace,
        svg_dir=args.svg,
        threads=args.threads,
        batch=args.batch,
    )
    _emit(summary)
    return 0


def cmd_bench(args) -> int:
    config = validate_or_raise(_load(args.scenario))
    counts = [int(x) for x in args.envs.split(",") if x.strip()]
    rows = benchmark_throughput(config, counts, args.steps, threads=args.threads)
    report = {"throughput": rows}
    if args.resets > 0:
        lat = reconfiguration_latency(count=args.resets)
        report["reconfiguration"] = {
            "resets": len(lat),
            "mean_ms": 1e3 * sum(lat) / len(lat),
            "max_ms": 1e3 * max(lat),
        }
    _emit(report)
    return 0


def cmd_validate(args) -> int:
    config = load_scenario_file(args.file)
    for note in config.load_notes:
        print(f"note: {note}")
    report = validate_scenario(config)
    if not report.ok:
        for v in report.violations:
            print(f"violation: {v}", file=sys.stderr)
        return 2
    print(f"{args.file}: OK ({len(config.units)} units, {len(config.zones)} zones)")
    return 0


def cmd_gen(args) -> int:
    spec = load_levelgen_spec(args.spec)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    g = np.random.default_rng(args.seed)
    for k in range(args.count):
        cfg = sample_level(spec, g)
        cfg = validate_or_raise(replace(cfg, name=f"{spec.base.name}-{k:05d}"))
        path = out / f"{cfg.name}.json"
        save_scenario_file(cfg, path)
        print(path)
    return 0


def cmd_mutate(args) -> int:
    config = validate_or_raise(_load(args.scenario))
    g = np.random.default_rng(args.seed)
    mutated = mutate_level(config, args.op.replace("-", "_"), g)
    save_scenario_file(validate_or_raise(mutated), args.out)
    print(args.out)
    return 0


def cmd_catalog(args) -> int:
    if args.export:
        out = Path(args.export)
        out.mkdir(parents=True, exist_ok=True)
        for name in catalog():
            save_scenario_file(load_catalog_scenario(name), out / f"{name}.json")
        for name in zone_fragments():
            raw = (resources.files("skirmish") / "data" / f"zones_{name}.json").read_bytes()
            (out / f"zones_{name}.json").write_bytes(raw)
        print(out)
        return 0
    for name in catalog():
        print(name)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="skirmish",
        description="Deterministic 2D battle simulator: rollouts, benchmarks,"
        " and scenario tooling.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="play episodes with scripted or replayed policies")
    p.add_argument("--scenario", required=True, help="file path, catalog name, or composition name")
    p.add_argument("--episodes", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--ally", default="heuristic:medium",
                   help="random | heuristic:<tier> | replay:<trace> (default heuristic:medium)")
    p.add_argument("--enemy", default="heuristic:medium")
    p.add_argument("--trace", help="write one JSON record per step to this file")
    p.add_argument("--svg", help="write one SVG frame per step into this directory")
    p.add_argument("--threads", type=int, default=1, help="worker threads (default 1)")
    p.add_argument("--batch", type=int, default=1, help="batch lanes per worker (default 1)")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("bench", help="measure stepping throughput")
    p.add_argument("--scenario", required=True)
    p.add_argument("--envs", required=True, help="comma-separated environment counts")
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--resets", type=int, default=20,
                   help="random-scenario resets for the reconfiguration timing (0 to skip)")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("validate", help="check a scenario file")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("gen", help="sample scenarios from a level spec")
    p.add_argument("--spec", required=True, help="level-spec JSON file")
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("mutate", help="apply one mutation to a scenario")
    p.add_argument("--scenario", required=True)
    p.add_argument("--op", required=True, choices=["perturb", "swap-axes", "retype"])
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True, help="output scenario file")
    p.set_defaults(func=cmd_mutate)

    p = sub.add_parser("catalog", help="list or export the built-in scenarios")
    p.add_argument("--list", action="store_true", help="list names (the default)")
    p.add_argument("--export", help="write every catalog file into this directory")
    p.set_defaults(func=cmd_catalog)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ScenarioFormatError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except BrokenPipeError:
        return 1
    except Exception as e:  # noqa: BLE001 - the CLI boundary reports, not raises
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
