"""Cross-component parity: replaying a rollout trace through the bindings
reproduces its health trajectory exactly, for 100 random (scenario, seed,
action script) triples.

The health check reads observation feature 0 (health / max_health): both
sides compute it with the same float operands, so equality is exact.
"""
from __future__ import annotations

import json
import subprocess
import sys
from dataclasses import replace

import numpy as np

import skirmish_bindings as sb
from skirmish import (
    TeamConfig,
    catalog,
    load_catalog_scenario,
    random_scenario,
    run_rollouts,
    save_scenario,
)

MAX_STEPS = 150


def externalized(config):
    """Every team trainer-driven, episodes capped for test runtime."""
    teams = tuple(TeamConfig(t.id, "external") for t in config.teams)
    return replace(config, teams=teams, max_steps=MAX_STEPS)


def scenario_pool():
    pool = [externalized(load_catalog_scenario(name)) for name in catalog()]
    g = np.random.default_rng(1000)
    while len(pool) < 100:
        pool.append(externalized(random_scenario(g)))
    return pool


def max_healths(config):
    return [p.resolved_spec().max_health for p in config.units]


def drive_and_compare(config, seed, records):
    handle = sb.make_batch(save_scenario(config).encode(), 1, seed)
    caps = max_healths(config)
    pad = handle.agents - len(caps)
    for rec in records:
        acts = [u["action"] for u in rec["units"]] + [0] * pad
        obs, _, _, term, trunc, _ = sb.step(handle, np.array([acts]))
        assert bool(term[0]) == rec["terminated"]
        assert bool(trunc[0]) == rec["truncated"]
        done = rec["terminated"] or rec["truncated"]
        view = handle.info["final_observation"] if done else obs
        for i, u in enumerate(rec["units"]):
            want = u["health"] / caps[i]
            got = view[0, i, 0]
            assert got == want, (
                f"unit {i} at t={rec['t']}: bindings {got!r} vs trace {want!r}"
            )


def test_health_trajectories_match_traces(tmp_path):
    pool = scenario_pool()
    steps = 0
    for k, config in enumerate(pool):
        seed = 7000 + 13 * k
        trace = tmp_path / f"triple-{k}.jsonl"
        run_rollouts(config, ally="random", enemy="random",
                     episodes=1, seed=seed, trace=trace)
        records = [json.loads(line) for line in trace.read_text().splitlines()]
        drive_and_compare(config, seed, records)
        steps += len(records)
    print(f"[PASS] bindings-parity: {len(pool)} triples, "
          f"{steps} steps, health ratios exact")


def test_parity_holds_through_the_real_cli(tmp_path):
    """A few triples through the installed command instead of the library."""
    pool = scenario_pool()[:3]
    for k, config in enumerate(pool):
        seed = 31 * (k + 1)
        path = tmp_path / f"scn-{k}.json"
        path.write_text(save_scenario(config))
        trace = tmp_path / f"cli-{k}.jsonl"
        proc = subprocess.run(
            [sys.executable, "-m", "skirmish.cli", "run",
             "--scenario", str(path), "--episodes", "1", "--seed", str(seed),
             "--ally", "random", "--enemy", "random", "--trace", str(trace)],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0, proc.stderr
        records = [json.loads(line) for line in trace.read_text().splitlines()]
        drive_and_compare(config, seed, records)
