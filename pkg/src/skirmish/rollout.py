"""Scripted-policy rollouts, JSONL episode traces, and benchmarks.

A rollout run plays `episodes` independent episodes of one scenario with
the team controllers overridden by policy specs.  Episode e is seeded by
derive_seed(run_seed, e, TAG_EPISODE) and simulates identically no matter
how episodes are packed into batch lanes or spread over worker threads;
the trace sink then emits records grouped by episode in index order, so
trace bytes depend only on (scenario, policies, episodes, seed).
"""
from __future__ import annotations

import json
import math
import time
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import rng
from .arrays import unpack_units
from .core import (
    HEURISTIC_TIERS,
    HeuristicParams,
    ScenarioConfig,
    TEAM_ALLY,
    TeamConfig,
)
from .environment import BatchSim, outcome_from_arrays
from .render_svg import render_frame
from .scenario import random_scenario

POLICY_KINDS = ("random", "heuristic", "replay")


def parse_policy(text: str) -> tuple[str, HeuristicParams | str | None]:
    """Parse a policy spec: random | heuristic:<tier> | replay:<trace path>."""
    if text == "random":
        return "random", None
    kind, sep, arg = text.partition(":")
    if kind == "heuristic" and sep:
        if arg not in HEURISTIC_TIERS:
            known = ", ".join(sorted(HEURISTIC_TIERS))
            raise ValueError(f"unknown heuristic tier {arg!r} (expected one of {known})")
        return "heuristic", HEURISTIC_TIERS[arg]
    if kind == "replay" and sep and arg:
        return "replay", arg
    raise ValueError(f"unknown policy {text!r}")


def apply_policies(
    config: ScenarioConfig, ally: str, enemy: str
) -> tuple[ScenarioConfig, dict[int, str]]:
    """Override team controllers; replay teams come back as external plus a
    mapping from team id to the trace file that drives them."""
    replays: dict[int, str] = {}
    teams = []
    for team_id, spec in ((0, ally), (1, enemy)):
        kind, arg = parse_policy(spec)
        if kind == "replay":
            replays[team_id] = str(arg)
            teams.append(TeamConfig(id=team_id, controller="external"))
        elif kind == "heuristic":
            teams.append(TeamConfig(id=team_id, controller="heuristic", heuristic=arg))
        else:
            teams.append(TeamConfig(id=team_id, controller="random"))
    return replace(config, teams=tuple(teams)), replays


class ReplayBook:
    """Recorded actions from a trace file, indexed by (episode, step)."""

    def __init__(self, path: str, episodes: list[np.ndarray]) -> None:
        self.path = path
        self.episodes = episodes

    @classmethod
    def load(cls, path: str) -> "ReplayBook":
        episodes: list[np.ndarray] = []
        current: list[list[int]] | None = None
        with open(path, encoding="utf-8") as f:
            for line in f:
                line = line.strip()
                if not line:
                    continue
                rec = json.loads(line)
                if rec["t"] == 1:
                    current = []
                    episodes.append(current)  # type: ignore[arg-type]
                if current is None:
                    raise ValueError(f"{path}: trace does not start at t=1")
                current.append([u["action"] for u in rec["units"]])
        return cls(path, [np.asarray(e, dtype=np.int64) for e in episodes])

    def actions(self, episode: int, t: int) -> np.ndarray:
        if episode >= len(self.episodes):
            raise ValueError(
                f"{self.path}: replay holds {len(self.episodes)} episodes,"
                f" episode {episode} requested"
            )
        steps = self.episodes[episode]
        if not 1 <= t <= len(steps):
            raise ValueError(
                f"{self.path}: episode {episode} ends at step {len(steps)},"
                f" step {t} requested"
            )
        return steps[t - 1]


@dataclass(frozen=True)
class EpisodeStats:
    episode: int
    winner: int
    reason: str
    length: int
    episode_return: float
    first_kill_team: int | None


def summarize(stats: list[EpisodeStats]) -> dict:
    """Aggregate per-episode stats; shared by the live and trace paths so
    both produce bit-identical summaries."""
    n = len(stats)
    if n == 0:
        return {
            "episodes": 0,
            "win_rate": 0.0,
            "mean_return": 0.0,
            "mean_length": 0.0,
            "first_kill_rate": 0.0,
        }
    wins = sum(1 for s in stats if s.winner == TEAM_ALLY)
    first = sum(1 for s in stats if s.first_kill_team == TEAM_ALLY)
    total_return = 0.0
    total_length = 0
    for s in stats:
        total_return += s.episode_return
        total_length += s.length
    return {
        "episodes": n,
        "win_rate": wins / n,
        "mean_return": total_return / n,
        "mean_length": total_length / n,
        "first_kill_rate": first / n,
    }


def record_line(rec: dict) -> str:
    return json.dumps(rec, sort_keys=True, separators=(",", ":")) + "\n"


def _build_record(s, out, b: int, n_units: int, final: bool) -> dict:
    units = []
    for i in range(n_units):
        units.append({
            "id": i,
            "team": int(s.u_team[b, i]),
            "position": [float(s.pos[b, i, 0]), float(s.pos[b, i, 1])],
            "heading": math.degrees(float(s.heading[b, i])),
            "health": float(s.health[b, i]),
            "alive": bool(s.alive[b, i]),
            "action": int(out.actions[b, i]),
            "cooldown_timer": float(s.cooldown[b, i]),
            "reveal_timer": float(s.reveal[b, i]),
        })
    reward = float(out.dense_reward[b])
    if final:
        reward += 1.0 if int(out.winner[b]) == TEAM_ALLY else -1.0
    rec = {
        "t": int(out.episode_length[b]),
        "units": units,
        "reward": reward,
        "terminated": bool(out.terminated[b]),
        "truncated": bool(out.truncated[b]),
    }
    if final:
        o = outcome_from_arrays(s, b)
        rec["outcome"] = {
            "winner": o.winner,
            "reason": o.reason,
            "ally_health_ratio": o.ally_health_ratio,
            "enemy_health_ratio": o.enemy_health_ratio,
            "episode_length": o.episode_length,
            "first_kill_team": o.first_kill_team,
        }
    return rec


def _write_frame(svg_dir, config: ScenarioConfig, s, b: int, ep: int, t: int) -> None:
    doc = render_frame(
        unpack_units(s, b, config),
        list(config.zones),
        config.field,
        title=f"{config.name}  ep {ep}  t {t}",
    )
    Path(svg_dir, f"ep{ep:04d}_t{t:04d}.svg").write_text(doc, encoding="utf-8")


def _run_chunk(
    config: ScenarioConfig,
    ep_ids: list[int],
    run_seed: int,
    batch: int,
    keep_records: bool,
    replays: dict[int, str],
    svg_dir,
) -> dict[int, tuple[EpisodeStats, list[str]]]:
    results: dict[int, tuple[EpisodeStats, list[str]]] = {}
    if not ep_ids:
        return results

    books = {team: ReplayBook.load(path) for team, path in replays.items()}
    for book in books.values():
        if len(book.episodes) <= max(ep_ids):
            raise ValueError(
                f"{book.path}: replay holds {len(book.episodes)} episodes,"
                f" {max(ep_ids) + 1} needed"
            )
    team_slots = {
        team: [i for i, u in enumerate(config.units) if u.team == team]
        for team in books
    }

    queue = deque(ep_ids)
    lanes = min(max(1, batch), len(ep_ids))
    lane_ep: list[int | None] = []
    seeds = []
    for _ in range(lanes):
        e = queue.popleft()
        lane_ep.append(e)
        seeds.append(rng.derive_seed(run_seed, e, rng.TAG_EPISODE))
    sim = BatchSim([config] * lanes, seeds)
    s = sim.sim
    n_units = len(config.units)
    buffers: dict[int, list[str]] = {e: [] for e in ep_ids}

    if svg_dir is not None:
        for b, e in enumerate(lane_ep):
            _write_frame(svg_dir, config, s, b, e, 0)

    while any(e is not None for e in lane_ep):
        actions = None
        if books:
            actions = np.zeros((lanes, s.n_units), dtype=np.int64)
            for b, e in enumerate(lane_ep):
                if e is None:
                    continue
                t_next = int(s.t[b]) + 1
                for team, book in books.items():
                    row = book.actions(e, t_next)
                    for i in team_slots[team]:
                        actions[b, i] = row[i]
        out = sim.step(actions)
        for b in range(lanes):
            e = lane_ep[b]
            if e is None:
                continue
            final = bool(out.done[b])
            if keep_records:
                buffers[e].append(record_line(_build_record(s, out, b, n_units, final)))
            if svg_dir is not None:
                _write_frame(svg_dir, config, s, b, e, int(out.episode_length[b]))
            if not final:
                continue
            o = outcome_from_arrays(s, b)
            results[e] = (
                EpisodeStats(
                    episode=e,
                    winner=o.winner,
                    reason=o.reason,
                    length=o.episode_length,
                    episode_return=float(out.episode_return[b]),
                    first_kill_team=o.first_kill_team,
                ),
                buffers.pop(e),
            )
            if queue:
                nxt = queue.popleft()
                lane_ep[b] = nxt
                sim.reset_env(b, seed=rng.derive_seed(run_seed, nxt, rng.TAG_EPISODE))
                if svg_dir is not None:
                    _write_frame(svg_dir, config, s, b, nxt, 0)
            else:
                lane_ep[b] = None
    return results


def run_rollouts(
    config: ScenarioConfig,
    ally: str = "heuristic:medium",
    enemy: str = "heuristic:medium",
    episodes: int = 1,
    seed: int = 0,
    trace=None,
    svg_dir=None,
    threads: int = 1,
    batch: int = 1,
) -> dict:
    """Play episodes and return the summary; optionally stream a trace."""
    config, replays = apply_policies(config, ally, enemy)
    keep = trace is not None
    if episodes <= 0:
        if keep:
            Path(trace).write_text("", encoding="utf-8")
        return summarize([])
    if svg_dir is not None:
        Path(svg_dir).mkdir(parents=True, exist_ok=True)

    ep_ids = list(range(episodes))
    threads = max(1, min(threads, episodes))
    if threads == 1:
        merged = _run_chunk(config, ep_ids, seed, batch, keep, replays, svg_dir)
    else:
        merged = {}
        chunks = [ep_ids[k::threads] for k in range(threads)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [
                pool.submit(_run_chunk, config, chunk, seed, batch, keep, replays, svg_dir)
                for chunk in chunks
            ]
            for f in futures:
                merged.update(f.result())

    stats = [merged[e][0] for e in range(episodes)]
    if keep:
        with open(trace, "w", encoding="utf-8", newline="\n") as f:
            for e in range(episodes):
                f.writelines(merged[e][1])
    return summarize(stats)


def summary_from_trace(path) -> dict:
    """Rebuild the rollout summary from a trace file alone."""
    stats: list[EpisodeStats] = []
    acc = 0.0
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            if rec["t"] == 1:
                acc = 0.0
            acc += rec["reward"]
            if "outcome" in rec:
                o = rec["outcome"]
                stats.append(EpisodeStats(
                    episode=len(stats),
                    winner=o["winner"],
                    reason=o["reason"],
                    length=o["episode_length"],
                    episode_return=acc,
                    first_kill_team=o["first_kill_team"],
                ))
    return summarize(stats)


def _scripted(config: ScenarioConfig) -> ScenarioConfig:
    # benches need no external actions; random is the cheapest stand-in
    teams = tuple(
        replace(t, controller="random") if t.controller == "external" else t
        for t in config.teams
    )
    return replace(config, teams=teams)


def benchmark_throughput(
    config: ScenarioConfig,
    env_counts: list[int],
    steps: int,
    threads: int = 1,
) -> list[dict]:
    """Steps-per-second per environment count, measured after one warmup
    step.  External teams are driven by the random controller."""
    config = _scripted(config)
    n_agents = len(config.units)
    rows = []
    for count in env_counts:
        count = int(count)
        if steps <= 0 or count <= 0:
            rows.append({
                "envs": count, "steps": 0, "seconds": 0.0,
                "env_steps_per_s": 0.0, "agent_steps_per_s": 0.0,
            })
            continue
        workers = max(1, min(threads, count))
        shares = [count // workers + (1 if k < count % workers else 0)
                  for k in range(workers)]
        sims = []
        base = 0
        for share in shares:
            seeds = [rng.derive_seed(0, base + k, rng.TAG_EPISODE) for k in range(share)]
            sims.append(BatchSim([config] * share, seeds, auto_reset=True))
            base += share
        for sim in sims:
            sim.step(None)  # warmup

        def drive(sim, n=steps):
            for _ in range(n):
                sim.step(None)

        t0 = time.perf_counter()
        if workers == 1:
            drive(sims[0])
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                list(pool.map(drive, sims))
        elapsed = time.perf_counter() - t0
        env_steps = count * steps
        rows.append({
            "envs": count,
            "steps": steps,
            "seconds": elapsed,
            "env_steps_per_s": env_steps / elapsed,
            "agent_steps_per_s": env_steps * n_agents / elapsed,
        })
    return rows


def reconfiguration_latency(
    count: int = 100, batch: int = 8, seed: int = 0
) -> list[float]:
    """Seconds per reset when cycling distinct random scenarios through a
    warm batch.  Capacity is normalized up front so every scenario fits."""
    g = np.random.default_rng(seed)
    configs = [_scripted(random_scenario(g)) for _ in range(max(1, count))]
    cap_units = max(c.max_units for c in configs)
    cap_zones = max(c.max_zones for c in configs)
    configs = [
        replace(c, max_units=cap_units, max_zones=cap_zones) for c in configs
    ]

    lanes = min(batch, len(configs))
    sim = BatchSim([configs[0]] * lanes, list(range(lanes)), auto_reset=True)
    for _ in range(3):
        sim.step(None)
    sim.reset_env(0, configs[0], seed=0)  # warm the reset path too
    sim.step(None)

    times = []
    for i, c in enumerate(configs):
        t0 = time.perf_counter()
        sim.reset_env(i % lanes, c, seed=i)
        times.append(time.perf_counter() - t0)
        sim.step(None)
    return times
