"""
Traces, replays, and SVG frames
===============================

Every rollout can leave a JSONL trace behind: one line per executed step,
canonical key order, byte-stable across thread and batch configuration.
That makes traces diffable artifacts and exact replay inputs.
"""

import json
import tempfile
from pathlib import Path

from skirmish import compose_scenario, run_rollouts, summary_from_trace

work = Path(tempfile.mkdtemp(prefix="traces-"))
cfg = compose_scenario("2F1Avs2F1A")

summary = run_rollouts(
    cfg,
    ally="heuristic:expert",
    enemy="heuristic:novice",
    episodes=5,
    seed=123,
    trace=work / "expert.jsonl",
    svg_dir=work / "frames",
)
print(f"expert vs novice over {summary['episodes']} episodes: "
      f"win rate {summary['win_rate']:.2f}, mean return {summary['mean_return']:+.3f}")

# a trace is self-describing: recomputing the summary from the file alone
# reproduces the live numbers exactly
again = summary_from_trace(work / "expert.jsonl")
print(f"recomputed from trace: identical = {again == summary}")

first = json.loads((work / "expert.jsonl").read_text().splitlines()[0])
print(f"record keys: {sorted(first)}")

# replay: feed the trace back in as both policies; actions are read from
# the file instead of the controllers, reproducing the battle byte for byte
replayed = run_rollouts(
    cfg,
    ally=f"replay:{work / 'expert.jsonl'}",
    enemy=f"replay:{work / 'expert.jsonl'}",
    episodes=5,
    seed=123,
    trace=work / "replayed.jsonl",
)
same = (work / "expert.jsonl").read_bytes() == (work / "replayed.jsonl").read_bytes()
print(f"replayed trace byte-identical = {same}")

frames = sorted((work / "frames").glob("*.svg"))
print(f"{len(frames)} SVG frames in {work / 'frames'}, e.g. {frames[0].name}")
