"""
Driving a training batch
========================

What a trainer's inner loop looks like: one persistent batched simulator,
mask-respecting random actions, automatic resets, throughput at the end.
"""

import time

import numpy as np

from skirmish import BatchSim, TAG_EPISODE, derive_seed, resolve_scenario

# eight units a side is a comfortable mid-size battle
cfg = resolve_scenario("2F1M2Avs2S1K")
B = 256

sim = BatchSim(
    [cfg] * B,
    seeds=[derive_seed(0, b, TAG_EPISODE) for b in range(B)],
    auto_reset=True,
)
out = sim.last
print(f"observations {out.observations.shape}, global state {out.global_state.shape}, "
      f"mask {out.action_mask.shape}")

# sample uniformly over the valid actions in each slot; the mask guarantees
# at least one legal action for every unit, dead or alive
g = np.random.default_rng(3)

def sample_valid(mask):
    cum = mask.cumsum(axis=-1)
    draw = g.random(mask.shape[:-1] + (1,)) * cum[..., -1:]
    return (draw < cum).argmax(axis=-1)

episodes = 0
returns = 0.0
t0 = time.monotonic()
steps = 500
for _ in range(steps):
    out = sim.step(sample_valid(out.action_mask))
    episodes += int(out.done.sum())
    returns += float(out.episode_return[out.done].sum())
elapsed = time.monotonic() - t0

rate = B * steps / elapsed
print(f"{B} envs x {steps} steps in {elapsed:.1f}s: "
      f"{rate:,.0f} env-steps/s ({rate * len(cfg.units):,.0f} agent-steps/s)")
print(f"{episodes} episodes finished, mean return "
      f"{returns / max(episodes, 1):+.3f} (random play hovers near zero)")

# the same loop at several batch sizes, through the bundled benchmark
from skirmish import benchmark_throughput

for row in benchmark_throughput(cfg, [16, 256], steps=200):
    print(f"  {row['envs']:4d} envs: {row['env_steps_per_s']:>9,.0f} env-steps/s")
