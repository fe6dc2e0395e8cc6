"""
Watching a single skirmish
==========================

Load the "crossfire" catalog scenario, hand the allied team to the expert
heuristic, and narrate the episode tick by tick.
"""

from dataclasses import replace

# the catalog ships ready-made battles; "crossfire" is a lava-lane shootout
from skirmish import HEURISTIC_TIERS, TeamConfig, load_catalog_scenario

cfg = load_catalog_scenario("crossfire")
print(f"{cfg.name}: {len(cfg.units)} units, {len(cfg.zones)} zones, "
      f"field {cfg.field.width:.0f}x{cfg.field.height:.0f}")

# catalog enemies come pre-scripted; the ally side defaults to "external"
# (driven by a trainer), so swap in a heuristic controller to watch AI vs AI
teams = tuple(
    TeamConfig(t.id, "heuristic", HEURISTIC_TIERS["expert"])
    if t.controller == "external" else t
    for t in cfg.teams
)
cfg = replace(cfg, teams=teams)

# the single-environment API is a pure reset/step pair; with every team
# scripted the joint action we pass is ignored, so noops will do
from skirmish import ACTION_NOOP, reset, step, terminal_outcome

r = reset(cfg, seed=7)
noops = [ACTION_NOOP] * len(cfg.units)
labels = [p.preset or "custom" for p in cfg.units]
prev = [u.health for u in r.state.units]

while not (r.terminated or r.truncated):
    r = step(r.state, noops)
    for i, u in enumerate(r.state.units):
        if prev[i] > u.health and not u.alive:
            side = "ally" if u.team == 0 else "enemy"
            print(f"  t={r.state.t:3d}  {side} {labels[i]} #{i} falls")
        prev[i] = u.health

out = terminal_outcome(r.state)
winner = "allies" if out.winner == 0 else "enemies"
print(f"\n{winner} win by {out.reason} after {out.episode_length} steps")
print(f"surviving health: allies {out.ally_health_ratio:.2f}, "
      f"enemies {out.enemy_health_ratio:.2f}")
