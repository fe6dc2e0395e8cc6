"""
Generating and mutating levels
==============================

A level generator needs three things: a base scenario, ranges describing
which parameters are open, and mutation operators for local search.
"""

import tempfile
from pathlib import Path

import numpy as np

from skirmish import (
    default_level_spec,
    load_catalog_scenario,
    mutate_level,
    sample_level,
    save_scenario_file,
    validate_or_raise,
)

base = load_catalog_scenario("crossfire")
spec = default_level_spec(base)
print(f"base '{base.name}': {len(base.units)} units, {len(base.zones)} zones")
print(f"open categories: {sorted(spec.categories)}")

g = np.random.default_rng(42)

# uniform sampling redraws every open parameter inside its range
out_dir = Path(tempfile.mkdtemp(prefix="levels-"))
for k in range(3):
    level = validate_or_raise(sample_level(spec, g))
    path = out_dir / f"variant-{k}.json"
    save_scenario_file(level, path)
    print(f"  sampled {path.name}")
print(f"wrote {out_dir}")

# the three mutation operators, chained: noise on everything, then a zone
# reshape, then a zone retype
level = base
for op in ("perturb", "swap_axes", "retype"):
    before, level = level, validate_or_raise(mutate_level(level, op, g))
    changed = [
        f"zone[{i}] {bz.type}{bz.semi_axes} -> {z.type}{z.semi_axes}"
        for i, (bz, z) in enumerate(zip(before.zones, level.zones))
        if (bz.type, bz.semi_axes) != (z.type, z.semi_axes)
    ]
    print(f"  {op:10s} {'; '.join(changed) if changed else 'unit/team noise only'}")

# every product of sampling or mutation is a valid, saveable scenario:
# that invariant is what makes unsupervised curricula safe to automate
