"""Shared builders for the test suite."""
from __future__ import annotations

import numpy as np
import pytest

from skirmish.core import (
    FieldConfig,
    HEURISTIC_TIERS,
    ScenarioConfig,
    TeamConfig,
    UNIT_PRESETS,
    UnitPlacement,
    UnitSpec,
    UnitState,
    Zone,
)


def make_unit(
    x=0.0,
    y=0.0,
    heading=0.0,
    team=0,
    preset="farmer",
    health=None,
    velocity=(0.0, 0.0),
    alive=True,
    active=True,
    cooldown_timer=0.0,
    reveal_timer=0.0,
    **spec_overrides,
):
    spec = UNIT_PRESETS[preset]
    if spec_overrides:
        import dataclasses

        spec = dataclasses.replace(spec, **spec_overrides)
    u = UnitState(
        spec=spec,
        team=team,
        position=np.array([x, y], dtype=np.float64),
        heading=float(heading),
        velocity=np.array(velocity, dtype=np.float64),
        health=spec.max_health if health is None else float(health),
        cooldown_timer=float(cooldown_timer),
        reveal_timer=float(reveal_timer),
        alive=alive,
        active=active,
    )
    return u


def duel_config(
    ally="farmer",
    enemy="farmer",
    gap=10.0,
    zones=(),
    enemy_controller="heuristic",
    tier="medium",
    max_steps=400,
    **kwargs,
):
    """Two units facing each other across the middle of a 40x40 field."""
    teams = (
        TeamConfig(0, "external"),
        TeamConfig(1, enemy_controller,
                   HEURISTIC_TIERS[tier] if enemy_controller == "heuristic" else None),
    )
    cx = 20.0
    return ScenarioConfig(
        name=f"duel-{ally}-{enemy}",
        units=[
            UnitPlacement(0, (cx - gap / 2, 20.0), 0.0, preset=ally),
            UnitPlacement(1, (cx + gap / 2, 20.0), 180.0, preset=enemy),
        ],
        teams=teams,
        zones=list(zones),
        max_steps=max_steps,
        **kwargs,
    )


def line_config(n_per_side=3, preset="farmer", enemy_controller="heuristic",
                tier="medium", zones=(), max_steps=400):
    """n vs n mirrored columns of one preset."""
    units = []
    for k in range(n_per_side):
        y = 20.0 + (k - (n_per_side - 1) / 2.0) * 4.0
        units.append(UnitPlacement(0, (12.0, y), 0.0, preset=preset))
    for k in range(n_per_side):
        y = 20.0 + (k - (n_per_side - 1) / 2.0) * 4.0
        units.append(UnitPlacement(1, (28.0, y), 180.0, preset=preset))
    teams = (
        TeamConfig(0, "external"),
        TeamConfig(1, enemy_controller,
                   HEURISTIC_TIERS[tier] if enemy_controller == "heuristic" else None),
    )
    return ScenarioConfig(
        name=f"line-{n_per_side}{preset}",
        units=units,
        teams=teams,
        zones=list(zones),
        max_steps=max_steps,
    )


@pytest.fixture
def rng():
    return np.random.default_rng(0xA11CE)
