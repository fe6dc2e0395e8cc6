"""Author the shipped scenario data files.

Run from the repo root after editing layouts:

    python3 tools/build_catalog.py

Every file is written through the canonical serializer so that loading and
re-saving any shipped scenario is byte stable.
"""
from __future__ import annotations

import json
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from skirmish.core import (
    FieldConfig,
    ScenarioConfig,
    UnitPlacement,
    Zone,
    validate_scenario,
)
from skirmish.scenario import compose_scenario, save_scenario

DATA = pathlib.Path(__file__).resolve().parents[1] / "src" / "skirmish" / "data"

# Ranged presets see 20 by default; these challenges need them to use their
# full attack range, since a target must be visible to be attackable.
SIGHT = {"cannon": 45.0, "archer": 32.0, "deadeye": 30.0}


def ally(preset, x, y, heading=0.0, **overrides):
    return UnitPlacement(0, (x, y), heading, preset=preset,
                         overrides=tuple(sorted(overrides.items())))


def enemy(preset, x, y, heading=180.0, **overrides):
    return UnitPlacement(1, (x, y), heading, preset=preset,
                         overrides=tuple(sorted(overrides.items())))


def challenges() -> list[ScenarioConfig]:
    out = []

    # Two lava strips frame a middle corridor; both teams fight through it.
    out.append(ScenarioConfig(
        name="crossfire",
        units=[
            ally("farmer", 7.0, 17.0),
            ally("farmer", 7.0, 23.0),
            ally("archer", 4.0, 20.0, sight_range=SIGHT["archer"]),
            enemy("farmer", 33.0, 17.0),
            enemy("farmer", 33.0, 23.0),
            enemy("archer", 36.0, 20.0, sight_range=SIGHT["archer"]),
        ],
        zones=[
            Zone("lava", (20.0, 12.5), (13.0, 2.5), 5.0),
            Zone("lava", (20.0, 27.5), (13.0, 2.5), 5.0),
        ],
    ))

    # Short-range allies must close on kiting ranged enemies.
    out.append(ScenarioConfig(
        name="vsrangers",
        units=[
            ally("farmer", 6.0, 16.0),
            ally("farmer", 6.0, 24.0),
            ally("assassin", 4.0, 20.0),
            enemy("archer", 34.0, 15.0, sight_range=SIGHT["archer"]),
            enemy("archer", 34.0, 25.0, sight_range=SIGHT["archer"]),
            enemy("deadeye", 36.0, 20.0, sight_range=SIGHT["deadeye"]),
        ],
    ))

    # Two concealed cannons against one fortified king.
    out.append(ScenarioConfig(
        name="ambush",
        units=[
            ally("cannon", 8.0, 13.0, sight_range=SIGHT["cannon"]),
            ally("cannon", 8.0, 27.0, sight_range=SIGHT["cannon"]),
            enemy("king", 34.0, 20.0, max_health=800.0),
        ],
        zones=[
            Zone("bush", (8.0, 13.0), (3.5, 3.5), 0.0),
            Zone("bush", (8.0, 27.0), (3.5, 3.5), 0.0),
        ],
    ))

    # A king propped up by two healers; focus fire decides it.
    out.append(ScenarioConfig(
        name="superking",
        units=[
            ally("assassin", 6.0, 16.0),
            ally("assassin", 6.0, 24.0),
            ally("farmer", 4.0, 18.0),
            ally("farmer", 4.0, 22.0),
            enemy("king", 31.0, 20.0),
            enemy("healer", 35.0, 16.0),
            enemy("healer", 35.0, 24.0),
        ],
    ))

    # Back-to-back start, views pointing four ways.
    out.append(ScenarioConfig(
        name="clover",
        units=[
            ally("farmer", 21.5, 20.0, 0.0),
            ally("farmer", 20.0, 21.5, 90.0),
            ally("farmer", 18.5, 20.0, 180.0),
            ally("farmer", 20.0, 18.5, 270.0),
            enemy("assassin", 5.0, 5.0, 45.0),
            enemy("assassin", 35.0, 5.0, 135.0),
            enemy("assassin", 35.0, 35.0, 225.0),
            enemy("assassin", 5.0, 35.0, 315.0),
        ],
    ))

    # Swamp blocks the middle; bush lanes reward going around.
    out.append(ScenarioConfig(
        name="bypass",
        units=[
            ally("assassin", 5.0, 16.0),
            ally("assassin", 5.0, 24.0),
            ally("archer", 3.0, 20.0, sight_range=SIGHT["archer"]),
            enemy("king", 34.0, 20.0),
            enemy("paladin", 31.0, 20.0),
        ],
        zones=[
            Zone("swamp", (20.0, 20.0), (7.0, 7.0), 0.35),
            Zone("bush", (20.0, 5.0), (6.0, 2.5), 0.0),
            Zone("bush", (20.0, 35.0), (6.0, 2.5), 0.0),
        ],
    ))

    # A thin line of allies looking alternate ways; threats come in oblique.
    out.append(ScenarioConfig(
        name="ribbon",
        units=[
            ally("farmer", 20.0, 13.0, 0.0),
            ally("farmer", 20.0, 17.5, 180.0),
            ally("farmer", 20.0, 22.5, 0.0),
            ally("farmer", 20.0, 27.0, 180.0),
            enemy("assassin", 6.0, 6.0, 45.0),
            enemy("assassin", 34.0, 6.0, 135.0),
            enemy("assassin", 6.0, 34.0, 315.0),
            enemy("assassin", 34.0, 34.0, 225.0),
        ],
    ))

    # Four kings in a loose grid; only focused damage brings one down.
    out.append(ScenarioConfig(
        name="grid",
        units=[
            ally("assassin", 4.0, 14.0),
            ally("assassin", 4.0, 20.0),
            ally("assassin", 4.0, 26.0),
            ally("archer", 2.0, 20.0, sight_range=SIGHT["archer"]),
            enemy("king", 15.0, 15.0),
            enemy("king", 25.0, 15.0),
            enemy("king", 15.0, 25.0),
            enemy("king", 25.0, 25.0),
        ],
    ))

    # Narrow corridor guarded end to end by a fixed cannon.
    out.append(ScenarioConfig(
        name="pingpong",
        units=[
            ally("farmer", 3.0, 3.0),
            ally("farmer", 3.0, 7.0),
            enemy("cannon", 36.0, 5.0, kinematic=True, speed=0.0,
                  sight_range=SIGHT["cannon"]),
        ],
        field=FieldConfig(width=40.0, height=10.0, margin=2.0),
        max_steps=600,
    ))

    # Open ground cannon; its blind side is the way in.
    out.append(ScenarioConfig(
        name="encirclement",
        units=[
            ally("farmer", 4.0, 4.0),
            ally("farmer", 4.0, 36.0),
            enemy("cannon", 20.0, 20.0, kinematic=True, speed=0.0,
                  sight_range=SIGHT["cannon"]),
        ],
        max_steps=600,
    ))
    return out


UNIT_SCENARIOS = [
    "1F1M3A1Hvs2F1S1K1A1H",
    "2F1M2Avs2S1K",
    "4F1S1K2A1Pvs2M1C1P",
    "5F1S1A1Dvs7F1S1D1H",
]

# Zone layouts on the 40x40 reference field; centers scale with field size.
ZONE_FRAGMENTS = {
    "2L2B2S": [
        Zone("lava", (20.0, 8.0), (5.0, 2.5), 5.0),
        Zone("lava", (20.0, 32.0), (5.0, 2.5), 5.0),
        Zone("bush", (12.0, 20.0), (3.5, 3.5), 0.0),
        Zone("bush", (28.0, 20.0), (3.5, 3.5), 0.0),
        Zone("swamp", (20.0, 15.0), (4.0, 3.0), 0.4),
        Zone("swamp", (20.0, 25.0), (4.0, 3.0), 0.4),
    ],
    "2L2B2S-1": [
        Zone("lava", (10.0, 20.0), (2.5, 6.0), 6.0),
        Zone("lava", (30.0, 20.0), (2.5, 6.0), 6.0),
        Zone("bush", (20.0, 8.0), (4.0, 3.0), 0.0),
        Zone("bush", (20.0, 32.0), (4.0, 3.0), 0.0),
        Zone("swamp", (14.0, 30.0), (3.5, 3.5), 0.5),
        Zone("swamp", (26.0, 10.0), (3.5, 3.5), 0.5),
    ],
    "2L2B2S-2": [
        Zone("lava", (14.0, 14.0), (3.0, 3.0), 4.0),
        Zone("lava", (26.0, 26.0), (3.0, 3.0), 4.0),
        Zone("bush", (26.0, 14.0), (3.0, 3.0), 0.0),
        Zone("bush", (14.0, 26.0), (3.0, 3.0), 0.0),
        Zone("swamp", (20.0, 20.0), (5.0, 3.0), 0.3),
        Zone("swamp", (6.0, 34.0), (3.0, 3.0), 0.6),
    ],
}


def main() -> None:
    DATA.mkdir(parents=True, exist_ok=True)
    written = []

    for cfg in challenges():
        report = validate_scenario(cfg)
        if not report.ok:
            raise SystemExit(f"{cfg.name}: {report.violations}")
        path = DATA / f"{cfg.name}.json"
        path.write_text(save_scenario(cfg))
        written.append(path.name)

    for name in UNIT_SCENARIOS:
        cfg = compose_scenario(name)
        report = validate_scenario(cfg)
        if not report.ok:
            raise SystemExit(f"{name}: {report.violations}")
        path = DATA / f"{name}.json"
        path.write_text(save_scenario(cfg))
        written.append(path.name)

    for name, zones in ZONE_FRAGMENTS.items():
        doc = {
            "version": 1,
            "name": name,
            "zones": [
                {
                    "type": z.type,
                    "center": [float(z.center[0]), float(z.center[1])],
                    "semi_axes": [float(z.semi_axes[0]), float(z.semi_axes[1])],
                    "effect": float(z.effect),
                }
                for z in zones
            ],
        }
        path = DATA / f"zones_{name}.json"
        path.write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n")
        written.append(path.name)

    for name in sorted(written):
        print("wrote", name)


if __name__ == "__main__":
    main()
