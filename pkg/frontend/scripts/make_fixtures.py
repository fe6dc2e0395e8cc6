#!/usr/bin/env python3
"""Dump engine ground truth into tests/fixtures/.

Everything the TypeScript tests compare against comes from here: the
canonical bytes of catalog and randomly generated documents, float
formatting cases, the unit preset table, view-wedge verdicts on sampled
boundary points, and the expected bytes of the document the authoring
test builds through editor operations.

Run from the frontend directory (or anywhere): paths resolve relative to
this file.  Requires the engine package to be installed.
"""
from __future__ import annotations

import json
import math
import struct
from dataclasses import asdict
from pathlib import Path

import numpy as np

from skirmish import (
    FieldConfig,
    PhysicsParams,
    ScenarioConfig,
    UnitPlacement,
    UnitSpec,
    Zone,
    catalog,
    load_catalog_scenario,
    random_scenario,
    save_scenario,
    validate_scenario,
)
from skirmish.core import CONTROLLERS, HEURISTIC_TIERS, UNIT_PRESETS, ZONE_TYPES
from skirmish.perception import in_fov
from skirmish.core import UnitState

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"


def dump(name: str, payload) -> None:
    path = FIXTURES / name
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=1, sort_keys=True), encoding="utf-8")
    print(f"wrote {path.relative_to(FIXTURES.parent.parent)}")


def bits(x: float) -> str:
    return struct.pack(">d", x).hex()


def float_cases() -> list:
    values = [
        0.0, -0.0, 1.0, -1.0, 0.5, 0.1, 0.2, 0.30000000000000004, 2.0 / 3.0,
        1.0 / 3.0, math.pi, 2.0 * math.pi / 3.0, 345.0, 14.0, 40.0, 685.0,
        1e15, 1e16, 1e17, -1e16, 9999999999999998.0, 1.0000000000000002e16,
        1e-4, 1e-5, 1.5e-5, -1e-4, -1e-5, 0.0001, 0.00001234,
        5e-324, 2.2250738585072014e-308, 1.7976931348623157e308,
        float(2**53), float(2**53 + 2), 123.456, -0.125, 1e21, 1e-300,
        6.103515625e-05, 0.0078125, 65536.0, 4.9406564584124654e-324,
    ]
    rng = np.random.default_rng(0xF10A7)
    values.extend(float(v) for v in rng.uniform(-1000.0, 1000.0, size=400))
    mant = rng.uniform(1.0, 10.0, size=400)
    expo = rng.integers(-320, 308, size=400)
    sign = rng.choice([-1.0, 1.0], size=400)
    for m, e, s in zip(mant, expo, sign):
        v = float(s * m * 10.0 ** float(e))
        if math.isfinite(v):
            values.append(v)
    raw = rng.integers(0, 2**64, size=800, dtype=np.uint64)
    for r in raw:
        v = struct.unpack(">d", struct.pack(">Q", int(r)))[0]
        if math.isfinite(v):
            values.append(v)
    return [{"bits": bits(v), "want": repr(v)} for v in values]


def preset_table() -> dict:
    return {
        "presets": {name: asdict(spec) for name, spec in UNIT_PRESETS.items()},
        "tiers": {name: asdict(p) for name, p in HEURISTIC_TIERS.items()},
        "zone_types": list(ZONE_TYPES),
        "controllers": list(CONTROLLERS),
    }


def catalog_docs() -> dict:
    return {name: save_scenario(load_catalog_scenario(name)) for name in catalog()}


def random_docs() -> list:
    rng = np.random.default_rng(20260822)
    docs = [save_scenario(random_scenario(rng)) for _ in range(50)]

    # Hand-built corner cases: explicit specs, mixed-type overrides,
    # characters that need escaping, non-default physics.
    spec_unit = ScenarioConfig(
        name='café ω "edge" \\ tab\there \U0001f5e1',
        units=[
            UnitPlacement(
                0, (3.5, 4.25), 11.25,
                spec=UnitSpec(
                    max_health=123.45600000000002,
                    body_radius=0.30000000000000004,
                    body_mass=2.5,
                    speed=1e-4,
                    attack_damage=-7.0,
                    attack_range=1e16,
                    attack_cooldown=0.1,
                    sight_angle=2.0 * math.pi / 3.0,
                    sight_range=20.0,
                    space_occupied=4,
                    kinematic=True,
                ),
            ),
            UnitPlacement(
                1, (36.0, 36.0), 180.0, "king",
                overrides={
                    "kinematic": True,
                    "space_occupied": 2,
                    "attack_damage": -7.5,
                    "max_health": 333.33333333333331,
                },
            ),
        ],
        physics=PhysicsParams(dt=0.05, enable_noop=True),
        field=FieldConfig(width=41.5, height=39.0, margin=1.25),
        max_steps=1,
        zones=[Zone("swamp", (20.0, 20.0), (6.5, 0.125), 0.2)],
    )
    docs.append(save_scenario(spec_unit))
    return docs


def fov_samples() -> list:
    """100 verdicts on points a hair either side of the wedge boundary.

    The offsets are 1e-3 relative, far above float noise but tight enough
    that only matching geometry classifies all of them correctly.
    """
    rng = np.random.default_rng(0xF07)
    out = []

    def observer(width_cap: float) -> UnitState:
        spec = UnitSpec(
            max_health=100.0, body_radius=1.0, body_mass=1.0, speed=1.0,
            attack_damage=1.0, attack_range=1.0, attack_cooldown=1.0,
            sight_angle=float(rng.uniform(0.3, width_cap)),
            sight_range=float(rng.uniform(3.0, 15.0)),
        )
        return UnitState(
            spec=spec, team=0,
            position=rng.uniform(5.0, 35.0, size=2),
            heading=float(rng.uniform(0.0, 2.0 * math.pi)),
            velocity=np.zeros(2), health=100.0,
        )

    for case in range(99):
        kind = case % 5
        # Radial-edge cases avoid near-full fans, where the outside band
        # wraps around behind the observer.
        obs = observer(6.0 if kind in (2, 3) else 2.0 * math.pi)
        half = obs.spec.sight_angle / 2.0
        r = obs.spec.sight_range
        if kind == 0:
            ang = obs.heading + float(rng.uniform(-0.9, 0.9)) * half
            dist = r * (1.0 - 1e-3)
        elif kind == 1:
            ang = obs.heading + float(rng.uniform(-0.9, 0.9)) * half
            dist = r * (1.0 + 1e-3)
        elif kind == 2:
            side = 1.0 if rng.uniform() < 0.5 else -1.0
            ang = obs.heading + side * half * (1.0 - 1e-3)
            dist = r * float(rng.uniform(0.1, 0.9))
        elif kind == 3:
            side = 1.0 if rng.uniform() < 0.5 else -1.0
            ang = obs.heading + side * half * (1.0 + 1e-3)
            dist = r * float(rng.uniform(0.1, 0.9))
        else:
            ang = obs.heading + float(rng.uniform(-0.5, 0.5)) * half
            dist = r * (1e-3 if rng.uniform() < 0.5 else 2.0 + float(rng.uniform()))
        point = obs.position + dist * np.array([math.cos(ang), math.sin(ang)])
        out.append({
            "position": [float(obs.position[0]), float(obs.position[1])],
            "heading": float(obs.heading),
            "sight_angle": float(obs.spec.sight_angle),
            "sight_range": float(obs.spec.sight_range),
            "point": [float(point[0]), float(point[1])],
            "inside": bool(in_fov(obs, point)),
        })

    apex = observer(2.0 * math.pi)
    out.append({
        "position": [float(apex.position[0]), float(apex.position[1])],
        "heading": float(apex.heading),
        "sight_angle": float(apex.spec.sight_angle),
        "sight_range": float(apex.spec.sight_range),
        "point": [float(apex.position[0]), float(apex.position[1])],
        "inside": bool(in_fov(apex, apex.position)),
    })
    assert len(out) == 100
    return out


def authored_doc() -> dict:
    """The document tests/document.test.ts builds through editor ops."""
    cfg = ScenarioConfig(
        name="editor_authored_duel",
        units=[
            UnitPlacement(0, (10.0, 10.0), 0.0, "farmer"),
            UnitPlacement(0, (31.0, 21.0), 0.0, "mammoth"),
            UnitPlacement(1, (24.0, 24.0), 345.0, "assassin"),
            UnitPlacement(1, (34.0, 10.0), 30.0, "king",
                          overrides={"max_health": 800.0}),
        ],
        field=FieldConfig(40.0, 40.0, 2.0),
        zones=[
            Zone("bush", (7.0, 6.0), (2.0, 1.0), 0.0),
            Zone("lava", (23.0, 27.0), (3.0, 3.0), 6.0),
            Zone("swamp", (14.5, 31.5), (2.5, 1.5), 0.5),
        ],
        max_units=4,
        max_zones=3,
    )
    report = validate_scenario(cfg)
    assert not report.violations, report.violations
    return {"name": cfg.name, "text": save_scenario(cfg)}


def main() -> None:
    dump("floats.json", float_cases())
    dump("presets.json", preset_table())
    dump("catalog.json", catalog_docs())
    dump("random_docs.json", random_docs())
    dump("fov_samples.json", fov_samples())
    dump("authored.json", authored_doc())


if __name__ == "__main__":
    main()
