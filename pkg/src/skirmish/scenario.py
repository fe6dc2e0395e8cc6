"""Scenario documents, the built-in catalog, level sampling and mutation.

Documents are JSON with sorted keys, two-space indent, and shortest
round-trip float literals; saving any loaded document reproduces it byte
for byte.  Angles live in the file as degrees.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path

import numpy as np

from .core import (
    Composition,
    FieldConfig,
    HEURISTIC_TIERS,
    HeuristicParams,
    PhysicsParams,
    ScenarioConfig,
    ScenarioFormatError,
    TeamConfig,
    UNIT_CODES,
    UNIT_PRESETS,
    UnitPlacement,
    UnitSpec,
    Zone,
    ZONE_CODES,
    ZONE_TYPES,
    format_composition_name,
    parse_composition_name,
    validate_scenario,
)

SCHEMA_VERSION = 1

# Shared parameter ranges for sampling, procedural zones, and mutation.
LAVA_DAMAGE_RANGE = (2.0, 10.0)
SWAMP_MULT_RANGE = (0.2, 0.8)
ZONE_AXIS_RANGE = (1.5, 6.0)

_SPEC_KEYS = (
    "max_health",
    "body_radius",
    "body_mass",
    "speed",
    "attack_damage",
    "attack_range",
    "attack_cooldown",
    "sight_angle",
    "sight_range",
    "space_occupied",
    "kinematic",
)


def config_to_dict(config: ScenarioConfig) -> dict:
    units = []
    for u in config.units:
        entry: dict = {
            "team": int(u.team),
            "position": [float(u.position[0]), float(u.position[1])],
            "heading_deg": float(u.heading_deg),
        }
        if u.preset is not None:
            entry["preset"] = u.preset
            if u.overrides:
                entry["overrides"] = {
                    k: (v if isinstance(v, (bool, int)) else float(v))
                    for k, v in u.overrides
                }
        else:
            sp = u.spec
            entry["spec"] = {
                "max_health": float(sp.max_health),
                "body_radius": float(sp.body_radius),
                "body_mass": float(sp.body_mass),
                "speed": float(sp.speed),
                "attack_damage": float(sp.attack_damage),
                "attack_range": float(sp.attack_range),
                "attack_cooldown": float(sp.attack_cooldown),
                "sight_angle": float(sp.sight_angle),
                "sight_range": float(sp.sight_range),
                "space_occupied": int(sp.space_occupied),
                "kinematic": bool(sp.kinematic),
            }
        units.append(entry)

    teams = []
    for t in sorted(config.teams, key=lambda t: t.id):
        entry = {"id": int(t.id), "controller": t.controller}
        if t.heuristic is not None:
            entry["heuristic"] = {
                "epsilon": float(t.heuristic.epsilon),
                "aggressive_threshold": float(t.heuristic.aggressive_threshold),
            }
        teams.append(entry)

    phys = config.physics
    return {
        "version": SCHEMA_VERSION,
        "name": config.name,
        "field": {
            "width": float(config.field.width),
            "height": float(config.field.height),
            "margin": float(config.field.margin),
        },
        "physics": {
            "dt": float(phys.dt),
            "restitution": float(phys.restitution),
            "penetration_slop": float(phys.penetration_slop),
            "correction_percent": float(phys.correction_percent),
            "rotation_step_deg": float(phys.rotation_step_deg),
            "boundary_damage_coeff": float(phys.boundary_damage_coeff),
            "reveal_duration": float(phys.reveal_duration),
            "enable_noop": bool(phys.enable_noop),
        },
        "max_steps": int(config.max_steps),
        "max_units": int(config.max_units),
        "max_zones": int(config.max_zones),
        "teams": teams,
        "units": units,
        "zones": [
            {
                "type": z.type,
                "center": [float(z.center[0]), float(z.center[1])],
                "semi_axes": [float(z.semi_axes[0]), float(z.semi_axes[1])],
                "effect": float(z.effect),
            }
            for z in config.zones
        ],
    }


def save_scenario(config: ScenarioConfig) -> str:
    """Canonical document text, newline terminated."""
    return json.dumps(config_to_dict(config), sort_keys=True, indent=2) + "\n"


def _fail(path: str, msg: str):
    raise ScenarioFormatError(f"{path}: {msg}")


def _obj(v, path: str, allowed: set[str]) -> dict:
    if not isinstance(v, dict):
        _fail(path, f"expected object, got {type(v).__name__}")
    unknown = set(v) - allowed
    if unknown:
        _fail(path, f"unknown keys {sorted(unknown)}")
    return v


def _num(v, path: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        _fail(path, f"expected number, got {type(v).__name__}")
    return float(v)


def _int(v, path: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        _fail(path, f"expected integer, got {type(v).__name__}")
    return v


def _pair(v, path: str) -> tuple[float, float]:
    if not isinstance(v, list) or len(v) != 2:
        _fail(path, "expected [x, y]")
    return (_num(v[0], f"{path}[0]"), _num(v[1], f"{path}[1]"))


def _load_spec(v, path: str) -> UnitSpec:
    obj = _obj(v, path, set(_SPEC_KEYS))
    kwargs = {}
    for key in _SPEC_KEYS:
        if key not in obj:
            _fail(path, f"missing key {key!r}")
        if key == "space_occupied":
            kwargs[key] = _int(obj[key], f"{path}.{key}")
        elif key == "kinematic":
            if not isinstance(obj[key], bool):
                _fail(f"{path}.{key}", "expected boolean")
            kwargs[key] = obj[key]
        else:
            kwargs[key] = _num(obj[key], f"{path}.{key}")
    return UnitSpec(**kwargs)


def dict_to_config(data: dict) -> ScenarioConfig:
    notes: list[str] = []
    top_keys = {
        "version", "name", "field", "physics", "max_steps", "max_units",
        "max_zones", "teams", "units", "zones",
    }
    root = _obj(data, "$", top_keys)
    version = root.get("version")
    if version is None:
        notes.append("version missing, assumed 1")
    elif _int(version, "$.version") != SCHEMA_VERSION:
        _fail("$.version", f"unsupported version {version}")
    if "name" not in root or not isinstance(root["name"], str):
        _fail("$.name", "required string")

    if "field" in root:
        f = _obj(root["field"], "$.field", {"width", "height", "margin"})
        field = FieldConfig(
            width=_num(f.get("width", 40.0), "$.field.width"),
            height=_num(f.get("height", 40.0), "$.field.height"),
            margin=_num(f.get("margin", 2.0), "$.field.margin"),
        )
    else:
        field = FieldConfig()
        notes.append("field missing, defaults applied")

    if "physics" in root:
        allowed = {
            "dt", "restitution", "penetration_slop", "correction_percent",
            "rotation_step_deg", "boundary_damage_coeff", "reveal_duration",
            "enable_noop",
        }
        p = _obj(root["physics"], "$.physics", allowed)
        defaults = PhysicsParams()
        kwargs = {}
        for key in allowed:
            if key not in p:
                kwargs[key] = getattr(defaults, key)
                notes.append(f"physics.{key} missing, default applied")
            elif key == "enable_noop":
                if not isinstance(p[key], bool):
                    _fail("$.physics.enable_noop", "expected boolean")
                kwargs[key] = p[key]
            else:
                kwargs[key] = _num(p[key], f"$.physics.{key}")
        physics = PhysicsParams(**kwargs)
    else:
        physics = PhysicsParams()
        notes.append("physics missing, defaults applied")

    if "teams" in root:
        if not isinstance(root["teams"], list):
            _fail("$.teams", "expected array")
        teams = []
        for k, tv in enumerate(root["teams"]):
            path = f"$.teams[{k}]"
            t = _obj(tv, path, {"id", "controller", "heuristic"})
            tid = _int(t.get("id", k), f"{path}.id")
            controller = t.get("controller", "external")
            if not isinstance(controller, str):
                _fail(f"{path}.controller", "expected string")
            heuristic = None
            if "heuristic" in t:
                h = _obj(
                    t["heuristic"], f"{path}.heuristic",
                    {"epsilon", "aggressive_threshold"},
                )
                heuristic = HeuristicParams(
                    epsilon=_num(h.get("epsilon", 0.2), f"{path}.heuristic.epsilon"),
                    aggressive_threshold=_num(
                        h.get("aggressive_threshold", 0.3),
                        f"{path}.heuristic.aggressive_threshold",
                    ),
                )
            elif controller == "heuristic":
                heuristic = HEURISTIC_TIERS["medium"]
                notes.append(f"teams[{k}].heuristic missing, medium tier applied")
            teams.append(TeamConfig(id=tid, controller=controller, heuristic=heuristic))
        teams_t = tuple(teams)
    else:
        teams_t = (
            TeamConfig(0, "external"),
            TeamConfig(1, "heuristic", HEURISTIC_TIERS["medium"]),
        )
        notes.append("teams missing, defaults applied")
    if len(teams_t) != 2:
        _fail("$.teams", f"expected exactly 2 teams, got {len(teams_t)}")

    if "units" not in root or not isinstance(root["units"], list):
        _fail("$.units", "required array")
    units = []
    for k, uv in enumerate(root["units"]):
        path = f"$.units[{k}]"
        u = _obj(
            uv, path,
            {"team", "position", "heading_deg", "preset", "overrides", "spec"},
        )
        if "position" not in u:
            _fail(f"{path}.position", "required")
        heading = u.get("heading_deg")
        if heading is None:
            heading = 0.0
            notes.append(f"units[{k}].heading_deg missing, 0 applied")
        else:
            heading = _num(heading, f"{path}.heading_deg")
        preset = u.get("preset")
        spec = None
        overrides: tuple = ()
        if preset is not None:
            if not isinstance(preset, str):
                _fail(f"{path}.preset", "expected string")
            if "spec" in u:
                _fail(path, "preset and spec are mutually exclusive")
            raw = u.get("overrides", {})
            if not isinstance(raw, dict):
                _fail(f"{path}.overrides", "expected object")
            items = []
            for key in sorted(raw):
                val = raw[key]
                if key == "kinematic":
                    if not isinstance(val, bool):
                        _fail(f"{path}.overrides.kinematic", "expected boolean")
                    items.append((key, val))
                elif key == "space_occupied":
                    items.append((key, _int(val, f"{path}.overrides.{key}")))
                else:
                    items.append((key, _num(val, f"{path}.overrides.{key}")))
            overrides = tuple(items)
        elif "spec" in u:
            spec = _load_spec(u["spec"], f"{path}.spec")
            if "overrides" in u:
                _fail(f"{path}.overrides", "not allowed with spec")
        else:
            _fail(path, "needs preset or spec")
        units.append(
            UnitPlacement(
                team=_int(u.get("team", 0), f"{path}.team"),
                position=_pair(u["position"], f"{path}.position"),
                heading_deg=heading,
                preset=preset,
                spec=spec,
                overrides=overrides,
            )
        )

    zones = []
    if "zones" in root:
        if not isinstance(root["zones"], list):
            _fail("$.zones", "expected array")
        for k, zv in enumerate(root["zones"]):
            path = f"$.zones[{k}]"
            z = _obj(zv, path, {"type", "center", "semi_axes", "effect"})
            ztype = z.get("type")
            if not isinstance(ztype, str):
                _fail(f"{path}.type", "required string")
            zones.append(
                Zone(
                    type=ztype,
                    center=_pair(z.get("center", [0, 0]), f"{path}.center"),
                    semi_axes=_pair(z.get("semi_axes", [1, 1]), f"{path}.semi_axes"),
                    effect=_num(z.get("effect", 0.0), f"{path}.effect"),
                )
            )
    else:
        notes.append("zones missing, none applied")

    max_units = root.get("max_units")
    if max_units is None:
        max_units = max(len(units), 1)
        notes.append("max_units missing, derived from units")
    else:
        max_units = _int(max_units, "$.max_units")
    max_zones = root.get("max_zones")
    if max_zones is None:
        max_zones = len(zones)
        notes.append("max_zones missing, derived from zones")
    else:
        max_zones = _int(max_zones, "$.max_zones")

    max_steps = root.get("max_steps")
    if max_steps is None:
        max_steps = 400
        notes.append("max_steps missing, 400 applied")
    else:
        max_steps = _int(max_steps, "$.max_steps")

    return ScenarioConfig(
        name=root["name"],
        units=units,
        field=field,
        physics=physics,
        max_steps=max_steps,
        teams=teams_t,
        zones=zones,
        max_units=max_units,
        max_zones=max_zones,
        load_notes=notes,
    )


def load_scenario(text: str | bytes) -> ScenarioConfig:
    """Parse a scenario document; malformed JSON reports its location."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ScenarioFormatError(
            f"malformed JSON at line {e.lineno}, column {e.colno}: {e.msg}"
        ) from None
    return dict_to_config(data)


def load_scenario_file(path) -> ScenarioConfig:
    with open(path, "rb") as fh:
        return load_scenario(fh.read())


def save_scenario_file(config: ScenarioConfig, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(save_scenario(config))


# -- catalog ---------------------------------------------------------------

_FRAGMENT_PREFIX = "zones_"


def _data_dir():
    return resources.files("skirmish.data")


def catalog() -> list[str]:
    """Names of the shipped ready-to-run scenarios."""
    names = []
    for entry in _data_dir().iterdir():
        if entry.name.endswith(".json") and not entry.name.startswith(_FRAGMENT_PREFIX):
            names.append(entry.name[: -len(".json")])
    return sorted(names)


def zone_fragments() -> list[str]:
    """Names of the shipped zone layouts usable in composed scenarios."""
    names = []
    for entry in _data_dir().iterdir():
        if entry.name.endswith(".json") and entry.name.startswith(_FRAGMENT_PREFIX):
            names.append(entry.name[len(_FRAGMENT_PREFIX) : -len(".json")])
    return sorted(names)


def load_catalog_scenario(name: str) -> ScenarioConfig:
    path = _data_dir() / f"{name}.json"
    if not path.is_file():
        raise KeyError(f"unknown catalog scenario {name!r}")
    return load_scenario(path.read_bytes())


def _load_fragment(name: str) -> list[Zone] | None:
    path = _data_dir() / f"{_FRAGMENT_PREFIX}{name}.json"
    if not path.is_file():
        return None
    data = json.loads(path.read_text())
    return [
        Zone(z["type"], tuple(z["center"]), tuple(z["semi_axes"]), z["effect"])
        for z in data["zones"]
    ]


def _procedural_zones(
    comp: Composition, field: FieldConfig, zone_name: str
) -> list[Zone]:
    """Deterministic zone layout for composed names without a shipped file."""
    seed = int(np.uint64(abs(hash(zone_name)) & 0xFFFFFFFF))
    gen = np.random.default_rng(seed)
    zones = []
    for code in ZONE_CODES:
        for _ in range(comp.zone_counts.get(code, 0)):
            ztype = ZONE_CODES[code]
            cx = gen.uniform(field.margin, field.width - field.margin)
            cy = gen.uniform(field.margin, field.height - field.margin)
            axes = gen.uniform(*ZONE_AXIS_RANGE, size=2)
            if ztype == "lava":
                effect = gen.uniform(*LAVA_DAMAGE_RANGE)
            elif ztype == "swamp":
                effect = gen.uniform(*SWAMP_MULT_RANGE)
            else:
                effect = 0.0
            zones.append(Zone(ztype, (cx, cy), (axes[0], axes[1]), effect))
    return zones


def formation_units(comp: Composition) -> tuple[list[UnitPlacement], FieldConfig]:
    """Two facing columns, allies left, stacked by body size."""

    def expand(counts: dict[str, int]) -> list[str]:
        out = []
        for code in UNIT_CODES:
            out.extend([UNIT_CODES[code]] * counts.get(code, 0))
        return out

    margin = 2.0
    sides = [expand(comp.ally), expand(comp.enemy)]
    heights = []
    for names in sides:
        slots = [max(2.0 * UNIT_PRESETS[n].body_radius + 1.0, 3.0) for n in names]
        heights.append(slots)
    need = max(sum(h) for h in heights)
    field = FieldConfig(
        width=40.0, height=max(40.0, math.ceil(need + 2 * margin)), margin=margin
    )
    units = []
    for team, (names, slots) in enumerate(zip(sides, heights)):
        x = field.width * (0.25 if team == 0 else 0.75)
        heading = 0.0 if team == 0 else 180.0
        cursor = (field.height - sum(slots)) / 2.0
        for name, slot in zip(names, slots):
            units.append(
                UnitPlacement(
                    team=team,
                    position=(x, cursor + slot / 2.0),
                    heading_deg=heading,
                    preset=name,
                )
            )
            cursor += slot
    return units, field


def compose_scenario(name: str | Composition) -> ScenarioConfig:
    """Build a runnable scenario from a composition name."""
    comp = parse_composition_name(name) if isinstance(name, str) else name
    full_name = format_composition_name(comp)
    units, field = formation_units(comp)
    zones: list[Zone] = []
    if comp.zone_counts and any(comp.zone_counts.values()):
        zone_name = "".join(
            f"{comp.zone_counts[c]}{c}"
            for c in ZONE_CODES
            if comp.zone_counts.get(c, 0) > 0
        )
        if comp.variant is not None:
            zone_name += f"-{comp.variant}"
        zones = _load_fragment(zone_name)
        if zones is None:
            zones = _procedural_zones(comp, field, zone_name)
        else:
            sx = field.width / 40.0
            sy = field.height / 40.0
            zones = [
                replace(z, center=(z.center[0] * sx, z.center[1] * sy)) for z in zones
            ]
    elif comp.variant is not None:
        raise ScenarioFormatError(f"variant {comp.variant!r} needs a zone suffix")
    return ScenarioConfig(
        name=full_name,
        units=units,
        field=field,
        zones=zones,
        max_units=len(units),
        max_zones=len(zones),
    )


def resolve_scenario(name: str) -> ScenarioConfig:
    """Catalog name, composition name, or path to a scenario file."""
    try:
        return load_catalog_scenario(name)
    except KeyError:
        pass
    return compose_scenario(name)


# -- sampling and mutation -------------------------------------------------

UNIT_FREE_FIELDS = ("attack_damage", "max_health", "speed")

# Invariant floors/ceilings the sampler may never leave, whatever ranges a
# caller asks for.
_MIN_HEALTH = 1.0
_MIN_AXIS = 0.1
_MIN_EFFECT = 0.01


def _clip_range(lo: float, hi: float, floor: float | None, ceil: float | None):
    if lo > hi:
        raise ValueError(f"range ({lo}, {hi}) has min > max")
    if floor is not None:
        lo, hi = max(lo, floor), max(hi, floor)
    if ceil is not None:
        lo, hi = min(lo, ceil), min(hi, ceil)
    return (float(lo), float(hi))


@dataclass(frozen=True)
class LevelGenSpec:
    """Free-parameter ranges around a base scenario.

    Three independent categories can be opened up: unit attributes, zone
    layout, and opponent heuristic coefficients.  A range of None pins the
    parameter to the base value; ranges are clipped at construction so any
    sample or mutation stays valid.
    """

    base: ScenarioConfig
    categories: tuple[str, ...] = ("unit_spec", "zones", "heuristic")
    unit_ranges: tuple[tuple[str, tuple[float, float]], ...] | dict = ()
    zone_types: tuple[str, ...] = ZONE_TYPES
    zone_center_box: tuple[tuple[float, float], tuple[float, float]] | None = None
    zone_axis_range: tuple[float, float] | None = None
    zone_effect_ranges: tuple[tuple[str, tuple[float, float]], ...] | dict = ()
    epsilon_range: tuple[float, float] | None = None
    aggressive_range: tuple[float, float] | None = None

    def __post_init__(self):
        for cat in self.categories:
            if cat not in ("unit_spec", "zones", "heuristic"):
                raise ValueError(f"unknown category {cat!r}")
        ur = dict(self.unit_ranges)
        for name in ur:
            if name not in UNIT_FREE_FIELDS:
                raise ValueError(f"unknown unit range field {name!r}")
        if "max_health" in ur:
            ur["max_health"] = _clip_range(*ur["max_health"], _MIN_HEALTH, None)
        if "speed" in ur:
            ur["speed"] = _clip_range(*ur["speed"], 0.0, None)
        if "attack_damage" in ur:
            ur["attack_damage"] = _clip_range(*ur["attack_damage"], None, None)
        object.__setattr__(
            self, "unit_ranges", tuple(sorted((k, v) for k, v in ur.items()))
        )
        er = dict(self.zone_effect_ranges)
        if "lava" in er:
            er["lava"] = _clip_range(*er["lava"], _MIN_EFFECT, None)
        if "swamp" in er:
            er["swamp"] = _clip_range(*er["swamp"], _MIN_EFFECT, 1.0)
        if "bush" in er:
            raise ValueError("bush zones have no effect range")
        object.__setattr__(
            self, "zone_effect_ranges", tuple(sorted((k, v) for k, v in er.items()))
        )
        if self.zone_axis_range is not None:
            object.__setattr__(
                self, "zone_axis_range",
                _clip_range(*self.zone_axis_range, _MIN_AXIS, None),
            )
        if self.epsilon_range is not None:
            object.__setattr__(
                self, "epsilon_range", _clip_range(*self.epsilon_range, 0.0, 1.0)
            )
        if self.aggressive_range is not None:
            object.__setattr__(
                self, "aggressive_range",
                _clip_range(*self.aggressive_range, 0.0, None),
            )
        for t in self.zone_types:
            if t not in ZONE_TYPES:
                raise ValueError(f"unknown zone type {t!r}")

    def center_box(self):
        if self.zone_center_box is not None:
            return self.zone_center_box
        f = self.base.field
        return (
            (f.margin, f.width - f.margin),
            (f.margin, f.height - f.margin),
        )

    def effect_range(self, ztype: str) -> tuple[float, float] | None:
        for name, rng in self.zone_effect_ranges:
            if name == ztype:
                return rng
        return None


def default_level_spec(base: ScenarioConfig) -> LevelGenSpec:
    """All three categories open with broad but safe ranges."""
    return LevelGenSpec(
        base=base,
        unit_ranges={
            "max_health": (20.0, 800.0),
            "speed": (0.5, 1.5),
            "attack_damage": (-10.0, 80.0),
        },
        zone_axis_range=ZONE_AXIS_RANGE,
        zone_effect_ranges={"lava": LAVA_DAMAGE_RANGE, "swamp": SWAMP_MULT_RANGE},
        epsilon_range=(0.0, 1.0),
        aggressive_range=(0.0, 0.7),
    )


def _with_unit_fields(u: UnitPlacement, fields: dict[str, float]) -> UnitPlacement:
    if not fields:
        return u
    if u.preset is not None:
        merged = dict(u.overrides)
        merged.update(fields)
        return replace(u, overrides=tuple(sorted(merged.items())))
    return replace(u, spec=replace(u.spec, **fields))


def _unit_value(u: UnitPlacement, name: str) -> float:
    return float(getattr(u.resolved_spec(), name))


def sample_level(spec: LevelGenSpec, rng: np.random.Generator) -> ScenarioConfig:
    """Base config with every open free parameter redrawn uniformly."""
    out = replace(spec.base, units=list(spec.base.units), zones=list(spec.base.zones))

    if "unit_spec" in spec.categories and spec.unit_ranges:
        for i, u in enumerate(out.units):
            drawn = {
                name: float(rng.uniform(lo, hi))
                for name, (lo, hi) in spec.unit_ranges
            }
            out.units[i] = _with_unit_fields(u, drawn)

    if "zones" in spec.categories:
        (x0, x1), (y0, y1) = spec.center_box()
        for i, z in enumerate(out.zones):
            ztype = str(rng.choice(spec.zone_types))
            center = (float(rng.uniform(x0, x1)), float(rng.uniform(y0, y1)))
            if spec.zone_axis_range is not None:
                axes = (
                    float(rng.uniform(*spec.zone_axis_range)),
                    float(rng.uniform(*spec.zone_axis_range)),
                )
            else:
                axes = z.semi_axes
            er = spec.effect_range(ztype)
            if ztype == "bush":
                effect = 0.0
            elif er is not None:
                effect = float(rng.uniform(*er))
            elif ztype == z.type:
                effect = z.effect
            else:
                # retyped with no range configured: fall back to defaults
                lo, hi = LAVA_DAMAGE_RANGE if ztype == "lava" else SWAMP_MULT_RANGE
                effect = float(rng.uniform(lo, hi))
            out.zones[i] = Zone(ztype, center, axes, effect)

    if "heuristic" in spec.categories:
        teams = []
        for t in out.teams:
            h = t.heuristic
            if t.controller == "heuristic" and h is not None:
                eps, agg = h.epsilon, h.aggressive_threshold
                if spec.epsilon_range is not None:
                    eps = float(rng.uniform(*spec.epsilon_range))
                if spec.aggressive_range is not None:
                    agg = float(rng.uniform(*spec.aggressive_range))
                t = replace(t, heuristic=HeuristicParams(eps, agg))
            teams.append(t)
        out.teams = tuple(teams)

    return out


MUTATION_OPS = ("perturb", "swap_axes", "retype")


def mutate_level(
    config: ScenarioConfig,
    op: str,
    rng: np.random.Generator,
    spec: LevelGenSpec | None = None,
    delta: float = 0.1,
) -> ScenarioConfig:
    """One mutation: noise on all free parameters, or a single zone edit.

    perturb draws in a fixed order (units by index with fields sorted, then
    zones with cx, cy, a, b, effect, then teams) so a given rng state maps
    to one reproducible outcome.
    """
    if op not in MUTATION_OPS:
        raise ValueError(f"unknown mutation op {op!r}; expected one of {MUTATION_OPS}")
    if spec is None:
        spec = default_level_spec(config)
    out = replace(config, units=list(config.units), zones=list(config.zones))

    if op == "perturb":
        def bump(value: float, lo: float, hi: float) -> float:
            width = hi - lo
            nudged = value + float(rng.uniform(-delta * width, delta * width))
            return float(min(max(nudged, lo), hi))

        if "unit_spec" in spec.categories:
            for i, u in enumerate(out.units):
                nudged = {
                    name: bump(_unit_value(u, name), lo, hi)
                    for name, (lo, hi) in spec.unit_ranges
                }
                out.units[i] = _with_unit_fields(u, nudged)
        if "zones" in spec.categories:
            (x0, x1), (y0, y1) = spec.center_box()
            for i, z in enumerate(out.zones):
                cx = bump(z.center[0], x0, x1)
                cy = bump(z.center[1], y0, y1)
                if spec.zone_axis_range is not None:
                    lo, hi = spec.zone_axis_range
                    axes = (bump(z.semi_axes[0], lo, hi), bump(z.semi_axes[1], lo, hi))
                else:
                    axes = z.semi_axes
                er = spec.effect_range(z.type)
                effect = bump(z.effect, *er) if er is not None else z.effect
                out.zones[i] = Zone(z.type, (cx, cy), axes, effect)
        if "heuristic" in spec.categories:
            teams = []
            for t in out.teams:
                h = t.heuristic
                if t.controller == "heuristic" and h is not None:
                    eps, agg = h.epsilon, h.aggressive_threshold
                    if spec.epsilon_range is not None:
                        eps = bump(eps, *spec.epsilon_range)
                    if spec.aggressive_range is not None:
                        agg = bump(agg, *spec.aggressive_range)
                    t = replace(t, heuristic=HeuristicParams(eps, agg))
                teams.append(t)
            out.teams = tuple(teams)
        return out

    if not out.zones:
        return out
    idx = int(rng.integers(len(out.zones)))
    z = out.zones[idx]
    if op == "swap_axes":
        out.zones[idx] = replace(z, semi_axes=(z.semi_axes[1], z.semi_axes[0]))
    else:
        new_type = str(rng.choice(spec.zone_types))
        if new_type == "bush":
            effect = 0.0
        else:
            er = spec.effect_range(new_type)
            if er is None:
                er = LAVA_DAMAGE_RANGE if new_type == "lava" else SWAMP_MULT_RANGE
            effect = float(rng.uniform(*er))
        out.zones[idx] = replace(z, type=new_type, effect=effect)
    return out


def random_scenario(rng: np.random.Generator, max_team: int = 5) -> ScenarioConfig:
    """A fresh random level: random composition, then every category redrawn.

    Fuzzing and benchmarking helper; uses the composed formation as the base
    so any draw is a runnable scenario.
    """
    counts = []
    for _ in range(2):
        n = int(rng.integers(1, max_team + 1))
        side: dict[str, int] = {}
        for _ in range(n):
            code = str(rng.choice(list(UNIT_CODES)))
            side[code] = side.get(code, 0) + 1
        counts.append(side)
    zcounts: dict[str, int] = {}
    for _ in range(int(rng.integers(0, 7))):
        code = str(rng.choice(list(ZONE_CODES)))
        zcounts[code] = zcounts.get(code, 0) + 1
    variant = f"r{int(rng.integers(1 << 20)):05x}" if zcounts else None
    comp = Composition(ally=counts[0], enemy=counts[1], zone_counts=zcounts,
                       variant=variant)
    base = compose_scenario(comp)
    return sample_level(default_level_spec(base), rng)


def validate_or_raise(config: ScenarioConfig) -> ScenarioConfig:
    report = validate_scenario(config)
    if not report.ok:
        raise ScenarioFormatError("; ".join(report.violations))
    return config


_LEVELGEN_KEYS = {
    "base", "categories", "unit_ranges", "zone_types", "zone_center_box",
    "zone_axis_range", "zone_effect_ranges", "epsilon_range", "aggressive_range",
}


def levelgen_spec_from_dict(data: dict, base_dir=None) -> LevelGenSpec:
    """Build a LevelGenSpec from its file representation.

    base is an inline scenario object, a path to a scenario file (resolved
    against base_dir), or a catalog / composition name.  Every other key is
    optional and mirrors a LevelGenSpec field; omitted range keys leave the
    matching parameters pinned to the base value.
    """
    doc = _obj(data, "$", _LEVELGEN_KEYS)
    if "base" not in doc:
        _fail("$.base", "required")
    base = doc["base"]
    if isinstance(base, dict):
        base_cfg = dict_to_config(base)
    elif isinstance(base, str):
        if base.endswith(".json"):
            path = Path(base)
            if base_dir is not None and not path.is_absolute():
                path = Path(base_dir) / path
            base_cfg = load_scenario_file(path)
        else:
            base_cfg = resolve_scenario(base)
    else:
        _fail("$.base", "expected scenario object, file path, or name")

    kwargs: dict = {"base": base_cfg}
    if "categories" in doc:
        v = doc["categories"]
        if not isinstance(v, list) or not all(isinstance(c, str) for c in v):
            _fail("$.categories", "expected array of strings")
        kwargs["categories"] = tuple(v)
    if "unit_ranges" in doc:
        v = _obj(doc["unit_ranges"], "$.unit_ranges", set(UNIT_FREE_FIELDS))
        kwargs["unit_ranges"] = {
            k: _pair(r, f"$.unit_ranges.{k}") for k, r in v.items()
        }
    if "zone_types" in doc:
        v = doc["zone_types"]
        if not isinstance(v, list) or not all(isinstance(c, str) for c in v):
            _fail("$.zone_types", "expected array of strings")
        kwargs["zone_types"] = tuple(v)
    if "zone_center_box" in doc:
        v = doc["zone_center_box"]
        if not isinstance(v, list) or len(v) != 2:
            _fail("$.zone_center_box", "expected [[x0, x1], [y0, y1]]")
        kwargs["zone_center_box"] = (
            _pair(v[0], "$.zone_center_box[0]"),
            _pair(v[1], "$.zone_center_box[1]"),
        )
    if "zone_axis_range" in doc:
        kwargs["zone_axis_range"] = _pair(doc["zone_axis_range"], "$.zone_axis_range")
    if "zone_effect_ranges" in doc:
        v = _obj(doc["zone_effect_ranges"], "$.zone_effect_ranges", set(ZONE_TYPES))
        kwargs["zone_effect_ranges"] = {
            k: _pair(r, f"$.zone_effect_ranges.{k}") for k, r in v.items()
        }
    if "epsilon_range" in doc:
        kwargs["epsilon_range"] = _pair(doc["epsilon_range"], "$.epsilon_range")
    if "aggressive_range" in doc:
        kwargs["aggressive_range"] = _pair(doc["aggressive_range"], "$.aggressive_range")
    try:
        return LevelGenSpec(**kwargs)
    except ValueError as e:
        _fail("$", str(e))


def load_levelgen_spec(path) -> LevelGenSpec:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        _fail(str(path), f"malformed JSON at line {e.lineno}, column {e.colno}: {e.msg}")
    if not isinstance(data, dict):
        _fail(str(path), "expected a JSON object")
    return levelgen_spec_from_dict(data, base_dir=path.parent)
