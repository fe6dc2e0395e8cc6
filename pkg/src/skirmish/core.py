"""Domain types, unit presets, scenario validation, and composition names."""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field, fields, replace

import numpy as np

TEAM_ALLY = 0
TEAM_ENEMY = 1

ZONE_TYPES = ("lava", "bush", "swamp")

# Discrete action ids shared by every controller.
ACTION_MOVE_POS_Y = 0
ACTION_MOVE_NEG_Y = 1
ACTION_MOVE_POS_X = 2
ACTION_MOVE_NEG_X = 3
ACTION_ROTATE = 4
ACTION_ATTACK = 5
ACTION_NOOP = 6
NUM_ACTIONS = 7

# Unit axis directions for move actions 0..3, row k = action id k.
MOVE_DIRECTIONS = np.array(
    [[0.0, 1.0], [0.0, -1.0], [1.0, 0.0], [-1.0, 0.0]], dtype=np.float64
)


class ScenarioFormatError(ValueError):
    """Raised for malformed scenario documents or composition names."""


class ActionMaskError(ValueError):
    """Raised when an externally supplied action violates the action mask."""


@dataclass(frozen=True)
class UnitSpec:
    """Immutable combat statistics shared by every unit of one kind.

    attack_damage is hit points per swing; negative values heal allies
    instead of hurting enemies.  attack_cooldown is seconds between swings.
    Kinematic units never move and ignore impulses (infinite effective mass).
    """

    max_health: float
    body_radius: float
    body_mass: float
    speed: float
    attack_damage: float
    attack_range: float
    attack_cooldown: float
    sight_angle: float = 2.0 * math.pi / 3.0
    sight_range: float = 20.0
    space_occupied: int = 1
    kinematic: bool = False


UNIT_PRESETS: dict[str, UnitSpec] = {
    "farmer": UnitSpec(60.0, 1.0, 1.0, 1.1, 14.0, 2.5, 2.5),
    "assassin": UnitSpec(70.0, 1.0, 1.0, 1.4, 22.0, 2.5, 1.5),
    "king": UnitSpec(346.0, 1.47, 10.0, 1.2, 46.0, 3.2, 2.5),
    "mammoth": UnitSpec(685.0, 4.25, 50.0, 1.2, 20.0, 3.0, 6.5, space_occupied=4),
    "archer": UnitSpec(40.0, 1.0, 1.0, 1.0, 28.0, 27.0, 8.0),
    "cannon": UnitSpec(100.0, 1.0, 5.2, 0.5, 80.0, 40.0, 10.0),
    "deadeye": UnitSpec(40.0, 1.0, 1.0, 1.1, 25.0, 20.0, 8.0),
    "healer": UnitSpec(25.0, 1.0, 1.0, 1.0, -7.0, 10.0, 2.0),
    "paladin": UnitSpec(220.0, 1.32, 8.5, 1.2, -6.0, 7.5, 2.0),
}

# Canonical single-letter codes, in canonical ordering for composed names.
UNIT_CODES: dict[str, str] = {
    "F": "farmer",
    "S": "assassin",
    "K": "king",
    "M": "mammoth",
    "A": "archer",
    "C": "cannon",
    "D": "deadeye",
    "H": "healer",
    "P": "paladin",
}
PRESET_CODES: dict[str, str] = {name: code for code, name in UNIT_CODES.items()}

ZONE_CODES: dict[str, str] = {"L": "lava", "B": "bush", "S": "swamp"}
ZONE_TYPE_CODES: dict[str, str] = {name: code for code, name in ZONE_CODES.items()}


@dataclass(frozen=True)
class FieldConfig:
    """Rectangular arena; margin is the placement inset used by generators."""

    width: float = 40.0
    height: float = 40.0
    margin: float = 2.0


@dataclass(frozen=True)
class PhysicsParams:
    """Integrator and contact-resolution constants.

    Angles are stored in degrees so saved documents round-trip without a
    radians conversion; use rotation_step for the radian value.
    """

    dt: float = 0.1
    restitution: float = 0.5
    penetration_slop: float = 0.01
    correction_percent: float = 0.8
    rotation_step_deg: float = 30.0
    boundary_damage_coeff: float = 0.1
    reveal_duration: float = 1.0
    enable_noop: bool = False

    @property
    def rotation_step(self) -> float:
        return math.radians(self.rotation_step_deg)


@dataclass(frozen=True)
class HeuristicParams:
    """Scripted-controller knobs: exploration rate and kiting aggressiveness."""

    epsilon: float = 0.2
    aggressive_threshold: float = 0.3


# Named difficulty tiers: (epsilon, aggressive_threshold).
HEURISTIC_TIERS: dict[str, HeuristicParams] = {
    "random": HeuristicParams(1.0, 0.0),
    "novice": HeuristicParams(0.5, 0.1),
    "medium": HeuristicParams(0.2, 0.3),
    "advanced": HeuristicParams(0.1, 0.5),
    "expert": HeuristicParams(0.01, 0.7),
}

CONTROLLERS = ("external", "heuristic", "random")


@dataclass(frozen=True)
class TeamConfig:
    id: int
    controller: str = "external"
    heuristic: HeuristicParams | None = None


@dataclass(frozen=True)
class Zone:
    """Axis-aligned elliptical field zone.

    effect is hit points per second for lava, the speed multiplier for
    swamp, and must be 0 for bush.
    """

    type: str
    center: tuple[float, float]
    semi_axes: tuple[float, float]
    effect: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "center", tuple(float(v) for v in self.center))
        object.__setattr__(self, "semi_axes", tuple(float(v) for v in self.semi_axes))
        object.__setattr__(self, "effect", float(self.effect))

    def contains(self, point: tuple[float, float]) -> bool:
        dx = (point[0] - self.center[0]) / self.semi_axes[0]
        dy = (point[1] - self.center[1]) / self.semi_axes[1]
        return dx * dx + dy * dy <= 1.0


@dataclass(frozen=True)
class UnitPlacement:
    """One unit in a scenario: either a preset name plus overrides, or a
    fully spelled-out spec."""

    team: int
    position: tuple[float, float]
    heading_deg: float = 0.0
    preset: str | None = None
    spec: UnitSpec | None = None
    overrides: tuple[tuple[str, float], ...] = ()

    def __post_init__(self) -> None:
        # Normalized so authored and round-tripped configs compare equal.
        object.__setattr__(self, "position", tuple(float(v) for v in self.position))
        object.__setattr__(self, "heading_deg", float(self.heading_deg))
        if isinstance(self.overrides, dict):
            object.__setattr__(self, "overrides", tuple(sorted(self.overrides.items())))
        else:
            object.__setattr__(self, "overrides", tuple(sorted(self.overrides)))

    def resolved_spec(self) -> UnitSpec:
        if self.spec is not None:
            base = self.spec
        else:
            base = UNIT_PRESETS[self.preset]
        if not self.overrides:
            return base
        kwargs = {}
        for key, value in self.overrides:
            if key in ("space_occupied",):
                kwargs[key] = int(value)
            elif key in ("kinematic",):
                kwargs[key] = bool(value)
            else:
                kwargs[key] = float(value)
        return replace(base, **kwargs)


_SPEC_FIELDS = {f.name for f in fields(UnitSpec)}


@dataclass
class ScenarioConfig:
    name: str
    units: list[UnitPlacement]
    field: FieldConfig = FieldConfig()
    physics: PhysicsParams = PhysicsParams()
    max_steps: int = 400
    teams: tuple[TeamConfig, TeamConfig] = (
        TeamConfig(TEAM_ALLY, "external"),
        TeamConfig(TEAM_ENEMY, "heuristic", HEURISTIC_TIERS["medium"]),
    )
    zones: list[Zone] = dc_field(default_factory=list)
    max_units: int = 0
    max_zones: int = 0
    load_notes: list[str] = dc_field(default_factory=list, compare=False, repr=False)

    def __post_init__(self) -> None:
        # Capacity defaults to the configured content so fresh configs are valid.
        if self.max_units == 0:
            self.max_units = max(len(self.units), 1)
        if self.max_zones == 0:
            self.max_zones = len(self.zones)

    def team_units(self, team: int) -> list[UnitPlacement]:
        return [u for u in self.units if u.team == team]


@dataclass(frozen=True)
class Outcome:
    """Final result of one episode."""

    winner: int
    reason: str  # elimination | truncation | truncation_tie
    ally_health_ratio: float
    enemy_health_ratio: float
    episode_length: int
    first_kill_team: int | None = None


@dataclass(eq=False)
class UnitState:
    """Mutable per-unit simulation state.

    active distinguishes configured units from padding slots; corpses stay
    active (they still block movement) but not alive.
    """

    spec: UnitSpec
    team: int
    position: np.ndarray
    heading: float
    velocity: np.ndarray
    health: float
    cooldown_timer: float = 0.0
    reveal_timer: float = 0.0
    alive: bool = True
    active: bool = True

    @classmethod
    def from_placement(cls, placement: UnitPlacement) -> UnitState:
        spec = placement.resolved_spec()
        return cls(
            spec=spec,
            team=placement.team,
            position=np.array(placement.position, dtype=np.float64),
            heading=math.radians(placement.heading_deg),
            velocity=np.zeros(2),
            health=spec.max_health,
        )


@dataclass
class ValidationReport:
    violations: list[str] = dc_field(default_factory=list)
    notes: list[str] = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def _validate_spec(spec: UnitSpec, path: str, out: list[str]) -> None:
    if spec.max_health <= 0:
        out.append(f"{path}.max_health must be > 0, got {spec.max_health}")
    if spec.body_radius <= 0:
        out.append(f"{path}.body_radius must be > 0, got {spec.body_radius}")
    if spec.body_mass <= 0:
        out.append(f"{path}.body_mass must be > 0, got {spec.body_mass}")
    if spec.speed < 0:
        out.append(f"{path}.speed must be >= 0, got {spec.speed}")
    if spec.attack_range < 0:
        out.append(f"{path}.attack_range must be >= 0, got {spec.attack_range}")
    if spec.attack_cooldown < 0:
        out.append(f"{path}.attack_cooldown must be >= 0, got {spec.attack_cooldown}")
    if not 0.0 < spec.sight_angle <= 2.0 * math.pi + 1e-12:
        out.append(f"{path}.sight_angle must be in (0, 2*pi], got {spec.sight_angle}")
    if spec.sight_range < 0:
        out.append(f"{path}.sight_range must be >= 0, got {spec.sight_range}")
    if spec.space_occupied < 1:
        out.append(f"{path}.space_occupied must be >= 1, got {spec.space_occupied}")


def validate_scenario(config: ScenarioConfig) -> ValidationReport:
    """Check every structural invariant; an empty violation list means valid."""
    v: list[str] = []
    fld = config.field
    if fld.width <= 0 or fld.height <= 0:
        v.append(f"field dimensions must be > 0, got {fld.width}x{fld.height}")
    if fld.margin < 0:
        v.append(f"field.margin must be >= 0, got {fld.margin}")
    elif fld.width > 0 and fld.height > 0 and 2 * fld.margin >= min(fld.width, fld.height):
        v.append(f"field.margin {fld.margin} leaves no interior")

    phys = config.physics
    if phys.dt <= 0:
        v.append(f"physics.dt must be > 0, got {phys.dt}")
    if not 0.0 <= phys.restitution <= 1.0:
        v.append(f"physics.restitution must be in [0, 1], got {phys.restitution}")
    if phys.penetration_slop < 0:
        v.append(f"physics.penetration_slop must be >= 0, got {phys.penetration_slop}")
    if not 0.0 <= phys.correction_percent <= 1.0:
        v.append(
            f"physics.correction_percent must be in [0, 1], got {phys.correction_percent}"
        )
    if not 0.0 < phys.rotation_step_deg <= 360.0:
        v.append(
            f"physics.rotation_step_deg must be in (0, 360], got {phys.rotation_step_deg}"
        )
    if phys.boundary_damage_coeff < 0:
        v.append(
            f"physics.boundary_damage_coeff must be >= 0, got {phys.boundary_damage_coeff}"
        )
    if phys.reveal_duration < 0:
        v.append(f"physics.reveal_duration must be >= 0, got {phys.reveal_duration}")

    if config.max_steps < 1:
        v.append(f"max_steps must be >= 1, got {config.max_steps}")

    ids = sorted(t.id for t in config.teams)
    if len(config.teams) != 2 or ids != [TEAM_ALLY, TEAM_ENEMY]:
        v.append(f"exactly two teams with ids 0 and 1 required, got ids {ids}")
    for t in config.teams:
        path = f"teams[{t.id}]"
        if t.controller not in CONTROLLERS:
            v.append(f"{path}.controller must be one of {CONTROLLERS}, got {t.controller!r}")
        if t.controller == "heuristic" and t.heuristic is None:
            v.append(f"{path}.heuristic params required for heuristic controller")
        if t.heuristic is not None:
            h = t.heuristic
            if not 0.0 <= h.epsilon <= 1.0:
                v.append(f"{path}.heuristic.epsilon must be in [0, 1], got {h.epsilon}")
            if not 0.0 <= h.aggressive_threshold <= 1.0:
                v.append(
                    f"{path}.heuristic.aggressive_threshold must be in [0, 1],"
                    f" got {h.aggressive_threshold}"
                )

    if config.max_units < 1:
        v.append(f"max_units must be >= 1, got {config.max_units}")
    if len(config.units) > config.max_units:
        v.append(f"{len(config.units)} units exceed max_units {config.max_units}")
    if config.max_zones < 0:
        v.append(f"max_zones must be >= 0, got {config.max_zones}")
    if len(config.zones) > config.max_zones:
        v.append(f"{len(config.zones)} zones exceed max_zones {config.max_zones}")

    for team_id in (TEAM_ALLY, TEAM_ENEMY):
        if not config.team_units(team_id):
            v.append(f"team {team_id} has no units")

    for i, unit in enumerate(config.units):
        path = f"units[{i}]"
        if unit.team not in (TEAM_ALLY, TEAM_ENEMY):
            v.append(f"{path}.team must be 0 or 1, got {unit.team}")
        if (unit.preset is None) == (unit.spec is None):
            v.append(f"{path} must set exactly one of preset or spec")
            continue
        if unit.preset is not None and unit.preset not in UNIT_PRESETS:
            v.append(f"{path}.preset unknown: {unit.preset!r}")
            continue
        if unit.spec is not None and unit.overrides:
            v.append(f"{path}.overrides only apply to presets")
        bad = [k for k, _ in unit.overrides if k not in _SPEC_FIELDS]
        if bad:
            v.append(f"{path}.overrides has unknown keys {bad}")
            continue
        _validate_spec(unit.resolved_spec(), path, v)
        x, y = unit.position
        if not (0.0 <= x <= fld.width and 0.0 <= y <= fld.height):
            v.append(f"{path}.position ({x}, {y}) outside field")

    for i, zone in enumerate(config.zones):
        path = f"zones[{i}]"
        if zone.type not in ZONE_TYPES:
            v.append(f"{path}.type must be one of {ZONE_TYPES}, got {zone.type!r}")
            continue
        a, b = zone.semi_axes
        if a <= 0 or b <= 0:
            v.append(f"{path}.semi_axes must be > 0 componentwise, got ({a}, {b})")
        if zone.type == "lava" and zone.effect <= 0:
            v.append(f"{path}.effect must be > 0 for lava, got {zone.effect}")
        if zone.type == "swamp" and not 0.0 < zone.effect <= 1.0:
            v.append(f"{path}.effect must be in (0, 1] for swamp, got {zone.effect}")
        if zone.type == "bush" and zone.effect != 0.0:
            v.append(f"{path}.effect must be 0 for bush, got {zone.effect}")

    return ValidationReport(violations=v, notes=list(config.load_notes))


@dataclass
class Composition:
    """Parsed composed scenario name: unit counts per side plus zone counts."""

    ally: dict[str, int]
    enemy: dict[str, int]
    zone_counts: dict[str, int] = dc_field(default_factory=dict)
    variant: str | None = None


def _parse_count_groups(
    text: str, base: int, codes: dict[str, str], what: str
) -> dict[str, int]:
    counts: dict[str, int] = {}
    i = 0
    if not text:
        raise ScenarioFormatError(f"empty {what} list at offset {base}")
    while i < len(text):
        j = i
        while j < len(text) and text[j].isdigit():
            j += 1
        if j == i:
            raise ScenarioFormatError(
                f"expected count before {what} code {text[i]!r} at offset {base + i}"
            )
        count = int(text[i:j])
        if count < 1:
            raise ScenarioFormatError(f"count must be >= 1 at offset {base + i}")
        if j == len(text):
            raise ScenarioFormatError(f"missing {what} code at offset {base + j}")
        code = text[j]
        if code not in codes:
            raise ScenarioFormatError(
                f"unknown {what} code {code!r} at offset {base + j}"
            )
        counts[code] = counts.get(code, 0) + count
        i = j + 1
    return counts


def parse_composition_name(name: str) -> Composition:
    """Parse names like '2F1M2Avs2S1K_2L2B2S-1'.

    Offsets in error messages are byte offsets into the name.
    """
    variant = None
    body = name
    dash = name.find("-")
    if dash >= 0:
        body, variant = name[:dash], name[dash + 1 :]
        if not variant:
            raise ScenarioFormatError(f"empty variant at offset {dash + 1}")
    zone_text = None
    zone_base = 0
    under = body.find("_")
    if under >= 0:
        body, zone_text = body[:under], body[under + 1 :]
        zone_base = under + 1
    sep = body.find("vs")
    if sep < 0:
        raise ScenarioFormatError(f"missing 'vs' separator in {name!r}")
    ally = _parse_count_groups(body[:sep], 0, UNIT_CODES, "unit")
    enemy = _parse_count_groups(body[sep + 2 :], sep + 2, UNIT_CODES, "unit")
    zones: dict[str, int] = {}
    if zone_text is not None:
        zones = _parse_count_groups(zone_text, zone_base, ZONE_CODES, "zone")
    return Composition(ally=ally, enemy=enemy, zone_counts=zones, variant=variant)


def format_composition_name(comp: Composition) -> str:
    """Render a Composition in canonical code order."""

    def side(counts: dict[str, int], codes: dict[str, str]) -> str:
        return "".join(f"{counts[c]}{c}" for c in codes if counts.get(c, 0) > 0)

    ally = side(comp.ally, UNIT_CODES)
    enemy = side(comp.enemy, UNIT_CODES)
    if not ally or not enemy:
        raise ScenarioFormatError("both sides need at least one unit")
    name = f"{ally}vs{enemy}"
    if comp.zone_counts and any(comp.zone_counts.values()):
        name += "_" + side(comp.zone_counts, ZONE_CODES)
    if comp.variant is not None:
        name += f"-{comp.variant}"
    return name
