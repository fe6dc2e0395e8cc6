/*
  Unit and zone data mirrored from the engine package.  The values must
  stay identical to the engine's tables; tests/fixtures/presets.json is
  dumped from the engine and compared field by field to catch drift.
*/

export interface UnitSpecData {
  max_health: number;
  body_radius: number;
  body_mass: number;
  speed: number;
  attack_damage: number;
  attack_range: number;
  attack_cooldown: number;
  sight_angle: number; // radians
  sight_range: number;
  space_occupied: number;
  kinematic: boolean;
}

const DEFAULT_SIGHT_ANGLE = (2 * Math.PI) / 3;
const DEFAULT_SIGHT_RANGE = 20;

function spec(
  max_health: number,
  body_radius: number,
  body_mass: number,
  speed: number,
  attack_damage: number,
  attack_range: number,
  attack_cooldown: number,
  space_occupied = 1,
): UnitSpecData {
  return {
    max_health,
    body_radius,
    body_mass,
    speed,
    attack_damage,
    attack_range,
    attack_cooldown,
    sight_angle: DEFAULT_SIGHT_ANGLE,
    sight_range: DEFAULT_SIGHT_RANGE,
    space_occupied,
    kinematic: false,
  };
}

export const UNIT_PRESETS: { [name: string]: UnitSpecData } = {
  farmer: spec(60.0, 1.0, 1.0, 1.1, 14.0, 2.5, 2.5),
  assassin: spec(70.0, 1.0, 1.0, 1.4, 22.0, 2.5, 1.5),
  king: spec(346.0, 1.47, 10.0, 1.2, 46.0, 3.2, 2.5),
  mammoth: spec(685.0, 4.25, 50.0, 1.2, 20.0, 3.0, 6.5, 4),
  archer: spec(40.0, 1.0, 1.0, 1.0, 28.0, 27.0, 8.0),
  cannon: spec(100.0, 1.0, 5.2, 0.5, 80.0, 40.0, 10.0),
  deadeye: spec(40.0, 1.0, 1.0, 1.1, 25.0, 20.0, 8.0),
  healer: spec(25.0, 1.0, 1.0, 1.0, -7.0, 10.0, 2.0),
  paladin: spec(220.0, 1.32, 8.5, 1.2, -6.0, 7.5, 2.0),
};

export const PRESET_NAMES = Object.keys(UNIT_PRESETS).sort();

export const ZONE_TYPES = ["lava", "bush", "swamp"] as const;
export type ZoneType = (typeof ZONE_TYPES)[number];

// Fresh zones get a mid-range effect; the property panel tunes it later.
// Lava effect is damage per second, swamp effect a speed multiplier, bush
// has no effect parameter at all.
export const ZONE_DEFAULT_EFFECT: { [k in ZoneType]: number } = {
  lava: 6.0,
  bush: 0.0,
  swamp: 0.5,
};

export const CONTROLLERS = ["external", "heuristic", "random"] as const;

export interface HeuristicParamsData {
  epsilon: number;
  aggressive_threshold: number;
}

export const HEURISTIC_TIERS: { [name: string]: HeuristicParamsData } = {
  random: { epsilon: 1.0, aggressive_threshold: 0.0 },
  novice: { epsilon: 0.5, aggressive_threshold: 0.1 },
  medium: { epsilon: 0.2, aggressive_threshold: 0.3 },
  advanced: { epsilon: 0.1, aggressive_threshold: 0.5 },
  expert: { epsilon: 0.01, aggressive_threshold: 0.7 },
};

export const SPEC_FIELDS: (keyof UnitSpecData)[] = [
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
];
