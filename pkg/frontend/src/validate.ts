/*
  Client-side structural validation, one check for one engine rule.  Save
  stays disabled while the violation list is non-empty, which is what lets
  an authored file land in the engine with a clean report.
*/

import { pyFloatRepr } from "./pyjson.js";
import { CONTROLLERS, UNIT_PRESETS, ZONE_TYPES } from "./presets.js";
import { UnitSpecData } from "./presets.js";
import { resolvedSpec, ScenarioConfig } from "./scenario.js";

export interface ValidationReport {
  violations: string[];
  notes: string[];
}

export function reportOk(report: ValidationReport): boolean {
  return report.violations.length === 0;
}

const TEAM_ALLY = 0;
const TEAM_ENEMY = 1;

const SPEC_FIELD_SET = new Set([
  "max_health", "body_radius", "body_mass", "speed", "attack_damage",
  "attack_range", "attack_cooldown", "sight_angle", "sight_range",
  "space_occupied", "kinematic",
]);

// Engine messages interpolate floats in repr form; shown verbatim in the
// editor's problem list so both sides read the same.
function num(x: number): string {
  return Number.isFinite(x) ? pyFloatRepr(x) : String(x);
}

function validateSpec(spec: UnitSpecData, path: string, out: string[]): void {
  if (!(spec.max_health > 0)) {
    out.push(`${path}.max_health must be > 0, got ${num(spec.max_health)}`);
  }
  if (!(spec.body_radius > 0)) {
    out.push(`${path}.body_radius must be > 0, got ${num(spec.body_radius)}`);
  }
  if (!(spec.body_mass > 0)) {
    out.push(`${path}.body_mass must be > 0, got ${num(spec.body_mass)}`);
  }
  if (spec.speed < 0) {
    out.push(`${path}.speed must be >= 0, got ${num(spec.speed)}`);
  }
  if (spec.attack_range < 0) {
    out.push(`${path}.attack_range must be >= 0, got ${num(spec.attack_range)}`);
  }
  if (spec.attack_cooldown < 0) {
    out.push(`${path}.attack_cooldown must be >= 0, got ${num(spec.attack_cooldown)}`);
  }
  if (!(spec.sight_angle > 0 && spec.sight_angle <= 2 * Math.PI + 1e-12)) {
    out.push(`${path}.sight_angle must be in (0, 2*pi], got ${num(spec.sight_angle)}`);
  }
  if (spec.sight_range < 0) {
    out.push(`${path}.sight_range must be >= 0, got ${num(spec.sight_range)}`);
  }
  if (spec.space_occupied < 1) {
    out.push(`${path}.space_occupied must be >= 1, got ${spec.space_occupied}`);
  }
}

export function validateScenario(config: ScenarioConfig): ValidationReport {
  const v: string[] = [];
  const fld = config.field;
  if (!(fld.width > 0) || !(fld.height > 0)) {
    v.push(`field dimensions must be > 0, got ${num(fld.width)}x${num(fld.height)}`);
  }
  if (fld.margin < 0) {
    v.push(`field.margin must be >= 0, got ${num(fld.margin)}`);
  } else if (fld.width > 0 && fld.height > 0 && 2 * fld.margin >= Math.min(fld.width, fld.height)) {
    v.push(`field.margin ${num(fld.margin)} leaves no interior`);
  }

  const phys = config.physics;
  if (!(phys.dt > 0)) {
    v.push(`physics.dt must be > 0, got ${num(phys.dt)}`);
  }
  if (!(phys.restitution >= 0 && phys.restitution <= 1)) {
    v.push(`physics.restitution must be in [0, 1], got ${num(phys.restitution)}`);
  }
  if (phys.penetration_slop < 0) {
    v.push(`physics.penetration_slop must be >= 0, got ${num(phys.penetration_slop)}`);
  }
  if (!(phys.correction_percent >= 0 && phys.correction_percent <= 1)) {
    v.push(`physics.correction_percent must be in [0, 1], got ${num(phys.correction_percent)}`);
  }
  if (!(phys.rotation_step_deg > 0 && phys.rotation_step_deg <= 360)) {
    v.push(`physics.rotation_step_deg must be in (0, 360], got ${num(phys.rotation_step_deg)}`);
  }
  if (phys.boundary_damage_coeff < 0) {
    v.push(`physics.boundary_damage_coeff must be >= 0, got ${num(phys.boundary_damage_coeff)}`);
  }
  if (phys.reveal_duration < 0) {
    v.push(`physics.reveal_duration must be >= 0, got ${num(phys.reveal_duration)}`);
  }

  if (config.max_steps < 1) {
    v.push(`max_steps must be >= 1, got ${config.max_steps}`);
  }

  const ids = config.teams.map((t) => t.id).sort((a, b) => a - b);
  if (config.teams.length !== 2 || ids[0] !== TEAM_ALLY || ids[1] !== TEAM_ENEMY) {
    v.push(`exactly two teams with ids 0 and 1 required, got ids [${ids.join(", ")}]`);
  }
  for (const t of config.teams) {
    const path = `teams[${t.id}]`;
    if (!CONTROLLERS.includes(t.controller as (typeof CONTROLLERS)[number])) {
      v.push(`${path}.controller must be one of ${JSON.stringify(CONTROLLERS)}, got '${t.controller}'`);
    }
    if (t.controller === "heuristic" && t.heuristic === null) {
      v.push(`${path}.heuristic params required for heuristic controller`);
    }
    if (t.heuristic !== null) {
      const h = t.heuristic;
      if (!(h.epsilon >= 0 && h.epsilon <= 1)) {
        v.push(`${path}.heuristic.epsilon must be in [0, 1], got ${num(h.epsilon)}`);
      }
      if (!(h.aggressive_threshold >= 0 && h.aggressive_threshold <= 1)) {
        v.push(`${path}.heuristic.aggressive_threshold must be in [0, 1], got ${num(h.aggressive_threshold)}`);
      }
    }
  }

  if (config.max_units < 1) {
    v.push(`max_units must be >= 1, got ${config.max_units}`);
  }
  if (config.units.length > config.max_units) {
    v.push(`${config.units.length} units exceed max_units ${config.max_units}`);
  }
  if (config.max_zones < 0) {
    v.push(`max_zones must be >= 0, got ${config.max_zones}`);
  }
  if (config.zones.length > config.max_zones) {
    v.push(`${config.zones.length} zones exceed max_zones ${config.max_zones}`);
  }

  for (const teamId of [TEAM_ALLY, TEAM_ENEMY]) {
    if (!config.units.some((u) => u.team === teamId)) {
      v.push(`team ${teamId} has no units`);
    }
  }

  config.units.forEach((unit, idx) => {
    const path = `units[${idx}]`;
    if (unit.team !== TEAM_ALLY && unit.team !== TEAM_ENEMY) {
      v.push(`${path}.team must be 0 or 1, got ${unit.team}`);
    }
    if ((unit.preset === null) === (unit.spec === null)) {
      v.push(`${path} must set exactly one of preset or spec`);
      return;
    }
    if (unit.preset !== null && !(unit.preset in UNIT_PRESETS)) {
      v.push(`${path}.preset unknown: '${unit.preset}'`);
      return;
    }
    if (unit.spec !== null && unit.overrides.length > 0) {
      v.push(`${path}.overrides only apply to presets`);
    }
    const bad = unit.overrides.map(([k]) => k).filter((k) => !SPEC_FIELD_SET.has(k));
    if (bad.length > 0) {
      v.push(`${path}.overrides has unknown keys [${bad.map((k) => `'${k}'`).join(", ")}]`);
      return;
    }
    validateSpec(resolvedSpec(unit), path, v);
    const [x, y] = unit.position;
    if (!(x >= 0 && x <= fld.width && y >= 0 && y <= fld.height)) {
      v.push(`${path}.position (${num(x)}, ${num(y)}) outside field`);
    }
  });

  config.zones.forEach((zone, idx) => {
    const path = `zones[${idx}]`;
    if (!ZONE_TYPES.includes(zone.type as (typeof ZONE_TYPES)[number])) {
      v.push(`${path}.type must be one of ${JSON.stringify(ZONE_TYPES)}, got '${zone.type}'`);
      return;
    }
    const [a, b] = zone.semi_axes;
    if (!(a > 0) || !(b > 0)) {
      v.push(`${path}.semi_axes must be > 0 componentwise, got (${num(a)}, ${num(b)})`);
    }
    if (zone.type === "lava" && !(zone.effect > 0)) {
      v.push(`${path}.effect must be > 0 for lava, got ${num(zone.effect)}`);
    }
    if (zone.type === "swamp" && !(zone.effect > 0 && zone.effect <= 1)) {
      v.push(`${path}.effect must be in (0, 1] for swamp, got ${num(zone.effect)}`);
    }
    if (zone.type === "bush" && zone.effect !== 0) {
      v.push(`${path}.effect must be 0 for bush, got ${num(zone.effect)}`);
    }
  });

  return { violations: v, notes: [...config.loadNotes] };
}
