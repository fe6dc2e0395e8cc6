/*
  Scenario documents: the engine's file format, read and written here with
  the same canonical shape so a file saved by either side round-trips byte
  for byte through the other.

  The document model deliberately mirrors the engine's config: two teams,
  a unit list (preset name plus overrides, or a fully spelled-out spec),
  elliptical zones, field geometry, and the physics block.  Every numeric
  field has a fixed integer-or-float character determined by its key, which
  is what makes regeneration of the bytes deterministic.
*/

import {
  JsonNum,
  JsonValue,
  dumpJson,
  parseJson,
  typeName,
} from "./pyjson.js";
import { HEURISTIC_TIERS, SPEC_FIELDS, UnitSpecData, UNIT_PRESETS } from "./presets.js";

export const SCHEMA_VERSION = 1;

export class ScenarioFormatError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "ScenarioFormatError";
  }
}

export interface FieldConfig {
  width: number;
  height: number;
  margin: number;
}

export interface PhysicsParams {
  dt: number;
  restitution: number;
  penetration_slop: number;
  correction_percent: number;
  rotation_step_deg: number;
  boundary_damage_coeff: number;
  reveal_duration: number;
  enable_noop: boolean;
}

export interface HeuristicParams {
  epsilon: number;
  aggressive_threshold: number;
}

export interface TeamConfig {
  id: number;
  controller: string;
  heuristic: HeuristicParams | null;
}

export type OverrideValue = number | boolean;

export interface UnitPlacement {
  team: number;
  position: [number, number];
  heading_deg: number;
  preset: string | null;
  spec: UnitSpecData | null;
  /** Sorted by key; values are floats except space_occupied / kinematic. */
  overrides: [string, OverrideValue][];
}

export interface Zone {
  type: string;
  center: [number, number];
  semi_axes: [number, number];
  effect: number;
}

export interface ScenarioConfig {
  name: string;
  field: FieldConfig;
  physics: PhysicsParams;
  max_steps: number;
  max_units: number;
  max_zones: number;
  teams: TeamConfig[];
  units: UnitPlacement[];
  zones: Zone[];
  loadNotes: string[];
}

export function defaultField(): FieldConfig {
  return { width: 40.0, height: 40.0, margin: 2.0 };
}

export function defaultPhysics(): PhysicsParams {
  return {
    dt: 0.1,
    restitution: 0.5,
    penetration_slop: 0.01,
    correction_percent: 0.8,
    rotation_step_deg: 30.0,
    boundary_damage_coeff: 0.1,
    reveal_duration: 1.0,
    enable_noop: false,
  };
}

export function defaultTeams(): TeamConfig[] {
  return [
    { id: 0, controller: "external", heuristic: null },
    { id: 1, controller: "heuristic", heuristic: { ...HEURISTIC_TIERS.medium } },
  ];
}

/** Preset stats with the placement's overrides folded in. */
export function resolvedSpec(u: UnitPlacement): UnitSpecData {
  const base = u.spec !== null ? u.spec : UNIT_PRESETS[u.preset!];
  if (u.overrides.length === 0) return { ...base };
  const out: UnitSpecData = { ...base };
  for (const [key, value] of u.overrides) {
    if (key === "space_occupied") {
      out.space_occupied = Math.trunc(value as number);
    } else if (key === "kinematic") {
      out.kinematic = Boolean(value);
    } else if (SPEC_FIELDS.includes(key as keyof UnitSpecData)) {
      (out as unknown as { [k: string]: number })[key] = Number(value);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Loading

function fail(path: string, msg: string): never {
  throw new ScenarioFormatError(`${path}: ${msg}`);
}

function asObj(
  v: JsonValue,
  path: string,
  allowed: Set<string>,
): { [key: string]: JsonValue } {
  if (v === null || typeof v !== "object" || Array.isArray(v) || v instanceof JsonNum) {
    fail(path, `expected object, got ${typeName(v)}`);
  }
  const unknown = Object.keys(v)
    .filter((k) => !allowed.has(k))
    .sort();
  if (unknown.length > 0) {
    fail(path, `unknown keys [${unknown.map((k) => `'${k}'`).join(", ")}]`);
  }
  return v;
}

function asNum(v: JsonValue, path: string): number {
  if (!(v instanceof JsonNum)) fail(path, `expected number, got ${typeName(v)}`);
  return v.value;
}

function asInt(v: JsonValue, path: string): number {
  if (!(v instanceof JsonNum) || !v.isInt) {
    fail(path, `expected integer, got ${typeName(v)}`);
  }
  return v.value;
}

function asPair(v: JsonValue, path: string): [number, number] {
  if (!Array.isArray(v) || v.length !== 2) fail(path, "expected [x, y]");
  return [asNum(v[0], `${path}[0]`), asNum(v[1], `${path}[1]`)];
}

const SPEC_KEY_SET = new Set<string>(SPEC_FIELDS);

function loadSpec(v: JsonValue, path: string): UnitSpecData {
  const obj = asObj(v, path, SPEC_KEY_SET);
  const out: { [k: string]: number | boolean } = {};
  for (const key of SPEC_FIELDS) {
    if (!(key in obj)) fail(path, `missing key '${key}'`);
    if (key === "space_occupied") {
      out[key] = asInt(obj[key], `${path}.${key}`);
    } else if (key === "kinematic") {
      if (typeof obj[key] !== "boolean") fail(`${path}.${key}`, "expected boolean");
      out[key] = obj[key] as boolean;
    } else {
      out[key] = asNum(obj[key], `${path}.${key}`);
    }
  }
  return out as unknown as UnitSpecData;
}

const TOP_KEYS = new Set([
  "version", "name", "field", "physics", "max_steps", "max_units",
  "max_zones", "teams", "units", "zones",
]);

const PHYSICS_KEYS = [
  "dt", "restitution", "penetration_slop", "correction_percent",
  "rotation_step_deg", "boundary_damage_coeff", "reveal_duration",
  "enable_noop",
] as const;

export function treeToConfig(data: JsonValue): ScenarioConfig {
  const notes: string[] = [];
  const root = asObj(data, "$", TOP_KEYS);

  const version = root.version;
  if (version === undefined) {
    notes.push("version missing, assumed 1");
  } else if (asInt(version, "$.version") !== SCHEMA_VERSION) {
    fail("$.version", `unsupported version ${(version as JsonNum).value}`);
  }
  if (!("name" in root) || typeof root.name !== "string") {
    fail("$.name", "required string");
  }

  let field: FieldConfig;
  if ("field" in root) {
    const f = asObj(root.field, "$.field", new Set(["width", "height", "margin"]));
    const d = defaultField();
    field = {
      width: "width" in f ? asNum(f.width, "$.field.width") : d.width,
      height: "height" in f ? asNum(f.height, "$.field.height") : d.height,
      margin: "margin" in f ? asNum(f.margin, "$.field.margin") : d.margin,
    };
  } else {
    field = defaultField();
    notes.push("field missing, defaults applied");
  }

  let physics: PhysicsParams;
  if ("physics" in root) {
    const p = asObj(root.physics, "$.physics", new Set(PHYSICS_KEYS));
    const d = defaultPhysics();
    const out: { [k: string]: number | boolean } = {};
    for (const key of PHYSICS_KEYS) {
      if (!(key in p)) {
        out[key] = d[key];
        notes.push(`physics.${key} missing, default applied`);
      } else if (key === "enable_noop") {
        if (typeof p[key] !== "boolean") fail("$.physics.enable_noop", "expected boolean");
        out[key] = p[key] as boolean;
      } else {
        out[key] = asNum(p[key], `$.physics.${key}`);
      }
    }
    physics = out as unknown as PhysicsParams;
  } else {
    physics = defaultPhysics();
    notes.push("physics missing, defaults applied");
  }

  let teams: TeamConfig[];
  if ("teams" in root) {
    if (!Array.isArray(root.teams)) fail("$.teams", "expected array");
    teams = root.teams.map((tv, k) => {
      const path = `$.teams[${k}]`;
      const t = asObj(tv, path, new Set(["id", "controller", "heuristic"]));
      const id = "id" in t ? asInt(t.id, `${path}.id`) : k;
      const controller = "controller" in t ? t.controller : "external";
      if (typeof controller !== "string") fail(`${path}.controller`, "expected string");
      let heuristic: HeuristicParams | null = null;
      if ("heuristic" in t) {
        const h = asObj(
          t.heuristic, `${path}.heuristic`,
          new Set(["epsilon", "aggressive_threshold"]),
        );
        heuristic = {
          epsilon: "epsilon" in h ? asNum(h.epsilon, `${path}.heuristic.epsilon`) : 0.2,
          aggressive_threshold:
            "aggressive_threshold" in h
              ? asNum(h.aggressive_threshold, `${path}.heuristic.aggressive_threshold`)
              : 0.3,
        };
      } else if (controller === "heuristic") {
        heuristic = { ...HEURISTIC_TIERS.medium };
        notes.push(`teams[${k}].heuristic missing, medium tier applied`);
      }
      return { id, controller, heuristic };
    });
  } else {
    teams = defaultTeams();
    notes.push("teams missing, defaults applied");
  }
  if (teams.length !== 2) {
    fail("$.teams", `expected exactly 2 teams, got ${teams.length}`);
  }

  if (!("units" in root) || !Array.isArray(root.units)) fail("$.units", "required array");
  const units: UnitPlacement[] = root.units.map((uv, k) => {
    const path = `$.units[${k}]`;
    const u = asObj(
      uv, path,
      new Set(["team", "position", "heading_deg", "preset", "overrides", "spec"]),
    );
    if (!("position" in u)) fail(`${path}.position`, "required");
    let heading: number;
    if (!("heading_deg" in u) || u.heading_deg === null) {
      heading = 0.0;
      notes.push(`units[${k}].heading_deg missing, 0 applied`);
    } else {
      heading = asNum(u.heading_deg, `${path}.heading_deg`);
    }
    let preset: string | null = null;
    let spec: UnitSpecData | null = null;
    let overrides: [string, OverrideValue][] = [];
    if ("preset" in u && u.preset !== null) {
      if (typeof u.preset !== "string") fail(`${path}.preset`, "expected string");
      preset = u.preset;
      if ("spec" in u) fail(path, "preset and spec are mutually exclusive");
      const raw = "overrides" in u ? u.overrides : {};
      if (raw === null || typeof raw !== "object" || Array.isArray(raw) || raw instanceof JsonNum) {
        fail(`${path}.overrides`, "expected object");
      }
      const entries: [string, OverrideValue][] = [];
      for (const key of Object.keys(raw).sort()) {
        const val = (raw as { [k: string]: JsonValue })[key];
        if (key === "kinematic") {
          if (typeof val !== "boolean") fail(`${path}.overrides.kinematic`, "expected boolean");
          entries.push([key, val]);
        } else if (key === "space_occupied") {
          entries.push([key, asInt(val, `${path}.overrides.${key}`)]);
        } else {
          entries.push([key, asNum(val, `${path}.overrides.${key}`)]);
        }
      }
      overrides = entries;
    } else if ("spec" in u) {
      spec = loadSpec(u.spec, `${path}.spec`);
      if ("overrides" in u) fail(`${path}.overrides`, "not allowed with spec");
    } else {
      fail(path, "needs preset or spec");
    }
    return {
      team: "team" in u ? asInt(u.team, `${path}.team`) : 0,
      position: asPair(u.position, `${path}.position`),
      heading_deg: heading,
      preset,
      spec,
      overrides,
    };
  });

  const zones: Zone[] = [];
  if ("zones" in root) {
    if (!Array.isArray(root.zones)) fail("$.zones", "expected array");
    root.zones.forEach((zv, k) => {
      const path = `$.zones[${k}]`;
      const z = asObj(zv, path, new Set(["type", "center", "semi_axes", "effect"]));
      if (!("type" in z) || typeof z.type !== "string") fail(`${path}.type`, "required string");
      zones.push({
        type: z.type,
        center: "center" in z ? asPair(z.center, `${path}.center`) : [0, 0],
        semi_axes: "semi_axes" in z ? asPair(z.semi_axes, `${path}.semi_axes`) : [1, 1],
        effect: "effect" in z ? asNum(z.effect, `${path}.effect`) : 0.0,
      });
    });
  } else {
    notes.push("zones missing, none applied");
  }

  let max_units: number;
  if ("max_units" in root) {
    max_units = asInt(root.max_units, "$.max_units");
  } else {
    max_units = Math.max(units.length, 1);
    notes.push("max_units missing, derived from units");
  }
  let max_zones: number;
  if ("max_zones" in root) {
    max_zones = asInt(root.max_zones, "$.max_zones");
  } else {
    max_zones = zones.length;
    notes.push("max_zones missing, derived from zones");
  }
  let max_steps: number;
  if ("max_steps" in root) {
    max_steps = asInt(root.max_steps, "$.max_steps");
  } else {
    max_steps = 400;
    notes.push("max_steps missing, 400 applied");
  }

  return {
    name: root.name as string,
    field,
    physics,
    max_steps,
    max_units,
    max_zones,
    teams,
    units,
    zones,
    loadNotes: notes,
  };
}

export function loadScenario(text: string): ScenarioConfig {
  return treeToConfig(parseJson(text));
}

// ---------------------------------------------------------------------------
// Saving

function f(x: number): JsonNum {
  return new JsonNum(x, false);
}

function i(x: number): JsonNum {
  return new JsonNum(x, true);
}

export function configToTree(config: ScenarioConfig): JsonValue {
  const units: JsonValue[] = config.units.map((u) => {
    const entry: { [k: string]: JsonValue } = {
      team: i(u.team),
      position: [f(u.position[0]), f(u.position[1])],
      heading_deg: f(u.heading_deg),
    };
    if (u.preset !== null) {
      entry.preset = u.preset;
      if (u.overrides.length > 0) {
        const ov: { [k: string]: JsonValue } = {};
        for (const [key, value] of u.overrides) {
          if (typeof value === "boolean") {
            ov[key] = value;
          } else if (key === "space_occupied") {
            ov[key] = i(value);
          } else {
            ov[key] = f(value);
          }
        }
        entry.overrides = ov;
      }
    } else {
      const sp = u.spec!;
      entry.spec = {
        max_health: f(sp.max_health),
        body_radius: f(sp.body_radius),
        body_mass: f(sp.body_mass),
        speed: f(sp.speed),
        attack_damage: f(sp.attack_damage),
        attack_range: f(sp.attack_range),
        attack_cooldown: f(sp.attack_cooldown),
        sight_angle: f(sp.sight_angle),
        sight_range: f(sp.sight_range),
        space_occupied: i(sp.space_occupied),
        kinematic: sp.kinematic,
      };
    }
    return entry;
  });

  const teams: JsonValue[] = [...config.teams]
    .sort((a, b) => a.id - b.id)
    .map((t) => {
      const entry: { [k: string]: JsonValue } = {
        id: i(t.id),
        controller: t.controller,
      };
      if (t.heuristic !== null) {
        entry.heuristic = {
          epsilon: f(t.heuristic.epsilon),
          aggressive_threshold: f(t.heuristic.aggressive_threshold),
        };
      }
      return entry;
    });

  const phys = config.physics;
  return {
    version: i(SCHEMA_VERSION),
    name: config.name,
    field: {
      width: f(config.field.width),
      height: f(config.field.height),
      margin: f(config.field.margin),
    },
    physics: {
      dt: f(phys.dt),
      restitution: f(phys.restitution),
      penetration_slop: f(phys.penetration_slop),
      correction_percent: f(phys.correction_percent),
      rotation_step_deg: f(phys.rotation_step_deg),
      boundary_damage_coeff: f(phys.boundary_damage_coeff),
      reveal_duration: f(phys.reveal_duration),
      enable_noop: phys.enable_noop,
    },
    max_steps: i(config.max_steps),
    max_units: i(config.max_units),
    max_zones: i(config.max_zones),
    teams,
    units,
    zones: config.zones.map((z) => ({
      type: z.type,
      center: [f(z.center[0]), f(z.center[1])],
      semi_axes: [f(z.semi_axes[0]), f(z.semi_axes[1])],
      effect: f(z.effect),
    })),
  };
}

/** Canonical document text, newline terminated. */
export function saveScenario(config: ScenarioConfig): string {
  return dumpJson(configToTree(config)) + "\n";
}
