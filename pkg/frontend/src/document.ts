/*
  The document under edit and the operations the panels invoke on it.

  Operations never mutate their input; each returns a fresh document (or
  a rejection carrying the slots to highlight).  That keeps undo cheap to
  add and makes the tests plain value comparisons.
*/

import {
  Footprint,
  footprintAt,
  footprintClear,
  GridSettings,
  occupiedSlots,
  snapPoint,
} from "./grid.js";
import { UNIT_PRESETS, UnitSpecData, ZONE_DEFAULT_EFFECT, ZoneType } from "./presets.js";
import {
  defaultPhysics,
  defaultTeams,
  resolvedSpec,
  ScenarioConfig,
  UnitPlacement,
  Zone,
} from "./scenario.js";
import { reportOk, validateScenario, ValidationReport } from "./validate.js";

export type Selection =
  | { kind: "unit"; index: number }
  | { kind: "zone"; index: number }
  | null;

export interface EditorDocument {
  config: ScenarioConfig;
  selection: Selection;
  grid: GridSettings;
  dirty: boolean;
}

/** Raised by the New dialog on out-of-range layout parameters. */
export class DocumentError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "DocumentError";
  }
}

export type PlaceResult =
  | { ok: true; doc: EditorDocument }
  | { ok: false; reason: string; slots: [number, number][] };

export const ROTATE_INCREMENT_DEG = 15;

export function newDocument(
  width: number,
  height: number,
  margin = 2.0,
  spacing = 2.0,
): EditorDocument {
  if (!(width > 0)) throw new DocumentError(`width must be positive, got ${width}`);
  if (!(height > 0)) throw new DocumentError(`height must be positive, got ${height}`);
  if (!(margin >= 0)) throw new DocumentError(`margin must be >= 0, got ${margin}`);
  if (!(spacing > 0)) throw new DocumentError(`unit spacing must be positive, got ${spacing}`);
  return {
    config: {
      name: "untitled",
      field: { width, height, margin },
      physics: defaultPhysics(),
      max_steps: 400,
      max_units: 1,
      max_zones: 0,
      teams: defaultTeams(),
      units: [],
      zones: [],
      loadNotes: [],
    },
    selection: null,
    grid: { spacing, snap: true },
    dirty: false,
  };
}

/** Drop every placed element; field, physics, and grid settings stay. */
export function clearDocument(doc: EditorDocument): EditorDocument {
  return {
    ...doc,
    config: { ...doc.config, units: [], zones: [], max_units: 1, max_zones: 0 },
    selection: null,
    dirty: true,
  };
}

export function fromConfig(config: ScenarioConfig, grid?: GridSettings): EditorDocument {
  return {
    config,
    selection: null,
    grid: grid ?? { spacing: 2.0, snap: true },
    dirty: false,
  };
}

function withConfig(doc: EditorDocument, config: ScenarioConfig): EditorDocument {
  return { ...doc, config, dirty: true };
}

function insideField(doc: EditorDocument, p: [number, number]): boolean {
  const f = doc.config.field;
  return p[0] >= 0 && p[0] <= f.width && p[1] >= 0 && p[1] <= f.height;
}

/**
 * Place a palette unit at a canvas point.  With snapping on, the unit
 * claims its slot block and placement fails when any slot is taken (the
 * rejection lists those slots so the canvas can flash them).
 */
export function placeUnit(
  doc: EditorDocument,
  item: { preset: string } | { spec: UnitSpecData },
  team: number,
  point: [number, number],
): PlaceResult {
  if (!insideField(doc, point)) {
    return { ok: false, reason: "placement point outside the field", slots: [] };
  }
  const spec = "preset" in item ? UNIT_PRESETS[item.preset] : item.spec;
  if (spec === undefined) {
    return { ok: false, reason: `unknown preset '${(item as { preset: string }).preset}'`, slots: [] };
  }

  let position: [number, number];
  if (doc.grid.snap) {
    const fp = footprintAt(point, spec.space_occupied, doc.config.field, doc.grid.spacing);
    if (fp === null) {
      return { ok: false, reason: "grid too small for this unit", slots: [] };
    }
    const taken = occupiedSlots(doc.config, doc.grid.spacing);
    if (!footprintClear(fp, taken)) {
      const blocked = fp.slots.filter(([i, j]) => taken.has(`${i},${j}`));
      return { ok: false, reason: "placement overlaps an occupied cell", slots: blocked };
    }
    position = fp.center;
  } else {
    position = point;
  }

  const unit: UnitPlacement = {
    team,
    position,
    heading_deg: 0.0,
    preset: "preset" in item ? item.preset : null,
    spec: "preset" in item ? null : { ...item.spec },
    overrides: [],
  };
  const units = [...doc.config.units, unit];
  const config = {
    ...doc.config,
    units,
    max_units: Math.max(doc.config.max_units, units.length),
  };
  return {
    ok: true,
    doc: { ...withConfig(doc, config), selection: { kind: "unit", index: units.length - 1 } },
  };
}

/** Drag extent to ellipse: center at the midpoint, semi-axes half the span. */
export function zoneFromDrag(
  ztype: ZoneType,
  start: [number, number],
  end: [number, number],
): Zone {
  return {
    type: ztype,
    center: [(start[0] + end[0]) / 2, (start[1] + end[1]) / 2],
    semi_axes: [Math.abs(end[0] - start[0]) / 2, Math.abs(end[1] - start[1]) / 2],
    effect: ZONE_DEFAULT_EFFECT[ztype],
  };
}

export function placeZone(
  doc: EditorDocument,
  ztype: ZoneType,
  dragStart: [number, number],
  dragEnd: [number, number],
): PlaceResult {
  if (!insideField(doc, dragStart) || !insideField(doc, dragEnd)) {
    return { ok: false, reason: "zone drag leaves the field", slots: [] };
  }
  const zone = zoneFromDrag(ztype, dragStart, dragEnd);
  if (zone.semi_axes[0] <= 0 || zone.semi_axes[1] <= 0) {
    return { ok: false, reason: "zone drag has no extent", slots: [] };
  }
  const zones = [...doc.config.zones, zone];
  const config = {
    ...doc.config,
    zones,
    max_zones: Math.max(doc.config.max_zones, zones.length),
  };
  return {
    ok: true,
    doc: { ...withConfig(doc, config), selection: { kind: "zone", index: zones.length - 1 } },
  };
}

export function select(doc: EditorDocument, selection: Selection): EditorDocument {
  if (selection !== null) {
    const pool = selection.kind === "unit" ? doc.config.units : doc.config.zones;
    if (selection.index < 0 || selection.index >= pool.length) return doc;
  }
  return { ...doc, selection };
}

/**
 * Q and E rotation.  Only a selected unit turns; a zone selection (or
 * none) is a no-op.  ccw adds the increment, cw subtracts, wrapping into
 * [0, 360).
 */
export function rotateSelection(doc: EditorDocument, direction: "ccw" | "cw"): EditorDocument {
  const sel = doc.selection;
  if (sel === null || sel.kind !== "unit") return doc;
  const step = direction === "ccw" ? ROTATE_INCREMENT_DEG : -ROTATE_INCREMENT_DEG;
  const units = doc.config.units.slice();
  const u = units[sel.index];
  const heading = ((u.heading_deg + step) % 360 + 360) % 360;
  units[sel.index] = { ...u, heading_deg: heading };
  return withConfig(doc, { ...doc.config, units });
}

export function deleteSelection(doc: EditorDocument): EditorDocument {
  const sel = doc.selection;
  if (sel === null) return doc;
  const config = { ...doc.config };
  if (sel.kind === "unit") {
    config.units = config.units.filter((_, i) => i !== sel.index);
  } else {
    config.zones = config.zones.filter((_, i) => i !== sel.index);
  }
  return { ...withConfig(doc, config), selection: null };
}

/** Re-snap a selected unit to a new point; same overlap rules as placing. */
export function moveUnit(doc: EditorDocument, index: number, point: [number, number]): PlaceResult {
  const u = doc.config.units[index];
  if (u === undefined) return { ok: false, reason: "no such unit", slots: [] };
  if (!insideField(doc, point)) {
    return { ok: false, reason: "placement point outside the field", slots: [] };
  }
  let position: [number, number];
  if (doc.grid.snap) {
    const space = resolvedSpec(u).space_occupied;
    const fp = footprintAt(point, space, doc.config.field, doc.grid.spacing);
    if (fp === null) return { ok: false, reason: "grid too small for this unit", slots: [] };
    const taken = occupiedSlots(doc.config, doc.grid.spacing, u);
    if (!footprintClear(fp, taken)) {
      const blocked = fp.slots.filter(([i, j]) => taken.has(`${i},${j}`));
      return { ok: false, reason: "placement overlaps an occupied cell", slots: blocked };
    }
    position = fp.center;
  } else {
    position = point;
  }
  const units = doc.config.units.slice();
  units[index] = { ...u, position };
  return { ok: true, doc: withConfig(doc, { ...doc.config, units }) };
}

const INT_OVERRIDES = new Set(["space_occupied"]);
const BOOL_OVERRIDES = new Set(["kinematic"]);

/**
 * Set one attribute override on a preset unit, or edit the field of a
 * spec unit directly.  Passing null removes an existing override.
 */
export function setUnitAttribute(
  doc: EditorDocument,
  index: number,
  key: keyof UnitSpecData,
  value: number | boolean | null,
): EditorDocument {
  const u = doc.config.units[index];
  if (u === undefined) return doc;
  const units = doc.config.units.slice();
  if (u.preset !== null) {
    const entries = u.overrides.filter(([k]) => k !== key);
    if (value !== null) {
      const coerced = BOOL_OVERRIDES.has(key)
        ? Boolean(value)
        : INT_OVERRIDES.has(key)
          ? Math.trunc(value as number)
          : Number(value);
      entries.push([key, coerced]);
      entries.sort(([a], [b]) => (a < b ? -1 : a > b ? 1 : 0));
    }
    units[index] = { ...u, overrides: entries };
  } else {
    if (value === null) return doc;
    const spec = { ...u.spec! };
    if (BOOL_OVERRIDES.has(key)) {
      spec.kinematic = Boolean(value);
    } else if (INT_OVERRIDES.has(key)) {
      spec.space_occupied = Math.trunc(value as number);
    } else {
      (spec as unknown as { [k: string]: number })[key] = Number(value);
    }
    units[index] = { ...u, spec };
  }
  return withConfig(doc, { ...doc.config, units });
}

export function setUnitTeam(doc: EditorDocument, index: number, team: number): EditorDocument {
  const u = doc.config.units[index];
  if (u === undefined) return doc;
  const units = doc.config.units.slice();
  units[index] = { ...u, team };
  return withConfig(doc, { ...doc.config, units });
}

export function setUnitHeading(doc: EditorDocument, index: number, deg: number): EditorDocument {
  const u = doc.config.units[index];
  if (u === undefined) return doc;
  const units = doc.config.units.slice();
  units[index] = { ...u, heading_deg: deg };
  return withConfig(doc, { ...doc.config, units });
}

export function updateZone(
  doc: EditorDocument,
  index: number,
  patch: Partial<Zone>,
): EditorDocument {
  const z = doc.config.zones[index];
  if (z === undefined) return doc;
  const zones = doc.config.zones.slice();
  zones[index] = { ...z, ...patch };
  return withConfig(doc, { ...doc.config, zones });
}

export function setName(doc: EditorDocument, name: string): EditorDocument {
  return withConfig(doc, { ...doc.config, name });
}

export function setMaxSteps(doc: EditorDocument, maxSteps: number): EditorDocument {
  return withConfig(doc, { ...doc.config, max_steps: Math.trunc(maxSteps) });
}

export function setSnap(doc: EditorDocument, snap: boolean): EditorDocument {
  return { ...doc, grid: { ...doc.grid, snap } };
}

export function validate(doc: EditorDocument): ValidationReport {
  return validateScenario(doc.config);
}

/** The Save button's enable state: no violations, nothing else. */
export function saveEnabled(doc: EditorDocument): boolean {
  return reportOk(validate(doc));
}

export function markSaved(doc: EditorDocument): EditorDocument {
  return { ...doc, dirty: false };
}

export type { Footprint };
