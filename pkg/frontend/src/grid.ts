/*
  Placement grid.

  The usable area is the field minus its margin on every side, divided
  into spacing-sized cells: a 40 x 40 field with margin 2 and spacing 2
  gives an 18 x 18 cell grid.  Units snap to the lattice points where
  cell corners meet (so a click at (10.3, 10.7) lands on (10, 10)) and
  claim one lattice slot per unit of occupied space; a unit that takes 4
  slots claims a 2 x 2 block anchored at its snapped point.  Zones are
  free-form and never snap.
*/

import { resolvedSpec, ScenarioConfig, UnitPlacement } from "./scenario.js";

export interface GridSettings {
  spacing: number;
  snap: boolean;
}

export interface GridShape {
  cols: number;
  rows: number;
}

/** Usable cell counts; 0 x 0 when the margin eats the whole field. */
export function gridShape(width: number, height: number, margin: number, spacing: number): GridShape {
  const usableW = width - 2 * margin;
  const usableH = height - 2 * margin;
  return {
    cols: Math.max(0, Math.floor(usableW / spacing + 1e-9)),
    rows: Math.max(0, Math.floor(usableH / spacing + 1e-9)),
  };
}

/** Lattice index of the nearest snap point, clamped onto the grid. */
export function snapIndex(
  value: number, margin: number, spacing: number, cells: number,
): number {
  const k = Math.round((value - margin) / spacing);
  return Math.min(Math.max(k, 0), cells);
}

export function snapPoint(
  point: [number, number],
  field: { width: number; height: number; margin: number },
  spacing: number,
): [number, number] {
  const shape = gridShape(field.width, field.height, field.margin, spacing);
  const i = snapIndex(point[0], field.margin, spacing, shape.cols);
  const j = snapIndex(point[1], field.margin, spacing, shape.rows);
  return [field.margin + i * spacing, field.margin + j * spacing];
}

/** Side length of the square slot block for a given occupied space. */
export function blockSide(spaceOccupied: number): number {
  return Math.max(1, Math.ceil(Math.sqrt(spaceOccupied)));
}

export interface Footprint {
  /** Lattice indices of every claimed slot. */
  slots: [number, number][];
  /** World position for the unit: the center of the block. */
  center: [number, number];
}

/**
 * Slots a unit would claim when placed at a world point.  The block
 * anchors at the snapped lattice point and grows toward +x/+y, shifted
 * back when it would run off the far edge of the grid.  Returns null
 * when the grid has no room for the block at all.
 */
export function footprintAt(
  point: [number, number],
  spaceOccupied: number,
  field: { width: number; height: number; margin: number },
  spacing: number,
): Footprint | null {
  const shape = gridShape(field.width, field.height, field.margin, spacing);
  const side = blockSide(spaceOccupied);
  if (side > shape.cols + 1 || side > shape.rows + 1) return null;
  let i = snapIndex(point[0], field.margin, spacing, shape.cols);
  let j = snapIndex(point[1], field.margin, spacing, shape.rows);
  i = Math.min(i, shape.cols + 1 - side);
  j = Math.min(j, shape.rows + 1 - side);
  const slots: [number, number][] = [];
  for (let dj = 0; dj < side; dj++) {
    for (let di = 0; di < side; di++) {
      slots.push([i + di, j + dj]);
    }
  }
  const half = ((side - 1) / 2) * spacing;
  return {
    slots,
    center: [field.margin + i * spacing + half, field.margin + j * spacing + half],
  };
}

function slotKey(i: number, j: number): string {
  return `${i},${j}`;
}

/**
 * Slots already claimed by the scenario's units, keyed "i,j".  Rebuilt
 * from unit positions, so hand-edited or loaded documents participate in
 * overlap checks the same as freshly placed ones.  Units that sit off
 * the lattice (loaded from files authored elsewhere) claim the slots
 * their block would cover after snapping.
 */
export function occupiedSlots(
  config: ScenarioConfig,
  spacing: number,
  except?: UnitPlacement,
): Set<string> {
  const out = new Set<string>();
  for (const u of config.units) {
    if (u === except) continue;
    const space = resolvedSpec(u).space_occupied;
    const side = blockSide(space);
    // Invert the center-of-block rule to recover the anchor point.
    const half = ((side - 1) / 2) * spacing;
    const fp = footprintAt(
      [u.position[0] - half, u.position[1] - half], space, config.field, spacing,
    );
    if (fp === null) continue;
    for (const [i, j] of fp.slots) out.add(slotKey(i, j));
  }
  return out;
}

export function footprintClear(footprint: Footprint, occupied: Set<string>): boolean {
  return footprint.slots.every(([i, j]) => !occupied.has(slotKey(i, j)));
}

export { slotKey };
