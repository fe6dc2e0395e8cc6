/*
  Render-only state: what the canvas shows, never what the file says.
  Kept apart from the document so toggling overlays cannot dirty it.
*/

import { EditorDocument } from "./document.js";

export interface ViewState {
  /** Sight button: draw every unit's view wedge, not just the hovered one. */
  sightAll: boolean;
  /** Unit index under the cursor, if any. */
  hoverUnit: number | null;
  /** Slots to flash after a rejected placement, with the flash deadline. */
  rejectedSlots: [number, number][];
  rejectedUntil: number;
}

export function initialView(): ViewState {
  return { sightAll: false, hoverUnit: null, rejectedSlots: [], rejectedUntil: 0 };
}

export function toggleSight(view: ViewState): ViewState {
  return { ...view, sightAll: !view.sightAll };
}

export function setHover(view: ViewState, unit: number | null): ViewState {
  return { ...view, hoverUnit: unit };
}

export function flashRejection(
  view: ViewState,
  slots: [number, number][],
  now: number,
  durationMs = 600,
): ViewState {
  return { ...view, rejectedSlots: slots, rejectedUntil: now + durationMs };
}

/** Wedges drawn this frame: all of them, or the hovered unit's. */
export function visibleWedges(view: ViewState, doc: EditorDocument): number[] {
  if (view.sightAll) return doc.config.units.map((_, i) => i);
  return view.hoverUnit === null ? [] : [view.hoverUnit];
}
